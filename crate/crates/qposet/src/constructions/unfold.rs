use std::collections::{BTreeSet, HashMap};

use super::{crowned_pushout, CrownedPushout};
use crate::error::{Error, Result};
use crate::poset::LabelledPoset;
use crate::primon::{monoid_iso, OrderIdeal, PrimePair, PrimitiveMonoid};

/// The tree `F(p)` of a maximal element together with `Ψ: F(p) → P↓p`.
///
/// Elements of `F(p)` are the saturated descending paths starting at `p`;
/// `Ψ` sends a path to its last vertex.
#[derive(Debug, Clone)]
pub struct FUnfolding {
    pub top: usize,
    /// `P↓p` with inherited labels.
    pub down: LabelledPoset,
    /// Index in `P` of each element of `P↓p`.
    pub down_map: Vec<usize>,
    pub f: LabelledPoset,
    /// `Ψ`, into `P↓p` indices.
    pub psi: Vec<usize>,
    /// The path (in `P↓p` indices, from the top) behind each element of `F(p)`.
    pub paths: Vec<Vec<usize>>,
    /// `S⁰ … S^r`, each poset given by its set of `F(p)` elements.
    pub stages: Vec<Vec<BTreeSet<usize>>>,
}

impl FUnfolding {
    pub fn height(&self) -> usize {
        self.stages.len() - 1
    }
}

fn paths_from(p: &LabelledPoset, top: usize) -> Vec<Vec<usize>> {
    fn rec(p: &LabelledPoset, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        let v = *path.last().unwrap();
        for &q in p.lower_covers(v) {
            path.push(q);
            rec(p, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, &mut vec![top], &mut out);
    out
}

/// Builds `F(p)` by the stage-wise merging of maximal chains.
pub fn build_f(p: &LabelledPoset, top: usize) -> Result<FUnfolding> {
    if !p.maximal().contains(&top) {
        return Err(Error::NotMaximal(p.name(top).to_string()));
    }
    let (down, down_map) = p.restrict(&p.down_set(top).members);
    let dtop = down_map.iter().position(|&x| x == top).unwrap();
    let paths = paths_from(&down, dtop);
    let id: HashMap<Vec<usize>, usize> =
        paths.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
    let r = down.height(dtop);

    let maximal: Vec<usize> = (0..paths.len())
        .filter(|&i| down.lower_covers(*paths[i].last().unwrap()).is_empty())
        .collect();
    let s0: Vec<BTreeSet<usize>> = maximal
        .iter()
        .map(|&i| (1..=paths[i].len()).map(|k| id[&paths[i][..k]]).collect())
        .collect();
    let mut stages = vec![s0];
    for i in 1..=r {
        let prev = stages.last().unwrap();
        // the spine is the common prefix of the maximal members
        let spine = |t: &BTreeSet<usize>| -> Vec<usize> {
            let mut tops = t.iter().map(|&x| &paths[x]).filter(|px| {
                !t.iter()
                    .any(|&y| paths[y].len() > px.len() && paths[y].starts_with(px))
            });
            let first = tops.next().unwrap().clone();
            tops.fold(first, |acc, px| {
                acc.iter()
                    .zip(px)
                    .take_while(|(a, b)| a == b)
                    .map(|(a, _)| *a)
                    .collect()
            })
        };
        // posets reaching p_{i-1} merge when they share p_i..p_r
        let need = r - i + 2;
        let mut next: Vec<BTreeSet<usize>> = Vec::new();
        let mut slot: HashMap<Vec<usize>, usize> = HashMap::new();
        for t in prev {
            let sp = spine(t);
            if sp.len() < need {
                next.push(t.clone());
                continue;
            }
            match slot.get(&sp[..need - 1]) {
                Some(&s) => next[s].extend(t.iter().copied()),
                None => {
                    slot.insert(sp[..need - 1].to_vec(), next.len());
                    next.push(t.clone());
                }
            }
        }
        stages.push(next);
    }
    if stages.last().unwrap().len() != 1 || stages.last().unwrap()[0].len() != paths.len() {
        return Err(Error::Invalid("chain merging did not end in a single poset".into()));
    }

    let mut fibre: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, x) in paths.iter().enumerate() {
        fibre.entry(*x.last().unwrap()).or_default().push(i);
    }
    let names: Vec<String> = paths
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let v = *x.last().unwrap();
            let fib = &fibre[&v];
            if fib.len() == 1 {
                down.name(v).to_string()
            } else {
                let k = fib.iter().position(|&j| j == i).unwrap() + 1;
                format!("{}~{}", down.name(v), k)
            }
        })
        .collect();
    let mut pairs = Vec::new();
    for (i, x) in paths.iter().enumerate() {
        for &q in down.lower_covers(*x.last().unwrap()) {
            let mut c = x.clone();
            c.push(q);
            pairs.push((id[&c], i));
        }
    }
    let f = LabelledPoset::from_covers(names, &pairs)?;
    let psi = paths.iter().map(|x| *x.last().unwrap()).collect();
    Ok(FUnfolding {
        top: dtop,
        down,
        down_map,
        f,
        psi,
        paths,
        stages,
    })
}

/// Checks the stated properties of `F(p)` and `Ψ`.
pub fn check_unfolding(u: &FUnfolding) -> Result<()> {
    let (f, d, psi) = (&u.f, &u.down, &u.psi);
    let fail = |m: &str| Err(Error::Invalid(format!("unfolding: {m}")));
    let img: BTreeSet<usize> = psi.iter().copied().collect();
    if img.len() != d.len() {
        return fail("Ψ is not surjective");
    }
    for a in 0..f.len() {
        for b in 0..f.len() {
            if f.leq(a, b) && !d.leq(psi[a], psi[b]) {
                return fail("Ψ is not order-preserving");
            }
        }
    }
    let ftop = f.maximal();
    if ftop.len() != 1 {
        return fail("F(p) has no greatest element");
    }
    let upset = |t: usize| -> BTreeSet<usize> { (0..f.len()).filter(|&x| f.leq(t, x)).collect() };
    let mut seen = HashMap::new();
    for t in 0..f.len() {
        let up = upset(t);
        if !up.iter().all(|&a| up.iter().all(|&b| f.leq(a, b) || f.leq(b, a))) {
            return fail("an interval [t, p] is not a chain");
        }
        let image: BTreeSet<usize> = up.iter().map(|&x| psi[x]).collect();
        if image.len() != up.len() || seen.insert(image, t).is_some() {
            return fail("Ψ fails to separate intervals [t, p]");
        }
        let lf: Vec<usize> = f.lower_covers(t).iter().map(|&q| psi[q]).collect();
        if lf != d.lower_covers(psi[t]) {
            return fail("Ψ does not biject lower covers");
        }
    }
    let fchains: BTreeSet<Vec<usize>> = f
        .maximal_chains(ftop[0])
        .into_iter()
        .map(|c| c.into_iter().map(|x| psi[x]).collect())
        .collect();
    let dchains: BTreeSet<Vec<usize>> = d.maximal_chains(u.top).into_iter().collect();
    if fchains != dchains || f.maximal_chains(ftop[0]).len() != dchains.len() {
        return fail("maximal chains do not correspond");
    }
    for stage in &u.stages {
        for t in stage {
            if !t.iter().all(|&x| u.paths[x][0] == u.top) {
                return fail("stage poset without top");
            }
        }
    }
    Ok(())
}

/// One gluing step and the resulting map to the target poset.
#[derive(Debug, Clone)]
pub struct GlueStep {
    pub pushout: CrownedPushout,
    pub psi: Vec<usize>,
    pub z1: OrderIdeal,
    pub z2: OrderIdeal,
    pub phi: Vec<(usize, usize)>,
}

/// Glues the ideal generated by `new` onto the one generated by `acc`
/// along the part where their images under `psi` overlap. `psi` must be
/// injective on each ideal and the two ideals must be disjoint.
pub fn glue_along(
    m: &PrimitiveMonoid,
    psi: &[usize],
    acc: &BTreeSet<usize>,
    new: &BTreeSet<usize>,
) -> Result<GlueStep> {
    let d_acc = m.ideal_from_set(acc);
    let d_new = m.ideal_from_set(new);
    if !d_acc.primes.is_disjoint(&d_new.primes) {
        return Err(Error::BadIdeal("glued ideals overlap".into()));
    }
    let inj = |d: &OrderIdeal| -> Result<HashMap<usize, usize>> {
        let mut back = HashMap::new();
        for &x in &d.primes {
            if back.insert(psi[x], x).is_some() {
                return Err(Error::Invalid("map is not injective on a glued ideal".into()));
            }
        }
        Ok(back)
    };
    let back_acc = inj(&d_acc)?;
    let back_new = inj(&d_new)?;
    let mut common: Vec<usize> = back_acc
        .keys()
        .filter(|v| back_new.contains_key(v))
        .copied()
        .collect();
    common.sort_unstable();
    let phi: Vec<(usize, usize)> = common.iter().map(|v| (back_acc[v], back_new[v])).collect();
    let z1 = OrderIdeal {
        primes: phi.iter().map(|&(a, _)| a).collect(),
    };
    let z2 = OrderIdeal {
        primes: phi.iter().map(|&(_, b)| b).collect(),
    };
    let cp = crowned_pushout(m, &z1, &z2, &phi)?;
    let mut new_psi = vec![0; cp.monoid.rank()];
    for (x, &y) in cp.pi.iter().enumerate() {
        new_psi[y] = psi[x];
    }
    Ok(GlueStep {
        pushout: cp,
        psi: new_psi,
        z1,
        z2,
        phi,
    })
}

/// One monoid `M^i(p)` of the reconstruction.
#[derive(Debug, Clone)]
pub struct ReconStage {
    pub monoid: PrimitiveMonoid,
    /// `Ψ_{ri}` on primes, into `P↓p` indices.
    pub psi: Vec<usize>,
    /// `Ψ_{i,i−1}` on primes (the identity for the first stage).
    pub from_prev: Vec<usize>,
    /// Crowned pushouts with a nonzero ideal used to reach this stage.
    pub pushouts: usize,
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub unfolding: FUnfolding,
    pub stages: Vec<ReconStage>,
    /// `M|p` built directly from `P↓p`.
    pub target: PrimitiveMonoid,
}

impl Reconstruction {
    /// `Ψ_{ji}` for `i ≤ j` as a prime map.
    pub fn map(&self, j: usize, i: usize) -> Vec<usize> {
        let mut f: Vec<usize> = (0..self.stages[i].monoid.rank()).collect();
        for k in i + 1..=j {
            f = f.iter().map(|&x| self.stages[k].from_prev[x]).collect();
        }
        f
    }

    pub fn result(&self) -> &PrimitiveMonoid {
        &self.stages.last().unwrap().monoid
    }
}

fn strictly_below(m: &PrimitiveMonoid, q: usize, p: usize) -> bool {
    q != p && m.pair().rel(q, p)
}

fn prime_depths(m: &PrimitiveMonoid) -> Vec<usize> {
    let n = m.rank();
    let mut order: Vec<usize> = (0..n).collect();
    // primes with more primes above them come later
    order.sort_by_key(|&q| (0..n).filter(|&p| strictly_below(m, p, q)).count());
    let mut depth = vec![0; n];
    for &q in order.iter().rev() {
        depth[q] = (0..n)
            .filter(|&p| strictly_below(m, q, p))
            .map(|p| depth[p] + 1)
            .max()
            .unwrap_or(0);
    }
    // the order above is only a heuristic; settle by iteration
    loop {
        let mut changed = false;
        for q in 0..n {
            let d = (0..n)
                .filter(|&p| strictly_below(m, q, p))
                .map(|p| depth[p] + 1)
                .max()
                .unwrap_or(0);
            if d != depth[q] {
                depth[q] = d;
                changed = true;
            }
        }
        if !changed {
            return depth;
        }
    }
}

fn prime_covers(m: &PrimitiveMonoid, p: usize) -> Vec<usize> {
    let n = m.rank();
    (0..n)
        .filter(|&q| strictly_below(m, q, p))
        .filter(|&q| !(0..n).any(|r| strictly_below(m, q, r) && strictly_below(m, r, p)))
        .collect()
}

fn prime_down(m: &PrimitiveMonoid, p: usize) -> BTreeSet<usize> {
    m.ideal_from_set(&BTreeSet::from([p])).primes
}

fn check_stage(rec: &Reconstruction, i: usize, r: usize) -> Result<()> {
    let st = &rec.stages[i];
    let m = &st.monoid;
    let d = &rec.unfolding.down;
    let depth = prime_depths(m);
    let fail = |what: &str| {
        Err(Error::Invalid(format!(
            "reconstruction stage {i}: property ({what}) fails"
        )))
    };
    let r = r as i64;
    let i_ = i as i64;
    // (ii) depth-truncated primes of M^0 and M^i agree
    let m0 = &rec.stages[0].monoid;
    let d0 = prime_depths(m0);
    let f = rec.map(i, 0);
    let lo: Vec<usize> = (0..m0.rank()).filter(|&x| d0[x] as i64 <= r - i_).collect();
    let hi: BTreeSet<usize> = (0..m.rank()).filter(|&x| depth[x] as i64 <= r - i_).collect();
    let img: BTreeSet<usize> = lo.iter().map(|&x| f[x]).collect();
    if img != hi || img.len() != lo.len() {
        return fail("ii");
    }
    for &a in &lo {
        for &b in &lo {
            if m0.pair().rel(a, b) != m.pair().rel(f[a], f[b]) {
                return fail("ii");
            }
        }
    }
    // (iii) ↓q maps isomorphically for deep enough q
    for q in (0..m.rank()).filter(|&q| depth[q] as i64 >= r - i_ - 1) {
        let dq = prime_down(m, q);
        let img: BTreeSet<usize> = dq.iter().map(|&x| st.psi[x]).collect();
        if img.len() != dq.len() || img != d.down_set(st.psi[q]).members {
            return fail("iii");
        }
        for &a in &dq {
            for &b in &dq {
                if m.pair().rel(a, b) != d.lt(st.psi[a], st.psi[b]) {
                    return fail("iii");
                }
            }
        }
    }
    // (iv) incomparable shallow primes generate disjoint ideals
    let shallow: Vec<usize> = (0..m.rank()).filter(|&q| (depth[q] as i64) < r - i_).collect();
    for &a in &shallow {
        for &b in &shallow {
            if a < b
                && !m.pair().rel(a, b)
                && !m.pair().rel(b, a)
                && !prime_down(m, a).is_disjoint(&prime_down(m, b))
            {
                return fail("iv");
            }
        }
    }
    // Ψ_{ri} = Ψ_{rj} ∘ Ψ_{ji}
    for j in i + 1..rec.stages.len() {
        let g = rec.map(j, i);
        if (0..m.rank()).any(|x| rec.stages[j].psi[g[x]] != st.psi[x]) {
            return fail("composition");
        }
    }
    Ok(())
}

/// Rebuilds `M|p` from `M(F(p))` by crowned pushouts, one depth level at a
/// time, validating each stage.
pub fn reconstruct_down(p: &LabelledPoset, top: usize) -> Result<Reconstruction> {
    let unfolding = build_f(p, top)?;
    check_unfolding(&unfolding)?;
    let r = unfolding.height();
    let m0 = PrimitiveMonoid::from_poset(&unfolding.f);
    let label = |u: &FUnfolding, psi: &[usize], parent: usize, c: usize| {
        u.down.cover_label(psi[parent], psi[c]).unwrap_or(usize::MAX)
    };
    let mut stages = vec![ReconStage {
        from_prev: (0..m0.rank()).collect(),
        psi: unfolding.psi.clone(),
        monoid: m0,
        pushouts: 0,
    }];
    for i in 0..r.saturating_sub(1) {
        let cur = stages.last().unwrap();
        let mut m = cur.monoid.clone();
        let mut psi = cur.psi.clone();
        let mut step: Vec<usize> = (0..m.rank()).collect();
        let mut count = 0;
        let depth = prime_depths(&m);
        let qs: Vec<usize> = (0..m.rank()).filter(|&q| depth[q] == r - i - 2).collect();
        for q0 in qs {
            let q = step[q0];
            let mut covers = prime_covers(&m, q);
            covers.sort_by_key(|&c| (label(&unfolding, &psi, q, c), c));
            let mut tracked = covers.clone();
            for u in 1..covers.len() {
                let acc: BTreeSet<usize> = tracked[..u].iter().copied().collect();
                let new = BTreeSet::from([tracked[u]]);
                let g = glue_along(&m, &psi, &acc, &new)?;
                if !g.phi.is_empty() {
                    count += 1;
                }
                step = step.iter().map(|&x| g.pushout.pi[x]).collect();
                tracked = tracked.iter().map(|&x| g.pushout.pi[x]).collect();
                m = g.pushout.monoid;
                psi = g.psi;
            }
        }
        stages.push(ReconStage {
            monoid: m,
            psi,
            from_prev: step,
            pushouts: count,
        });
    }
    if r >= 1 {
        let last = stages.last().unwrap();
        let names: Vec<String> = last
            .psi
            .iter()
            .map(|&v| unfolding.down.name(v).to_string())
            .collect();
        let pair = last
            .monoid
            .pair()
            .renamed(names)
            .map_err(|_| Error::Invalid("last stage does not biject onto P↓p".into()))?;
        stages.push(ReconStage {
            monoid: PrimitiveMonoid::from_pair(pair),
            psi: last.psi.clone(),
            from_prev: (0..last.monoid.rank()).collect(),
            pushouts: 0,
        });
    }
    let rec = Reconstruction {
        target: PrimitiveMonoid::from_poset(&unfolding.down),
        unfolding,
        stages,
    };
    for i in 0..rec.stages.len() {
        check_stage(&rec, i, r)?;
    }
    Ok(rec)
}

/// `M(P)` rebuilt from the reconstructions of all `M|p`, `p` maximal.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub reconstructions: Vec<Reconstruction>,
    /// `∏ M|p` with primes named `v@p`.
    pub product: PrimitiveMonoid,
    pub steps: Vec<GlueStep>,
    /// The glued monoid, primes renamed to elements of `P` when possible.
    pub monoid: PrimitiveMonoid,
    /// Element of `P` behind each prime of `monoid`.
    pub psi: Vec<usize>,
    /// Isomorphism to `from_poset(P)`, if one exists.
    pub iso: Option<Vec<usize>>,
}

impl Assembly {
    /// True when `psi` itself is an isomorphism onto the poset's monoid.
    pub fn psi_is_iso(&self, p: &LabelledPoset) -> bool {
        let m = &self.monoid;
        let img: BTreeSet<usize> = self.psi.iter().copied().collect();
        img.len() == p.len()
            && m.rank() == p.len()
            && (0..m.rank()).all(|a| {
                (0..m.rank()).all(|b| m.pair().rel(a, b) == p.lt(self.psi[a], self.psi[b]))
            })
    }
}

/// Reconstructs each `M|p` and glues the copies one maximal element at a
/// time along their common lower parts.
pub fn assemble(p: &LabelledPoset) -> Result<Assembly> {
    let maxima = p.maximal();
    let mut reconstructions = Vec::new();
    let mut names = Vec::new();
    let mut psi = Vec::new();
    let mut blocks: Vec<BTreeSet<usize>> = Vec::new();
    let mut rel_blocks = Vec::new();
    for &top in &maxima {
        let rec = reconstruct_down(p, top)?;
        let last = rec.stages.last().unwrap();
        let start = psi.len();
        for &v in &last.psi {
            let pv = rec.unfolding.down_map[v];
            names.push(format!("{}@{}", p.name(pv), p.name(top)));
            psi.push(pv);
        }
        blocks.push((start..psi.len()).collect());
        rel_blocks.push(last.monoid.pair().clone());
        reconstructions.push(rec);
    }
    let n = psi.len();
    let mut rel = vec![vec![false; n]; n];
    for (b, pair) in blocks.iter().zip(&rel_blocks) {
        let idx: Vec<usize> = b.iter().copied().collect();
        for (x, &a) in idx.iter().enumerate() {
            for (y, &c) in idx.iter().enumerate() {
                rel[a][c] = pair.rel(x, y);
            }
        }
    }
    let product = PrimitiveMonoid::from_pair(PrimePair::new(names, rel)?);
    let mut m = product.clone();
    let mut steps = Vec::new();
    for u in 1..blocks.len() {
        let acc: BTreeSet<usize> = blocks[..u].iter().flatten().copied().collect();
        let g = glue_along(&m, &psi, &acc, &blocks[u])?;
        for b in blocks.iter_mut() {
            *b = b.iter().map(|&x| g.pushout.pi[x]).collect();
        }
        m = g.pushout.monoid.clone();
        psi = g.psi.clone();
        steps.push(g);
    }
    let renamed = {
        let names: Vec<String> = psi.iter().map(|&v| p.name(v).to_string()).collect();
        match m.pair().renamed(names) {
            Ok(pair) => PrimitiveMonoid::from_pair(pair),
            Err(_) => m,
        }
    };
    let iso = monoid_iso(&renamed, &PrimitiveMonoid::from_poset(p));
    Ok(Assembly {
        reconstructions,
        product,
        steps,
        monoid: renamed,
        psi,
        iso,
    })
}
