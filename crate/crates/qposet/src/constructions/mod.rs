//! Pullbacks and pushouts of primitive monoids, and the unfolding pipeline
//! that rebuilds `M(P)` from trees of chains.

mod unfold;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::primon::{
    monoid_iso, CongruenceOracle, MonElem, OrderIdeal, PrimePair, PrimitiveMonoid,
};

pub use unfold::{
    assemble, build_f, check_unfolding, glue_along, reconstruct_down, Assembly, FUnfolding,
    GlueStep, ReconStage, Reconstruction,
};

/// Result of a crowned pushout `(P, I, I′, φ)`.
#[derive(Debug, Clone)]
pub struct CrownedPushout {
    pub monoid: PrimitiveMonoid,
    /// Prime of `P` to prime of `Q`; both `i` and `φ(i)` go to the image of `i`.
    pub pi: Vec<usize>,
    /// The order-ideal of `Q` generated by the image of `I`.
    pub z: OrderIdeal,
}

impl CrownedPushout {
    pub fn project(&self, p: &PrimitiveMonoid, x: &MonElem) -> MonElem {
        let f: Vec<Option<usize>> = self.pi.iter().map(|&i| Some(i)).collect();
        p.map_elem(&self.monoid, &f, x)
    }
}

/// Checks that `phi` is a ◁-isomorphism between the prime sets of two
/// order-ideals of `m`. Returns it as a lookup table.
fn check_ideal_iso(
    m: &PrimitiveMonoid,
    i: &OrderIdeal,
    j: &OrderIdeal,
    phi: &[(usize, usize)],
) -> Result<BTreeMap<usize, usize>> {
    for id in [i, j] {
        if m.ideal_from_set(&id.primes) != *id {
            return Err(Error::BadIdeal("prime set is not ◁-lower".into()));
        }
    }
    let map: BTreeMap<usize, usize> = phi.iter().copied().collect();
    let dom: BTreeSet<usize> = map.keys().copied().collect();
    let img: BTreeSet<usize> = map.values().copied().collect();
    if map.len() != phi.len() || dom != i.primes || img != j.primes || img.len() != dom.len() {
        return Err(Error::BadIdeal("map is not a bijection between the ideals".into()));
    }
    let pair = m.pair();
    for (&a, &fa) in &map {
        for (&b, &fb) in &map {
            if pair.rel(a, b) != pair.rel(fa, fb) {
                return Err(Error::BadIdeal(format!(
                    "map does not respect ◁ on {} and {}",
                    pair.name(a),
                    pair.name(b)
                )));
            }
        }
    }
    Ok(map)
}

/// Crowned pushout of `(P, I, I′, φ)` with `φ` given as prime pairs
/// `(i, φ(i))`. The primes of `Q` are those of `P` outside `I′`.
pub fn crowned_pushout(
    p: &PrimitiveMonoid,
    i: &OrderIdeal,
    i2: &OrderIdeal,
    phi: &[(usize, usize)],
) -> Result<CrownedPushout> {
    if !i.primes.is_disjoint(&i2.primes) {
        return Err(Error::BadIdeal("the two ideals share primes".into()));
    }
    let map = check_ideal_iso(p, i, i2, phi)?;
    let pair = p.pair();
    let n = p.rank();
    let keep: Vec<usize> = (0..n).filter(|x| !i2.primes.contains(x)).collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let mut rel: Vec<Vec<bool>> = keep
        .iter()
        .map(|&a| keep.iter().map(|&b| pair.rel(a, b)).collect())
        .collect();
    for (&a, &fa) in &map {
        for &q in &keep {
            if !i.primes.contains(&q) && pair.rel(fa, q) {
                rel[pos[&a]][pos[&q]] = true;
            }
        }
    }
    let names = keep.iter().map(|&x| pair.name(x).to_string()).collect();
    let q = PrimitiveMonoid::from_pair(PrimePair::closed(names, rel)?);
    let inv: HashMap<usize, usize> = map.iter().map(|(&a, &b)| (b, a)).collect();
    let pi = (0..n)
        .map(|x| match inv.get(&x) {
            Some(a) => pos[a],
            None => pos[&x],
        })
        .collect();
    let z = OrderIdeal {
        primes: i.primes.iter().map(|x| pos[x]).collect(),
    };
    Ok(CrownedPushout { monoid: q, pi, z })
}

/// A disagreement found by [`verify_coequalizer`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoequalizerFailure {
    /// `π(x) ≠ π(φ(x))` for an element of `I`.
    NotCoequalizing(MonElem),
    /// The words are congruent in `P/∼` but not equal in `Q`, or the reverse.
    KernelMismatch {
        x: Vec<u32>,
        y: Vec<u32>,
        congruent: bool,
    },
}

/// Extra degree allowed for intermediate words in the congruence closure.
pub const CLOSURE_SLACK: u32 = 2;

/// Checks that `π: P → Q` coequalizes `I ⇉ P` and that its kernel is the
/// congruence generated by `i ∼ φ(i)`, on words of degree at most `bound`.
pub fn verify_coequalizer(
    p: &PrimitiveMonoid,
    i: &OrderIdeal,
    phi: &[(usize, usize)],
    q: &PrimitiveMonoid,
    pi: &[usize],
    bound: u32,
) -> std::result::Result<(), CoequalizerFailure> {
    let f: Vec<Option<usize>> = pi.iter().map(|&x| Some(x)).collect();
    let phi_map: Vec<Option<usize>> = (0..p.rank())
        .map(|x| {
            phi.iter()
                .find(|(a, _)| *a == x)
                .map(|&(_, b)| b)
        })
        .collect();
    for x in p.elements_up_to(bound) {
        if !i.contains(&x) {
            continue;
        }
        let fx = p.map_elem(p, &phi_map, &x);
        if p.map_elem(q, &f, &x) != p.map_elem(q, &f, &fx) {
            return Err(CoequalizerFailure::NotCoequalizing(x));
        }
    }
    let n = p.rank();
    let mut rels = p.presentation();
    for &(a, b) in phi {
        let mut l = vec![0; n];
        l[a] = 1;
        let mut r = vec![0; n];
        r[b] = 1;
        rels.push((l, r));
    }
    let oracle = CongruenceOracle::new(n, &rels, bound, bound + CLOSURE_SLACK);
    let words = crate::primon::congruence::words_up_to(n, bound);
    let images: Vec<MonElem> = words
        .iter()
        .map(|w| p.map_elem(q, &f, &p.reduce_unchecked(w)))
        .collect();
    for (a, x) in words.iter().enumerate() {
        for (b, y) in words.iter().enumerate().skip(a + 1) {
            let congruent = oracle.equal(x, y).expect("within bound");
            if congruent != (images[a] == images[b]) {
                return Err(CoequalizerFailure::KernelMismatch {
                    x: x.clone(),
                    y: y.clone(),
                    congruent,
                });
            }
        }
    }
    Ok(())
}

fn fresh_name(taken: &BTreeSet<String>, base: &str) -> String {
    let mut s = base.to_string();
    while taken.contains(&s) {
        s.push('\'');
    }
    s
}

/// Amalgamated pushout of `M` and `N` along `I ≅ φ(I)`.
#[derive(Debug, Clone)]
pub struct Amalgam {
    pub monoid: PrimitiveMonoid,
    pub iota1: Vec<usize>,
    pub iota2: Vec<usize>,
    /// The ideal `ι₁(I) = ι₂(φ(I))`.
    pub glued: OrderIdeal,
}

/// Glues `M` and `N` along the ideal `I` of `M` and its image under the
/// prime map `phi: P(I) → P(N)`. Built as the crowned pushout of
/// `(M × N, I × 0, 0 × φ(I), φ)`.
pub fn amalgam_pushout(
    m: &PrimitiveMonoid,
    n: &PrimitiveMonoid,
    i: &OrderIdeal,
    phi: &[(usize, usize)],
) -> Result<Amalgam> {
    let mut taken: BTreeSet<String> = m.pair().names().iter().cloned().collect();
    let mut names = Vec::new();
    for nm in n.pair().names() {
        let f = fresh_name(&taken, nm);
        taken.insert(f.clone());
        names.push(f);
    }
    let n_renamed = n.pair().renamed(names)?;
    let prod = PrimitiveMonoid::from_pair(m.pair().disjoint_union(&n_renamed)?);
    let off = m.rank();
    let i2 = OrderIdeal {
        primes: phi.iter().map(|&(_, b)| b + off).collect(),
    };
    if n.ideal_from_set(&phi.iter().map(|&(_, b)| b).collect()).primes.len() != phi.len() {
        return Err(Error::BadIdeal("image of the map is not an order-ideal of N".into()));
    }
    let shifted: Vec<(usize, usize)> = phi.iter().map(|&(a, b)| (a, b + off)).collect();
    let cp = crowned_pushout(&prod, i, &i2, &shifted)?;
    Ok(Amalgam {
        iota1: (0..off).map(|x| cp.pi[x]).collect(),
        iota2: (0..n.rank()).map(|x| cp.pi[x + off]).collect(),
        glued: cp.z.clone(),
        monoid: cp.monoid,
    })
}

/// Pullback of `M₁ → S ← M₂` with `S ≅ M₁/N₁ ≅ M₂/N₂`.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub monoid: PrimitiveMonoid,
    /// Projection to `M₁` as a prime map (`None` sends the prime to 0).
    pub pi1: Vec<Option<usize>>,
    pub pi2: Vec<Option<usize>>,
    /// `S`, realised as `M₁/N₁`.
    pub s: PrimitiveMonoid,
    /// `M₁ → S` and `M₂ → S` as prime maps.
    pub q1: Vec<Option<usize>>,
    pub q2: Vec<Option<usize>>,
    /// Primes forming the ideal `N ≅ N₁ × N₂`.
    pub n_ideal: OrderIdeal,
}

fn check_pullback_hypothesis(m: &PrimitiveMonoid, n: &OrderIdeal) -> Result<()> {
    if m.ideal_from_set(&n.primes) != *n {
        return Err(Error::BadIdeal("N is not an order-ideal".into()));
    }
    let pair = m.pair();
    for &a in &n.primes {
        for q in (0..m.rank()).filter(|q| !n.primes.contains(q)) {
            if !pair.rel(a, q) {
                return Err(Error::Hypothesis(format!(
                    "{} ◁ {} does not hold",
                    pair.name(a),
                    pair.name(q)
                )));
            }
        }
    }
    Ok(())
}

/// Pullback of `M₁ → M₁/N₁ ≅ M₂/N₂ ← M₂`, the isomorphism found by search.
pub fn pullback_primitive(
    m1: &PrimitiveMonoid,
    n1: &OrderIdeal,
    m2: &PrimitiveMonoid,
    n2: &OrderIdeal,
) -> Result<Pullback> {
    let (s1, _) = m1.quotient(n1);
    let (s2, _) = m2.quotient(n2);
    let iso = monoid_iso(&s1, &s2)
        .ok_or_else(|| Error::Hypothesis("the quotients are not isomorphic".into()))?;
    pullback_primitive_with(m1, n1, m2, n2, &iso)
}

/// Same as [`pullback_primitive`] with `iso` mapping primes of `M₁/N₁` to
/// primes of `M₂/N₂`.
pub fn pullback_primitive_with(
    m1: &PrimitiveMonoid,
    n1: &OrderIdeal,
    m2: &PrimitiveMonoid,
    n2: &OrderIdeal,
    iso: &[usize],
) -> Result<Pullback> {
    check_pullback_hypothesis(m1, n1)?;
    check_pullback_hypothesis(m2, n2)?;
    let (s1, proj1) = m1.quotient(n1);
    let (s2, proj2) = m2.quotient(n2);
    if iso.len() != s1.rank() || s1.rank() != s2.rank() {
        return Err(Error::Hypothesis("the quotients have different ranks".into()));
    }
    for a in 0..s1.rank() {
        for b in 0..s1.rank() {
            if s1.pair().rel(a, b) != s2.pair().rel(iso[a], iso[b]) {
                return Err(Error::Hypothesis("supplied map is not an isomorphism".into()));
            }
        }
    }
    // primes of M_i sorted into the S part and the N part
    let s_in_m1: Vec<usize> = (0..m1.rank()).filter(|x| !n1.primes.contains(x)).collect();
    let s_in_m2: Vec<usize> = (0..m2.rank()).filter(|x| !n2.primes.contains(x)).collect();
    let n1v: Vec<usize> = n1.primes.iter().copied().collect();
    let n2v: Vec<usize> = n2.primes.iter().copied().collect();
    let (ns, k1, k2) = (s_in_m1.len(), n1v.len(), n2v.len());
    let total = ns + k1 + k2;

    let mut taken = BTreeSet::new();
    let mut names = Vec::with_capacity(total);
    for &x in s_in_m1.iter() {
        names.push(m1.pair().name(x).to_string());
    }
    for &x in &n1v {
        names.push(m1.pair().name(x).to_string());
    }
    for &x in &n2v {
        names.push(m2.pair().name(x).to_string());
    }
    for nm in names.iter_mut() {
        let f = fresh_name(&taken, nm);
        taken.insert(f.clone());
        *nm = f;
    }

    let mut rel = vec![vec![false; total]; total];
    for a in 0..ns {
        for b in 0..ns {
            rel[a][b] = s1.pair().rel(a, b);
        }
    }
    for (a, &x) in n1v.iter().enumerate() {
        for (b, &y) in n1v.iter().enumerate() {
            rel[ns + a][ns + b] = m1.pair().rel(x, y);
        }
    }
    for (a, &x) in n2v.iter().enumerate() {
        for (b, &y) in n2v.iter().enumerate() {
            rel[ns + k1 + a][ns + k1 + b] = m2.pair().rel(x, y);
        }
    }
    for row in rel.iter_mut().skip(ns) {
        for cell in row.iter_mut().take(ns) {
            *cell = true;
        }
    }
    let monoid = PrimitiveMonoid::from_pair(PrimePair::new(names, rel)?);

    // s_in_m1[k] is the prime of M1 mapping to prime k of s1
    debug_assert!(s_in_m1.iter().enumerate().all(|(k, &x)| proj1.image[x] == Some(k)));
    let mut s2_to_m2 = vec![0; s2.rank()];
    for &x in &s_in_m2 {
        s2_to_m2[proj2.image[x].expect("outside N2")] = x;
    }
    let mut pi1 = vec![None; total];
    let mut pi2 = vec![None; total];
    for k in 0..ns {
        pi1[k] = Some(s_in_m1[k]);
        pi2[k] = Some(s2_to_m2[iso[k]]);
    }
    for (a, &x) in n1v.iter().enumerate() {
        pi1[ns + a] = Some(x);
    }
    for (a, &x) in n2v.iter().enumerate() {
        pi2[ns + k1 + a] = Some(x);
    }
    // M2 → S through the inverse of iso
    let mut inv = vec![0; s1.rank()];
    for (k, &j) in iso.iter().enumerate() {
        inv[j] = k;
    }
    let q2 = proj2.image.iter().map(|o| o.map(|j| inv[j])).collect();
    Ok(Pullback {
        monoid,
        pi1,
        pi2,
        s: s1,
        q1: proj1.image,
        q2,
        n_ideal: OrderIdeal {
            primes: (ns..total).collect(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PullbackFailure {
    NotHomomorphism { side: u8, x: MonElem, y: MonElem },
    NotCommuting(MonElem),
    Preimages { x1: MonElem, x2: MonElem, count: usize },
}

/// Checks the projections are homomorphisms agreeing over `S`, and that
/// every pair `(x₁, x₂)` of elements of size at most `bound` with the same
/// image in `S` has exactly one preimage.
pub fn verify_pullback_universal(
    pb: &Pullback,
    m1: &PrimitiveMonoid,
    m2: &PrimitiveMonoid,
    bound: u32,
) -> std::result::Result<(), PullbackFailure> {
    let p = &pb.monoid;
    let near = p.elements_up_to(bound);
    for x in &near {
        for y in &near {
            let xy = p.add(x, y);
            for (side, (pi, m)) in [(&pb.pi1, m1), (&pb.pi2, m2)].into_iter().enumerate() {
                let lhs = p.map_elem(m, pi, &xy);
                let rhs = m.add(&p.map_elem(m, pi, x), &p.map_elem(m, pi, y));
                if lhs != rhs {
                    return Err(PullbackFailure::NotHomomorphism {
                        side: side as u8 + 1,
                        x: x.clone(),
                        y: y.clone(),
                    });
                }
            }
        }
        let a = m1.map_elem(&pb.s, &pb.q1, &p.map_elem(m1, &pb.pi1, x));
        let b = m2.map_elem(&pb.s, &pb.q2, &p.map_elem(m2, &pb.pi2, x));
        if a != b {
            return Err(PullbackFailure::NotCommuting(x.clone()));
        }
    }
    let mut fibres: HashMap<(MonElem, MonElem), usize> = HashMap::new();
    for y in p.elements_up_to(2 * bound) {
        let key = (p.map_elem(m1, &pb.pi1, &y), p.map_elem(m2, &pb.pi2, &y));
        *fibres.entry(key).or_default() += 1;
    }
    let e2 = m2.elements_up_to(bound);
    for x1 in m1.elements_up_to(bound) {
        let s1 = m1.map_elem(&pb.s, &pb.q1, &x1);
        for x2 in &e2 {
            if m2.map_elem(&pb.s, &pb.q2, x2) != s1 {
                continue;
            }
            let count = fibres.get(&(x1.clone(), x2.clone())).copied().unwrap_or(0);
            if count != 1 {
                return Err(PullbackFailure::Preimages {
                    x1,
                    x2: x2.clone(),
                    count,
                });
            }
        }
    }
    Ok(())
}
