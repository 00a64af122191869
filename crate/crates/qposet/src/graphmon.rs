//! Graph monoids `M(E)` of finite quivers and their hereditary saturated
//! vertex sets.
//!
//! Equality in `M(E)` is only decided for words within a degree bound.

use std::collections::{BTreeSet, HashMap};

use crate::dsl::{Cursor, Tok};
use crate::error::{Error, Result};
use crate::poset::{Arrow, Quiver};
use crate::primon::congruence::words_up_to;
use crate::primon::CongruenceOracle;

/// Parses `vertices <id>+ ; arrows ([<name> :] <id> -> <id>)+`.
///
/// Unnamed arrows are called `e1`, `e2`, ... in order of appearance.
pub fn parse_quiver(text: &str) -> Result<Quiver> {
    let mut cur = Cursor::new(text)?;
    let mut vertices: Vec<String> = Vec::new();
    let mut raw: Vec<(Option<String>, String, String)> = Vec::new();
    let mut seen = false;
    while !cur.at_end() {
        if cur.eat_punct(";") {
            continue;
        }
        let kw = cur.expect_id()?;
        match kw.as_str() {
            "vertices" => {
                seen = true;
                while let Some(Tok::Id(_)) = cur.peek() {
                    vertices.push(cur.expect_id()?);
                }
            }
            "arrows" => {
                while let Some(Tok::Id(_)) = cur.peek() {
                    let first = cur.expect_id()?;
                    let (name, src) = if cur.eat_punct(":") {
                        (Some(first), cur.expect_id()?)
                    } else {
                        (None, first)
                    };
                    cur.expect_punct("->")?;
                    let dst = cur.expect_id()?;
                    raw.push((name, src, dst));
                }
            }
            other => return Err(cur.error(format!("unknown section `{other}`"))),
        }
        if !cur.at_end() && !cur.is_punct(";") {
            return Err(cur.error("expected `;`".into()));
        }
    }
    if !seen {
        return Err(cur.error("missing `vertices` section".into()));
    }
    let mut index = HashMap::new();
    for (i, v) in vertices.iter().enumerate() {
        if index.insert(v.clone(), i).is_some() {
            return Err(Error::Duplicate(v.clone()));
        }
    }
    let look = |s: &str| index.get(s).copied().ok_or_else(|| Error::Unknown(s.to_string()));
    let mut arrows = Vec::new();
    let mut names = BTreeSet::new();
    for (k, (name, s, r)) in raw.into_iter().enumerate() {
        let name = name.unwrap_or_else(|| format!("e{}", k + 1));
        if !names.insert(name.clone()) {
            return Err(Error::Duplicate(name));
        }
        arrows.push(Arrow {
            name,
            source: look(&s)?,
            range: look(&r)?,
        });
    }
    Ok(Quiver { vertices, arrows })
}

/// The relations `v = Σ_{s(e)=v} r(e)` of a quiver, one per emitting vertex.
#[derive(Debug, Clone)]
pub struct GraphMonoid {
    pub quiver: Quiver,
    pub relations: Vec<(Vec<u32>, Vec<u32>)>,
}

pub fn graph_monoid(e: &Quiver) -> GraphMonoid {
    let n = e.vertices.len();
    let mut relations = Vec::new();
    for v in 0..n {
        let mut rhs = vec![0; n];
        let mut emits = false;
        for a in e.out_arrows(v) {
            rhs[a.range] += 1;
            emits = true;
        }
        if emits {
            let mut lhs = vec![0; n];
            lhs[v] = 1;
            relations.push((lhs, rhs));
        }
    }
    GraphMonoid {
        quiver: e.clone(),
        relations,
    }
}

impl GraphMonoid {
    pub fn rank(&self) -> usize {
        self.quiver.vertices.len()
    }

    /// Equality decider for words of degree at most `bound`, exploring
    /// intermediate words up to `bound + slack`.
    pub fn decider(&self, bound: u32, slack: u32) -> CongruenceOracle {
        CongruenceOracle::new(self.rank(), &self.relations, bound, bound + slack)
    }

    /// A word from vertex names, e.g. `["v1", "v0"]`.
    pub fn word(&self, names: &[&str]) -> Result<Vec<u32>> {
        let mut w = vec![0; self.rank()];
        for nm in names {
            let v = self
                .quiver
                .vertex(nm)
                .ok_or_else(|| Error::Unknown(nm.to_string()))?;
            w[v] += 1;
        }
        Ok(w)
    }
}

pub fn is_hereditary(e: &Quiver, h: &BTreeSet<usize>) -> bool {
    e.arrows
        .iter()
        .all(|a| !h.contains(&a.source) || h.contains(&a.range))
}

/// Every emitting vertex whose arrows all land in `h` lies in `h`. Vertices
/// emitting nothing are not constrained.
pub fn is_saturated(e: &Quiver, h: &BTreeSet<usize>) -> bool {
    (0..e.vertices.len()).all(|v| {
        let mut out = e.out_arrows(v).peekable();
        out.peek().is_none() || h.contains(&v) || !out.all(|a| h.contains(&a.range))
    })
}

/// The smallest saturated superset.
pub fn saturate(e: &Quiver, h: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut h = h.clone();
    loop {
        let add: Vec<usize> = (0..e.vertices.len())
            .filter(|v| !h.contains(v))
            .filter(|&v| {
                let mut out = e.out_arrows(v).peekable();
                out.peek().is_some() && out.all(|a| h.contains(&a.range))
            })
            .collect();
        if add.is_empty() {
            return h;
        }
        h.extend(add);
    }
}

/// All hereditary saturated vertex sets, ordered by size then members.
pub fn hereditary_saturated(e: &Quiver) -> Vec<BTreeSet<usize>> {
    let n = e.vertices.len();
    assert!(n < 32);
    let mut out: Vec<BTreeSet<usize>> = (0u32..1 << n)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .filter(|h| is_hereditary(e, h) && is_saturated(e, h))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn sub_quiver(e: &Quiver, keep: &BTreeSet<usize>, arrow_ok: impl Fn(&Arrow) -> bool) -> Quiver {
    let ids: Vec<usize> = keep.iter().copied().collect();
    let pos: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    Quiver {
        vertices: ids.iter().map(|&v| e.vertices[v].clone()).collect(),
        arrows: e
            .arrows
            .iter()
            .filter(|a| arrow_ok(a) && pos.contains_key(&a.source) && pos.contains_key(&a.range))
            .map(|a| Arrow {
                name: a.name.clone(),
                source: pos[&a.source],
                range: pos[&a.range],
            })
            .collect(),
    }
}

/// `E/H`: vertices outside `H`, arrows with range outside `H`.
pub fn quotient_graph(e: &Quiver, h: &BTreeSet<usize>) -> Quiver {
    let keep = (0..e.vertices.len()).filter(|v| !h.contains(v)).collect();
    sub_quiver(e, &keep, |a| !h.contains(&a.range))
}

/// `E_H`: vertices of `H`, arrows with source in `H`.
pub fn restrict_graph(e: &Quiver, h: &BTreeSet<usize>) -> Quiver {
    sub_quiver(e, h, |a| h.contains(&a.source))
}

/// `E_r`: vertices `v0..vr`, and for each `i ≥ 1` a loop `a_i` at `v_i`
/// and an arrow `b_i: v_i → v_{i−1}`.
pub fn build_er(r: usize) -> Quiver {
    let vertices = (0..=r).map(|i| format!("v{i}")).collect();
    let mut arrows = Vec::new();
    for i in 1..=r {
        arrows.push(Arrow {
            name: format!("a{i}"),
            source: i,
            range: i,
        });
        arrows.push(Arrow {
            name: format!("b{i}"),
            source: i,
            range: i - 1,
        });
    }
    Quiver { vertices, arrows }
}

/// If `e` is `E_r` up to renaming, returns `r` and the vertex order
/// `v0, v1, ...`.
pub fn match_er(e: &Quiver) -> Option<(usize, Vec<usize>)> {
    let n = e.vertices.len();
    if n == 0 {
        return None;
    }
    let sinks: Vec<usize> = (0..n).filter(|&v| e.out_arrows(v).next().is_none()).collect();
    if sinks.len() != 1 {
        return None;
    }
    let mut order = vec![sinks[0]];
    while order.len() < n {
        let last = *order.last().unwrap();
        let next: Vec<usize> = (0..n)
            .filter(|&v| v != last && e.out_arrows(v).any(|a| a.range == last))
            .collect();
        if next.len() != 1 || order.contains(&next[0]) {
            return None;
        }
        order.push(next[0]);
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut got: Vec<(usize, usize)> = e.arrows.iter().map(|a| (pos[a.source], pos[a.range])).collect();
    let mut want: Vec<(usize, usize)> = build_er(n - 1)
        .arrows
        .iter()
        .map(|a| (a.source, a.range))
        .collect();
    got.sort_unstable();
    want.sort_unstable();
    (got == want).then_some((n - 1, order))
}

/// Compares bounded equality in `M(e)` with the monoid of the chain
/// `p0 < ... < pr`, identifying `order[i]` with `p_i`. Returns a pair of
/// words on which the two disagree.
pub fn check_quiver_equals_chain(
    e: &Quiver,
    order: &[usize],
    bound: u32,
) -> std::result::Result<(), (Vec<u32>, Vec<u32>)> {
    let n = order.len();
    let gm = graph_monoid(e);
    let slack = n as u32 + 1;
    let g = gm.decider(bound, slack);
    // chain relations p_j + p_i = p_j for i < j, in the given vertex order
    let mut rels = Vec::new();
    for j in 0..n {
        for i in 0..j {
            let mut l = vec![0; n];
            l[order[i]] += 1;
            l[order[j]] += 1;
            let mut r = vec![0; n];
            r[order[j]] = 1;
            rels.push((l, r));
        }
    }
    let c = CongruenceOracle::new(n, &rels, bound, bound + slack);
    let words = words_up_to(n, bound);
    for (a, x) in words.iter().enumerate() {
        for y in words.iter().skip(a + 1) {
            if g.equal(x, y) != c.equal(x, y) {
                return Err((x.clone(), y.clone()));
            }
        }
    }
    Ok(())
}

/// `M(E_r)` agrees with the chain monoid on words of degree at most `bound`.
pub fn check_er_equals_chain(r: usize, bound: u32) -> std::result::Result<(), (Vec<u32>, Vec<u32>)> {
    let e = build_er(r);
    let order: Vec<usize> = (0..=r).collect();
    check_quiver_equals_chain(&e, &order, bound)
}
