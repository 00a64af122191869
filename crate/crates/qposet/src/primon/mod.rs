//! Finitely generated primitive monoids `M(P, ◁)`.
//!
//! An element is stored as its reduced word: a coefficient per prime, with
//! every prime absorbed by another prime of the support removed, and every
//! regular prime clipped to coefficient 1.

mod checks;
pub mod congruence;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{poset_pair_iso, LabelledPoset};

pub use checks::{
    apw_graph_shape, check_refinement, check_separative, check_strongly_separative,
    RefinementFailure,
};
pub use congruence::CongruenceOracle;

/// A set of primes with a transitive antisymmetric relation `q ◁ p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePair {
    names: Vec<String>,
    // rel[q][p] <=> q ◁ p
    rel: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    primes: Vec<String>,
    rel: Vec<(String, String)>,
}

impl PrimePair {
    pub fn new(names: Vec<String>, rel: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if rel.len() != n || rel.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("relation matrix has wrong shape".into()));
        }
        let mut seen = BTreeSet::new();
        for nm in &names {
            if !seen.insert(nm) {
                return Err(Error::Duplicate(nm.clone()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && rel[a][b] && rel[b][a] {
                    return Err(Error::NotAntisymmetric(names[a].clone(), names[b].clone()));
                }
                if !rel[a][b] {
                    continue;
                }
                for c in 0..n {
                    if rel[b][c] && !rel[a][c] {
                        return Err(Error::NotTransitive(
                            names[a].clone(),
                            names[b].clone(),
                            names[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(Self { names, rel })
    }

    /// Skips validation. Only for building deliberately broken inputs.
    #[doc(hidden)]
    pub fn new_unchecked(names: Vec<String>, rel: Vec<Vec<bool>>) -> Self {
        Self { names, rel }
    }

    /// Builds a pair from named `(q, p)` entries meaning `q ◁ p`.
    pub fn from_named(names: &[&str], rel: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let n = names.len();
        let mut m = vec![vec![false; n]; n];
        for (q, p) in rel {
            let qi = names.iter().position(|x| x == q).ok_or_else(|| Error::Unknown(q.to_string()))?;
            let pi = names.iter().position(|x| x == p).ok_or_else(|| Error::Unknown(p.to_string()))?;
            m[qi][pi] = true;
        }
        Self::new(names, m)
    }

    /// Like [`PrimePair::new`] but closes the relation transitively first.
    pub fn closed(names: Vec<String>, mut rel: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::new(names, rel)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let pj: PairJson =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("prime pair json: {e}")))?;
        let names: Vec<&str> = pj.primes.iter().map(|s| s.as_str()).collect();
        let rel: Vec<(&str, &str)> = pj.rel.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Self::from_named(&names, &rel)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut rel = Vec::new();
        for q in 0..self.len() {
            for p in 0..self.len() {
                if self.rel[q][p] {
                    rel.push((self.names[q].clone(), self.names[p].clone()));
                }
            }
        }
        serde_json::to_value(PairJson {
            primes: self.names.clone(),
            rel,
        })
        .expect("serializable")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Unknown(name.to_string()))
    }

    /// `q ◁ p`.
    pub fn rel(&self, q: usize, p: usize) -> bool {
        self.rel[q][p]
    }

    pub fn rel_matrix(&self) -> &[Vec<bool>] {
        &self.rel
    }

    /// The pair restricted to `keep` (in the given order).
    pub fn restrict(&self, keep: &[usize]) -> PrimePair {
        let names = keep.iter().map(|&i| self.names[i].clone()).collect();
        let rel = keep
            .iter()
            .map(|&a| keep.iter().map(|&b| self.rel[a][b]).collect())
            .collect();
        PrimePair { names, rel }
    }

    /// Disjoint union with no relations between the parts.
    pub fn disjoint_union(&self, other: &PrimePair) -> Result<PrimePair> {
        let n = self.len();
        let m = other.len();
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let mut rel = vec![vec![false; n + m]; n + m];
        for a in 0..n {
            for b in 0..n {
                rel[a][b] = self.rel[a][b];
            }
        }
        for a in 0..m {
            for b in 0..m {
                rel[n + a][n + b] = other.rel[a][b];
            }
        }
        PrimePair::new(names, rel)
    }

    /// Same relation, primes renamed.
    pub fn renamed(&self, names: Vec<String>) -> Result<PrimePair> {
        PrimePair::new(names, self.rel.clone())
    }
}

/// An extended non-negative integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    Fin(u64),
    Inf,
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, o: Ext) -> Ext {
        match (self, o) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(n) => write!(f, "{n}"),
            Ext::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ext::Fin(n) => s.serialize_u64(*n),
            Ext::Inf => s.serialize_str("inf"),
        }
    }
}

/// Values of the maps `x ↦ sup{n : n·p ≤ x}`, one per prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PhiTuple(pub Vec<Ext>);

impl Add for &PhiTuple {
    type Output = PhiTuple;
    fn add(self, o: &PhiTuple) -> PhiTuple {
        PhiTuple(self.0.iter().zip(&o.0).map(|(&a, &b)| a + b).collect())
    }
}

/// A reduced element; `coeffs[i]` is the coefficient of prime `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonElem {
    pub coeffs: Vec<u32>,
}

impl MonElem {
    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![0; n] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn size(&self) -> u32 {
        self.coeffs.iter().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i)
    }
}

/// An order-ideal, given by its ◁-lower set of primes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderIdeal {
    pub primes: BTreeSet<usize>,
}

impl OrderIdeal {
    pub fn zero() -> Self {
        Self {
            primes: BTreeSet::new(),
        }
    }

    pub fn contains(&self, x: &MonElem) -> bool {
        x.support().all(|p| self.primes.contains(&p))
    }

    pub fn sum(&self, o: &OrderIdeal) -> OrderIdeal {
        OrderIdeal {
            primes: self.primes.union(&o.primes).copied().collect(),
        }
    }

    pub fn meet(&self, o: &OrderIdeal) -> OrderIdeal {
        OrderIdeal {
            primes: self.primes.intersection(&o.primes).copied().collect(),
        }
    }
}

/// Projection `M → M/I`.
#[derive(Debug, Clone)]
pub struct Projection {
    /// Index in the quotient of each prime of `M`, `None` for primes of `I`.
    pub image: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveMonoid {
    pair: PrimePair,
}

impl PrimitiveMonoid {
    /// The monoid of a poset: `q ◁ p` iff `q < p`, all primes free.
    pub fn from_poset(p: &LabelledPoset) -> Self {
        Self {
            pair: p.strict_pair(),
        }
    }

    pub fn from_pair(pair: PrimePair) -> Self {
        Self { pair }
    }

    pub fn pair(&self) -> &PrimePair {
        &self.pair
    }

    pub fn rank(&self) -> usize {
        self.pair.len()
    }

    pub fn zero(&self) -> MonElem {
        MonElem::zero(self.rank())
    }

    /// The element `1·p`.
    pub fn prime(&self, p: usize) -> MonElem {
        let mut x = self.zero();
        x.coeffs[p] = 1;
        x
    }

    pub fn is_regular(&self, p: usize) -> bool {
        self.pair.rel(p, p)
    }

    pub fn is_free(&self, p: usize) -> bool {
        !self.is_regular(p)
    }

    pub fn is_free_named(&self, name: &str) -> Result<bool> {
        Ok(self.is_free(self.pair.index(name)?))
    }

    pub fn is_regular_named(&self, name: &str) -> Result<bool> {
        Ok(self.is_regular(self.pair.index(name)?))
    }

    pub fn all_free(&self) -> bool {
        (0..self.rank()).all(|p| self.is_free(p))
    }

    /// Reduced form of a word, given as a coefficient per prime.
    pub fn reduce(&self, word: &[u32]) -> Result<MonElem> {
        if word.len() != self.rank() {
            return Err(Error::Invalid(format!(
                "word has {} entries, monoid has {} primes",
                word.len(),
                self.rank()
            )));
        }
        Ok(self.reduce_unchecked(word))
    }

    pub(crate) fn reduce_unchecked(&self, word: &[u32]) -> MonElem {
        let n = self.rank();
        let mut coeffs = word.to_vec();
        for q in 0..n {
            if word[q] == 0 {
                continue;
            }
            if (0..n).any(|p| p != q && word[p] > 0 && self.pair.rel(q, p)) {
                coeffs[q] = 0;
            } else if self.pair.rel(q, q) {
                coeffs[q] = 1;
            }
        }
        MonElem { coeffs }
    }

    /// Reduces a word given by prime names.
    pub fn reduce_named(&self, word: &[(&str, u32)]) -> Result<MonElem> {
        let mut w = vec![0; self.rank()];
        for (nm, c) in word {
            w[self.pair.index(nm)?] += c;
        }
        Ok(self.reduce_unchecked(&w))
    }

    pub fn add(&self, x: &MonElem, y: &MonElem) -> MonElem {
        let w: Vec<u32> = x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a + b).collect();
        self.reduce_unchecked(&w)
    }

    pub fn equal(&self, x: &MonElem, y: &MonElem) -> bool {
        x == y
    }

    /// Decides `x ≤ y` by searching for `z` with `x + z = y`. Each
    /// coefficient of `z` is bounded by the largest coefficient of `y`
    /// plus one.
    pub fn leq(&self, x: &MonElem, y: &MonElem) -> bool {
        let cap = y.coeffs.iter().copied().max().unwrap_or(0) + 1;
        let n = self.rank();
        let mut z = vec![0u32; n];
        loop {
            if self.add(x, &MonElem { coeffs: z.clone() }) == *y {
                return true;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return false;
                }
                if z[i] < cap {
                    z[i] += 1;
                    break;
                }
                z[i] = 0;
                i += 1;
            }
        }
    }

    /// The φ-tuple of a reduced element.
    pub fn phi(&self, x: &MonElem) -> PhiTuple {
        let n = self.rank();
        PhiTuple(
            (0..n)
                .map(|p| {
                    if x.support().any(|q| self.pair.rel(p, q)) {
                        Ext::Inf
                    } else {
                        Ext::Fin(x.coeffs[p] as u64)
                    }
                })
                .collect(),
        )
    }

    /// The order-ideal generated by `a`.
    pub fn order_ideal(&self, a: &MonElem) -> OrderIdeal {
        let s: BTreeSet<usize> = a.support().collect();
        self.ideal_from_set(&s)
    }

    /// The order-ideal whose primes are the ◁-closure of `s`.
    pub fn ideal_from_set(&self, s: &BTreeSet<usize>) -> OrderIdeal {
        let n = self.rank();
        let primes = (0..n)
            .filter(|&q| s.contains(&q) || s.iter().any(|&p| self.pair.rel(q, p)))
            .collect();
        OrderIdeal { primes }
    }

    /// Same as [`Self::ideal_from_set`], rejecting sets that are not ◁-lower.
    pub fn ideal_from_lower_set(&self, s: &BTreeSet<usize>) -> Result<OrderIdeal> {
        let id = self.ideal_from_set(s);
        if id.primes != *s {
            return Err(Error::NotLower);
        }
        Ok(id)
    }

    /// All order-ideals, i.e. all ◁-lower prime sets.
    pub fn order_ideals(&self) -> Vec<OrderIdeal> {
        let n = self.rank();
        assert!(n < 32);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let s: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if self.ideal_from_set(&s).primes == s {
                out.push(OrderIdeal { primes: s });
            }
        }
        out
    }

    /// `M/I` with its projection.
    pub fn quotient(&self, ideal: &OrderIdeal) -> (PrimitiveMonoid, Projection) {
        let keep: Vec<usize> = (0..self.rank()).filter(|p| !ideal.primes.contains(p)).collect();
        let mut image = vec![None; self.rank()];
        for (i, &p) in keep.iter().enumerate() {
            image[p] = Some(i);
        }
        (
            PrimitiveMonoid::from_pair(self.pair.restrict(&keep)),
            Projection { image },
        )
    }

    /// The restriction `M|I` as a monoid on the primes of `I` (in index order).
    pub fn restrict(&self, ideal: &OrderIdeal) -> (PrimitiveMonoid, Vec<usize>) {
        let keep: Vec<usize> = ideal.primes.iter().copied().collect();
        (PrimitiveMonoid::from_pair(self.pair.restrict(&keep)), keep)
    }

    /// Image of `x` under a prime map `f` (prime `i` goes to `f[i]` or 0).
    pub fn map_elem(&self, target: &PrimitiveMonoid, f: &[Option<usize>], x: &MonElem) -> MonElem {
        let mut w = vec![0; target.rank()];
        for (i, &c) in x.coeffs.iter().enumerate() {
            if let Some(j) = f[i] {
                w[j] += c;
            }
        }
        target.reduce_unchecked(&w)
    }

    /// All reduced elements of size at most `bound`, in a fixed order.
    pub fn elements_up_to(&self, bound: u32) -> Vec<MonElem> {
        let n = self.rank();
        let mut out = BTreeSet::new();
        let mut w = vec![0u32; n];
        fn rec(m: &PrimitiveMonoid, i: usize, left: u32, w: &mut Vec<u32>, out: &mut BTreeSet<MonElem>) {
            if i == w.len() {
                let r = m.reduce_unchecked(w);
                if r.coeffs == *w {
                    out.insert(r);
                }
                return;
            }
            for c in 0..=left {
                w[i] = c;
                rec(m, i + 1, left - c, w, out);
            }
            w[i] = 0;
        }
        rec(self, 0, bound, &mut w, &mut out);
        let mut v: Vec<MonElem> = out.into_iter().collect();
        v.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
        v
    }

    /// Defining relations as word pairs, for the congruence oracle.
    pub fn presentation(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        let n = self.rank();
        let mut rels = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if self.pair.rel(q, p) {
                    let mut lhs = vec![0; n];
                    lhs[p] += 1;
                    lhs[q] += 1;
                    let mut rhs = vec![0; n];
                    rhs[p] = 1;
                    rels.push((lhs, rhs));
                }
            }
        }
        rels
    }

    pub fn format_elem(&self, x: &MonElem) -> String {
        let parts: Vec<String> = x
            .support()
            .map(|p| {
                if x.coeffs[p] == 1 {
                    self.pair.name(p).to_string()
                } else {
                    format!("{}{}", x.coeffs[p], self.pair.name(p))
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// JSON summary: primes, ◁ pairs, free flags and φ-tables of `elems`.
    pub fn to_json(&self, elems: &[MonElem]) -> serde_json::Value {
        let free: Vec<bool> = (0..self.rank()).map(|p| self.is_free(p)).collect();
        let phis: Vec<serde_json::Value> = elems
            .iter()
            .map(|x| {
                serde_json::json!({
                    "element": self.format_elem(x),
                    "phi": self.phi(x),
                })
            })
            .collect();
        serde_json::json!({
            "pair": self.pair.to_json(),
            "free": free,
            "phi": phis,
        })
    }
}

/// An isomorphism of primitive monoids, as a bijection of primes.
pub fn monoid_iso(m: &PrimitiveMonoid, n: &PrimitiveMonoid) -> Option<Vec<usize>> {
    poset_pair_iso(m.pair(), n.pair())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::parse_poset;
    use proptest::prelude::*;

    fn vee() -> PrimitiveMonoid {
        PrimitiveMonoid::from_poset(&parse_poset("elems p a b; covers a<p b<p").unwrap())
    }

    fn mixed() -> PrimitiveMonoid {
        let pair = PrimePair::from_named(
            &["q", "p", "a", "b"],
            &[("q", "q"), ("p", "q"), ("a", "q"), ("b", "q"), ("a", "p"), ("b", "p")],
        )
        .unwrap();
        PrimitiveMonoid::from_pair(pair)
    }

    // sup{n : n·g ≤ x} by brute force over n ≤ 5 using the search-based leq
    fn phi_oracle(m: &PrimitiveMonoid, x: &MonElem) -> Vec<Ext> {
        (0..m.rank())
            .map(|g| {
                let mut best = 0u64;
                for n in 1..=5u32 {
                    let mut w = vec![0; m.rank()];
                    w[g] = n;
                    if m.leq(&m.reduce_unchecked(&w), x) {
                        best = n as u64;
                    }
                }
                if best == 5 {
                    Ext::Inf
                } else {
                    Ext::Fin(best)
                }
            })
            .collect()
    }

    #[test]
    fn pair_validation() {
        assert!(matches!(
            PrimePair::from_named(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(Error::NotAntisymmetric(..))
        ));
        assert!(matches!(
            PrimePair::from_named(&["a", "b", "c"], &[("a", "b"), ("b", "c")]),
            Err(Error::NotTransitive(..))
        ));
        let p = PrimePair::from_json(r#"{"primes":["q","p"],"rel":[["p","q"],["q","q"]]}"#).unwrap();
        assert!(p.rel(1, 0) && p.rel(0, 0));
        let back = PrimePair::from_json(&p.to_json().to_string()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn from_pair_matches_from_poset() {
        let pair = PrimePair::from_named(&["p", "a", "b"], &[("a", "p"), ("b", "p")]).unwrap();
        assert_eq!(PrimitiveMonoid::from_pair(pair), vee());
        let triv = PrimitiveMonoid::from_pair(PrimePair::new(vec![], vec![]).unwrap());
        assert_eq!(triv.elements_up_to(3).len(), 1);
    }

    #[test]
    fn reduce_examples() {
        let m = vee();
        assert_eq!(m.reduce_named(&[("p", 1), ("a", 1)]).unwrap(), m.prime(0));
        assert!(m.reduce(&[0, 0, 0]).unwrap().is_zero());
        let x = m.reduce_named(&[("p", 2), ("a", 1), ("b", 3)]).unwrap();
        assert_eq!(x.coeffs, vec![2, 0, 0]);
        assert!(m.reduce_named(&[("z", 1)]).is_err());
        assert!(m.reduce(&[1]).is_err());
        let mx = mixed();
        assert_eq!(mx.reduce_named(&[("q", 3)]).unwrap().coeffs, vec![1, 0, 0, 0]);
        assert_eq!(mx.reduce_named(&[("q", 1), ("p", 2)]).unwrap().coeffs, vec![1, 0, 0, 0]);
    }

    #[test]
    fn reduce_agrees_with_congruence_oracle() {
        for m in [vee(), mixed()] {
            let oracle = CongruenceOracle::new(m.rank(), &m.presentation(), 4, 6);
            let words = congruence::words_up_to(m.rank(), 4);
            for x in &words {
                for y in &words {
                    let same = m.reduce_unchecked(x) == m.reduce_unchecked(y);
                    assert_eq!(Some(same), oracle.equal(x, y), "{x:?} {y:?}");
                }
            }
        }
    }

    #[test]
    fn leq_examples() {
        let m = vee();
        let (p, a) = (m.prime(0), m.prime(1));
        assert!(m.leq(&a, &p));
        assert!(m.leq(&p, &p));
        assert!(!m.leq(&p, &a));
    }

    #[test]
    fn phi_examples_and_oracle() {
        let m = vee();
        assert_eq!(m.phi(&m.prime(0)).0, vec![Ext::Fin(1), Ext::Inf, Ext::Inf]);
        assert_eq!(m.phi(&m.zero()).0, vec![Ext::Fin(0); 3]);
        let mx = mixed();
        assert_eq!(mx.phi(&mx.prime(0)).0[0], Ext::Inf);
        for mon in [vee(), mixed()] {
            for x in mon.elements_up_to(3) {
                assert_eq!(mon.phi(&x).0, phi_oracle(&mon, &x), "{}", mon.format_elem(&x));
            }
        }
    }

    #[test]
    fn ideals_and_quotients() {
        let m = vee();
        assert_eq!(m.order_ideal(&m.prime(0)).primes.len(), 3);
        assert!(m.order_ideal(&m.zero()).primes.is_empty());
        assert_eq!(m.order_ideal(&m.prime(1)).primes, BTreeSet::from([1]));
        let (q, proj) = m.quotient(&m.order_ideal(&m.prime(1)));
        let want = PrimitiveMonoid::from_pair(PrimePair::from_named(&["p", "b"], &[("b", "p")]).unwrap());
        assert_eq!(q, want);
        assert_eq!(proj.image, vec![Some(0), None, Some(1)]);
        let (t, _) = m.quotient(&m.order_ideal(&m.prime(0)));
        assert_eq!(t.rank(), 0);
        let (same, _) = m.quotient(&OrderIdeal::zero());
        assert_eq!(same, m);
        assert!(m.ideal_from_lower_set(&BTreeSet::from([0])).is_err());
    }

    #[test]
    fn quotient_projection_is_homomorphism_with_kernel_ideal() {
        for m in [vee(), mixed()] {
            for id in m.order_ideals() {
                let (q, proj) = m.quotient(&id);
                let el = m.elements_up_to(3);
                for x in &el {
                    let px = m.map_elem(&q, &proj.image, x);
                    assert_eq!(px.is_zero(), id.contains(x));
                    for y in &el {
                        let lhs = m.map_elem(&q, &proj.image, &m.add(x, y));
                        let rhs = q.add(&px, &m.map_elem(&q, &proj.image, y));
                        assert_eq!(lhs, rhs);
                    }
                }
                // surjective on primes
                assert_eq!(proj.image.iter().flatten().count(), q.rank());
            }
        }
    }

    #[test]
    fn ideal_lattice_correspondence() {
        let p = parse_poset("elems p q a b; covers a<p b<p b<q").unwrap();
        let m = PrimitiveMonoid::from_poset(&p);
        let lower = p.lower_sets();
        let ideals = m.order_ideals();
        assert_eq!(lower.len(), ideals.len());
        for a in &lower {
            let ia = m.ideal_from_lower_set(&a.members).unwrap();
            for b in &lower {
                let ib = m.ideal_from_lower_set(&b.members).unwrap();
                assert_eq!(ia.sum(&ib), m.ideal_from_lower_set(&a.join(b).members).unwrap());
                assert_eq!(ia.meet(&ib), m.ideal_from_lower_set(&a.meet(b).members).unwrap());
            }
        }
    }

    #[test]
    fn freeness() {
        let m = vee();
        assert!((0..3).all(|p| m.is_free(p)));
        let mx = mixed();
        assert!(mx.is_regular_named("q").unwrap());
        assert!(mx.is_free_named("nope").is_err());
    }

    #[test]
    fn json_summary() {
        let m = vee();
        let v = m.to_json(&[m.prime(0)]);
        assert_eq!(v["phi"][0]["phi"][1], "inf");
        assert_eq!(v["free"], serde_json::json!([true, true, true]));
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_and_order_independent(w in proptest::collection::vec(0u32..4, 4), perm in Just(()).prop_perturb(|_, mut rng| {
            let mut v: Vec<usize> = (0..4).collect();
            for i in (1..4).rev() { let j = (rng.next_u32() as usize) % (i + 1); v.swap(i, j); }
            v
        })) {
            let m = mixed();
            let r = m.reduce_unchecked(&w);
            prop_assert_eq!(m.reduce_unchecked(&r.coeffs), r.clone());
            // build the word one generator at a time in a permuted order
            let mut acc = m.zero();
            for &i in &perm {
                for _ in 0..w[i] {
                    acc = m.add(&acc, &m.prime(i));
                }
            }
            prop_assert_eq!(acc, r);
        }

        #[test]
        fn phi_is_additive(a in proptest::collection::vec(0u32..3, 4), b in proptest::collection::vec(0u32..3, 4)) {
            let m = mixed();
            let x = m.reduce_unchecked(&a);
            let y = m.reduce_unchecked(&b);
            prop_assert_eq!(m.phi(&m.add(&x, &y)), &m.phi(&x) + &m.phi(&y));
        }
    }
}
