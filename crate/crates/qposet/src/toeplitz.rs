//! Exact right action of the algebra on the space `V(P) = ⊕_p V(p)`.
//!
//! **Vectors are acted on from the right**: `v · (x y) = (v · x) · y`.
//!
//! `V(p) = L` for minimal `p`; otherwise `V(p) = ⊕_j V(q_j)[z_j]` with one
//! summand per lower cover `q_j`. On the summand for `q_j` the variables
//! `z_ℓ`, `ℓ ≠ j`, are identified with the scalars `t_{σ_j(ℓ)}^{-1}` of
//! `V(q_j)` and the scalars of `V(p)` act on `V(q_j)` through `σ^p`. With
//! this identification `β_{p,q_j}` is the identity on the `z_j`-constant
//! part and `β̄_{p,q_j}` is the inclusion back.
//!
//! A basis leaf of `V(p)` is a descending path from `p` to a minimal element
//! ([`BranchPath`]). Its coefficient is a fraction in `z0, z1, ...` (the
//! branch variables of the path, top first) and the scalars `t_i` of the
//! minimal element at the bottom, with denominators free of the `z`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::leavitt::{sigma_index, AlgElement, Algebra, Coeff, Expr, Gen};
use crate::poly::{Laurent, Monomial, Rat, RatFunc};
use crate::poset::LowerSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Branch variable at a depth along the leaf path, 0 at the top.
    Z(u32),
    /// Scalar `t_i` of the bottom of the leaf path.
    T(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(l) => write!(f, "z{l}"),
            Var::T(i) => write!(f, "t{i}"),
        }
    }
}

pub type Scalar = RatFunc<Var>;

const Z0: Var = Var::Z(0);

fn is_z(v: &Var) -> bool {
    matches!(v, Var::Z(_))
}

fn const_part(s: &Scalar) -> Scalar {
    debug_assert!(!s.den().involves(is_z));
    s.map_num(|n| n.filter_map_monomials(|m| (m.exponent(&Z0) == 0).then(|| m.clone())))
}

/// `φ`: drops the `z0`-constant part and divides by `z0`.
fn shift_down(s: &Scalar) -> Scalar {
    let down = Monomial::var(Z0, -1);
    s.map_num(|n| n.filter_map_monomials(|m| (m.exponent(&Z0) > 0).then(|| m.mul(&down))))
}

fn rename_z(s: &Scalar, delta: i32) -> Scalar {
    s.substitute(|v| match *v {
        Var::Z(l) => (Var::Z((l as i32 + delta) as u32), 1),
        t => (t, 1),
    })
}

fn t_var(i: u32, e: i32) -> Laurent<Var> {
    Laurent::var(Var::T(i), e)
}

/// A basis leaf: `(vertex, cover)` steps from the top down, then the
/// minimal element reached.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchPath {
    pub steps: Vec<(usize, usize)>,
    pub bottom: usize,
}

impl BranchPath {
    pub fn top(&self) -> usize {
        self.steps.first().map_or(self.bottom, |s| s.0)
    }
}

/// A finite combination of leaves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RepVector {
    entries: BTreeMap<BranchPath, Scalar>,
}

impl RepVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn leaf(path: BranchPath, c: Scalar) -> Self {
        let mut v = Self::zero();
        v.add_entry(path, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BranchPath, &Scalar)> {
        self.entries.iter()
    }

    pub fn add_entry(&mut self, path: BranchPath, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.entries.remove(&path) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.entries.insert(path, sum);
        }
    }

    pub fn add(&self, other: &RepVector) -> RepVector {
        let mut out = self.clone();
        for (p, c) in &other.entries {
            out.add_entry(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> RepVector {
        let mut out = RepVector::zero();
        for (p, c) in &self.entries {
            out.add_entry(p.clone(), c.scale(k));
        }
        out
    }

    pub fn sub(&self, other: &RepVector) -> RepVector {
        self.add(&other.scale(&-Rat::one()))
    }

    /// Largest `z0` exponent over all entries.
    pub fn top_degree(&self) -> i32 {
        self.entries
            .values()
            .filter_map(|c| c.num().degree_range(&Z0).map(|r| r.1))
            .max()
            .unwrap_or(0)
    }
}

/// The recursive space for one labelled poset.
#[derive(Debug, Clone)]
pub struct Space {
    alg: Arc<Algebra>,
    levels: Vec<Vec<usize>>,
    leaves: Vec<Vec<BranchPath>>,
}

/// A polynomial in the commuting `x_q`, `q` a lower cover of `vertex`, with
/// scalar coefficients; exponent vectors follow the label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaPoly {
    pub vertex: usize,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl SigmaPoly {
    pub fn new(vertex: usize, terms: impl IntoIterator<Item = (Vec<u32>, Coeff)>) -> Self {
        let mut m: BTreeMap<Vec<u32>, Coeff> = BTreeMap::new();
        for (e, c) in terms {
            let slot = m.entry(e).or_default();
            *slot = &*slot + &c;
        }
        m.retain(|_, c| !c.is_zero());
        SigmaPoly { vertex, terms: m }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn width(&self) -> usize {
        self.terms.keys().next().map_or(0, |e| e.len())
    }

    /// `v_{q}(f)`: the largest power of `x_q` dividing `f`.
    pub fn valuation_at(&self, l: usize) -> u32 {
        self.terms.keys().map(|e| e[l]).min().unwrap_or(u32::MAX)
    }

    /// `v(f) = max_q v_q(f)`.
    pub fn valuation(&self) -> u32 {
        (0..self.width()).map(|l| self.valuation_at(l)).max().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// `f` as an algebra expression `Σ c e(p) α^e`.
    pub fn to_expr(&self) -> Expr {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut w = vec![Gen::E(self.vertex), Gen::Scalar(c.clone())];
                for (l, &k) in e.iter().enumerate() {
                    w.extend((0..k).map(|_| Gen::Alpha(self.vertex, l)));
                }
                (Rat::one(), w)
            })
            .collect();
        Expr { terms }
    }

    /// The terms in which `x_l` does not occur.
    pub fn without(&self, l: usize) -> SigmaPoly {
        SigmaPoly::new(
            self.vertex,
            self.terms.iter().filter(|(e, _)| e[l] == 0).map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// Splits off the largest monomial factor: `f = x^w f'`.
    pub fn monomial_factor(&self) -> (Vec<u32>, SigmaPoly) {
        let k = self.width();
        let w: Vec<u32> = (0..k).map(|l| self.valuation_at(l)).collect();
        let rest = self.terms.iter().map(|(e, c)| {
            let e2 = e.iter().zip(&w).map(|(a, b)| a - b).collect();
            (e2, c.clone())
        });
        let rest = SigmaPoly::new(self.vertex, rest);
        (w, rest)
    }
}

/// A vector on which two expressions disagree.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub vector: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for RepVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(p, c)| {
                let path: Vec<String> = p
                    .steps
                    .iter()
                    .map(|s| format!("{}.{}", s.0, s.1))
                    .chain([p.bottom.to_string()])
                    .collect();
                format!("[{}] {}", path.join(">"), c)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Space {
    /// Builds the level decomposition and the leaves of every `V(p)`.
    pub fn build(alg: &Arc<Algebra>) -> Space {
        let poset = alg.poset();
        let n = poset.len();
        let mut level = vec![usize::MAX; n];
        let mut levels: Vec<Vec<usize>> = Vec::new();
        let mut placed = 0;
        while placed < n {
            let this: Vec<usize> = (0..n)
                .filter(|&p| level[p] == usize::MAX)
                .filter(|&p| poset.lower_covers(p).iter().all(|&q| level[q] < levels.len()))
                .collect();
            for &p in &this {
                level[p] = levels.len();
            }
            placed += this.len();
            levels.push(this);
        }
        let mut leaves: Vec<Vec<BranchPath>> = vec![Vec::new(); n];
        for lv in &levels {
            for &p in lv {
                let covers = poset.lower_covers(p);
                if covers.is_empty() {
                    leaves[p].push(BranchPath {
                        steps: Vec::new(),
                        bottom: p,
                    });
                }
                for (j, &q) in covers.iter().enumerate() {
                    let below = leaves[q].clone();
                    for mut b in below {
                        b.steps.insert(0, (p, j));
                        leaves[p].push(b);
                    }
                }
            }
        }
        Space {
            alg: Arc::clone(alg),
            levels,
            leaves,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    /// `P^0 = Min(P)`, `P^{i+1} = Min(P ∖ ⋃_{j≤i} P^j)`.
    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn leaves(&self, p: usize) -> &[BranchPath] {
        &self.leaves[p]
    }

    fn offset(&self, steps: &[(usize, usize)]) -> u32 {
        steps.iter().map(|&(v, _)| self.alg.sigma_shift(v)).sum()
    }

    /// A scalar of `V(top of the path)` in bottom coordinates.
    fn lift(&self, c: &Coeff, steps: &[(usize, usize)]) -> Laurent<Var> {
        let off = self.offset(steps);
        c.substitute(|t| (Var::T(t.0 + off), 1))
    }

    fn check_leaf(&self, p: &BranchPath) -> Result<()> {
        let top = p.top();
        if top < self.leaves.len() && self.leaves[top].contains(p) {
            Ok(())
        } else {
            Err(Error::Invalid(format!("leaf {p:?} is not in the space")))
        }
    }

    fn act_leaf(&self, g: &Gen, leaf: &BranchPath, c: &Scalar, out: &mut RepVector) {
        let top = leaf.top();
        let branch = leaf.steps.first().map(|s| s.1);
        let same = |p: usize| p == top;
        match *g {
            Gen::Scalar(ref s) => {
                out.add_entry(leaf.clone(), c.mul_laurent(&self.lift(s, &leaf.steps)));
            }
            Gen::E(p) if same(p) => out.add_entry(leaf.clone(), c.clone()),
            Gen::EPrime(p) if same(p) => {
                let keep = if branch.is_some() { c - &const_part(c) } else { c.clone() };
                out.add_entry(leaf.clone(), keep);
            }
            Gen::Epq(p, j) if same(p) && branch == Some(j) => {
                out.add_entry(leaf.clone(), const_part(c));
            }
            Gen::Alpha(p, l) | Gen::AlphaBar(p, l) if same(p) => {
                let bar = matches!(g, Gen::AlphaBar(..));
                let j = branch.expect("vertex with covers");
                if j == l {
                    let v = if bar {
                        c.mul_laurent(&Laurent::var(Z0, 1))
                    } else {
                        shift_down(c)
                    };
                    out.add_entry(leaf.clone(), v);
                } else {
                    let off_q = self.offset(&leaf.steps[1..]);
                    let t = t_var(sigma_index(j, l) + off_q, if bar { -1 } else { 1 });
                    out.add_entry(leaf.clone(), c.mul_laurent(&t));
                }
            }
            Gen::Beta(p, j) if same(p) && branch == Some(j) => {
                let mut rest = leaf.clone();
                rest.steps.remove(0);
                out.add_entry(rest, rename_z(&const_part(c), -1));
            }
            Gen::BetaBar(p, j) if self.alg.covers(p)[j] == top => {
                let mut up = leaf.clone();
                up.steps.insert(0, (p, j));
                out.add_entry(up, rename_z(c, 1));
            }
            _ => {}
        }
    }

    /// `v · g`.
    pub fn act(&self, g: &Gen, v: &RepVector) -> Result<RepVector> {
        let mut out = RepVector::zero();
        for (leaf, c) in &v.entries {
            self.check_leaf(leaf)?;
            self.act_leaf(g, leaf, c, &mut out);
        }
        Ok(out)
    }

    pub fn act_word(&self, w: &[Gen], v: &RepVector) -> Result<RepVector> {
        let mut cur = v.clone();
        for g in w {
            if cur.is_zero() {
                break;
            }
            cur = self.act(g, &cur)?;
        }
        Ok(cur)
    }

    /// `v · e` for an unreduced word sum, generator by generator.
    pub fn act_expr(&self, e: &Expr, v: &RepVector) -> Result<RepVector> {
        let mut out = RepVector::zero();
        for (k, w) in &e.terms {
            out = out.add(&self.act_word(w, v)?.scale(k));
        }
        Ok(out)
    }

    /// `v · x` for a reduced element, term by term.
    pub fn act_element(&self, x: &AlgElement, v: &RepVector) -> Result<RepVector> {
        if **x.algebra() != *self.alg {
            return Err(Error::PosetMismatch);
        }
        let mut out = RepVector::zero();
        for (s, c) in x.terms() {
            out = out.add(&self.act_word(&self.alg.term_word(s, c), v)?);
        }
        Ok(out)
    }

    /// Monomial samples with coefficient 1: on every leaf, `z0^d` for
    /// `d <= depth` times each `0/1` pattern of the deeper branch variables.
    pub fn samples(&self, depth: u32) -> Vec<RepVector> {
        let mut out = Vec::new();
        for leaves in &self.leaves {
            for leaf in leaves {
                let k = leaf.steps.len();
                if k == 0 {
                    out.push(RepVector::leaf(leaf.clone(), Scalar::one()));
                    continue;
                }
                for d in 0..=depth {
                    for mask in 0u32..(1 << (k - 1)) {
                        let mut m = vec![(Z0, d as i32)];
                        for l in 1..k {
                            m.push((Var::Z(l as u32), (mask >> (l - 1) & 1) as i32));
                        }
                        let c = Laurent::term(Monomial::from_pairs(m), Rat::one());
                        out.push(RepVector::leaf(leaf.clone(), Scalar::from(c)));
                    }
                }
            }
        }
        out
    }

    /// `count` deterministic sample vectors: the monomial samples of degree
    /// at most 3, repeated with coefficient `t1` when more are needed.
    pub fn oracle_samples(&self, count: usize) -> Vec<RepVector> {
        let base = self.samples(3);
        let t1 = Scalar::from(t_var(1, 1));
        let mut out = Vec::new();
        let mut round = 0;
        while out.len() < count && !base.is_empty() {
            for v in &base {
                if out.len() == count {
                    break;
                }
                let mut w = v.clone();
                for _ in 0..round {
                    let mut next = RepVector::zero();
                    for (p, c) in &w.entries {
                        next.add_entry(p.clone(), c * &t1);
                    }
                    w = next;
                }
                out.push(w);
            }
            round += 1;
        }
        out
    }

    /// `v · f`.
    pub fn act_sigma(&self, f: &SigmaPoly, v: &RepVector) -> Result<RepVector> {
        self.act_expr(&f.to_expr(), v)
    }

    /// `v · f⁻¹` with the inverse truncated to `Σ_{a≤n} g_a φ^a` on each
    /// branch, where `Σ g_a z^a = 1/F` in the power series ring. Exact on
    /// vectors whose `z0`-degree is at most `n`.
    pub fn invert_sigma(&self, f: &SigmaPoly, v: &RepVector, n: u32) -> Result<RepVector> {
        if f.is_zero() {
            return Err(Error::Invalid("zero polynomial".into()));
        }
        let val = f.valuation();
        if val != 0 {
            return Err(Error::Valuation(val));
        }
        let p = f.vertex;
        let mut out = RepVector::zero();
        for (leaf, c) in &v.entries {
            self.check_leaf(leaf)?;
            if leaf.top() != p || leaf.steps.is_empty() {
                if leaf.top() == p {
                    // V(p) = L: f is its constant term
                    let f0 = self.lift(&f.terms.values().next().cloned().unwrap_or_default(), &[]);
                    out.add_entry(leaf.clone(), c * &Scalar::from(f0).inv());
                }
                continue;
            }
            let j = leaf.steps[0].1;
            let off_q = self.offset(&leaf.steps[1..]);
            let top_b = f.terms.keys().map(|e| e[j]).max().unwrap_or(0) as usize;
            let mut fb: Vec<Laurent<Var>> = vec![Laurent::zero(); top_b + 1];
            for (e, k) in &f.terms {
                let mut m = Vec::new();
                for (l, &a) in e.iter().enumerate() {
                    if l != j && a > 0 {
                        m.push((Var::T(sigma_index(j, l) + off_q), a as i32));
                    }
                }
                let term = self.lift(k, &leaf.steps).mul_monomial(&Monomial::from_pairs(m));
                let b = e[j] as usize;
                fb[b] = &fb[b] + &term;
            }
            let f0 = fb[0].clone();
            // g_a = h_a / F_0^{a+1}
            let mut h: Vec<Laurent<Var>> = vec![Laurent::one()];
            let mut f0_pow = vec![Laurent::one()];
            for a in 1..=n as usize {
                f0_pow.push(&f0_pow[a - 1] * &f0);
                let mut acc = Laurent::zero();
                for b in 1..=a.min(top_b) {
                    acc = &acc - &(&(&fb[b] * &h[a - b]) * &f0_pow[b - 1]);
                }
                h.push(acc);
            }
            let full = &f0_pow[n as usize] * &f0;
            let mut num = Laurent::zero();
            let mut cur = c.num().clone();
            for a in 0..=n as usize {
                if cur.is_zero() {
                    break;
                }
                num = &num + &(&(&h[a] * &f0_pow[n as usize - a]) * &cur);
                cur = shift_down(&Scalar::from(cur)).num().clone();
            }
            out.add_entry(leaf.clone(), Scalar::new(num, &full * c.den()));
        }
        Ok(out)
    }

    /// Runs both sides on every sample.
    pub fn check_relation(
        &self,
        lhs: &Expr,
        rhs: &Expr,
        samples: &[RepVector],
    ) -> std::result::Result<(), Counterexample> {
        for v in samples {
            let l = self.act_expr(lhs, v).map_err(|e| counter(v, e))?;
            let r = self.act_expr(rhs, v).map_err(|e| counter(v, e))?;
            if l != r {
                return Err(Counterexample {
                    vector: v.to_string(),
                    lhs: l.to_string(),
                    rhs: r.to_string(),
                });
            }
        }
        Ok(())
    }

    /// The identities for `e(p,q_j) f⁻¹` and `ᾱ_{p,q_j} f⁻¹` with truncated
    /// inverses at depth `n`, on samples of `z0`-degree below `n`.
    pub fn check_inverse_identities(
        &self,
        f: &SigmaPoly,
        j: usize,
        n: u32,
    ) -> std::result::Result<usize, Counterexample> {
        let p = f.vertex;
        let f0 = f.without(j);
        let (w, f0p) = f0.monomial_factor();
        // g = -(f_1 + α f_2 + ...)
        let g = SigmaPoly::new(
            p,
            f.terms.iter().filter(|(e, _)| e[j] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[j] -= 1;
                (e2, -c)
            }),
        );
        let mut wbar = Vec::new();
        for (l, &k) in w.iter().enumerate() {
            wbar.extend((0..k).map(|_| Gen::AlphaBar(p, l)));
        }
        let epq = Gen::Epq(p, j);
        let abar = Gen::AlphaBar(p, j);
        let run = |v: &RepVector| -> Result<[RepVector; 5]> {
            let inv = |x: &RepVector| self.invert_sigma(f, x, n);
            let inv0 = |x: &RepVector| self.invert_sigma(&f0p, x, n);
            let a = inv(&self.act(&epq, v)?)?;
            let b = self.act(&epq, &self.act_word(&wbar, &inv0(v)?)?)?;
            let c = self.act_word(&wbar, &inv0(&self.act(&epq, v)?)?)?;
            let lhs = inv(&self.act(&abar, v)?)?;
            let fv = inv(v)?;
            let tail = self.act(&epq, &self.act_word(&wbar, &self.act_sigma(&g, &inv0(&fv)?)?)?)?;
            let rhs = self.act(&abar, &fv)?.add(&tail);
            Ok([a, b, c, lhs, rhs])
        };
        let samples: Vec<RepVector> = self
            .samples(n.saturating_sub(1))
            .into_iter()
            .filter(|v| v.entries.keys().all(|l| l.top() == p))
            .collect();
        for v in &samples {
            let [a, b, c, lhs, rhs] = run(v).map_err(|e| counter(v, e))?;
            if a != b || b != c {
                return Err(Counterexample {
                    vector: v.to_string(),
                    lhs: a.to_string(),
                    rhs: b.to_string(),
                });
            }
            if lhs != rhs {
                return Err(Counterexample {
                    vector: v.to_string(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                });
            }
        }
        Ok(samples.len())
    }
}

fn counter(v: &RepVector, e: Error) -> Counterexample {
    Counterexample {
        vector: v.to_string(),
        lhs: e.to_string(),
        rhs: String::new(),
    }
}

/// Compares reduction followed by the action against the action of the raw
/// words, for `count` random word sums. Returns the number of
/// `(element, vector)` pairs compared, or the first disagreeing expression.
pub fn oracle_equivalence(
    space: &Space,
    rng: &mut impl Rng,
    count: usize,
    degree: usize,
    n_samples: usize,
) -> std::result::Result<usize, (Expr, Counterexample)> {
    let alg = space.algebra();
    let samples = space.oracle_samples(n_samples);
    let mut checked = 0;
    for _ in 0..count {
        let n_terms = rng.random_range(1..=3);
        let e = alg.random_expr(rng, degree, n_terms);
        let x = alg.reduce(&e).expect("valid expression");
        for v in &samples {
            let direct = space.act_expr(&e, v).expect("valid vector");
            let reduced = space.act_element(&x, v).expect("valid vector");
            if direct != reduced {
                return Err((
                    e,
                    Counterexample {
                        vector: v.to_string(),
                        lhs: reduced.to_string(),
                        rhs: direct.to_string(),
                    },
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// For `count` random nonzero reduced elements, some sample vector has a
/// nonzero image. Returns the number of nonzero elements probed or the
/// first element that kills every sample.
pub fn faithfulness_probe(
    space: &Space,
    rng: &mut impl Rng,
    count: usize,
    degree: usize,
) -> std::result::Result<usize, AlgElement> {
    let alg = space.algebra();
    let samples = space.samples(degree as u32 + 1);
    let mut done = 0;
    while done < count {
        let n_terms = rng.random_range(1..=3);
        let e = alg.random_expr(rng, degree, n_terms);
        let x = alg.reduce(&e).expect("valid expression");
        if x.is_zero() {
            continue;
        }
        let moved = samples
            .iter()
            .any(|v| !space.act_element(&x, v).expect("valid vector").is_zero());
        if !moved {
            return Err(x);
        }
        done += 1;
    }
    Ok(done)
}

/// Sample polynomials of `Σ(p)` in the variables of the covers of `p`.
pub fn sample_sigma_polys(alg: &Algebra, p: usize) -> Vec<SigmaPoly> {
    let k = alg.n(p);
    if k == 0 {
        return vec![SigmaPoly::new(p, [(vec![], Coeff::one())])];
    }
    let r = |n: i64, d: i64| Coeff::constant(crate::poly::rat(n, d));
    let t = |i: u32, e: i32| Coeff::var(crate::poly::TVar(i), e);
    let x = |l: usize, a: u32| -> Vec<u32> {
        let mut v = vec![0; k];
        v[l % k] += a;
        v
    };
    let xy = |a: u32, b: u32| -> Vec<u32> {
        let mut v = vec![0; k];
        v[0] += a;
        v[(1).min(k - 1)] += b;
        v
    };
    let zero = vec![0; k];
    vec![
        SigmaPoly::new(p, [(zero.clone(), r(1, 1))]),
        SigmaPoly::new(p, [(zero.clone(), r(1, 1)), (x(0, 1), r(-1, 1))]),
        SigmaPoly::new(p, [(zero.clone(), r(1, 1)), (xy(1, 1), r(1, 1))]),
        SigmaPoly::new(p, [(zero.clone(), r(2, 1)), (x(0, 2), r(1, 3))]),
        SigmaPoly::new(p, [(zero.clone(), t(1, 1)), (x(1, 1), r(1, 1))]),
        SigmaPoly::new(p, [(zero.clone(), &r(1, 1) + &t(2, 1)), (x(0, 1), t(1, -1))]),
        SigmaPoly::new(p, [(zero.clone(), r(-1, 2)), (x(0, 1), r(1, 1)), (x(0, 3), r(1, 1))]),
        SigmaPoly::new(p, [(x(0, 1), r(1, 1)), (x(1, 1), r(1, 1)), (zero.clone(), r(3, 1))]),
        SigmaPoly::new(p, [(x(1, 2), t(3, 1)), (zero.clone(), r(1, 1)), (xy(1, 0), r(-2, 1))]),
        SigmaPoly::new(p, [(zero, r(5, 1)), (xy(2, 1), t(1, 1)), (x(1, 1), r(-1, 1))]),
    ]
}

/// Checks the corner statement for a lower set `A`: expressions over the
/// restriction to `A` act on the leaves of `V(A)` exactly as their images
/// in the algebra of `P`, and those images kill every `V(p)` with `p ∉ A`.
pub fn check_corner(
    space: &Space,
    a: &LowerSet,
    rng: &mut impl Rng,
    count: usize,
) -> std::result::Result<usize, String> {
    let alg = space.algebra();
    let (sub, keep) = alg.poset().restrict(&a.members);
    let sub_alg = Algebra::new(sub);
    let sub_space = Space::build(&sub_alg);
    let map_gen = |g: &Gen| match *g {
        Gen::E(p) => Gen::E(keep[p]),
        Gen::Epq(p, j) => Gen::Epq(keep[p], j),
        Gen::EPrime(p) => Gen::EPrime(keep[p]),
        Gen::Alpha(p, j) => Gen::Alpha(keep[p], j),
        Gen::AlphaBar(p, j) => Gen::AlphaBar(keep[p], j),
        Gen::Beta(p, j) => Gen::Beta(keep[p], j),
        Gen::BetaBar(p, j) => Gen::BetaBar(keep[p], j),
        Gen::Scalar(ref c) => Gen::Scalar(c.clone()),
    };
    let map_leaf = |l: &BranchPath| BranchPath {
        steps: l.steps.iter().map(|&(v, j)| (keep[v], j)).collect(),
        bottom: keep[l.bottom],
    };
    let map_vec = |v: &RepVector| {
        let mut out = RepVector::zero();
        for (l, c) in v.entries() {
            out.add_entry(map_leaf(l), c.clone());
        }
        out
    };
    let sub_samples = sub_space.samples(3);
    let outside: Vec<RepVector> = space
        .samples(3)
        .into_iter()
        .filter(|v| v.entries.keys().all(|l| !a.contains(l.top())))
        .collect();
    let mut checked = 0;
    for _ in 0..count {
        if sub_alg.poset().is_empty() {
            break;
        }
        let n_terms = rng.random_range(1..=3);
        let e = sub_alg.random_expr(rng, 3, n_terms);
        let big = Expr {
            terms: e
                .terms
                .iter()
                .map(|(k, w)| (k.clone(), w.iter().map(map_gen).collect()))
                .collect(),
        };
        let x_big = alg.reduce(&big).map_err(|err| err.to_string())?;
        for v in &sub_samples {
            let inside = map_vec(&sub_space.act_expr(&e, v).map_err(|err| err.to_string())?);
            let via_p = space.act_element(&x_big, &map_vec(v)).map_err(|err| err.to_string())?;
            if inside != via_p {
                return Err(format!("corner mismatch for {x_big} on {v}"));
            }
            checked += 1;
        }
        for v in &outside {
            let w = space.act_element(&x_big, v).map_err(|err| err.to_string())?;
            if !w.is_zero() {
                return Err(format!("{x_big} moves {v} outside the corner"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Outcome of one relation check, for reports.
#[derive(Debug, Clone, Serialize)]
pub struct RelationVerdict {
    pub family: String,
    pub relation: String,
    pub rewriting: bool,
    pub representation: bool,
    pub counterexample: Option<String>,
}

/// Checks every relation of the suite in the rewriting engine (both sides
/// reduce to the same element) and in the representation at `depth`.
pub fn verify_relations(space: &Space, depth: u32) -> Vec<RelationVerdict> {
    let alg = space.algebra();
    let samples = space.samples(depth);
    let suite = crate::leavitt::relation_suite(alg);
    let check = |r: &crate::leavitt::Relation| {
        let rewriting = alg.reduce(&r.lhs).ok() == alg.reduce(&r.rhs).ok();
        let rep = space.check_relation(&r.lhs, &r.rhs, &samples);
        RelationVerdict {
            family: r.family.to_string(),
            relation: r.text.clone(),
            rewriting,
            representation: rep.is_ok(),
            counterexample: rep.err().map(|c| format!("{} gives {} vs {}", c.vector, c.lhs, c.rhs)),
        }
    };
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = suite.len().div_ceil(threads).max(1);
    std::thread::scope(|sc| {
        let handles: Vec<_> = suite
            .chunks(chunk)
            .map(|part| sc.spawn(move || part.iter().map(check).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("relation worker"))
            .collect()
    })
}

/// For the two-element chain `q < p`: `ᾱα = e(p)` holds while `αᾱ ≠ e(p)`
/// (it is `e(p) - e(p,q)`). Returns the three verdicts in that order.
pub fn baby_toeplitz(depth: u32) -> (bool, bool, bool) {
    let poset = crate::poset::parse_poset("elems p q; covers q<p").expect("chain");
    let alg = Algebra::new(poset);
    let space = Space::build(&alg);
    let samples = space.samples(depth);
    let pe = |s: &str| crate::leavitt::parse_expr(alg.poset(), s).expect("expression");
    let ok = |l: &str, r: &str| space.check_relation(&pe(l), &pe(r), &samples).is_ok();
    (
        ok("A[p,q]*a[p,q]", "e[p]"),
        ok("a[p,q]*A[p,q]", "e[p]"),
        ok("a[p,q]*A[p,q]", "e[p] - e[p,q]"),
    )
}

#[cfg(test)]
mod tests;
