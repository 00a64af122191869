//! Rewriting engine for the algebra generated over `L = Q(t_1, t_2, ...)` by
//! the idempotents `e(p)`, `e(p,q)` and the arrows `α, ᾱ, β, β̄` of the cover
//! quiver of a labelled poset, before any Σ-inverse is adjoined.
//!
//! Every element is a finite sum of terms
//!
//! ```text
//! α_1^{m_1} β_1 ⋯ α_k^{m_k} β_k · c · 𝔪 · β̄'_l ᾱ'^{n_l}_l ⋯ β̄'_1 ᾱ'^{n_1}_1
//! ```
//!
//! where the left and right parts are descending paths of the quiver that
//! end at the same vertex `u`, `c` is a Laurent polynomial in the `t_i` and
//! `𝔪` is a monomial in the `α_{u,q}, ᾱ_{u,q}` with one signed exponent per
//! lower cover of `u`. Products are computed by right-multiplying a term by
//! one generator at a time:
//!
//! - scalars move right through `β_{p,q}` and left through `β̄_{p,q}` as
//!   `σ^p`, which shifts `t_i ↦ t_{i + n_p - 1}`;
//! - `ᾱα = e`, `β̄β = e(q)`, while `ᾱβ`, `β̄α` and `β̄_q β_{q'}` vanish;
//! - `α_ℓ β_j = β_j t_{σ_j(ℓ)}` and `ᾱ_ℓ β_j = β_j t_{σ_j(ℓ)}^{-1}`;
//! - `α ᾱ = e(p) - β β̄` is the only rule that creates a second term.
//!
//! Each rule either shortens the right part, lowers a middle exponent
//! towards zero, or moves to a vertex strictly lower in the poset, so
//! reduction terminates.

mod parse;
mod relations;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{rat, Laurent, Monomial, Rat, TVar};
use crate::poset::{LabelledPoset, LowerSet};

pub use parse::parse_expr;
pub use relations::{relation_suite, Relation, SAMPLE_SCALARS};

/// Scalars: Laurent polynomials in the `t_i`.
pub type Coeff = Laurent<TVar>;

pub fn t_pow(i: u32, e: i32) -> Coeff {
    Coeff::var(TVar(i), e)
}

/// `α_{p,q}^exp β_{p,q}` with `q` the lower cover of `vertex` at `cover`;
/// on the right of a term the same data stands for `β̄_{p,q} ᾱ_{p,q}^exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub vertex: usize,
    pub exp: u32,
    pub cover: usize,
}

/// The shape of a term: both paths are listed from the top down.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermShape {
    pub left: Vec<Step>,
    pub middle: usize,
    pub exps: Vec<i32>,
    pub right: Vec<Step>,
}

impl TermShape {
    pub fn end(&self) -> usize {
        self.right.first().map_or(self.middle, |s| s.vertex)
    }

    pub fn start(&self) -> usize {
        self.left.first().map_or(self.middle, |s| s.vertex)
    }

    pub fn left_path(&self) -> Vec<usize> {
        path(&self.left, self.middle)
    }

    pub fn right_path(&self) -> Vec<usize> {
        path(&self.right, self.middle)
    }

    pub fn is_trivial(&self) -> bool {
        self.left.is_empty() && self.right.is_empty() && self.exps.iter().all(|&a| a == 0)
    }
}

fn path(steps: &[Step], end: usize) -> Vec<usize> {
    steps.iter().map(|s| s.vertex).chain([end]).collect()
}

/// Generators. Cover indices are positions in the label order, from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gen {
    E(usize),
    Epq(usize, usize),
    EPrime(usize),
    Alpha(usize, usize),
    AlphaBar(usize, usize),
    Beta(usize, usize),
    BetaBar(usize, usize),
    Scalar(Coeff),
}

/// An unreduced linear combination of words in the generators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expr {
    pub terms: Vec<(Rat, Vec<Gen>)>,
}

impl Expr {
    pub fn word(w: Vec<Gen>) -> Self {
        Expr {
            terms: vec![(Rat::one(), w)],
        }
    }

    pub fn gen(g: Gen) -> Self {
        Self::word(vec![g])
    }

    pub fn scalar(c: Rat) -> Self {
        Expr {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn add(mut self, other: Expr) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn scale(mut self, c: &Rat) -> Self {
        for t in &mut self.terms {
            t.0 *= c;
        }
        self
    }

    pub fn mul(&self, other: &Expr) -> Self {
        let mut terms = Vec::new();
        for (c1, w1) in &self.terms {
            for (c2, w2) in &other.terms {
                let w = w1.iter().chain(w2.iter()).cloned().collect();
                terms.push((c1 * c2, w));
            }
        }
        Expr { terms }
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }
}

/// The algebra of a labelled poset. Shared by all its elements.
#[derive(Debug, PartialEq, Eq)]
pub struct Algebra {
    poset: LabelledPoset,
}

/// `σ_j(ℓ)` for `ℓ ≠ j`, with both indices from 0 and the result from 1.
pub fn sigma_index(j: usize, l: usize) -> u32 {
    debug_assert_ne!(j, l);
    if l < j {
        l as u32 + 1
    } else {
        l as u32
    }
}

pub(crate) fn shift_coeff(c: &Coeff, k: u32) -> Coeff {
    if k == 0 {
        c.clone()
    } else {
        c.substitute(|v| (TVar(v.0 + k), 1))
    }
}

type TermMap = BTreeMap<TermShape, Coeff>;

fn accumulate(map: &mut TermMap, shape: TermShape, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&shape) {
        Some(slot) => {
            *slot = &*slot + &c;
            if slot.is_zero() {
                map.remove(&shape);
            }
        }
        None => {
            map.insert(shape, c);
        }
    }
}

impl Algebra {
    pub fn new(poset: LabelledPoset) -> Arc<Self> {
        Arc::new(Algebra { poset })
    }

    pub fn poset(&self) -> &LabelledPoset {
        &self.poset
    }

    pub fn covers(&self, p: usize) -> &[usize] {
        self.poset.lower_covers(p)
    }

    pub fn n(&self, p: usize) -> usize {
        self.poset.n_covers(p)
    }

    /// The index shift of `σ^p`.
    pub fn sigma_shift(&self, p: usize) -> u32 {
        self.n(p).saturating_sub(1) as u32
    }

    fn steps_shift(&self, steps: &[Step]) -> u32 {
        steps.iter().map(|s| self.sigma_shift(s.vertex)).sum()
    }

    fn check_gen(&self, g: &Gen) -> Result<()> {
        let n = self.poset.len();
        let bad = |msg: String| Err(Error::Invalid(msg));
        match *g {
            Gen::E(p) | Gen::EPrime(p) if p >= n => bad(format!("vertex {p} out of range")),
            Gen::Epq(p, j)
            | Gen::Alpha(p, j)
            | Gen::AlphaBar(p, j)
            | Gen::Beta(p, j)
            | Gen::BetaBar(p, j)
                if p >= n || j >= self.n(p) =>
            {
                bad(format!("no cover {j} below vertex {p}"))
            }
            Gen::Scalar(ref c) if c.involves(|v| v.0 == 0) => bad("scalar variable t0".into()),
            _ => Ok(()),
        }
    }

    fn unit_shape(&self, u: usize) -> TermShape {
        TermShape {
            left: Vec::new(),
            middle: u,
            exps: vec![0; self.n(u)],
            right: Vec::new(),
        }
    }

    fn element(self: &Arc<Self>, terms: TermMap) -> AlgElement {
        AlgElement {
            alg: Arc::clone(self),
            terms,
        }
    }

    pub fn zero(self: &Arc<Self>) -> AlgElement {
        self.element(TermMap::new())
    }

    pub fn one(self: &Arc<Self>) -> AlgElement {
        self.scalar(Coeff::one())
    }

    pub fn scalar(self: &Arc<Self>, c: Coeff) -> AlgElement {
        let mut m = TermMap::new();
        for p in 0..self.poset.len() {
            accumulate(&mut m, self.unit_shape(p), c.clone());
        }
        self.element(m)
    }

    pub fn gen(self: &Arc<Self>, g: &Gen) -> Result<AlgElement> {
        self.check_gen(g)?;
        Ok(self.element(self.gen_terms(g)))
    }

    fn gen_terms(&self, g: &Gen) -> TermMap {
        let mut m = TermMap::new();
        let one = Coeff::one();
        match *g {
            Gen::E(p) => accumulate(&mut m, self.unit_shape(p), one),
            Gen::Alpha(p, j) | Gen::AlphaBar(p, j) => {
                let mut s = self.unit_shape(p);
                s.exps[j] = if matches!(g, Gen::Alpha(..)) { 1 } else { -1 };
                accumulate(&mut m, s, one);
            }
            Gen::Beta(p, j) => {
                let mut s = self.unit_shape(self.covers(p)[j]);
                s.left.push(Step { vertex: p, exp: 0, cover: j });
                accumulate(&mut m, s, one);
            }
            Gen::BetaBar(p, j) => {
                let mut s = self.unit_shape(self.covers(p)[j]);
                s.right.push(Step { vertex: p, exp: 0, cover: j });
                accumulate(&mut m, s, one);
            }
            Gen::Epq(p, j) => {
                let mut s = self.unit_shape(self.covers(p)[j]);
                let st = Step { vertex: p, exp: 0, cover: j };
                s.left.push(st);
                s.right.push(st);
                accumulate(&mut m, s, one);
            }
            Gen::EPrime(p) => {
                accumulate(&mut m, self.unit_shape(p), one.clone());
                for j in 0..self.n(p) {
                    for (s, c) in self.gen_terms(&Gen::Epq(p, j)) {
                        accumulate(&mut m, s, -&c);
                    }
                }
            }
            Gen::Scalar(ref c) => {
                for p in 0..self.poset.len() {
                    accumulate(&mut m, self.unit_shape(p), c.clone());
                }
            }
        }
        m
    }

    /// The generator word spelling one term, read left to right.
    pub fn term_word(&self, s: &TermShape, c: &Coeff) -> Vec<Gen> {
        let mut w = vec![Gen::E(s.start())];
        for st in &s.left {
            for _ in 0..st.exp {
                w.push(Gen::Alpha(st.vertex, st.cover));
            }
            w.push(Gen::Beta(st.vertex, st.cover));
        }
        if !c.is_one() {
            w.push(Gen::Scalar(c.clone()));
        }
        let u = s.middle;
        for (l, &a) in s.exps.iter().enumerate() {
            let g = if a > 0 { Gen::Alpha(u, l) } else { Gen::AlphaBar(u, l) };
            for _ in 0..a.unsigned_abs() {
                w.push(g.clone());
            }
        }
        for st in s.right.iter().rev() {
            w.push(Gen::BetaBar(st.vertex, st.cover));
            for _ in 0..st.exp {
                w.push(Gen::AlphaBar(st.vertex, st.cover));
            }
        }
        w
    }

    /// Right-multiplies the term `c · s` by a generator other than `e(p,q)`
    /// and `e'(p)`.
    fn rmul_letter(&self, s: &TermShape, c: &Coeff, g: &Gen, out: &mut TermMap) {
        let end = s.end();
        match *g {
            Gen::E(v) => {
                if v == end {
                    accumulate(out, s.clone(), c.clone());
                }
            }
            Gen::Scalar(ref l) => {
                let l = shift_coeff(l, self.steps_shift(&s.right));
                accumulate(out, s.clone(), c * &l);
            }
            Gen::Alpha(v, y) | Gen::AlphaBar(v, y) if v == end => {
                let bar = matches!(g, Gen::AlphaBar(..));
                if let Some(top) = s.right.first() {
                    let x = top.cover;
                    if y == x {
                        if bar {
                            let mut s2 = s.clone();
                            s2.right[0].exp += 1;
                            accumulate(out, s2, c.clone());
                        } else if top.exp > 0 {
                            let mut s2 = s.clone();
                            s2.right[0].exp -= 1;
                            accumulate(out, s2, c.clone());
                        }
                    } else {
                        let t = t_pow(sigma_index(x, y), if bar { -1 } else { 1 });
                        let t = shift_coeff(&t, self.steps_shift(&s.right[1..]));
                        accumulate(out, s.clone(), c * &t);
                    }
                } else if !bar || s.exps[y] <= 0 {
                    let mut s2 = s.clone();
                    s2.exps[y] += if bar { -1 } else { 1 };
                    accumulate(out, s2, c.clone());
                } else {
                    // α^a ᾱ = α^{a-1} - α^{a-1} β β̄
                    let mut s1 = s.clone();
                    s1.exps[y] -= 1;
                    accumulate(out, s1, c.clone());
                    let (mut s2, c2) = self.push_beta(s, c, y, s.exps[y] as u32 - 1);
                    s2.right.push(Step { vertex: s.middle, exp: 0, cover: y });
                    accumulate(out, s2, -&c2);
                }
            }
            Gen::Beta(v, y) if v == end => {
                if let Some(top) = s.right.first() {
                    if top.cover == y && top.exp == 0 {
                        let mut s2 = s.clone();
                        s2.right.remove(0);
                        accumulate(out, s2, c.clone());
                    }
                } else if s.exps[y] >= 0 {
                    let (s2, c2) = self.push_beta(s, c, y, s.exps[y] as u32);
                    accumulate(out, s2, c2);
                }
            }
            Gen::BetaBar(w, j) => {
                if self.covers(w)[j] == end {
                    let mut s2 = s.clone();
                    s2.right.insert(0, Step { vertex: w, exp: 0, cover: j });
                    accumulate(out, s2, c.clone());
                }
            }
            Gen::Epq(p, j) => {
                let mut mid = TermMap::new();
                self.rmul_letter(s, c, &Gen::Beta(p, j), &mut mid);
                for (s2, c2) in &mid {
                    self.rmul_letter(s2, c2, &Gen::BetaBar(p, j), out);
                }
            }
            Gen::EPrime(p) => {
                self.rmul_letter(s, c, &Gen::E(p), out);
                for j in 0..self.n(p) {
                    let mut part = TermMap::new();
                    self.rmul_letter(s, c, &Gen::Epq(p, j), &mut part);
                    for (s2, c2) in part {
                        accumulate(out, s2, -&c2);
                    }
                }
            }
            _ => {}
        }
    }

    /// Moves the middle of a term with empty right part through `β_{u,q_y}`,
    /// keeping `α_y^exp` on the left.
    fn push_beta(&self, s: &TermShape, c: &Coeff, y: usize, exp: u32) -> (TermShape, Coeff) {
        let u = s.middle;
        let q = self.covers(u)[y];
        let mut coeff = shift_coeff(c, self.sigma_shift(u));
        let factors = s
            .exps
            .iter()
            .enumerate()
            .filter(|&(l, &a)| l != y && a != 0)
            .map(|(l, &a)| (TVar(sigma_index(y, l)), a));
        let m = Monomial::from_pairs(factors);
        coeff = coeff.mul_monomial(&m);
        let mut left = s.left.clone();
        left.push(Step { vertex: u, exp, cover: y });
        let shape = TermShape {
            left,
            middle: q,
            exps: vec![0; self.n(q)],
            right: Vec::new(),
        };
        (shape, coeff)
    }

    fn rmul_gen_map(&self, x: &TermMap, g: &Gen) -> TermMap {
        let mut out = TermMap::new();
        for (s, c) in x {
            self.rmul_letter(s, c, g, &mut out);
        }
        out
    }

    pub fn reduce(self: &Arc<Self>, e: &Expr) -> Result<AlgElement> {
        let mut total = TermMap::new();
        for (k, w) in &e.terms {
            for g in w {
                self.check_gen(g)?;
            }
            let mut cur = self.one().terms;
            for g in w {
                cur = self.rmul_gen_map(&cur, g);
                if cur.is_empty() {
                    break;
                }
            }
            for (s, c) in cur {
                accumulate(&mut total, s, c.scale(k));
            }
        }
        Ok(self.element(total))
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<AlgElement> {
        let e = parse_expr(&self.poset, text)?;
        self.reduce(&e)
    }

    /// A random word sum: `n_terms` words of length `1..=max_degree`, each
    /// mostly following the quiver from a random start vertex.
    pub fn random_expr(&self, rng: &mut impl Rng, max_degree: usize, n_terms: usize) -> Expr {
        let n = self.poset.len();
        let mut terms = Vec::new();
        if n == 0 {
            return Expr { terms };
        }
        for _ in 0..n_terms {
            let len = rng.random_range(1..=max_degree.max(1));
            let mut v = rng.random_range(0..n);
            let mut w = Vec::new();
            for _ in 0..len {
                let (g, next) = self.random_gen(rng, v);
                w.push(g);
                v = next;
            }
            let mut k = 0;
            while k == 0 {
                k = rng.random_range(-3i64..=3);
            }
            terms.push((rat(k, rng.random_range(1i64..=2)), w));
        }
        Expr { terms }
    }

    fn random_gen(&self, rng: &mut impl Rng, v: usize) -> (Gen, usize) {
        let n = self.poset.len();
        // an occasional jump keeps some products that vanish for vertex reasons
        let v = if rng.random_bool(0.1) { rng.random_range(0..n) } else { v };
        let above: Vec<(usize, usize)> = (0..n)
            .flat_map(|w| {
                self.covers(w)
                    .iter()
                    .enumerate()
                    .filter(move |&(_, &q)| q == v)
                    .map(move |(j, _)| (w, j))
            })
            .collect();
        let k = self.n(v);
        loop {
            let pick = rng.random_range(0..9);
            let i = rng.random_range(1..=3u32);
            let e = if rng.random_bool(0.5) { 1 } else { -1 };
            let r = match pick {
                0 => Some((Gen::E(v), v)),
                1 => Some((Gen::Scalar(t_pow(i, e)), v)),
                2 => Some((Gen::EPrime(v), v)),
                _ if k == 0 && above.is_empty() => Some((Gen::E(v), v)),
                3 | 4 if k > 0 => {
                    let j = rng.random_range(0..k);
                    let g = if pick == 3 { Gen::Alpha(v, j) } else { Gen::AlphaBar(v, j) };
                    Some((g, v))
                }
                5 if k > 0 => {
                    let j = rng.random_range(0..k);
                    Some((Gen::Epq(v, j), v))
                }
                6 | 7 if k > 0 => {
                    let j = rng.random_range(0..k);
                    Some((Gen::Beta(v, j), self.covers(v)[j]))
                }
                8 if !above.is_empty() => {
                    let (w, j) = above[rng.random_range(0..above.len())];
                    Some((Gen::BetaBar(w, j), w))
                }
                _ => None,
            };
            if let Some(r) = r {
                return r;
            }
        }
    }
}

/// A reduced element.
#[derive(Debug, Clone)]
pub struct AlgElement {
    alg: Arc<Algebra>,
    terms: TermMap,
}

impl PartialEq for AlgElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.terms == other.terms
    }
}

impl Eq for AlgElement {}

/// One graded component, as reported in JSON dumps.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub element: String,
    pub terms: usize,
}

impl AlgElement {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::PosetMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermShape, &Coeff)> {
        self.terms.iter()
    }

    pub fn from_terms(
        alg: &Arc<Algebra>,
        terms: impl IntoIterator<Item = (TermShape, Coeff)>,
    ) -> AlgElement {
        let mut m = TermMap::new();
        for (s, c) in terms {
            accumulate(&mut m, s, c);
        }
        alg.element(m)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut m = self.terms.clone();
        for (s, c) in &other.terms {
            accumulate(&mut m, s.clone(), c.clone());
        }
        Ok(self.alg.element(m))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(s, c)| (s.clone(), c.scale(k)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        self.alg.element(terms)
    }

    /// The reduced product `x y`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut total = TermMap::new();
        for (s, c) in &other.terms {
            let mut cur = self.terms.clone();
            for g in self.alg.term_word(s, c) {
                cur = self.alg.rmul_gen_map(&cur, &g);
                if cur.is_empty() {
                    break;
                }
            }
            for (s2, c2) in cur {
                accumulate(&mut total, s2, c2);
            }
        }
        Ok(self.alg.element(total))
    }

    /// The involution: reverses products, `t ↦ t⁻¹`, `α ↔ ᾱ`, `β ↔ β̄`.
    pub fn involute(&self) -> Self {
        let terms = self.terms.iter().map(|(s, c)| {
            let shape = TermShape {
                left: s.right.clone(),
                middle: s.middle,
                exps: s.exps.iter().map(|a| -a).collect(),
                right: s.left.clone(),
            };
            (shape, c.invert_vars())
        });
        AlgElement::from_terms(&self.alg, terms)
    }

    /// Components by (left vertex path, right vertex path).
    pub fn grade(&self) -> BTreeMap<(Vec<usize>, Vec<usize>), AlgElement> {
        let mut out: BTreeMap<(Vec<usize>, Vec<usize>), TermMap> = BTreeMap::new();
        for (s, c) in &self.terms {
            out.entry((s.left_path(), s.right_path()))
                .or_default()
                .insert(s.clone(), c.clone());
        }
        out.into_iter().map(|(k, m)| (k, self.alg.element(m))).collect()
    }

    /// Whether every component ends at a vertex of `a`.
    pub fn in_ideal(&self, a: &LowerSet) -> bool {
        self.terms.keys().all(|s| a.contains(s.middle))
    }

    /// The image modulo the ideal generated by `e(a)`, `a ∈ A`.
    pub fn project_mod_ideal(&self, a: &LowerSet) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(s, _)| !a.contains(s.middle))
            .map(|(s, c)| (s.clone(), c.clone()))
            .collect();
        self.alg.element(terms)
    }

    pub fn components_report(&self) -> Vec<ComponentReport> {
        let names = |p: &[usize]| -> Vec<String> {
            p.iter().map(|&v| self.alg.poset.name(v).to_string()).collect()
        };
        self.grade()
            .into_iter()
            .map(|((l, r), x)| ComponentReport {
                left: names(&l),
                right: names(&r),
                element: x.to_string(),
                terms: x.len(),
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "components": self.components_report() })
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", parse::format_element(self))
    }
}

impl Add for &AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: &AlgElement) -> AlgElement {
        self.try_add(rhs).expect("elements of the same algebra")
    }
}

impl Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        self.scale(&-Rat::one())
    }
}

impl Sub for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        self + &(-rhs)
    }
}

/// Panics on operands from different algebras; use
/// [`AlgElement::multiply`] to get an error instead.
impl Mul for &AlgElement {
    type Output = AlgElement;
    fn mul(self, rhs: &AlgElement) -> AlgElement {
        self.multiply(rhs).expect("elements of the same algebra")
    }
}

/// Result of the injectivity probe: `z1 · x · z2` has the trivial pair
/// `(p, p)` in its support.
#[derive(Debug, Clone)]
pub struct Probe {
    pub vertex: usize,
    pub z1: AlgElement,
    pub z2: AlgElement,
    pub product: AlgElement,
}

/// Strips a support pair of `x` that is minimal for path extension: on the
/// left by words `β̄ ᾱ^M`, on the right by their mirrors, with `M` the
/// largest exponent occurring in that component at each step.
pub fn injectivity_probe(x: &AlgElement) -> Result<Probe> {
    let alg = Arc::clone(&x.alg);
    let (s0, _) = x
        .terms
        .iter()
        .min_by_key(|(s, _)| (s.left.len() + s.right.len(), (*s).clone()))
        .ok_or_else(|| Error::Invalid("probe of the zero element".into()))?;
    let mut left_path = s0.left_path();
    let mut right_path = s0.right_path();
    let mut z1 = alg.gen(&Gen::E(s0.start()))?;
    let mut z2 = alg.gen(&Gen::E(s0.end()))?;
    let mut cur = x.clone();
    let in_component = |s: &TermShape, l: &[usize], r: &[usize]| {
        s.left_path() == l && s.right_path() == r
    };
    while left_path.len() > 1 {
        let comp: Vec<&TermShape> = cur
            .terms
            .keys()
            .filter(|s| in_component(s, &left_path, &right_path))
            .collect();
        let st = comp[0].left[0];
        let m = comp.iter().map(|s| s.left[0].exp).max().unwrap_or(0);
        let mut w = vec![Gen::BetaBar(st.vertex, st.cover)];
        w.extend((0..m).map(|_| Gen::AlphaBar(st.vertex, st.cover)));
        let left = alg.reduce(&Expr::word(w))?;
        cur = left.multiply(&cur)?;
        z1 = left.multiply(&z1)?;
        left_path.remove(0);
    }
    while right_path.len() > 1 {
        let comp: Vec<&TermShape> = cur
            .terms
            .keys()
            .filter(|s| in_component(s, &left_path, &right_path))
            .collect();
        let st = comp[0].right[0];
        let m = comp.iter().map(|s| s.right[0].exp).max().unwrap_or(0);
        let mut w: Vec<Gen> = (0..m).map(|_| Gen::Alpha(st.vertex, st.cover)).collect();
        w.push(Gen::Beta(st.vertex, st.cover));
        let right = alg.reduce(&Expr::word(w))?;
        cur = cur.multiply(&right)?;
        z2 = z2.multiply(&right)?;
        right_path.remove(0);
    }
    let p = left_path[0];
    let ok_support = cur.terms.keys().any(|s| s.left.is_empty() && s.right.is_empty())
        && cur.terms.keys().all(|s| s.start() == p && s.end() == p);
    if !ok_support {
        return Err(Error::Invalid("probe did not reach a trivial pair".into()));
    }
    Ok(Probe {
        vertex: p,
        z1,
        z2,
        product: cur,
    })
}

/// Exhaustively checks `β̄_{p,q} 𝔪 β_{p,q'} = 0` for `q ≠ q'` and
/// `β̄_{p,q} 𝔪 β_{p,q} ∈ L e(q)` over all monomials `𝔪` at `p` with
/// exponents in `-range..=range`. Returns the number of products checked.
pub fn check_cover_sandwiches(alg: &Arc<Algebra>, range: i32) -> Result<usize> {
    let mut count = 0;
    for p in 0..alg.poset.len() {
        let k = alg.n(p);
        if k == 0 {
            continue;
        }
        for exps in exponent_vectors(k, range) {
            let mut shape = alg.unit_shape(p);
            shape.exps = exps.clone();
            let m = AlgElement::from_terms(alg, [(shape, Coeff::one())]);
            for j in 0..k {
                let bb = alg.gen(&Gen::BetaBar(p, j))?.multiply(&m)?;
                for j2 in 0..k {
                    let x = bb.multiply(&alg.gen(&Gen::Beta(p, j2))?)?;
                    count += 1;
                    let q = alg.covers(p)[j];
                    let ok = if j == j2 {
                        x.terms.keys().all(|s| s.is_trivial() && s.middle == q)
                    } else {
                        x.is_zero()
                    };
                    if !ok {
                        return Err(Error::Invalid(format!(
                            "sandwich at {} with covers {j}, {j2} and exponents {exps:?} gave {x}",
                            alg.poset.name(p)
                        )));
                    }
                }
            }
        }
    }
    Ok(count)
}

pub(crate) fn exponent_vectors(k: usize, range: i32) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-range..=range).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// A basis term for each pair of quiver paths with a common end vertex:
/// zero exponents, coefficient 1.
pub fn path_pair_basis(alg: &Arc<Algebra>) -> Vec<AlgElement> {
    let n = alg.poset.len();
    // descending step sequences ending at each vertex
    let mut into: Vec<Vec<Vec<Step>>> = vec![Vec::new(); n];
    fn extend(alg: &Algebra, prefix: &mut Vec<Step>, v: usize, into: &mut [Vec<Vec<Step>>]) {
        into[v].push(prefix.clone());
        for (j, &q) in alg.covers(v).iter().enumerate() {
            prefix.push(Step { vertex: v, exp: 0, cover: j });
            extend(alg, prefix, q, into);
            prefix.pop();
        }
    }
    for top in 0..n {
        extend(alg, &mut Vec::new(), top, &mut into);
    }
    let mut out = Vec::new();
    for u in 0..n {
        for l in &into[u] {
            for r in &into[u] {
                let shape = TermShape {
                    left: l.clone(),
                    middle: u,
                    exps: vec![0; alg.n(u)],
                    right: r.clone(),
                };
                out.push(AlgElement::from_terms(alg, [(shape, Coeff::one())]));
            }
        }
    }
    out
}

/// Failure of the lattice map `A ↦ I(A)` on a pair of lower sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeFailure {
    NotInjective(LowerSet, LowerSet),
    Join(LowerSet, LowerSet),
    Meet(LowerSet, LowerSet),
    NotIdeal(LowerSet),
}

/// Checks on the path-pair components that `A ↦ I(A)` is injective and
/// preserves joins and meets, and that each `I(A)` is closed under
/// multiplication by generators on both sides.
pub fn check_ideal_lattice(alg: &Arc<Algebra>) -> std::result::Result<usize, LatticeFailure> {
    let basis = path_pair_basis(alg);
    let sets = alg.poset.lower_sets();
    let members = |a: &LowerSet| -> BTreeSet<usize> {
        (0..basis.len()).filter(|&i| basis[i].in_ideal(a)).collect()
    };
    let table: Vec<BTreeSet<usize>> = sets.iter().map(members).collect();
    let mut gens = Vec::new();
    for p in 0..alg.poset.len() {
        gens.push(Gen::E(p));
        for j in 0..alg.n(p) {
            gens.extend([
                Gen::Alpha(p, j),
                Gen::AlphaBar(p, j),
                Gen::Beta(p, j),
                Gen::BetaBar(p, j),
            ]);
        }
    }
    let gens: Vec<AlgElement> = gens.iter().map(|g| alg.gen(g).expect("valid")).collect();
    for (ai, a) in sets.iter().enumerate() {
        for &b in &table[ai] {
            for g in &gens {
                if !(g * &basis[b]).in_ideal(a) || !(&basis[b] * g).in_ideal(a) {
                    return Err(LatticeFailure::NotIdeal(a.clone()));
                }
            }
        }
    }
    let mut checked = 0;
    for i in 0..sets.len() {
        for j in 0..sets.len() {
            let (a, b) = (&sets[i], &sets[j]);
            if i != j && table[i] == table[j] {
                return Err(LatticeFailure::NotInjective(a.clone(), b.clone()));
            }
            let join: BTreeSet<usize> = table[i].union(&table[j]).copied().collect();
            let meet: BTreeSet<usize> = table[i].intersection(&table[j]).copied().collect();
            if join != members(&a.join(b)) {
                return Err(LatticeFailure::Join(a.clone(), b.clone()));
            }
            if meet != members(&a.meet(b)) {
                return Err(LatticeFailure::Meet(a.clone(), b.clone()));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests;
