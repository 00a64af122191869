//! Sparse multivariate Laurent polynomials over Q and fractions of them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The variable `t_i` of the scalar field, `i >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TVar(pub u32);

impl fmt::Display for TVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// A monomial as a sorted list of `(variable, nonzero exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<V>(Vec<(V, i32)>);

impl<V: Ord + Clone> Monomial<V> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: V, e: i32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (V, i32)>) -> Self {
        let mut m: BTreeMap<V, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(V, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: &V) -> i32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_pairs(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn inv(&self) -> Self {
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), -e)).collect())
    }
}

/// A sparse Laurent polynomial with rational coefficients; no zero terms
/// are stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent<V: Ord> {
    terms: BTreeMap<Monomial<V>, Rat>,
}

impl<V: Ord + Clone> Default for Laurent<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Ord + Clone> Laurent<V> {
    pub fn zero() -> Self {
        Laurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial<V>, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Laurent { terms }
    }

    pub fn var(v: V, e: i32) -> Self {
        Self::term(Monomial::var(v, e), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// The single term, if there is exactly one.
    pub fn as_term(&self) -> Option<(&Monomial<V>, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &Rat)> {
        self.terms.iter()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial<V>, Rat)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial<V>) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes every variable `v` by `w^k` where `(w, k) = f(v)`.
    pub fn substitute<W: Ord + Clone>(&self, f: impl Fn(&V) -> (W, i32)) -> Laurent<W> {
        Laurent::from_terms(self.terms.iter().map(|(m, c)| {
            let pairs = m.0.iter().map(|(v, e)| {
                let (w, k) = f(v);
                (w, e * k)
            });
            (Monomial::from_pairs(pairs), c.clone())
        }))
    }

    /// Sends every monomial through `f`; `None` drops the term.
    pub fn filter_map_monomials(&self, f: impl Fn(&Monomial<V>) -> Option<Monomial<V>>) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter_map(|(m, c)| f(m).map(|n| (n, c.clone()))),
        )
    }

    /// Replaces `t ↦ t⁻¹` for every variable.
    pub fn invert_vars(&self) -> Self {
        self.substitute(|v| (v.clone(), -1))
    }

    pub fn involves(&self, pred: impl Fn(&V) -> bool) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|(v, _)| pred(v)))
    }

    /// Minimum and maximum exponent of the variable over all terms.
    pub fn degree_range(&self, v: &V) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.exponent(v));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }
}

impl<V: Ord + Clone> Add for &Laurent<V> {
    type Output = Laurent<V>;
    fn add(self, rhs: &Laurent<V>) -> Laurent<V> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<V: Ord + Clone> Sub for &Laurent<V> {
    type Output = Laurent<V>;
    fn sub(self, rhs: &Laurent<V>) -> Laurent<V> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<V: Ord + Clone> Neg for &Laurent<V> {
    type Output = Laurent<V>;
    fn neg(self) -> Laurent<V> {
        Laurent {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<V: Ord + Clone> Mul for &Laurent<V> {
    type Output = Laurent<V>;
    fn mul(self, rhs: &Laurent<V>) -> Laurent<V> {
        let mut out = Laurent::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl<V: Ord + Clone + fmt::Display> fmt::Display for Laurent<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                parts.push(fmt_rat(&a));
            }
            for (v, e) in &m.0 {
                if *e == 1 {
                    parts.push(v.to_string());
                } else {
                    parts.push(format!("{v}^{e}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// A fraction `num / den` of Laurent polynomials. Equality is decided by
/// cross-multiplication; no gcd is taken, but a denominator that is a
/// single term is always absorbed into the numerator.
#[derive(Debug, Clone)]
pub struct RatFunc<V: Ord> {
    num: Laurent<V>,
    den: Laurent<V>,
}

impl<V: Ord + Clone> RatFunc<V> {
    pub fn new(num: Laurent<V>, den: Laurent<V>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFunc { num, den };
        r.normalize();
        r
    }

    pub fn zero() -> Self {
        Self::from(Laurent::zero())
    }

    pub fn one() -> Self {
        Self::from(Laurent::one())
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Laurent::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        if let Some((m, c)) = self.den.as_term() {
            let inv = m.inv();
            let s = c.recip();
            self.num = self.num.mul_monomial(&inv).scale(&s);
            self.den = Laurent::one();
        } else if self.num == self.den {
            self.num = Laurent::one();
            self.den = Laurent::one();
        }
    }

    pub fn num(&self) -> &Laurent<V> {
        &self.num
    }

    pub fn den(&self) -> &Laurent<V> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    pub fn mul_laurent(&self, p: &Laurent<V>) -> Self {
        Self::new(&self.num * p, self.den.clone())
    }

    /// Applies a monomial map to the numerator, keeping the denominator.
    /// Only meaningful when the map is a ring operation on the numerator
    /// that the denominator does not see.
    pub fn map_num(&self, f: impl Fn(&Laurent<V>) -> Laurent<V>) -> Self {
        Self::new(f(&self.num), self.den.clone())
    }

    pub fn substitute<W: Ord + Clone>(&self, f: impl Fn(&V) -> (W, i32)) -> RatFunc<W> {
        RatFunc::new(self.num.substitute(&f), self.den.substitute(&f))
    }
}

impl<V: Ord + Clone> From<Laurent<V>> for RatFunc<V> {
    fn from(num: Laurent<V>) -> Self {
        RatFunc {
            num,
            den: Laurent::one(),
        }
    }
}

impl<V: Ord + Clone> PartialEq for RatFunc<V> {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl<V: Ord + Clone> Eq for RatFunc<V> {}

impl<V: Ord + Clone> Add for &RatFunc<V> {
    type Output = RatFunc<V>;
    fn add(self, rhs: &RatFunc<V>) -> RatFunc<V> {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<V: Ord + Clone> Sub for &RatFunc<V> {
    type Output = RatFunc<V>;
    fn sub(self, rhs: &RatFunc<V>) -> RatFunc<V> {
        self + &(-rhs)
    }
}

impl<V: Ord + Clone> Neg for &RatFunc<V> {
    type Output = RatFunc<V>;
    fn neg(self) -> RatFunc<V> {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<V: Ord + Clone> Mul for &RatFunc<V> {
    type Output = RatFunc<V>;
    fn mul(self, rhs: &RatFunc<V>) -> RatFunc<V> {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<V: Ord + Clone + fmt::Display> fmt::Display for RatFunc<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = Laurent<TVar>;

    fn t(i: u32, e: i32) -> P {
        P::var(TVar(i), e)
    }

    fn c(n: i64) -> P {
        P::constant(rat(n, 1))
    }

    #[test]
    fn laurent_arithmetic() {
        let x = &t(1, 1) + &c(1);
        let y = &t(1, -1) - &c(1);
        // (t1 + 1)(t1^-1 - 1) = t1^-1 - t1
        assert_eq!(&x * &y, &t(1, -1) - &t(1, 1));
        assert!((&x - &x).is_zero());
        assert_eq!(x.to_string(), "1 + t1");
        assert_eq!((-&t(2, -3)).to_string(), "-t2^-3");
        assert_eq!(x.pow(2), &(&t(1, 2) + &t(1, 1).scale(&rat(2, 1))) + &c(1));
    }

    #[test]
    fn substitution_shifts_and_inverts() {
        let x = &t(1, 2) + &t(3, -1);
        let shifted = x.substitute(|v| (TVar(v.0 + 1), 1));
        assert_eq!(shifted, &t(2, 2) + &t(4, -1));
        assert_eq!(x.invert_vars(), &t(1, -2) + &t(3, 1));
        assert_eq!(x.degree_range(&TVar(1)), Some((0, 2)));
    }

    #[test]
    fn ratfunc_equality_by_cross_multiplication() {
        let one_minus = &c(1) - &t(1, 1);
        let a = RatFunc::new(&c(1) - &t(1, 2), one_minus.clone());
        let b = RatFunc::from(&c(1) + &t(1, 1));
        assert_eq!(a, b);
        let inv = RatFunc::from(one_minus.clone()).inv();
        assert_eq!(&inv * &RatFunc::from(one_minus), RatFunc::one());
        // monomial denominators are absorbed
        let m = RatFunc::new(c(3), t(2, 1).scale(&rat(2, 1)));
        assert!(m.is_polynomial());
        assert_eq!(m.num(), &t(2, -1).scale(&rat(3, 2)));
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        proptest::collection::vec((1u32..4, -2i32..3, -3i64..4), 0..4).prop_map(|v| {
            P::from_terms(
                v.into_iter()
                    .map(|(i, e, k)| (Monomial::var(TVar(i), e), rat(k, 1))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(x in arb_poly(), y in arb_poly(), z in arb_poly()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
        }

        #[test]
        fn ratfunc_field_ops(x in arb_poly(), y in arb_poly()) {
            prop_assume!(!y.is_zero());
            let q = RatFunc::new(x.clone(), y.clone());
            prop_assert_eq!(q.mul_laurent(&y), RatFunc::from(x.clone()));
            let s = &q + &q;
            prop_assert_eq!(s, q.scale(&rat(2, 1)));
        }
    }
}
