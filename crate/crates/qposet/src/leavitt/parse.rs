//! Linear syntax for algebra elements.
//!
//! `a[p,q]` is `α_{p,q}`, `A[p,q]` is `ᾱ_{p,q}`, `b`/`B` likewise for `β`,
//! `e[p]`, `e[p,q]`, `E[p]` for `e'(p)`, `t3` and `t3^-1` for scalars, and
//! rationals such as `2` or `-1/3`. Factors are joined by `*` (or plain
//! juxtaposition), summands by `+` and `-`, and any factor may be raised to
//! a power `^n`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{t_pow, AlgElement, Coeff, Expr, Gen, TermShape};
use crate::error::{Error, Result};
use crate::poly::Rat;
use crate::poset::LabelledPoset;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    P(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if "+-*^()[],/".contains(c) {
            out.push(Tok::P(c));
            chars.next();
        } else if c.is_alphanumeric() || "_'~@.".contains(c) {
            let mut w = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_alphanumeric() || "_'~@.".contains(d) {
                    w.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Word(w));
        } else {
            return Err(Error::Parse {
                pos: out.len(),
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    poset: &'a LabelledPoset,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek_p(&self, c: char) -> bool {
        self.toks.get(self.pos) == Some(&Tok::P(c))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek_p(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> Result<String> {
        match self.toks.get(self.pos) {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err("expected a name or number")),
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        let w = self.word()?;
        w.parse().map_err(|_| self.err(format!("`{w}` is not a number")))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.scale(&-Rat::one());
        }
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?);
            } else if self.eat('-') {
                acc = acc.add(self.term()?.scale(&-Rat::one()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.toks.get(self.pos), Some(Tok::Word(_)) | Some(Tok::P('(')))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') || self.starts_primary() {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let k: u32 = self
            .number()?
            .try_into()
            .map_err(|_| self.err("exponent too large"))?;
        if !neg {
            let mut out = Expr::scalar(Rat::one());
            for _ in 0..k {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        // negative powers only for a single scalar monomial
        match base.terms.as_slice() {
            [(c, w)] if w.is_empty() && !c.is_zero() => Ok(Expr::scalar(c.recip().pow(k as i32))),
            [(c, w)] if c.is_one() => match w.as_slice() {
                [Gen::Scalar(s)] if s.as_term().is_some_and(|(_, x)| x.is_one()) => {
                    let (m, _) = s.as_term().expect("single term");
                    let inv = Coeff::term(m.inv(), Rat::one()).pow(k);
                    Ok(Expr::gen(Gen::Scalar(inv)))
                }
                _ => Err(self.err("negative power of a non-scalar")),
            },
            _ => Err(self.err("negative power of a non-scalar")),
        }
    }

    fn vertex(&mut self) -> Result<usize> {
        let w = self.word()?;
        self.poset.index(&w)
    }

    fn pair(&mut self) -> Result<(usize, usize)> {
        self.expect('[')?;
        let p = self.vertex()?;
        self.expect(',')?;
        let q = self.vertex()?;
        self.expect(']')?;
        let j = self.poset.cover_label(p, q).ok_or_else(|| {
            Error::Invalid(format!(
                "`{}` is not a lower cover of `{}`",
                self.poset.name(q),
                self.poset.name(p)
            ))
        })?;
        Ok((p, j))
    }

    fn primary(&mut self) -> Result<Expr> {
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        let w = self.word()?;
        if w.chars().all(|c| c.is_ascii_digit()) {
            let n: BigInt = w.parse().map_err(|_| self.err("bad number"))?;
            let d = if self.eat('/') { self.number()? } else { BigInt::one() };
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Expr::scalar(Rat::new(n, d)));
        }
        if let Some(i) = w.strip_prefix('t').and_then(|s| s.parse::<u32>().ok()) {
            if i == 0 {
                return Err(self.err("scalar variables start at t1"));
            }
            return Ok(Expr::gen(Gen::Scalar(t_pow(i, 1))));
        }
        let g = match w.as_str() {
            "a" | "A" | "b" | "B" => {
                let (p, j) = self.pair()?;
                match w.as_str() {
                    "a" => Gen::Alpha(p, j),
                    "A" => Gen::AlphaBar(p, j),
                    "b" => Gen::Beta(p, j),
                    _ => Gen::BetaBar(p, j),
                }
            }
            "e" => {
                self.expect('[')?;
                let p = self.vertex()?;
                if self.eat(',') {
                    let q = self.vertex()?;
                    self.expect(']')?;
                    let j = self.poset.cover_label(p, q).ok_or_else(|| {
                        Error::Invalid(format!("`{}` is not a lower cover", self.poset.name(q)))
                    })?;
                    Gen::Epq(p, j)
                } else {
                    self.expect(']')?;
                    Gen::E(p)
                }
            }
            "E" => {
                self.expect('[')?;
                let p = self.vertex()?;
                self.expect(']')?;
                Gen::EPrime(p)
            }
            other => return Err(self.err(format!("unknown generator `{other}`"))),
        };
        Ok(Expr::gen(g))
    }
}

/// Parses the linear syntax into an unreduced word sum.
pub fn parse_expr(poset: &LabelledPoset, text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        poset,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

fn pow_factor(s: String, k: u32) -> String {
    if k == 1 {
        s
    } else {
        format!("{s}^{k}")
    }
}

fn shape_factors(poset: &LabelledPoset, s: &TermShape) -> (Vec<String>, Vec<String>) {
    let nm = |v: usize| poset.name(v);
    let pair = |v: usize, j: usize| format!("{},{}", nm(v), nm(poset.lower_covers(v)[j]));
    let mut left = Vec::new();
    for st in &s.left {
        if st.exp > 0 {
            left.push(pow_factor(format!("a[{}]", pair(st.vertex, st.cover)), st.exp));
        }
        left.push(format!("b[{}]", pair(st.vertex, st.cover)));
    }
    let mut rest = Vec::new();
    for (l, &a) in s.exps.iter().enumerate() {
        if a != 0 {
            let head = if a > 0 { "a" } else { "A" };
            rest.push(pow_factor(format!("{head}[{}]", pair(s.middle, l)), a.unsigned_abs()));
        }
    }
    for st in s.right.iter().rev() {
        rest.push(format!("B[{}]", pair(st.vertex, st.cover)));
        if st.exp > 0 {
            rest.push(pow_factor(format!("A[{}]", pair(st.vertex, st.cover)), st.exp));
        }
    }
    if left.is_empty() && rest.is_empty() {
        rest.push(format!("e[{}]", nm(s.middle)));
    }
    (left, rest)
}

pub(super) fn format_element(x: &AlgElement) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let poset = x.algebra().poset();
    let mut out = String::new();
    for (i, (s, c)) in x.terms().enumerate() {
        let (left, rest) = shape_factors(poset, s);
        // a single-term coefficient carries its sign outside
        let (neg, coeff) = match c.as_term() {
            Some((m, k)) => {
                let mag = Coeff::term(m.clone(), k.abs());
                (k.is_negative(), if mag.is_one() { None } else { Some(mag.to_string()) })
            }
            None => (false, Some(format!("({c})"))),
        };
        out.push_str(match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let mut factors = left;
        factors.extend(coeff);
        factors.extend(rest);
        out.push_str(&factors.join("*"));
    }
    out
}
