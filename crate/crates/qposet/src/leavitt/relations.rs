//! The defining relations, instantiated over a labelled poset.

use std::sync::Arc;

use super::{parse_expr, sigma_index, Algebra, Expr};

/// One instance of a defining relation, `lhs = rhs`.
#[derive(Debug, Clone)]
pub struct Relation {
    pub family: &'static str,
    pub text: String,
    pub lhs: Expr,
    pub rhs: Expr,
}

/// Scalars used to instantiate relations quantified over `λ ∈ L`, as
/// `(index, exponent)`.
pub const SAMPLE_SCALARS: [(u32, i32); 3] = [(1, 1), (2, 1), (3, -1)];

fn t(i: u32, e: i32) -> String {
    if e == 1 {
        format!("t{i}")
    } else {
        format!("t{i}^{e}")
    }
}

/// Every relation instance for the poset of `alg`. Relations quantified
/// over scalars use [`SAMPLE_SCALARS`].
pub fn relation_suite(alg: &Arc<Algebra>) -> Vec<Relation> {
    let poset = alg.poset();
    let n = poset.len();
    let nm = |v: usize| poset.name(v).to_string();
    let mut raw: Vec<(&'static str, String)> = Vec::new();
    let all_e: Vec<String> = (0..n).map(|p| format!("e[{}]", nm(p))).collect();
    if n > 0 {
        raw.push(("idempotents", format!("{} = 1", all_e.join(" + "))));
    }
    for p in 0..n {
        let ep = format!("e[{}]", nm(p));
        raw.push(("idempotents", format!("{ep}*{ep} = {ep}")));
        for p2 in 0..n {
            if p2 != p {
                raw.push(("idempotents", format!("{ep}*e[{}] = 0", nm(p2))));
            }
        }
        let covers = poset.lower_covers(p);
        let pq = |j: usize| format!("{},{}", nm(p), nm(covers[j]));
        let shift = alg.sigma_shift(p);
        for j in 0..covers.len() {
            let (a, abar, b, bbar) = (
                format!("a[{}]", pq(j)),
                format!("A[{}]", pq(j)),
                format!("b[{}]", pq(j)),
                format!("B[{}]", pq(j)),
            );
            let epq = format!("e[{}]", pq(j));
            let eq = format!("e[{}]", nm(covers[j]));
            raw.extend([
                ("idempotents", format!("{epq}*{epq} = {epq}")),
                ("idempotents", format!("{ep}*{epq} = {epq}")),
                ("idempotents", format!("{epq}*{ep} = {epq}")),
                ("alpha support", format!("{a}*{ep} = {a}")),
                ("alpha support", format!("{a} = ({ep} - {epq})*{a}")),
                ("beta support", format!("{epq}*{b} = {b}")),
                ("beta support", format!("{b}*{eq} = {b}")),
                ("alpha-bar support", format!("{ep}*{abar} = {abar}")),
                ("alpha-bar support", format!("{abar} = {abar}*({ep} - {epq})")),
                ("alpha inverse", format!("{abar}*{a} = {ep}")),
                ("alpha inverse", format!("{a}*{abar} = {ep} - {epq}")),
                ("beta-bar support", format!("{eq}*{bbar} = {bbar}")),
                ("beta-bar support", format!("{bbar} = {bbar}*{epq}")),
                ("beta inverse", format!("{bbar}*{b} = {eq}")),
                ("beta inverse", format!("{b}*{bbar} = {epq}")),
            ]);
            for (i, e) in SAMPLE_SCALARS {
                raw.push(("scalar through beta", format!("{}*{b} = {b}*{}", t(i, e), t(i + shift, e))));
                raw.push((
                    "scalar through beta-bar",
                    format!("{bbar}*{} = {}*{bbar}", t(i, e), t(i + shift, e)),
                ));
            }
            for l in 0..covers.len() {
                if l == j {
                    continue;
                }
                let (al, abl, el) = (
                    format!("a[{}]", pq(l)),
                    format!("A[{}]", pq(l)),
                    format!("e[{}]", pq(l)),
                );
                let s = sigma_index(j, l);
                raw.extend([
                    ("idempotents", format!("{epq}*{el} = 0")),
                    ("alpha commutes with e(p,q)", format!("{al}*{epq} = {epq}*{al}")),
                    ("alphas commute", format!("{al}*{a} = {a}*{al}")),
                    ("alpha through beta", format!("{al}*{b} = {b}*t{s}")),
                    ("alpha-bar commutes with e(p,q)", format!("{epq}*{abl} = {abl}*{epq}")),
                    ("alpha-bars commute", format!("{abl}*{abar} = {abar}*{abl}")),
                    ("beta-bar then alpha", format!("{bbar}*{al} = t{s}*{bbar}")),
                    ("beta-bar then alpha-bar", format!("t{s}^-1*{bbar} = {bbar}*{abl}")),
                ]);
            }
        }
    }
    raw.into_iter()
        .map(|(family, text)| {
            let (l, r) = text.split_once(" = ").expect("relation text");
            Relation {
                family,
                lhs: parse_expr(poset, l).expect("relation lhs"),
                rhs: parse_expr(poset, r).expect("relation rhs"),
                text,
            }
        })
        .collect()
}
