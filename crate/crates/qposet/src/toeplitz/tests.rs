use super::*;
use crate::leavitt::{parse_expr, t_pow};
use crate::poly::rat;
use crate::poset::parse_poset;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space(text: &str) -> Space {
    Space::build(&Algebra::new(parse_poset(text).unwrap()))
}

const VEE: &str = "elems p a b; covers a<p b<p";
const CHAINS: [&str; 3] = ["elems p; covers", "elems p q; covers q<p", "elems r p q; covers q<p p<r"];
const DIAMOND: &str = "elems p q r s; covers q<p r<p s<q s<r";

fn x_poly(alg: &Algebra, p: usize, terms: &[(&[u32], Coeff)]) -> SigmaPoly {
    assert!(terms.iter().all(|(e, _)| e.len() == alg.n(p)));
    SigmaPoly::new(p, terms.iter().map(|(e, c)| (e.to_vec(), c.clone())))
}

#[test]
fn levels_and_leaves() {
    let s = space(DIAMOND);
    assert_eq!(s.levels().len(), 3);
    assert_eq!(s.levels()[0], vec![3]);
    // two paths from the top down to the bottom
    assert_eq!(s.leaves(0).len(), 2);
    assert_eq!(s.leaves(3).len(), 1);
    let f = space(VEE);
    assert_eq!(f.leaves(0).len(), 2);
}

#[test]
fn relation_suite_in_the_representation() {
    let mut posets = vec![VEE, DIAMOND];
    posets.extend(CHAINS);
    for text in posets {
        let s = space(text);
        for v in verify_relations(&s, 6) {
            assert!(v.rewriting, "{text}: {}", v.relation);
            assert!(v.representation, "{text}: {} {:?}", v.relation, v.counterexample);
        }
    }
}

#[test]
fn toeplitz_chain() {
    let (left_inverse, right_inverse, defect) = baby_toeplitz(6);
    assert!(left_inverse);
    assert!(!right_inverse);
    assert!(defect);
}

#[test]
fn vertex_idempotents() {
    let s = space(VEE);
    let alg = s.algebra().clone();
    let samples = s.samples(4);
    let one = parse_expr(alg.poset(), "e[p] + e[a] + e[b]").unwrap();
    for v in &samples {
        assert_eq!(&s.act_expr(&one, v).unwrap(), v);
    }
    for p in 0..3 {
        let e = Expr::gen(Gen::E(p));
        assert!(samples.iter().any(|v| !s.act_expr(&e, v).unwrap().is_zero()));
    }
}

#[test]
fn beta_bar_then_beta_is_identity_on_the_cover() {
    let s = space(VEE);
    let alg = s.algebra().clone();
    let e = parse_expr(alg.poset(), "B[p,a]*b[p,a]").unwrap();
    let leaf = s.leaves(1)[0].clone();
    let v = RepVector::leaf(leaf, Scalar::from(Laurent::var(Var::T(2), 3)));
    assert_eq!(s.act_expr(&e, &v).unwrap(), v);
}

#[test]
fn invert_sigma_examples() {
    let s = space(VEE);
    let alg = s.algebra().clone();
    let one = Coeff::one();
    let f = x_poly(&alg, 0, &[(&[0, 0], one.clone()), (&[1, 0], Coeff::constant(rat(-1, 1)))]);
    let g = x_poly(&alg, 0, &[(&[0, 0], one.clone()), (&[1, 1], one.clone())]);
    let xa = x_poly(&alg, 0, &[(&[1, 0], one.clone())]);
    let n = 5;
    for poly in [&f, &g] {
        for v in s.samples(n).into_iter().filter(|v| v.entries().all(|(l, _)| l.top() == 0)) {
            let w = s.invert_sigma(poly, &v, n).unwrap();
            assert_eq!(s.act_sigma(poly, &w).unwrap(), v, "{v}");
            let back = s.invert_sigma(poly, &s.act_sigma(poly, &v).unwrap(), n + 3).unwrap();
            assert_eq!(back, v, "{v}");
        }
    }
    let v = s.samples(1)[0].clone();
    assert!(matches!(s.invert_sigma(&xa, &v, n), Err(Error::Valuation(1))));
    let zero = SigmaPoly::new(0, []);
    assert!(matches!(s.invert_sigma(&zero, &v, n), Err(Error::Invalid(_))));
}

#[test]
fn inverse_identities() {
    let s = space(VEE);
    let alg = s.algebra().clone();
    for f in sample_sigma_polys(&alg, 0) {
        for j in 0..2 {
            assert!(s.check_inverse_identities(&f, j, 5).is_ok(), "{f:?} {j}");
        }
    }
}

#[test]
fn sigma_poly_helpers() {
    let s = space(VEE);
    let alg = s.algebra().clone();
    let f = x_poly(&alg, 0, &[(&[1, 2], t_pow(1, 1)), (&[2, 1], Coeff::one())]);
    assert_eq!(f.valuation(), 1);
    assert_eq!(f.degree(), 3);
    let (w, rest) = f.monomial_factor();
    assert_eq!(w, vec![1, 1]);
    assert_eq!(rest.valuation(), 0);
}

#[test]
fn reduced_elements_act_like_their_words() {
    let s = space(DIAMOND);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(oracle_equivalence(&s, &mut rng, 30, 3, 20).is_ok());
    let s = space(VEE);
    assert_eq!(faithfulness_probe(&s, &mut rng, 100, 3).unwrap(), 100);
}

#[test]
fn corner_on_lower_sets() {
    let s = space(DIAMOND);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for a in s.algebra().poset().lower_sets() {
        check_corner(&s, &a, &mut rng, 5).unwrap();
    }
}

#[test]
fn foreign_leaves_are_rejected() {
    let s = space(VEE);
    let bad = BranchPath {
        steps: vec![(0, 1)],
        bottom: 1,
    };
    let v = RepVector::leaf(bad, Scalar::one());
    assert!(s.act(&Gen::E(0), &v).is_err());
}
