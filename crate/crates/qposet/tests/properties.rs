use proptest::prelude::*;
use qposet::catalogue::posets_up_to;
use qposet::constructions::assemble;
use qposet::leavitt::Algebra;
use qposet::primon::PrimitiveMonoid;
use qposet::toeplitz::Space;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_posets() -> Vec<qposet::poset::LabelledPoset> {
    posets_up_to(4).into_iter().filter(|p| !p.is_empty()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_are_associative_and_act_on_the_right(idx in 0usize..64, seed in any::<u64>()) {
        let ps = small_posets();
        let p = ps[idx % ps.len()].clone();
        let alg = Algebra::new(p);
        let space = Space::build(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = alg.reduce(&alg.random_expr(&mut rng, 3, 2)).unwrap();
        let y = alg.reduce(&alg.random_expr(&mut rng, 3, 2)).unwrap();
        let z = alg.reduce(&alg.random_expr(&mut rng, 2, 2)).unwrap();
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!((&x * &y).involute(), &y.involute() * &x.involute());
        let xy = &x * &y;
        for v in space.samples(2) {
            let stepwise = space.act_element(&y, &space.act_element(&x, &v).unwrap()).unwrap();
            prop_assert_eq!(space.act_element(&xy, &v).unwrap(), stepwise);
        }
    }

    #[test]
    fn assembly_of_every_small_poset(idx in 0usize..64) {
        let ps = small_posets();
        let p = &ps[idx % ps.len()];
        let a = assemble(p).unwrap();
        prop_assert!(a.iso.is_some());
        prop_assert_eq!(a.monoid.rank(), PrimitiveMonoid::from_poset(p).rank());
    }
}
