//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p qposet --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qposet::catalogue::{posets_up_to, prime_pairs_up_to};
use qposet::constructions::{assemble, crowned_pushout, pullback_primitive, verify_coequalizer};
use qposet::graphmon::{build_er, check_er_equals_chain, hereditary_saturated};
use qposet::leavitt::{check_cover_sandwiches, check_ideal_lattice, Algebra};
use qposet::poset::parse_poset;
use qposet::primon::{
    check_refinement, check_strongly_separative, monoid_iso, MonElem, OrderIdeal, PrimePair,
    PrimitiveMonoid,
};
use qposet::toeplitz::{
    baby_toeplitz, oracle_equivalence, sample_sigma_polys, verify_relations, SigmaPoly, Space,
};
use qposet::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const VEE: &str = "elems p a b; covers a<p b<p";
const DIAMOND: &str = "elems p q1 q2 b; covers q1<p q2<p b<q1 b<q2";
const W: &str = "elems p1 p2 a b c; covers a<p1 b<p1 b<p2 c<p2";
const CHAINS: [&str; 4] = [
    "elems c0",
    "elems c0 c1; covers c0<c1",
    "elems c0 c1 c2; covers c0<c1 c1<c2",
    "elems c0 c1 c2 c3; covers c0<c1 c1<c2 c2<c3",
];

// Pinned limits. All comparisons are exact, so the only tolerances are
// runtimes, search bounds and sample sizes.
const LIMIT_VEE: Duration = Duration::from_secs(1);
const LIMIT_PIPELINE: Duration = Duration::from_secs(120);
const LIMIT_RELATIONS: Duration = Duration::from_secs(300);
const MAX_SIZE: usize = 5;
const REFINEMENT_BOUND: u32 = 3;
const SEPARATIVITY_BOUND: u32 = 3;
const PHI_SIZE: u32 = 4;
const COEQUALIZER_BOUND: u32 = 4;
const ER_BOUND: u32 = 4;
const ER_MAX: usize = 3;
const RELATION_DEPTH: u32 = 6;
const ORACLE_SEED: u64 = 20_240_601;
const ORACLE_COUNT: usize = 200;
const ORACLE_DEGREE: usize = 3;
const ORACLE_SAMPLES: usize = 20;
const SANDWICH_RANGE: i32 = 2;
const INVERSE_DEPTH: u32 = 6;

type Outcome = Result<String, String>;

fn mon(dsl: &str) -> PrimitiveMonoid {
    PrimitiveMonoid::from_poset(&parse_poset(dsl).unwrap())
}

fn ideal(m: &PrimitiveMonoid, names: &[&str]) -> OrderIdeal {
    m.ideal_from_set(&names.iter().map(|n| m.pair().index(n).unwrap()).collect())
}

fn timed(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took > limit {
        Err(format!("{detail}; took {took:.2?}, limit {limit:?}"))
    } else {
        Ok(format!("{detail}; {took:.2?}"))
    }
}

fn vee_reproduction() -> Outcome {
    let start = Instant::now();
    let m1 = mon("elems a p; covers a<p");
    let m2 = mon("elems b p; covers b<p");
    let pb = pullback_primitive(&m1, &ideal(&m1, &["a"]), &m2, &ideal(&m2, &["b"]))
        .map_err(|e| e.to_string())?;
    if monoid_iso(&pb.monoid, &mon(VEE)).is_none() {
        return Err("pullback is not isomorphic to the monoid of the poset".into());
    }
    timed(LIMIT_VEE, start, "pullback of two chains matches".into())
}

fn pipeline_soundness() -> Outcome {
    let start = Instant::now();
    let mut posets = posets_up_to(MAX_SIZE);
    posets.push(parse_poset(DIAMOND).unwrap());
    posets.push(parse_poset(W).unwrap());
    for p in &posets {
        let a = assemble(p).map_err(|e| format!("{}: {e}", p.to_dsl()))?;
        if a.iso.is_none() {
            return Err(format!("assembly of `{}` is not isomorphic", p.to_dsl()));
        }
    }
    timed(LIMIT_PIPELINE, start, format!("{} posets", posets.len()))
}

fn mixed_monoid() -> PrimitiveMonoid {
    PrimitiveMonoid::from_pair(
        PrimePair::from_named(
            &["q", "p", "a", "b"],
            &[("q", "q"), ("p", "q"), ("a", "q"), ("b", "q"), ("a", "p"), ("b", "p")],
        )
        .unwrap(),
    )
}

fn refinement_and_separativity() -> Outcome {
    let pairs = prime_pairs_up_to(MAX_SIZE);
    let mut free = 0;
    for pair in &pairs {
        let m = PrimitiveMonoid::from_pair(pair.clone());
        if let Err(f) = check_refinement(&m, REFINEMENT_BOUND) {
            return Err(format!("refinement fails: {f:?}"));
        }
        let sep = check_strongly_separative(&m, SEPARATIVITY_BOUND).is_ok();
        if sep != m.all_free() {
            return Err(format!("separativity {sep} but all_free {}", m.all_free()));
        }
        free += usize::from(sep);
    }
    let mx = mixed_monoid();
    match check_strongly_separative(&mx, SEPARATIVITY_BOUND) {
        Ok(()) => return Err("mixed monoid reported strongly separative".into()),
        Err((a, b)) => {
            if mx.add(&a, &a) != mx.add(&a, &b) || a == b {
                return Err("separativity witness is not valid".into());
            }
        }
    }
    Ok(format!("{} pairs, {free} all-free; mixed monoid has a witness", pairs.len()))
}

fn words(n: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, w: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == w.len() {
            out.push(w.clone());
            return;
        }
        for c in 0..=left {
            w[i] = c;
            rec(i + 1, left - c, w, out);
        }
        w[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, bound, &mut vec![0; n], &mut out);
    out
}

fn phi_embedding() -> Outcome {
    let pairs = prime_pairs_up_to(MAX_SIZE);
    let mut compared = 0usize;
    for pair in &pairs {
        let m = PrimitiveMonoid::from_pair(pair.clone());
        let el: Vec<MonElem> = words(m.rank(), PHI_SIZE)
            .iter()
            .map(|w| m.reduce(w).unwrap())
            .collect();
        let phis: Vec<_> = el.iter().map(|x| m.phi(x)).collect();
        for i in 0..el.len() {
            for j in 0..el.len() {
                if m.equal(&el[i], &el[j]) != (phis[i] == phis[j]) {
                    return Err(format!(
                        "phi separates wrongly: {} and {}",
                        m.format_elem(&el[i]),
                        m.format_elem(&el[j])
                    ));
                }
                if &phis[i] + &phis[j] != m.phi(&m.add(&el[i], &el[j])) {
                    return Err(format!("phi not additive on {}", m.format_elem(&el[i])));
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} pairs over {} monoids", pairs.len()))
}

fn crowned_pushout_check() -> Outcome {
    let p = mon("elems q1 b1 q2 b2; covers b1<q1 b2<q2");
    let (i, i2) = (ideal(&p, &["b1"]), ideal(&p, &["b2"]));
    let phi = [(p.pair().index("b1").unwrap(), p.pair().index("b2").unwrap())];
    let cp = crowned_pushout(&p, &i, &i2, &phi).map_err(|e| e.to_string())?;
    let (qz, _) = cp.monoid.quotient(&cp.z);
    let (pii, _) = p.quotient(&i.sum(&i2));
    if monoid_iso(&qz, &pii).is_none() {
        return Err("Q/Z is not isomorphic to P/(I+I')".into());
    }
    verify_coequalizer(&p, &i, &phi, &cp.monoid, &cp.pi, COEQUALIZER_BOUND)
        .map_err(|f| format!("coequalizer: {f:?}"))?;
    if cp.monoid.rank() != p.rank() - i2.primes.len() {
        return Err("prime count changed".into());
    }
    for x in (0..p.rank()).filter(|x| !i2.primes.contains(x)) {
        if p.is_free(x) != cp.monoid.is_free(cp.pi[x]) {
            return Err(format!("freeness of {} changed", p.pair().name(x)));
        }
    }
    Ok(format!("rank {} to {}", p.rank(), cp.monoid.rank()))
}

fn graph_monoids() -> Outcome {
    for r in 0..=ER_MAX {
        check_er_equals_chain(r, ER_BOUND).map_err(|(x, y)| format!("E_{r}: {x:?} vs {y:?}"))?;
        let n = hereditary_saturated(&build_er(r)).len();
        if n != r + 2 {
            return Err(format!("E_{r} has {n} hereditary saturated sets"));
        }
    }
    Ok(format!("r = 0..={ER_MAX}"))
}

fn relation_posets() -> Vec<&'static str> {
    let mut v = vec![VEE, DIAMOND];
    v.extend(CHAINS);
    v
}

fn algebra_relations() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for text in relation_posets() {
        let space = Space::build(&Algebra::new(parse_poset(text).unwrap()));
        for v in verify_relations(&space, RELATION_DEPTH) {
            if !v.rewriting || !v.representation {
                return Err(format!(
                    "{text}: {} ({}) rewriting {} representation {} {}",
                    v.relation,
                    v.family,
                    v.rewriting,
                    v.representation,
                    v.counterexample.unwrap_or_default()
                ));
            }
            count += 1;
        }
    }
    let (left, right, defect) = baby_toeplitz(RELATION_DEPTH);
    if !left || right || !defect {
        return Err(format!("chain of two: {left} {right} {defect}"));
    }
    timed(LIMIT_RELATIONS, start, format!("{count} relation instances"))
}

fn oracle_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let posets = [VEE, DIAMOND];
    let mut compared = 0;
    for (k, text) in posets.iter().enumerate() {
        let space = Space::build(&Algebra::new(parse_poset(text).unwrap()));
        let n = ORACLE_COUNT / posets.len() + usize::from(k < ORACLE_COUNT % posets.len());
        compared += oracle_equivalence(&space, &mut rng, n, ORACLE_DEGREE, ORACLE_SAMPLES)
            .map_err(|(e, c)| format!("{text}: {e:?} on {} gives {} vs {}", c.vector, c.lhs, c.rhs))?;
    }
    let mut sandwiches = 0;
    for text in relation_posets() {
        sandwiches += check_cover_sandwiches(&Algebra::new(parse_poset(text).unwrap()), SANDWICH_RANGE)
            .map_err(|e| format!("{text}: {e}"))?;
    }
    Ok(format!("{compared} element/vector pairs, {sandwiches} sandwiches"))
}

fn sigma_inverses() -> Outcome {
    let mut checked = 0;
    for (text, top) in [(VEE, "p"), (DIAMOND, "p"), (CHAINS[2], "c2")] {
        let alg = Algebra::new(parse_poset(text).unwrap());
        let p = alg.poset().index(top).unwrap();
        let space = Space::build(&alg);
        let polys = sample_sigma_polys(&alg, p);
        if polys.len() != 10 {
            return Err(format!("{} sample polynomials", polys.len()));
        }
        for f in &polys {
            if f.valuation() != 0 {
                return Err(format!("sample with valuation {}", f.valuation()));
            }
            let window = INVERSE_DEPTH - f.degree().min(INVERSE_DEPTH);
            let samples = space
                .samples(window)
                .into_iter()
                .filter(|v| v.entries().all(|(l, _)| l.top() == p));
            for v in samples {
                let w = space.invert_sigma(f, &v, INVERSE_DEPTH).map_err(|e| e.to_string())?;
                if space.act_sigma(f, &w).map_err(|e| e.to_string())? != v {
                    return Err(format!("{text}: f·f⁻¹ fails on {v}"));
                }
                let fv = space.act_sigma(f, &v).map_err(|e| e.to_string())?;
                if space.invert_sigma(f, &fv, INVERSE_DEPTH).map_err(|e| e.to_string())? != v {
                    return Err(format!("{text}: f⁻¹·f fails on {v}"));
                }
                checked += 1;
            }
            // multiplying by a cover variable raises the valuation
            let shifted = SigmaPoly::new(
                p,
                f.terms().map(|(e, c)| {
                    let mut e = e.clone();
                    e[0] += 1;
                    (e, c.clone())
                }),
            );
            let v = space.samples(0).into_iter().find(|v| v.entries().all(|(l, _)| l.top() == p));
            match space.invert_sigma(&shifted, &v.unwrap(), INVERSE_DEPTH) {
                Err(Error::Valuation(k)) if k >= 1 => {}
                other => return Err(format!("valuation gate let through {other:?}")),
            }
        }
    }
    Ok(format!("{checked} inversions"))
}

fn ideal_lattice() -> Outcome {
    let alg = Algebra::new(parse_poset(VEE).unwrap());
    let n = check_ideal_lattice(&alg).map_err(|f| format!("{f:?}"))?;
    Ok(format!("{n} lower-set pairs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("vee reproduction", vee_reproduction),
        ("pipeline soundness", pipeline_soundness),
        ("refinement and separativity", refinement_and_separativity),
        ("phi embedding", phi_embedding),
        ("crowned pushout", crowned_pushout_check),
        ("graph monoids", graph_monoids),
        ("algebra relations", algebra_relations),
        ("oracle equivalence", oracle_check),
        ("truncated inverses", sigma_inverses),
        ("ideal lattice", ideal_lattice),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
