use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Result};
use qposet::constructions::{assemble, build_f, check_unfolding, reconstruct_down};
use qposet::graphmon::{
    check_quiver_equals_chain, graph_monoid, hereditary_saturated, match_er, parse_quiver,
};
use qposet::leavitt::{check_cover_sandwiches, check_ideal_lattice, Algebra};
use qposet::poset::{parse_poset, LabelledPoset};
use qposet::primon::{
    apw_graph_shape, check_refinement, check_strongly_separative, monoid_iso, PrimePair,
    PrimitiveMonoid,
};
use qposet::toeplitz::{
    baby_toeplitz, faithfulness_probe, oracle_equivalence, sample_sigma_polys, verify_relations,
    Space,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{Input, Report};
use crate::{Export, Settings};

const ORACLE_COUNT: usize = 200;
const ORACLE_DEGREE: usize = 3;
const ORACLE_SAMPLES: usize = 20;
const SANDWICH_RANGE: i32 = 2;
const FAITHFUL_COUNT: usize = 100;
/// Largest poset for which the ideal lattice check runs over all pairs.
const LATTICE_MAX: usize = 5;

fn poset(text: &str) -> Result<LabelledPoset> {
    parse_poset(text).map_err(|e| anyhow!("poset: {e}"))
}

fn names(p: &LabelledPoset, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(|i| p.name(i).to_string()).collect()
}

fn monoid_summary(m: &PrimitiveMonoid) -> Value {
    let pair = m.pair();
    let primes: Vec<Value> = (0..m.rank())
        .map(|i| {
            json!({
                "name": pair.name(i),
                "free": m.is_free(i),
            })
        })
        .collect();
    json!({ "primes": primes, "pair": pair.to_json() })
}

pub fn info(path: &Path, text: &str) -> Result<Report> {
    let p = poset(text)?;
    let m = PrimitiveMonoid::from_poset(&p);
    let chains: Vec<Value> = p
        .maximal()
        .into_iter()
        .map(|top| {
            let cs: Vec<Vec<String>> = p
                .maximal_chains(top)
                .into_iter()
                .map(|c| names(&p, c))
                .collect();
            json!({ "top": p.name(top), "chains": cs })
        })
        .collect();
    let result = json!({
        "monoid": monoid_summary(&m),
        "lower_sets": p.lower_sets().len(),
        "maximal_chains": chains,
        "forest": p.is_forest(),
        "apw_graph_shape": apw_graph_shape(&m),
    });
    Ok(Report::new("info", Input::new(path, text), json!({}), true, result))
}

pub fn pipeline(path: &Path, text: &str, s: &Settings) -> Result<Report> {
    let p = poset(text)?;
    let mut ok = true;
    let mut tops = Vec::new();
    for top in p.maximal() {
        let f = build_f(&p, top).map_err(|e| anyhow!("{e}"))?;
        let unfolding_ok = check_unfolding(&f).is_ok();
        let rec = reconstruct_down(&p, top).map_err(|e| anyhow!("{e}"))?;
        let rec_ok = monoid_iso(rec.result(), &rec.target).is_some();
        ok &= unfolding_ok && rec_ok;
        let pushouts: Vec<usize> = rec.stages.iter().map(|st| st.pushouts).collect();
        tops.push(json!({
            "top": p.name(top),
            "unfolding_size": f.f.len(),
            "height": f.height(),
            "unfolding_ok": unfolding_ok,
            "stage_pushouts": pushouts,
            "reconstruction_iso": rec_ok,
        }));
    }
    let a = assemble(&p).map_err(|e| anyhow!("{e}"))?;
    let target = PrimitiveMonoid::from_poset(&p);
    let witness = a.iso.as_ref().map(|iso| {
        let pair = a.monoid.pair();
        iso.iter()
            .enumerate()
            .map(|(i, &j)| json!([pair.name(i), target.pair().name(j)]))
            .collect::<Vec<_>>()
    });
    let refinement = check_refinement(&a.monoid, s.bound).is_ok();
    ok &= a.iso.is_some() && refinement;
    let result = json!({
        "maxima": tops,
        "glue_steps": a.steps.len(),
        "product_rank": a.product.rank(),
        "assembled": monoid_summary(&a.monoid),
        "verdict": if a.iso.is_some() { "iso" } else { "non-iso" },
        "witness": witness,
        "refinement": refinement,
    });
    let params = json!({ "bound": s.bound });
    Ok(Report::new("pipeline", Input::new(path, text), params, ok, result))
}

pub fn verify_algebra(path: &Path, text: &str, s: &Settings) -> Result<Report> {
    let p = poset(text)?;
    let alg = Algebra::new(p.clone());
    let space = Space::build(&alg);
    let verdicts = verify_relations(&space, s.depth);
    let relations_ok = verdicts.iter().all(|v| v.rewriting && v.representation);

    let (left, right, defect) = baby_toeplitz(s.depth);
    let baby_ok = left && !right && defect;

    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let oracle = oracle_equivalence(&space, &mut rng, ORACLE_COUNT, ORACLE_DEGREE, ORACLE_SAMPLES);
    let oracle_json = match &oracle {
        Ok(n) => json!({ "ok": true, "pairs": n }),
        Err((e, c)) => json!({
            "ok": false,
            "expression": format!("{e:?}"),
            "vector": c.vector,
            "reduced": c.lhs,
            "direct": c.rhs,
        }),
    };
    let faithful = faithfulness_probe(&space, &mut rng, FAITHFUL_COUNT, ORACLE_DEGREE);
    let faithful_json = match &faithful {
        Ok(n) => json!({ "ok": true, "elements": n }),
        Err(x) => json!({ "ok": false, "element": x.to_string() }),
    };
    let sandwiches = check_cover_sandwiches(&alg, SANDWICH_RANGE);
    let sandwich_json = match &sandwiches {
        Ok(n) => json!({ "ok": true, "products": n, "range": SANDWICH_RANGE }),
        Err(e) => json!({ "ok": false, "error": e.to_string() }),
    };

    let mut inverse = Vec::new();
    let mut inverse_ok = true;
    for v in 0..p.len() {
        for f in sample_sigma_polys(&alg, v).iter().filter(|_| alg.n(v) > 0) {
            for j in 0..alg.n(v) {
                let r = space.check_inverse_identities(f, j, s.depth);
                inverse_ok &= r.is_ok();
                if let Err(c) = r {
                    inverse.push(json!({
                        "vertex": p.name(v),
                        "cover": j,
                        "vector": c.vector,
                        "lhs": c.lhs,
                        "rhs": c.rhs,
                    }));
                }
            }
        }
    }

    let lattice = (p.len() <= LATTICE_MAX).then(|| check_ideal_lattice(&alg));
    let lattice_json = match &lattice {
        None => json!({ "skipped": true }),
        Some(Ok(n)) => json!({ "ok": true, "pairs": n }),
        Some(Err(f)) => json!({ "ok": false, "failure": format!("{f:?}") }),
    };
    let lattice_ok = !matches!(lattice, Some(Err(_)));

    let ok = relations_ok
        && baby_ok
        && oracle.is_ok()
        && faithful.is_ok()
        && sandwiches.is_ok()
        && inverse_ok
        && lattice_ok;
    let result = json!({
        "relations": { "ok": relations_ok, "count": verdicts.len(), "verdicts": verdicts },
        "two_element_chain": {
            "ok": baby_ok,
            "left_inverse": left,
            "right_inverse": right,
            "defect_is_cover_idempotent": defect,
        },
        "oracle": oracle_json,
        "faithfulness": faithful_json,
        "sandwiches": sandwich_json,
        "inverse_identities": { "ok": inverse_ok, "failures": inverse },
        "ideal_lattice": lattice_json,
    });
    let params = json!({ "depth": s.depth, "seed": s.seed });
    Ok(Report::new("verify-algebra", Input::new(path, text), params, ok, result))
}

pub fn graphmon(path: &Path, text: &str, s: &Settings) -> Result<Report> {
    let e = parse_quiver(text).map_err(|e| anyhow!("quiver: {e}"))?;
    let gm = graph_monoid(&e);
    let vname = |set: &BTreeSet<usize>| -> Vec<String> {
        set.iter().map(|&v| e.vertices[v].clone()).collect()
    };
    let lattice: Vec<Vec<String>> = hereditary_saturated(&e).iter().map(vname).collect();
    let slack = gm.rank() as u32 + 1;
    let dec = gm.decider(s.bound, slack);
    let mut samples = Vec::new();
    let mut ok = true;
    for (l, r) in &gm.relations {
        if l.iter().sum::<u32>() > s.bound || r.iter().sum::<u32>() > s.bound {
            continue;
        }
        let eq = dec.equal(l, r);
        ok &= eq == Some(true);
        samples.push(json!({ "lhs": l, "rhs": r, "equal": eq }));
    }
    let er = match_er(&e).map(|(r, order)| {
        let check = check_quiver_equals_chain(&e, &order, s.bound);
        ok &= check.is_ok();
        json!({
            "r": r,
            "matches_chain": check.is_ok(),
            "counterexample": check.err(),
        })
    });
    let result = json!({
        "vertices": e.vertices,
        "hereditary_saturated": lattice,
        "classes": dec.class_count(),
        "relations": samples,
        "chain_check": er,
    });
    let params = json!({ "bound": s.bound });
    Ok(Report::new("graphmon", Input::new(path, text), params, ok, result))
}

fn stages_dot(p: &LabelledPoset) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for top in p.maximal() {
        let f = build_f(p, top).map_err(|e| anyhow!("{e}"))?;
        let label = |i: usize| {
            let path: Vec<&str> = f.paths[i].iter().map(|&v| f.down.name(v)).collect();
            path.join(">")
        };
        let mut s = format!("digraph \"stages {}\" {{\n", p.name(top));
        for (k, stage) in f.stages.iter().enumerate() {
            for (c, comp) in stage.iter().enumerate() {
                let _ = writeln!(s, "  subgraph \"cluster_{k}_{c}\" {{");
                let _ = writeln!(s, "    label=\"S{k}.{c}\";");
                for &x in comp {
                    let _ = writeln!(s, "    \"{k}.{c}:{}\";", label(x));
                }
                for &x in comp {
                    for &y in f.f.lower_covers(x).iter().filter(|y| comp.contains(y)) {
                        let _ = writeln!(s, "    \"{k}.{c}:{}\" -> \"{k}.{c}:{}\";", label(x), label(y));
                    }
                }
                let _ = writeln!(s, "  }}");
            }
        }
        s.push_str("}\n");
        out.push((format!("stages_{}.dot", p.name(top)), s));
    }
    Ok(out)
}

pub fn export(text: &str, what: Export) -> Result<Vec<(String, String)>> {
    let p = poset(text)?;
    Ok(match what {
        Export::Hasse => vec![("hasse.dot".into(), p.hasse_dot("hasse"))],
        Export::Quiver => vec![("quiver.dot".into(), p.quiver_t().to_dot("quiver"))],
        Export::Stages => stages_dot(&p)?,
    })
}

pub fn export_report(path: &Path, text: &str, what: Export, files: &[(String, String)]) -> Report {
    let listed: Vec<Value> = files
        .iter()
        .map(|(name, body)| json!({ "name": name, "dot": body }))
        .collect();
    let params = json!({ "what": format!("{what:?}").to_lowercase() });
    Report::new("export", Input::new(path, text), params, true, json!({ "files": listed }))
}

pub fn monoid(path: &Path, text: &str, s: &Settings) -> Result<Report> {
    let m = if text.trim_start().starts_with('{') {
        PrimitiveMonoid::from_pair(PrimePair::from_json(text).map_err(|e| anyhow!("{e}"))?)
    } else {
        PrimitiveMonoid::from_poset(&poset(text)?)
    };
    let elems = m.elements_up_to(s.bound);
    let refinement = check_refinement(&m, s.bound).is_ok();
    let witness = check_strongly_separative(&m, s.bound).err();
    let sep_ok = witness.is_none() == m.all_free();
    let result = json!({
        "summary": m.to_json(&elems),
        "elements": elems.len(),
        "refinement": refinement,
        "strongly_separative": witness.is_none(),
        "separativity_witness": witness.map(|(a, b)| [m.format_elem(&a), m.format_elem(&b)]),
    });
    let params = json!({ "bound": s.bound });
    Ok(Report::new("monoid", Input::new(path, text), params, refinement && sep_ok, result))
}
