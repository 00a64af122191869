use std::collections::HashMap;

use super::{MonElem, PrimitiveMonoid};

/// An equality `x1 + x2 = y1 + y2` with no refinement among the candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementFailure {
    pub x1: MonElem,
    pub x2: MonElem,
    pub y1: MonElem,
    pub y2: MonElem,
}

struct Table {
    elems: Vec<MonElem>,
    // sum[i][j] is an id into `elems`
    sum: Vec<Vec<usize>>,
}

impl Table {
    fn new(m: &PrimitiveMonoid, base: Vec<MonElem>) -> Self {
        let mut elems = base;
        let mut ids: HashMap<MonElem, usize> =
            elems.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let n = elems.len();
        let mut sum = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let s = m.add(&elems[i], &elems[j]);
                let id = match ids.get(&s) {
                    Some(&id) => id,
                    None => {
                        elems.push(s.clone());
                        ids.insert(s, elems.len() - 1);
                        elems.len() - 1
                    }
                };
                sum[i][j] = id;
            }
        }
        Self { elems, sum }
    }
}

/// Tests every equality `x1 + x2 = y1 + y2` among elements of reduced size
/// at most `bound`, looking for `z11 + z12 = x1`, `z21 + z22 = x2`,
/// `z11 + z21 = y1`, `z12 + z22 = y2` with the `z` of size at most
/// `2 * bound`.
///
/// Refinements may need larger entries than the equation itself: with
/// `a ◁ d` and `b ◁ c`, `d + (2a + c) = c + (2b + d)` forces `z22 = 2a + 2b`.
pub fn check_refinement(m: &PrimitiveMonoid, bound: u32) -> Result<(), RefinementFailure> {
    let cand = m.elements_up_to(2 * bound);
    // elements_up_to orders by size, so the base elements come first
    let n = cand.iter().take_while(|x| x.size() <= bound).count();
    let t = Table::new(m, cand);
    let c = t.sum.len();
    // decompositions of each base element as a sum of two candidates
    let mut decomp: Vec<Vec<(usize, usize)>> = vec![Vec::new(); t.elems.len()];
    // pairs grouped by their sum
    let mut by_sum: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for i in 0..c {
        for j in 0..c {
            let s = t.sum[i][j];
            if s < n {
                decomp[s].push((i, j));
            }
            if i < n && j < n {
                by_sum.entry(s).or_default().push((i, j));
            }
        }
    }
    let mut keys: Vec<usize> = by_sum.keys().copied().collect();
    keys.sort_unstable();
    for s in keys {
        let pairs = &by_sum[&s];
        for &(x1, x2) in pairs {
            for &(y1, y2) in pairs {
                let found = decomp[x1].iter().any(|&(z11, z12)| {
                    decomp[x2].iter().any(|&(z21, z22)| {
                        t.sum[z11][z21] == y1 && t.sum[z12][z22] == y2
                    })
                });
                if !found {
                    return Err(RefinementFailure {
                        x1: t.elems[x1].clone(),
                        x2: t.elems[x2].clone(),
                        y1: t.elems[y1].clone(),
                        y2: t.elems[y2].clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// `a + a = a + b = b + b` implies `a = b`, over elements of size at most
/// `bound`. Returns a violating pair.
pub fn check_separative(m: &PrimitiveMonoid, bound: u32) -> Result<(), (MonElem, MonElem)> {
    let el = m.elements_up_to(bound);
    for a in &el {
        let aa = m.add(a, a);
        for b in &el {
            if a != b && aa == m.add(a, b) && aa == m.add(b, b) {
                return Err((a.clone(), b.clone()));
            }
        }
    }
    Ok(())
}

/// `a + a = a + b` implies `a = b`, over elements of size at most `bound`.
pub fn check_strongly_separative(
    m: &PrimitiveMonoid,
    bound: u32,
) -> Result<(), (MonElem, MonElem)> {
    let el = m.elements_up_to(bound);
    for a in &el {
        let aa = m.add(a, a);
        for b in &el {
            if a != b && aa == m.add(a, b) {
                return Err((a.clone(), b.clone()));
            }
        }
    }
    Ok(())
}

/// Every free prime has at most one free lower cover for the order
/// induced by ◁.
pub fn apw_graph_shape(m: &PrimitiveMonoid) -> bool {
    let pair = m.pair();
    let n = pair.len();
    let below = |q: usize, p: usize| q != p && pair.rel(q, p);
    (0..n).filter(|&p| m.is_free(p)).all(|p| {
        let free_covers = (0..n)
            .filter(|&q| below(q, p) && m.is_free(q))
            .filter(|&q| !(0..n).any(|r| below(q, r) && below(r, p)))
            .count();
        free_covers <= 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::parse_poset;
    use crate::primon::PrimePair;

    fn mon(dsl: &str) -> PrimitiveMonoid {
        PrimitiveMonoid::from_poset(&parse_poset(dsl).unwrap())
    }

    fn mixed() -> PrimitiveMonoid {
        PrimitiveMonoid::from_pair(
            PrimePair::from_named(
                &["q", "p", "a", "b"],
                &[("q", "q"), ("p", "q"), ("a", "q"), ("b", "q"), ("a", "p"), ("b", "p")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn refinement_holds() {
        assert!(check_refinement(&mon("elems p a b; covers a<p b<p"), 3).is_ok());
        assert!(check_refinement(&mon("elems a b"), 3).is_ok());
        assert!(check_refinement(&mixed(), 3).is_ok());
    }

    #[test]
    fn refinement_needing_large_entries() {
        let m = PrimitiveMonoid::from_pair(
            PrimePair::from_named(&["a", "b", "c", "d"], &[("a", "d"), ("b", "c")]).unwrap(),
        );
        assert!(check_refinement(&m, 3).is_ok());
    }

    #[test]
    fn refinement_detects_corrupted_relation() {
        // a ◁ b ◁ c without a ◁ c
        let rel = vec![
            vec![false, true, false],
            vec![false, false, true],
            vec![false, false, false],
        ];
        let bad = PrimitiveMonoid::from_pair(PrimePair::new_unchecked(
            vec!["a".into(), "b".into(), "c".into()],
            rel,
        ));
        assert!(check_refinement(&bad, 3).is_err());
    }

    #[test]
    fn separativity() {
        let vee = mon("elems p a b; covers a<p b<p");
        assert!(check_strongly_separative(&vee, 4).is_ok());
        assert!(check_separative(&vee, 4).is_ok());
        let mx = mixed();
        let (a, b) = check_strongly_separative(&mx, 4).unwrap_err();
        assert_eq!(mx.add(&a, &a), mx.add(&a, &b));
        assert!(a.coeffs[0] > 0 || b.coeffs[0] > 0);
        assert!(check_separative(&mx, 4).is_ok());
        let triv = PrimitiveMonoid::from_pair(PrimePair::new(vec![], vec![]).unwrap());
        assert!(check_strongly_separative(&triv, 4).is_ok());
    }

    #[test]
    fn apw_shape() {
        assert!(!apw_graph_shape(&mon("elems p a b; covers a<p b<p")));
        assert!(apw_graph_shape(&mon("elems a b c; covers a<b b<c")));
        assert!(!apw_graph_shape(&mon("elems p q1 q2 b; covers q1<p q2<p b<q1 b<q2")));
        assert!(apw_graph_shape(&mon("elems p q b; covers b<q b<p")));
        // the regular prime is ignored, p still has two free covers
        assert!(!apw_graph_shape(&mixed()));
    }
}
