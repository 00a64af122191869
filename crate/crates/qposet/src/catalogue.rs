//! Small posets and prime pairs up to isomorphism, for exhaustive testing.

use std::collections::BTreeSet;

use crate::poset::LabelledPoset;
use crate::primon::PrimePair;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn code(rel: &[Vec<bool>], perm: &[usize]) -> u64 {
    let n = rel.len();
    let mut c = 0u64;
    for a in 0..n {
        for b in 0..n {
            c = c << 1 | rel[perm[a]][perm[b]] as u64;
        }
    }
    c
}

fn canonical(rel: &[Vec<bool>], perms: &[Vec<usize>]) -> u64 {
    perms.iter().map(|p| code(rel, p)).min().unwrap()
}

/// Strict orders on `n` points, one per isomorphism class, each as a
/// relation matrix.
fn strict_orders(n: usize) -> Vec<Vec<Vec<bool>>> {
    assert!(n <= 6);
    let perms = permutations(n);
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << slots.len()) {
        let mut rel = vec![vec![false; n]; n];
        for (k, &(a, b)) in slots.iter().enumerate() {
            if mask >> k & 1 == 1 {
                rel[a][b] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        if seen.insert(canonical(&rel, &perms)) {
            out.push(rel);
        }
    }
    out
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// All posets with exactly `n` elements up to isomorphism.
pub fn posets_of_size(n: usize) -> Vec<LabelledPoset> {
    strict_orders(n)
        .into_iter()
        .map(|rel| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| rel[a][b])
                .collect();
            LabelledPoset::from_covers(names(n), &pairs).expect("strict order")
        })
        .collect()
}

/// All posets with at most `n` elements up to isomorphism, the empty one
/// included.
pub fn posets_up_to(n: usize) -> Vec<LabelledPoset> {
    (0..=n).flat_map(posets_of_size).collect()
}

/// All prime pairs with exactly `n` primes up to isomorphism: a strict
/// order together with any set of regular primes.
pub fn prime_pairs_of_size(n: usize) -> Vec<PrimePair> {
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for order in strict_orders(n) {
        for loops in 0u32..(1 << n) {
            let mut rel = order.clone();
            for (i, row) in rel.iter_mut().enumerate() {
                row[i] = loops >> i & 1 == 1;
            }
            if seen.insert(canonical(&rel, &perms)) {
                out.push(PrimePair::new(names(n), rel).expect("valid pair"));
            }
        }
    }
    out
}

pub fn prime_pairs_up_to(n: usize) -> Vec<PrimePair> {
    (0..=n).flat_map(prime_pairs_of_size).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts() {
        // unlabelled posets: 1, 1, 2, 5, 16, 63
        let counts: Vec<usize> = (0..=5).map(|n| posets_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn pair_counts_small() {
        // n = 1: free or regular; n = 2: antichain with 0/1/2 loops and a
        // chain with 4 loop patterns
        assert_eq!(prime_pairs_of_size(1).len(), 2);
        assert_eq!(prime_pairs_of_size(2).len(), 7);
    }
}
