//! Brute-force word problem for finitely presented commutative monoids.
//!
//! Words are coefficient vectors over the generators. All words of total
//! degree at most `search_bound` are enumerated and merged with a
//! union-find along every relation applied in either direction. Equality is
//! answered only for words of degree at most `word_bound`; choose
//! `search_bound` large enough that derivations between short words do not
//! need to climb past it.

use std::collections::HashMap;

/// All words over `n` generators with total degree at most `bound`.
pub fn words_up_to(n: usize, bound: u32) -> Vec<Vec<u32>> {
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

pub struct CongruenceOracle {
    index: HashMap<Vec<u32>, usize>,
    parent: Vec<usize>,
    word_bound: u32,
}

impl CongruenceOracle {
    pub fn new(
        n_gens: usize,
        relations: &[(Vec<u32>, Vec<u32>)],
        word_bound: u32,
        search_bound: u32,
    ) -> Self {
        let words = words_up_to(n_gens, search_bound.max(word_bound));
        let index: HashMap<Vec<u32>, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut uf = Self {
            parent: (0..words.len()).collect(),
            index,
            word_bound,
        };
        let bound = search_bound.max(word_bound);
        for (i, w) in words.iter().enumerate() {
            for (l, r) in relations {
                for (from, to) in [(l, r), (r, l)] {
                    if w.iter().zip(from).all(|(a, b)| a >= b) {
                        let next: Vec<u32> = w
                            .iter()
                            .zip(from)
                            .zip(to)
                            .map(|((a, b), c)| a - b + c)
                            .collect();
                        if next.iter().sum::<u32>() <= bound {
                            let j = uf.index[&next];
                            uf.union(i, j);
                        }
                    }
                }
            }
        }
        uf
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn find_const(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// `None` when a word is outside the decided range.
    pub fn equal(&self, x: &[u32], y: &[u32]) -> Option<bool> {
        if x.iter().sum::<u32>() > self.word_bound || y.iter().sum::<u32>() > self.word_bound {
            return None;
        }
        let i = *self.index.get(x)?;
        let j = *self.index.get(y)?;
        Some(self.find_const(i) == self.find_const(j))
    }

    /// Number of classes among words within the decided range.
    pub fn class_count(&self) -> usize {
        let mut roots: Vec<usize> = self
            .index
            .iter()
            .filter(|(w, _)| w.iter().sum::<u32>() <= self.word_bound)
            .map(|(_, &i)| self.find_const(i))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_relations_is_identity() {
        let o = CongruenceOracle::new(2, &[], 3, 3);
        assert_eq!(o.equal(&[1, 0], &[1, 0]), Some(true));
        assert_eq!(o.equal(&[1, 0], &[0, 1]), Some(false));
        assert_eq!(o.equal(&[4, 0], &[0, 1]), None);
        assert_eq!(o.class_count(), words_up_to(2, 3).len());
    }

    #[test]
    fn vee_absorption() {
        // generators p, a, b with p = p+a = p+b
        let rels = vec![(vec![1, 1, 0], vec![1, 0, 0]), (vec![1, 0, 1], vec![1, 0, 0])];
        let o = CongruenceOracle::new(3, &rels, 4, 5);
        assert_eq!(o.equal(&[1, 1, 0], &[1, 0, 0]), Some(true));
        assert_eq!(o.equal(&[2, 1, 1], &[2, 0, 0]), Some(true));
        assert_eq!(o.equal(&[0, 1, 0], &[0, 0, 1]), Some(false));
    }

    #[test]
    fn word_count() {
        // C(n + b, b)
        assert_eq!(words_up_to(3, 4).len(), 35);
        assert_eq!(words_up_to(0, 4).len(), 1);
    }
}
