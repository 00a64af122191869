//! Finite labelled posets, lower sets, chains and the cover quiver T(P).
//!
//! Elements are stored by index; every ordering exposed here is either the
//! label order of lower covers or element index order, so results are
//! reproducible.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::dsl::{Cursor, Tok};
use crate::error::{Error, Result};
use crate::primon::PrimePair;

/// A finite poset with, for every element, an ordering of its lower covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledPoset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    // leq[i][j] <=> i <= j
    leq: Vec<Vec<bool>>,
    // lower covers of each element in label order
    covers: Vec<Vec<usize>>,
}

/// A downward closed subset of a poset, by element index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LowerSet {
    pub members: BTreeSet<usize>,
}

impl LowerSet {
    pub fn contains(&self, p: usize) -> bool {
        self.members.contains(&p)
    }

    pub fn join(&self, other: &LowerSet) -> LowerSet {
        LowerSet {
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn meet(&self, other: &LowerSet) -> LowerSet {
        LowerSet {
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub range: usize,
}

/// A finite quiver. Arrow order is the per-vertex ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn out_arrows(&self, v: usize) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(move |a| a.source == v)
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn to_dot(&self, title: &str) -> String {
        let mut s = format!("digraph \"{title}\" {{\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for a in &self.arrows {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.vertices[a.source], self.vertices[a.range], a.name
            );
        }
        s.push_str("}\n");
        s
    }
}

impl LabelledPoset {
    /// Builds a poset from names and cover pairs `(lower, upper)`.
    ///
    /// Non-cover pairs are accepted and end up in the closure only. Lower
    /// covers are labelled in the order their pairs are given.
    pub fn from_covers(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::new();
        for (i, nm) in names.iter().enumerate() {
            if index.insert(nm.clone(), i).is_some() {
                return Err(Error::Duplicate(nm.clone()));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Invalid("cover index out of range".into()));
            }
            if a == b {
                return Err(Error::Cycle(names[a].clone()));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Cycle(names[i].clone()));
                }
            }
        }
        let is_cover = |q: usize, p: usize| {
            q != p && leq[q][p] && (0..n).all(|x| x == q || x == p || !(leq[q][x] && leq[x][p]))
        };
        let mut covers = vec![Vec::new(); n];
        for &(a, b) in pairs {
            if is_cover(a, b) && !covers[b].contains(&a) {
                covers[b].push(a);
            }
        }
        // covers implied by the closure but never declared directly cannot
        // exist: every cover of the closure is a declared pair.
        Ok(Self {
            names,
            index,
            leq,
            covers,
        })
    }

    /// Replaces the label order of the lower covers of `p`.
    pub fn with_labels(mut self, p: usize, order: Vec<usize>) -> Result<Self> {
        let mut a = order.clone();
        let mut b = self.covers[p].clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::BadLabels(self.names[p].clone()));
        }
        self.covers[p] = order;
        Ok(self)
    }

    /// Convenience constructor from string names.
    pub fn from_names(names: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let find = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::Unknown(s.to_string()))
        };
        let idx: Result<Vec<(usize, usize)>> =
            pairs.iter().map(|(a, b)| Ok((find(a)?, find(b)?))).collect();
        Self::from_covers(names, &idx?)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Unknown(name.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// Lower covers of `p` in label order.
    pub fn lower_covers(&self, p: usize) -> &[usize] {
        &self.covers[p]
    }

    pub fn lower_covers_of(&self, name: &str) -> Result<Vec<&str>> {
        let p = self.index(name)?;
        Ok(self.covers[p].iter().map(|&q| self.name(q)).collect())
    }

    /// Number of lower covers, `n_p`.
    pub fn n_covers(&self, p: usize) -> usize {
        self.covers[p].len()
    }

    /// Position of `q` among the lower covers of `p` (0-based label).
    pub fn cover_label(&self, p: usize, q: usize) -> Option<usize> {
        self.covers[p].iter().position(|&x| x == q)
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.covers[p].is_empty()).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&p| (0..self.len()).all(|q| !self.lt(p, q)))
            .collect()
    }

    pub fn is_lower(&self, set: &BTreeSet<usize>) -> bool {
        set.iter()
            .all(|&p| (0..self.len()).all(|q| !self.leq[q][p] || set.contains(&q)))
    }

    /// All lower sets, ordered by their sorted member lists.
    pub fn lower_sets(&self) -> Vec<LowerSet> {
        let n = self.len();
        assert!(n < 32, "lower set enumeration limited to < 32 elements");
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let ok = (0..n).all(|p| {
                mask >> p & 1 == 0 || (0..n).all(|q| !self.leq[q][p] || mask >> q & 1 == 1)
            });
            if ok {
                out.push(LowerSet {
                    members: (0..n).filter(|&p| mask >> p & 1 == 1).collect(),
                });
            }
        }
        out.sort();
        out
    }

    pub fn down_set(&self, p: usize) -> LowerSet {
        LowerSet {
            members: (0..self.len()).filter(|&q| self.leq[q][p]).collect(),
        }
    }

    /// Down-closure of an arbitrary subset.
    pub fn down_closure(&self, set: &BTreeSet<usize>) -> LowerSet {
        LowerSet {
            members: (0..self.len())
                .filter(|&q| set.iter().any(|&p| self.leq[q][p]))
                .collect(),
        }
    }

    /// `A` together with every element having a lower cover in `A`.
    pub fn boundary(&self, a: &LowerSet) -> Result<BTreeSet<usize>> {
        if !self.is_lower(&a.members) {
            return Err(Error::NotLower);
        }
        let mut out = a.members.clone();
        for p in 0..self.len() {
            if self.covers[p].iter().any(|q| a.contains(*q)) {
                out.insert(p);
            }
        }
        Ok(out)
    }

    /// Maximal chains of `P↓p`, each listed bottom to top, in lexicographic
    /// order of the label indices read from `p` downwards.
    pub fn maximal_chains(&self, p: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![p];
        self.chains_rec(&mut stack, &mut out);
        out
    }

    fn chains_rec(&self, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let top = *stack.last().unwrap();
        if self.covers[top].is_empty() {
            out.push(stack.iter().rev().copied().collect());
            return;
        }
        for &q in &self.covers[top] {
            stack.push(q);
            self.chains_rec(stack, out);
            stack.pop();
        }
    }

    /// Length of the longest chain with top `p`.
    pub fn height(&self, p: usize) -> usize {
        self.covers[p]
            .iter()
            .map(|&q| self.height(q) + 1)
            .max()
            .unwrap_or(0)
    }

    /// Length of the longest chain with bottom `p`.
    pub fn depth(&self, p: usize) -> usize {
        (0..self.len())
            .filter(|&u| self.covers[u].contains(&p))
            .map(|u| self.depth(u) + 1)
            .max()
            .unwrap_or(0)
    }

    /// The quiver with one arrow `p -> q` per lower cover, in label order.
    pub fn quiver_t(&self) -> Quiver {
        let mut arrows = Vec::new();
        for p in 0..self.len() {
            for &q in &self.covers[p] {
                arrows.push(Arrow {
                    name: format!("{}>{}", self.names[p], self.names[q]),
                    source: p,
                    range: q,
                });
            }
        }
        Quiver {
            vertices: self.names.clone(),
            arrows,
        }
    }

    /// True iff every down-set is a chain.
    pub fn is_forest(&self) -> bool {
        (0..self.len()).all(|p| {
            let d: Vec<usize> = self.down_set(p).members.into_iter().collect();
            d.iter()
                .all(|&a| d.iter().all(|&b| self.leq[a][b] || self.leq[b][a]))
        })
    }

    /// Checks whether `f` (indexed by elements of `self`) is a complete
    /// homomorphism into `target`.
    pub fn is_complete_hom(&self, f: &[usize], target: &LabelledPoset) -> bool {
        if f.len() != self.len() || f.iter().any(|&x| x >= target.len()) {
            return false;
        }
        let img: BTreeSet<usize> = f.iter().copied().collect();
        if img.len() != f.len() {
            return false;
        }
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.leq[a][b] && !target.leq[f[a]][f[b]] {
                    return false;
                }
            }
        }
        (0..self.len()).all(|p| {
            let lp = &self.covers[p];
            lp.is_empty() || {
                let lt = &target.covers[f[p]];
                lp.len() == lt.len() && lp.iter().zip(lt).all(|(&q, &q2)| f[q] == q2)
            }
        })
    }

    /// The sub-poset on `members` with inherited labels, and the index map
    /// from new to old elements. Covers of kept elements that are not kept
    /// are dropped, so labels are only faithful for lower sets.
    pub fn restrict(&self, members: &BTreeSet<usize>) -> (LabelledPoset, Vec<usize>) {
        let keep: Vec<usize> = members.iter().copied().collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let names = keep.iter().map(|&p| self.names[p].clone()).collect();
        let mut pairs = Vec::new();
        for &p in &keep {
            for &q in &self.covers[p] {
                if let Some(&qi) = pos.get(&q) {
                    pairs.push((qi, pos[&p]));
                }
            }
        }
        let sub = LabelledPoset::from_covers(names, &pairs).expect("restriction of a poset");
        (sub, keep)
    }

    /// The strict order as a prime pair (all primes free).
    pub fn strict_pair(&self) -> PrimePair {
        let n = self.len();
        let rel = (0..n)
            .map(|q| (0..n).map(|p| self.lt(q, p)).collect())
            .collect();
        PrimePair::new(self.names.clone(), rel).expect("strict order is a valid pair")
    }

    pub fn hasse_dot(&self, title: &str) -> String {
        let mut s = format!("digraph \"{title}\" {{\n  rankdir=BT;\n");
        for v in &self.names {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for p in 0..self.len() {
            for (j, &q) in self.covers[p].iter().enumerate() {
                let _ = writeln!(
                    s,
                    "  \"{}\" -> \"{}\" [label=\"{}\"];",
                    self.names[q],
                    self.names[p],
                    j + 1
                );
            }
        }
        s.push_str("}\n");
        s
    }

    /// Serializes back to the text format.
    pub fn to_dsl(&self) -> String {
        let mut s = format!("elems {}", self.names.join(" "));
        let pairs: Vec<String> = (0..self.len())
            .flat_map(|p| {
                self.covers[p]
                    .iter()
                    .map(move |&q| format!("{}<{}", self.names[q], self.names[p]))
            })
            .collect();
        if !pairs.is_empty() {
            let _ = write!(s, "; covers {}", pairs.join(" "));
        }
        let labels: Vec<String> = (0..self.len())
            .filter(|&p| self.covers[p].len() > 1)
            .map(|p| {
                let ids: Vec<&str> = self.covers[p].iter().map(|&q| self.name(q)).collect();
                format!("{}:[{}]", self.names[p], ids.join(","))
            })
            .collect();
        if !labels.is_empty() {
            let _ = write!(s, "; labels {}", labels.join(" "));
        }
        s
    }
}

/// Parses the poset text format:
/// `elems <id>+ ; covers (<id> < <id>)* ; labels (<id> : [ <id>, ... ])*`.
pub fn parse_poset(text: &str) -> Result<LabelledPoset> {
    let mut cur = Cursor::new(text)?;
    let mut names: Vec<String> = Vec::new();
    let mut covers: Vec<(String, String)> = Vec::new();
    let mut labels: Vec<(String, Vec<String>)> = Vec::new();
    let mut seen_elems = false;
    while !cur.at_end() {
        if cur.eat_punct(";") {
            continue;
        }
        let kw = cur.expect_id()?;
        match kw.as_str() {
            "elems" => {
                seen_elems = true;
                while let Some(Tok::Id(_)) = cur.peek() {
                    names.push(cur.expect_id()?);
                }
            }
            "covers" => {
                while let (Some(Tok::Id(_)), Some(Tok::Punct("<"))) = (cur.peek(), cur.peek_at(1)) {
                    let a = cur.expect_id()?;
                    cur.expect_punct("<")?;
                    let b = cur.expect_id()?;
                    covers.push((a, b));
                }
            }
            "labels" => {
                while let (Some(Tok::Id(_)), Some(Tok::Punct(":"))) = (cur.peek(), cur.peek_at(1)) {
                    let p = cur.expect_id()?;
                    cur.expect_punct(":")?;
                    cur.expect_punct("[")?;
                    let mut ids = Vec::new();
                    if !cur.is_punct("]") {
                        ids.push(cur.expect_id()?);
                        while cur.eat_punct(",") {
                            ids.push(cur.expect_id()?);
                        }
                    }
                    cur.expect_punct("]")?;
                    labels.push((p, ids));
                }
            }
            other => return Err(cur.error(format!("unknown section `{other}`"))),
        }
        if !cur.at_end() && !cur.is_punct(";") {
            return Err(cur.error("expected `;`".into()));
        }
    }
    if !seen_elems {
        return Err(cur.error("missing `elems` section".into()));
    }
    let mut index = HashMap::new();
    for (i, nm) in names.iter().enumerate() {
        if index.insert(nm.clone(), i).is_some() {
            return Err(Error::Duplicate(nm.clone()));
        }
    }
    let look = |s: &str| index.get(s).copied().ok_or_else(|| Error::Unknown(s.to_string()));
    let mut pairs = Vec::new();
    for (a, b) in &covers {
        pairs.push((look(a)?, look(b)?));
    }
    let mut poset = LabelledPoset::from_covers(names.clone(), &pairs)?;
    for (p, ids) in labels {
        let pi = look(&p)?;
        let order: Result<Vec<usize>> = ids.iter().map(|s| look(s)).collect();
        poset = poset.with_labels(pi, order?)?;
    }
    Ok(poset)
}

/// A ◁-preserving bijection between two prime pairs, found by backtracking.
/// `result[i]` is the image in `y` of prime `i` of `x`.
pub fn poset_pair_iso(x: &PrimePair, y: &PrimePair) -> Option<Vec<usize>> {
    relation_iso(x.rel_matrix(), y.rel_matrix())
}

/// Isomorphism search between two relations given as boolean matrices.
pub fn relation_iso(a: &[Vec<bool>], b: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    let sig = |m: &[Vec<bool>], i: usize| {
        let out = (0..n).filter(|&j| j != i && m[i][j]).count();
        let inn = (0..n).filter(|&j| j != i && m[j][i]).count();
        (m[i][i], out, inn)
    };
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    let mut x = sa.clone();
    let mut y = sb.clone();
    x.sort();
    y.sort();
    if x != y {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        i: usize,
        a: &[Vec<bool>],
        b: &[Vec<bool>],
        sa: &[(bool, usize, usize)],
        sb: &[(bool, usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.len();
        if i == n {
            return true;
        }
        for j in 0..n {
            if used[j] || sa[i] != sb[j] {
                continue;
            }
            let ok = (0..i).all(|k| a[i][k] == b[j][map[k]] && a[k][i] == b[map[k]][j]);
            if !ok {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if rec(i + 1, a, b, sa, sb, map, used) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    if rec(0, a, b, &sa, &sb, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}
