use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A finite partial order stored as up-set rows: `up[a] = { b | a ≤ b }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    up: Vec<BitSet>,
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

impl Poset {
    /// Validates `leq` (given as up-set rows) as reflexive, antisymmetric and
    /// transitive.
    pub fn new(names: Vec<String>, up: Vec<BitSet>) -> Result<Poset> {
        let n = names.len();
        if up.len() != n || up.iter().any(|r| r.universe() != n) {
            return Err(Error::NotAPoset("relation has the wrong shape".into()));
        }
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(Error::NotAPoset(format!("{} ≤ {} fails", names[a], names[a])));
            }
            for b in up[a].iter() {
                if b != a && up[b].contains(a) {
                    return Err(Error::NotAPoset(format!(
                        "{} and {} are distinct but mutually below",
                        names[a], names[b]
                    )));
                }
                if !up[b].is_subset(&up[a]) {
                    let c = up[b].difference(&up[a]).first().unwrap();
                    return Err(Error::NotAPoset(format!(
                        "{} ≤ {} ≤ {} but not {} ≤ {}",
                        names[a], names[b], names[c], names[a], names[c]
                    )));
                }
            }
        }
        Ok(Poset { names, up })
    }

    pub(crate) fn new_unchecked(names: Vec<String>, up: Vec<BitSet>) -> Poset {
        Poset { names, up }
    }

    /// Reflexive-transitive closure of the given strict relations `a < b`.
    pub fn from_relations(names: Vec<String>, less: &[(usize, usize)]) -> Result<Poset> {
        let n = names.len();
        let mut up: Vec<BitSet> = (0..n).map(|a| BitSet::from_indices(n, [a])).collect();
        for &(a, b) in less {
            if a >= n || b >= n {
                return Err(Error::NotAPoset("relation mentions an unknown element".into()));
            }
            up[a].insert(b);
        }
        // Warshall on rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Poset::new(names, up)
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::new_unchecked(
            default_names(n),
            (0..n).map(|a| BitSet::from_indices(n, [a])).collect(),
        )
    }

    pub fn chain(n: usize) -> Poset {
        Poset::new_unchecked(
            default_names(n),
            (0..n).map(|a| BitSet::from_indices(n, a..n)).collect(),
        )
    }

    /// Product order on pairs `(a, b)`, indexed `a * other.len() + b`.
    pub fn product(&self, other: &Poset) -> Poset {
        let (n, m) = (self.len(), other.len());
        let mut names = Vec::with_capacity(n * m);
        let mut up = Vec::with_capacity(n * m);
        for a in 0..n {
            for b in 0..m {
                names.push(format!("{}_{}", self.names[a], other.names[b]));
                let mut row = BitSet::new(n * m);
                for a2 in self.up[a].iter() {
                    for b2 in other.up[b].iter() {
                        row.insert(a2 * m + b2);
                    }
                }
                up.push(row);
            }
        }
        Poset::new_unchecked(names, up)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn up(&self, a: usize) -> &BitSet {
        &self.up[a]
    }

    pub fn down(&self, a: usize) -> BitSet {
        BitSet::from_indices(self.len(), (0..self.len()).filter(|&b| self.leq(b, a)))
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn with_names(mut self, names: Vec<String>) -> Poset {
        assert_eq!(names.len(), self.names.len());
        self.names = names;
        self
    }

    /// Covering pairs `a ⋖ b` in index order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.up[a].iter() {
                if b == a {
                    continue;
                }
                let between = (0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_down_set(&self, set: &BitSet) -> bool {
        set.iter().all(|a| (0..self.len()).all(|b| !self.leq(b, a) || set.contains(b)))
    }

    /// All down-closed subsets, sorted by the [`BitSet`] order.
    pub fn down_sets(&self) -> Vec<BitSet> {
        let n = self.len();
        let downs: Vec<BitSet> = (0..n).map(|a| self.down(a)).collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![BitSet::new(n)];
        seen.insert(BitSet::new(n));
        while let Some(s) = stack.pop() {
            for d in &downs {
                let t = s.union(d);
                if seen.insert(t.clone()) {
                    stack.push(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Order-isomorphism test by backtracking over degree-compatible bijections.
    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let n = self.len();
        let sig = |p: &Poset, a: usize| (p.up[a].count(), p.down(a).count());
        let mut assign = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            k: usize,
            p: &Poset,
            q: &Poset,
            assign: &mut Vec<usize>,
            used: &mut Vec<bool>,
            sig: &dyn Fn(&Poset, usize) -> (usize, usize),
        ) -> bool {
            if k == p.len() {
                return true;
            }
            for c in 0..q.len() {
                if used[c] || sig(p, k) != sig(q, c) {
                    continue;
                }
                let ok = (0..k).all(|j| {
                    p.leq(j, k) == q.leq(assign[j], c) && p.leq(k, j) == q.leq(c, assign[j])
                });
                if ok {
                    assign[k] = c;
                    used[c] = true;
                    if go(k + 1, p, q, assign, used, sig) {
                        return true;
                    }
                    used[c] = false;
                }
            }
            false
        }
        go(0, self, other, &mut assign, &mut used, &sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_cycles_and_accepts_chains() {
        let names = default_names(2);
        assert!(matches!(
            Poset::from_relations(names.clone(), &[(0, 1), (1, 0)]),
            Err(Error::NotAPoset(_))
        ));
        let p = Poset::from_relations(default_names(3), &[(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn non_transitive_rows_rejected() {
        let up = vec![
            BitSet::from_indices(3, [0, 1]),
            BitSet::from_indices(3, [1, 2]),
            BitSet::from_indices(3, [2]),
        ];
        assert!(Poset::new(default_names(3), up).is_err());
    }

    #[test]
    fn down_set_counts() {
        assert_eq!(Poset::antichain(3).down_sets().len(), 8);
        assert_eq!(Poset::chain(2).down_sets().len(), 3);
        let grid = Poset::chain(2).product(&Poset::chain(2));
        assert_eq!(grid.down_sets().len(), 6);
    }

    #[test]
    fn isomorphism_detects_duals() {
        // V: a,b < c   and   Λ: a < b,c
        let v = Poset::from_relations(default_names(3), &[(0, 2), (1, 2)]).unwrap();
        let l = Poset::from_relations(default_names(3), &[(0, 1), (0, 2)]).unwrap();
        let v2 = Poset::from_relations(default_names(3), &[(2, 0), (1, 0)]).unwrap();
        assert!(!v.is_isomorphic(&l));
        assert!(v.is_isomorphic(&v2));
        let l2 = Poset::from_relations(default_names(3), &[(2, 0), (2, 1)]).unwrap();
        assert!(l.is_isomorphic(&l2));
    }
}
