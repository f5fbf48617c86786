use std::collections::BTreeSet;

use super::poset::Poset;
use crate::bitset::BitSet;
use crate::error::{Caps, Error, Result};

/// A finite topological space given by its full family of open sets.
///
/// Opens are kept sorted by the [`BitSet`] order, which is a linear extension
/// of inclusion; `opens()[0]` is `∅` and the last open is the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    names: Vec<String>,
    opens: Vec<BitSet>,
}

fn point_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

impl FiniteSpace {
    /// Validates an explicit open-set family.
    pub fn new(names: Vec<String>, opens: Vec<BitSet>) -> Result<FiniteSpace> {
        let n = names.len();
        let set: BTreeSet<BitSet> = opens.into_iter().collect();
        if set.iter().any(|o| o.universe() != n) {
            return Err(Error::InvalidSpace("open set over the wrong point count".into()));
        }
        if !set.contains(&BitSet::new(n)) {
            return Err(Error::InvalidSpace("the empty set is not open".into()));
        }
        if !set.contains(&BitSet::full(n)) {
            return Err(Error::InvalidSpace("the whole space is not open".into()));
        }
        for a in &set {
            for b in &set {
                if !set.contains(&a.union(b)) {
                    return Err(Error::InvalidSpace(format!(
                        "union of {a:?} and {b:?} is not open"
                    )));
                }
                if !set.contains(&a.intersection(b)) {
                    return Err(Error::InvalidSpace(format!(
                        "intersection of {a:?} and {b:?} is not open"
                    )));
                }
            }
        }
        Ok(FiniteSpace {
            names,
            opens: set.into_iter().collect(),
        })
    }

    /// The topology generated by a subbasis.
    pub fn generated(names: Vec<String>, subbasis: &[BitSet]) -> Result<FiniteSpace> {
        let n = names.len();
        if subbasis.iter().any(|o| o.universe() != n) {
            return Err(Error::InvalidSpace("open set over the wrong point count".into()));
        }
        let mut basis: BTreeSet<BitSet> = BTreeSet::new();
        basis.insert(BitSet::full(n));
        let mut stack: Vec<BitSet> = vec![BitSet::full(n)];
        while let Some(b) = stack.pop() {
            for s in subbasis {
                let t = b.intersection(s);
                if basis.insert(t.clone()) {
                    stack.push(t);
                }
            }
        }
        Ok(FiniteSpace {
            names,
            opens: unions_of(&basis.into_iter().collect::<Vec<_>>(), n),
        })
    }

    pub(crate) fn from_basis(names: Vec<String>, basis: &[BitSet]) -> FiniteSpace {
        let n = names.len();
        FiniteSpace {
            names,
            opens: unions_of(basis, n),
        }
    }

    pub fn empty() -> FiniteSpace {
        FiniteSpace {
            names: vec![],
            opens: vec![BitSet::new(0)],
        }
    }

    pub fn discrete(n: usize) -> FiniteSpace {
        let basis: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, [i])).collect();
        FiniteSpace::from_basis(point_names(n), &basis)
    }

    pub fn indiscrete(n: usize) -> FiniteSpace {
        let mut opens = vec![BitSet::new(n), BitSet::full(n)];
        opens.dedup();
        FiniteSpace {
            names: point_names(n),
            opens,
        }
    }

    /// Points `p` (open) and `q`, with opens `∅ ⊂ {p} ⊂ {p, q}`.
    pub fn sierpinski() -> FiniteSpace {
        FiniteSpace::new(
            vec!["p".into(), "q".into()],
            vec![BitSet::new(2), BitSet::from_indices(2, [0]), BitSet::full(2)],
        )
        .unwrap()
    }

    /// Opens are the down-closed subsets of `p`, so that the specialization
    /// order of the space is `p` itself.
    pub fn alexandrov(p: &Poset) -> FiniteSpace {
        FiniteSpace {
            names: p.names().to_vec(),
            opens: p.down_sets(),
        }
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

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn with_names(mut self, names: Vec<String>) -> FiniteSpace {
        assert_eq!(names.len(), self.names.len());
        self.names = names;
        self
    }

    pub fn opens(&self) -> &[BitSet] {
        &self.opens
    }

    pub fn is_open(&self, set: &BitSet) -> bool {
        self.opens.binary_search(set).is_ok()
    }

    pub fn open_index(&self, set: &BitSet) -> Option<usize> {
        self.opens.binary_search(set).ok()
    }

    pub fn interior(&self, set: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.len());
        for o in &self.opens {
            if o.is_subset(set) {
                out.union_with(o);
            }
        }
        out
    }

    pub fn closure(&self, set: &BitSet) -> BitSet {
        self.interior(&set.complement()).complement()
    }

    /// Smallest open set containing `x`.
    pub fn neighbourhood(&self, x: usize) -> &BitSet {
        self.opens
            .iter()
            .find(|o| o.contains(x) && self.opens.iter().all(|p| !p.contains(x) || o.is_subset(p)))
            .expect("finite spaces have minimal neighbourhoods")
    }

    /// Specialization preorder: `x ⊑ y` iff `x ∈ cl{y}`.
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.opens.iter().all(|o| !o.contains(x) || o.contains(y))
    }

    /// Product space on pairs `(i, j)` indexed `i * other.len() + j`.
    pub fn product(&self, other: &FiniteSpace) -> FiniteSpace {
        let (n, m) = (self.len(), other.len());
        let mut names = Vec::with_capacity(n * m);
        for a in &self.names {
            for b in &other.names {
                names.push(format!("{a}_{b}"));
            }
        }
        let mut basis = Vec::new();
        for u in &self.opens {
            for v in &other.opens {
                basis.push(rectangle(u, v, m));
            }
        }
        FiniteSpace::from_basis(names, &basis)
    }

    /// Disjoint union; points of `other` are shifted by `self.len()`.
    pub fn disjoint_union(&self, other: &FiniteSpace) -> FiniteSpace {
        let (n, m) = (self.len(), other.len());
        let mut names: Vec<String> = self.names.iter().map(|s| format!("l_{s}")).collect();
        names.extend(other.names.iter().map(|s| format!("r_{s}")));
        let mut opens = Vec::new();
        for u in &self.opens {
            for v in &other.opens {
                let mut w = BitSet::new(n + m);
                u.iter().for_each(|i| {
                    w.insert(i);
                });
                v.iter().for_each(|j| {
                    w.insert(n + j);
                });
                opens.push(w);
            }
        }
        opens.sort();
        opens.dedup();
        FiniteSpace { names, opens }
    }

    /// Preimage of `set ⊆ cod` under a point function.
    pub fn preimage(f: &[usize], set: &BitSet) -> BitSet {
        BitSet::from_indices(f.len(), (0..f.len()).filter(|&x| set.contains(f[x])))
    }

    pub fn image(f: &[usize], set: &BitSet, cod_len: usize) -> BitSet {
        BitSet::from_indices(cod_len, set.iter().map(|x| f[x]))
    }

    pub fn is_continuous(&self, f: &[usize], cod: &FiniteSpace) -> bool {
        f.len() == self.len()
            && cod
                .opens
                .iter()
                .all(|v| self.is_open(&FiniteSpace::preimage(f, v)))
    }

    pub fn is_open_map(&self, f: &[usize], cod: &FiniteSpace) -> bool {
        self.opens
            .iter()
            .all(|u| cod.is_open(&FiniteSpace::image(f, u, cod.len())))
    }

    pub fn is_injective(f: &[usize]) -> bool {
        let mut seen = BTreeSet::new();
        f.iter().all(|&y| seen.insert(y))
    }

    /// Continuous, injective, and every open of `self` is the preimage of an
    /// open of `cod`.
    pub fn is_embedding(&self, f: &[usize], cod: &FiniteSpace) -> bool {
        if !self.is_continuous(f, cod) || !FiniteSpace::is_injective(f) {
            return false;
        }
        let traces: BTreeSet<BitSet> = cod
            .opens
            .iter()
            .map(|v| FiniteSpace::preimage(f, v))
            .collect();
        self.opens.iter().all(|u| traces.contains(u))
    }

    pub fn is_open_embedding(&self, f: &[usize], cod: &FiniteSpace) -> bool {
        self.is_embedding(f, cod) && self.is_open_map(f, cod)
    }

    pub fn is_homeomorphism(&self, f: &[usize], cod: &FiniteSpace) -> bool {
        self.len() == cod.len()
            && FiniteSpace::is_injective(f)
            && self.is_continuous(f, cod)
            && self.is_open_map(f, cod)
    }

    /// Every continuous map into `cod`, in lexicographic order of image arrays.
    pub fn continuous_maps(&self, cod: &FiniteSpace, caps: &Caps) -> Result<Vec<Vec<usize>>> {
        let (n, m) = (self.len(), cod.len());
        let total = (m as f64).powi(n as i32);
        if total > caps.enumeration as f64 {
            return Err(Error::cap("candidate point functions", total as usize, caps.enumeration));
        }
        let mut out = Vec::new();
        if n > 0 && m == 0 {
            return Ok(out);
        }
        let mut f = vec![0usize; n];
        loop {
            if self.is_continuous(&f, cod) {
                out.push(f.clone());
            }
            // odometer, last coordinate fastest
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                f[i] += 1;
                if f[i] < m {
                    break;
                }
                f[i] = 0;
            }
        }
    }

    /// A homeomorphism onto `other`, if one exists.
    pub fn find_homeomorphism(&self, other: &FiniteSpace) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.opens.len() != other.opens.len() {
            return None;
        }
        let n = self.len();
        let nb_self: Vec<BitSet> = (0..n).map(|x| self.neighbourhood(x).clone()).collect();
        let nb_other: Vec<BitSet> = (0..n).map(|x| other.neighbourhood(x).clone()).collect();
        let mut assign = vec![usize::MAX; n];
        let mut used = vec![false; n];
        // Finite topologies are determined by minimal neighbourhoods, so a
        // bijection matching them is a homeomorphism.
        fn go(
            k: usize,
            a: &[BitSet],
            b: &[BitSet],
            assign: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            let n = a.len();
            if k == n {
                return true;
            }
            for c in 0..n {
                if used[c] || a[k].count() != b[c].count() {
                    continue;
                }
                let ok = (0..k).all(|j| {
                    a[k].contains(j) == b[c].contains(assign[j])
                        && a[j].contains(k) == b[assign[j]].contains(c)
                });
                if ok {
                    assign[k] = c;
                    used[c] = true;
                    if go(k + 1, a, b, assign, used) {
                        return true;
                    }
                    used[c] = false;
                }
            }
            false
        }
        if go(0, &nb_self, &nb_other, &mut assign, &mut used) {
            Some(assign)
        } else {
            None
        }
    }

    /// Kolmogorov: distinct points are topologically distinguishable.
    pub fn is_t0(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| x == y || self.neighbourhood(x) != self.neighbourhood(y)))
    }

    /// Points are closed.
    pub fn is_t1(&self) -> bool {
        (0..self.len()).all(|x| {
            let pt = BitSet::from_indices(self.len(), [x]);
            self.closure(&pt) == pt
        })
    }

    /// Distinct points have disjoint open neighbourhoods.
    pub fn is_t2(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).all(|y| {
                x == y
                    || self.opens.iter().any(|u| {
                        u.contains(x)
                            && self
                                .opens
                                .iter()
                                .any(|v| v.contains(y) && u.is_disjoint(v))
                    })
            })
        })
    }

    /// A point and a closed set missing it have disjoint open neighbourhoods.
    pub fn is_regular(&self) -> bool {
        let n = self.len();
        self.opens.iter().all(|o| {
            let closed = o.complement();
            (0..n).filter(|&x| !closed.contains(x)).all(|x| {
                self.opens.iter().any(|u| {
                    u.contains(x)
                        && self
                            .opens
                            .iter()
                            .any(|v| closed.is_subset(v) && u.is_disjoint(v))
                })
            })
        })
    }

    /// T₁ and regular.
    pub fn is_t3(&self) -> bool {
        self.is_t1() && self.is_regular()
    }

    pub fn is_connected(&self) -> bool {
        let full = BitSet::full(self.len());
        self.opens
            .iter()
            .all(|o| o.is_empty() || *o == full || !self.is_open(&o.complement()))
    }
}

pub(crate) fn rectangle(u: &BitSet, v: &BitSet, m: usize) -> BitSet {
    let n = u.universe();
    let mut r = BitSet::new(n * m);
    for i in u.iter() {
        for j in v.iter() {
            r.insert(i * m + j);
        }
    }
    r
}

/// All unions of subfamilies of `basis` (including the empty union), sorted.
fn unions_of(basis: &[BitSet], n: usize) -> Vec<BitSet> {
    let mut seen: BTreeSet<BitSet> = BTreeSet::new();
    seen.insert(BitSet::new(n));
    let mut stack = vec![BitSet::new(n)];
    while let Some(s) = stack.pop() {
        for b in basis {
            if b.is_subset(&s) {
                continue;
            }
            let t = s.union(b);
            if seen.insert(t.clone()) {
                stack.push(t);
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_topologies() {
        let names = point_names(2);
        let no_empty = vec![BitSet::full(2), BitSet::from_indices(2, [0])];
        assert!(FiniteSpace::new(names.clone(), no_empty).is_err());
        let not_closed = vec![
            BitSet::new(2),
            BitSet::from_indices(2, [0]),
            BitSet::from_indices(2, [1]),
            BitSet::full(2),
        ];
        assert!(FiniteSpace::new(names.clone(), not_closed[..3].to_vec()).is_err());
        assert!(FiniteSpace::new(names, not_closed).is_ok());
    }

    #[test]
    fn separation_of_small_spaces() {
        let s = FiniteSpace::sierpinski();
        assert!(s.is_t0() && !s.is_t1() && !s.is_t2() && !s.is_t3());
        let d = FiniteSpace::discrete(2);
        assert!(d.is_t0() && d.is_t1() && d.is_t2() && d.is_t3());
        let i = FiniteSpace::indiscrete(2);
        assert!(!i.is_t0() && !i.is_t1() && !i.is_t2() && !i.is_t3());
        // indiscrete spaces are vacuously regular but not T1
        assert!(i.is_regular());
    }

    #[test]
    fn products_and_homeomorphisms() {
        let s = FiniteSpace::sierpinski();
        let s2 = s.product(&s);
        assert_eq!(s2.len(), 4);
        assert_eq!(s2.opens().len(), 6);
        let grid = FiniteSpace::alexandrov(&Poset::chain(2).product(&Poset::chain(2)));
        assert!(s2.find_homeomorphism(&grid).is_some());
        assert!(s2.find_homeomorphism(&FiniteSpace::discrete(4)).is_none());
    }

    #[test]
    fn continuous_map_counts() {
        let s = FiniteSpace::sierpinski();
        // monotone self-maps of a 2-chain
        assert_eq!(s.continuous_maps(&s, &Caps::default()).unwrap().len(), 3);
        let e = FiniteSpace::empty();
        assert_eq!(e.continuous_maps(&s, &Caps::default()).unwrap(), vec![Vec::<usize>::new()]);
        assert!(s.continuous_maps(&e, &Caps::default()).unwrap().is_empty());
    }

    #[test]
    fn generated_topology() {
        let x = FiniteSpace::generated(
            point_names(3),
            &[BitSet::from_indices(3, [0, 1]), BitSet::from_indices(3, [1, 2])],
        )
        .unwrap();
        assert_eq!(x.opens().len(), 5);
        assert!(x.is_open(&BitSet::from_indices(3, [1])));
    }
}
