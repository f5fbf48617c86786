use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::poset::{default_names, Poset};
use super::space::FiniteSpace;
use crate::bitset::BitSet;
use crate::error::{Caps, Error, Result};

/// Index of a frame element in the frame's canonical linear extension.
pub type Elem = usize;

/// A finite frame (finite distributive lattice) with cached operation tables.
///
/// Elements are dense indices `0..n` in a canonical linear extension of the
/// order, so the bottom is always `0` and the top is always `n - 1`. Cloning
/// is cheap: the tables live behind an `Arc`.
#[derive(Clone)]
pub struct Frame(Arc<FrameData>);

struct FrameData {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    join: Vec<u32>,
    meet: Vec<u32>,
    heyting: OnceLock<Vec<u32>>,
}

/// Canonical linear extension: Kahn's algorithm, ties broken by input index.
fn canonical_order(p: &Poset) -> Vec<usize> {
    let n = p.len();
    let mut preds: Vec<usize> = (0..n).map(|a| p.down(a).count() - 1).collect();
    let mut heap: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&a| preds[a] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(a)) = heap.pop() {
        order.push(a);
        for b in p.up(a).iter() {
            if b != a {
                preds[b] -= 1;
                if preds[b] == 0 {
                    heap.push(Reverse(b));
                }
            }
        }
    }
    debug_assert_eq!(order.len(), n);
    order
}

impl Frame {
    /// Validates a finite poset as a frame and caches its tables.
    ///
    /// Fails with [`Error::NotALattice`] when some pair lacks a join or meet,
    /// and with [`Error::NotDistributive`] on a distributivity counterexample.
    /// For finite lattices binary distributivity is equivalent to the infinite
    /// distributive law.
    pub fn from_order(p: &Poset) -> Result<Frame> {
        let n = p.len();
        if n == 0 {
            return Err(Error::EmptyOrder);
        }
        let order = canonical_order(p);
        let mut new_of_old = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new;
        }
        let names: Vec<String> = order.iter().map(|&o| p.name(o).to_string()).collect();
        let up: Vec<BitSet> = order
            .iter()
            .map(|&o| BitSet::from_indices(n, p.up(o).iter().map(|b| new_of_old[b])))
            .collect();
        Frame::from_canonical(names, up)
    }

    /// `up` must already be indexed by a linear extension of the order.
    pub(crate) fn from_canonical(names: Vec<String>, up: Vec<BitSet>) -> Result<Frame> {
        let n = up.len();
        if n == 0 {
            return Err(Error::EmptyOrder);
        }
        let mut down = vec![BitSet::new(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b].insert(a);
            }
        }
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let ub = up[a].intersection(&up[b]);
                let j = match ub.first() {
                    Some(j) if ub.is_subset(&up[j]) => j,
                    _ => return Err(Error::NotALattice(names[a].clone(), names[b].clone())),
                };
                let lb = down[a].intersection(&down[b]);
                let m = match lb.last() {
                    Some(m) if lb.is_subset(&down[m]) => m,
                    _ => return Err(Error::NotALattice(names[a].clone(), names[b].clone())),
                };
                join[a * n + b] = j as u32;
                join[b * n + a] = j as u32;
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
            }
        }
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let frame = Frame(Arc::new(FrameData {
            names,
            index,
            up,
            down,
            join,
            meet,
            heyting: OnceLock::new(),
        }));
        if let Some((a, b, c)) = frame.distributivity_counterexample() {
            return Err(Error::NotDistributive(
                frame.name(a).into(),
                frame.name(b).into(),
                frame.name(c).into(),
            ));
        }
        Ok(frame)
    }

    fn distributivity_counterexample(&self) -> Option<(Elem, Elem, Elem)> {
        let n = self.len();
        for a in 0..n {
            let row = &self.0.meet[a * n..(a + 1) * n];
            for b in 0..n {
                for c in (b + 1)..n {
                    let lhs = row[self.join(b, c)];
                    let rhs = self.join(row[b] as usize, row[c] as usize);
                    if lhs as usize != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// The `n`-element chain `e0 < e1 < … < e(n−1)`.
    pub fn chain(n: usize) -> Result<Frame> {
        Frame::from_order(&Poset::chain(n))
    }

    /// The powerset of `k` atoms. Elements are ordered as bit masks, so the
    /// atoms are the elements `2^i`.
    pub fn boolean(k: usize, caps: &Caps) -> Result<Frame> {
        if k >= usize::BITS as usize - 1 {
            return Err(Error::cap("frame elements", usize::MAX, caps.frame_elements));
        }
        let n = 1usize << k;
        caps.check_frame(n)?;
        let up = (0..n)
            .map(|a| BitSet::from_indices(n, (0..n).filter(|&b| a & !b == 0)))
            .collect();
        Frame::from_canonical(default_names(n), up)
    }

    /// Down-closed subsets of `p` under inclusion.
    pub fn downsets(p: &Poset, caps: &Caps) -> Result<Frame> {
        let sets = p.down_sets();
        caps.check_frame(sets.len())?;
        Ok(Frame::of_sets(&sets))
    }

    /// The frame of open sets of a finite space.
    pub fn opens(x: &FiniteSpace) -> Frame {
        Frame::of_sets(x.opens())
    }

    /// Frame of a family of sets closed under union and intersection, sorted
    /// by the `BitSet` order (a linear extension of inclusion).
    pub(crate) fn of_sets(sets: &[BitSet]) -> Frame {
        Frame::of_inclusion(sets).expect("set lattice closed under ∪ and ∩")
    }

    /// Any family of sets sorted by the `BitSet` order, ordered by inclusion
    /// and validated as a frame.
    pub(crate) fn of_inclusion(sets: &[BitSet]) -> Result<Frame> {
        let n = sets.len();
        let up = (0..n)
            .map(|a| BitSet::from_indices(n, (a..n).filter(|&b| sets[a].is_subset(&sets[b]))))
            .collect();
        Frame::from_canonical(default_names(n), up)
    }

    pub fn with_names(&self, names: Vec<String>) -> Frame {
        assert_eq!(names.len(), self.len());
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Frame(Arc::new(FrameData {
            names,
            index,
            up: self.0.up.clone(),
            down: self.0.down.clone(),
            join: self.0.join.clone(),
            meet: self.0.meet.clone(),
            heyting: OnceLock::new(),
        }))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    /// True for the one-element frame, where `0 = 1`.
    pub fn is_degenerate(&self) -> bool {
        self.len() == 1
    }

    // A frame always has at least one element.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn bottom(&self) -> Elem {
        0
    }

    #[inline]
    pub fn top(&self) -> Elem {
        self.len() - 1
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.0.up[a].contains(b)
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.0.join[a * self.len() + b] as Elem
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.0.meet[a * self.len() + b] as Elem
    }

    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }

    /// Meet of a family computed as the join of its lower bounds.
    pub fn meet_via_lower_bounds(&self, family: &[Elem]) -> Elem {
        self.join_all(
            self.elements()
                .filter(|&b| family.iter().all(|&a| self.leq(b, a))),
        )
    }

    /// Heyting implication `a → b`, the largest `c` with `c ∧ a ≤ b`.
    ///
    /// The table is filled on first use.
    pub fn heyting(&self, a: Elem, b: Elem) -> Elem {
        let table = self.0.heyting.get_or_init(|| {
            let n = self.len();
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    let c = self.join_all(self.elements().filter(|&c| self.leq(self.meet(c, a), b)));
                    t[a * n + b] = c as u32;
                }
            }
            t
        });
        table[a * self.len() + b] as Elem
    }

    pub fn up(&self, a: Elem) -> &BitSet {
        &self.0.up[a]
    }

    pub fn down(&self, a: Elem) -> &BitSet {
        &self.0.down[a]
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.0.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.0.index.get(name).copied()
    }

    pub fn to_poset(&self) -> Poset {
        Poset::new_unchecked(self.0.names.clone(), self.0.up.clone())
    }

    /// Covering pairs `a ⋖ b` in index order.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.up(a).iter() {
                if b == a {
                    continue;
                }
                let mut between = self.up(a).intersection(self.down(b));
                between.remove(a);
                between.remove(b);
                if between.is_empty() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Canonical text: element list in canonical order, then the covering
    /// relation, e.g. `{ e0 e1 e2; e0 < e1; e1 < e2 }`.
    pub fn canonical_text(&self) -> String {
        let mut s = String::from("{ ");
        s.push_str(&self.0.names.join(" "));
        for (a, b) in self.covers() {
            s.push_str(&format!("; {} < {}", self.name(a), self.name(b)));
        }
        s.push_str(" }");
        s
    }

    pub fn complement(&self, a: Elem) -> Option<Elem> {
        self.elements()
            .find(|&b| self.meet(a, b) == self.bottom() && self.join(a, b) == self.top())
    }

    /// All elements with a complement.
    pub fn complemented_elements(&self) -> BitSet {
        BitSet::from_indices(
            self.len(),
            self.elements().filter(|&a| self.complement(a).is_some()),
        )
    }

    pub fn is_boolean(&self) -> bool {
        self.complemented_elements().is_full()
    }

    /// Elements covering the bottom.
    pub fn atoms(&self) -> Vec<Elem> {
        self.covers()
            .into_iter()
            .filter(|&(a, _)| a == self.bottom())
            .map(|(_, b)| b)
            .collect()
    }

    /// Elements covered by the top.
    pub fn coatoms(&self) -> Vec<Elem> {
        self.covers()
            .into_iter()
            .filter(|&(_, b)| b == self.top())
            .map(|(a, _)| a)
            .collect()
    }

    /// Non-bottom elements that are not the join of two strictly smaller ones.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| a != self.bottom())
            .filter(|&a| {
                let below: Vec<Elem> = self.down(a).iter().filter(|&b| b != a).collect();
                self.join_all(below) != a
            })
            .collect()
    }

    /// `a ≺ b`: some `c` has `a ∧ c = 0` and `b ∨ c = 1`.
    pub fn well_below(&self, a: Elem, b: Elem) -> bool {
        self.well_below_witness(a, b).is_some()
    }

    pub fn well_below_witness(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.elements()
            .find(|&c| self.meet(a, c) == self.bottom() && self.join(b, c) == self.top())
    }

    /// Re-derives every cached table from the order and checks it, including
    /// distributivity and the Heyting adjunction.
    pub fn revalidate(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let j = self.join(a, b);
                let m = self.meet(a, b);
                let ub = self.up(a).intersection(self.up(b));
                let lb = self.down(a).intersection(self.down(b));
                if !ub.contains(j) || !ub.is_subset(self.up(j)) || !lb.contains(m) || !lb.is_subset(self.down(m)) {
                    return Err(Error::NotALattice(self.name(a).into(), self.name(b).into()));
                }
            }
        }
        if let Some((a, b, c)) = self.distributivity_counterexample() {
            return Err(Error::NotDistributive(
                self.name(a).into(),
                self.name(b).into(),
                self.name(c).into(),
            ));
        }
        for a in 0..n {
            if !self.leq(self.bottom(), a) || !self.leq(a, self.top()) {
                return Err(Error::NotALattice(self.name(a).into(), self.name(a).into()));
            }
        }
        Ok(())
    }

    /// A copy whose join table entry for `(a, b)` is overwritten. Only for
    /// exercising failure paths of validators.
    #[doc(hidden)]
    pub fn corrupted_join(&self, a: Elem, b: Elem, value: Elem) -> Frame {
        let mut join = self.0.join.clone();
        let n = self.len();
        join[a * n + b] = value as u32;
        join[b * n + a] = value as u32;
        Frame(Arc::new(FrameData {
            names: self.0.names.clone(),
            index: self.0.index.clone(),
            up: self.0.up.clone(),
            down: self.0.down.clone(),
            join,
            meet: self.0.meet.clone(),
            heyting: OnceLock::new(),
        }))
    }

    pub fn ptr_eq(&self, other: &Frame) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

/// Structural equality: same canonical order and the same names.
impl PartialEq for Frame {
    fn eq(&self, other: &Frame) -> bool {
        self.ptr_eq(other) || (self.0.names == other.0.names && self.0.up == other.0.up)
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frame{}", self.canonical_text())
    }
}
