//! Frame coproducts `L ⊕ L'` built from C-ideals of `L × L'`.
//!
//! The pair `(a, b)` is stored at index `a * |L'| + b`.

use std::collections::BTreeSet;

use crate::bitset::BitSet;
use crate::error::{Caps, Error, Result};
use crate::hom::FrameMap;
use crate::lattice::{Elem, Frame};

/// Shape of `L × L'` for a pair of frames.
#[derive(Clone, Copy, Debug)]
struct Grid {
    n: usize,
    m: usize,
}

impl Grid {
    fn of(l: &Frame, r: &Frame) -> Grid {
        Grid { n: l.len(), m: r.len() }
    }

    fn idx(&self, a: Elem, b: Elem) -> usize {
        a * self.m + b
    }

    fn cross(&self) -> BitSet {
        let mut s = BitSet::new(self.n * self.m);
        for a in 0..self.n {
            s.insert(self.idx(a, 0));
        }
        for b in 0..self.m {
            s.insert(self.idx(0, b));
        }
        s
    }

    /// `↓x × ↓y`.
    fn rect(&self, l: &Frame, r: &Frame, x: Elem, y: Elem, into: &mut BitSet) -> bool {
        let mut changed = false;
        for a in l.down(x).iter() {
            for b in r.down(y).iter() {
                changed |= into.insert(self.idx(a, b));
            }
        }
        changed
    }
}

/// The least C-ideal containing `seed`: down-closed, containing every pair
/// with a zero coordinate, and closed under joins in either coordinate with
/// the other held fixed.
pub fn c_ideal_closure(l: &Frame, r: &Frame, seed: &BitSet) -> BitSet {
    let g = Grid::of(l, r);
    assert_eq!(seed.universe(), g.n * g.m, "seed has the wrong universe");
    let mut s = seed.union(&g.cross());
    loop {
        let mut changed = false;
        // Column b: everything below (⋁{a | (a,b) ∈ s}, b).
        for b in 0..g.m {
            let top = l.join_all((0..g.n).filter(|&a| s.contains(g.idx(a, b))));
            changed |= g.rect(l, r, top, b, &mut s);
        }
        for a in 0..g.n {
            let top = r.join_all((0..g.m).filter(|&b| s.contains(g.idx(a, b))));
            changed |= g.rect(l, r, a, top, &mut s);
        }
        if !changed {
            return s;
        }
    }
}

/// Direct check of the C-ideal conditions.
pub fn is_c_ideal(l: &Frame, r: &Frame, s: &BitSet) -> bool {
    let g = Grid::of(l, r);
    if !g.cross().is_subset(s) {
        return false;
    }
    for a in 0..g.n {
        for b in 0..g.m {
            if !s.contains(g.idx(a, b)) {
                continue;
            }
            let mut below = BitSet::new(g.n * g.m);
            g.rect(l, r, a, b, &mut below);
            if !below.is_subset(s) {
                return false;
            }
            for a2 in 0..g.n {
                if s.contains(g.idx(a2, b)) && !s.contains(g.idx(l.join(a, a2), b)) {
                    return false;
                }
            }
            for b2 in 0..g.m {
                if s.contains(g.idx(a, b2)) && !s.contains(g.idx(a, r.join(b, b2))) {
                    return false;
                }
            }
        }
    }
    true
}

/// `L ⊕ L'` with its injections.
#[derive(Clone, Debug)]
pub struct CoproductFrame {
    left: Frame,
    right: Frame,
    base: Frame,
    ideals: Vec<BitSet>,
    left_inj: FrameMap,
    right_inj: FrameMap,
    pair_index: Vec<Elem>,
}

/// Computes every C-ideal as a join of principal ones. Fails with
/// [`Error::ResourceCap`] once more than `caps.coproduct_elements` appear.
pub fn coproduct(l: &Frame, r: &Frame, caps: &Caps) -> Result<CoproductFrame> {
    caps.check_frame(l.len())?;
    caps.check_frame(r.len())?;
    let g = Grid::of(l, r);
    let cross = g.cross();
    let principal = |a: Elem, b: Elem| {
        let mut p = cross.clone();
        g.rect(l, r, a, b, &mut p);
        p
    };
    let mut principals: Vec<BitSet> = Vec::with_capacity(g.n * g.m);
    for a in 0..g.n {
        for b in 0..g.m {
            principals.push(principal(a, b));
        }
    }
    let mut seen: BTreeSet<BitSet> = BTreeSet::new();
    seen.insert(cross.clone());
    let mut work = vec![cross];
    while let Some(x) = work.pop() {
        for p in &principals {
            if p.is_subset(&x) {
                continue;
            }
            let y = c_ideal_closure(l, r, &x.union(p));
            if !seen.contains(&y) {
                if seen.len() >= caps.coproduct_elements {
                    return Err(Error::cap("coproduct elements", seen.len() + 1, caps.coproduct_elements));
                }
                seen.insert(y.clone());
                work.push(y);
            }
        }
    }
    let ideals: Vec<BitSet> = seen.into_iter().collect();
    let base = Frame::of_inclusion(&ideals)?;
    let find = |s: &BitSet| ideals.binary_search(s).expect("closure is an element");
    let pair_index: Vec<Elem> = principals.iter().map(find).collect();
    let left_inj = FrameMap::new(
        l.clone(),
        base.clone(),
        l.elements().map(|a| pair_index[g.idx(a, r.top())]).collect(),
    )?;
    let right_inj = FrameMap::new(
        r.clone(),
        base.clone(),
        r.elements().map(|b| pair_index[g.idx(l.top(), b)]).collect(),
    )?;
    Ok(CoproductFrame {
        left: l.clone(),
        right: r.clone(),
        base,
        ideals,
        left_inj,
        right_inj,
        pair_index,
    })
}

impl CoproductFrame {
    pub fn left(&self) -> &Frame {
        &self.left
    }

    pub fn right(&self) -> &Frame {
        &self.right
    }

    pub fn base(&self) -> &Frame {
        &self.base
    }

    pub fn left_inj(&self) -> &FrameMap {
        &self.left_inj
    }

    pub fn right_inj(&self) -> &FrameMap {
        &self.right_inj
    }

    /// The C-ideal of an element, as a set of pair indices.
    pub fn ideal(&self, e: Elem) -> &BitSet {
        &self.ideals[e]
    }

    pub fn ideals(&self) -> &[BitSet] {
        &self.ideals
    }

    pub fn pair(&self, a: Elem, b: Elem) -> usize {
        a * self.right.len() + b
    }

    pub fn unpair(&self, i: usize) -> (Elem, Elem) {
        (i / self.right.len(), i % self.right.len())
    }

    /// The element generated by `(a, b)`, namely `a ⊕ b`.
    pub fn principal(&self, a: Elem, b: Elem) -> Elem {
        self.pair_index[self.pair(a, b)]
    }

    /// The element whose C-ideal is exactly `s`, if `s` is one.
    pub fn element_of(&self, s: &BitSet) -> Option<Elem> {
        self.ideals.binary_search(s).ok()
    }

    /// The element generated by an arbitrary set of pairs.
    pub fn closure_element(&self, seed: &BitSet) -> Elem {
        let c = c_ideal_closure(&self.left, &self.right, seed);
        self.element_of(&c).expect("closure is an element")
    }

    /// Copairing `h(A) = ⋁{ f(a) ∧ g(b) | (a, b) ∈ A }`.
    pub fn copair(&self, f: &FrameMap, g: &FrameMap) -> Result<FrameMap> {
        if *f.dom() != self.left || *g.dom() != self.right {
            return Err(Error::DomainMismatch("copair components must start at the factors".into()));
        }
        if f.cod() != g.cod() {
            return Err(Error::DomainMismatch("copair components need a shared codomain".into()));
        }
        let n = f.cod();
        let image = self
            .ideals
            .iter()
            .map(|s| {
                n.join_all(s.iter().map(|i| {
                    let (a, b) = self.unpair(i);
                    n.meet(f.apply(a), g.apply(b))
                }))
            })
            .collect();
        let h = FrameMap::new(self.base.clone(), n.clone(), image)?;
        debug_assert_eq!(h.compose(&self.left_inj).as_ref().ok(), Some(f));
        debug_assert_eq!(h.compose(&self.right_inj).as_ref().ok(), Some(g));
        Ok(h)
    }

    /// Every element is the join of the principal elements below it, so a
    /// frame map out of the coproduct is fixed by its values on `a ⊕ b`,
    /// which are in turn fixed by the injections.
    pub fn generated_by_principals(&self) -> bool {
        self.base.elements().all(|e| {
            let s = &self.ideals[e];
            e == self.base.join_all(s.iter().map(|i| self.pair_index[i]))
        })
    }

    /// The isomorphism `L ⊕ L' → L' ⊕ L` induced by swapping coordinates.
    pub fn swap_to(&self, other: &CoproductFrame) -> Result<FrameMap> {
        if other.left != self.right || other.right != self.left {
            return Err(Error::DomainMismatch("swap needs the factors in the opposite order".into()));
        }
        let image = self
            .ideals
            .iter()
            .map(|s| {
                let t = BitSet::from_indices(
                    s.universe(),
                    s.iter().map(|i| {
                        let (a, b) = self.unpair(i);
                        other.pair(b, a)
                    }),
                );
                other.element_of(&t).ok_or_else(|| {
                    Error::ShadowMismatch("swapped C-ideal is not a C-ideal".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FrameMap::new(self.base.clone(), other.base.clone(), image)
    }

    /// `d_L`, generated by the pairs `(ℓ, ℓ')` with `ℓ ∧ ℓ' = 0`.
    pub fn diagonal_complement(&self) -> Result<Elem> {
        if self.left != self.right {
            return Err(Error::NotSquare);
        }
        let l = &self.left;
        let seed = BitSet::from_indices(
            l.len() * l.len(),
            l.elements()
                .flat_map(|a| l.elements().map(move |b| (a, b)))
                .filter(|&(a, b)| l.meet(a, b) == l.bottom())
                .map(|(a, b)| self.pair(a, b)),
        );
        Ok(self.closure_element(&seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{enumerate_frame_maps, find_isomorphism};
    use crate::lattice::{FiniteSpace, Poset};

    fn caps() -> Caps {
        Caps::default()
    }
    fn b(k: usize) -> Frame {
        Frame::boolean(k, &caps()).unwrap()
    }
    fn ch(n: usize) -> Frame {
        Frame::chain(n).unwrap()
    }

    /// Oracle: the intersection of all C-ideals containing the seed, found by
    /// scanning every subset of the grid.
    fn brute_closure(l: &Frame, r: &Frame, seed: &BitSet) -> BitSet {
        let nm = l.len() * r.len();
        assert!(nm <= 16);
        let mut best = BitSet::full(nm);
        for mask in 0u64..(1 << nm) {
            let s = BitSet::from_mask(nm, mask);
            if seed.is_subset(&s) && is_c_ideal(l, r, &s) {
                best.intersect_with(&s);
            }
        }
        best
    }

    #[test]
    fn closure_examples() {
        let (l, r) = (b(2), b(2));
        assert_eq!(c_ideal_closure(&l, &r, &BitSet::new(16)).count(), 7);
        assert!(c_ideal_closure(&l, &r, &BitSet::from_indices(16, [15])).is_full());
        // (a, b) and (b, a) with a = e1, b = e2
        let seed = BitSet::from_indices(16, [4 + 2, 2 * 4 + 1]);
        let c = c_ideal_closure(&l, &r, &seed);
        assert_eq!(c.count(), 9);
        assert_eq!(c, brute_closure(&l, &r, &seed));
    }

    #[test]
    fn closure_matches_brute_force() {
        let frames = [ch(1), ch(2), ch(3), b(2), ch(4)];
        for l in &frames {
            for r in &frames {
                let nm = l.len() * r.len();
                if nm > 12 {
                    continue;
                }
                for mask in 0u64..(1 << nm) {
                    let seed = BitSet::from_mask(nm, mask);
                    assert_eq!(c_ideal_closure(l, r, &seed), brute_closure(l, r, &seed));
                }
            }
        }
    }

    #[test]
    fn coproduct_sizes() {
        assert_eq!(coproduct(&ch(3), &ch(3), &caps()).unwrap().base().len(), 6);
        let bb = coproduct(&b(2), &b(2), &caps()).unwrap();
        assert_eq!(bb.base().len(), 16);
        assert!(bb.base().is_boolean());
        let grid = Frame::downsets(&Poset::chain(2).product(&Poset::chain(2)), &caps()).unwrap();
        let ss = coproduct(&ch(3), &ch(3), &caps()).unwrap();
        assert!(find_isomorphism(ss.base(), &grid).is_some());
        assert_eq!(coproduct(&b(3), &b(3), &caps()).unwrap().base().len(), 512);
    }

    #[test]
    fn unit_law_and_commutativity() {
        let frames = [ch(1), ch(2), ch(3), b(2), ch(4), b(3)];
        for l in &frames {
            let c = coproduct(&ch(2), l, &caps()).unwrap();
            assert!(c.right_inj().classify().isomorphism);
            for r in &frames {
                let lr = coproduct(l, r, &caps()).unwrap();
                let rl = coproduct(r, l, &caps()).unwrap();
                assert!(lr.swap_to(&rl).unwrap().classify().isomorphism);
                assert!(lr.generated_by_principals());
                for x in lr.ideals() {
                    for y in lr.ideals() {
                        assert!(is_c_ideal(l, r, &x.intersection(y)));
                    }
                }
            }
        }
    }

    #[test]
    fn copair_examples() {
        let frames = [ch(2), ch(3), b(2)];
        for l in &frames {
            for r in &frames {
                let c = coproduct(l, r, &caps()).unwrap();
                let id = c.copair(c.left_inj(), c.right_inj()).unwrap();
                assert_eq!(id, FrameMap::identity(c.base()));
                for n in &frames {
                    for f in enumerate_frame_maps(l, n, &caps()).unwrap() {
                        for g in enumerate_frame_maps(r, n, &caps()).unwrap() {
                            let h = c.copair(&f, &g).unwrap();
                            assert_eq!(h.compose(c.left_inj()).unwrap(), f);
                            assert_eq!(h.compose(c.right_inj()).unwrap(), g);
                        }
                    }
                }
            }
        }
        let two = ch(2);
        let c = coproduct(&two, &two, &caps()).unwrap();
        let id2 = FrameMap::identity(&two);
        assert!(c.copair(&id2, &id2).is_ok());
        let bad = coproduct(&b(2), &two, &caps()).unwrap();
        assert!(matches!(bad.copair(&id2, &id2), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn diagonal_complement_examples() {
        let c = coproduct(&ch(2), &ch(2), &caps()).unwrap();
        assert_eq!(c.diagonal_complement().unwrap(), c.base().bottom());
        let s = coproduct(&ch(3), &ch(3), &caps()).unwrap();
        assert_eq!(s.diagonal_complement().unwrap(), s.base().bottom());
        let bb = coproduct(&b(2), &b(2), &caps()).unwrap();
        let d = bb.diagonal_complement().unwrap();
        assert_eq!(bb.ideal(d).count(), 9);
        let mixed = coproduct(&b(2), &ch(3), &caps()).unwrap();
        assert_eq!(mixed.diagonal_complement(), Err(Error::NotSquare));
    }

    #[test]
    fn cap_is_enforced() {
        let tight = Caps {
            coproduct_elements: 10,
            ..Caps::default()
        };
        assert!(matches!(
            coproduct(&b(2), &b(2), &tight),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn opens_of_product_space() {
        let s = FiniteSpace::sierpinski();
        let prod = Frame::opens(&s.product(&s));
        let c = coproduct(&Frame::opens(&s), &Frame::opens(&s), &caps()).unwrap();
        assert!(find_isomorphism(c.base(), &prod).is_some());
    }
}
