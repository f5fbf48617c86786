//! Frame homomorphisms: validation, enumeration, adjoints and openness.

use serde::Serialize;

use crate::error::{Caps, Error, Result};
use crate::lattice::{Elem, Frame};

/// A validated frame map, stored as its image array over domain elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameMap {
    dom: Frame,
    cod: Frame,
    image: Vec<Elem>,
}

/// Set-theoretic shape of a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MapClass {
    pub injective: bool,
    pub surjective: bool,
    pub isomorphism: bool,
}

/// Verdict of [`FrameMap::openness`], with the first failing pair of each
/// characterization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Openness {
    pub open: bool,
    /// `(a, b)` with `f(a → b) ≠ f(a) → f(b)`.
    pub heyting_witness: Option<(Elem, Elem)>,
    /// `(m, l)` with `f!(m ∧ f(l)) ≠ f!(m) ∧ l`.
    pub frobenius_witness: Option<(Elem, Elem)>,
}

impl FrameMap {
    /// Checks endpoints and preservation of binary joins and meets; for
    /// finite frames this is preservation of all joins and finite meets.
    pub fn new(dom: Frame, cod: Frame, image: Vec<Elem>) -> Result<FrameMap> {
        if image.len() != dom.len() {
            return Err(Error::InvalidImage(format!(
                "{} entries for a domain of {} elements",
                image.len(),
                dom.len()
            )));
        }
        if let Some(&bad) = image.iter().find(|&&v| v >= cod.len()) {
            return Err(Error::InvalidImage(format!("{bad} is not a codomain element")));
        }
        if image[dom.bottom()] != cod.bottom() || image[dom.top()] != cod.top() {
            return Err(Error::EndpointViolation);
        }
        for a in dom.elements() {
            for b in (a + 1)..dom.len() {
                if image[dom.join(a, b)] != cod.join(image[a], image[b]) {
                    return Err(Error::NotJoinPreserving(dom.name(a).into(), dom.name(b).into()));
                }
                if image[dom.meet(a, b)] != cod.meet(image[a], image[b]) {
                    return Err(Error::NotMeetPreserving(dom.name(a).into(), dom.name(b).into()));
                }
            }
        }
        Ok(FrameMap { dom, cod, image })
    }

    pub(crate) fn new_unchecked(dom: Frame, cod: Frame, image: Vec<Elem>) -> FrameMap {
        debug_assert!(FrameMap::new(dom.clone(), cod.clone(), image.clone()).is_ok());
        FrameMap { dom, cod, image }
    }

    pub fn identity(f: &Frame) -> FrameMap {
        FrameMap {
            dom: f.clone(),
            cod: f.clone(),
            image: f.elements().collect(),
        }
    }

    pub fn dom(&self) -> &Frame {
        &self.dom
    }

    pub fn cod(&self) -> &Frame {
        &self.cod
    }

    pub fn image(&self) -> &[Elem] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.image[a]
    }

    /// `self ∘ g`: apply `g` first. Requires `cod(g) = dom(self)`.
    pub fn compose(&self, g: &FrameMap) -> Result<FrameMap> {
        if g.cod != self.dom {
            return Err(Error::DomainMismatch(
                "codomain of the inner map is not the domain of the outer map".into(),
            ));
        }
        Ok(FrameMap {
            dom: g.dom.clone(),
            cod: self.cod.clone(),
            image: g.image.iter().map(|&x| self.image[x]).collect(),
        })
    }

    /// `f!(m) = ⋀{ l | m ≤ f(l) }`, indexed by codomain elements.
    pub fn left_adjoint(&self) -> Vec<Elem> {
        self.cod
            .elements()
            .map(|m| {
                self.dom
                    .meet_all(self.dom.elements().filter(|&l| self.cod.leq(m, self.image[l])))
            })
            .collect()
    }

    pub fn classify(&self) -> MapClass {
        let mut hit = vec![false; self.cod.len()];
        let mut injective = true;
        for &v in &self.image {
            if hit[v] {
                injective = false;
            }
            hit[v] = true;
        }
        let surjective = hit.iter().all(|&h| h);
        MapClass {
            injective,
            surjective,
            isomorphism: injective && surjective,
        }
    }

    /// Decides openness two ways: preservation of all meets and Heyting
    /// implication, and the Frobenius identity for the left adjoint.
    /// Disagreement is reported as [`Error::CharacterizationMismatch`].
    pub fn openness(&self) -> Result<Openness> {
        let (d, c, f) = (&self.dom, &self.cod, &self.image);
        // Finite meets (top and binary) are preserved by construction, and in a
        // finite frame every meet is finite, so only the Heyting law can fail.
        let mut heyting_witness = None;
        if f[d.top()] != c.top() {
            heyting_witness = Some((d.top(), d.top()));
        }
        'outer: for a in d.elements() {
            for b in d.elements() {
                if f[d.meet(a, b)] != c.meet(f[a], f[b])
                    || f[d.heyting(a, b)] != c.heyting(f[a], f[b])
                {
                    heyting_witness = Some((a, b));
                    break 'outer;
                }
            }
        }
        let adj = self.left_adjoint();
        let mut frobenius_witness = None;
        'outer2: for m in c.elements() {
            for l in d.elements() {
                if adj[c.meet(m, f[l])] != d.meet(adj[m], l) {
                    frobenius_witness = Some((m, l));
                    break 'outer2;
                }
            }
        }
        if heyting_witness.is_some() != frobenius_witness.is_some() {
            return Err(Error::CharacterizationMismatch(format!(
                "Heyting witness {heyting_witness:?}, Frobenius witness {frobenius_witness:?}"
            )));
        }
        Ok(Openness {
            open: heyting_witness.is_none(),
            heyting_witness,
            frobenius_witness,
        })
    }

    pub fn is_open(&self) -> Result<bool> {
        Ok(self.openness()?.open)
    }

    /// `self(a) ≤ other(a)` for every `a`.
    pub fn leq_pointwise(&self, other: &FrameMap) -> bool {
        self.dom
            .elements()
            .all(|a| self.cod.leq(self.image[a], other.image[a]))
    }

    /// The inverse of a bijective frame map, itself a frame map.
    pub fn inverse(&self) -> Option<FrameMap> {
        if !self.classify().isomorphism {
            return None;
        }
        let mut inv = vec![0; self.cod.len()];
        for (a, &v) in self.image.iter().enumerate() {
            inv[v] = a;
        }
        Some(FrameMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            image: inv,
        })
    }
}

/// Every frame map `dom → cod`, lexicographically ordered by image array.
///
/// Backtracks over domain elements in canonical order. Images of elements
/// that are joins of earlier elements are forced; meets with every earlier
/// element are checked as soon as the element is assigned.
pub fn enumerate_frame_maps(dom: &Frame, cod: &Frame, caps: &Caps) -> Result<Vec<FrameMap>> {
    caps.check_frame(dom.len())?;
    caps.check_frame(cod.len())?;
    let n = dom.len();
    // For each z, one pair (x, y) with x, y < z and x ∨ y = z, plus all of them.
    let mut join_pairs: Vec<Vec<(Elem, Elem)>> = vec![Vec::new(); n];
    for x in 0..n {
        for y in (x + 1)..n {
            let z = dom.join(x, y);
            if z != x && z != y {
                join_pairs[z].push((x, y));
            }
        }
    }
    let mut out = Vec::new();
    let mut img = vec![usize::MAX; n];
    let mut st = Search {
        dom,
        cod,
        join_pairs: &join_pairs,
        img: &mut img,
        out: &mut out,
        cap: caps.enumeration,
    };
    st.go(0)?;
    Ok(out
        .into_iter()
        .map(|image| FrameMap {
            dom: dom.clone(),
            cod: cod.clone(),
            image,
        })
        .collect())
}

struct Search<'a> {
    dom: &'a Frame,
    cod: &'a Frame,
    join_pairs: &'a [Vec<(Elem, Elem)>],
    img: &'a mut Vec<Elem>,
    out: &'a mut Vec<Vec<Elem>>,
    cap: usize,
}

impl Search<'_> {
    fn consistent(&self, z: Elem, v: Elem) -> bool {
        let (d, c) = (self.dom, self.cod);
        if z == d.bottom() && v != c.bottom() {
            return false;
        }
        if z == d.top() && v != c.top() {
            return false;
        }
        for &(x, y) in &self.join_pairs[z] {
            if c.join(self.img[x], self.img[y]) != v {
                return false;
            }
        }
        for y in 0..z {
            if self.img[d.meet(z, y)] != c.meet(v, self.img[y]) {
                return false;
            }
        }
        true
    }

    fn go(&mut self, z: Elem) -> Result<()> {
        let n = self.dom.len();
        if z == n {
            if self.out.len() >= self.cap {
                return Err(Error::cap("enumerated frame maps", self.out.len() + 1, self.cap));
            }
            self.out.push(self.img.clone());
            return Ok(());
        }
        let forced = self.join_pairs[z]
            .first()
            .map(|&(x, y)| self.cod.join(self.img[x], self.img[y]));
        let candidates: Vec<Elem> = match forced {
            Some(v) => vec![v],
            None if z == self.dom.bottom() => vec![self.cod.bottom()],
            None if z == self.dom.top() => vec![self.cod.top()],
            None => self.cod.elements().collect(),
        };
        for v in candidates {
            if self.consistent(z, v) {
                self.img[z] = v;
                self.go(z + 1)?;
            }
        }
        self.img[z] = usize::MAX;
        Ok(())
    }
}

/// An order isomorphism `a → b` (hence a frame isomorphism), if one exists.
pub fn find_isomorphism(a: &Frame, b: &Frame) -> Option<FrameMap> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let sig = |f: &Frame, x: Elem| (f.up(x).count(), f.down(x).count());
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        k: usize,
        a: &Frame,
        b: &Frame,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sig: &dyn Fn(&Frame, Elem) -> (usize, usize),
    ) -> bool {
        if k == a.len() {
            return true;
        }
        for c in 0..b.len() {
            if used[c] || sig(a, k) != sig(b, c) {
                continue;
            }
            if (0..k).all(|j| a.leq(j, k) == b.leq(assign[j], c) && a.leq(k, j) == b.leq(c, assign[j])) {
                assign[k] = c;
                used[c] = true;
                if go(k + 1, a, b, assign, used, sig) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    if go(0, a, b, &mut assign, &mut used, &sig) {
        Some(FrameMap::new_unchecked(a.clone(), b.clone(), assign))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Poset;

    fn caps() -> Caps {
        Caps::default()
    }
    fn two() -> Frame {
        Frame::boolean(1, &caps()).unwrap()
    }
    fn s() -> Frame {
        Frame::chain(3).unwrap()
    }
    fn b2() -> Frame {
        Frame::boolean(2, &caps()).unwrap()
    }

    /// Oracle: filter every function dom → cod through the validator.
    fn brute_force(dom: &Frame, cod: &Frame) -> Vec<Vec<Elem>> {
        let (n, m) = (dom.len(), cod.len());
        let mut out = Vec::new();
        let mut f = vec![0; n];
        loop {
            if FrameMap::new(dom.clone(), cod.clone(), f.clone()).is_ok() {
                out.push(f.clone());
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
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

    fn small_frames() -> Vec<Frame> {
        let v = Poset::from_relations(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 2), (1, 2)],
        )
        .unwrap();
        vec![
            Frame::chain(1).unwrap(),
            two(),
            s(),
            b2(),
            Frame::chain(4).unwrap(),
            Frame::downsets(&v, &caps()).unwrap(),
            Frame::boolean(3, &caps()).unwrap(),
        ]
    }

    #[test]
    fn validation_examples() {
        assert!(FrameMap::new(s(), s(), vec![0, 1, 2]).is_ok());
        assert!(FrameMap::new(s(), two(), vec![0, 0, 1]).is_ok());
        assert_eq!(
            FrameMap::new(b2(), two(), vec![0, 1, 1, 1]).unwrap_err(),
            Error::NotMeetPreserving("e1".into(), "e2".into())
        );
        assert_eq!(FrameMap::new(s(), two(), vec![0, 1, 0]).unwrap_err(), Error::EndpointViolation);
        assert!(matches!(
            FrameMap::new(s(), two(), vec![0, 1]),
            Err(Error::InvalidImage(_))
        ));
    }

    #[test]
    fn enumeration_examples() {
        let maps = enumerate_frame_maps(&two(), &s(), &caps()).unwrap();
        assert_eq!(maps.len(), 1);
        let maps = enumerate_frame_maps(&s(), &two(), &caps()).unwrap();
        let images: Vec<_> = maps.iter().map(|m| m.image().to_vec()).collect();
        assert_eq!(images, vec![vec![0, 0, 1], vec![0, 1, 1]]);
        let maps = enumerate_frame_maps(&b2(), &two(), &caps()).unwrap();
        let images: Vec<_> = maps.iter().map(|m| m.image().to_vec()).collect();
        assert_eq!(images, vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let frames = small_frames();
        for d in &frames {
            for c in &frames {
                if (c.len() as f64).powi(d.len() as i32) > 300_000.0 {
                    continue;
                }
                let fast: Vec<Vec<Elem>> = enumerate_frame_maps(d, c, &caps())
                    .unwrap()
                    .into_iter()
                    .map(|m| m.image().to_vec())
                    .collect();
                assert_eq!(fast, brute_force(d, c), "{d:?} -> {c:?}");
            }
        }
    }

    #[test]
    fn left_adjoint_examples_and_law() {
        let id = FrameMap::identity(&b2());
        assert_eq!(id.left_adjoint(), vec![0, 1, 2, 3]);
        // the unique map 2 → S
        let u = &enumerate_frame_maps(&two(), &s(), &caps()).unwrap()[0];
        assert_eq!(u.left_adjoint(), vec![0, 1, 1]);
        let p = FrameMap::new(b2(), two(), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(p.left_adjoint(), vec![0, 1]);
        for d in &small_frames() {
            for c in &small_frames() {
                for f in enumerate_frame_maps(d, c, &caps()).unwrap() {
                    let adj = f.left_adjoint();
                    for m in c.elements() {
                        for l in d.elements() {
                            assert_eq!(d.leq(adj[m], l), c.leq(m, f.apply(l)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn openness_examples() {
        assert!(FrameMap::identity(&s()).is_open().unwrap());
        let up = FrameMap::new(s(), two(), vec![0, 1, 1]).unwrap();
        assert!(up.is_open().unwrap());
        let down = FrameMap::new(s(), two(), vec![0, 0, 1]).unwrap();
        let o = down.openness().unwrap();
        assert!(!o.open);
        assert_eq!(o.heyting_witness, Some((1, 0)));
    }

    #[test]
    fn classification_examples() {
        let id = FrameMap::identity(&s()).classify();
        assert!(id.injective && id.surjective && id.isomorphism);
        let up = FrameMap::new(s(), two(), vec![0, 1, 1]).unwrap().classify();
        assert!(up.surjective && !up.injective);
        let inc = &enumerate_frame_maps(&two(), &s(), &caps()).unwrap()[0];
        let c = inc.classify();
        assert!(c.injective && !c.surjective);
    }

    #[test]
    fn composition_laws_and_openness_closure() {
        let frames = small_frames();
        let f = FrameMap::new(b2(), two(), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(f.compose(&FrameMap::identity(&b2())).unwrap(), f);
        assert_eq!(FrameMap::identity(&two()).compose(&f).unwrap(), f);
        assert!(matches!(f.compose(&f), Err(Error::DomainMismatch(_))));
        for a in &frames {
            for b in &frames {
                for c in &frames {
                    let ab = enumerate_frame_maps(a, b, &caps()).unwrap();
                    let bc = enumerate_frame_maps(b, c, &caps()).unwrap();
                    for g in &ab {
                        for h in &bc {
                            let hg = h.compose(g).unwrap();
                            FrameMap::new(a.clone(), c.clone(), hg.image().to_vec()).unwrap();
                            if g.is_open().unwrap() && h.is_open().unwrap() {
                                assert!(hg.is_open().unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn isomorphism_search() {
        let grid = Frame::downsets(&Poset::chain(2).product(&Poset::chain(2)), &caps()).unwrap();
        assert!(find_isomorphism(&grid, &grid).is_some());
        assert!(find_isomorphism(&b2(), &Frame::chain(4).unwrap()).is_none());
        let renamed = b2().with_names(vec!["0".into(), "x".into(), "y".into(), "1".into()]);
        let iso = find_isomorphism(&b2(), &renamed).unwrap();
        assert!(iso.classify().isomorphism);
        assert!(iso.inverse().is_some());
    }
}
