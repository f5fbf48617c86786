//! Points, spectra and relative spectra.
//!
//! A point is a filter that splits every join registered in a
//! [`GroundJoinFamily`]. With the full family these are the classical
//! completely prime filters; dropping entries lets extra "generic" filters in.

use crate::bitset::BitSet;
use crate::error::{Caps, Error, Result};
use crate::hom::{enumerate_frame_maps, FrameMap};
use crate::lattice::{Elem, FiniteSpace, Frame};

/// A registered join `target = ⋁ parts`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JoinEntry {
    pub target: Elem,
    pub parts: BitSet,
}

/// An explicit set of joins standing in for the subsets a ground model sees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundJoinFamily {
    frame: Frame,
    entries: Vec<JoinEntry>,
}

impl GroundJoinFamily {
    /// Validates that each entry's parts join to its target.
    pub fn new(frame: &Frame, entries: impl IntoIterator<Item = JoinEntry>) -> Result<Self> {
        let mut entries: Vec<JoinEntry> = entries.into_iter().collect();
        for e in &entries {
            if e.parts.universe() != frame.len() || e.target >= frame.len() {
                return Err(Error::InvalidJoinEntry(format!("{e:?}")));
            }
            if frame.join_all(e.parts.iter()) != e.target {
                return Err(Error::InvalidJoinEntry(frame.name(e.target).into()));
            }
        }
        entries.sort();
        entries.dedup();
        Ok(GroundJoinFamily {
            frame: frame.clone(),
            entries,
        })
    }

    /// Every subset with its join. Only materialized up to
    /// `caps.full_join_family` elements.
    pub fn full(frame: &Frame, caps: &Caps) -> Result<Self> {
        let n = frame.len();
        if n > caps.full_join_family {
            return Err(Error::cap("full join family (frame elements)", n, caps.full_join_family));
        }
        let mut entries: Vec<JoinEntry> = (0u64..(1 << n))
            .map(|mask| {
                let parts = BitSet::from_mask(n, mask);
                JoinEntry {
                    target: frame.join_all(parts.iter()),
                    parts,
                }
            })
            .collect();
        entries.sort();
        Ok(GroundJoinFamily {
            frame: frame.clone(),
            entries,
        })
    }

    /// The empty join and all binary joins. A filter splits these exactly
    /// when it splits every join, so this family has the same points as the
    /// full one at quadratic size.
    pub fn finitary(frame: &Frame) -> Self {
        let n = frame.len();
        let mut entries = vec![JoinEntry {
            target: frame.bottom(),
            parts: BitSet::new(n),
        }];
        for a in 0..n {
            for b in (a + 1)..n {
                entries.push(JoinEntry {
                    target: frame.join(a, b),
                    parts: BitSet::from_indices(n, [a, b]),
                });
            }
        }
        entries.sort();
        GroundJoinFamily {
            frame: frame.clone(),
            entries,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn entries(&self) -> &[JoinEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, e: &JoinEntry) -> bool {
        self.entries.binary_search(e).is_ok()
    }

    /// Keeps the entries for which `keep` holds.
    pub fn retain(&self, mut keep: impl FnMut(&JoinEntry) -> bool) -> Self {
        GroundJoinFamily {
            frame: self.frame.clone(),
            entries: self.entries.iter().filter(|e| keep(e)).cloned().collect(),
        }
    }

    pub fn without(&self, removed: &[JoinEntry]) -> Self {
        self.retain(|e| !removed.contains(e))
    }

    pub fn is_subfamily_of(&self, other: &GroundJoinFamily) -> bool {
        self.entries.iter().all(|e| other.contains(e))
    }

    /// Whether `filter` meets the parts of every registered join whose
    /// target it contains.
    pub fn splits(&self, filter: &BitSet) -> bool {
        self.first_unsplit(filter).is_none()
    }

    pub fn first_unsplit(&self, filter: &BitSet) -> Option<&JoinEntry> {
        self.entries
            .iter()
            .find(|e| filter.contains(e.target) && !e.parts.intersects(filter))
    }
}

/// `↑p`.
fn principal_filter(f: &Frame, p: Elem) -> BitSet {
    f.up(p).clone()
}

/// Every proper filter of a finite frame is `↑p` for its meet `p ≠ 0`.
pub fn filters(f: &Frame) -> Vec<BitSet> {
    let mut out: Vec<BitSet> = f
        .elements()
        .filter(|&p| p != f.bottom())
        .map(|p| principal_filter(f, p))
        .collect();
    out.sort();
    out
}

pub fn is_filter(f: &Frame, s: &BitSet) -> bool {
    s.contains(f.top())
        && !s.contains(f.bottom())
        && s.iter().all(|a| f.up(a).is_subset(s))
        && s.iter().all(|a| s.iter().all(|b| s.contains(f.meet(a, b))))
}

/// Filters that split every join in `j`, sorted.
pub fn relative_points(j: &GroundJoinFamily) -> Vec<BitSet> {
    filters(j.frame()).into_iter().filter(|x| j.splits(x)).collect()
}

/// Completely prime filters computed from prime elements: `p ≠ 1` with
/// `a ∧ b ≤ p ⇒ a ≤ p or b ≤ p` gives the filter `{x | x ≰ p}`.
pub fn classical_points(f: &Frame) -> Vec<BitSet> {
    let n = f.len();
    let mut out: Vec<BitSet> = f
        .elements()
        .filter(|&p| p != f.top() && is_prime_element(f, p))
        .map(|p| f.down(p).complement())
        .collect();
    debug_assert!(out.iter().all(|x| x.universe() == n));
    out.sort();
    out
}

pub fn is_prime_element(f: &Frame, p: Elem) -> bool {
    f.elements().all(|a| {
        f.elements()
            .all(|b| !f.leq(f.meet(a, b), p) || f.leq(a, p) || f.leq(b, p))
    })
}

/// A space of points together with the basic opens `ℓ̂ = { x | ℓ ∈ x }`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    frame: Frame,
    points: Vec<BitSet>,
    basic: Vec<BitSet>,
    space: FiniteSpace,
}

impl Spectrum {
    /// Builds the spectrum on a sorted list of points of `f`. Points are
    /// named `↑p` after the meet of their filter.
    pub fn on_points(f: &Frame, points: Vec<BitSet>) -> Spectrum {
        let k = points.len();
        let basic: Vec<BitSet> = f
            .elements()
            .map(|l| BitSet::from_indices(k, (0..k).filter(|&x| points[x].contains(l))))
            .collect();
        let names = points
            .iter()
            .map(|x| format!("↑{}", f.name(f.meet_all(x.iter()))))
            .collect();
        let space = FiniteSpace::from_basis(names, &basic);
        Spectrum {
            frame: f.clone(),
            points,
            basic,
            space,
        }
    }

    /// `ΣL` from prime elements.
    pub fn classical(f: &Frame) -> Spectrum {
        Spectrum::on_points(f, classical_points(f))
    }

    /// Points relative to `j`.
    pub fn relative(j: &GroundJoinFamily) -> Spectrum {
        Spectrum::on_points(j.frame(), relative_points(j))
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn points(&self) -> &[BitSet] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    /// `ℓ̂`.
    pub fn basic(&self, l: Elem) -> &BitSet {
        &self.basic[l]
    }

    pub fn index_of(&self, filter: &BitSet) -> Option<usize> {
        self.points.binary_search(filter).ok()
    }

    /// The frame map `ℓ ↦ ℓ̂` into the opens of the spectrum.
    pub fn basic_map(&self) -> FrameMap {
        let opens = Frame::opens(&self.space);
        let image = self
            .frame
            .elements()
            .map(|l| self.space.open_index(&self.basic[l]).expect("basic opens are open"))
            .collect();
        FrameMap::new_unchecked(self.frame.clone(), opens, image)
    }
}

/// The point map `x ↦ f⁻¹(x)` from the spectrum of `cod(f)` to the spectrum
/// of `dom(f)`, checked to be continuous.
pub fn interpret_map(f: &FrameMap, source: &Spectrum, target: &Spectrum) -> Result<Vec<usize>> {
    if source.frame() != f.cod() || target.frame() != f.dom() {
        return Err(Error::DomainMismatch(
            "the source spectrum must be over the codomain, the target over the domain".into(),
        ));
    }
    let n = f.dom().len();
    let map = source
        .points()
        .iter()
        .map(|x| {
            let pre = BitSet::from_indices(n, f.dom().elements().filter(|&l| x.contains(f.apply(l))));
            target.index_of(&pre).ok_or_else(|| {
                let names: Vec<&str> = pre.iter().map(|l| f.dom().name(l)).collect();
                Error::NotAPointImage(format!("{{{}}}", names.join(", ")))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for l in f.dom().elements() {
        let pre = FiniteSpace::preimage(&map, target.basic(l));
        if pre != *source.basic(f.apply(l)) {
            return Err(Error::ShadowMismatch(format!(
                "preimage of the basic open of {} is not the basic open of its image",
                f.dom().name(l)
            )));
        }
    }
    debug_assert!(source.space().is_continuous(&map, target.space()));
    Ok(map)
}

/// A space with an assignment of opens to frame elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preinterpretation {
    pub space: FiniteSpace,
    pub rho: Vec<BitSet>,
}

impl Preinterpretation {
    /// Checks the preinterpretation laws relative to `j`.
    pub fn validate(&self, j: &GroundJoinFamily) -> Result<()> {
        let f = j.frame();
        let y = &self.space;
        let bad = |msg: String| Err(Error::InvalidPreinterpretation(msg));
        if self.rho.len() != f.len() {
            return bad(format!("{} opens for {} elements", self.rho.len(), f.len()));
        }
        for l in f.elements() {
            if !y.is_open(&self.rho[l]) {
                return bad(format!("image of {} is not open", f.name(l)));
            }
        }
        if !self.rho[f.top()].is_full() {
            return bad("top is not sent to the whole space".into());
        }
        if !self.rho[f.bottom()].is_empty() {
            return bad("bottom is not sent to the empty set".into());
        }
        for a in f.elements() {
            for b in f.elements() {
                if self.rho[f.meet(a, b)] != self.rho[a].intersection(&self.rho[b]) {
                    return bad(format!("meet of {} and {} is not preserved", f.name(a), f.name(b)));
                }
            }
        }
        for e in j.entries() {
            let mut u = BitSet::new(y.len());
            for p in e.parts.iter() {
                u.union_with(&self.rho[p]);
            }
            if u != self.rho[e.target] {
                return bad(format!("registered join onto {} is not preserved", f.name(e.target)));
            }
        }
        Ok(())
    }

    /// The frame maps into the opens of `y`, read as preinterpretations.
    /// When `j` registers every finite join these are all of them.
    pub fn all_on(j: &GroundJoinFamily, y: &FiniteSpace, caps: &Caps) -> Result<Vec<Preinterpretation>> {
        let opens = Frame::opens(y);
        let maps = enumerate_frame_maps(j.frame(), &opens, caps)?;
        maps.into_iter()
            .map(|h| {
                let p = Preinterpretation {
                    space: y.clone(),
                    rho: h.image().iter().map(|&o| y.opens()[o].clone()).collect(),
                };
                p.validate(j).map(|_| p)
            })
            .collect()
    }
}

/// The mediating map of a preinterpretation, with its uniqueness check.
#[derive(Clone, Debug)]
pub struct Mediation {
    pub spectrum: Spectrum,
    pub map: Vec<usize>,
    /// Continuous maps into the spectrum that were tried.
    pub candidates: usize,
    /// How many of those satisfy `ρ = f⁻¹ ∘ π`; exactly one when unique.
    pub factoring: usize,
}

impl Mediation {
    pub fn is_unique(&self) -> bool {
        self.factoring == 1
    }
}

/// `y ↦ { ℓ | y ∈ ρ(ℓ) }`, the map through which `ρ` factors.
pub fn mediating_map(j: &GroundJoinFamily, p: &Preinterpretation, caps: &Caps) -> Result<Mediation> {
    p.validate(j)?;
    let f = j.frame();
    let spectrum = Spectrum::relative(j);
    let map = (0..p.space.len())
        .map(|y| {
            let filter = BitSet::from_indices(f.len(), f.elements().filter(|&l| p.rho[l].contains(y)));
            spectrum.index_of(&filter).ok_or_else(|| {
                Error::ShadowMismatch(format!("neighbourhood filter of {} is not a point", p.space.name(y)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let factors = |g: &[usize]| {
        f.elements()
            .all(|l| FiniteSpace::preimage(g, spectrum.basic(l)) == p.rho[l])
    };
    if !factors(&map) || !p.space.is_continuous(&map, spectrum.space()) {
        return Err(Error::ShadowMismatch("mediating map does not factor the preinterpretation".into()));
    }
    let all = p.space.continuous_maps(spectrum.space(), caps)?;
    let factoring = all.iter().filter(|g| factors(g)).count();
    Ok(Mediation {
        candidates: all.len(),
        factoring,
        spectrum,
        map,
    })
}

/// Frame maps into a finite Boolean algebra, decoded atom by atom into
/// tuples of classical points.
#[derive(Clone, Debug)]
pub struct BooleanPoints {
    pub maps: Vec<FrameMap>,
    pub atoms: Vec<Elem>,
    pub points: Vec<BitSet>,
    /// `decoded[i][t]` is the point read off map `i` at atom `t`.
    pub decoded: Vec<Vec<usize>>,
}

/// Enumerates `L → B`, decodes each map at every atom of `B`, and checks
/// that decoding and re-encoding are mutually inverse.
pub fn boolean_valued_points(l: &Frame, b: &Frame, caps: &Caps) -> Result<BooleanPoints> {
    if !b.is_boolean() {
        let witness = b
            .elements()
            .find(|&x| b.complement(x).is_none())
            .map(|x| b.name(x).to_string())
            .unwrap_or_default();
        return Err(Error::NotBoolean(format!("{witness} has no complement")));
    }
    let maps = enumerate_frame_maps(l, b, caps)?;
    let atoms = b.atoms();
    let points = classical_points(l);
    let mut decoded = Vec::with_capacity(maps.len());
    for f in &maps {
        let tuple = atoms
            .iter()
            .map(|&t| {
                let x = BitSet::from_indices(l.len(), l.elements().filter(|&e| b.leq(t, f.apply(e))));
                points.binary_search(&x).map_err(|_| {
                    Error::ShadowMismatch(format!("atom {} does not decode to a point", b.name(t)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let back = encode_points(l, b, &atoms, &points, &tuple)?;
        if back != *f {
            return Err(Error::ShadowMismatch("re-encoding a decoded map changed it".into()));
        }
        decoded.push(tuple);
    }
    let mut sorted = decoded.clone();
    sorted.sort();
    sorted.dedup();
    let expected = points.len().checked_pow(atoms.len() as u32);
    if sorted.len() != decoded.len() || Some(decoded.len()) != expected {
        return Err(Error::ShadowMismatch(format!(
            "{} maps against {} points and {} atoms",
            decoded.len(),
            points.len(),
            atoms.len()
        )));
    }
    Ok(BooleanPoints {
        maps,
        atoms,
        points,
        decoded,
    })
}

/// `ℓ ↦ ⋁{ t | ℓ ∈ x_t }` for a tuple of points indexed by atoms.
pub fn encode_points(
    l: &Frame,
    b: &Frame,
    atoms: &[Elem],
    points: &[BitSet],
    tuple: &[usize],
) -> Result<FrameMap> {
    let image = l
        .elements()
        .map(|e| b.join_all(atoms.iter().zip(tuple).filter(|(_, &x)| points[x].contains(e)).map(|(&t, _)| t)))
        .collect();
    FrameMap::new(l.clone(), b.clone(), image)
}

/// `ΣΩX` with the unit `x ↦ { U | x ∈ U }`.
#[derive(Clone, Debug)]
pub struct Soberification {
    pub spectrum: Spectrum,
    pub unit: Vec<usize>,
    pub sober: bool,
}

pub fn soberify(x: &FiniteSpace) -> Soberification {
    let opens = Frame::opens(x);
    let spectrum = Spectrum::classical(&opens);
    let unit: Vec<usize> = (0..x.len())
        .map(|p| {
            let nb = BitSet::from_indices(opens.len(), (0..opens.len()).filter(|&u| x.opens()[u].contains(p)));
            spectrum.index_of(&nb).expect("neighbourhood filters are completely prime")
        })
        .collect();
    let sober = x.is_homeomorphism(&unit, spectrum.space());
    Soberification { spectrum, unit, sober }
}

/// The bijection `Cont(Y, ΣL) ≅ Frm(L, ΩY)`.
#[derive(Clone, Debug)]
pub struct Adjunction {
    pub continuous: Vec<Vec<usize>>,
    pub frame_maps: Vec<FrameMap>,
    /// `pairing[i]` is the frame map matched with continuous map `i`.
    pub pairing: Vec<usize>,
}

impl Adjunction {
    pub fn count(&self) -> usize {
        self.pairing.len()
    }
}

pub fn adjunction_check(l: &Frame, y: &FiniteSpace, caps: &Caps) -> Result<Adjunction> {
    let spectrum = Spectrum::classical(l);
    let oy = Frame::opens(y);
    let continuous = y.continuous_maps(spectrum.space(), caps)?;
    let frame_maps = enumerate_frame_maps(l, &oy, caps)?;
    if continuous.len() != frame_maps.len() {
        return Err(Error::ShadowMismatch(format!(
            "{} continuous maps against {} frame maps",
            continuous.len(),
            frame_maps.len()
        )));
    }
    // g ↦ (ℓ ↦ g⁻¹(ℓ̂))
    let to_frame = |g: &[usize]| -> Result<FrameMap> {
        let image = l
            .elements()
            .map(|e| {
                y.open_index(&FiniteSpace::preimage(g, spectrum.basic(e)))
                    .ok_or_else(|| Error::ShadowMismatch("preimage of a basic open is not open".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        FrameMap::new(l.clone(), oy.clone(), image)
    };
    // h ↦ (y ↦ { ℓ | y ∈ h(ℓ) })
    let to_point_map = |h: &FrameMap| -> Result<Vec<usize>> {
        (0..y.len())
            .map(|p| {
                let x = BitSet::from_indices(l.len(), l.elements().filter(|&e| y.opens()[h.apply(e)].contains(p)));
                spectrum
                    .index_of(&x)
                    .ok_or_else(|| Error::ShadowMismatch("frame map does not give a point".into()))
            })
            .collect()
    };
    let mut pairing = Vec::with_capacity(continuous.len());
    for g in &continuous {
        let h = to_frame(g)?;
        let i = frame_maps
            .binary_search_by(|m| m.image().cmp(h.image()))
            .map_err(|_| Error::ShadowMismatch("transposed map was not enumerated".into()))?;
        if to_point_map(&h)? != *g {
            return Err(Error::ShadowMismatch("transposition is not involutive".into()));
        }
        pairing.push(i);
    }
    let mut hit = pairing.clone();
    hit.sort();
    hit.dedup();
    if hit.len() != frame_maps.len() {
        return Err(Error::ShadowMismatch("pairing is not injective".into()));
    }
    for h in &frame_maps {
        let g = to_point_map(h)?;
        if continuous.binary_search(&g).is_err() || to_frame(&g)? != *h {
            return Err(Error::ShadowMismatch("transposed frame map is not continuous".into()));
        }
    }
    Ok(Adjunction {
        continuous,
        frame_maps,
        pairing,
    })
}

/// The natural map `A ↦ ⋃{ â × b̂ | (a, b) ∈ A }` from `L ⊕ L'` to the opens of
/// `ΣL × ΣL'`.
pub fn spatial_product_map(
    c: &crate::coproduct::CoproductFrame,
    left: &Spectrum,
    right: &Spectrum,
) -> Result<FrameMap> {
    let space = left.space().product(right.space());
    let opens = Frame::opens(&space);
    let (n, m) = (left.len(), right.len());
    let image = c
        .base()
        .elements()
        .map(|e| {
            let mut u = BitSet::new(n * m);
            for i in c.ideal(e).iter() {
                let (a, b) = c.unpair(i);
                u.union_with(&crate::lattice::rectangle(left.basic(a), right.basic(b), m));
            }
            space
                .open_index(&u)
                .ok_or_else(|| Error::ShadowMismatch("union of rectangles is not open".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    FrameMap::new(c.base().clone(), opens, image)
}
