//! Directed systems of frames, their inverse limits, and the matching
//! colimits of spectra.

use std::collections::BTreeMap;

use crate::bitset::BitSet;
use crate::error::{Caps, Error, Result};
use crate::hom::FrameMap;
use crate::interp::{interpret_map, Spectrum};
use crate::lattice::{Elem, FiniteSpace, Frame, Poset};

/// Frames `L_i` over a directed index poset, with a frame map
/// `p^{ij} : L_j → L_i` for every `i ≤ j`.
#[derive(Clone, Debug)]
pub struct DirectedSystem {
    index: Poset,
    frames: Vec<Frame>,
    maps: BTreeMap<(usize, usize), FrameMap>,
}

impl DirectedSystem {
    /// Maps may be given on any generating set of pairs (covers suffice); the
    /// rest are filled in by composition and every composite is checked.
    pub fn new(index: Poset, frames: Vec<Frame>, given: Vec<((usize, usize), FrameMap)>) -> Result<Self> {
        let k = index.len();
        if frames.len() != k {
            return Err(Error::IncoherentSystem(format!("{} frames for {} indices", frames.len(), k)));
        }
        if k == 0 {
            return Err(Error::NotDirected("(empty)".into(), "(empty)".into()));
        }
        for i in 0..k {
            for j in 0..k {
                if !(0..k).any(|u| index.leq(i, u) && index.leq(j, u)) {
                    return Err(Error::NotDirected(index.name(i).into(), index.name(j).into()));
                }
            }
        }
        let mut maps = BTreeMap::new();
        for i in 0..k {
            maps.insert((i, i), FrameMap::identity(&frames[i]));
        }
        for ((i, j), f) in given {
            if i >= k || j >= k || !index.leq(i, j) {
                return Err(Error::IncoherentSystem(format!("map for a pair ({i}, {j}) that is not i ≤ j")));
            }
            if *f.dom() != frames[j] || *f.cod() != frames[i] {
                return Err(Error::IncoherentSystem(format!(
                    "map for {} ≤ {} must go from L_{} to L_{}",
                    index.name(i),
                    index.name(j),
                    index.name(j),
                    index.name(i)
                )));
            }
            if let Some(old) = maps.insert((i, j), f.clone()) {
                if old != f {
                    return Err(Error::IncoherentSystem(format!(
                        "conflicting maps for {} ≤ {}",
                        index.name(i),
                        index.name(j)
                    )));
                }
            }
        }
        loop {
            let mut added = Vec::new();
            for (&(i, j), f) in &maps {
                for (&(j2, l), g) in maps.range((j, 0)..(j + 1, 0)) {
                    debug_assert_eq!(j2, j);
                    if !maps.contains_key(&(i, l)) && !added.iter().any(|(p, _)| *p == (i, l)) {
                        added.push(((i, l), f.compose(g)?));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            maps.extend(added);
        }
        for i in 0..k {
            for j in 0..k {
                if index.leq(i, j) && !maps.contains_key(&(i, j)) {
                    return Err(Error::IncoherentSystem(format!(
                        "no map for {} ≤ {}",
                        index.name(i),
                        index.name(j)
                    )));
                }
            }
        }
        for (&(i, j), f) in &maps {
            for (&(_, l), g) in maps.range((j, 0)..(j + 1, 0)) {
                if f.compose(g)? != maps[&(i, l)] {
                    return Err(Error::IncoherentSystem(format!(
                        "p^{{{a}{b}}} ∘ p^{{{b}{c}}} differs from p^{{{a}{c}}}",
                        a = index.name(i),
                        b = index.name(j),
                        c = index.name(l)
                    )));
                }
            }
        }
        Ok(DirectedSystem { index, frames, maps })
    }

    /// The chain `2^{atoms[0]} ← 2^{atoms[1]} ← …` whose maps forget the
    /// higher atoms. Requires non-decreasing atom counts.
    pub fn boolean_restriction_chain(atoms: &[usize], caps: &Caps) -> Result<Self> {
        let frames = atoms
            .iter()
            .map(|&k| Frame::boolean(k, caps))
            .collect::<Result<Vec<_>>>()?;
        let mut given = Vec::new();
        for i in 0..atoms.len().saturating_sub(1) {
            if atoms[i] > atoms[i + 1] {
                return Err(Error::IncoherentSystem("atom counts must not decrease".into()));
            }
            let keep = (1usize << atoms[i]) - 1;
            let image = frames[i + 1].elements().map(|x| x & keep).collect();
            given.push(((i, i + 1), FrameMap::new(frames[i + 1].clone(), frames[i].clone(), image)?));
        }
        DirectedSystem::new(Poset::chain(atoms.len()), frames, given)
    }

    pub fn index(&self) -> &Poset {
        &self.index
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn map(&self, i: usize, j: usize) -> Option<&FrameMap> {
        self.maps.get(&(i, j))
    }
}

/// The frame of threads `x` with `p^{ij}(x_j) = x_i`, ordered pointwise.
#[derive(Clone, Debug)]
pub struct InverseLimit {
    pub frame: Frame,
    /// Thread of each element, in canonical order.
    pub threads: Vec<Vec<Elem>>,
}

pub fn frame_inverse_limit(sys: &DirectedSystem, caps: &Caps) -> Result<InverseLimit> {
    let k = sys.frames.len();
    let mut threads = Vec::new();
    let mut cur = vec![0; k];
    fn go(
        i: usize,
        sys: &DirectedSystem,
        cur: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
        cap: usize,
    ) -> Result<()> {
        if i == cur.len() {
            if out.len() >= cap {
                return Err(Error::cap("threads of the inverse limit", out.len() + 1, cap));
            }
            out.push(cur.clone());
            return Ok(());
        }
        for x in sys.frames[i].elements() {
            let ok = (0..i).all(|h| {
                (!sys.index.leq(h, i) || sys.maps[&(h, i)].apply(x) == cur[h])
                    && (!sys.index.leq(i, h) || sys.maps[&(i, h)].apply(cur[h]) == x)
            });
            if ok {
                cur[i] = x;
                go(i + 1, sys, cur, out, cap)?;
            }
        }
        Ok(())
    }
    go(0, sys, &mut cur, &mut threads, caps.frame_elements)?;
    let names: Vec<String> = threads
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().enumerate().map(|(i, &x)| sys.frames[i].name(x)).collect();
            format!("<{}>", parts.join(","))
        })
        .collect();
    let n = threads.len();
    let up = (0..n)
        .map(|a| {
            BitSet::from_indices(
                n,
                (0..n).filter(|&b| (0..k).all(|i| sys.frames[i].leq(threads[a][i], threads[b][i]))),
            )
        })
        .collect();
    let poset = Poset::new(names, up)?;
    let frame = Frame::from_order(&poset)?;
    let threads: Vec<Vec<Elem>> = frame
        .names()
        .iter()
        .map(|nm| threads[poset.names().iter().position(|p| p == nm).unwrap()].clone())
        .collect();
    // Joins and meets are computed pointwise.
    for a in frame.elements() {
        for b in frame.elements() {
            for (i, l) in sys.frames.iter().enumerate() {
                if threads[frame.join(a, b)][i] != l.join(threads[a][i], threads[b][i])
                    || threads[frame.meet(a, b)][i] != l.meet(threads[a][i], threads[b][i])
                {
                    return Err(Error::IncoherentSystem("thread operations are not pointwise".into()));
                }
            }
        }
    }
    Ok(InverseLimit { frame, threads })
}

/// The colimit of the spectra `ΣL_i` along the point maps induced by the
/// system, compared with the spectrum of the inverse limit.
#[derive(Clone, Debug)]
pub struct SpectrumColimit {
    pub space: FiniteSpace,
    /// Class of point `x` of `ΣL_i`, as `class[i][x]`.
    pub class: Vec<Vec<usize>>,
    /// Every induced point map is an open embedding.
    pub open_embeddings: bool,
    /// The comparison `[i, x] ↦ { t | t_i ∈ x }` is a homeomorphism onto
    /// the spectrum of the inverse limit.
    pub homeomorphic: bool,
}

pub fn spectrum_colimit(sys: &DirectedSystem, limit: &InverseLimit) -> Result<SpectrumColimit> {
    let k = sys.frames.len();
    let spectra: Vec<Spectrum> = sys.frames.iter().map(Spectrum::classical).collect();
    let offset: Vec<usize> = spectra
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s.len();
            Some(o)
        })
        .collect();
    let total = offset.last().map_or(0, |&o| o + spectra[k - 1].len());
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut open_embeddings = true;
    let mut point_maps = BTreeMap::new();
    for (&(i, j), f) in &sys.maps {
        // p^{ij} : L_j → L_i induces ΣL_i → ΣL_j.
        let m = interpret_map(f, &spectra[i], &spectra[j])?;
        open_embeddings &= spectra[i].space().is_open_embedding(&m, spectra[j].space());
        for (x, &y) in m.iter().enumerate() {
            let (a, b) = (find(&mut parent, offset[i] + x), find(&mut parent, offset[j] + y));
            parent[a] = b;
        }
        point_maps.insert((i, j), m);
    }
    let mut roots: Vec<usize> = (0..total).map(|x| find(&mut parent, x)).collect();
    let mut distinct = roots.clone();
    distinct.sort();
    distinct.dedup();
    for r in roots.iter_mut() {
        *r = distinct.binary_search(r).unwrap();
    }
    let c = distinct.len();
    if c > 20 {
        return Err(Error::cap("colimit points", c, 20));
    }
    let class: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..spectra[i].len()).map(|x| roots[offset[i] + x]).collect())
        .collect();
    // Final topology: a set of classes is open when every pullback is open.
    let opens: Vec<BitSet> = (0u64..(1 << c))
        .map(|mask| BitSet::from_mask(c, mask))
        .filter(|u| {
            (0..k).all(|i| {
                let pre = BitSet::from_indices(spectra[i].len(), (0..spectra[i].len()).filter(|&x| u.contains(class[i][x])));
                spectra[i].space().is_open(&pre)
            })
        })
        .collect();
    let names = (0..c).map(|x| format!("[{x}]")).collect();
    let space = FiniteSpace::new(names, opens)?;
    let limit_spec = Spectrum::classical(&limit.frame);
    let mut comparison = vec![usize::MAX; c];
    let mut well_defined = true;
    for i in 0..k {
        for (x, filter) in spectra[i].points().iter().enumerate() {
            let t = BitSet::from_indices(
                limit.frame.len(),
                limit.frame.elements().filter(|&e| filter.contains(limit.threads[e][i])),
            );
            match limit_spec.index_of(&t) {
                Some(p) => {
                    let slot = &mut comparison[class[i][x]];
                    if *slot != usize::MAX && *slot != p {
                        well_defined = false;
                    }
                    *slot = p;
                }
                None => well_defined = false,
            }
        }
    }
    let homeomorphic = well_defined && space.is_homeomorphism(&comparison, limit_spec.space());
    Ok(SpectrumColimit {
        space,
        class,
        open_embeddings,
        homeomorphic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn single_and_constant_systems() {
        let s = Frame::chain(3).unwrap();
        let one = DirectedSystem::new(Poset::chain(1), vec![s.clone()], vec![]).unwrap();
        let lim = frame_inverse_limit(&one, &caps()).unwrap();
        assert_eq!(lim.frame.len(), 3);
        let two = DirectedSystem::new(
            Poset::chain(2),
            vec![s.clone(), s.clone()],
            vec![((0, 1), FrameMap::identity(&s))],
        )
        .unwrap();
        let lim = frame_inverse_limit(&two, &caps()).unwrap();
        assert!(crate::hom::find_isomorphism(&lim.frame, &s).is_some());
        let col = spectrum_colimit(&two, &lim).unwrap();
        assert!(col.homeomorphic && col.open_embeddings);
    }

    #[test]
    fn boolean_chain() {
        let sys = DirectedSystem::boolean_restriction_chain(&[1, 2, 3], &caps()).unwrap();
        for ((i, j), f) in &sys.maps {
            if i != j {
                assert!(f.classify().surjective && f.is_open().unwrap());
            }
        }
        let lim = frame_inverse_limit(&sys, &caps()).unwrap();
        assert_eq!(lim.frame.len(), 8);
        assert!(lim.frame.is_boolean());
        let col = spectrum_colimit(&sys, &lim).unwrap();
        assert_eq!(col.space.len(), 3);
        assert!(col.open_embeddings);
        assert!(col.homeomorphic);
    }

    #[test]
    fn errors() {
        let s = Frame::chain(3).unwrap();
        assert!(matches!(
            DirectedSystem::new(Poset::antichain(2), vec![s.clone(), s.clone()], vec![]),
            Err(Error::NotDirected(..))
        ));
        assert!(matches!(
            DirectedSystem::new(Poset::chain(2), vec![s.clone(), s.clone()], vec![]),
            Err(Error::IncoherentSystem(_))
        ));
        // a V-shaped index with two different routes
        let v = Poset::from_relations(vec!["a".into(), "b".into(), "c".into()], &[(0, 2), (1, 2)]).unwrap();
        let two = Frame::chain(2).unwrap();
        let id = FrameMap::identity(&s);
        let r = DirectedSystem::new(v, vec![s.clone(), s.clone(), s.clone()], vec![((0, 2), id.clone()), ((1, 2), id)]);
        assert!(r.is_ok());
        let up = FrameMap::new(s.clone(), two.clone(), vec![0, 1, 1]).unwrap();
        let down = FrameMap::new(s.clone(), two.clone(), vec![0, 0, 1]).unwrap();
        let r = DirectedSystem::new(
            Poset::chain(2),
            vec![two.clone(), s.clone()],
            vec![((0, 1), up.clone()), ((0, 1), down)],
        );
        assert!(matches!(r, Err(Error::IncoherentSystem(_))));
    }
}
