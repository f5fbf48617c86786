//! The built-in corpus of small frames, spaces and rings.

use std::fmt::Write;

use crate::bitset::BitSet;
use crate::error::{Caps, Result};
use crate::hom::find_isomorphism;
use crate::lattice::{default_names, FiniteSpace, Frame, Poset};
use crate::ring::FiniteRing;

/// Size bounds for the corpus. All zero gives an empty corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Bounds {
    /// Largest poset; chains go up to `max_poset + 2` elements, Boolean
    /// frames up to `max_poset` atoms, spaces up to `min(max_poset, 3)` points.
    pub max_poset: usize,
    /// Largest cyclic ring `Z/n`. Products `Z/a × Z/b` use `2 ≤ a ≤ b ≤ min(6, max_ring)`.
    pub max_ring: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_poset: 3,
            max_ring: 30,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub posets: Vec<Named<Poset>>,
    pub frames: Vec<Named<Frame>>,
    /// Every topology on at most three points, up to homeomorphism.
    pub spaces: Vec<Named<FiniteSpace>>,
    pub rings: Vec<Named<FiniteRing>>,
}

/// All posets on `n` elements up to isomorphism. Every poset has a linear
/// extension, so strict relations `i < j` with `i < j` as indices suffice.
pub fn posets_up_to_iso(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out: Vec<Poset> = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let less: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        // only transitively closed relation sets, so each poset is seen once per labelling
        let closed = less.iter().all(|&(a, b)| {
            less.iter()
                .filter(|&&(c, _)| c == b)
                .all(|&(_, d)| less.contains(&(a, d)))
        });
        if !closed {
            continue;
        }
        let p = Poset::from_relations(default_names(n), &less).expect("indices increase");
        if !out.iter().any(|q| q.is_isomorphic(&p)) {
            out.push(p);
        }
    }
    out
}

/// All topologies on `n` points up to homeomorphism.
pub fn spaces_up_to_homeo(n: usize) -> Vec<FiniteSpace> {
    let subsets: Vec<BitSet> = (0..1u64 << n).map(|m| BitSet::from_mask(n, m)).collect();
    // the empty set and the whole set are always open
    let inner: Vec<usize> = (1..subsets.len().saturating_sub(1)).collect();
    let mut out: Vec<FiniteSpace> = Vec::new();
    for choice in 0u64..(1u64 << inner.len()) {
        let mut opens = vec![subsets[0].clone()];
        for (k, &i) in inner.iter().enumerate() {
            if choice >> k & 1 == 1 {
                opens.push(subsets[i].clone());
            }
        }
        if n > 0 {
            opens.push(subsets[subsets.len() - 1].clone());
        }
        let closed = opens.iter().all(|a| {
            opens
                .iter()
                .all(|b| opens.contains(&a.union(b)) && opens.contains(&a.intersection(b)))
        });
        if !closed {
            continue;
        }
        let x = FiniteSpace::new(default_names(n), opens).expect("closed under unions and intersections");
        if !out.iter().any(|y| y.find_homeomorphism(&x).is_some()) {
            out.push(x);
        }
    }
    out
}

impl Corpus {
    pub fn generate(bounds: Bounds, caps: &Caps) -> Result<Corpus> {
        let mut c = Corpus::default();
        let push_frame = |c: &mut Corpus, name: String, f: Frame| {
            if !c.frames.iter().any(|g| find_isomorphism(&g.value, &f).is_some()) {
                c.frames.push(Named { name, value: f });
            }
        };
        if bounds.max_poset > 0 {
            for n in 1..=bounds.max_poset + 2 {
                caps.check_frame(n)?;
                push_frame(&mut c, format!("chain{n}"), Frame::chain(n)?);
            }
            for k in 0..=bounds.max_poset {
                push_frame(&mut c, format!("bool{k}"), Frame::boolean(k, caps)?);
            }
            for n in 1..=bounds.max_poset {
                for (i, p) in posets_up_to_iso(n).into_iter().enumerate() {
                    let name = format!("P{n}_{i}");
                    push_frame(&mut c, format!("down_{name}"), Frame::downsets(&p, caps)?);
                    c.posets.push(Named { name, value: p });
                }
            }
            for n in 0..=bounds.max_poset.min(3) {
                for (i, x) in spaces_up_to_homeo(n).into_iter().enumerate() {
                    let name = format!("X{n}_{i}");
                    push_frame(&mut c, format!("opens_{name}"), Frame::opens(&x));
                    c.spaces.push(Named { name, value: x });
                }
            }
        }
        for n in 1..=bounds.max_ring {
            c.rings.push(Named {
                name: format!("Z{n}"),
                value: FiniteRing::cyclic(n, caps)?,
            });
        }
        let top = bounds.max_ring.min(6);
        for a in 2..=top {
            for b in a..=top {
                let r = FiniteRing::cyclic(a, caps)?.product(&FiniteRing::cyclic(b, caps)?, caps)?;
                c.rings.push(Named {
                    name: format!("Z{a}xZ{b}"),
                    value: r,
                });
            }
        }
        Ok(c)
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty() && self.spaces.is_empty() && self.rings.is_empty()
    }

    /// T₀ spaces only.
    pub fn t0_spaces(&self) -> impl Iterator<Item = &Named<FiniteSpace>> {
        self.spaces.iter().filter(|x| x.value.is_t0())
    }

    /// Test frames for the p-connectedness probe: corpus frames with at most
    /// eight elements.
    pub fn probe_frames(&self) -> Vec<Frame> {
        self.frames
            .iter()
            .filter(|f| f.value.len() <= 8)
            .map(|f| f.value.clone())
            .collect()
    }

    /// The corpus written in the declaration language.
    pub fn source(&self) -> String {
        let mut s = String::from("# built-in corpus\n\n");
        for p in &self.posets {
            let _ = write!(s, "poset {} {{ {}", p.name, p.value.names().join(" "));
            for (a, b) in p.value.covers() {
                let _ = write!(s, "; {} < {}", p.value.name(a), p.value.name(b));
            }
            s.push_str(" }\n");
        }
        for x in &self.spaces {
            let _ = write!(s, "space {} {{ points {}", x.name, x.value.names().join(" "));
            for o in x.value.opens() {
                if !o.is_empty() && !o.is_full() {
                    let pts: Vec<&str> = o.iter().map(|i| x.value.name(i)).collect();
                    let _ = write!(s, "; open {{{}}}", pts.join(" "));
                }
            }
            s.push_str(" }\n");
        }
        s.push('\n');
        for f in &self.frames {
            let ctor = if let Some(n) = f.name.strip_prefix("chain") {
                format!("chain {n}")
            } else if let Some(k) = f.name.strip_prefix("bool") {
                format!("boolean {k}")
            } else if let Some(p) = f.name.strip_prefix("down_") {
                format!("downsets {p}")
            } else if let Some(x) = f.name.strip_prefix("opens_") {
                format!("opens {x}")
            } else {
                format!("order {}", f.value.canonical_text())
            };
            let _ = writeln!(s, "frame {} = {ctor}", f.name);
        }
        s.push('\n');
        for r in &self.rings {
            match r.name.split_once('x') {
                Some((a, b)) => {
                    let _ = writeln!(s, "ring {} = product {a} {b}", r.name);
                }
                None => {
                    let _ = writeln!(s, "ring {} = Z/{}", r.name, r.value.len());
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        // 1, 1, 2, 5, 16 posets; 1, 1, 3, 9 topologies up to homeomorphism
        let p: Vec<usize> = (0..=4).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(p, [1, 1, 2, 5, 16]);
        let t: Vec<usize> = (0..=3).map(|n| spaces_up_to_homeo(n).len()).collect();
        assert_eq!(t, [1, 1, 3, 9]);
        let t0: Vec<usize> = (0..=3)
            .map(|n| spaces_up_to_homeo(n).iter().filter(|x| x.is_t0()).count())
            .collect();
        assert_eq!(t0, [1, 1, 2, 5]);
    }

    #[test]
    fn default_corpus() {
        let c = Corpus::generate(Bounds::default(), &Caps::default()).unwrap();
        assert_eq!(c.rings.len(), 30 + 15);
        assert_eq!(c.spaces.len(), 14);
        assert_eq!(c.t0_spaces().count(), 9);
        // chains 1..5, B2 and B3, and downset frames of the remaining posets
        assert!(c.frames.len() >= 10);
        for (i, f) in c.frames.iter().enumerate() {
            for g in &c.frames[..i] {
                assert!(find_isomorphism(&f.value, &g.value).is_none());
            }
        }
        assert!(Corpus::generate(Bounds { max_poset: 0, max_ring: 0 }, &Caps::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn source_round_trip() {
        use crate::dsl::{print_canonical, Workspace};
        let caps = Caps::default();
        let c = Corpus::generate(Bounds::default(), &caps).unwrap();
        let ws = Workspace::parse(&c.source(), "corpus.floc", &caps).unwrap();
        assert_eq!(ws.frames.len(), c.frames.len());
        assert_eq!(ws.rings.len(), c.rings.len());
        let once = print_canonical(&ws);
        let twice = print_canonical(&Workspace::parse(&once, "again.floc", &caps).unwrap());
        assert_eq!(once, twice);
    }
}
