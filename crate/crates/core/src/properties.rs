//! Deciders for separation, compactness and connectedness of finite frames.
//!
//! Where two characterizations are available both are computed, and a
//! disagreement is returned as [`Error::ShadowMismatch`].

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::coproduct::{coproduct, CoproductFrame};
use crate::error::{Caps, Error, Result};
use crate::hom::enumerate_frame_maps;
use crate::interp::{classical_points, GroundJoinFamily, Spectrum};
use crate::lattice::{Elem, FiniteSpace, Frame};

/// A yes/no answer, with a counterexample when the answer is no.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl Verdict {
    fn yes() -> Verdict {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    fn no(witness: String) -> Verdict {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }

    fn from_witness(w: Option<String>) -> Verdict {
        w.map_or_else(Verdict::yes, Verdict::no)
    }
}

pub(crate) fn set_text(f: &Frame, s: &BitSet) -> String {
    let names: Vec<&str> = s.iter().map(|a| f.name(a)).collect();
    format!("{{{}}}", names.join(", "))
}

/// An element of `L ⊕ L'` written by its maximal generating pairs.
pub fn describe_element(c: &CoproductFrame, e: Elem) -> String {
    let (l, r) = (c.left(), c.right());
    let ideal = c.ideal(e);
    let mut gens = Vec::new();
    for i in ideal.iter() {
        let (a, b) = c.unpair(i);
        if a == l.bottom() || b == r.bottom() {
            continue;
        }
        let maximal = ideal.iter().all(|k| {
            let (a2, b2) = c.unpair(k);
            k == i || !(l.leq(a, a2) && r.leq(b, b2))
        });
        if maximal {
            gens.push(format!("({}, {})", l.name(a), r.name(b)));
        }
    }
    if gens.is_empty() {
        "0".into()
    } else {
        gens.join(" ∨ ")
    }
}

/// Points form an antichain under inclusion. Cross-checked against the
/// probe over frame maps into `2^k`, `k ≤ 3`: no two distinct maps are
/// pointwise ordered.
pub fn is_tu(f: &Frame, caps: &Caps) -> Result<Verdict> {
    let pts = classical_points(f);
    let mut primary = None;
    'outer: for x in &pts {
        for y in &pts {
            if x != y && x.is_subset(y) {
                primary = Some(format!("{} ⊊ {}", set_text(f, x), set_text(f, y)));
                break 'outer;
            }
        }
    }
    let probe = tu_probe(f, caps)?;
    if primary.is_some() != probe.is_some() {
        return Err(Error::ShadowMismatch(format!(
            "T_U: point antichain says {}, Boolean probe says {}",
            primary.is_none(),
            probe.is_none()
        )));
    }
    Ok(Verdict::from_witness(primary))
}

/// A pair `f ≤ g`, `f ≠ g` of frame maps into some `2^k` with `k ≤ 3`.
pub fn tu_probe(f: &Frame, caps: &Caps) -> Result<Option<String>> {
    for k in 0..=3 {
        let b = Frame::boolean(k, caps)?;
        let maps = enumerate_frame_maps(f, &b, caps)?;
        for g in &maps {
            for h in &maps {
                if g != h && g.leq_pointwise(h) {
                    return Ok(Some(format!("{:?} ≤ {:?} into 2^{k}", g.image(), h.image())));
                }
            }
        }
    }
    Ok(None)
}

/// I-Hausdorff by three criteria: the definition over elements above `d_L`,
/// the "diagonal pairs" fact, and separation of points by disjoint elements.
pub fn is_i_hausdorff(f: &Frame, caps: &Caps) -> Result<Verdict> {
    let c = coproduct(f, f, caps)?;
    let d = c.diagonal_complement()?;
    let base = c.base();
    let above: Vec<Elem> = base.up(d).iter().collect();
    let n = f.len();
    let form = |l: Elem| {
        BitSet::from_indices(
            n * n,
            (0..n * n).filter(|&i| {
                let (a, b) = c.unpair(i);
                f.leq(f.meet(a, b), l)
            }),
        )
    };
    let forms: Vec<BitSet> = f.elements().map(form).collect();
    // Principal elements above d_L first, so witnesses are small.
    let mut order: Vec<Elem> = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            let u = base.join(c.principal(a, b), d);
            if !order.contains(&u) {
                order.push(u);
            }
        }
    }
    for &u in &above {
        if !order.contains(&u) {
            order.push(u);
        }
    }
    let definition = order.iter().find_map(|&u| {
        let matches = forms.iter().filter(|s| *s == c.ideal(u)).count();
        (matches != 1).then(|| format!("U = {} is not {{(a, b) | a ∧ b ≤ ℓ}} for a unique ℓ", describe_element(&c, u)))
    });
    let fact = order.iter().find_map(|&u| {
        let s = c.ideal(u);
        for a in f.elements() {
            for b in f.elements() {
                let m = f.meet(a, b);
                if s.contains(c.pair(m, m)) && !s.contains(c.pair(a, b)) {
                    return Some(format!(
                        "U = {} contains ({m}, {m}) but not ({}, {})",
                        describe_element(&c, u),
                        f.name(a),
                        f.name(b),
                        m = f.name(m)
                    ));
                }
            }
        }
        None
    });
    let points = point_separation_failure(f);
    let agree = definition.is_some() == fact.is_some() && fact.is_some() == points.is_some();
    if !agree {
        return Err(Error::ShadowMismatch(format!(
            "I-Hausdorff: definition {:?}, fact {:?}, points {:?}",
            definition, fact, points
        )));
    }
    Ok(Verdict::from_witness(definition))
}

/// Two distinct points `x`, `y` with `ℓ ∧ ℓ' ≠ 0` for all `ℓ ∈ x`, `ℓ' ∈ y`.
pub fn point_separation_failure(f: &Frame) -> Option<String> {
    let pts = classical_points(f);
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i + 1..] {
            let separated = x.iter().any(|l| y.iter().any(|m| f.meet(l, m) == f.bottom()));
            if !separated {
                return Some(format!("{} and {}", set_text(f, x), set_text(f, y)));
            }
        }
    }
    None
}

/// Every element is the join of the elements well below it.
pub fn is_regular(f: &Frame) -> Verdict {
    Verdict::from_witness(f.elements().find_map(|l| {
        let j = f.join_all(f.elements().filter(|&m| f.well_below(m, l)));
        (j != l).then(|| format!("{}: the join of the elements well below it is {}", f.name(l), f.name(j)))
    }))
}

/// For all `a ∨ b = 1` there are `u ∧ v = 0` with `a ∨ v = 1 = b ∨ u`.
pub fn is_normal(f: &Frame) -> Verdict {
    for a in f.elements() {
        for b in a..f.len() {
            if f.join(a, b) != f.top() {
                continue;
            }
            let found = f.elements().any(|u| {
                f.join(b, u) == f.top()
                    && f.elements()
                        .any(|v| f.meet(u, v) == f.bottom() && f.join(a, v) == f.top())
            });
            if !found {
                return Verdict::no(format!("{} ∨ {} = 1 admits no separating pair", f.name(a), f.name(b)));
            }
        }
    }
    Verdict::yes()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Compactness {
    /// Each registered cover of the top has a finite subcover.
    pub covers: Verdict,
    /// Each maximal ideal is closed under the registered joins.
    pub maximal_ideals: Verdict,
}

pub fn is_compact(j: &GroundJoinFamily) -> Compactness {
    let f = j.frame();
    let covers = j
        .entries()
        .iter()
        .filter(|e| e.target == f.top())
        .find_map(|e| {
            // The parts form a finite cover; find a minimal subcover inside.
            let mut sub: Vec<Elem> = e.parts.iter().collect();
            let mut i = 0;
            while i < sub.len() {
                let rest: Vec<Elem> = sub.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
                if f.join_all(rest.iter().copied()) == f.top() {
                    sub = rest;
                } else {
                    i += 1;
                }
            }
            (f.join_all(sub).ne(&f.top())).then(|| format!("cover {} has no finite subcover", set_text(f, &e.parts)))
        });
    let maximal = f.coatoms().into_iter().find_map(|c| {
        let ideal = f.down(c);
        j.entries()
            .iter()
            .find(|e| e.parts.is_subset(ideal) && !ideal.contains(e.target))
            .map(|e| {
                format!(
                    "maximal ideal ↓{} contains {} but not its join {}",
                    f.name(c),
                    set_text(f, &e.parts),
                    f.name(e.target)
                )
            })
    });
    Compactness {
        covers: Verdict::from_witness(covers),
        maximal_ideals: Verdict::from_witness(maximal),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectedness {
    Connected,
    /// A complemented element other than `0` and `1`.
    Disconnected { witness: String },
    /// The one-element frame, where `0 = 1`.
    Degenerate,
}

impl Connectedness {
    pub fn is_connected(&self) -> bool {
        matches!(self, Connectedness::Connected)
    }
}

pub fn is_connected(f: &Frame) -> Connectedness {
    if f.is_degenerate() {
        return Connectedness::Degenerate;
    }
    match f
        .complemented_elements()
        .iter()
        .find(|&a| a != f.bottom() && a != f.top())
    {
        Some(a) => Connectedness::Disconnected {
            witness: f.name(a).to_string(),
        },
        None => Connectedness::Connected,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeResult {
    /// No counterexample among the test frames. Not a proof.
    pub no_counterexample: bool,
    pub frames_tested: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

/// Looks for a complemented element of `F ⊕ M` that is not `1 ⊕ b` for a
/// complemented `b ∈ M`, over the given test frames `M`.
pub fn p_connected_probe(f: &Frame, tests: &[Frame], caps: &Caps) -> Result<ProbeResult> {
    for (i, m) in tests.iter().enumerate() {
        let c = coproduct(f, m, caps)?;
        let from_m: Vec<Elem> = m
            .complemented_elements()
            .iter()
            .map(|b| c.right_inj().apply(b))
            .collect();
        if let Some(e) = c
            .base()
            .complemented_elements()
            .iter()
            .find(|e| !from_m.contains(e))
        {
            return Ok(ProbeResult {
                no_counterexample: false,
                frames_tested: i + 1,
                witness: Some(format!(
                    "{} is complemented in F ⊕ M for M = {}",
                    describe_element(&c, e),
                    m.canonical_text()
                )),
            });
        }
    }
    Ok(ProbeResult {
        no_counterexample: true,
        frames_tested: tests.len(),
        witness: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub t0: bool,
    pub t1: bool,
    pub t2: bool,
    pub t3: bool,
}

pub fn space_separation(x: &FiniteSpace) -> Separation {
    Separation {
        t0: x.is_t0(),
        t1: x.is_t1(),
        t2: x.is_t2(),
        t3: x.is_t3(),
    }
}

/// Everything `analyze` reports about one frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub frame: String,
    pub elements: usize,
    pub points: Vec<String>,
    pub t_u: Verdict,
    pub i_hausdorff: Verdict,
    pub regular: Verdict,
    pub normal: Verdict,
    pub compact: Compactness,
    pub connected: Connectedness,
    pub p_connected_probe: ProbeResult,
    pub spectrum: Separation,
}

/// Runs every decider. `joins` defaults to the finitary family, which has
/// the same points as the full one.
pub fn analyze(f: &Frame, joins: Option<&GroundJoinFamily>, tests: &[Frame], caps: &Caps) -> Result<PropertyReport> {
    caps.check_frame(f.len())?;
    let finitary;
    let j = match joins {
        Some(j) => j,
        None => {
            finitary = GroundJoinFamily::finitary(f);
            &finitary
        }
    };
    let sp = Spectrum::relative(j);
    Ok(PropertyReport {
        frame: f.canonical_text(),
        elements: f.len(),
        points: sp.points().iter().map(|x| set_text(f, x)).collect(),
        t_u: is_tu(f, caps)?,
        i_hausdorff: is_i_hausdorff(f, caps)?,
        regular: is_regular(f),
        normal: is_normal(f),
        compact: is_compact(j),
        connected: is_connected(f),
        p_connected_probe: p_connected_probe(f, tests, caps)?,
        spectrum: space_separation(Spectrum::classical(f).space()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Poset;

    fn caps() -> Caps {
        Caps::default()
    }
    fn b(k: usize) -> Frame {
        Frame::boolean(k, &caps()).unwrap()
    }
    fn ch(n: usize) -> Frame {
        Frame::chain(n).unwrap()
    }

    fn corpus() -> Vec<Frame> {
        let mut out = vec![ch(1), ch(2), ch(3), ch(4), ch(5), b(2), b(3)];
        let posets = [
            Poset::from_relations(vec!["a".into(), "b".into(), "c".into()], &[(0, 2), (1, 2)]).unwrap(),
            Poset::from_relations(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (0, 2)]).unwrap(),
            Poset::from_relations(vec!["a".into(), "b".into(), "c".into()], &[(0, 1)]).unwrap(),
            Poset::chain(2).product(&Poset::chain(2)),
        ];
        for p in &posets {
            out.push(Frame::downsets(p, &caps()).unwrap());
        }
        out
    }

    #[test]
    fn tu_examples() {
        assert!(is_tu(&b(2), &caps()).unwrap().holds);
        let v = is_tu(&ch(3), &caps()).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap(), "{e2} ⊊ {e1, e2}");
        assert!(is_tu(&ch(1), &caps()).unwrap().holds);
    }

    #[test]
    fn i_hausdorff_examples() {
        assert!(is_i_hausdorff(&b(2), &caps()).unwrap().holds);
        assert!(is_i_hausdorff(&ch(2), &caps()).unwrap().holds);
        let v = is_i_hausdorff(&ch(3), &caps()).unwrap();
        assert!(!v.holds);
        assert!(v.witness.unwrap().contains("(e1, e1)"));
    }

    #[test]
    fn regularity_and_normality() {
        for k in 0..=3 {
            assert!(is_regular(&b(k)).holds);
            assert!(is_normal(&b(k)).holds);
        }
        let v = is_regular(&ch(3));
        assert_eq!(v.witness.unwrap(), "e1: the join of the elements well below it is e0");
        for n in 1..=5 {
            assert!(is_normal(&ch(n)).holds);
        }
        // points p, q, r with opens ∅, {p}, {q}, {p,q}, all
        let x = FiniteSpace::new(
            vec!["p".into(), "q".into(), "r".into()],
            vec![
                BitSet::new(3),
                BitSet::from_indices(3, [0]),
                BitSet::from_indices(3, [1]),
                BitSet::from_indices(3, [0, 1]),
                BitSet::full(3),
            ],
        )
        .unwrap();
        // a ∨ b = 1 forces one of them to be the top, so a separating pair exists
        assert!(is_normal(&Frame::opens(&x)).holds);
    }

    #[test]
    fn separation_shadows_on_corpus() {
        for f in corpus() {
            let sp = Spectrum::classical(&f);
            let tu = is_tu(&f, &caps()).unwrap().holds;
            let ih = is_i_hausdorff(&f, &caps()).unwrap().holds;
            let reg = is_regular(&f).holds;
            assert_eq!(tu, sp.space().is_t1(), "{f:?}");
            assert_eq!(ih, sp.space().is_t2(), "{f:?}");
            assert_eq!(reg, sp.space().is_t3(), "{f:?}");
            assert!(!reg || ih);
            assert!(!ih || tu);
        }
    }

    #[test]
    fn compactness() {
        for f in corpus() {
            let c = is_compact(&GroundJoinFamily::finitary(&f));
            assert!(c.covers.holds && c.maximal_ideals.holds);
        }
        let jb = GroundJoinFamily::full(&b(2), &caps()).unwrap();
        let ab = BitSet::from_indices(4, [1, 2]);
        let restricted = jb.retain(|e| !(e.target == 3 && e.parts.intersects(&ab)));
        assert!(is_compact(&restricted).maximal_ideals.holds);
        assert!(is_compact(&GroundJoinFamily::full(&ch(1), &caps()).unwrap()).covers.holds);
    }

    #[test]
    fn connectedness_examples() {
        assert_eq!(is_connected(&ch(3)), Connectedness::Connected);
        assert_eq!(
            is_connected(&b(2)),
            Connectedness::Disconnected { witness: "e1".into() }
        );
        assert_eq!(is_connected(&ch(2)), Connectedness::Connected);
        assert_eq!(is_connected(&ch(1)), Connectedness::Degenerate);
    }

    #[test]
    fn probe_examples() {
        let tests = corpus();
        assert!(p_connected_probe(&ch(2), &tests, &caps()).unwrap().no_counterexample);
        let p = p_connected_probe(&b(2), &[ch(2)], &caps()).unwrap();
        assert!(!p.no_counterexample);
        assert!(p_connected_probe(&ch(3), &tests, &caps()).unwrap().no_counterexample);
        for f in corpus() {
            let probe = p_connected_probe(&f, &tests, &caps()).unwrap().no_counterexample;
            match is_connected(&f) {
                Connectedness::Connected | Connectedness::Degenerate => assert!(probe),
                Connectedness::Disconnected { .. } => assert!(!probe),
            }
        }
    }

    #[test]
    fn space_separation_examples() {
        let s = space_separation(&FiniteSpace::sierpinski());
        assert!(s.t0 && !s.t1);
        let d = space_separation(&FiniteSpace::discrete(2));
        assert!(d.t0 && d.t1 && d.t2 && d.t3);
        let i = space_separation(&FiniteSpace::indiscrete(2));
        assert!(!i.t0 && !i.t1 && !i.t2 && !i.t3);
    }

    #[test]
    fn report_round_trips() {
        let r = analyze(&ch(3), None, &corpus(), &caps()).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: PropertyReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
