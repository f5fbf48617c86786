//! The cross-check suite: every law and correspondence the library claims,
//! checked exhaustively (or on seeded random samples) over the corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::colimit::{frame_inverse_limit, spectrum_colimit, DirectedSystem};
use crate::corpus::{Bounds, Corpus, Named};
use crate::coproduct::{c_ideal_closure, coproduct, is_c_ideal};
use crate::dsl::{print_canonical, Workspace};
use crate::error::{Caps, Error, Result};
use crate::hom::{enumerate_frame_maps, find_isomorphism, FrameMap};
use crate::interp::{
    adjunction_check, boolean_valued_points, classical_points, interpret_map, mediating_map, relative_points,
    soberify, spatial_product_map, GroundJoinFamily, Preinterpretation, Spectrum,
};
use crate::lattice::{FiniteSpace, Frame};
use crate::properties::{is_compact, is_connected, is_i_hausdorff, is_regular, is_tu, p_connected_probe, tu_probe, Connectedness};
use crate::ring::{zariski_space, FiniteRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub bounds: Bounds,
    pub seed: u64,
    /// Random trials for the join-family monotonicity check.
    pub trials: usize,
    /// Adds a frame with a corrupted join table to the lattice checks.
    pub corrupt: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            bounds: Bounds::default(),
            seed: 0x5eed,
            trials: 1000,
            corrupt: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub criterion: Option<u8>,
    pub title: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSize {
    pub frames: usize,
    pub spaces: usize,
    pub rings: usize,
    pub maps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub options: SuiteOptions,
    pub corpus: CorpusSize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Counts cases and keeps the first failure.
#[derive(Default)]
pub struct Tally {
    cases: usize,
    witness: Option<String>,
}

impl Tally {
    fn case(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn failed(&self) -> bool {
        self.witness.is_some()
    }
}

/// All frame maps between two corpus frames.
pub struct MapSet {
    pub dom: usize,
    pub cod: usize,
    pub maps: Vec<FrameMap>,
}

/// Shared state for one suite run.
pub struct Ctx {
    pub corpus: Corpus,
    pub caps: Caps,
    pub opts: SuiteOptions,
    pub maps: Vec<MapSet>,
    spectra: Vec<Spectrum>,
    lattice_frames: Vec<Named<Frame>>,
}

impl Ctx {
    pub fn new(opts: SuiteOptions, caps: &Caps) -> Result<Ctx> {
        let corpus = Corpus::generate(opts.bounds, caps)?;
        let mut maps = Vec::new();
        for (i, a) in corpus.frames.iter().enumerate() {
            for (j, b) in corpus.frames.iter().enumerate() {
                maps.push(MapSet {
                    dom: i,
                    cod: j,
                    maps: enumerate_frame_maps(&a.value, &b.value, caps)?,
                });
            }
        }
        let spectra = corpus.frames.iter().map(|f| Spectrum::classical(&f.value)).collect();
        let mut lattice_frames = corpus.frames.clone();
        if opts.corrupt {
            let b2 = Frame::boolean(2, caps)?;
            lattice_frames.push(Named {
                name: "corrupted".into(),
                value: b2.corrupted_join(1, 2, 1),
            });
        }
        Ok(Ctx {
            corpus,
            caps: *caps,
            opts,
            maps,
            spectra,
            lattice_frames,
        })
    }

    fn frames(&self) -> impl Iterator<Item = (usize, &str, &Frame)> {
        self.corpus
            .frames
            .iter()
            .enumerate()
            .map(|(i, f)| (i, f.name.as_str(), &f.value))
    }

    fn frame(&self, i: usize) -> &Frame {
        &self.corpus.frames[i].value
    }

    fn name(&self, i: usize) -> &str {
        &self.corpus.frames[i].name
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.opts.seed ^ salt)
    }

    /// The full family where it can be materialized, else the finitary one.
    fn widest_family(&self, f: &Frame) -> Result<GroundJoinFamily> {
        if f.len() <= self.caps.full_join_family {
            GroundJoinFamily::full(f, &self.caps)
        } else {
            Ok(GroundJoinFamily::finitary(f))
        }
    }

    pub fn corpus_size(&self) -> CorpusSize {
        CorpusSize {
            frames: self.corpus.frames.len(),
            spaces: self.corpus.spaces.len(),
            rings: self.corpus.rings.len(),
            maps: self.maps.iter().map(|m| m.maps.len()).sum(),
        }
    }
}

pub struct Check {
    pub id: &'static str,
    pub criterion: Option<u8>,
    pub title: &'static str,
    run: fn(&Ctx) -> Result<Tally>,
}

macro_rules! check {
    ($id:literal, $c:expr, $title:literal, $f:ident) => {
        Check {
            id: $id,
            criterion: $c,
            title: $title,
            run: $f,
        }
    };
}

pub static CHECKS: &[Check] = &[
    check!("lattice.distributive", None, "a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)", distributive),
    check!("lattice.heyting", None, "a → b is the largest c with c ∧ a ≤ b", heyting),
    check!("lattice.revalidate", None, "constructed frames pass order validation", revalidate),
    check!("lattice.boolean-heyting", None, "a → b = ¬a ∨ b in 2^k, k ≤ 4", boolean_heyting),
    check!("lattice.arbitrary-meets", None, "meets via lower bounds agree with iterated meets", arbitrary_meets),
    check!("hom.adjunction", None, "f!(m) ≤ ℓ ⟺ m ≤ f(ℓ)", hom_adjunction),
    check!("hom.enumeration", None, "backtracking enumeration matches brute force", hom_enumeration),
    check!("hom.composition", None, "composites of (open) frame maps are (open) frame maps", hom_composition),
    check!("coproduct.closure", None, "C-ideal closure is a closure operator", coproduct_closure),
    check!("coproduct.base", None, "coproduct frames validate and C-ideals meet to C-ideals", coproduct_base),
    check!("coproduct.unit", None, "2 ⊕ L ≅ L", coproduct_unit),
    check!("coproduct.commutative", None, "L ⊕ M ≅ M ⊕ L by swapping pairs", coproduct_commutative),
    check!("coproduct.spatial", Some(1), "L ⊕ M ≅ Ω(ΣL × ΣM) for opens of T₀ spaces", coproduct_spatial),
    check!("coproduct.spectrum", None, "Σ(L ⊕ M) ≅ ΣL × ΣM", coproduct_spectrum),
    check!("interp.boolean-points", Some(2), "|Hom(L, 2^k)| = |pt L|^k with atom decoding", boolean_points),
    check!("interp.basic-opens", None, "basic opens preserve meets and registered joins", basic_opens),
    check!("interp.structure", Some(6), "order, maps and isomorphisms transfer to spectra", structure_transfer),
    check!("interp.relative", Some(7), "relative points: full family, monotonicity, generic point", relative_spectrum),
    check!("interp.universal", Some(8), "mediating maps exist, factor and are unique", universal_property),
    check!("interp.adjunction", Some(9), "Cont(Y, ΣL) ≅ Frm(L, ΩY)", adjunction),
    check!("interp.sober", None, "finite T₀ spaces are sober", sober),
    check!("properties.t1", Some(3), "T_U ⟺ ΣL is T₁ ⟺ no ordered map pair into 2^k", t1_shadow),
    check!("properties.t2", Some(4), "I-Hausdorff ⟺ ΣL is T₂; regular ⇒ I-Hausdorff ⇒ T_U", t2_shadow),
    check!("properties.t3", Some(5), "regular ⟺ ΣL is T₃", t3_shadow),
    check!("properties.open", Some(10), "openness criteria agree; open surjections give open embeddings", open_maps),
    check!("properties.compact", Some(11), "finite frames are compact under every family", compact),
    check!("properties.connected", Some(12), "connected ⟺ probe finds no counterexample", connected),
    check!("colimit.boolean", Some(13), "Σ of the inverse limit ≅ colimit of spectra", colimit),
    check!("ring.spectrum", Some(14), "prime ideals ↔ points, sober, radicals agree", ring_spectrum),
    check!("ring.basic-opens", None, "O_ab = O_a ∩ O_b, O_1 = Spec R, O_0 = ∅", ring_basic_opens),
    check!("ring.product", None, "Spec(R × S) ≅ Spec R ⊔ Spec S", ring_product),
    check!("ring.connected", None, "Spec R connected ⟺ only trivial idempotents", ring_connected),
    check!("frontend.round-trip", Some(15), "corpus source survives print and parse", round_trip),
];

pub fn run_check(ctx: &Ctx, check: &Check) -> Result<CheckResult> {
    let (passed, cases, witness) = match (check.run)(ctx) {
        Ok(t) => (!t.failed(), t.cases, t.witness),
        Err(e @ Error::ResourceCap { .. }) => return Err(e),
        Err(e) => (false, 0, Some(e.to_string())),
    };
    Ok(CheckResult {
        id: check.id.into(),
        criterion: check.criterion,
        title: check.title.into(),
        passed,
        cases,
        witness,
    })
}

/// The check for an acceptance criterion number.
pub fn criterion(n: u8) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.criterion == Some(n))
}

/// Runs every check, one thread per check; results keep the fixed order.
pub fn run_suite(opts: SuiteOptions, caps: &Caps) -> Result<SuiteReport> {
    let ctx = Ctx::new(opts, caps)?;
    let results: Vec<Result<CheckResult>> = std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS.iter().map(|c| s.spawn(|| run_check(&ctx, c))).collect();
        handles.into_iter().map(|h| h.join().expect("check panicked")).collect()
    });
    let checks = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport {
        options: opts,
        corpus: ctx.corpus_size(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn distributive(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for Named { name, value: f } in &ctx.lattice_frames {
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    let lhs = f.meet(a, f.join(b, c));
                    let rhs = f.join(f.meet(a, b), f.meet(a, c));
                    t.case(lhs == rhs, || {
                        format!(
                            "{name}: {a} ∧ ({b} ∨ {c}) = {} but (a ∧ b) ∨ (a ∧ c) = {}",
                            f.name(lhs),
                            f.name(rhs),
                            a = f.name(a),
                            b = f.name(b),
                            c = f.name(c)
                        )
                    });
                }
            }
        }
    }
    Ok(t)
}

fn heyting(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for Named { name, value: f } in &ctx.lattice_frames {
        for a in f.elements() {
            for b in f.elements() {
                let h = f.heyting(a, b);
                let ok = f.elements().all(|c| f.leq(f.meet(c, a), b) == f.leq(c, h));
                t.case(ok, || format!("{name}: {} → {} = {} is not the largest c with c ∧ a ≤ b", f.name(a), f.name(b), f.name(h)));
            }
        }
    }
    Ok(t)
}

fn revalidate(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for p in &ctx.corpus.posets {
        let f = Frame::downsets(&p.value, &ctx.caps)?;
        t.case(f.revalidate().is_ok(), || format!("downsets of {}", p.name));
    }
    for x in &ctx.corpus.spaces {
        t.case(Frame::opens(&x.value).revalidate().is_ok(), || format!("opens of {}", x.name));
    }
    for Named { name, value: f } in &ctx.lattice_frames {
        let res = f.revalidate().and_then(|_| Frame::from_order(&f.to_poset()));
        match res {
            Ok(g) => t.case(g == *f, || format!("{name}: rebuilding from its order changes it")),
            Err(e) => t.case(false, || format!("{name}: {e}")),
        }
    }
    Ok(t)
}

fn boolean_heyting(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    if ctx.corpus.frames.is_empty() {
        return Ok(t);
    }
    for k in 0..=4 {
        let f = Frame::boolean(k, &ctx.caps)?;
        for a in f.elements() {
            let not_a = f.complement(a).expect("Boolean");
            for b in f.elements() {
                t.case(f.heyting(a, b) == f.join(not_a, b), || format!("2^{k}: {} → {}", f.name(a), f.name(b)));
            }
        }
    }
    Ok(t)
}

fn arbitrary_meets(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for Named { name, value: f } in &ctx.lattice_frames {
        let n = f.len();
        if n > 12 {
            continue;
        }
        for mask in 0u64..1 << n {
            let family = BitSet::from_mask(n, mask).to_vec();
            let ok = f.meet_via_lower_bounds(&family) == f.meet_all(family.iter().copied());
            t.case(ok, || format!("{name}: meet of {:?}", family.iter().map(|&a| f.name(a)).collect::<Vec<_>>()));
        }
    }
    Ok(t)
}

fn hom_adjunction(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for set in &ctx.maps {
        for f in &set.maps {
            let (dom, cod) = (f.dom(), f.cod());
            let left = f.left_adjoint();
            for m in cod.elements() {
                for l in dom.elements() {
                    t.case(dom.leq(left[m], l) == cod.leq(m, f.apply(l)), || {
                        format!("{:?} from {} to {}: m = {}, ℓ = {}", f.image(), ctx.name(set.dom), ctx.name(set.cod), cod.name(m), dom.name(l))
                    });
                }
            }
        }
    }
    Ok(t)
}

fn hom_enumeration(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for set in &ctx.maps {
        let (dom, cod) = (ctx.frame(set.dom), ctx.frame(set.cod));
        let total = (cod.len() as u64).checked_pow(dom.len() as u32);
        if total.map_or(true, |n| n > 1 << 16) {
            continue;
        }
        let mut brute = Vec::new();
        let mut image = vec![0; dom.len()];
        'odometer: loop {
            if let Ok(f) = FrameMap::new(dom.clone(), cod.clone(), image.clone()) {
                brute.push(f);
            }
            for i in (0..image.len()).rev() {
                image[i] += 1;
                if image[i] < cod.len() {
                    continue 'odometer;
                }
                image[i] = 0;
            }
            break;
        }
        brute.sort_by(|a, b| a.image().cmp(b.image()));
        let mut got: Vec<&[usize]> = set.maps.iter().map(|f| f.image()).collect();
        got.sort();
        let want: Vec<&[usize]> = brute.iter().map(|f| f.image()).collect();
        t.case(got == want, || {
            format!("{} → {}: {} enumerated, {} by brute force", ctx.name(set.dom), ctx.name(set.cod), got.len(), want.len())
        });
    }
    Ok(t)
}

fn hom_composition(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let n = ctx.corpus.frames.len();
    let open: Vec<Vec<bool>> = ctx
        .maps
        .iter()
        .map(|s| s.maps.iter().map(|f| f.is_open()).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    for (ai, first) in ctx.maps.iter().enumerate() {
        for bi in first.cod * n..(first.cod + 1) * n {
            let second = &ctx.maps[bi];
            for (i, f) in first.maps.iter().enumerate() {
                for (j, g) in second.maps.iter().enumerate() {
                    let h = g.compose(f)?;
                    let valid = FrameMap::new(h.dom().clone(), h.cod().clone(), h.image().to_vec()).is_ok();
                    let open_ok = !(open[ai][i] && open[bi][j]) || h.is_open()?;
                    t.case(valid && open_ok, || format!("{:?} after {:?}", g.image(), f.image()));
                }
            }
        }
    }
    Ok(t)
}

fn coproduct_closure(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let small: Vec<&Frame> = ctx.frames().map(|(_, _, f)| f).filter(|f| f.len() <= 8).collect();
    if small.is_empty() {
        return Ok(t);
    }
    let mut rng = ctx.rng(1);
    for _ in 0..ctx.opts.trials / 4 {
        let l = small[rng.gen_range(0..small.len())];
        let r = small[rng.gen_range(0..small.len())];
        let size = l.len() * r.len();
        let density = rng.gen_range(0.0..0.5);
        let seed = BitSet::from_indices(size, (0..size).filter(|_| rng.gen_bool(density)));
        let more = seed.union(&BitSet::from_indices(size, (0..size).filter(|_| rng.gen_bool(0.1))));
        let c = c_ideal_closure(l, r, &seed);
        let ok = seed.is_subset(&c)
            && c_ideal_closure(l, r, &c) == c
            && c.is_subset(&c_ideal_closure(l, r, &more))
            && is_c_ideal(l, r, &c);
        t.case(ok, || format!("seed {:?} in {} × {}", seed.to_vec(), l.canonical_text(), r.canonical_text()));
    }
    Ok(t)
}

fn coproduct_base(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, l) in ctx.frames() {
        for (j, _, r) in ctx.frames() {
            if l.len() * r.len() > 40 {
                continue;
            }
            let c = coproduct(l, r, &ctx.caps)?;
            t.case(c.base().revalidate().is_ok(), || format!("{} ⊕ {} fails validation", ctx.name(i), ctx.name(j)));
            for a in c.ideals() {
                for b in c.ideals() {
                    t.case(is_c_ideal(l, r, &a.intersection(b)), || {
                        format!("{} ⊕ {}: {:?} ∩ {:?}", ctx.name(i), ctx.name(j), a.to_vec(), b.to_vec())
                    });
                }
            }
        }
    }
    Ok(t)
}

fn coproduct_unit(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let two = Frame::chain(2)?;
    for (i, _, l) in ctx.frames() {
        let c = coproduct(&two, l, &ctx.caps)?;
        t.case(c.right_inj().classify().isomorphism, || format!("L → 2 ⊕ L is not onto for {}", ctx.name(i)));
        let c = coproduct(l, &two, &ctx.caps)?;
        t.case(c.left_inj().classify().isomorphism, || format!("L → L ⊕ 2 is not onto for {}", ctx.name(i)));
    }
    Ok(t)
}

fn coproduct_commutative(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, l) in ctx.frames() {
        for (j, _, r) in ctx.frames().skip(i) {
            let a = coproduct(l, r, &ctx.caps)?;
            let b = coproduct(r, l, &ctx.caps)?;
            let swap = a.swap_to(&b)?;
            t.case(swap.classify().isomorphism, || format!("swap {} ⊕ {}", ctx.name(i), ctx.name(j)));
        }
    }
    Ok(t)
}

fn coproduct_spatial(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let spaces: Vec<&Named<FiniteSpace>> = ctx.corpus.t0_spaces().collect();
    for x in &spaces {
        for y in &spaces {
            let (l, r) = (Frame::opens(&x.value), Frame::opens(&y.value));
            let c = coproduct(&l, &r, &ctx.caps)?;
            let phi = spatial_product_map(&c, &Spectrum::classical(&l), &Spectrum::classical(&r))?;
            let direct = Frame::opens(&x.value.product(&y.value)).len();
            t.case(phi.classify().isomorphism && c.base().len() == direct, || {
                format!("Ω{} ⊕ Ω{}: natural map is not an isomorphism", x.name, y.name)
            });
        }
    }
    Ok(t)
}

fn coproduct_spectrum(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, l) in ctx.frames() {
        for (j, _, r) in ctx.frames() {
            let c = coproduct(l, r, &ctx.caps)?;
            let lhs = Spectrum::classical(c.base());
            let rhs = ctx.spectra[i].space().product(ctx.spectra[j].space());
            t.case(lhs.space().find_homeomorphism(&rhs).is_some(), || {
                format!("Σ({} ⊕ {}) is not ΣL × ΣM", ctx.name(i), ctx.name(j))
            });
        }
    }
    Ok(t)
}

fn boolean_points(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, l) in ctx.frames() {
        // counted independently of the prime-element computation
        let pts = relative_points(&ctx.widest_family(l)?).len();
        for k in 0..=3 {
            let b = Frame::boolean(k, &ctx.caps)?;
            let bp = boolean_valued_points(l, &b, &ctx.caps)?;
            let ok = Some(bp.maps.len()) == pts.checked_pow(k as u32)
                && bp.decoded.iter().all(|tuple| tuple.len() == k && tuple.iter().all(|&x| x < pts));
            t.case(ok, || format!("{}: {} maps into 2^{k}, {} points", ctx.name(i), bp.maps.len(), pts));
        }
    }
    Ok(t)
}

fn basic_opens(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, f) in ctx.frames() {
        let j = ctx.widest_family(f)?;
        let sp = Spectrum::relative(&j);
        for a in f.elements() {
            for b in f.elements() {
                t.case(*sp.basic(f.meet(a, b)) == sp.basic(a).intersection(sp.basic(b)), || {
                    format!("{}: ({} ∧ {})^", ctx.name(i), f.name(a), f.name(b))
                });
            }
        }
        for e in j.entries() {
            let mut u = BitSet::new(sp.len());
            for p in e.parts.iter() {
                u.union_with(sp.basic(p));
            }
            t.case(u == *sp.basic(e.target), || format!("{}: registered join onto {}", ctx.name(i), f.name(e.target)));
        }
    }
    Ok(t)
}

fn structure_transfer(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, f) in ctx.frames() {
        let sp = &ctx.spectra[i];
        for a in f.elements() {
            for b in f.elements() {
                t.case(f.leq(a, b) == sp.basic(a).is_subset(sp.basic(b)), || {
                    format!("{}: {} ≤ {} disagrees with basic opens", ctx.name(i), f.name(a), f.name(b))
                });
            }
        }
    }
    for set in &ctx.maps {
        let (src, dst) = (&ctx.spectra[set.cod], &ctx.spectra[set.dom]);
        let label = || format!("{} → {}", ctx.name(set.dom), ctx.name(set.cod));
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for f in &set.maps {
            let pm = interpret_map(f, src, dst)?;
            let class = f.classify();
            let (x, y) = (src.space(), dst.space());
            let surjective_pts = (0..y.len()).all(|p| pm.contains(&p));
            t.case(class.injective || !surjective_pts, || format!("{}: {:?} not injective, point map onto", label(), f.image()));
            t.case(class.surjective == x.is_embedding(&pm, y), || format!("{}: {:?} surjectivity vs embedding", label(), f.image()));
            t.case(class.isomorphism == x.is_homeomorphism(&pm, y), || format!("{}: {:?} iso vs homeomorphism", label(), f.image()));
            seen.push(pm);
        }
        let n = seen.len();
        seen.sort();
        seen.dedup();
        t.case(seen.len() == n, || format!("{}: distinct maps with equal point maps", label()));
    }
    Ok(t)
}

fn relative_spectrum(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let mut fulls = Vec::new();
    for (i, _, f) in ctx.frames() {
        let j = ctx.widest_family(f)?;
        t.case(relative_points(&j) == classical_points(f), || format!("{}: full family points differ from prime elements", ctx.name(i)));
        let fin = GroundJoinFamily::finitary(f);
        t.case(relative_points(&fin) == classical_points(f), || format!("{}: finitary family points differ", ctx.name(i)));
        fulls.push((i, j));
    }
    if !fulls.is_empty() {
        let mut rng = ctx.rng(2);
        for _ in 0..ctx.opts.trials {
            let (i, full) = &fulls[rng.gen_range(0..fulls.len())];
            let (p, q) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            let big = full.retain(|_| rng.gen_bool(p));
            let small = big.retain(|_| rng.gen_bool(q));
            let (pb, ps) = (relative_points(&big), relative_points(&small));
            let ok = small.is_subfamily_of(&big) && pb.iter().all(|x| ps.contains(x));
            t.case(ok, || format!("{}: dropping joins removed a point", ctx.name(*i)));
        }
    }
    if ctx.opts.bounds.max_poset >= 2 {
        let b2 = Frame::boolean(2, &ctx.caps)?;
        let ab = BitSet::from_indices(4, [1, 2]);
        let j = GroundJoinFamily::full(&b2, &ctx.caps)?.retain(|e| !(e.target == b2.top() && e.parts.intersects(&ab)));
        let pts = relative_points(&j);
        let generic = BitSet::from_indices(4, [3]);
        t.case(pts.len() == 3 && pts.contains(&generic), || format!("B2 without the cover {{a, b}}: {} points", pts.len()));
    }
    Ok(t)
}

fn universal_property(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, f) in ctx.frames() {
        let j = ctx.widest_family(f)?;
        for y in &ctx.corpus.spaces {
            for p in Preinterpretation::all_on(&j, &y.value, &ctx.caps)? {
                let m = mediating_map(&j, &p, &ctx.caps)?;
                let factors = f
                    .elements()
                    .all(|l| FiniteSpace::preimage(&m.map, m.spectrum.basic(l)) == p.rho[l]);
                let ok = factors && y.value.is_continuous(&m.map, m.spectrum.space()) && m.is_unique();
                t.case(ok, || format!("{} on {}: {} factoring maps", ctx.name(i), y.name, m.factoring));
            }
        }
    }
    Ok(t)
}

fn adjunction(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, f) in ctx.frames() {
        for y in &ctx.corpus.spaces {
            let a = adjunction_check(f, &y.value, &ctx.caps)?;
            let ok = a.continuous.len() == a.frame_maps.len() && a.count() == a.continuous.len();
            t.case(ok, || format!("{} and {}", ctx.name(i), y.name));
        }
    }
    Ok(t)
}

fn sober(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for x in &ctx.corpus.spaces {
        let s = soberify(&x.value);
        t.case(s.sober == x.value.is_t0(), || format!("{}: sober {}, T₀ {}", x.name, s.sober, x.value.is_t0()));
    }
    Ok(t)
}

fn t1_shadow(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, f) in ctx.frames() {
        let v = is_tu(f, &ctx.caps)?;
        let t1 = ctx.spectra[i].space().is_t1();
        let probe = tu_probe(f, &ctx.caps)?.is_none();
        t.case(v.holds == t1 && t1 == probe, || {
            format!("{}: antichain {}, T₁ {}, probe {}", ctx.name(i), v.holds, t1, probe)
        });
    }
    Ok(t)
}

fn t2_shadow(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, f) in ctx.frames() {
        let ih = is_i_hausdorff(f, &ctx.caps)?.holds;
        let t2 = ctx.spectra[i].space().is_t2();
        t.case(ih == t2, || format!("{}: I-Hausdorff {}, T₂ {}", ctx.name(i), ih, t2));
        let reg = is_regular(f).holds;
        let tu = is_tu(f, &ctx.caps)?.holds;
        t.case((!reg || ih) && (!ih || tu), || format!("{}: regular {reg}, I-Hausdorff {ih}, T_U {tu}", ctx.name(i)));
    }
    Ok(t)
}

fn t3_shadow(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (i, _, f) in ctx.frames() {
        let reg = is_regular(f);
        let t3 = ctx.spectra[i].space().is_t3();
        t.case(reg.holds == t3, || format!("{}: regular {}, T₃ {}", ctx.name(i), reg.holds, t3));
    }
    Ok(t)
}

fn open_maps(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let tu: Vec<bool> = ctx
        .frames()
        .map(|(_, _, f)| is_tu(f, &ctx.caps).map(|v| v.holds))
        .collect::<Result<_>>()?;
    for set in &ctx.maps {
        for f in &set.maps {
            // disagreement between the two criteria is an error
            let open = f.openness()?.open;
            t.case(true, String::new);
            if open && f.classify().surjective && tu[set.dom] {
                let (src, dst) = (&ctx.spectra[set.cod], &ctx.spectra[set.dom]);
                let pm = interpret_map(f, src, dst)?;
                t.case(src.space().is_open_embedding(&pm, dst.space()), || {
                    format!("{} → {}: {:?} is open onto but its point map is not an open embedding", ctx.name(set.dom), ctx.name(set.cod), f.image())
                });
            }
        }
    }
    Ok(t)
}

fn compact(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let mut fams = Vec::new();
    for (i, _, f) in ctx.frames() {
        let j = ctx.widest_family(f)?;
        let c = is_compact(&j);
        t.case(c.covers.holds && c.maximal_ideals.holds, || {
            format!("{}: {:?}", ctx.name(i), c.covers.witness.clone().or(c.maximal_ideals.witness.clone()))
        });
        fams.push((i, j));
    }
    if !fams.is_empty() {
        let mut rng = ctx.rng(3);
        for _ in 0..ctx.opts.trials / 4 {
            let (i, full) = &fams[rng.gen_range(0..fams.len())];
            let p = rng.gen_range(0.0..1.0);
            let j = full.retain(|_| rng.gen_bool(p));
            let f = j.frame();
            // every maximal ideal is some ↓c for a coatom, and ideals are closed under finite joins
            let oracle = f.coatoms().into_iter().all(|c| {
                j.entries()
                    .iter()
                    .all(|e| !e.parts.iter().all(|x| f.leq(x, c)) || f.leq(e.target, c))
            });
            let c = is_compact(&j);
            t.case(c.maximal_ideals.holds && oracle, || format!("{}: {:?}", ctx.name(*i), c.maximal_ideals.witness));
        }
    }
    Ok(t)
}

fn connected(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let tests = ctx.corpus.probe_frames();
    for (i, _, f) in ctx.frames() {
        let c = is_connected(f);
        let probe = p_connected_probe(f, &tests, &ctx.caps)?;
        let agree = match c {
            Connectedness::Connected => probe.no_counterexample,
            Connectedness::Disconnected { .. } => !probe.no_counterexample,
            Connectedness::Degenerate => probe.no_counterexample,
        };
        t.case(agree, || format!("{}: {:?}, probe {:?}", ctx.name(i), c, probe.witness));
        let sp = ctx.spectra[i].space();
        let space = sp.is_connected();
        let ok = match c {
            Connectedness::Degenerate => sp.is_empty(),
            _ => c.is_connected() == space,
        };
        t.case(ok, || format!("{}: frame {:?}, spectrum connected {space}", ctx.name(i), c));
    }
    Ok(t)
}

fn colimit(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let top = ctx.opts.bounds.max_poset.min(3);
    if top == 0 {
        return Ok(t);
    }
    let atoms: Vec<usize> = (1..=top).collect();
    let sys = DirectedSystem::boolean_restriction_chain(&atoms, &ctx.caps)?;
    let lim = frame_inverse_limit(&sys, &ctx.caps)?;
    let col = spectrum_colimit(&sys, &lim)?;
    let expected = Frame::boolean(top, &ctx.caps)?;
    t.case(col.open_embeddings, || "an induced point map is not an open embedding".into());
    t.case(col.homeomorphic, || "colimit of spectra is not Σ of the limit".into());
    t.case(find_isomorphism(&lim.frame, &expected).is_some() && col.space.len() == top, || {
        format!("limit has {} elements and {} points", lim.frame.len(), col.space.len())
    });
    Ok(t)
}

/// Distinct prime factors.
fn omega(mut n: usize) -> usize {
    let mut k = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            k += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    k + usize::from(n > 1)
}

fn ring_factors(name: &str) -> Vec<usize> {
    name.split('x').filter_map(|s| s.strip_prefix('Z')?.parse().ok()).collect()
}

fn ring_spectrum(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for Named { name, value: r } in &ctx.corpus.rings {
        let rep = crate::ring::ring_report(r)?;
        let expected: usize = ring_factors(name).into_iter().map(omega).sum();
        t.case(rep.primes.len() == expected, || format!("{name}: {} primes, expected {expected}", rep.primes.len()));
        t.case(rep.sober, || format!("{name}: Spec is not sober"));
        for a in 0..r.len() {
            for b in a..r.len() {
                let gens = BitSet::from_indices(r.len(), [a, b]);
                r.radical(&gens)?;
                t.case(true, String::new);
            }
        }
        if name == "Z12" {
            t.case(rep.primes.len() == 2 && rep.discrete, || format!("Spec(Z/12): {} points, discrete {}", rep.primes.len(), rep.discrete));
        }
    }
    Ok(t)
}

fn ring_basic_opens(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for Named { name, value: r } in &ctx.corpus.rings {
        let z = zariski_space(r);
        t.case(z.basic[r.one()].is_full() && z.basic[r.zero()].is_empty(), || format!("{name}: O_1 or O_0"));
        for a in 0..r.len() {
            for b in 0..r.len() {
                t.case(z.basic[r.mul(a, b)] == z.basic[a].intersection(&z.basic[b]), || {
                    format!("{name}: O_{}{}", r.name(a), r.name(b))
                });
            }
        }
    }
    Ok(t)
}

fn ring_product(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let top = ctx.opts.bounds.max_ring.min(6);
    for a in 1..=top {
        for b in 1..=top {
            let (ra, rb) = (FiniteRing::cyclic(a, &ctx.caps)?, FiniteRing::cyclic(b, &ctx.caps)?);
            let p = ra.product(&rb, &ctx.caps)?;
            let lhs = zariski_space(&p).space;
            let rhs = zariski_space(&ra).space.disjoint_union(&zariski_space(&rb).space);
            t.case(lhs.find_homeomorphism(&rhs).is_some(), || format!("Spec(Z/{a} × Z/{b})"));
        }
    }
    Ok(t)
}

fn ring_connected(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for Named { name, value: r } in &ctx.corpus.rings {
        let z = zariski_space(r);
        let c = is_connected(&Frame::opens(&z.space));
        let idem = r.idempotents();
        let ok = match c {
            Connectedness::Degenerate => r.len() == 1,
            _ => c.is_connected() == (idem.len() == 2),
        };
        t.case(ok, || format!("{name}: {:?} with idempotents {:?}", c, idem));
    }
    Ok(t)
}

fn round_trip(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    if ctx.corpus.is_empty() {
        return Ok(t);
    }
    let parsed = |src: &str, file: &str| {
        Workspace::parse(src, file, &ctx.caps).map_err(|e| match e.kind {
            crate::dsl::ParseErrorKind::Model(m) => m,
            _ => Error::ShadowMismatch(e.to_string()),
        })
    };
    let ws = parsed(&ctx.corpus.source(), "corpus.floc")?;
    let once = print_canonical(&ws);
    let again = parsed(&once, "corpus.canonical.floc")?;
    let twice = print_canonical(&again);
    t.case(once == twice, || "second print differs from the first".into());
    t.case(ws.counts() == again.counts(), || "declaration counts changed".into());
    for (name, d) in &ws.frames {
        t.case(again.frame(name) == Some(&d.value), || format!("frame {name} changed"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_bounds_pass() {
        let opts = SuiteOptions {
            bounds: Bounds { max_poset: 0, max_ring: 0 },
            ..SuiteOptions::default()
        };
        let r = run_suite(opts, &Caps::default()).unwrap();
        assert!(r.passed);
        assert!(r.checks.iter().all(|c| c.cases == 0), "{:?}", r.checks.iter().filter(|c| c.cases > 0).collect::<Vec<_>>());
    }

    #[test]
    fn corrupted_frame_fails_with_witness() {
        let opts = SuiteOptions {
            bounds: Bounds { max_poset: 1, max_ring: 0 },
            corrupt: true,
            ..SuiteOptions::default()
        };
        let r = run_suite(opts, &Caps::default()).unwrap();
        assert!(!r.passed);
        let d = r.checks.iter().find(|c| c.id == "lattice.distributive").unwrap();
        assert!(!d.passed);
        assert!(d.witness.as_deref().unwrap().starts_with("corrupted:"));
    }

    #[test]
    fn omega_counts() {
        assert_eq!([1, 2, 12, 30, 29].map(omega), [0, 1, 2, 3, 1]);
    }
}
