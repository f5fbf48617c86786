//! Algebraic laws on randomly generated small objects.

use proptest::prelude::*;

use finite_locales::coproduct::{c_ideal_closure, coproduct, is_c_ideal};
use finite_locales::dsl::{print_canonical, Workspace};
use finite_locales::hom::enumerate_frame_maps;
use finite_locales::interp::{classical_points, relative_points, GroundJoinFamily};
use finite_locales::ring::FiniteRing;
use finite_locales::{BitSet, Caps, Frame, Poset};

fn caps() -> Caps {
    Caps::default()
}

/// Downset frames of random posets on up to four points (at most 16 elements).
fn frame() -> impl Strategy<Value = Frame> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            let less: Vec<(usize, usize)> = pairs.zip(bits).filter(|(_, b)| *b).map(|(p, _)| p).collect();
            let names = (0..n).map(|i| format!("p{i}")).collect();
            let p = Poset::from_relations(names, &less).unwrap();
            Frame::downsets(&p, &caps()).unwrap()
        })
}

fn small_frame() -> impl Strategy<Value = Frame> {
    frame().prop_filter("at most 8 elements", |f| f.len() <= 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributive_with_heyting_adjunction(f in frame()) {
        prop_assert!(f.revalidate().is_ok());
        for a in f.elements() {
            for b in f.elements() {
                let h = f.heyting(a, b);
                for c in f.elements() {
                    prop_assert_eq!(f.meet(a, f.join(b, c)), f.join(f.meet(a, b), f.meet(a, c)));
                    prop_assert_eq!(f.leq(f.meet(c, a), b), f.leq(c, h));
                }
            }
        }
    }

    #[test]
    fn meets_from_lower_bounds(f in frame(), mask in any::<u64>()) {
        let family = BitSet::from_mask(f.len(), mask & ((1u64 << f.len()) - 1)).to_vec();
        prop_assert_eq!(f.meet_via_lower_bounds(&family), f.meet_all(family.iter().copied()));
    }

    #[test]
    fn closure_operator(l in small_frame(), r in small_frame(), a in any::<u64>(), b in any::<u64>()) {
        let n = l.len() * r.len();
        let mask = |m: u64| BitSet::from_indices(n, (0..n).filter(|&i| m >> (i % 64) & 1 == 1));
        let (s, t) = (mask(a), mask(a | b));
        let cs = c_ideal_closure(&l, &r, &s);
        prop_assert!(s.is_subset(&cs));
        prop_assert!(is_c_ideal(&l, &r, &cs));
        prop_assert_eq!(c_ideal_closure(&l, &r, &cs), cs.clone());
        prop_assert!(cs.is_subset(&c_ideal_closure(&l, &r, &t)));
    }

    #[test]
    fn coproduct_ideals_meet(l in small_frame(), r in small_frame()) {
        let c = coproduct(&l, &r, &caps()).unwrap();
        prop_assert!(c.base().revalidate().is_ok());
        prop_assert!(c.generated_by_principals());
        for x in c.ideals() {
            for y in c.ideals() {
                prop_assert!(is_c_ideal(&l, &r, &x.intersection(y)));
            }
        }
    }

    #[test]
    fn adjoint_and_composition(a in small_frame(), b in small_frame(), c in small_frame(), i in any::<usize>(), j in any::<usize>()) {
        let ab = enumerate_frame_maps(&a, &b, &caps()).unwrap();
        let bc = enumerate_frame_maps(&b, &c, &caps()).unwrap();
        let f = &ab[i % ab.len()];
        let g = &bc[j % bc.len()];
        let left = f.left_adjoint();
        for m in b.elements() {
            for l in a.elements() {
                prop_assert_eq!(a.leq(left[m], l), b.leq(m, f.apply(l)));
            }
        }
        let h = g.compose(f).unwrap();
        prop_assert!(finite_locales::FrameMap::new(a.clone(), c.clone(), h.image().to_vec()).is_ok());
        if f.is_open().unwrap() && g.is_open().unwrap() {
            prop_assert!(h.is_open().unwrap());
        }
    }

    #[test]
    fn fewer_joins_more_points(f in frame(), seed in any::<u64>(), extra in any::<u64>()) {
        let full = GroundJoinFamily::full(&f, &caps()).unwrap();
        prop_assert_eq!(relative_points(&full), classical_points(&f));
        let mut k = 0u32;
        let big = full.retain(|_| { k += 1; seed.rotate_left(k) & 1 == 1 });
        let small = big.retain(|_| { k += 1; extra.rotate_left(k) & 1 == 1 });
        let pb = relative_points(&big);
        let ps = relative_points(&small);
        prop_assert!(pb.iter().all(|x| ps.contains(x)));
    }

    #[test]
    fn radicals(n in 1usize..=30, a in any::<usize>(), b in any::<usize>()) {
        let r = FiniteRing::cyclic(n, &caps()).unwrap();
        let gens = BitSet::from_indices(n, [a % n, b % n]);
        let rad = r.radical(&gens).unwrap();
        let ideal = r.ideal_generated(&gens);
        prop_assert!(r.is_ideal(&rad));
        prop_assert!(ideal.is_subset(&rad));
        prop_assert_eq!(r.ideal_generated(&ideal), ideal);
        prop_assert_eq!(r.radical(&rad).unwrap(), rad);
    }

    #[test]
    fn declarations_print_and_parse(f in frame()) {
        let src = format!("frame F = order {}\njoins J on F = finitary\n", f.canonical_text());
        let ws = Workspace::parse(&src, "gen.floc", &caps()).unwrap();
        prop_assert_eq!(ws.frame("F").unwrap(), &f);
        let once = print_canonical(&ws);
        let again = Workspace::parse(&once, "again.floc", &caps()).unwrap();
        prop_assert_eq!(print_canonical(&again), once.clone());
        // identical bytes, identical workspace
        prop_assert_eq!(print_canonical(&Workspace::parse(&src, "gen.floc", &caps()).unwrap()), once);
    }
}
