//! Property tests: sign-class symmetry, scheme notation, lifting
//! invariance, flips and bridge flips.

use std::collections::HashSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tcurve_core::lattice::point_count;
use tcurve_core::regularity::{find_lifting, verify_lifting, violations_for};
use tcurve_core::scheme::Oval;
use tcurve_core::triangulation::{edge, honeycomb};
use tcurve_core::{
    is_bridge_flip, parse_scheme, root_isotopic, Patchwork, Quadrant, RealScheme, SignDistribution,
};

fn random_signs(rng: &mut impl Rng, degree: u32) -> SignDistribution {
    let mask = (1u128 << point_count(degree)) - 1;
    SignDistribution::from_bits(degree, rng.gen::<u128>() & mask).unwrap()
}

#[test]
fn orbits_have_eight_members_and_canonical_forms_are_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..10_000u32 {
        let degree = 1 + k % 7;
        let s = random_signs(&mut rng, degree);
        let orbit: HashSet<SignDistribution> = s.orbit().into_iter().collect();
        assert_eq!(orbit.len(), 8, "{s}");
        let c = s.canonicalize();
        assert!(c.is_canonical());
        assert_eq!(c.canonicalize(), c);
        assert!(orbit.contains(&c));
        for member in &orbit {
            assert_eq!(member.canonicalize(), c);
        }
        assert_eq!(SignDistribution::from_index(degree, s.to_index()).unwrap(), c);
    }
}

fn oval_tree() -> impl Strategy<Value = Oval> {
    Just(Oval::leaf())
        .prop_recursive(4, 24, 4, |inner| prop::collection::vec(inner, 0..4).prop_map(Oval::enclosing))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn scheme_notation_round_trips(pseudo_line: bool, ovals in prop::collection::vec(oval_tree(), 0..5)) {
        let s = RealScheme::new(pseudo_line, ovals);
        let text = s.to_string();
        prop_assert_eq!(parse_scheme(&text).unwrap(), s.clone());
        prop_assert_eq!(RealScheme::from_code(pseudo_line, s.code()).unwrap(), s);
    }

    #[test]
    fn violations_ignore_affine_terms(
        degree in 2u32..=5,
        walk_seed: u64,
        a in -5i64..=5, b in -5i64..=5, c in -5i64..=5,
        noise in prop::collection::vec(-3i64..=3, 21),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(walk_seed);
        let t = honeycomb(degree).unwrap().random_flip_walk(3 * degree as usize, &mut rng);
        let base = |p: (i32, i32)| noise[(p.0 * 7 + p.1 * 3).rem_euclid(21) as usize] + (p.0 * p.0 + p.1 * p.1) as i64;
        let shifted = |p: (i32, i32)| base(p) + a * p.0 as i64 + b * p.1 as i64 + c;
        let before: Vec<_> = violations_for(t.triangles(), base).iter().map(|v| (v.u, v.w, v.v, v.x)).collect();
        let after: Vec<_> = violations_for(t.triangles(), shifted).iter().map(|v| (v.u, v.w, v.v, v.x)).collect();
        prop_assert_eq!(before, after);
        if let Some(l) = find_lifting(&t) {
            prop_assert!(verify_lifting(&t, &l).unwrap().is_empty());
        }
    }

    #[test]
    fn flips_are_involutions(degree in 2u32..=6, walk_seed: u64, pick: prop::sample::Index) {
        let mut rng = ChaCha8Rng::seed_from_u64(walk_seed);
        let t = honeycomb(degree).unwrap().random_flip_walk(2 * degree as usize, &mut rng);
        let edges = t.flippable_edges();
        let e = edges[pick.index(edges.len())];
        let q = t.quadrangle(e).unwrap();
        let flipped = t.flip(e).unwrap();
        prop_assert_eq!(flipped.triangles().len(), t.triangles().len());
        let back_edge = edge(q.t, q.w);
        prop_assert!(flipped.is_flippable(back_edge));
        prop_assert_eq!(flipped.flip(back_edge).unwrap(), t);
    }
}

fn agreeing_quadrants(a: &Patchwork, b: &Patchwork) -> Vec<Quadrant> {
    Quadrant::ALL.into_iter().filter(|&q| a.quadrant_curve(q).agrees_with(&b.quadrant_curve(q))).collect()
}

#[test]
fn bridge_flips_change_one_quadrant_and_the_root_isotopy() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut instances = 0;
    let mut attempts = 0;
    while instances < 1200 {
        attempts += 1;
        assert!(attempts < 100_000, "too few bridge flips found");
        let degree = [3, 4, 5][instances % 3];
        let t = honeycomb(degree)
            .unwrap()
            .random_flip_walk(rng.gen_range(0..4 * degree as usize * degree as usize), &mut rng);
        let sigma = random_signs(&mut rng, degree);
        let bridges: Vec<_> =
            t.flippable_edges().into_iter().filter(|&e| is_bridge_flip(&t, &sigma, e).unwrap()).collect();
        let Some(&e) = bridges.choose(&mut rng) else { continue };
        let before = Patchwork::new(&t, sigma).unwrap();
        let (after, bridge) = before.flip(e).unwrap();
        assert!(bridge);
        let same = agreeing_quadrants(&before, &after);
        assert_eq!(same.len(), 3, "degree {degree}, {sigma}, edge {e:?}: agree in {same:?}");
        assert!(!root_isotopic(&before, &after), "degree {degree}, {sigma}, edge {e:?}");
        assert!(!root_isotopic(&after, &before));
        instances += 1;
    }
}

#[test]
fn non_bridge_flips_change_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..300 {
        let degree = rng.gen_range(3..=5);
        let t = honeycomb(degree).unwrap().random_flip_walk(10, &mut rng);
        let sigma = random_signs(&mut rng, degree);
        let before = Patchwork::new(&t, sigma).unwrap();
        for e in t.flippable_edges() {
            if is_bridge_flip(&t, &sigma, e).unwrap() {
                continue;
            }
            let (after, bridge) = before.flip(e).unwrap();
            assert!(!bridge);
            assert_eq!(agreeing_quadrants(&before, &after).len(), 4, "{sigma}, edge {e:?}");
            assert!(root_isotopic(&before, &after), "{sigma}, edge {e:?}");
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn single_oval_regions_trade_places() {
    let t = honeycomb(2).unwrap();
    let ones = SignDistribution::ones(2).unwrap();
    let e = edge((1, 0), (1, 1));
    let q = t.quadrangle(e).unwrap();
    let mut circuit = vec![q.t, q.u, q.v, q.w];
    circuit.sort();
    assert_eq!(circuit, [(0, 1), (1, 0), (1, 1), (2, 0)]);
    assert!(is_bridge_flip(&t, &ones, e).unwrap());
    let before = Patchwork::new(&t, ones).unwrap();
    let (after, bridge) = before.flip(e).unwrap();
    assert!(bridge);
    assert_eq!(before.scheme().to_string(), "<1>");
    assert_eq!(after.scheme().to_string(), "<1>");
    // With constant signs the bridge pattern appears in the quadrant x < 0.
    assert_eq!(
        agreeing_quadrants(&before, &after),
        [Quadrant::PlusPlus, Quadrant::PlusMinus, Quadrant::MinusMinus]
    );
    // The class member showing the pattern on d·Δ₂ itself changes there.
    let tau = ones
        .orbit()
        .into_iter()
        .find(|s| {
            let g = |p| s.get(p).unwrap();
            g(q.t) == g(q.w) && g(q.u) == g(q.v) && g(q.t) != g(q.u)
        })
        .unwrap();
    let (moved, _) = Patchwork::new(&t, tau).unwrap().flip(e).unwrap();
    let same = agreeing_quadrants(&Patchwork::new(&t, tau).unwrap(), &moved);
    assert_eq!(same, [Quadrant::MinusPlus, Quadrant::PlusMinus, Quadrant::MinusMinus]);
    assert!(!root_isotopic(&before, &after));
    assert!(root_isotopic(&before, &before));
    let root = |pw: &Patchwork| -> HashSet<u16> {
        pw.regions()[pw.root_region()].vertices.iter().copied().collect()
    };
    let inner = |pw: &Patchwork| -> HashSet<u16> {
        let r = 1 - pw.root_region();
        pw.regions()[r].vertices.iter().copied().collect()
    };
    assert_eq!(root(&before), inner(&after));
    assert_eq!(inner(&before), root(&after));
}

#[test]
fn harnack_signs_admit_no_bridge_flip_on_the_honeycomb() {
    for degree in 2..=7 {
        let t = honeycomb(degree).unwrap();
        let eta = SignDistribution::harnack(degree).unwrap();
        for e in t.flippable_edges() {
            assert!(!is_bridge_flip(&t, &eta, e).unwrap(), "degree {degree}, edge {e:?}");
        }
    }
}
