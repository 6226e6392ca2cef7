//! Shipped triangulations: transcription checksums, validity, symmetry and
//! the certifying liftings.

use tcurve_core::catalog;
use tcurve_core::regularity::{find_lifting, verify_lifting};
use tcurve_core::triangulation::honeycomb;

#[test]
fn catalog_entries_are_valid_and_symmetric() {
    let entries = catalog::entries().unwrap();
    assert_eq!(entries.len(), 6);
    for e in &entries {
        let d = e.triangulation.degree() as usize;
        assert_eq!(e.triangulation.triangles().len(), d * d, "{}", e.key);
        assert!(e.triangulation.is_symmetric(), "{} is not symmetric", e.key);
    }
    let degrees: Vec<u32> = entries.iter().map(|e| e.triangulation.degree()).collect();
    assert_eq!(degrees, vec![6, 6, 7, 7, 7, 7]);
}

#[test]
fn shipped_liftings_satisfy_every_folding_condition() {
    for e in catalog::entries().unwrap() {
        let v = verify_lifting(&e.triangulation, &e.lifting).unwrap();
        let shown: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert!(v.is_empty(), "{}: {shown:?}", e.key);
    }
}

#[test]
fn bat_contains_the_unit_diagonal() {
    let bat = catalog::entry("bat").unwrap();
    assert!(bat.triangulation.has_edge(((0, 1), (1, 0))));
    // ω(0,0) + ω(1,1) = 4 + 1 > ω(1,0) + ω(0,1) = 2 + 2.
    let l = &bat.lifting;
    assert_eq!((l[0], l[8], l[7], l[1]), (4, 1, 2, 2));
}

#[test]
fn honeycomb7_matches_the_constructor() {
    assert_eq!(catalog::entry("honeycomb7").unwrap().triangulation, honeycomb(7).unwrap());
}

#[test]
fn exact_lp_recovers_liftings() {
    for e in catalog::entries().unwrap() {
        let l = find_lifting(&e.triangulation).expect("catalog triangulations are regular");
        assert!(verify_lifting(&e.triangulation, &l).unwrap().is_empty(), "{}", e.key);
    }
}

#[test]
fn unknown_key_is_rejected() {
    assert!(matches!(catalog::entry("owl"), Err(tcurve_core::Error::UnknownCatalogKey(_))));
    assert_eq!(catalog::resolve("honeycomb:3").unwrap(), honeycomb(3).unwrap());
}
