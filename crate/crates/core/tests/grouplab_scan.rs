use lgisog_core::gl2::char_poly_reducible;
use lgisog_core::grouplab::{
    enumerate_exceptional, is_exceptional_group, verify_lemma_sl2, verify_lemma_split, ScanMode,
};
use lgisog_core::ProjKind;

#[test]
fn lemmas_hold_through_thirteen() {
    for ell in [2u32, 3, 5, 7, 11, 13] {
        assert!(verify_lemma_split(ell).unwrap().is_empty(), "split l={ell}");
        assert!(verify_lemma_sl2(ell).unwrap().is_empty(), "sl2 l={ell}");
    }
}

#[test]
fn thirteen_scan_contents() {
    let r = enumerate_exceptional(13, ScanMode::All).unwrap();
    for e in &r.entries {
        assert!(e.classification.in_psl);
        assert!(is_exceptional_group(&e.group));
        assert!(e.group.elements().iter().all(char_poly_reducible));
        println!(
            "{:?} n={:?} order={} orbits={:?}",
            e.classification.kind, e.classification.n, e.classification.proj_order, e.orbit_sizes
        );
    }
    assert!(r
        .entries
        .iter()
        .any(|e| e.classification.kind == ProjKind::A4));
}
