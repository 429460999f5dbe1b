use lgisog_core::field::primes_up_to;
use lgisog_core::modcurves::{
    cusp_galois_stability, genus_closed, genus_from_cosets_named, CurveKind,
};

#[test]
fn split_normalizer_agrees_up_to_31() {
    for ell in primes_up_to(31).into_iter().filter(|&l| l >= 5) {
        let closed = genus_closed(ell, CurveKind::SplitNormalizer).unwrap().genus;
        let cosets = genus_from_cosets_named(ell as u32, CurveKind::SplitNormalizer).unwrap();
        assert_eq!(closed, cosets.genus, "l={ell}");
    }
}

#[test]
fn polyhedral_curves_agree() {
    for (ell, kind, g) in [
        (13u32, CurveKind::A4, 3i64),
        (61, CurveKind::A5, 136),
        (73, CurveKind::S4, 610),
    ] {
        let r = genus_from_cosets_named(ell, kind).unwrap();
        println!("{r:?}");
        assert_eq!(r.genus, g);
        assert_eq!(genus_closed(ell as u64, kind).unwrap().genus, g);
    }
}

#[test]
fn cusp_class_is_proper() {
    let cert = cusp_galois_stability();
    println!("class size {}", cert.class_size);
    assert!(cert.class_size < 480);
}
