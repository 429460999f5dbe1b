//! Regenerates data/modpoly/phi_<l>.txt from q-expansions.
use lgisog_core::ellcurves::{
    default_modpoly_dir, modpoly_path, ModularPolynomial, SUPPORTED_ELLS,
};

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(default_modpoly_dir);
    std::fs::create_dir_all(&dir).unwrap();
    for ell in SUPPORTED_ELLS {
        let t = std::time::Instant::now();
        let p = ModularPolynomial::compute(ell).unwrap();
        p.write_file(&modpoly_path(&dir, ell)).unwrap();
        eprintln!("l = {ell}: {} digits, {:.1?}", p.max_digits(), t.elapsed());
    }
}
