//! Additive Jordan decomposition `X = E + H + N` and spectral classes of
//! adjoint operators.
//!
//! Run with `cargo run --example jordan`.

use lorentz_lie::algebra_zoo::{catalog, CatalogSpec};
use lorentz_lie::lie_core::{qi, QMat};
use lorentz_lie::spectral::{eigenvalues, jordan_complete, precompact_criterion, spectral_class};
use nalgebra::DMatrix;

fn main() {
    // rotation block ⊕ hyperbolic block, plus a nilpotent part commuting with both
    let x = DMatrix::from_row_slice(4, 4, &[0.0, -2.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0, 1.0, 0.0, 0.0, 0.0, 3.0]);
    let t = jordan_complete(&x);
    println!("X = {x:.3}");
    println!("E = {:.3}H = {:.3}N = {:.3}", t.e, t.h, t.n);
    println!("eigenvalues of X: {:?}", eigenvalues(&x));
    println!("|E + H + N - X| = {:.1e}", (&t.e + &t.h + &t.n - &x).amax());

    let sl2 = catalog(&CatalogSpec::Sl2).unwrap();
    for (name, v) in [("e", [1, 0, 0]), ("h", [0, 0, 1]), ("e - f", [1, -1, 0]), ("e + h", [1, 0, 1])] {
        let v: Vec<_> = v.iter().map(|&c| qi(c)).collect();
        let ad = sl2.ad_matrix(&v).unwrap();
        println!("sl2: ad({name}) is {:?}, precompact: {}", spectral_class(&ad), precompact_criterion(&sl2, &v));
    }

    let so3 = catalog(&CatalogSpec::So3).unwrap();
    let v = vec![qi(1), qi(2), qi(2)];
    println!("so3: ad(v) is {:?}", spectral_class(&so3.ad_matrix(&v).unwrap()));
    let n = QMat::from_i64(3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0]);
    println!("a 3×3 Jordan block is {:?}", spectral_class(&n));
}
