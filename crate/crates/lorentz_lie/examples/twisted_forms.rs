//! Ad-invariant Lorentz forms on twisted Heisenberg algebras: construction,
//! parameter recovery, normalization and recognition in a scrambled basis.
//!
//! Run with `cargo run --example twisted_forms`.

use lorentz_lie::algebra_zoo::{catalog, CatalogSpec};
use lorentz_lie::forms::*;
use lorentz_lie::lie_core::linalg::fmt_q;
use lorentz_lie::lie_core::{q, qi, QMat};

fn main() {
    let lambda = vec![qi(1), qi(3)];
    let g = catalog(&CatalogSpec::TwistedHeisenberg(lambda)).unwrap();
    let params = TwistedLorentzParams::new(qi(4), q(-3, 2)).unwrap();
    let f = make_twisted_lorentz(&g, &params).unwrap();
    println!("labels {:?}", g.labels());
    println!("form {:?}", f.matrix());
    println!("signature {:?}, ad-invariance residual {}", f.signature(), fmt_q(&ad_invariance_residual(&g, &f)));

    let rec = recover_twisted_parameters(&g, &f).unwrap();
    println!("recovered alpha = {}, beta = {}, T flipped: {}", fmt_q(&rec.params.alpha), fmt_q(&rec.params.beta), rec.t_flipped);

    let l = normalize_twisted_lorentz(2, &rec.params).unwrap();
    let normalized = f.matrix().congruent(&l);
    println!("after the normalizing automorphism: {:?}", normalized);

    // alpha = 2 has no rational square root: only the floating normalization exists
    let irr = TwistedLorentzParams::new(qi(2), qi(0)).unwrap();
    println!("exact normalization for alpha = 2: {:?}", normalize_twisted_lorentz(2, &irr).err());
    println!("numeric normalization diagonal: {:?}", normalize_twisted_lorentz_numeric(2, 2.0, 0.0).unwrap().diagonal().as_slice());

    // scramble: new basis (T + X1, Z, X1 + Y2, Y1, X2, Y2 - Z)
    let mut p = QMat::identity(6);
    p[(2, 0)] = qi(1);
    p[(5, 2)] = qi(1);
    p[(1, 5)] = qi(-1);
    let h = g.change_basis(&p, None).unwrap();
    let f2 = SymBilinearForm::new(f.matrix().congruent(&p)).unwrap();
    let r = recognize_twisted_structure(&h, &f2, 0).unwrap();
    println!("recognized lambda {:?}, alpha {:.6}, table residual {:.2e}", r.lambda, r.alpha, r.table_residual);
    println!("canonical lambda {:?}", r.canonical_lambda.map(|v| v.iter().map(fmt_q).collect::<Vec<_>>()));
}
