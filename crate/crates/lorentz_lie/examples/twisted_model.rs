//! Twisted product models `(he_d^λ ⊕ k ⊕ a) / h`: specialized curvature
//! formulas checked against the generic engine.
//!
//! Run with `cargo run --example twisted_model`.

use lorentz_lie::algebra_zoo::CatalogSpec;
use lorentz_lie::forms::TwistedLorentzParams;
use lorentz_lie::homogeneous::{ricci_tensor, scalar_curvature};
use lorentz_lie::lie_core::linalg::fmt_q;
use lorentz_lie::lie_core::qi;
use lorentz_lie::twisted_model::*;

fn main() {
    for (name, m) in fixtures() {
        let ric = ricci_specialized(&m);
        let scal = scal_specialized(&m);
        let rep = oracle_compare(&m, &[]);
        println!(
            "{name}: dim {}, special {}, scal {}, split = generic: {}, oracle {}",
            m.dim(),
            is_special(&m),
            fmt_q(&scal),
            ric == ricci_tensor(&m.space) && scal == scalar_curvature(&m.space),
            if rep.passed() { "agrees" } else { "DISAGREES" }
        );
    }

    // he_1 ⊕ so3 tilted by K₀ = (1, 0, 0), c = 1
    let tilt = TiltSpec { compact_factor: CatalogSpec::So3, tilt: vec![(vec![qi(1), qi(0), qi(0)], qi(1))] };
    let m = build_model(&[qi(1)], &TwistedLorentzParams::new(qi(1), qi(0)).unwrap(), &tilt, None).unwrap();
    println!("tilted model: dim {}, p_dim {}", m.dim(), m.p_dim());
    println!("  Ricci {:?}", ricci_specialized(&m));
    if let Ok(v) = ricci_isotropy_check(&m) {
        println!("  Ricci image totally isotropic: {}", v.totally_isotropic);
    }
}
