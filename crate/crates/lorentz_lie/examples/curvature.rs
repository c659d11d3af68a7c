//! Curvature of reductive homogeneous spaces: a bi-invariant metric on SL(2)
//! and a quotient of sl2 ⊕ so3 ⊕ ℝ² by the so3 factor.
//!
//! Run with `cargo run --example curvature`.

use lorentz_lie::algebra_zoo::{catalog, CatalogSpec};
use lorentz_lie::forms::SymBilinearForm;
use lorentz_lie::homogeneous::*;
use lorentz_lie::lie_core::linalg::{fmt_q, unit};
use lorentz_lie::lie_core::{direct_sum, q, qi, QMat, Subspace};

fn summary(name: &str, s: &ReductiveSpace) {
    let r = curvature_report(s);
    println!("{name}: dim {}", s.dim());
    println!("  Ricci {:?}", r.ricci);
    println!("  scal {}, Einstein ratio {:?}", fmt_q(&r.scal), r.einstein_ratio.as_ref().map(fmt_q));
    println!("  holonomy dimension {}", r.holonomy_dim);
}

fn main() {
    let sl2 = catalog(&CatalogSpec::Sl2).unwrap();
    for lambda in [qi(1), q(1, 2)] {
        let s = ReductiveSpace::group(sl2.clone(), &sl2.killing_form().scaled(&lambda)).unwrap();
        summary(&format!("SL(2) with {} · Killing", fmt_q(&lambda)), &s);
        let k = sectional_curvature(&s, &unit(3, 0), &unit(3, 1)).unwrap();
        println!("  K(e, f) = {}", fmt_q(&k));
    }

    // g = sl2 ⊕ so3 ⊕ ℝ², h = so3, m = sl2 ⊕ ℝ² with Killing ⊕ identity
    let g = direct_sum(&direct_sum(&sl2, &catalog(&CatalogSpec::So3).unwrap()), &catalog(&CatalogSpec::Abelian(2)).unwrap());
    let n = g.dim();
    let h = Subspace::new(n, &[unit(n, 3), unit(n, 4), unit(n, 5)]).unwrap();
    let m = Subspace::new(n, &[unit(n, 0), unit(n, 1), unit(n, 2), unit(n, 6), unit(n, 7)]).unwrap();
    let mut metric = QMat::zeros(5, 5);
    let kill = sl2.killing_form();
    for i in 0..3 {
        for j in 0..3 {
            metric[(i, j)] = kill.matrix()[(i, j)].clone();
        }
    }
    metric[(3, 3)] = qi(1);
    metric[(4, 4)] = qi(1);
    let s = ReductiveSpace::new(g, h, m, metric).unwrap();
    println!("metric Lorentzian: {}", SymBilinearForm::new(s.metric().clone()).unwrap().signature().is_lorentzian());
    summary("(SL(2) × SO(3) × ℝ²) / SO(3)", &s);
}
