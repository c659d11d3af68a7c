//! Recognizes `k ⊕ a ⊕ s` in a direct sum written in a scrambled basis and
//! prints the certificate basis.
//!
//! Run with `cargo run --example classify`.

use lorentz_lie::algebra_zoo::{catalog, classify_decomposition, CatalogSpec, Certificate, Classification};
use lorentz_lie::lie_core::{direct_sum, q, qi, QMat};

fn main() {
    let pieces = [
        CatalogSpec::So3,
        CatalogSpec::Abelian(1),
        CatalogSpec::TwistedHeisenberg(vec![qi(2), qi(6)]),
    ];
    let g = pieces.iter().map(|p| catalog(p).unwrap()).reduce(|a, b| direct_sum(&a, &b)).unwrap();
    let n = g.dim();
    let mut p = QMat::identity(n);
    for i in 0..n {
        p[(i, (i + 3) % n)] = q(1, 2);
        p[((i * 5) % n, i)] += qi(1);
    }
    let h = g.change_basis(&p, None).expect("invertible change of basis");
    println!("input: so3 ⊕ ℝ ⊕ he_2^(2,6), scrambled, dim {n}");
    match classify_decomposition(&h) {
        Classification::Classified(r) => {
            println!("k simple dims {:?}, a = {}, s = {}", r.k_simple_dims, r.a_dim, r.s_kind);
            match &r.witness {
                Certificate::Exact(w) => {
                    let induced = h.change_basis(w, None).unwrap();
                    println!("exact certificate; induced table matches target: {}", induced.triples() == r.target.triples());
                }
                Certificate::Numeric { residual, .. } => println!("numeric certificate, residual {residual:.2e}"),
            }
        }
        Classification::NotInClassification { reason } => println!("not in classification: {reason}"),
    }

    let sl2_sl2 = catalog(&CatalogSpec::Sl2).map(|s| direct_sum(&s, &catalog(&CatalogSpec::Sl2).unwrap())).unwrap();
    if let Classification::NotInClassification { reason } = classify_decomposition(&sl2_sl2) {
        println!("sl2 ⊕ sl2: {reason}");
    }
}
