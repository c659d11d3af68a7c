//! Structure theory of a small Lie algebra given by its bracket table.
//!
//! Run with `cargo run --example structure`.

use lorentz_lie::algebra_zoo::{catalog, CatalogSpec};
use lorentz_lie::lie_core::linalg::fmt_q;
use lorentz_lie::lie_core::{direct_sum, q, qi, structure_report, LieAlgebra};

fn show(a: &LieAlgebra) {
    let r = structure_report(a);
    println!("{} (dim {}): labels {:?}", a.name(), a.dim(), a.labels());
    println!("  derived series dims      {:?}", r.derived_series_dims);
    println!("  lower central series dims {:?}", r.lower_central_dims);
    println!("  center dim {}, flags {:?}", r.center_dim, r.flags);
    let k = a.killing_form();
    let s = k.signature();
    println!("  Killing form signature (+{}, -{}, 0:{})", s.positive, s.negative, s.zero);
    for i in 0..a.dim() {
        let row: Vec<String> = k.matrix().row(i).iter().map(fmt_q).collect();
        println!("    [{}]", row.join(", "));
    }
}

fn main() {
    // [x, y] = y, [x, z] = (1/2) z
    let labels = vec!["x".to_string(), "y".to_string(), "z".to_string()];
    let solvable = LieAlgebra::new("r3", labels, vec![(0, 1, 1, qi(1)), (0, 2, 2, q(1, 2))]).expect("valid table");
    show(&solvable);

    let sl2 = catalog(&CatalogSpec::Sl2).unwrap();
    show(&sl2);
    show(&direct_sum(&sl2, &catalog(&CatalogSpec::So3).unwrap()));
    show(&catalog(&CatalogSpec::TwistedHeisenberg(vec![qi(1), qi(2)])).unwrap());

    // a table that violates the Jacobi identity is rejected
    let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
    let bad = LieAlgebra::new("bad", labels, vec![(0, 1, 2, qi(1)), (0, 2, 0, qi(1))]);
    println!("bad table: {:?}", bad.err());
}
