mod common;

use common::{rand_vec, rng};
use lorentz_lie::algebra_zoo::{catalog, CatalogSpec};
use lorentz_lie::forms::ad_invariance_residual;
use lorentz_lie::lie_core::linalg::unit;
use lorentz_lie::lie_core::*;

fn cat(s: CatalogSpec) -> LieAlgebra {
    catalog(&s).unwrap()
}

fn all_catalog() -> Vec<LieAlgebra> {
    vec![
        cat(CatalogSpec::Abelian(5)),
        cat(CatalogSpec::Aff),
        cat(CatalogSpec::Sl2),
        cat(CatalogSpec::So3),
        cat(CatalogSpec::Heisenberg(1)),
        cat(CatalogSpec::Heisenberg(2)),
        cat(CatalogSpec::TwistedHeisenberg(vec![qi(1)])),
        cat(CatalogSpec::TwistedHeisenberg(vec![qi(1), q(5, 2)])),
    ]
}

#[test]
fn brackets() {
    let sl2 = cat(CatalogSpec::Sl2);
    assert_eq!(sl2.bracket(&unit(3, 0), &unit(3, 1)).unwrap(), unit(3, 2));
    let mut r = rng(1);
    for a in all_catalog() {
        let x = rand_vec(&mut r, a.dim(), 3);
        assert!(a.bracket(&x, &x).unwrap().iter().all(|c| *c == qi(0)));
    }
    let he = cat(CatalogSpec::TwistedHeisenberg(vec![qi(1)]));
    assert_eq!(he.bracket(&unit(4, 0), &unit(4, 3)).unwrap(), vec![qi(0), qi(0), qi(-1), qi(0)]);
    assert!(matches!(sl2.bracket(&unit(2, 0), &unit(3, 0)), Err(LieError::DimensionMismatch { .. })));
}

#[test]
fn ad_matrices() {
    let sl2 = cat(CatalogSpec::Sl2);
    let adh = sl2.ad_matrix(&unit(3, 2)).unwrap();
    assert_eq!(adh, QMat::from_i64(3, 3, &[2, 0, 0, 0, -2, 0, 0, 0, 0]));
    assert!(cat(CatalogSpec::Abelian(3)).ad_matrix(&unit(3, 1)).unwrap().is_zero());
    let he = cat(CatalogSpec::TwistedHeisenberg(vec![qi(1)]));
    let adt = he.ad_matrix(&unit(4, 0)).unwrap();
    assert_eq!(adt, QMat::from_i64(4, 4, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0]));
}

#[test]
fn jacobi_residuals() {
    for a in all_catalog() {
        assert_eq!(a.jacobi_residual(), qi(0), "{}", a.name());
    }
    // twisted he1 with [X1, Y1] = Z + X1
    let labels: Vec<String> = ["T", "Z", "X1", "Y1"].iter().map(|s| s.to_string()).collect();
    let mut t = vec![(2, 3, 1, qi(1)), (0, 2, 3, qi(1)), (0, 3, 2, qi(-1))];
    t.push((2, 3, 2, qi(1)));
    let bad = LieAlgebra::from_table_unchecked("bad", labels.clone(), t.clone()).unwrap();
    assert!(bad.jacobi_residual() > qi(0));
    assert!(matches!(LieAlgebra::new("bad", labels, t), Err(LieError::Jacobi(..))));
    let he1 = LieAlgebra::from_table_unchecked(
        "he1'",
        vec!["Z".into(), "X1".into(), "Y1".into()],
        vec![(1, 2, 0, qi(1)), (1, 2, 1, qi(1))],
    )
    .unwrap();
    assert_eq!(he1.jacobi_residual(), qi(0));
}

#[test]
fn killing_forms() {
    let sl2 = cat(CatalogSpec::Sl2);
    assert_eq!(sl2.killing_form().matrix(), &QMat::from_i64(3, 3, &[0, 4, 0, 4, 0, 0, 0, 0, 8]));
    assert!(cat(CatalogSpec::Abelian(4)).killing_form().matrix().is_zero());
    let he = cat(CatalogSpec::TwistedHeisenberg(vec![qi(1)]));
    let k = he.killing_form();
    // oracle: trace of the dense square of ad_T
    let adt = he.ad_matrix(&unit(4, 0)).unwrap();
    assert_eq!(k.matrix()[(0, 0)], adt.mul(&adt).trace());
    assert_eq!(k.matrix()[(0, 0)], qi(-2));
    for i in 1..4 {
        for j in 1..4 {
            assert_eq!(k.matrix()[(i, j)], qi(0));
        }
    }
    for a in all_catalog() {
        let k = a.killing_form();
        assert!(k.matrix().is_symmetric());
        assert_eq!(ad_invariance_residual(&a, &k), qi(0));
        // the kernel of an invariant form is an ideal
        let ker = Subspace::span(a.dim(), &k.matrix().kernel());
        assert!(a.is_ideal(&ker), "{}", a.name());
    }
}

#[test]
fn centers() {
    assert_eq!(cat(CatalogSpec::Heisenberg(2)).center().vectors(), vec![unit(5, 0)]);
    assert_eq!(cat(CatalogSpec::Abelian(3)).center().dim(), 3);
    assert_eq!(cat(CatalogSpec::Sl2).center().dim(), 0);
}

#[test]
fn structure_reports() {
    let r = structure_report(&cat(CatalogSpec::Heisenberg(2)));
    assert!(r.flags.nilpotent);
    assert_eq!(r.lower_central_dims, vec![5, 1, 0]);
    let r = structure_report(&cat(CatalogSpec::Aff));
    assert!(r.flags.solvable && !r.flags.nilpotent);
    assert_eq!(r.derived_series_dims, vec![2, 1, 0]);
    assert_eq!(r.lower_central_dims, vec![2, 1]);
    let r = structure_report(&cat(CatalogSpec::So3));
    assert!(r.flags.semisimple && r.flags.compact_type);
    let r = structure_report(&cat(CatalogSpec::Sl2));
    assert!(r.flags.semisimple && !r.flags.compact_type);
}

#[test]
fn direct_sums() {
    let a = cat(CatalogSpec::Sl2);
    let b = cat(CatalogSpec::Aff);
    let s = direct_sum(&a, &b);
    assert_eq!(s.dim(), 5);
    assert_eq!(s.labels()[0], "e");
    assert!(s.bracket(&unit(5, 0), &unit(5, 4)).unwrap().iter().all(|c| *c == qi(0)));
    assert_eq!(s.killing_form().matrix(), &a.killing_form().matrix().block_diag(b.killing_form().matrix()));
    let algs = all_catalog();
    for x in &algs {
        for y in &algs {
            let (fx, fy) = (structure_report(x).flags, structure_report(y).flags);
            let fs = structure_report(&direct_sum(x, y)).flags;
            assert_eq!(fs.solvable, fx.solvable && fy.solvable);
            assert_eq!(fs.semisimple, fx.semisimple && fy.semisimple);
            assert_eq!(fs.nilpotent, fx.nilpotent && fy.nilpotent);
        }
    }
}

#[test]
fn invariant_subspaces() {
    let he = cat(CatalogSpec::TwistedHeisenberg(vec![qi(1)]));
    let ops: Vec<QMat> = (1..4).map(|i| he.ad_matrix(&unit(4, i)).unwrap()).collect();
    let s = generated_invariant_subspace(&ops, &unit(4, 2)).unwrap();
    assert!(s.same_as(&Subspace::new(4, &[unit(4, 2), unit(4, 1)]).unwrap()));
    assert_eq!(generated_invariant_subspace(&ops, &unit(4, 0)).unwrap().dim(), 4);
    let v = vec![qi(1), qi(2), qi(3), qi(4)];
    assert_eq!(generated_invariant_subspace(&[], &v).unwrap().vectors(), vec![v]);
    assert_eq!(generated_invariant_subspace(&ops, &vec![qi(0); 4]).unwrap_err(), LieError::ZeroSeed);
}

#[test]
fn heisenberg_isotropy_property() {
    let mut r = rng(77);
    for lam in [vec![qi(1)], vec![qi(1), qi(2)], vec![q(1, 3), qi(2), qi(3)]] {
        let he = cat(CatalogSpec::TwistedHeisenberg(lam));
        let n = he.dim();
        let ops: Vec<QMat> = (1..n).map(|i| he.ad_matrix(&unit(n, i)).unwrap()).collect();
        for _ in 0..30 {
            let v = rand_vec(&mut r, n, 3);
            if v.iter().all(|c| *c == qi(0)) {
                continue;
            }
            assert!(generated_invariant_subspace(&ops, &v).unwrap().contains(&unit(n, 1)));
        }
    }
}

#[test]
fn subalgebras_and_ideals() {
    let sl2 = cat(CatalogSpec::Sl2);
    let b = Subspace::new(3, &[unit(3, 0), unit(3, 2)]).unwrap();
    assert!(sl2.is_subalgebra(&b));
    assert!(!sl2.is_ideal(&b));
    let ef = Subspace::new(3, &[unit(3, 0), unit(3, 1)]).unwrap();
    assert!(!sl2.is_subalgebra(&ef));
    assert_eq!(sl2.subalgebra(&ef, "x").unwrap_err(), LieError::NotSubalgebra);
    assert_eq!(sl2.subalgebra(&b, "borel").unwrap().dim(), 2);
}
