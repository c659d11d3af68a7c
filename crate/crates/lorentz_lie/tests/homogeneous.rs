mod common;

use common::{rand_vec, rng};
use lorentz_lie::algebra_zoo::{catalog, CatalogSpec};
use lorentz_lie::forms::{make_twisted_lorentz, SymBilinearForm, TwistedLorentzParams};
use lorentz_lie::homogeneous::*;
use lorentz_lie::lie_core::linalg::unit;
use lorentz_lie::lie_core::{q, qi, QMat, Subspace, Q};

fn sl2_space(lambda: Q) -> ReductiveSpace {
    let g = catalog(&CatalogSpec::Sl2).unwrap();
    let k = g.killing_form().scaled(&lambda);
    ReductiveSpace::group(g, &k).unwrap()
}

fn twisted_space(lam: &[i64]) -> ReductiveSpace {
    let l: Vec<Q> = lam.iter().map(|&x| qi(x)).collect();
    let g = catalog(&CatalogSpec::TwistedHeisenberg(l)).unwrap();
    let f = make_twisted_lorentz(&g, &TwistedLorentzParams::normalized()).unwrap();
    ReductiveSpace::group(g, &f).unwrap()
}

fn v(xs: &[i64]) -> Vec<Q> {
    xs.iter().map(|&x| qi(x)).collect()
}

#[test]
fn aff_u_map() {
    let g = catalog(&CatalogSpec::Aff).unwrap();
    let s = ReductiveSpace::group(g, &SymBilinearForm::new(QMat::identity(2)).unwrap()).unwrap();
    assert_eq!(u_map(&s, &v(&[0, 1]), &v(&[0, 1])).unwrap(), v(&[1, 0]));
    let mut r = rng(3);
    for _ in 0..20 {
        let (x, y) = (rand_vec(&mut r, 2, 4), rand_vec(&mut r, 2, 4));
        assert_eq!(u_map(&s, &x, &y).unwrap(), u_map(&s, &y, &x).unwrap());
    }
}

#[test]
fn sl2_connection_and_operator() {
    let s = sl2_space(qi(1));
    let (e, f) = (v(&[1, 0, 0]), v(&[0, 1, 0]));
    assert_eq!(nabla_at_base(&s, &e, &f).unwrap(), vec![qi(0), qi(0), q(-1, 2)]);
    assert!(u_map(&s, &e, &f).unwrap().iter().all(|x| *x == qi(0)));
    let op = curvature_operator(&s, &e, &f).unwrap();
    let adh = s.algebra().ad_matrix(&v(&[0, 0, 1])).unwrap();
    assert_eq!(op, adh.scale(&q(-1, 4)));
    assert_eq!(curvature_tensor(&s, &e, &f, &f, &e).unwrap(), qi(2));
    assert_eq!(curvature_diag(&s, &e, &f).unwrap(), qi(2));
}

#[test]
fn sl2_einstein_constants() {
    for lam in [qi(1), q(1, 2), qi(3)] {
        let s = sl2_space(lam.clone());
        let kill = catalog(&CatalogSpec::Sl2).unwrap().killing_form();
        let ric = ricci_tensor(&s);
        assert_eq!(ric, kill.matrix().scale(&q(-1, 4)));
        assert_eq!(ric, ricci_tensor_contracted(&s));
        assert_eq!(scalar_curvature(&s), q(-3, 4) / &lam);
        let k = sectional_curvature(&s, &v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap();
        assert_eq!(k, q(-1, 8) / &lam);
        assert_eq!(einstein_ratio(&s, &ric), Some(q(-1, 4) / &lam));
        let num = ricci_tensor_numeric(&s);
        let exact = ric.to_f64();
        assert!((num - exact).amax() < 1e-12);
    }
}

#[test]
fn degenerate_plane_is_error() {
    let s = sl2_space(qi(1));
    assert_eq!(sectional_curvature(&s, &v(&[1, 0, 0]), &v(&[2, 0, 0])), Err(HomogeneousError::DegeneratePlane));
}

#[test]
fn twisted_biinvariant_constants() {
    for lam in [vec![1], vec![1, 2], vec![2, 3, 5]] {
        let s = twisted_space(&lam);
        let n = s.dim();
        let (t, x1, y1) = (unit(n, 0), unit(n, 2), unit(n, 3));
        assert_eq!(nabla_at_base(&s, &t, &x1).unwrap(), {
            let mut w = vec![qi(0); n];
            w[3] = Q::from_integer((-lam[0]).into()) / qi(2);
            w
        });
        assert_eq!(curvature_diag(&s, &x1, &y1).unwrap(), qi(0));
        assert_eq!(sectional_curvature(&s, &x1, &y1).unwrap(), qi(0));
        let ric = ricci_tensor(&s);
        assert_eq!(ric, ricci_tensor_contracted(&s));
        let sum: i64 = lam.iter().map(|l| l * l).sum();
        assert_eq!(ric[(0, 0)], q(sum, 2));
        for i in 0..n {
            for j in 0..n {
                if (i, j) != (0, 0) {
                    assert_eq!(ric[(i, j)], qi(0));
                }
            }
        }
        assert_eq!(scalar_curvature(&s), qi(0));
        let num = ricci_tensor_numeric(&s);
        assert!((num - ric.to_f64()).amax() < 1e-12);
        let (_, eps) = pseudo_orthonormal_basis(&s);
        assert_eq!(eps[0], -1);
        assert!(eps[1..].iter().all(|&e| e == 1));
    }
}

#[test]
fn operator_matches_diagonal_formula() {
    let mut r = rng(11);
    let spaces = vec![
        sl2_space(qi(1)),
        twisted_space(&[1, 2]),
        ReductiveSpace::group(catalog(&CatalogSpec::Aff).unwrap(), &SymBilinearForm::new(QMat::from_i64(2, 2, &[2, 1, 1, 3])).unwrap()).unwrap(),
    ];
    for s in &spaces {
        let n = s.dim();
        for _ in 0..50 {
            let (x, y) = (rand_vec(&mut r, n, 3), rand_vec(&mut r, n, 3));
            assert_eq!(curvature_tensor(s, &x, &y, &y, &x).unwrap(), curvature_diag(s, &x, &y).unwrap());
        }
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (unit(n, i), unit(n, j));
                assert_eq!(curvature_tensor(s, &x, &y, &y, &x).unwrap(), curvature_diag(s, &x, &y).unwrap());
            }
        }
    }
}

#[test]
fn curvature_symmetries() {
    let mut r = rng(5);
    let g = catalog(&CatalogSpec::Aff).unwrap();
    let aff = ReductiveSpace::group(g, &SymBilinearForm::new(QMat::from_i64(2, 2, &[1, 0, 0, 2])).unwrap()).unwrap();
    for s in [sl2_space(qi(2)), twisted_space(&[1, 3]), aff] {
        let n = s.dim();
        for _ in 0..10 {
            let x = rand_vec(&mut r, n, 3);
            let y = rand_vec(&mut r, n, 3);
            let w = rand_vec(&mut r, n, 3);
            let z = rand_vec(&mut r, n, 3);
            let rr = |a: &[Q], b: &[Q], c: &[Q], d: &[Q]| curvature_tensor(&s, a, b, c, d).unwrap();
            assert_eq!(rr(&x, &y, &w, &z), -rr(&y, &x, &w, &z));
            assert_eq!(rr(&x, &y, &w, &z), -rr(&x, &y, &z, &w));
            assert_eq!(rr(&x, &y, &w, &z), rr(&w, &z, &x, &y));
            assert_eq!(rr(&x, &y, &w, &z) + rr(&y, &w, &x, &z) + rr(&w, &x, &y, &z), qi(0));
        }
    }
}

#[test]
fn holonomy_examples() {
    let s = sl2_space(qi(1));
    let hol = holonomy_algebra(&s);
    assert_eq!(hol.len(), 3);
    assert!(hol.iter().all(|a| is_metric_skew(&s, a)));
    let bi = holonomy_biinvariant(s.algebra(), &catalog(&CatalogSpec::Sl2).unwrap().killing_form()).unwrap();
    assert!(same_matrix_span(3, &hol, &bi));

    for lam in [vec![1], vec![1, 2]] {
        let s = twisted_space(&lam);
        let hol = holonomy_algebra(&s);
        assert_eq!(hol.len(), 2 * lam.len());
        for a in &hol {
            assert!(is_metric_skew(&s, a));
            for b in &hol {
                assert!(a.commutator(b).is_zero());
            }
        }
        let f = SymBilinearForm::new(s.metric().clone()).unwrap();
        let bi = holonomy_biinvariant(s.algebra(), &f).unwrap();
        assert!(same_matrix_span(s.dim(), &hol, &bi));
    }

    let ab = catalog(&CatalogSpec::Abelian(3)).unwrap();
    let s = ReductiveSpace::group(ab.clone(), &SymBilinearForm::new(QMat::identity(3)).unwrap()).unwrap();
    assert!(holonomy_algebra(&s).is_empty());
    assert!(ricci_tensor(&s).is_zero());
    assert!(curvature_operator(&s, &unit(3, 0), &unit(3, 1)).unwrap().is_zero());
}

#[test]
fn holonomy_biinvariant_rejects_non_invariant() {
    let g = catalog(&CatalogSpec::Aff).unwrap();
    let f = SymBilinearForm::new(QMat::identity(2)).unwrap();
    assert!(matches!(holonomy_biinvariant(&g, &f), Err(HomogeneousError::NotAdInvariant(_))));
}

#[test]
fn isotropy_validation() {
    // so3 ⊕ ℝ with h = span{A3}: m = span{A1, A2, a1} is reductive.
    let g = lorentz_lie::lie_core::direct_sum(&catalog(&CatalogSpec::So3).unwrap(), &catalog(&CatalogSpec::Abelian(1)).unwrap());
    let h = Subspace::new(4, &[unit(4, 2)]).unwrap();
    let m = Subspace::new(4, &[unit(4, 0), unit(4, 1), unit(4, 3)]).unwrap();
    let s = ReductiveSpace::new(g.clone(), h.clone(), m.clone(), QMat::identity(3)).unwrap();
    assert_eq!(s.dim(), 3);
    let bad = QMat::from_i64(3, 3, &[1, 0, 0, 0, 2, 0, 0, 0, 1]);
    assert!(matches!(ReductiveSpace::new(g.clone(), h.clone(), m, bad), Err(HomogeneousError::NotIsotropyInvariant(_))));
    let m2 = Subspace::new(4, &[unit(4, 0), vec![qi(0), qi(1), qi(1), qi(0)], unit(4, 3)]).unwrap();
    assert_eq!(ReductiveSpace::new(g, h, m2, QMat::identity(3)).err(), Some(HomogeneousError::NotReductive));
    let sl2 = sl2_space(qi(1));
    let hol = holonomy_algebra(&sl2);
    let ric = ricci_tensor(&sl2);
    assert_eq!(scalar_from_ricci(&sl2, &ric), q(-3, 4));
    assert_eq!(curvature_report(&sl2).holonomy_dim, hol.len());
}
