mod common;

use common::{permutation, rand_invertible, rng, twisted_automorphism};
use lorentz_lie::algebra_zoo::{catalog, twisted_iso_test, CatalogSpec};
use lorentz_lie::forms::*;
use lorentz_lie::lie_core::linalg::unit;
use lorentz_lie::lie_core::{q, qi, QMat, Subspace, Q};
use nalgebra::DMatrix;

fn he(lam: &[Q]) -> lorentz_lie::lie_core::LieAlgebra {
    catalog(&CatalogSpec::TwistedHeisenberg(lam.to_vec())).unwrap()
}

#[test]
fn invariance_residuals() {
    for spec in [CatalogSpec::Sl2, CatalogSpec::So3, CatalogSpec::Aff, CatalogSpec::TwistedHeisenberg(vec![qi(1), qi(3)])] {
        let g = catalog(&spec).unwrap();
        assert_eq!(ad_invariance_residual(&g, &g.killing_form()), qi(0));
    }
    let g = he(&[qi(1), q(3, 2)]);
    for (a, b) in [(1, 0), (2, -3), (5, 7)] {
        let f = make_twisted_lorentz(&g, &TwistedLorentzParams::new(qi(a), qi(b)).unwrap()).unwrap();
        assert_eq!(ad_invariance_residual(&g, &f), qi(0));
    }
    let sl2 = catalog(&CatalogSpec::Sl2).unwrap();
    assert!(ad_invariance_residual(&sl2, &SymBilinearForm::new(QMat::identity(3)).unwrap()) > qi(0));
    assert!(matches!(SymBilinearForm::new(QMat::from_i64(2, 2, &[0, 1, 0, 0])), Err(FormError::NotSymmetric)));
}

#[test]
fn signatures() {
    let sig = catalog(&CatalogSpec::Sl2).unwrap().killing_form().signature();
    assert_eq!((sig.positive, sig.negative, sig.zero), (2, 1, 0));
    let sig = catalog(&CatalogSpec::So3).unwrap().killing_form().signature();
    assert_eq!((sig.positive, sig.negative, sig.zero), (0, 3, 0));
    for d in 1..4 {
        let f = SymBilinearForm::new(twisted_lorentz_matrix(d, &TwistedLorentzParams::new(qi(3), qi(-4)).unwrap())).unwrap();
        assert!(f.signature().is_lorentzian());
    }
    let sig = catalog(&CatalogSpec::Heisenberg(1)).unwrap().killing_form().signature();
    assert_eq!(sig.zero, 3);
}

#[test]
fn make_and_recover_round_trip() {
    let g = he(&[qi(1), qi(2)]);
    for (a, b) in [(1, 0), (2, -1), (7, 3)] {
        let p = TwistedLorentzParams::new(qi(a), qi(b)).unwrap();
        let f = make_twisted_lorentz(&g, &p).unwrap();
        let r = recover_twisted_parameters(&g, &f).unwrap();
        assert_eq!(r.params, p);
        assert!(!r.t_flipped);
    }
    let mut m = twisted_lorentz_matrix(2, &TwistedLorentzParams::normalized());
    m[(2, 2)] = qi(2);
    let bad = SymBilinearForm::new(m).unwrap();
    assert!(matches!(recover_twisted_parameters(&g, &bad), Err(FormError::NotAdInvariant(_))));
    // with T ↦ −T the table reads [T, X_k] = −λ_k Y_k and invariance forces ⟨T, Z⟩ = −⟨X, X⟩
    let flip = QMat::diag(&[qi(-1), qi(1), qi(1), qi(1), qi(1), qi(1)]);
    let gf = g.change_basis(&flip, Some(g.labels().to_vec())).unwrap();
    let m = twisted_lorentz_matrix(2, &TwistedLorentzParams::new(qi(2), qi(1)).unwrap()).congruent(&flip);
    assert_eq!(m[(0, 1)], qi(-2));
    let r = recover_twisted_parameters(&gf, &SymBilinearForm::new(m).unwrap()).unwrap();
    assert!(r.t_flipped);
    assert_eq!(r.params, TwistedLorentzParams::new(qi(2), qi(1)).unwrap());
    let mut m = twisted_lorentz_matrix(2, &TwistedLorentzParams::normalized());
    m[(2, 3)] = q(1, 10);
    m[(3, 2)] = q(1, 10);
    assert!(matches!(recover_twisted_parameters(&g, &SymBilinearForm::new(m).unwrap()), Err(FormError::NotAdInvariant(_))));
    assert_eq!(make_twisted_lorentz(&g, &TwistedLorentzParams { alpha: qi(-1), beta: qi(0) }).unwrap_err(), FormError::NonPositiveAlpha);
    let sl2 = catalog(&CatalogSpec::Sl2).unwrap();
    assert!(matches!(make_twisted_lorentz(&sl2, &TwistedLorentzParams::normalized()), Err(FormError::NotTwistedShape(_))));
}

#[test]
fn normalization() {
    let p = TwistedLorentzParams::new(qi(4), qi(2)).unwrap();
    let l = normalize_twisted_lorentz(2, &p).unwrap();
    assert_eq!(l[(1, 0)], q(-1, 4));
    let g = he(&[qi(1), qi(3)]);
    // L is an automorphism carrying the (α, β) form to the normalized one
    assert_eq!(g.change_basis(&l, None).unwrap().triples(), g.triples());
    assert_eq!(twisted_lorentz_matrix(2, &p).congruent(&l), twisted_lorentz_matrix(2, &TwistedLorentzParams::normalized()));
    let irr = TwistedLorentzParams::new(qi(3), qi(1)).unwrap();
    assert!(matches!(normalize_twisted_lorentz(2, &irr), Err(FormError::NeedsNumericMode(_))));
    let ln = normalize_twisted_lorentz_numeric(2, 3.0, 1.0).unwrap();
    let b = twisted_lorentz_matrix(2, &irr).to_f64();
    let want = twisted_lorentz_matrix(2, &TwistedLorentzParams::normalized()).to_f64();
    assert!((ln.transpose() * b * &ln - want).amax() < 1e-12);
}

#[test]
fn symplectic_basis_post_conditions() {
    let mut r = rng(31);
    for n in [2usize, 4, 6] {
        for _ in 0..10 {
            let a = rand_invertible(&mut r, n).to_f64();
            let metric = a.transpose() * &a + DMatrix::identity(n, n);
            let c = rand_invertible(&mut r, n).to_f64();
            let omega = &c - c.transpose();
            let b = match symplectic_orthogonal_basis(&metric, &omega) {
                Ok(b) => b,
                Err(FormError::DegenerateOmega) => continue,
                Err(e) => panic!("{e}"),
            };
            let g = b.transpose() * &metric * &b;
            assert!((g - DMatrix::identity(n, n)).amax() < 1e-8);
            let w = b.transpose() * &omega * &b;
            for j in 0..n {
                for k in 0..n {
                    let paired = j / 2 == k / 2 && j != k;
                    if !paired {
                        assert!(w[(j, k)].abs() < 1e-8, "{w}");
                    }
                }
            }
            for l in 0..n / 2 {
                assert!(w[(2 * l, 2 * l + 1)] > 0.0);
            }
        }
    }
    let m = DMatrix::<f64>::identity(3, 3);
    assert_eq!(symplectic_orthogonal_basis(&m, &m).unwrap_err(), FormError::OddDimension(3));
    let m = DMatrix::<f64>::identity(2, 2);
    assert_eq!(symplectic_orthogonal_basis(&m, &DMatrix::zeros(2, 2)).unwrap_err(), FormError::DegenerateOmega);
}

#[test]
fn recognition_of_automorphic_images() {
    let mut r = rng(32);
    for lam in [vec![qi(1)], vec![qi(1), qi(2)], vec![q(1, 2), qi(1), qi(3)]] {
        let g = he(&lam);
        let n = g.dim();
        for _ in 0..5 {
            let p = twisted_automorphism(&mut r, &g);
            let moved = g.change_basis(&p, None).unwrap();
            assert_eq!(moved.triples(), g.triples());
            let f = make_twisted_lorentz(&g, &TwistedLorentzParams::new(qi(2), qi(1)).unwrap()).unwrap();
            let f2 = SymBilinearForm::new(f.matrix().congruent(&p)).unwrap();
            let rec = recognize_twisted_structure(&moved, &f2, 0).unwrap();
            assert!(rec.table_residual < 1e-8);
            let canon = rec.canonical_lambda.unwrap();
            assert!(twisted_iso_test(&canon, &lam).is_some());
            assert_eq!(rec.basis.ncols(), n);
        }
    }
}

#[test]
fn recognition_of_scrambled_bases() {
    let mut r = rng(33);
    for lam in [vec![qi(1), qi(2)], vec![qi(2), qi(3)]] {
        let g = he(&lam);
        let n = g.dim();
        for _ in 0..5 {
            // columns: T + (he part), then a random basis of he_d
            let mut p = QMat::zeros(n, n);
            let inner = rand_invertible(&mut r, n - 1);
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    p[(i + 1, j + 1)] = inner[(i, j)].clone();
                }
                p[(i + 1, 0)] = inner[(i, 0)].clone() * qi(2);
            }
            p[(0, 0)] = qi(1);
            let pm = p.mul(&permutation(&mut r, n));
            let t_index = (0..n).find(|&j| pm[(0, j)] != qi(0)).unwrap();
            let labels: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
            let s = g.change_basis(&pm, Some(labels)).unwrap();
            let f = make_twisted_lorentz(&g, &TwistedLorentzParams::new(qi(1), qi(3)).unwrap()).unwrap();
            let f2 = SymBilinearForm::new(f.matrix().congruent(&pm)).unwrap();
            let rec = recognize_twisted_structure(&s, &f2, t_index).unwrap();
            assert!(rec.table_residual < 1e-8, "{}", rec.table_residual);
            assert!(twisted_iso_test(&rec.canonical_lambda.unwrap(), &lam).is_some());
        }
    }
}

#[test]
fn condition_star() {
    let k = catalog(&CatalogSpec::Sl2).unwrap().killing_form();
    let he_ = Subspace::new(3, &[unit(3, 2), unit(3, 0)]).unwrap();
    assert_eq!(condition_star_check(&k, &he_), (true, 1));
    let ef = Subspace::new(3, &[unit(3, 0), unit(3, 1)]).unwrap();
    assert_eq!(condition_star_check(&k, &ef), (false, 0));
    let h = Subspace::new(3, &[unit(3, 2)]).unwrap();
    assert_eq!(condition_star_check(&k, &h), (true, 0));
}

#[test]
fn lightcone() {
    let b2 = SymBilinearForm::new(QMat::diag(&[qi(-1), qi(1), qi(1), qi(1)])).unwrap();
    assert_eq!(lightcone_determined(&b2.scaled(&q(-5, 3)), &b2).unwrap(), Some(q(-5, 3)));
    let mut m = QMat::zeros(4, 4);
    m[(0, 1)] = qi(1);
    m[(1, 0)] = qi(1);
    let b1 = SymBilinearForm::new(m).unwrap();
    assert_eq!(lightcone_determined(&b1, &b2).unwrap(), None);
    let tilted = SymBilinearForm::new(twisted_lorentz_matrix(1, &TwistedLorentzParams::new(qi(2), qi(5)).unwrap())).unwrap();
    assert_eq!(lightcone_determined(&tilted.scaled(&qi(4)), &tilted).unwrap(), Some(qi(4)));
    assert!(matches!(lightcone_determined(&b1, &SymBilinearForm::new(QMat::identity(4)).unwrap()), Err(FormError::NotLorentzian(_))));

    let mut r = rng(34);
    for _ in 0..40 {
        let a = rand_invertible(&mut r, 4);
        let b2 = SymBilinearForm::new(QMat::diag(&[qi(-1), qi(1), qi(2), qi(3)]).congruent(&a)).unwrap();
        let lam = Q::new(r_int(&mut r), 1.into());
        let mut m = b2.matrix().scale(&lam);
        if r_int(&mut r) > 0.into() {
            m[(1, 2)] += qi(1);
            m[(2, 1)] += qi(1);
        }
        let b1 = SymBilinearForm::new(m).unwrap();
        let exact = lightcone_determined(&b1, &b2).unwrap();
        if let Some(l) = &exact {
            let diff = b1.matrix().sub(&b2.matrix().scale(l));
            assert!(diff.is_zero());
        }
        let num = lightcone_determined_numeric(&b1.matrix().to_f64(), &b2.matrix().to_f64(), 1e-9).unwrap();
        assert_eq!(exact.is_some(), num.is_some());
        if let (Some(e), Some(n)) = (exact, num) {
            assert!((lorentz_lie::lie_core::linalg::to_f64(&e) - n).abs() < 1e-8);
        }
    }
}

fn r_int(r: &mut rand_chacha::ChaCha8Rng) -> num::BigInt {
    use rand::Rng;
    r.gen_range(-4i64..=4).into()
}
