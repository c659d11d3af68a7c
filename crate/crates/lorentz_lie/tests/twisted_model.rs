mod common;

use common::{rand_vec, rng};
use lorentz_lie::algebra_zoo::CatalogSpec;
use lorentz_lie::forms::TwistedLorentzParams;
use lorentz_lie::homogeneous::{curvature_diag, holonomy_algebra, ricci_tensor, scalar_curvature, u_map};
use lorentz_lie::lie_core::linalg::unit;
use lorentz_lie::lie_core::{q, qi, QMat, Q};
use lorentz_lie::twisted_model::*;

fn so3_model(lam: &[i64], tilt: Option<(Vec<i64>, Q)>) -> Result<TwistedProductModel, TwistedError> {
    let lam: Vec<Q> = lam.iter().map(|&x| qi(x)).collect();
    let t = match tilt {
        None => TiltSpec::untilted(CatalogSpec::So3),
        Some((k, z)) => TiltSpec { compact_factor: CatalogSpec::So3, tilt: vec![(k.into_iter().map(qi).collect(), z)] },
    };
    build_model(&lam, &TwistedLorentzParams::normalized(), &t, None)
}

#[test]
fn build_examples() {
    let m = so3_model(&[1], None).unwrap();
    assert!(is_special(&m));
    assert_eq!(m.p_dim(), 3);
    let m = so3_model(&[1], Some((vec![1, 0, 0], qi(1)))).unwrap();
    assert!(!is_special(&m));
    assert_eq!(m.p_dim(), 2);
    // h = span{A1, A2 + Z} is not closed under the bracket
    let t = TiltSpec {
        compact_factor: CatalogSpec::So3,
        tilt: vec![(vec![qi(1), qi(0), qi(0)], qi(0)), (vec![qi(0), qi(1), qi(0)], qi(1))],
    };
    let err = build_model(&[qi(1)], &TwistedLorentzParams::normalized(), &t, None).unwrap_err();
    assert_eq!(err, TwistedError::NotSubalgebra);
    let bad = QMat::from_i64(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, -1]);
    let t = TiltSpec { compact_factor: CatalogSpec::So3, tilt: vec![(vec![qi(1), qi(0), qi(0)], qi(1))] };
    assert_eq!(build_model(&[qi(1)], &TwistedLorentzParams::normalized(), &t, Some(&bad)).unwrap_err(), TwistedError::BadRiemann(3));
    // a metric on m′ that is not invariant under the tilted isotropy
    let skewed = QMat::from_i64(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 2]);
    assert!(matches!(
        build_model(&[qi(1)], &TwistedLorentzParams::normalized(), &t, Some(&skewed)),
        Err(TwistedError::Homogeneous(_))
    ));
    let t = TiltSpec::untilted(CatalogSpec::Sl2);
    assert!(matches!(build_model(&[qi(1)], &TwistedLorentzParams::normalized(), &t, None), Err(TwistedError::UnsupportedFactor(_))));
}

#[test]
fn tilted_bracket_has_z_part() {
    let m = so3_model(&[1], Some((vec![1, 0, 0], qi(1)))).unwrap();
    // [A2, A3] = A1 = (A1 + Z) − Z, so the m′-part is −Z
    assert_eq!(m.bracket_z(&unit(2, 0), &unit(2, 1)), qi(-1));
}

#[test]
fn special_criteria_agree() {
    for (name, m) in fixtures() {
        let a = is_special(&m);
        let b = v_vanishes(&m);
        assert_eq!(a, b, "{name}");
    }
    let m = build_model(&[qi(1)], &TwistedLorentzParams::normalized(), &TiltSpec::untilted(CatalogSpec::Abelian(0)), None).unwrap();
    assert_eq!(m.p_dim(), 0);
    assert!(is_special(&m));
    assert_eq!(scal_specialized(&m), qi(0));
    assert_eq!(holonomy_special(&m).unwrap().len(), 2);
}

#[test]
fn v_map_examples() {
    for (name, m) in fixtures() {
        let n = m.dim();
        let sd = m.s_dim();
        for i in 1..sd {
            for j in 1..sd {
                assert!(v_map(&m, &unit(n, i), &unit(n, j)).iter().all(|c| *c == qi(0)), "{name}");
            }
        }
    }
    // V(T, W_j) = ½ Σ_k ⟨T, [W_k, W_j]_Z⟩ W_k for a p-basis orthonormal for (·,·)
    let m = so3_model(&[1], Some((vec![1, 0, 0], qi(1)))).unwrap();
    let gram = m.n_space.metric().select(&[1, 2], &[1, 2]);
    assert_eq!(gram, QMat::diag(&[qi(2), qi(2)]));
    let n = m.dim();
    for j in 0..2 {
        let mut w = vec![qi(0); n];
        w[m.s_dim() + j] = qi(1);
        let v = v_map(&m, &unit(n, 0), &w);
        // with W_k = p_k/√2 the coefficient of p_j is ¼ ⟨T,[p_k,p_j]_Z⟩
        for k in 0..2 {
            let expect = q(1, 2) * m.bracket_z(&unit(2, k), &unit(2, j)) / qi(2);
            assert_eq!(v[k], expect);
        }
    }
}

#[test]
fn u_decomposition_matches_generic() {
    let mut r = rng(21);
    for (name, m) in fixtures() {
        let n = m.dim();
        for _ in 0..10 {
            let (x, y) = (rand_vec(&mut r, n, 3), rand_vec(&mut r, n, 3));
            let u = u_decomposition(&m, &x, &y).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(u, u_map(&m.space, &x, &y).unwrap());
        }
        let sd = m.s_dim();
        for i in 0..sd {
            for j in 0..sd {
                assert!(u_decomposition(&m, &unit(n, i), &unit(n, j)).unwrap().iter().all(|c| *c == qi(0)));
            }
        }
    }
}

#[test]
fn curvature_split_matches_generic() {
    let mut r = rng(22);
    for (name, m) in fixtures() {
        let n = m.dim();
        let special = is_special(&m);
        for _ in 0..20 {
            let (x, y) = (rand_vec(&mut r, n, 3), rand_vec(&mut r, n, 3));
            let split = curvature_R(&m, &x, &y);
            assert_eq!(split, curvature_diag(&m.space, &x, &y).unwrap(), "{name}");
            if special {
                let mut xp = vec![qi(0)];
                xp.extend(m.x_p(&x));
                let mut yp = vec![qi(0)];
                yp.extend(m.x_p(&y));
                let rs = curvature_diag(&m.s_space, &m.x_s(&x), &m.x_s(&y)).unwrap();
                let rn = curvature_diag(&m.n_space, &xp, &yp).unwrap();
                assert_eq!(split, rs + rn, "{name}");
            }
        }
        for i in 1..m.s_dim() {
            for j in 1..m.s_dim() {
                assert_eq!(curvature_R(&m, &unit(n, i), &unit(n, j)), qi(0));
            }
        }
    }
}

#[test]
fn ricci_and_scal_split_match_generic() {
    for (name, m) in fixtures() {
        let ric = ricci_specialized(&m);
        assert_eq!(ric, ricci_tensor(&m.space), "{name}");
        assert_eq!(scal_specialized(&m), scalar_curvature(&m.space), "{name}");
        let sd = m.s_dim();
        for i in 1..sd {
            for j in 1..sd {
                assert_eq!(ric[(i, j)], qi(0));
            }
        }
        assert!(ric[(0, 0)] > qi(0), "{name}: never Ricci-flat");
        if is_special(&m) {
            let rs = ricci_tensor(&m.s_space);
            let rn = ricci_tensor(&m.n_space);
            let r = m.p_dim();
            let idx: Vec<usize> = (1..=r).collect();
            assert_eq!(ric, rs.block_diag(&rn.select(&idx, &idx)), "{name}");
            assert_eq!(scal_specialized(&m), scalar_curvature(&m.n_space));
        }
    }
}

#[test]
fn ricci_t_entry_closed_form() {
    // Ric(T,T) = ½Σλ² + ¼ Σ_{j,k} ⟨T,[W_k,W_j]_Z⟩² in the normalized form
    let m = so3_model(&[1, 2], Some((vec![1, 0, 0], qi(1)))).unwrap();
    let ric = ricci_specialized(&m);
    // p = span{A2, A3} with (A_i, A_i) = 2 and [A2, A3]_Z = −1, so each of the
    // two ordered pairs of orthonormal W's contributes (−½)²
    assert_eq!(ric[(0, 0)], q(5, 2) + q(1, 4) * q(1, 2));
}

#[test]
fn literal_cross_coefficient_disagrees() {
    let (_, m) = fixtures().into_iter().find(|(n, _)| n.contains("random metric") && n.contains("so3")).unwrap();
    assert_eq!(ricci_specialized_with(&m, &qi(1)), ricci_tensor(&m.space));
    assert_ne!(ricci_specialized_with(&m, &qi(2)), ricci_tensor(&m.space));
}

#[test]
fn isotropy_check_examples() {
    for (name, m) in fixtures() {
        let v = ricci_isotropy_check(&m).unwrap();
        if name.contains("a2") {
            assert!(v.totally_isotropic, "{name}");
        }
        if name == "he1(1)+so3" {
            assert!(!v.totally_isotropic);
        }
    }
}

#[test]
fn holonomy_of_special_models() {
    for (name, m) in fixtures() {
        if !is_special(&m) {
            assert_eq!(holonomy_special(&m).unwrap_err(), TwistedError::NotSpecial);
            continue;
        }
        let hol = holonomy_special(&m).unwrap();
        let hn = holonomy_algebra(&m.n_space).len();
        assert_eq!(hol.len(), 2 * m.d() + hn, "{name}");
        if name.contains("a2") {
            assert_eq!(hol.len(), 2 * m.d());
        }
    }
}

#[test]
fn decomposition_lemma() {
    for (name, m) in fixtures() {
        assert!(decomposition_check(&m), "{name}");
    }
}

#[test]
fn oracle_reports_pass() {
    let mut r = rng(23);
    for (name, m) in fixtures() {
        let n = m.dim();
        let extra: Vec<_> = (0..5).map(|_| (rand_vec(&mut r, n, 2), rand_vec(&mut r, n, 2))).collect();
        let rep = oracle_compare(&m, &extra);
        assert!(rep.passed(), "{name}: {rep:?}");
    }
}
