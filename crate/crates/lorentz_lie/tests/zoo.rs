mod common;

use lorentz_lie::algebra_zoo::*;
use lorentz_lie::forms::SymBilinearForm;
use lorentz_lie::lie_core::{direct_sum, q, qi, LieAlgebra, QMat, Q};
use rand::Rng;

fn pieces_sum(pieces: &[CatalogSpec]) -> LieAlgebra {
    let mut it = pieces.iter().map(|p| catalog(p).unwrap());
    let first = it.next().unwrap();
    it.fold(first, |acc, p| direct_sum(&acc, &p))
}

#[test]
fn catalog_brackets() {
    let sl2 = catalog(&CatalogSpec::Sl2).unwrap();
    assert_eq!(sl2.br(&sl2.basis(2), &sl2.basis(1)), vec![qi(0), qi(-2), qi(0)]);
    let he2 = catalog(&CatalogSpec::Heisenberg(2)).unwrap();
    assert!(he2.br(&he2.basis(1), &he2.basis(4)).iter().all(|x| *x == qi(0)));
    let tw = catalog(&CatalogSpec::TwistedHeisenberg(vec![qi(1), qi(2)])).unwrap();
    let mut y2 = vec![qi(0); 6];
    y2[5] = qi(2);
    assert_eq!(tw.br(&tw.basis(0), &tw.basis(4)), y2);
    assert!(catalog(&CatalogSpec::TwistedHeisenberg(vec![qi(0)])).is_err());
    assert!(catalog(&CatalogSpec::Heisenberg(0)).is_err());
}

#[test]
fn twisted_center_is_z() {
    for lam in [vec![qi(1)], vec![qi(1), qi(2)], vec![q(1, 3), qi(5), qi(5)]] {
        let a = catalog(&CatalogSpec::TwistedHeisenberg(lam)).unwrap();
        let c = a.center();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&a.basis(1)));
    }
}

#[test]
fn radical_examples() {
    assert_eq!(radical(&catalog(&CatalogSpec::Sl2).unwrap()).dim(), 0);
    assert_eq!(radical(&catalog(&CatalogSpec::Heisenberg(2)).unwrap()).dim(), 5);
    let g = pieces_sum(&[CatalogSpec::Aff, CatalogSpec::So3]);
    let r = radical(&g);
    assert_eq!(r.dim(), 2);
    assert!(r.contains(&g.basis(0)) && r.contains(&g.basis(1)));
}

#[test]
fn iso_test_properties() {
    let mut r = common::rng(3);
    for _ in 0..50 {
        let d = r.gen_range(1..4);
        let l: Vec<Q> = (0..d).map(|_| q(r.gen_range(1..9), r.gen_range(1..5))).collect();
        let c = q(r.gen_range(1..9), r.gen_range(1..9));
        let cl: Vec<Q> = l.iter().map(|x| x * &c).collect();
        assert!(twisted_iso_test(&l, &l).is_some());
        assert_eq!(twisted_iso_test(&cl, &l), Some(c.clone()));
        assert_eq!(twisted_iso_test(&l, &cl), Some(qi(1) / &c));
        assert_eq!(canonical_lambda(&l), canonical_lambda(&cl));
    }
    assert_eq!(twisted_iso_test(&[qi(5)], &[qi(1)]), Some(qi(5)));
    assert_eq!(twisted_iso_test(&[qi(1)], &[qi(1), qi(1)]), None);
}

#[test]
fn heisenberg_decompose_examples() {
    let he1 = catalog(&CatalogSpec::Heisenberg(1)).unwrap();
    let f = SymBilinearForm::new(QMat::diag(&[qi(0), qi(1), qi(1)])).unwrap();
    let s = heisenberg_decompose(&he1, &f).unwrap();
    assert_eq!((s.a_part.dim(), s.h_part.dim()), (0, 3));
    let ab = catalog(&CatalogSpec::Abelian(3)).unwrap();
    let s = heisenberg_decompose(&ab, &SymBilinearForm::new(QMat::identity(3)).unwrap()).unwrap();
    assert_eq!((s.a_part.dim(), s.h_part.dim()), (2, 1));
    let g = pieces_sum(&[CatalogSpec::Heisenberg(1), CatalogSpec::Abelian(1)]);
    let f = SymBilinearForm::new(QMat::diag(&[qi(0), qi(1), qi(1), qi(1)])).unwrap();
    let s = heisenberg_decompose(&g, &f).unwrap();
    assert_eq!(s.a_part.dim(), 1);
    assert!(s.a_part.contains(&g.basis(3)));
    assert_eq!(s.h_part.dim(), 3);
    let cb = s.canonical_basis.columns();
    assert_eq!(g.br(&cb[1], &cb[2]), cb[0]);
    for v in s.a_part.vectors() {
        for i in 0..4 {
            assert!(g.br(&v, &g.basis(i)).iter().all(|x| *x == qi(0)));
        }
    }
    let sl2 = catalog(&CatalogSpec::Sl2).unwrap();
    assert_eq!(heisenberg_decompose(&sl2, &sl2.killing_form()).unwrap_err(), ZooError::NotNilpotent);
}

fn expect(pieces: &[CatalogSpec]) -> (usize, usize, SKind) {
    let mut so3 = 0;
    let mut a = 0;
    let mut s = SKind::Trivial;
    for p in pieces {
        match p {
            CatalogSpec::So3 => so3 += 1,
            CatalogSpec::Abelian(n) => a += n,
            CatalogSpec::Aff => s = SKind::Aff,
            CatalogSpec::Sl2 => s = SKind::Sl2,
            CatalogSpec::Heisenberg(d) => s = SKind::Heisenberg(*d),
            CatalogSpec::TwistedHeisenberg(l) => {
                s = SKind::TwistedHeisenberg(LambdaClass::Rational(canonical_lambda(l)))
            }
        }
    }
    (so3, a, s)
}

#[test]
fn classify_spec_examples() {
    let g = pieces_sum(&[CatalogSpec::Sl2, CatalogSpec::So3, CatalogSpec::Abelian(2)]);
    let c = classify_decomposition(&g);
    let c = c.classified().unwrap();
    assert_eq!((c.k_dim, c.a_dim, &c.s_kind), (3, 2, &SKind::Sl2));
    assert!(c.witness.is_exact());
    let g = pieces_sum(&[CatalogSpec::TwistedHeisenberg(vec![qi(1), qi(2)]), CatalogSpec::So3]);
    let c = classify_decomposition(&g);
    let c = c.classified().unwrap();
    assert_eq!(c.s_kind, SKind::TwistedHeisenberg(LambdaClass::Rational(vec![qi(1), qi(2)])));
    assert_eq!((c.k_dim, c.a_dim), (3, 0));
    let c = classify_decomposition(&catalog(&CatalogSpec::Abelian(4)).unwrap());
    let c = c.classified().unwrap();
    assert_eq!((c.a_dim, &c.s_kind), (4, &SKind::Trivial));
}

#[test]
fn classify_rejects_solvable_counterexample() {
    // [x, y] = y, [x, z] = 2z: not in the list
    let g = LieAlgebra::new("r", vec!["x".into(), "y".into(), "z".into()], vec![(0, 1, 1, qi(1)), (0, 2, 2, qi(2))]).unwrap();
    assert!(classify_decomposition(&g).classified().is_none());
    // two sl2 factors
    let g = pieces_sum(&[CatalogSpec::Sl2, CatalogSpec::Sl2]);
    assert!(classify_decomposition(&g).classified().is_none());
}

#[test]
fn classify_scrambled_round_trip() {
    let mut r = common::rng(11);
    let s_choices = [
        None,
        Some(CatalogSpec::Aff),
        Some(CatalogSpec::Sl2),
        Some(CatalogSpec::Heisenberg(1)),
        Some(CatalogSpec::Heisenberg(2)),
        Some(CatalogSpec::TwistedHeisenberg(vec![qi(1)])),
        Some(CatalogSpec::TwistedHeisenberg(vec![qi(2), qi(4)])),
        Some(CatalogSpec::TwistedHeisenberg(vec![q(1, 2), qi(3)])),
    ];
    for round in 0..30 {
        let mut pieces = Vec::new();
        if let Some(s) = &s_choices[round % s_choices.len()] {
            pieces.push(s.clone());
        }
        for _ in 0..r.gen_range(0..2) {
            pieces.push(CatalogSpec::So3);
        }
        let a = r.gen_range(0..3);
        if a > 0 {
            pieces.push(CatalogSpec::Abelian(a));
        }
        if pieces.is_empty() {
            pieces.push(CatalogSpec::Abelian(1));
        }
        let g = pieces_sum(&pieces);
        let (h, _) = common::scramble(&g, &mut r);
        let c = classify_decomposition(&h);
        let c = c.classified().unwrap_or_else(|| panic!("{pieces:?}: {c:?}"));
        let (so3, a, s) = expect(&pieces);
        assert_eq!(c.k_simple_dims, vec![3; so3], "{pieces:?}");
        assert_eq!(c.a_dim, a, "{pieces:?}");
        assert_eq!(c.s_kind, s, "{pieces:?}");
    }
}
