//! Complete additive Jordan decomposition `X = E + H + N` and spectral
//! classification of matrices and adjoint operators.

use nalgebra::{Complex, DMatrix};
use num::Zero;
use serde::Serialize;

use crate::lie_core::poly::{is_squarefree, minimal_polynomial};
use crate::lie_core::{LieAlgebra, QMat, Q};

pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative tolerance for deciding that an eigenvalue is real or imaginary.
pub const SPECTRUM_TOL: f64 = 1e-7;

/// `E` semisimple with imaginary spectrum, `H` semisimple with real
/// spectrum, `N` nilpotent; all commute and sum to the input.
#[derive(Clone, Debug)]
pub struct JordanTriple {
    pub e: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub n: DMatrix<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralClass {
    Zero,
    Nilpotent,
    SemisimpleImaginary,
    SemisimpleReal,
    SemisimpleMixed,
    Mixed,
}

/// Groups eigenvalues into clusters of numerically equal values; returns
/// `(mean, multiplicity)`.
fn clusters(eig: &[Complex<f64>], scale: f64) -> Vec<(Complex<f64>, usize)> {
    let n = eig.len();
    let tol = 1e-4 * scale.max(1e-300);
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if label[i] != usize::MAX {
            continue;
        }
        label[i] = next;
        let mut stack = vec![i];
        while let Some(a) = stack.pop() {
            for b in 0..n {
                if label[b] == usize::MAX && (eig[a] - eig[b]).norm() <= tol {
                    label[b] = next;
                    stack.push(b);
                }
            }
        }
        next += 1;
    }
    (0..next)
        .map(|c| {
            let members: Vec<Complex<f64>> = (0..n).filter(|&i| label[i] == c).map(|i| eig[i]).collect();
            let sum: Complex<f64> = members.iter().sum();
            (sum / members.len() as f64, members.len())
        })
        .collect()
}

fn cpow(m: &DMatrix<Complex<f64>>, k: usize) -> DMatrix<Complex<f64>> {
    let mut out = DMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Complex eigenvalues via a real Schur form of the max-normalized matrix;
/// the zero matrix is handled directly since the iteration stalls on it.
pub fn eigenvalues(x: &DMatrix<f64>) -> Vec<Complex<f64>> {
    let n = x.nrows();
    let s = x.amax();
    if s == 0.0 || !s.is_finite() {
        return vec![Complex::new(0.0, 0.0); n];
    }
    let y = x / s;
    let schur = nalgebra::linalg::Schur::try_new(y.clone(), f64::EPSILON, 10_000).or_else(|| {
        let h = householder(n);
        nalgebra::linalg::Schur::try_new(&h * &y * &h, 1e-14, 100_000)
    });
    let schur = schur.expect("Schur iteration converges");
    schur.complex_eigenvalues().iter().map(|z| z * s).collect()
}

fn householder(n: usize) -> DMatrix<f64> {
    let v = nalgebra::DVector::from_iterator(n, (0..n).map(|i| 1.0 + (i as f64 + 1.0).sqrt()));
    DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / v.norm_squared())
}

pub fn jordan_complete(x: &DMatrix<f64>) -> JordanTriple {
    let n = x.nrows();
    assert_eq!(n, x.ncols(), "square matrix required");
    let zero = DMatrix::zeros(n, n);
    let scale = x.amax();
    if n == 0 || scale == 0.0 {
        return JordanTriple { e: zero.clone(), h: zero.clone(), n: zero };
    }
    let eig = eigenvalues(x);
    let groups = clusters(&eig, scale);
    let xc = x.map(|v| Complex::new(v, 0.0));
    let mut basis: Vec<nalgebra::DVector<Complex<f64>>> = Vec::new();
    let mut values: Vec<Complex<f64>> = Vec::new();
    for (mu, mult) in &groups {
        let shifted = &xc - DMatrix::identity(n, n) * *mu;
        let p = cpow(&shifted, *mult);
        let svd = p.svd(false, true);
        let vt = svd.v_t.expect("right singular vectors");
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap());
        for &k in idx.iter().take(*mult) {
            basis.push(vt.row(k).adjoint());
            values.push(*mu);
        }
    }
    let v = DMatrix::from_columns(&basis);
    let vinv = v.clone().try_inverse().expect("generalized eigenvectors span");
    let build = |f: &dyn Fn(Complex<f64>) -> Complex<f64>| -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, values.iter().map(|z| f(*z))));
        (&v * d * &vinv).map(|z| z.re)
    };
    let e = build(&|z| Complex::new(0.0, z.im));
    let h = build(&|z| Complex::new(z.re, 0.0));
    let nil = x - &e - &h;
    JordanTriple { e, h, n: nil }
}

fn spectrum_kind(eig: &[Complex<f64>]) -> SpectralClass {
    let rho = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = SPECTRUM_TOL * rho.max(1e-300);
    let real = eig.iter().all(|z| z.im.abs() <= tol);
    let imag = eig.iter().all(|z| z.re.abs() <= tol);
    match (real, imag) {
        (true, true) => SpectralClass::Zero,
        (true, false) => SpectralClass::SemisimpleReal,
        (false, true) => SpectralClass::SemisimpleImaginary,
        (false, false) => SpectralClass::SemisimpleMixed,
    }
}

/// Exact semisimplicity (squarefree minimal polynomial) combined with the
/// floating spectrum for the real/imaginary split.
pub fn spectral_class(x: &QMat) -> SpectralClass {
    if x.is_zero() {
        return SpectralClass::Zero;
    }
    let p = minimal_polynomial(x);
    if p.iter().take(p.len() - 1).all(|c| c.is_zero()) {
        return SpectralClass::Nilpotent;
    }
    if !is_squarefree(&p) {
        return SpectralClass::Mixed;
    }
    let eig = eigenvalues(&x.to_f64());
    match spectrum_kind(&eig) {
        SpectralClass::Zero => SpectralClass::Zero,
        k => k,
    }
}

/// Floating variant read off from the Jordan triple.
pub fn spectral_class_numeric(x: &DMatrix<f64>, tol: f64) -> SpectralClass {
    let t = jordan_complete(x);
    let s = x.amax().max(1e-300);
    let (e, h, n) = (t.e.amax() > tol * s, t.h.amax() > tol * s, t.n.amax() > tol * s);
    match (e, h, n) {
        (false, false, false) => SpectralClass::Zero,
        (false, false, true) => SpectralClass::Nilpotent,
        (true, false, false) => SpectralClass::SemisimpleImaginary,
        (false, true, false) => SpectralClass::SemisimpleReal,
        (true, true, false) => SpectralClass::SemisimpleMixed,
        _ => SpectralClass::Mixed,
    }
}

/// `ad_x` semisimple with purely imaginary spectrum. For algebras that are
/// not semisimple this is only a necessary condition for precompactness.
pub fn precompact_criterion(a: &LieAlgebra, x: &[Q]) -> bool {
    let ad = a.ad_matrix(x).expect("element length matches algebra");
    matches!(spectral_class(&ad), SpectralClass::Zero | SpectralClass::SemisimpleImaginary)
}
