//! Symmetric bilinear forms on Lie algebras and the ad-invariant Lorentz
//! forms of twisted Heisenberg algebras.

use nalgebra::{DMatrix, DVector};
use num::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lie_core::linalg::{congruence_diagonalize, fmt_q, inertia, sqrt_q, to_f64};
use crate::lie_core::{LieAlgebra, QMat, Subspace, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form has size {found}, algebra has dimension {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("form is not ad-invariant (residual {0})")]
    NotAdInvariant(String),
    #[error("form is not Lorentzian (signature {0:?})")]
    NotLorentzian(Signature),
    #[error("alpha must be positive")]
    NonPositiveAlpha,
    #[error("needs numeric mode: {0}")]
    NeedsNumericMode(String),
    #[error("algebra is not of twisted Heisenberg shape: {0}")]
    NotTwistedShape(String),
    #[error("dimension {0} is odd")]
    OddDimension(usize),
    #[error("alternating form is degenerate")]
    DegenerateOmega,
    #[error("metric is not positive definite")]
    NotPositiveDefinite,
}

/// Symmetric matrix of a bilinear form in an algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymBilinearForm {
    matrix: QMat,
}

impl SymBilinearForm {
    pub fn new(matrix: QMat) -> Result<Self, FormError> {
        if !matrix.is_symmetric() {
            return Err(FormError::NotSymmetric);
        }
        Ok(SymBilinearForm { matrix })
    }

    pub fn zero(n: usize) -> Self {
        SymBilinearForm { matrix: QMat::zeros(n, n) }
    }

    pub fn matrix(&self) -> &QMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eval(&self, x: &[Q], y: &[Q]) -> Q {
        self.matrix.bilinear(x, y)
    }

    pub fn signature(&self) -> Signature {
        signature(self)
    }

    pub fn scaled(&self, s: &Q) -> Self {
        SymBilinearForm { matrix: self.matrix.scale(s) }
    }

    /// Gram matrix of the restriction to a subspace, in its basis.
    pub fn restrict(&self, v: &Subspace) -> QMat {
        self.matrix.congruent(v.basis())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_lorentzian(&self) -> bool {
        self.negative == 1 && self.zero == 0
    }
}

pub fn signature(form: &SymBilinearForm) -> Signature {
    let (positive, negative, zero) = inertia(&form.matrix);
    Signature { positive, negative, zero }
}

/// `max |b([W,X],Y) + b(X,[W,Y])|` over basis elements, i.e. the largest
/// entry of `ad_Wᵀ B + B ad_W`.
pub fn ad_invariance_residual(a: &LieAlgebra, form: &SymBilinearForm) -> Q {
    let acting: Vec<Vec<Q>> = (0..a.dim()).map(|i| a.basis(i)).collect();
    ad_invariance_residual_over(a, form, &acting)
}

/// Residual restricted to `W` ranging over the given elements.
pub fn ad_invariance_residual_over(a: &LieAlgebra, form: &SymBilinearForm, acting: &[Vec<Q>]) -> Q {
    assert_eq!(a.dim(), form.dim(), "form and algebra dimensions differ");
    let b = &form.matrix;
    let mut worst = Q::zero();
    for w in acting {
        let ad = a.ad_matrix(w).expect("element length matches algebra");
        let r = ad.transpose().mul(b).add(&b.mul(&ad)).max_abs();
        if r > worst {
            worst = r;
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedLorentzParams {
    #[serde(serialize_with = "ser_q")]
    pub alpha: Q,
    #[serde(serialize_with = "ser_q")]
    pub beta: Q,
}

pub(crate) fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

impl TwistedLorentzParams {
    pub fn new(alpha: Q, beta: Q) -> Result<Self, FormError> {
        if !alpha.is_positive() {
            return Err(FormError::NonPositiveAlpha);
        }
        Ok(TwistedLorentzParams { alpha, beta })
    }

    pub fn normalized() -> Self {
        TwistedLorentzParams { alpha: Q::one(), beta: Q::zero() }
    }
}

/// `d` for an algebra laid out as `(T, Z, X₁, Y₁, …)`.
pub fn twisted_rank(s: &LieAlgebra) -> Result<usize, FormError> {
    let n = s.dim();
    if n < 4 || n % 2 != 0 {
        return Err(FormError::NotTwistedShape(format!("dimension {n}")));
    }
    let l = s.labels();
    if l[0] != "T" || l[1] != "Z" {
        return Err(FormError::NotTwistedShape("basis must start with T, Z".into()));
    }
    Ok((n - 2) / 2)
}

pub fn twisted_lorentz_matrix(d: usize, p: &TwistedLorentzParams) -> QMat {
    let n = 2 * d + 2;
    let mut m = QMat::zeros(n, n);
    m[(0, 0)] = p.beta.clone();
    m[(0, 1)] = p.alpha.clone();
    m[(1, 0)] = p.alpha.clone();
    for i in 2..n {
        m[(i, i)] = p.alpha.clone();
    }
    m
}

pub fn make_twisted_lorentz(s: &LieAlgebra, p: &TwistedLorentzParams) -> Result<SymBilinearForm, FormError> {
    if !p.alpha.is_positive() {
        return Err(FormError::NonPositiveAlpha);
    }
    let d = twisted_rank(s)?;
    SymBilinearForm::new(twisted_lorentz_matrix(d, p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveredParams {
    pub params: TwistedLorentzParams,
    /// The caller's `T` had to be replaced by `−T` to make `α > 0`.
    pub t_flipped: bool,
}

pub fn recover_twisted_parameters(s: &LieAlgebra, form: &SymBilinearForm) -> Result<RecoveredParams, FormError> {
    twisted_rank(s)?;
    if form.dim() != s.dim() {
        return Err(FormError::SizeMismatch { expected: s.dim(), found: form.dim() });
    }
    let r = ad_invariance_residual(s, form);
    if !r.is_zero() {
        return Err(FormError::NotAdInvariant(fmt_q(&r)));
    }
    let sig = form.signature();
    if !sig.is_lorentzian() {
        return Err(FormError::NotLorentzian(sig));
    }
    let m = form.matrix();
    let alpha = m[(0, 1)].clone();
    let beta = m[(0, 0)].clone();
    if alpha.is_zero() {
        return Err(FormError::NonPositiveAlpha);
    }
    let t_flipped = alpha.is_negative();
    Ok(RecoveredParams { params: TwistedLorentzParams { alpha: alpha.abs(), beta }, t_flipped })
}

/// Automorphism `L` of the twisted algebra carrying the `(α, β)` form to the
/// normalized one: `L(T) = T − (β/2α) Z`, `L(Z) = Z/α`, `L(X_k) = X_k/√α`,
/// `L(Y_k) = Y_k/√α`. Columns are images of the canonical basis.
pub fn normalize_twisted_lorentz(d: usize, p: &TwistedLorentzParams) -> Result<QMat, FormError> {
    if !p.alpha.is_positive() {
        return Err(FormError::NonPositiveAlpha);
    }
    let root = sqrt_q(&p.alpha).ok_or_else(|| {
        FormError::NeedsNumericMode(format!("sqrt({}) is irrational", fmt_q(&p.alpha)))
    })?;
    let n = 2 * d + 2;
    let mut l = QMat::zeros(n, n);
    l[(0, 0)] = Q::one();
    l[(1, 0)] = -(&p.beta / (Q::from_integer(2.into()) * &p.alpha));
    l[(1, 1)] = Q::one() / &p.alpha;
    for i in 2..n {
        l[(i, i)] = Q::one() / &root;
    }
    Ok(l)
}

pub fn normalize_twisted_lorentz_numeric(d: usize, alpha: f64, beta: f64) -> Result<DMatrix<f64>, FormError> {
    if alpha <= 0.0 {
        return Err(FormError::NonPositiveAlpha);
    }
    let n = 2 * d + 2;
    let mut l = DMatrix::zeros(n, n);
    l[(0, 0)] = 1.0;
    l[(1, 0)] = -beta / (2.0 * alpha);
    l[(1, 1)] = 1.0 / alpha;
    for i in 2..n {
        l[(i, i)] = 1.0 / alpha.sqrt();
    }
    Ok(l)
}

/// Metric-orthonormal basis `b₁, …, b_{2d}` (as columns) with
/// `ω(b_j, b_k) = 0` unless `{j, k} = {2l−1, 2l}` and `ω(b_{2l−1}, b_{2l}) > 0`.
/// `SymmetricEigen` with a residual check; nalgebra occasionally returns
/// inaccurate vectors for clustered spectra, so a failed check is retried
/// after an orthogonal similarity.
fn symmetric_eigen(m: DMatrix<f64>) -> nalgebra::SymmetricEigen<f64, nalgebra::Dyn> {
    let n = m.nrows();
    let ok = |e: &nalgebra::SymmetricEigen<f64, nalgebra::Dyn>, m: &DMatrix<f64>| {
        (m * &e.eigenvectors - &e.eigenvectors * DMatrix::from_diagonal(&e.eigenvalues)).amax() <= 1e-12 * m.amax().max(f64::MIN_POSITIVE)
    };
    let e = nalgebra::SymmetricEigen::new(m.clone());
    if ok(&e, &m) {
        return e;
    }
    let v = DVector::from_fn(n, |i, _| 1.0 + ((i + 1) as f64).sqrt());
    let h = DMatrix::identity(n, n) - &v * v.transpose() * (2.0 / v.norm_squared());
    match nalgebra::SymmetricEigen::try_new(&h * &m * &h, 1e-15, 100_000) {
        Some(mut e2) => {
            e2.eigenvectors = &h * &e2.eigenvectors;
            e2
        }
        None => e,
    }
}

pub fn symplectic_orthogonal_basis(metric: &DMatrix<f64>, omega: &DMatrix<f64>) -> Result<DMatrix<f64>, FormError> {
    let n = metric.nrows();
    if n % 2 == 1 {
        return Err(FormError::OddDimension(n));
    }
    let chol = metric.clone().cholesky().ok_or(FormError::NotPositiveDefinite)?;
    let l = chol.l();
    let l_inv = l.clone().try_inverse().ok_or(FormError::NotPositiveDefinite)?;
    let to_orig = l_inv.transpose();
    // ω in a metric-orthonormal basis
    let a = &l_inv * omega * &to_orig;
    let scale = a.amax().max(1.0);
    if a.clone().determinant().abs() <= 1e-12 * scale.powi(n as i32) {
        return Err(FormError::DegenerateOmega);
    }
    let an = &a / a.amax();
    let eig = symmetric_eigen(&an * &an);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let mut chosen: Vec<DVector<f64>> = Vec::new();
    let mut out = DMatrix::zeros(n, n);
    for &i in &order {
        if chosen.len() == n {
            break;
        }
        let mut x = eig.eigenvectors.column(i).clone_owned();
        for c in &chosen {
            let p = c.dot(&x);
            x -= c * p;
        }
        if x.norm() < 1e-8 {
            continue;
        }
        x /= x.norm();
        let mut y = &a * &x;
        for c in &chosen {
            let p = c.dot(&y);
            y -= c * p;
        }
        let p = x.dot(&y);
        y -= &x * p;
        if y.norm() < 1e-12 {
            return Err(FormError::DegenerateOmega);
        }
        y /= y.norm();
        if x.dot(&(&a * &y)) < 0.0 {
            y = -y;
        }
        let k = chosen.len();
        out.set_column(k, &(&to_orig * &x));
        out.set_column(k + 1, &(&to_orig * &y));
        chosen.push(x);
        chosen.push(y);
    }
    Ok(out)
}

/// Output of [`recognize_twisted_structure`]; the basis columns are
/// `(T, Z, X₁, Y₁, …)` in the input algebra's coordinates and realize the
/// catalog table for `lambda`.
#[derive(Clone, Debug)]
pub struct TwistedRecognition {
    pub basis: DMatrix<f64>,
    pub lambda: Vec<f64>,
    pub alpha: f64,
    pub t_correction: DVector<f64>,
    /// Largest deviation of the induced table from the catalog table.
    pub table_residual: f64,
    /// All ratios `λ_j / λ_k` are rational (within tolerance).
    pub ratios_rational: bool,
    pub canonical_lambda: Option<Vec<Q>>,
}

/// Recognizes `g = ℝT ⋉ he_d` with an ad-invariant Lorentz form as a twisted
/// Heisenberg algebra. `t_index` marks the basis element playing `T`.
pub fn recognize_twisted_structure(g: &LieAlgebra, form: &SymBilinearForm, t_index: usize) -> Result<TwistedRecognition, FormError> {
    let n = g.dim();
    if form.dim() != n {
        return Err(FormError::SizeMismatch { expected: n, found: form.dim() });
    }
    let r = ad_invariance_residual(g, form);
    if !r.is_zero() {
        return Err(FormError::NotAdInvariant(fmt_q(&r)));
    }
    let sig = form.signature();
    if !sig.is_lorentzian() {
        return Err(FormError::NotLorentzian(sig));
    }
    let he = g.derived_algebra();
    if he.dim() + 1 != n || he.contains(&g.basis(t_index)) {
        return Err(FormError::NotTwistedShape("derived algebra must be a hyperplane missing T".into()));
    }
    let zline = g.bracket_spaces(&he, &he);
    if zline.dim() != 1 {
        return Err(FormError::NotTwistedShape("[he, he] must be a line".into()));
    }
    let z = zline.vectors().remove(0);
    let v0 = zline.complement_within(&he);
    let vb = v0.vectors();
    let dd = vb.len();
    if dd % 2 == 1 {
        return Err(FormError::OddDimension(dd));
    }
    // Z-coordinate of an element of he = V0 ⊕ ℝZ
    let mut zv = vb.clone();
    zv.push(z.clone());
    let split = QMat::from_cols(n, &zv);
    let z_coord = |x: &[Q]| -> Result<Q, FormError> {
        let c = crate::lie_core::linalg::solve(&split, x)
            .ok_or_else(|| FormError::NotTwistedShape("bracket leaves the derived algebra".into()))?;
        Ok(c[dd].clone())
    };
    let mut omega = DMatrix::zeros(dd, dd);
    for i in 0..dd {
        for j in 0..dd {
            let b = g.br(&vb[i], &vb[j]);
            omega[(i, j)] = to_f64(&z_coord(&b)?);
        }
    }
    let metric = form.restrict(&v0).to_f64();
    let sb = symplectic_orthogonal_basis(&metric, &omega)?;
    let vmat = QMat::from_cols(n, &vb).to_f64();
    let zf = DVector::from_fn(n, |i, _| to_f64(&z[i]));
    let gf = form.matrix().to_f64();
    let tf = table_f64(g);
    let brf = |x: &DVector<f64>, y: &DVector<f64>| -> DVector<f64> { bracket_with(&tf, n, x, y) };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..dd / 2 {
        let x = &vmat * sb.column(2 * k);
        let y = &vmat * sb.column(2 * k + 1);
        let w = (&omega * sb.column(2 * k + 1)).dot(&sb.column(2 * k));
        xs.push(x);
        ys.push(y / w);
    }
    // Z-coordinates of [T, X_k] and [T, Y_k]
    let t = DVector::from_fn(n, |i, _| if i == t_index { 1.0 } else { 0.0 });
    let split_svd = split.to_f64().svd(true, true);
    let zdot = |v: &DVector<f64>| -> f64 {
        let coords = split_svd.solve(v, 1e-12).expect("svd solve");
        coords[dd]
    };
    let mut corr = DVector::zeros(n);
    for k in 0..dd / 2 {
        let ak = zdot(&brf(&t, &xs[k]));
        let bk = zdot(&brf(&t, &ys[k]));
        corr += &ys[k] * ak - &xs[k] * bk;
    }
    let mut tp = &t + &corr;
    let mut alpha = tp.dot(&(&gf * &zf));
    if alpha.abs() < 1e-12 {
        return Err(FormError::NotLorentzian(sig));
    }
    if alpha < 0.0 {
        tp = -tp;
        alpha = -alpha;
    }
    let ip = |a: &DVector<f64>, b: &DVector<f64>| a.dot(&(&gf * b));
    // move X_k, Y_k into [T', he], the orthogonal complement of T' in he
    for v in xs.iter_mut().chain(ys.iter_mut()) {
        let c = ip(v, &tp) / alpha;
        *v -= &zf * c;
    }
    let mut lambda = Vec::new();
    let mut cols = vec![tp.clone(), zf.clone()];
    for k in 0..dd / 2 {
        let eta = (ip(&ys[k], &ys[k]) / ip(&xs[k], &xs[k])).powf(0.25);
        let x = &xs[k] * eta;
        let y = &ys[k] / eta;
        let lk = alpha / ip(&x, &x);
        let s = lk.sqrt();
        lambda.push(lk);
        cols.push(x * s);
        cols.push(y * s);
    }
    let basis = DMatrix::from_columns(&cols);
    let target = crate::algebra_zoo::twisted_table_f64(&lambda);
    let table_residual = table_residual_f64(g, &basis, &target);
    let canonical = crate::algebra_zoo::canonical_lambda_numeric(&lambda, 1e-9);
    Ok(TwistedRecognition {
        basis,
        lambda,
        alpha,
        t_correction: corr,
        table_residual,
        ratios_rational: canonical.is_some(),
        canonical_lambda: canonical,
    })
}

pub fn bracket_f64(g: &LieAlgebra, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    bracket_with(&table_f64(g), g.dim(), x, y)
}

fn table_f64(g: &LieAlgebra) -> Vec<(usize, usize, usize, f64)> {
    g.triples().iter().map(|(i, j, k, v)| (*i, *j, *k, to_f64(v))).collect()
}

fn bracket_with(t: &[(usize, usize, usize, f64)], n: usize, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(n);
    for &(i, j, k, v) in t {
        out[k] += v * (x[i] * y[j] - x[j] * y[i]);
    }
    out
}

/// Max deviation between the table induced by the basis columns and a dense
/// target table `target[i][j][k]`.
pub fn table_residual_f64(g: &LieAlgebra, basis: &DMatrix<f64>, target: &[Vec<Vec<f64>>]) -> f64 {
    let n = g.dim();
    let Some(inv) = basis.clone().try_inverse() else { return f64::INFINITY };
    let t = table_f64(g);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let b = bracket_with(&t, n, &basis.column(i).clone_owned(), &basis.column(j).clone_owned());
            let c = &inv * b;
            for k in 0..n {
                worst = worst.max((c[k] - target[i][j][k]).abs());
            }
        }
    }
    worst
}

/// Restriction of the form to `v`: positive semidefiniteness and kernel
/// dimension.
pub fn condition_star_check(form: &SymBilinearForm, v: &Subspace) -> (bool, usize) {
    let (_, neg, zero) = inertia(&form.restrict(v));
    (neg == 0, zero)
}

/// Returns `λ` with `b₁ = λ b₂` when every `b₂`-lightlike test vector is
/// `b₁`-isotropic. Works in a `b₂`-orthogonal basis `v₀, …, v_n` (`v₀`
/// timelike) through the polarized conditions `b₁(v₀, v_j) = 0`,
/// `b₁(v_j, v_k) = 0` and `b₁(v_j, v_j)/b₂(v_j, v_j) = b₁(v₀, v₀)/b₂(v₀, v₀)`.
pub fn lightcone_determined(b1: &SymBilinearForm, b2: &SymBilinearForm) -> Result<Option<Q>, FormError> {
    if b1.dim() != b2.dim() {
        return Err(FormError::SizeMismatch { expected: b2.dim(), found: b1.dim() });
    }
    let sig = b2.signature();
    if !sig.is_lorentzian() {
        return Err(FormError::NotLorentzian(sig));
    }
    let (p, d) = congruence_diagonalize(b2.matrix());
    let t = d.iter().position(|x| x.is_negative()).expect("one negative pivot");
    let c = b1.matrix().congruent(&p);
    let n = d.len();
    let lambda = &c[(t, t)] / &d[t];
    for j in 0..n {
        if j == t {
            continue;
        }
        if !c[(t, j)].is_zero() || &c[(j, j)] / &d[j] != lambda {
            return Ok(None);
        }
        for k in j + 1..n {
            if k != t && !c[(j, k)].is_zero() {
                return Ok(None);
            }
        }
    }
    Ok(Some(lambda))
}

/// Literal test-set version: evaluates `b₁` on `v₀ ± v_j` and
/// `√2 v₀ + v_j + v_k` in a `b₂`-orthonormal basis.
pub fn lightcone_determined_numeric(b1: &DMatrix<f64>, b2: &DMatrix<f64>, tol: f64) -> Result<Option<f64>, FormError> {
    let n = b2.nrows();
    let eig = nalgebra::SymmetricEigen::new(b2.clone());
    let neg: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] < -tol).collect();
    let zero = (0..n).filter(|&i| eig.eigenvalues[i].abs() <= tol).count();
    if neg.len() != 1 || zero != 0 {
        return Err(FormError::NotLorentzian(Signature { positive: n - neg.len() - zero, negative: neg.len(), zero }));
    }
    let t = neg[0];
    let v = |i: usize| eig.eigenvectors.column(i) / eig.eigenvalues[i].abs().sqrt();
    let q1 = |x: &DVector<f64>| x.dot(&(b1 * x));
    let scale = b1.amax().max(b2.amax()).max(1.0);
    let others: Vec<usize> = (0..n).filter(|&i| i != t).collect();
    let v0 = v(t);
    for &j in &others {
        for s in [1.0, -1.0] {
            if q1(&(&v0 + v(j) * s)).abs() > tol * scale {
                return Ok(None);
            }
        }
    }
    let r2 = 2f64.sqrt();
    for (a, &j) in others.iter().enumerate() {
        for &k in &others[a + 1..] {
            if q1(&(&v0 * r2 + v(j) + v(k))).abs() > tol * scale {
                return Ok(None);
            }
        }
    }
    Ok(Some(-q1(&v0)))
}
