//! Composite models `g = he_d^λ ⊕ k ⊕ a` with isotropy `h ⊆ ℝZ ⊕ k ⊕ a`,
//! and the split formulas for `U`, `R`, `Ric` and `scal` in terms of the
//! twisted Heisenberg group `S` and the Riemannian quotient
//! `N = (c, h, m′, (·,·))`, `c = ℝZ ⊕ k ⊕ a`.
//!
//! m-coordinates are `(T, Z, X₁, Y₁, …, X_d, Y_d, p₁, …, p_r)` where the
//! `p_i` form a basis of `p`, the `(·,·)`-orthogonal complement of `Z` in
//! `m′`. The quotient `N` uses m′-coordinates `(Z, p₁, …, p_r)`.

use num::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra_zoo::{catalog, CatalogSpec, ZooError};
use crate::forms::{make_twisted_lorentz, FormError, SymBilinearForm, TwistedLorentzParams};
use crate::homogeneous::{
    curvature_diag, holonomy_algebra, matrix_span, ricci_tensor, same_matrix_span, scalar_curvature, u_map,
    HomogeneousError, ReductiveSpace,
};
use crate::lie_core::linalg::{congruence_diagonalize, fmt_q, inertia, is_zero_vec, qi, unit};
use crate::lie_core::{direct_sum, LieAlgebra, QMat, Subspace, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwistedError {
    #[error(transparent)]
    Zoo(#[from] ZooError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Homogeneous(#[from] HomogeneousError),
    #[error("compact factor {0} is not supported (use so3 or an abelian algebra)")]
    UnsupportedFactor(String),
    #[error("tilt element {0} has length {1}, compact factor has dimension {2}")]
    TiltLength(usize, usize, usize),
    #[error("tilted isotropy is not a subalgebra")]
    NotSubalgebra,
    #[error("isotropy meets s")]
    MeetsS,
    #[error("tilt generators are linearly dependent")]
    DependentTilt,
    #[error("Riemannian metric on m′ must be a positive definite {0}×{0} matrix")]
    BadRiemann(usize),
    #[error("model is not special")]
    NotSpecial,
    #[error("split formula disagrees with the generic engine: {0}")]
    Mismatch(String),
}

/// Compact factor `k ⊕ a` and isotropy generators `K₀ + cZ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltSpec {
    pub compact_factor: CatalogSpec,
    pub tilt: Vec<(Vec<Q>, Q)>,
}

impl TiltSpec {
    pub fn untilted(compact_factor: CatalogSpec) -> Self {
        TiltSpec { compact_factor, tilt: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct TwistedProductModel {
    pub lambda: Vec<Q>,
    pub params: TwistedLorentzParams,
    /// `he_d^λ` with basis `(T, Z, X₁, Y₁, …)`.
    pub s: LieAlgebra,
    /// `c = ℝZ ⊕ k ⊕ a` with basis `(Z, k…)`.
    pub c: LieAlgebra,
    /// `g = s ⊕ k ⊕ a`.
    pub g: LieAlgebra,
    /// Isotropy inside `g`.
    pub h: Subspace,
    /// Basis of `p` in c-coordinates.
    pub p_basis: Vec<Vec<Q>>,
    /// `(Z, Z)`.
    pub zz: Q,
    /// The assembled model `(g, h, m, ⟨·,·⟩)`.
    pub space: ReductiveSpace,
    /// `S` with its bi-invariant metric.
    pub s_space: ReductiveSpace,
    /// `N = (c, h, m′, (·,·))`.
    pub n_space: ReductiveSpace,
}

fn kappa(spec: &CatalogSpec) -> Result<QMat, TwistedError> {
    match spec {
        CatalogSpec::So3 => Ok(catalog(spec)?.killing_form().matrix().scale(&qi(-1))),
        CatalogSpec::Abelian(n) => Ok(QMat::identity(*n)),
        other => Err(TwistedError::UnsupportedFactor(other.to_string())),
    }
}

/// Basis of the `κ`-orthogonal complement of the tilt directions inside
/// `k ⊕ a`, in compact-factor coordinates. Together with `Z` it spans `m′`
/// and fixes the basis in which `riemann_p` is given.
pub fn q_basis(tilt: &TiltSpec) -> Result<Vec<Vec<Q>>, TwistedError> {
    let k = kappa(&tilt.compact_factor)?;
    let n = k.rows();
    for (i, (v, _)) in tilt.tilt.iter().enumerate() {
        if v.len() != n {
            return Err(TwistedError::TiltLength(i, v.len(), n));
        }
    }
    let ks: Vec<Vec<Q>> = tilt.tilt.iter().map(|(v, _)| v.clone()).collect();
    let hk = Subspace::new(n, &ks).map_err(|_| TwistedError::DependentTilt)?;
    Ok(hk.form_orthogonal(&k).vectors())
}

/// Default `(·,·)` on `m′`: `(Z,Z) = 1`, `Z ⊥ q`, `κ` on `q`.
pub fn default_riemann(tilt: &TiltSpec) -> Result<QMat, TwistedError> {
    let k = kappa(&tilt.compact_factor)?;
    let q = q_basis(tilt)?;
    let gram = k.congruent(&QMat::from_cols(k.rows(), &q));
    Ok(QMat::identity(1).block_diag(&gram))
}

/// Builds and validates a model. `riemann_p` is the Gram matrix of `(·,·)`
/// on `m′` in the basis `(Z, q₁, …)` of [`q_basis`]; `None` uses
/// [`default_riemann`].
pub fn build_model(
    lambda: &[Q],
    params: &TwistedLorentzParams,
    tilt: &TiltSpec,
    riemann_p: Option<&QMat>,
) -> Result<TwistedProductModel, TwistedError> {
    let s = catalog(&CatalogSpec::TwistedHeisenberg(lambda.to_vec()))?;
    let s_form = make_twisted_lorentz(&s, params)?;
    let kf = catalog(&tilt.compact_factor)?;
    let kdim = kf.dim();
    let q = q_basis(tilt)?;
    let r = q.len();
    let riemann = match riemann_p {
        Some(m) => m.clone(),
        None => default_riemann(tilt)?,
    };
    if riemann.rows() != r + 1 || riemann.cols() != r + 1 || !riemann.is_symmetric() || inertia(&riemann) != (r + 1, 0, 0) {
        return Err(TwistedError::BadRiemann(r + 1));
    }

    let sd = s.dim();
    let g = direct_sum(&s, &kf).renamed(&format!("{} + {}", s.name(), kf.name()));
    let mut clabels = vec!["Z".to_string()];
    clabels.extend(kf.labels().iter().cloned());
    let c = direct_sum(&LieAlgebra::abelian_named("Z", vec!["Z".into()]), &kf).renamed("c");
    let c = c.change_basis(&QMat::identity(c.dim()), Some(clabels)).map_err(|_| TwistedError::NotSubalgebra)?;
    let cd = c.dim();
    let c_to_g = |v: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::zero(); g.dim()];
        out[1] = v[0].clone();
        for i in 0..kdim {
            out[sd + i] = v[1 + i].clone();
        }
        out
    };

    // isotropy in c-coordinates
    let hc: Vec<Vec<Q>> = tilt
        .tilt
        .iter()
        .map(|(k0, z)| {
            let mut v = vec![z.clone()];
            v.extend(k0.iter().cloned());
            v
        })
        .collect();
    let h_c = Subspace::new(cd, &hc).map_err(|_| TwistedError::DependentTilt)?;
    if !c.is_subalgebra(&h_c) {
        return Err(TwistedError::NotSubalgebra);
    }

    // m′ basis (Z, q) in c-coordinates, then p = Z^⊥ inside m′
    let zc = unit(cd, 0);
    let qc: Vec<Vec<Q>> = q
        .iter()
        .map(|v| {
            let mut w = vec![Q::zero()];
            w.extend(v.iter().cloned());
            w
        })
        .collect();
    let zz = riemann[(0, 0)].clone();
    let p_basis: Vec<Vec<Q>> = qc
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let f = &riemann[(0, i + 1)] / &zz;
            v.iter().zip(&zc).map(|(a, b)| a - &f * b).collect()
        })
        .collect();
    // change from (Z, q) to (Z, p)
    let mut change = QMat::identity(r + 1);
    for i in 0..r {
        change[(0, i + 1)] = -(&riemann[(0, i + 1)] / &zz);
    }
    let n_metric = riemann.congruent(&change);
    let mut mprime = vec![zc.clone()];
    mprime.extend(p_basis.iter().cloned());
    let n_space = ReductiveSpace::new(c.clone(), h_c.clone(), Subspace::new(cd, &mprime).map_err(|_| TwistedError::MeetsS)?, n_metric.clone())?;

    let s_space = ReductiveSpace::group(s.clone(), &s_form)?;

    let h_g: Vec<Vec<Q>> = hc.iter().map(|v| c_to_g(v)).collect();
    let h = Subspace::new(g.dim(), &h_g).map_err(|_| TwistedError::DependentTilt)?;
    let mut m_vecs: Vec<Vec<Q>> = (0..sd).map(|i| unit(g.dim(), i)).collect();
    m_vecs.extend(p_basis.iter().map(|v| c_to_g(v)));
    let m = Subspace::new(g.dim(), &m_vecs).map_err(|_| TwistedError::MeetsS)?;
    let s_sub = Subspace::new(g.dim(), &(0..sd).map(|i| unit(g.dim(), i)).collect::<Vec<_>>()).unwrap();
    if s_sub.intersection(&h).dim() != 0 {
        return Err(TwistedError::MeetsS);
    }
    let p_metric = n_metric.select(&(1..=r).collect::<Vec<_>>(), &(1..=r).collect::<Vec<_>>());
    let metric = s_form.matrix().block_diag(&p_metric);
    let space = ReductiveSpace::new(g.clone(), h.clone(), m, metric)?;

    Ok(TwistedProductModel {
        lambda: lambda.to_vec(),
        params: params.clone(),
        s,
        c,
        g,
        h,
        p_basis,
        zz,
        space,
        s_space,
        n_space,
    })
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

fn quarter(n: i64) -> Q {
    Q::new(n.into(), 4.into())
}

impl TwistedProductModel {
    pub fn d(&self) -> usize {
        self.lambda.len()
    }

    pub fn s_dim(&self) -> usize {
        self.s.dim()
    }

    pub fn p_dim(&self) -> usize {
        self.p_basis.len()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn x_s(&self, x: &[Q]) -> Vec<Q> {
        x[..self.s_dim()].to_vec()
    }

    pub fn x_p(&self, x: &[Q]) -> Vec<Q> {
        x[self.s_dim()..].to_vec()
    }

    pub fn x_t(&self, x: &[Q]) -> Q {
        x[0].clone()
    }

    pub fn x_z(&self, x: &[Q]) -> Q {
        x[1].clone()
    }

    /// m-coordinates of `(x_s, x_p)`.
    pub fn join(&self, xs: &[Q], xp: &[Q]) -> Vec<Q> {
        let mut v = xs.to_vec();
        v.extend(xp.iter().cloned());
        v
    }

    /// p-coordinates as m′-coordinates `(0, x_p)`.
    fn lift_p(&self, xp: &[Q]) -> Vec<Q> {
        let mut v = vec![Q::zero()];
        v.extend(xp.iter().cloned());
        v
    }

    /// m′-coordinates `(z, x_p)` as m-coordinates `z Z + x_p`.
    fn mprime_to_m(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        out[1] = v[0].clone();
        for (i, x) in v[1..].iter().enumerate() {
            out[self.s_dim() + i] = x.clone();
        }
        out
    }

    /// `⟨Z, x⟩ = α x_T`.
    fn z_pair(&self, x: &[Q]) -> Q {
        &self.params.alpha * self.x_t(x)
    }

    /// `[w, x]_Z` for p-coordinates.
    pub fn bracket_z(&self, w: &[Q], x: &[Q]) -> Q {
        self.n_space.bracket_m(&self.lift_p(w), &self.lift_p(x))[0].clone()
    }

    /// `[w, x]_m′` in m′-coordinates, for m′-coordinate inputs.
    fn br_mp(&self, w: &[Q], x: &[Q]) -> Vec<Q> {
        self.n_space.bracket_m(w, x)
    }

    fn rip(&self, a: &[Q], b: &[Q]) -> Q {
        self.n_space.ip(a, b)
    }

    fn un(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        u_map(&self.n_space, a, b).expect("m′ coordinates")
    }

    /// Orthogonal p-basis in p-coordinates with `(w_j, w_j)`.
    fn p_orthogonal(&self) -> Vec<(Vec<Q>, Q)> {
        let r = self.p_dim();
        let gram = self.n_space.metric().select(&(1..=r).collect::<Vec<_>>(), &(1..=r).collect::<Vec<_>>());
        let (pm, d) = congruence_diagonalize(&gram);
        pm.columns().into_iter().zip(d).collect()
    }
}

/// `2⟨V(X,Y), W⟩ = ⟨[W_p,X_p]_Z, Y_T⟩ + ⟨X_T, [W_p,Y_p]_Z⟩`; returns
/// p-coordinates.
pub fn v_map(model: &TwistedProductModel, x: &[Q], y: &[Q]) -> Vec<Q> {
    let r = model.p_dim();
    if r == 0 {
        return Vec::new();
    }
    let (xp, yp) = (model.x_p(x), model.x_p(y));
    let rhs: Vec<Q> = (0..r)
        .map(|l| {
            let w = unit(r, l);
            model.bracket_z(&w, &xp) * model.z_pair(y) + model.z_pair(x) * model.bracket_z(&w, &yp)
        })
        .collect();
    let gram = model.n_space.metric().select(&(1..=r).collect::<Vec<_>>(), &(1..=r).collect::<Vec<_>>());
    let inv = gram.inverse().expect("p metric is definite");
    inv.mul_vec(&rhs).iter().map(|c| c * half()).collect()
}

/// `[p, p]_Z = 0`.
pub fn is_special(model: &TwistedProductModel) -> bool {
    let r = model.p_dim();
    (0..r).all(|i| (i + 1..r).all(|j| model.bracket_z(&unit(r, i), &unit(r, j)).is_zero()))
}

/// `V ≡ 0`, checked on all basis pairs of m.
pub fn v_vanishes(model: &TwistedProductModel) -> bool {
    let n = model.dim();
    (0..n).all(|i| (i..n).all(|j| is_zero_vec(&v_map(model, &unit(n, i), &unit(n, j)))))
}

/// `U(X,Y) = U^N(X_p,Y_p) + V(X,Y)`, compared with the generic `U`.
pub fn u_decomposition(model: &TwistedProductModel, x: &[Q], y: &[Q]) -> Result<Vec<Q>, TwistedError> {
    let un = model.un(&model.lift_p(&model.x_p(x)), &model.lift_p(&model.x_p(y)));
    let mut out = model.mprime_to_m(&un);
    let v = v_map(model, x, y);
    for (i, c) in v.iter().enumerate() {
        out[model.s_dim() + i] += c;
    }
    let generic = u_map(&model.space, x, y)?;
    if generic != out {
        return Err(TwistedError::Mismatch(format!("U: split {:?} vs generic {:?}", out.iter().map(fmt_q).collect::<Vec<_>>(), generic.iter().map(fmt_q).collect::<Vec<_>>())));
    }
    Ok(out)
}

/// `R(X,Y,Y,X)` from the split formula.
#[allow(non_snake_case)]
pub fn curvature_R(model: &TwistedProductModel, x: &[Q], y: &[Q]) -> Q {
    let (xs, ys) = (model.x_s(x), model.x_s(y));
    let (xp, yp) = (model.lift_p(&model.x_p(x)), model.lift_p(&model.x_p(y)));
    let rs = curvature_diag(&model.s_space, &xs, &ys).unwrap();
    let rn = curvature_diag(&model.n_space, &xp, &yp).unwrap();
    let xy = model.br_mp(&xp, &yp);
    let yx = model.br_mp(&yp, &xp);
    let t3 = -(half() * model.br_mp(&xp, &xy)[0].clone() * model.z_pair(y));
    let t4 = -(half() * model.z_pair(x) * model.br_mp(&yp, &yx)[0].clone());
    let t5 = quarter(3) * &xy[0] * &xy[0] * &model.zz;
    let lift_v = |v: Vec<Q>| model.lift_p(&v);
    let vxy = lift_v(v_map(model, x, y));
    let vxx = lift_v(v_map(model, x, x));
    let vyy = lift_v(v_map(model, y, y));
    let uxy = model.un(&xp, &yp);
    let uxx = model.un(&xp, &xp);
    let uyy = model.un(&yp, &yp);
    let t6 = qi(2) * model.rip(&vxy, &uxy);
    let t7 = model.rip(&vxy, &vxy);
    let t8 = -model.rip(&vxx, &vyy);
    let t9 = -model.rip(&vxx, &uyy);
    let t10 = -model.rip(&uxx, &vyy);
    rs + rn + t3 + t4 + t5 + t6 + t7 + t8 + t9 + t10
}

/// `Ric(X,X)` from the split formula, with the sums over an orthonormal
/// p-basis taken over an orthogonal one and divided by `(w_j, w_j)`.
pub fn ricci_diag(model: &TwistedProductModel, ric_s: &QMat, ric_n: &QMat, x: &[Q]) -> Q {
    ricci_diag_with(model, ric_s, ric_n, x, &qi(1))
}

/// [`ricci_diag`] with a chosen coefficient `c` on
/// `Σ_j ⟨X_T, [U^N(X_p,W_j), W_j]_Z⟩`. Summing the curvature formula over an
/// orthonormal basis gives `c = 1`, since
/// `2(V(X,W_j), U^N(X_p,W_j)) = ⟨X_T, [U^N(X_p,W_j), W_j]_Z⟩`; the value `2`
/// disagrees with the generic engine once that sum is nonzero.
pub fn ricci_diag_with(model: &TwistedProductModel, ric_s: &QMat, ric_n: &QMat, x: &[Q], cross: &Q) -> Q {
    let xs = model.x_s(x);
    let xp = model.lift_p(&model.x_p(x));
    let zt = model.z_pair(x);
    let zc = unit(model.p_dim() + 1, 0);
    let mut out = ric_s.bilinear(&xs, &xs) + ric_n.bilinear(&xp, &xp);
    let uxz = model.un(&xp, &zc);
    out -= model.rip(&uxz, &uxz) / &model.zz;
    let basis = model.p_orthogonal();
    for (wj, nj) in &basis {
        let w = model.lift_p(wj);
        let inner = model.br_mp(&w, &xp);
        out -= half() * &zt * &model.br_mp(&w, &inner)[0] / nj;
        let xw = model.br_mp(&xp, &w)[0].clone();
        out += quarter(3) * &xw * &xw * &model.zz / nj;
        let u = model.un(&xp, &w);
        out += cross * &zt * &model.br_mp(&u, &w)[0] / nj;
        let uww = model.un(&w, &w);
        out -= &zt * &model.br_mp(&uww, &xp)[0] / nj;
        for (wk, nk) in &basis {
            let c = &zt * &model.br_mp(&model.lift_p(wk), &w)[0];
            out += quarter(1) * &c * &c / (nj * nk);
        }
    }
    out
}

/// Ricci matrix on m from the split formula, polarized off the diagonal.
pub fn ricci_specialized(model: &TwistedProductModel) -> QMat {
    ricci_specialized_with(model, &qi(1))
}

pub fn ricci_specialized_with(model: &TwistedProductModel, cross: &Q) -> QMat {
    let n = model.dim();
    let ric_s = ricci_tensor(&model.s_space);
    let ric_n = ricci_tensor(&model.n_space);
    let diag: Vec<Q> = (0..n).map(|i| ricci_diag_with(model, &ric_s, &ric_n, &unit(n, i), cross)).collect();
    let mut out = QMat::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = diag[i].clone();
        for j in i + 1..n {
            let s: Vec<Q> = (0..n).map(|k| if k == i || k == j { qi(1) } else { qi(0) }).collect();
            let v = (ricci_diag_with(model, &ric_s, &ric_n, &s, cross) - &diag[i] - &diag[j]) * half();
            out[(i, j)] = v.clone();
            out[(j, i)] = v;
        }
    }
    out
}

pub fn scal_specialized(model: &TwistedProductModel) -> Q {
    let mut out = scalar_curvature(&model.n_space);
    let zc = unit(model.p_dim() + 1, 0);
    let basis = model.p_orthogonal();
    for (wj, nj) in &basis {
        let w = model.lift_p(wj);
        let u = model.un(&w, &zc);
        out -= qi(2) / &model.zz * model.rip(&u, &u) / nj;
        for (wk, nk) in &basis {
            let c = model.br_mp(&w, &model.lift_p(wk))[0].clone();
            out += quarter(3) * &c * &c * &model.zz / (nj * nk);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropyVerdict {
    pub totally_isotropic: bool,
    /// First condition: largest entry of the difference of the two
    /// quadratic forms on p.
    #[serde(serialize_with = "crate::forms::ser_q")]
    pub condition_quadratic: Q,
    /// Second condition: largest Z-coefficient of
    /// `Σ_j [W_j,[W_j,X]_m′] − 2[U^N(X,W_j),W_j] + 2[U^N(W_j,W_j),X]` over a
    /// p-basis (the cross coefficient of [`ricci_diag`] doubled).
    #[serde(serialize_with = "crate::forms::ser_q")]
    pub condition_linear: Q,
    /// Direct check: the vector Ricci tensor maps into `ℝZ`.
    pub image_in_z: bool,
}

pub fn ricci_isotropy_check(model: &TwistedProductModel) -> Result<IsotropyVerdict, TwistedError> {
    let r = model.p_dim();
    let ric_n = ricci_tensor(&model.n_space);
    let zc = unit(r + 1, 0);
    let basis = model.p_orthogonal();
    // quadratic form q(X) = Ric^N(X,X) − (1/(Z,Z))(U^N(X,Z),U^N(X,Z)) + ¾Σ([X,W_j]_Z)²(Z,Z)
    let qf = |x: &[Q]| -> Q {
        let xp = model.lift_p(x);
        let u = model.un(&xp, &zc);
        let mut v = ric_n.bilinear(&xp, &xp) - model.rip(&u, &u) / &model.zz;
        for (wj, nj) in &basis {
            let c = model.br_mp(&xp, &model.lift_p(wj))[0].clone();
            v += quarter(3) * &c * &c * &model.zz / nj;
        }
        v
    };
    let mut quad = Q::zero();
    for i in 0..r {
        let ei = unit(r, i);
        let qi_ = qf(&ei);
        quad = quad.max(qi_.abs());
        for j in i + 1..r {
            let s: Vec<Q> = (0..r).map(|k| if k == i || k == j { qi(1) } else { qi(0) }).collect();
            let pol = (qf(&s) - &qi_ - qf(&unit(r, j))) * half();
            quad = quad.max(pol.abs());
        }
    }
    let mut lin = Q::zero();
    for i in 0..r {
        let xp = model.lift_p(&unit(r, i));
        let mut acc = Q::zero();
        for (wj, nj) in &basis {
            let w = model.lift_p(wj);
            let a = model.br_mp(&w, &model.br_mp(&w, &xp))[0].clone();
            let b = model.br_mp(&model.un(&xp, &w), &w)[0].clone();
            let c = model.br_mp(&model.un(&w, &w), &xp)[0].clone();
            acc += (a - qi(2) * b + qi(2) * c) / nj;
        }
        lin = lin.max(acc.abs());
    }
    let by_conditions = quad.is_zero() && lin.is_zero();

    let ric = ricci_tensor(&model.space);
    let inv = model.space.metric().inverse().expect("nondegenerate");
    let sharp = inv.mul(&ric);
    let n = model.dim();
    let image_in_z = (0..n).all(|row| row == 1 || (0..n).all(|col| sharp[(row, col)].is_zero()));
    if by_conditions != image_in_z {
        return Err(TwistedError::Mismatch(format!(
            "isotropy conditions give {by_conditions}, vector Ricci image check gives {image_in_z}"
        )));
    }
    Ok(IsotropyVerdict { totally_isotropic: image_in_z, condition_quadratic: quad, condition_linear: lin, image_in_z })
}

/// `ad(he_d)` on `s` together with `hol(N)` restricted to `p`, checked
/// against the generic holonomy of the full model.
pub fn holonomy_special(model: &TwistedProductModel) -> Result<Vec<QMat>, TwistedError> {
    if !is_special(model) {
        return Err(TwistedError::NotSpecial);
    }
    let n = model.dim();
    let sd = model.s_dim();
    let r = model.p_dim();
    let mut mats = Vec::new();
    for i in 1..sd {
        let ad = model.s.ad_matrix(&unit(sd, i)).unwrap();
        mats.push(ad.block_diag(&QMat::zeros(r, r)));
    }
    for a in holonomy_algebra(&model.n_space) {
        let idx: Vec<usize> = (1..=r).collect();
        let zero_col = (0..=r).all(|k| a[(k, 0)].is_zero()) && (0..=r).all(|k| a[(0, k)].is_zero());
        if !zero_col {
            return Err(TwistedError::Mismatch("hol(N) does not fix Z".into()));
        }
        mats.push(QMat::zeros(sd, sd).block_diag(&a.select(&idx, &idx)));
    }
    let basis = matrix_span(n, &mats);
    let generic = holonomy_algebra(&model.space);
    if !same_matrix_span(n, &basis, &generic) {
        return Err(TwistedError::Mismatch(format!("holonomy: split dimension {} vs generic {}", basis.len(), generic.len())));
    }
    Ok(basis)
}

/// `[X,Y]_m = [X_s,Y_s] + [X_p,Y_p]_m′` with commuting summands, on all
/// basis pairs.
pub fn decomposition_check(model: &TwistedProductModel) -> bool {
    let n = model.dim();
    let sd = model.s_dim();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (unit(n, i), unit(n, j));
            let lhs = model.space.bracket_m(&x, &y);
            let a = model.s.br(&model.x_s(&x), &model.x_s(&y));
            let a = model.join(&a, &vec![Q::zero(); n - sd]);
            let b = model.mprime_to_m(&model.br_mp(&model.lift_p(&model.x_p(&x)), &model.lift_p(&model.x_p(&y))));
            let sum: Vec<Q> = a.iter().zip(&b).map(|(u, v)| u + v).collect();
            if sum != lhs {
                return false;
            }
            let ga = model.space.embed(&a);
            let gb = model.space.embed(&b);
            if !is_zero_vec(&model.g.br(&ga, &gb)) {
                return false;
            }
        }
    }
    true
}

/// Oracle comparison of the split formulas with the generic engine.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub curvature_pairs: usize,
    pub curvature_ok: bool,
    pub u_ok: bool,
    pub ricci_ok: bool,
    pub scal_ok: bool,
    pub numeric_ricci_rel_err: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.curvature_ok && self.u_ok && self.ricci_ok && self.scal_ok && self.numeric_ricci_rel_err <= 1e-10
    }
}

pub fn oracle_compare(model: &TwistedProductModel, extra_pairs: &[(Vec<Q>, Vec<Q>)]) -> OracleReport {
    let n = model.dim();
    let mut pairs: Vec<(Vec<Q>, Vec<Q>)> = Vec::new();
    for i in 0..n {
        for j in i..n {
            pairs.push((unit(n, i), unit(n, j)));
        }
    }
    pairs.extend(extra_pairs.iter().cloned());
    let curvature_ok = pairs.iter().all(|(x, y)| curvature_R(model, x, y) == curvature_diag(&model.space, x, y).unwrap());
    let u_ok = pairs.iter().all(|(x, y)| u_decomposition(model, x, y).is_ok());
    let ric = ricci_specialized(model);
    let generic = ricci_tensor(&model.space);
    let ricci_ok = ric == generic;
    let scal_ok = scal_specialized(model) == scalar_curvature(&model.space);
    let num = crate::homogeneous::ricci_tensor_numeric(&model.space);
    let exact = ric.to_f64();
    let scale = exact.amax().max(1.0);
    let numeric_ricci_rel_err = (num - exact).amax() / scale;
    OracleReport { curvature_pairs: pairs.len(), curvature_ok, u_ok, ricci_ok, scal_ok, numeric_ricci_rel_err }
}

/// Wraps the generic metric on `s` as a form, for callers that need it.
pub fn s_form(model: &TwistedProductModel) -> SymBilinearForm {
    SymBilinearForm::new(model.s_space.metric().clone()).expect("symmetric")
}


fn pd_matrix(seed: u64, n: usize) -> QMat {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut a = QMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = Q::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into());
        }
    }
    a.transpose().mul(&a).add(&QMat::identity(n))
}

/// Named fixtures covering special and tilted models with `d ∈ {1, 2}`,
/// default and seeded random rational metrics.
pub fn fixtures() -> Vec<(String, TwistedProductModel)> {
    let l = |v: &[i64]| v.iter().map(|&x| qi(x)).collect::<Vec<Q>>();
    let p = |a: Q, b: Q| TwistedLorentzParams::new(a, b).unwrap();
    let so3 = CatalogSpec::So3;
    let tilt = |k: Vec<i64>, z: Q, spec: CatalogSpec| TiltSpec { compact_factor: spec, tilt: vec![(k.into_iter().map(qi).collect(), z)] };
    let q = |a: i64, b: i64| Q::new(a.into(), b.into());
    let cases: Vec<(&str, Vec<Q>, TwistedLorentzParams, TiltSpec, Option<QMat>)> = vec![
        ("he1(1)+so3", l(&[1]), TwistedLorentzParams::normalized(), TiltSpec::untilted(so3.clone()), None),
        ("he1(1)+so3, h=A1+Z", l(&[1]), TwistedLorentzParams::normalized(), tilt(vec![1, 0, 0], qi(1), so3.clone()), None),
        ("he2(1,2)+so3, random metric", l(&[1, 2]), p(qi(2), qi(1)), TiltSpec::untilted(so3.clone()), Some(pd_matrix(7, 4))),
        ("he2(1,2)+so3, h=A1+2Z", l(&[1, 2]), p(q(1, 2), qi(-1)), tilt(vec![1, 0, 0], qi(2), so3.clone()), Some(QMat::diag(&[qi(3), qi(5), qi(5)]))),
        ("he1(1)+a2, random metric", l(&[1]), p(qi(3), q(1, 3)), TiltSpec::untilted(CatalogSpec::Abelian(2)), Some(pd_matrix(11, 3))),
        ("he2(1,2)+a2, h=a1+Z", l(&[1, 2]), TwistedLorentzParams::normalized(), tilt(vec![1, 0], qi(1), CatalogSpec::Abelian(2)), Some(pd_matrix(13, 2))),
        ("he2(2,3)+so3, h=A3-Z/2", l(&[2, 3]), p(qi(1), qi(2)), tilt(vec![0, 0, 1], q(-1, 2), so3), Some(QMat::diag(&[q(1, 2), qi(2), qi(2)]))),
    ];
    cases
        .into_iter()
        .map(|(name, lam, params, t, r)| (name.to_string(), build_model(&lam, &params, &t, r.as_ref()).expect("fixture is valid")))
        .collect()
}
