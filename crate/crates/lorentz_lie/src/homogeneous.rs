//! Curvature and holonomy of reductive homogeneous spaces `G/H` with
//! `g = h ⊕ m`, computed at the base point from the Lie algebra data.
//!
//! Elements of `m` are written in coordinates of the chosen basis of `m`.
//! The curvature tensor is `R(x,y,w,z) = ⟨R(x,y)w, z⟩` with
//! `R(x,y) = [Λ(x),Λ(y)] − Λ([x,y]_m) − ad_{[x,y]_h}` and
//! `Λ(x)y = ½[x,y]_m + U(x,y)`; with this orientation `R(x,y,y,x)` is the
//! numerator of the sectional curvature.

use nalgebra::DMatrix;
use num::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::forms::{ad_invariance_residual, SymBilinearForm};
use crate::lie_core::linalg::{congruence_diagonalize, fmt_q, is_zero_vec, span_basis, to_f64, unit};
use crate::lie_core::{LieAlgebra, QMat, Subspace, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomogeneousError {
    #[error("h and m do not span g as a direct sum")]
    NotComplement,
    #[error("h is not a subalgebra")]
    NotSubalgebra,
    #[error("[h, m] is not contained in m")]
    NotReductive,
    #[error("metric has size {found}, m has dimension {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("metric is not symmetric")]
    NotSymmetric,
    #[error("metric is degenerate")]
    DegenerateMetric,
    #[error("metric is not ad(h)-invariant (residual {0})")]
    NotIsotropyInvariant(String),
    #[error("metric is not ad-invariant (residual {0})")]
    NotAdInvariant(String),
    #[error("plane is degenerate")]
    DegeneratePlane,
    #[error("vector has length {found}, expected {expected}")]
    BadVector { expected: usize, found: usize },
}

/// A reductive homogeneous model `(g, h, m, ⟨·,·⟩)`. The metric is the Gram
/// matrix in the basis of `m`.
#[derive(Clone, Debug)]
pub struct ReductiveSpace {
    g: LieAlgebra,
    h: Subspace,
    m: Subspace,
    metric: QMat,
    metric_inv: QMat,
    /// `[e_i, e_j]_m` in m-coordinates.
    br_m: Vec<Vec<Vec<Q>>>,
    /// `[e_i, e_j]_h` as vectors of g.
    br_h: Vec<Vec<Vec<Q>>>,
    u: Vec<Vec<Vec<Q>>>,
    lambda_basis: Vec<QMat>,
    /// `(B_m | B_h)⁻¹`, splitting g-vectors into m- and h-coordinates.
    split: QMat,
}

impl ReductiveSpace {
    pub fn new(g: LieAlgebra, h: Subspace, m: Subspace, metric: QMat) -> Result<Self, HomogeneousError> {
        let n = g.dim();
        if h.ambient() != n || m.ambient() != n || h.dim() + m.dim() != n {
            return Err(HomogeneousError::NotComplement);
        }
        let combined = m.basis().hstack(h.basis());
        let split = combined.inverse().ok_or(HomogeneousError::NotComplement)?;
        if !g.is_subalgebra(&h) {
            return Err(HomogeneousError::NotSubalgebra);
        }
        if !m.contains_space(&g.bracket_spaces(&h, &m)) {
            return Err(HomogeneousError::NotReductive);
        }
        let k = m.dim();
        if metric.rows() != k || metric.cols() != k {
            return Err(HomogeneousError::SizeMismatch { expected: k, found: metric.rows() });
        }
        if !metric.is_symmetric() {
            return Err(HomogeneousError::NotSymmetric);
        }
        let metric_inv = if k == 0 { QMat::zeros(0, 0) } else { metric.inverse().ok_or(HomogeneousError::DegenerateMetric)? };
        let mut space = ReductiveSpace {
            g,
            h,
            m,
            metric,
            metric_inv,
            br_m: Vec::new(),
            br_h: Vec::new(),
            u: Vec::new(),
            lambda_basis: Vec::new(),
            split,
        };
        let res = space.isotropy_invariance_residual();
        if !res.is_zero() {
            return Err(HomogeneousError::NotIsotropyInvariant(fmt_q(&res)));
        }
        space.precompute();
        Ok(space)
    }

    /// The Lie group itself with a left-invariant metric: `h = 0`, `m = g`.
    pub fn group(g: LieAlgebra, form: &SymBilinearForm) -> Result<Self, HomogeneousError> {
        let n = g.dim();
        ReductiveSpace::new(g, Subspace::zero(n), Subspace::full(n), form.matrix().clone())
    }

    fn precompute(&mut self) {
        let k = self.m.dim();
        let mb = self.m.vectors();
        let mut br_m = vec![vec![Vec::new(); k]; k];
        let mut br_h = vec![vec![Vec::new(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let (a, b) = self.split_g(&self.g.br(&mb[i], &mb[j]));
                br_m[i][j] = a;
                br_h[i][j] = b;
            }
        }
        self.br_m = br_m;
        self.br_h = br_h;
        // 2⟨U(e_i,e_j), e_l⟩ = ⟨[e_l,e_i]_m, e_j⟩ + ⟨e_i, [e_l,e_j]_m⟩
        let half = Q::new(1.into(), 2.into());
        let mut u = vec![vec![Vec::new(); k]; k];
        for i in 0..k {
            for j in i..k {
                let rhs: Vec<Q> = (0..k)
                    .map(|l| self.ip_basis_left(&self.br_m[l][i], j) + self.ip_basis_left(&self.br_m[l][j], i))
                    .collect();
                let v: Vec<Q> = self.metric_inv.mul_vec(&rhs).iter().map(|x| x * &half).collect();
                u[i][j] = v.clone();
                u[j][i] = v;
            }
        }
        self.u = u;
        let mut lb = Vec::with_capacity(k);
        for i in 0..k {
            let cols: Vec<Vec<Q>> = (0..k)
                .map(|j| self.br_m[i][j].iter().zip(&self.u[i][j]).map(|(b, u)| b * &half + u).collect())
                .collect();
            lb.push(QMat::from_cols(k, &cols));
        }
        self.lambda_basis = lb;
    }

    fn ip_basis_left(&self, v: &[Q], j: usize) -> Q {
        v.iter().enumerate().fold(Q::zero(), |acc, (i, c)| acc + c * &self.metric[(i, j)])
    }

    /// Splits a vector of g into (m-coordinates, h-component as a g-vector).
    pub fn split_g(&self, v: &[Q]) -> (Vec<Q>, Vec<Q>) {
        let c = self.split.mul_vec(v);
        let k = self.m.dim();
        let hpart = self.h.basis().mul_vec(&c[k..]);
        (c[..k].to_vec(), hpart)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn h(&self) -> &Subspace {
        &self.h
    }

    pub fn m(&self) -> &Subspace {
        &self.m
    }

    pub fn metric(&self) -> &QMat {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// The g-vector with the given m-coordinates.
    pub fn embed(&self, x: &[Q]) -> Vec<Q> {
        self.m.basis().mul_vec(x)
    }

    pub fn ip(&self, x: &[Q], y: &[Q]) -> Q {
        self.metric.bilinear(x, y)
    }

    /// m-coordinates of a g-vector lying in m.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        let (a, b) = self.split_g(v);
        if is_zero_vec(&b) {
            Some(a)
        } else {
            None
        }
    }

    /// `max |⟨[W,X]_m,Y⟩ + ⟨X,[W,Y]_m⟩|` over `W ∈ h` and `X, Y ∈ m`.
    pub fn isotropy_invariance_residual(&self) -> Q {
        let mut worst = Q::zero();
        for w in self.h.vectors() {
            let a = self.ad_h_on_m(&w);
            let r = a.transpose().mul(&self.metric).add(&self.metric.mul(&a)).max_abs();
            if r > worst {
                worst = r;
            }
        }
        worst
    }

    /// `ad_w` restricted to m, for `w ∈ h`, in m-coordinates.
    pub fn ad_h_on_m(&self, w: &[Q]) -> QMat {
        let k = self.m.dim();
        let cols: Vec<Vec<Q>> = self.m.vectors().iter().map(|x| self.split_g(&self.g.br(w, x)).0).collect();
        QMat::from_cols(k, &cols)
    }

    fn bilinear_table(&self, table: &[Vec<Vec<Q>>], x: &[Q], y: &[Q], len: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); len];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (o, t) in out.iter_mut().zip(&table[i][j]) {
                    *o += &f * t;
                }
            }
        }
        out
    }

    /// `[x, y]_m` for m-coordinates.
    pub fn bracket_m(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        self.bilinear_table(&self.br_m, x, y, self.dim())
    }

    /// `[x, y]_h` as a g-vector.
    pub fn bracket_h(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        self.bilinear_table(&self.br_h, x, y, self.g.dim())
    }

    fn check(&self, x: &[Q]) -> Result<(), HomogeneousError> {
        if x.len() != self.dim() {
            return Err(HomogeneousError::BadVector { expected: self.dim(), found: x.len() });
        }
        Ok(())
    }

    pub fn lambda(&self, x: &[Q]) -> QMat {
        let k = self.dim();
        let mut out = QMat::zeros(k, k);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.lambda_basis[i].scale(c));
            }
        }
        out
    }
}

pub fn u_map(space: &ReductiveSpace, x: &[Q], y: &[Q]) -> Result<Vec<Q>, HomogeneousError> {
    space.check(x)?;
    space.check(y)?;
    Ok(space.bilinear_table(&space.u, x, y, space.dim()))
}

/// `(∇_X̃ Ỹ)(x₀) = −½[x,y]_m + U(x,y)`.
pub fn nabla_at_base(space: &ReductiveSpace, x: &[Q], y: &[Q]) -> Result<Vec<Q>, HomogeneousError> {
    let u = u_map(space, x, y)?;
    let b = space.bracket_m(x, y);
    let half = Q::new(1.into(), 2.into());
    Ok(u.iter().zip(&b).map(|(u, b)| u - b * &half).collect())
}

pub fn curvature_operator(space: &ReductiveSpace, x: &[Q], y: &[Q]) -> Result<QMat, HomogeneousError> {
    space.check(x)?;
    space.check(y)?;
    let lx = space.lambda(x);
    let ly = space.lambda(y);
    let b = space.bracket_m(x, y);
    let bh = space.bracket_h(x, y);
    Ok(lx.commutator(&ly).sub(&space.lambda(&b)).sub(&space.ad_h_on_m(&bh)))
}

/// `R(x,y,w,z) = ⟨R(x,y)w, z⟩`.
pub fn curvature_tensor(space: &ReductiveSpace, x: &[Q], y: &[Q], w: &[Q], z: &[Q]) -> Result<Q, HomogeneousError> {
    space.check(w)?;
    space.check(z)?;
    let op = curvature_operator(space, x, y)?;
    Ok(space.ip(&op.mul_vec(w), z))
}

/// Closed six-term expression for `R(x,y,y,x)`.
pub fn curvature_diag(space: &ReductiveSpace, x: &[Q], y: &[Q]) -> Result<Q, HomogeneousError> {
    let uxy = u_map(space, x, y)?;
    let uxx = u_map(space, x, x)?;
    let uyy = u_map(space, y, y)?;
    let b = space.bracket_m(x, y);
    let yx = space.bracket_m(y, x);
    let bh = space.bracket_h(x, y);
    let q34 = Q::new(3.into(), 4.into());
    let half = Q::new(1.into(), 2.into());
    let t1 = -(q34 * space.ip(&b, &b));
    let t2 = -(&half * space.ip(&space.bracket_m(x, &b), y));
    let t3 = -(&half * space.ip(&space.bracket_m(y, &yx), x));
    let hx = space.split_g(&space.g.br(&bh, &space.embed(x))).0;
    let t4 = space.ip(y, &hx);
    let t5 = space.ip(&uxy, &uxy);
    let t6 = -space.ip(&uxx, &uyy);
    Ok(t1 + t2 + t3 + t4 + t5 + t6)
}

/// Exact Ricci tensor `Ric(u,w) = Σ_j R(u,v_j,v_j,w)/⟨v_j,v_j⟩` over a
/// congruence-orthogonal basis `v_j`, so no square roots appear.
pub fn ricci_tensor(space: &ReductiveSpace) -> QMat {
    let k = space.dim();
    let (p, d) = congruence_diagonalize(&space.metric);
    let vs = p.columns();
    let mut ric = QMat::zeros(k, k);
    for a in 0..k {
        let ea = unit(k, a);
        let mut acc = vec![Q::zero(); k];
        for (v, dj) in vs.iter().zip(&d) {
            let col = curvature_operator(space, &ea, v).unwrap().mul_vec(v);
            for (o, c) in acc.iter_mut().zip(&col) {
                *o += c / dj;
            }
        }
        let row = space.metric.mul_vec(&acc);
        for (w, x) in row.into_iter().enumerate() {
            ric[(a, w)] = x;
        }
    }
    ric
}

/// Second, basis-free construction `Ric(u,w) = Σ g^{ab} R(u,e_a,e_b,w)`.
pub fn ricci_tensor_contracted(space: &ReductiveSpace) -> QMat {
    let k = space.dim();
    let mut ric = QMat::zeros(k, k);
    for a in 0..k {
        let ea = unit(k, a);
        for c in 0..k {
            let op = curvature_operator(space, &ea, &unit(k, c)).unwrap();
            for b in 0..k {
                let gcb = &space.metric_inv[(c, b)];
                if gcb.is_zero() {
                    continue;
                }
                let col = op.mul_vec(&unit(k, b));
                let g_col = space.metric.mul_vec(&col);
                for w in 0..k {
                    ric[(a, w)] += gcb * &g_col[w];
                }
            }
        }
    }
    ric
}

pub fn scalar_curvature(space: &ReductiveSpace) -> Q {
    scalar_from_ricci(space, &ricci_tensor(space))
}

pub fn scalar_from_ricci(space: &ReductiveSpace, ric: &QMat) -> Q {
    space.metric_inv.mul(ric).trace()
}

/// Pseudo-orthonormal basis (columns) and signs `ε_j`. Twisted catalog
/// groups with the normalized form use `(T−Z)/√2, (T+Z)/√2, X₁, Y₁, …`.
pub fn pseudo_orthonormal_basis(space: &ReductiveSpace) -> (DMatrix<f64>, Vec<i8>) {
    let k = space.dim();
    let labels = space.g.labels();
    let twisted = k >= 2
        && space.h.dim() == 0
        && labels.len() == k
        && labels[0] == "T"
        && labels[1] == "Z"
        && space.metric == crate::forms::twisted_lorentz_matrix((k - 2) / 2, &crate::forms::TwistedLorentzParams::normalized());
    if twisted {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut b = DMatrix::identity(k, k);
        b[(0, 0)] = r;
        b[(1, 0)] = -r;
        b[(0, 1)] = r;
        b[(1, 1)] = r;
        let mut eps = vec![1i8; k];
        eps[0] = -1;
        return (b, eps);
    }
    let (p, d) = congruence_diagonalize(&space.metric);
    let mut b = p.to_f64();
    let mut eps = Vec::with_capacity(k);
    for (j, dj) in d.iter().enumerate() {
        let s = to_f64(dj);
        let f = 1.0 / s.abs().sqrt();
        for r in 0..k {
            b[(r, j)] *= f;
        }
        eps.push(if dj.is_negative() { -1 } else { 1 });
    }
    (b, eps)
}

/// Floating Ricci tensor via the ε-weighted trace over
/// [`pseudo_orthonormal_basis`].
pub fn ricci_tensor_numeric(space: &ReductiveSpace) -> DMatrix<f64> {
    let k = space.dim();
    let (b, eps) = pseudo_orthonormal_basis(space);
    let g = space.metric.to_f64();
    let basis_ops: Vec<Vec<DMatrix<f64>>> = (0..k)
        .map(|a| (0..k).map(|c| curvature_operator(space, &unit(k, a), &unit(k, c)).unwrap().to_f64()).collect())
        .collect();
    let mut ric = DMatrix::zeros(k, k);
    for (j, e) in eps.iter().enumerate() {
        let v = b.column(j).into_owned();
        for a in 0..k {
            let mut op = DMatrix::zeros(k, k);
            for c in 0..k {
                op += &basis_ops[a][c] * v[c];
            }
            let gw = &g * (op * &v);
            for w in 0..k {
                ric[(a, w)] += *e as f64 * gw[w];
            }
        }
    }
    ric
}

pub fn sectional_curvature(space: &ReductiveSpace, v: &[Q], w: &[Q]) -> Result<Q, HomogeneousError> {
    space.check(v)?;
    space.check(w)?;
    let qd = space.ip(v, v) * space.ip(w, w) - space.ip(v, w) * space.ip(v, w);
    if qd.is_zero() {
        return Err(HomogeneousError::DegeneratePlane);
    }
    Ok(curvature_tensor(space, v, w, w, v)? / qd)
}

fn flatten(m: &QMat) -> Vec<Q> {
    m.entries().to_vec()
}

fn unflatten(k: usize, v: &[Q]) -> QMat {
    QMat::from_rows((0..k).map(|r| v[r * k..(r + 1) * k].to_vec()).collect())
}

/// Basis of the span of a set of `k × k` matrices.
pub fn matrix_span(k: usize, mats: &[QMat]) -> Vec<QMat> {
    let vecs: Vec<Vec<Q>> = mats.iter().map(flatten).collect();
    span_basis(k * k, &vecs).iter().map(|v| unflatten(k, v)).collect()
}

pub fn same_matrix_span(k: usize, a: &[QMat], b: &[QMat]) -> bool {
    let sa = Subspace::span(k * k, &a.iter().map(flatten).collect::<Vec<_>>());
    let sb = Subspace::span(k * k, &b.iter().map(flatten).collect::<Vec<_>>());
    sa.same_as(&sb)
}

/// `m₀ + [Λ(m), m₀] + [Λ(m), [Λ(m), m₀]] + …` with `m₀` spanned by the
/// curvature operators.
pub fn holonomy_algebra(space: &ReductiveSpace) -> Vec<QMat> {
    let k = space.dim();
    let mut gens = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let op = curvature_operator(space, &unit(k, i), &unit(k, j)).unwrap();
            if !op.is_zero() {
                gens.push(op);
            }
        }
    }
    let mut basis = matrix_span(k, &gens);
    let mut frontier = basis.clone();
    while !frontier.is_empty() {
        let mut cand = basis.clone();
        let before = basis.len();
        for l in &space.lambda_basis {
            for a in &frontier {
                let c = l.commutator(a);
                if !c.is_zero() {
                    cand.push(c);
                }
            }
        }
        basis = matrix_span(k, &cand);
        if basis.len() == before {
            break;
        }
        frontier = basis[before..].to_vec();
    }
    basis
}

/// `ad([g,g])` acting on g, for a bi-invariant metric.
pub fn holonomy_biinvariant(g: &LieAlgebra, metric: &SymBilinearForm) -> Result<Vec<QMat>, HomogeneousError> {
    let r = ad_invariance_residual(g, metric);
    if !r.is_zero() {
        return Err(HomogeneousError::NotAdInvariant(fmt_q(&r)));
    }
    if metric.matrix().rank() != g.dim() {
        return Err(HomogeneousError::DegenerateMetric);
    }
    let mats: Vec<QMat> = g.derived_algebra().vectors().iter().map(|v| g.ad_matrix(v).unwrap()).collect();
    Ok(matrix_span(g.dim(), &mats))
}

/// `true` when every matrix is skew for the metric: `Aᵀ G + G A = 0`.
pub fn is_metric_skew(space: &ReductiveSpace, a: &QMat) -> bool {
    a.transpose().mul(&space.metric).add(&space.metric.mul(a)).is_zero()
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    #[serde(serialize_with = "ser_qmat")]
    pub ricci: QMat,
    #[serde(serialize_with = "crate::forms::ser_q")]
    pub scal: Q,
    #[serde(serialize_with = "ser_opt_q")]
    pub einstein_ratio: Option<Q>,
    pub holonomy_dim: usize,
    #[serde(serialize_with = "ser_qmats")]
    pub holonomy_basis: Vec<QMat>,
}

pub(crate) fn ser_qmat<S: serde::Serializer>(m: &QMat, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.rows()))?;
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(fmt_q).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

fn ser_qmats<S: serde::Serializer>(ms: &[QMat], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(ms.len()))?;
    for m in ms {
        let rows: Vec<Vec<String>> = (0..m.rows()).map(|r| m.row(r).iter().map(fmt_q).collect()).collect();
        seq.serialize_element(&rows)?;
    }
    seq.end()
}

fn ser_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&fmt_q(v)),
        None => s.serialize_none(),
    }
}

/// `c` with `Ric = c·⟨·,·⟩`, if one exists.
pub fn einstein_ratio(space: &ReductiveSpace, ric: &QMat) -> Option<Q> {
    let k = space.dim();
    if k == 0 {
        return None;
    }
    let (r, c) = (0..k).flat_map(|r| (0..k).map(move |c| (r, c))).find(|&(r, c)| !space.metric[(r, c)].is_zero())?;
    let ratio = &ric[(r, c)] / &space.metric[(r, c)];
    if ric.sub(&space.metric.scale(&ratio)).is_zero() {
        Some(ratio)
    } else {
        None
    }
}

pub fn curvature_report(space: &ReductiveSpace) -> CurvatureReport {
    let ricci = ricci_tensor(space);
    let scal = scalar_from_ricci(space, &ricci);
    let einstein_ratio = einstein_ratio(space, &ricci);
    let holonomy_basis = holonomy_algebra(space);
    CurvatureReport { ricci, scal, einstein_ratio, holonomy_dim: holonomy_basis.len(), holonomy_basis }
}
