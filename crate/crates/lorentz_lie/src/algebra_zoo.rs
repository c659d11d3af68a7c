//! Named algebras, the radical, Heisenberg extraction and the
//! `k ⊕ a ⊕ s` classifier.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::forms::{ad_invariance_residual, table_residual_f64, SymBilinearForm};
use crate::lie_core::linalg::{congruence_diagonalize, convergents, fmt_q, inertia, kernel, parse_q, qi, solve, sqrt_q, to_f64, unit};
use crate::lie_core::poly::{is_squarefree, minimal_polynomial, root_multiplicity, verified_rational_roots};
use crate::lie_core::{direct_sum, LieAlgebra, QMat, Subspace, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZooError {
    #[error("λ entries must be positive")]
    NonPositiveLambda,
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("form does not satisfy the preconditions: {0}")]
    BadForm(String),
    #[error("unknown catalog name {0:?}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CatalogSpec {
    Abelian(usize),
    Aff,
    Sl2,
    Heisenberg(usize),
    TwistedHeisenberg(#[serde(serialize_with = "ser_qs")] Vec<Q>),
    So3,
}

fn ser_qs<S: serde::Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&fmt_q(x))?;
    }
    seq.end()
}

impl CatalogSpec {
    pub fn dim(&self) -> usize {
        match self {
            CatalogSpec::Abelian(n) => *n,
            CatalogSpec::Aff => 2,
            CatalogSpec::Sl2 | CatalogSpec::So3 => 3,
            CatalogSpec::Heisenberg(d) => 2 * d + 1,
            CatalogSpec::TwistedHeisenberg(l) => 2 * l.len() + 2,
        }
    }
}

impl fmt::Display for CatalogSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogSpec::Abelian(n) => write!(f, "abelian({n})"),
            CatalogSpec::Aff => write!(f, "aff"),
            CatalogSpec::Sl2 => write!(f, "sl2"),
            CatalogSpec::So3 => write!(f, "so3"),
            CatalogSpec::Heisenberg(d) => write!(f, "he{d}"),
            CatalogSpec::TwistedHeisenberg(l) => {
                let s: Vec<String> = l.iter().map(fmt_q).collect();
                write!(f, "he{}^({})", l.len(), s.join(","))
            }
        }
    }
}

impl std::str::FromStr for CatalogSpec {
    type Err = ZooError;

    /// Accepts the `Display` forms: `sl2`, `so3`, `aff`, `abelian(n)`, `he2`,
    /// `he2^(1,3/2)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || ZooError::Parse(s.to_string());
        match t.as_str() {
            "sl2" => return Ok(CatalogSpec::Sl2),
            "so3" => return Ok(CatalogSpec::So3),
            "aff" => return Ok(CatalogSpec::Aff),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("abelian(").and_then(|r| r.strip_suffix(')')) {
            return rest.parse().map(CatalogSpec::Abelian).map_err(|_| bad());
        }
        let rest = t.strip_prefix("he").ok_or_else(bad)?;
        match rest.split_once('^') {
            None => rest.parse().map(CatalogSpec::Heisenberg).map_err(|_| bad()),
            Some((d, l)) => {
                let d: usize = d.parse().map_err(|_| bad())?;
                let inner = l.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
                let lam: Option<Vec<Q>> = inner.split(',').map(parse_q).collect();
                let lam = lam.ok_or_else(bad)?;
                if lam.len() != d {
                    return Err(bad());
                }
                Ok(CatalogSpec::TwistedHeisenberg(lam))
            }
        }
    }
}

fn labels(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn heis_labels(d: usize, with_t: bool) -> Vec<String> {
    let mut l = Vec::new();
    if with_t {
        l.push("T".to_string());
    }
    l.push("Z".to_string());
    for k in 1..=d {
        l.push(format!("X{k}"));
        l.push(format!("Y{k}"));
    }
    l
}

pub fn catalog(spec: &CatalogSpec) -> Result<LieAlgebra, ZooError> {
    let name = spec.to_string();
    let a = match spec {
        CatalogSpec::Abelian(n) => {
            LieAlgebra::abelian_named(&name, (1..=*n).map(|i| format!("a{i}")).collect())
        }
        CatalogSpec::Aff => LieAlgebra::new(&name, labels(&["X", "Y"]), vec![(0, 1, 1, qi(1))]).unwrap(),
        CatalogSpec::Sl2 => LieAlgebra::new(
            &name,
            labels(&["e", "f", "h"]),
            vec![(0, 1, 2, qi(1)), (2, 0, 0, qi(2)), (2, 1, 1, qi(-2))],
        )
        .unwrap(),
        CatalogSpec::So3 => LieAlgebra::new(
            &name,
            labels(&["A1", "A2", "A3"]),
            vec![(0, 1, 2, qi(1)), (1, 2, 0, qi(1)), (2, 0, 1, qi(1))],
        )
        .unwrap(),
        CatalogSpec::Heisenberg(d) => {
            if *d == 0 {
                return Err(ZooError::ZeroRank);
            }
            let t = (0..*d).map(|k| (1 + 2 * k, 2 + 2 * k, 0, qi(1))).collect();
            LieAlgebra::new(&name, heis_labels(*d, false), t).unwrap()
        }
        CatalogSpec::TwistedHeisenberg(lam) => {
            if lam.is_empty() {
                return Err(ZooError::ZeroRank);
            }
            if lam.iter().any(|l| !l.is_positive()) {
                return Err(ZooError::NonPositiveLambda);
            }
            let mut t = Vec::new();
            for (k, l) in lam.iter().enumerate() {
                let (x, y) = (2 + 2 * k, 3 + 2 * k);
                t.push((x, y, 1, l.clone()));
                t.push((0, x, y, l.clone()));
                t.push((0, y, x, -l.clone()));
            }
            LieAlgebra::new(&name, heis_labels(lam.len(), true), t).unwrap()
        }
    };
    Ok(a)
}

/// Dense `c[i][j][k]` for the twisted Heisenberg table with real `λ`.
pub fn twisted_table_f64(lambda: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let n = 2 * lambda.len() + 2;
    let mut c = vec![vec![vec![0.0; n]; n]; n];
    for (k, &l) in lambda.iter().enumerate() {
        let (x, y) = (2 + 2 * k, 3 + 2 * k);
        c[x][y][1] = l;
        c[y][x][1] = -l;
        c[0][x][y] = l;
        c[x][0][y] = -l;
        c[0][y][x] = -l;
        c[y][0][x] = l;
    }
    c
}

pub fn dense_table_f64(a: &LieAlgebra) -> Vec<Vec<Vec<f64>>> {
    let n = a.dim();
    let mut c = vec![vec![vec![0.0; n]; n]; n];
    for (i, j, k, v) in a.triples() {
        c[*i][*j][*k] = to_f64(v);
        c[*j][*i][*k] = -to_f64(v);
    }
    c
}

/// Radical as the Killing-orthogonal complement of `[g, g]`; checked to be a
/// solvable ideal.
pub fn radical(a: &LieAlgebra) -> Subspace {
    let k = a.killing_form();
    let r = a.derived_algebra().form_orthogonal(k.matrix());
    assert!(a.is_ideal(&r), "radical is not an ideal");
    let sub = a.subalgebra(&r, "rad").expect("ideal is a subalgebra");
    assert_eq!(sub.derived_series().last().map(|s| s.dim()), Some(0), "radical is not solvable");
    r
}

/// Sorted ascending and scaled to coprime positive integers.
pub fn canonical_lambda(lambda: &[Q]) -> Vec<Q> {
    let mut v = lambda.to_vec();
    v.sort();
    if v.is_empty() {
        return v;
    }
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()));
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let s = Q::new(g, l);
    v.into_iter().map(|x| x / &s).collect()
}

/// Canonical class of a real tuple whose ratios are rational within `tol`.
pub fn canonical_lambda_numeric(lambda: &[f64], tol: f64) -> Option<Vec<Q>> {
    let m = lambda.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(m > 0.0) {
        return None;
    }
    let mut out = Vec::new();
    for &l in lambda {
        let r = l / m;
        let c = convergents(r, 1_000_000)
            .into_iter()
            .find(|c| (to_f64(c) - r).abs() <= tol * r.max(1.0))?;
        out.push(c);
    }
    Some(canonical_lambda(&out))
}

/// Scale `a > 0` with `{λ_i} = {a η_i}` as multisets, if any.
pub fn twisted_iso_test(lambda: &[Q], eta: &[Q]) -> Option<Q> {
    if lambda.len() != eta.len() || lambda.is_empty() {
        return None;
    }
    let (mut l, mut e) = (lambda.to_vec(), eta.to_vec());
    l.sort();
    e.sort();
    if l[0].is_zero() || e[0].is_zero() {
        return None;
    }
    let a = &l[0] / &e[0];
    if !a.is_positive() {
        return None;
    }
    l.iter().zip(&e).all(|(x, y)| *x == &a * y).then_some(a)
}

#[derive(Clone, Debug)]
pub struct HeisenbergSplit {
    pub a_part: Subspace,
    pub h_part: Subspace,
    /// Columns `Z, X₁, Y₁, …` of the Heisenberg factor, or the single
    /// spanning vector when `n` is abelian.
    pub canonical_basis: QMat,
}

/// Darboux basis of `ω` on `v`, where `ω(u, w)` is read off from
/// `[u, w] = ω(u, w) Z`. Returns pairs `(X_k, Y_k)` with `ω(X_k, Y_k) = 1`.
fn darboux(v: &[Vec<Q>], omega: impl Fn(&[Q], &[Q]) -> Q) -> Option<Vec<(Vec<Q>, Vec<Q>)>> {
    use crate::lie_core::linalg::{vec_add, vec_scale, vec_sub};
    let mut rest: Vec<Vec<Q>> = v.to_vec();
    let mut pairs = Vec::new();
    while let Some(x) = rest.first().cloned() {
        let j = rest.iter().position(|w| !omega(&x, w).is_zero())?;
        let w = omega(&x, &rest[j]);
        let y = vec_scale(&rest[j], &(Q::one() / w));
        let mut next = Vec::new();
        for (i, u) in rest.iter().enumerate() {
            if i == 0 || i == j {
                continue;
            }
            let u2 = vec_add(&vec_sub(u, &vec_scale(&x, &omega(u, &y))), &vec_scale(&y, &omega(u, &x)));
            next.push(u2);
        }
        pairs.push((x, y));
        rest = next;
    }
    Some(pairs)
}

/// Splits a nilpotent `n` with an ad-invariant positive semidefinite form
/// (kernel of dimension at most one) into `a ⊕ h`, `h` Heisenberg or a line.
pub fn heisenberg_decompose(n: &LieAlgebra, form: &SymBilinearForm) -> Result<HeisenbergSplit, ZooError> {
    let dim = n.dim();
    if form.dim() != dim {
        return Err(ZooError::BadForm("size mismatch".into()));
    }
    if n.lower_central_series().last().map(|s| s.dim()) != Some(0) {
        return Err(ZooError::NotNilpotent);
    }
    if !ad_invariance_residual(n, form).is_zero() {
        return Err(ZooError::BadForm("not ad-invariant".into()));
    }
    let (_, neg, zero) = inertia(form.matrix());
    if neg > 0 || zero > 1 {
        return Err(ZooError::BadForm("not positive semidefinite with kernel of dimension ≤ 1".into()));
    }
    let ker = Subspace::span(dim, &kernel(form.matrix()));
    let derived = n.derived_algebra();
    if derived.dim() == 0 {
        let line = if ker.dim() == 1 { ker.vectors().remove(0) } else { unit(dim, 0) };
        let h_part = Subspace::span(dim, std::slice::from_ref(&line));
        let a_part = if ker.dim() == 1 {
            h_part.complement_within(&Subspace::full(dim))
        } else {
            h_part.form_orthogonal(form.matrix())
        };
        let canonical_basis = QMat::from_cols(dim, &[line]);
        return Ok(HeisenbergSplit { a_part, h_part, canonical_basis });
    }
    if derived.dim() != 1 || !ker.same_as(&derived) {
        return Err(ZooError::BadForm("kernel must equal [n, n]".into()));
    }
    let z = derived.vectors().remove(0);
    let center = n.center();
    let h_part = center.form_orthogonal(form.matrix());
    let a_part = derived.complement_within(&center);
    if h_part.dim() + a_part.dim() != dim || h_part.intersection(&a_part).dim() != 0 {
        return Err(ZooError::BadForm("orthogonal complement of the center is not a complement".into()));
    }
    let v = derived.complement_within(&h_part).vectors();
    let zi = z.iter().position(|c| !c.is_zero()).unwrap();
    let omega = |x: &[Q], y: &[Q]| &n.br(x, y)[zi] / &z[zi];
    let pairs = darboux(&v, omega).ok_or_else(|| ZooError::BadForm("h is not a Heisenberg algebra".into()))?;
    let mut cols = vec![z];
    for (x, y) in pairs {
        cols.push(x);
        cols.push(y);
    }
    Ok(HeisenbergSplit { a_part, h_part, canonical_basis: QMat::from_cols(dim, &cols) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum LambdaClass {
    Rational(#[serde(serialize_with = "ser_qs")] Vec<Q>),
    /// Ratios are irrational; normalized so the smallest entry is 1.
    Irrational(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SKind {
    Trivial,
    Aff,
    Heisenberg(usize),
    TwistedHeisenberg(LambdaClass),
    Sl2,
}

impl SKind {
    pub fn dim(&self) -> usize {
        match self {
            SKind::Trivial => 0,
            SKind::Aff => 2,
            SKind::Sl2 => 3,
            SKind::Heisenberg(d) => 2 * d + 1,
            SKind::TwistedHeisenberg(LambdaClass::Rational(l)) => 2 * l.len() + 2,
            SKind::TwistedHeisenberg(LambdaClass::Irrational(l)) => 2 * l.len() + 2,
        }
    }
}

impl fmt::Display for SKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SKind::Trivial => write!(f, "trivial"),
            SKind::Aff => write!(f, "aff"),
            SKind::Sl2 => write!(f, "sl2"),
            SKind::Heisenberg(d) => write!(f, "heisenberg({d})"),
            SKind::TwistedHeisenberg(LambdaClass::Rational(l)) => {
                let s: Vec<String> = l.iter().map(fmt_q).collect();
                write!(f, "twisted_heisenberg, canonical λ = ({})", s.join(","))
            }
            SKind::TwistedHeisenberg(LambdaClass::Irrational(l)) => {
                let s: Vec<String> = l.iter().map(|x| format!("{x:.9}")).collect();
                write!(f, "twisted_heisenberg, irrational λ ≈ ({})", s.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Exact(QMat),
    Numeric { basis: DMatrix<f64>, residual: f64 },
}

impl Certificate {
    pub fn is_exact(&self) -> bool {
        matches!(self, Certificate::Exact(_))
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        match self {
            Certificate::Exact(m) => m.to_f64(),
            Certificate::Numeric { basis, .. } => basis.clone(),
        }
    }
}

/// `g ≅ k ⊕ a ⊕ s`; the witness columns are ordered as the simple ideals of
/// `k`, then `a`, then the canonical basis of `s`.
#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub k_dim: usize,
    pub k_simple_dims: Vec<usize>,
    pub a_dim: usize,
    pub s_kind: SKind,
    pub witness: Certificate,
    /// The table the witness basis reproduces.
    pub target: LieAlgebra,
}

#[derive(Clone, Debug)]
pub enum Classification {
    Classified(ClassificationResult),
    NotInClassification { reason: String },
}

impl Classification {
    pub fn classified(&self) -> Option<&ClassificationResult> {
        match self {
            Classification::Classified(r) => Some(r),
            Classification::NotInClassification { .. } => None,
        }
    }
}

fn reject<T>(reason: impl Into<String>) -> Result<T, String> {
    Err(reason.into())
}

pub fn classify_decomposition(g: &LieAlgebra) -> Classification {
    match classify_inner(g) {
        Ok(r) => Classification::Classified(r),
        Err(reason) => Classification::NotInClassification { reason },
    }
}

/// Piece of the witness basis for `s`: either exact columns or columns with
/// floating scale factors.
enum SBasis {
    Exact(Vec<Vec<Q>>),
    Numeric(Vec<DVector<f64>>),
}

fn classify_inner(g: &LieAlgebra) -> Result<ClassificationResult, String> {
    let n = g.dim();
    let dinf = g.derived_series().pop().unwrap();
    let ideals = if dinf.dim() > 0 {
        let sub = g.subalgebra(&dinf, "D").unwrap();
        if sub.killing_form().matrix().rank() != dinf.dim() {
            return reject("perfect part of the derived series is not semisimple");
        }
        simple_ideals(g, &dinf)?
    } else {
        Vec::new()
    };
    let cent = centralizer(g, &dinf);
    if cent.dim() + dinf.dim() != n || cent.intersection(&dinf).dim() != 0 {
        return reject("semisimple part acts nontrivially on the radical");
    }
    let kill = g.killing_form();
    let mut compact = Vec::new();
    let mut noncompact = Vec::new();
    for i in ideals {
        let (p, _, _) = inertia(&kill.restrict(&i));
        if p == 0 {
            compact.push(i);
        } else {
            noncompact.push(i);
        }
    }
    let c_alg = g.subalgebra(&cent, "C").unwrap();
    let c_basis = cent.vectors();
    let lift = |v: &[Q]| -> Vec<Q> { cent.basis().mul_vec(v) };
    let (a_vecs, s_kind, s_basis): (Vec<Vec<Q>>, SKind, SBasis) = if !noncompact.is_empty() {
        if noncompact.len() > 1 {
            return reject("more than one noncompact simple ideal");
        }
        let i = noncompact.pop().unwrap();
        if i.dim() != 3 {
            return reject(format!("noncompact simple ideal of dimension {}", i.dim()));
        }
        if !c_alg.is_abelian() {
            return reject("sl2 together with a non-abelian radical");
        }
        (c_basis, SKind::Sl2, sl2_triple(g, &i)?)
    } else {
        let (a, kind, basis) = classify_radical(&c_alg)?;
        let a: Vec<Vec<Q>> = a.iter().map(|v| lift(v)).collect();
        let basis = match basis {
            SBasis::Exact(v) => SBasis::Exact(v.iter().map(|x| lift(x)).collect()),
            SBasis::Numeric(v) => {
                let cb = cent.basis().to_f64();
                SBasis::Numeric(v.iter().map(|x| &cb * x).collect())
            }
        };
        (a, kind, basis)
    };
    let mut k_cols: Vec<Vec<Q>> = Vec::new();
    let mut k_alg: Option<LieAlgebra> = None;
    let mut k_simple_dims = Vec::new();
    compact.sort_by_key(|s| s.dim());
    for i in &compact {
        k_cols.extend(i.vectors());
        k_simple_dims.push(i.dim());
        let piece = g.subalgebra(i, &format!("k{}", k_simple_dims.len())).unwrap();
        k_alg = Some(match k_alg {
            None => piece,
            Some(prev) => direct_sum(&prev, &piece),
        });
    }
    let a_dim = a_vecs.len();
    let s_alg = match &s_kind {
        SKind::Trivial => None,
        SKind::Aff => Some(catalog(&CatalogSpec::Aff).unwrap()),
        SKind::Sl2 => Some(catalog(&CatalogSpec::Sl2).unwrap()),
        SKind::Heisenberg(d) => Some(catalog(&CatalogSpec::Heisenberg(*d)).unwrap()),
        SKind::TwistedHeisenberg(LambdaClass::Rational(l)) => {
            Some(catalog(&CatalogSpec::TwistedHeisenberg(l.clone())).unwrap())
        }
        SKind::TwistedHeisenberg(LambdaClass::Irrational(_)) => None,
    };
    let mut target = k_alg.unwrap_or_else(|| LieAlgebra::abelian_named("0", Vec::new()));
    if a_dim > 0 {
        target = direct_sum(&target, &catalog(&CatalogSpec::Abelian(a_dim)).unwrap());
    }
    if let Some(s) = &s_alg {
        target = direct_sum(&target, s);
    }
    let witness = match s_basis {
        SBasis::Exact(s) => {
            let mut cols = k_cols;
            cols.extend(a_vecs);
            cols.extend(s);
            let w = QMat::from_cols(n, &cols);
            if let SKind::TwistedHeisenberg(LambdaClass::Irrational(l)) = &s_kind {
                numeric_certificate(g, &w.to_f64(), &target, l)?
            } else {
                let induced = g.change_basis(&w, None).map_err(|e| e.to_string())?;
                if induced.triples() != target.triples() {
                    return reject("internal: certificate table mismatch");
                }
                Certificate::Exact(w)
            }
        }
        SBasis::Numeric(s) => {
            let mut w = DMatrix::zeros(n, n);
            let mut j = 0;
            for c in k_cols.iter().chain(&a_vecs) {
                for i in 0..n {
                    w[(i, j)] = to_f64(&c[i]);
                }
                j += 1;
            }
            for c in &s {
                w.set_column(j, c);
                j += 1;
            }
            let l = match &s_kind {
                SKind::TwistedHeisenberg(LambdaClass::Irrational(l)) => l.clone(),
                _ => Vec::new(),
            };
            numeric_certificate(g, &w, &target, &l)?
        }
    };
    Ok(ClassificationResult { k_dim: k_simple_dims.iter().sum(), k_simple_dims, a_dim, s_kind, witness, target })
}

/// Target table for numeric certificates; an irrational twisted factor is
/// appended to `base` as a dense block. The table residual is accepted up to
/// `1e-10·cond(w)`.
fn numeric_certificate(g: &LieAlgebra, w: &DMatrix<f64>, base: &LieAlgebra, irr: &[f64]) -> Result<Certificate, String> {
    let n = g.dim();
    let mut t = vec![vec![vec![0.0; n]; n]; n];
    let b = dense_table_f64(base);
    let m = base.dim();
    for i in 0..m {
        for j in 0..m {
            t[i][j][..m].copy_from_slice(&b[i][j][..m]);
        }
    }
    if !irr.is_empty() {
        let tw = twisted_table_f64(irr);
        let s = tw.len();
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    t[m + i][m + j][m + k] = tw[i][j][k];
                }
            }
        }
    }
    let residual = table_residual_f64(g, w, &t);
    let sv = w.clone().singular_values();
    let cond = sv.max() / sv.min();
    if !(residual <= 1e-10 * cond.max(1.0)) {
        return reject(format!("internal: numeric certificate residual {residual:e}"));
    }
    Ok(Certificate::Numeric { basis: w.clone(), residual })
}

/// `{x ∈ g : [x, s] = 0}`.
pub fn centralizer(g: &LieAlgebra, s: &Subspace) -> Subspace {
    let n = g.dim();
    if s.dim() == 0 {
        return Subspace::full(n);
    }
    let mut rows = QMat::zeros(0, n);
    for v in s.vectors() {
        // [x, v] = −ad_v x
        rows = rows.vstack(&g.ad_matrix(&v).unwrap());
    }
    Subspace::span(n, &kernel(&rows))
}

/// Simple ideals of a semisimple ideal `d`, via eigenspaces of a random
/// element of the commutant of `ad(d)`. The commutant is computed from two
/// random generators of `d` when they generate it.
fn simple_ideals(g: &LieAlgebra, d: &Subspace) -> Result<Vec<Subspace>, String> {
    let sub = g.subalgebra(d, "D").unwrap();
    let m = sub.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let pair: Vec<Vec<Q>> = (0..2).map(|_| (0..m).map(|_| qi(rng.gen_range(-9..=9))).collect()).collect();
    let acting: Vec<QMat> = if generated_dim(&sub, &pair) == m {
        pair.iter().map(|x| sub.ad_matrix(x).unwrap()).collect()
    } else {
        (0..m).map(|i| sub.ad_basis(i).clone()).collect()
    };
    let mut rows = QMat::zeros(0, m * m);
    for a in &acting {
        let mut blk = QMat::zeros(m * m, m * m);
        // (B A − A B)_{rc}
        for r in 0..m {
            for c in 0..m {
                let row = r * m + c;
                for k in 0..m {
                    blk[(row, r * m + k)] += &a[(k, c)];
                    blk[(row, k * m + c)] -= &a[(r, k)];
                }
            }
        }
        rows = rows.vstack(&blk);
    }
    let comm = kernel(&rows);
    if comm.len() == 1 {
        return Ok(vec![d.clone()]);
    }
    let mut b = QMat::zeros(m, m);
    for v in &comm {
        let c = qi(rng.gen_range(1..=97));
        for r in 0..m {
            for k in 0..m {
                b[(r, k)] += &v[r * m + k] * &c;
            }
        }
    }
    let p = minimal_polynomial(&b);
    let eig = crate::spectral::eigenvalues(&b.to_f64());
    let guesses: Vec<f64> = eig.iter().map(|z| z.re).collect();
    let roots = verified_rational_roots(&p, &guesses);
    let total: usize = roots.iter().map(|r| root_multiplicity(&p, r)).sum();
    if total + 1 != p.len() {
        return reject("simple ideals are not defined over ℚ");
    }
    let mut out = Vec::new();
    for r in roots {
        let shifted = b.sub(&QMat::identity(m).scale(&r));
        let e: Vec<Vec<Q>> = kernel(&shifted).iter().map(|v| d.basis().mul_vec(v)).collect();
        out.push(Subspace::span(g.dim(), &e));
    }
    if out.len() != comm.len() || out.iter().map(|s| s.dim()).sum::<usize>() != m {
        return reject("simple ideals of complex type");
    }
    Ok(out)
}

/// Dimension of the subalgebra generated by `gens`.
fn generated_dim(a: &LieAlgebra, gens: &[Vec<Q>]) -> usize {
    let n = a.dim();
    let mut span: Vec<Vec<Q>> = Vec::new();
    let mut rank = 0;
    let mut frontier = gens.to_vec();
    while let Some(v) = frontier.pop() {
        let mut cand = span.clone();
        cand.push(v.clone());
        let r = QMat::from_cols(n, &cand).rank();
        if r == rank {
            continue;
        }
        rank = r;
        for w in &span {
            frontier.push(a.br(w, &v));
        }
        span.push(v);
        if rank == n {
            break;
        }
    }
    rank
}

/// Exact `(e, f, h)` in a 3-dimensional split simple ideal, falling back to
/// floating point when no small rational nilpotent is found.
fn sl2_triple(g: &LieAlgebra, ideal: &Subspace) -> Result<SBasis, String> {
    let kill = g.killing_form();
    let gram = kill.restrict(ideal);
    let (p, dg) = congruence_diagonalize(&gram);
    let basis = ideal.vectors();
    let to_g = |c: &[Q]| -> Vec<Q> { ideal.basis().mul_vec(c) };
    let range = 12i64;
    for x in -range..=range {
        for y in -range..=range {
            for z in 1..=range {
                let v = [qi(x), qi(y), qi(z)];
                let val = &dg[0] * &v[0] * &v[0] + &dg[1] * &v[1] * &v[1] + &dg[2] * &v[2] * &v[2];
                if !val.is_zero() {
                    continue;
                }
                let e = to_g(&p.mul_vec(&v));
                if let Some(t) = complete_triple(g, &basis, &e) {
                    return Ok(SBasis::Exact(t));
                }
            }
        }
    }
    numeric_sl2(g, ideal).map(SBasis::Numeric)
}

/// Solves for `h = [e, y]` with `[h, e] = 2e`, then `f` with `[e, f] = h`
/// and `[h, f] = −2f`.
fn complete_triple(g: &LieAlgebra, basis: &[Vec<Q>], e: &[Q]) -> Option<Vec<Vec<Q>>> {
    use crate::lie_core::linalg::{vec_scale, vec_sub};
    let n = g.dim();
    let m = basis.len();
    let be: Vec<Vec<Q>> = basis.iter().map(|b| g.br(e, b)).collect();
    let cols: Vec<Vec<Q>> = be.iter().map(|h| g.br(h, e)).collect();
    let y = solve(&QMat::from_cols(n, &cols), &vec_scale(e, &qi(2)))?;
    let mut h = vec![Q::zero(); n];
    for (c, v) in y.iter().zip(&be) {
        h = crate::lie_core::linalg::vec_add(&h, &vec_scale(v, c));
    }
    // [e, f] = h and [h, f] + 2f = 0 stacked
    let mut a = QMat::zeros(2 * n, m);
    let mut rhs = vec![Q::zero(); 2 * n];
    for (j, b) in basis.iter().enumerate() {
        let c1 = g.br(e, b);
        let c2 = crate::lie_core::linalg::vec_add(&g.br(&h, b), &vec_scale(b, &qi(2)));
        for i in 0..n {
            a[(i, j)] = c1[i].clone();
            a[(n + i, j)] = c2[i].clone();
        }
    }
    rhs[..n].clone_from_slice(&h);
    let fc = solve(&a, &rhs)?;
    let mut f = vec![Q::zero(); n];
    for (c, b) in fc.iter().zip(basis) {
        f = crate::lie_core::linalg::vec_add(&f, &vec_scale(b, c));
    }
    let ok = g.br(&h, e) == vec_scale(e, &qi(2))
        && vec_sub(&g.br(&h, &f), &vec_scale(&f, &qi(-2))).iter().all(|x| x.is_zero())
        && g.br(e, &f) == h;
    ok.then(|| vec![e.to_vec(), f, h])
}

fn numeric_sl2(g: &LieAlgebra, ideal: &Subspace) -> Result<Vec<DVector<f64>>, String> {
    let n = g.dim();
    let kill = g.killing_form();
    let (p, dg) = congruence_diagonalize(&kill.restrict(ideal));
    let i = dg.iter().position(|x| x.is_positive()).ok_or("no hyperbolic element")?;
    let x = ideal.basis().mul_vec(&p.col(i));
    let t = (to_f64(&dg[i]) / 8.0).sqrt();
    let col = |v: &[Q]| DVector::from_fn(n, |r, _| to_f64(&v[r]));
    let h = col(&x) / t;
    let ib = ideal.basis().to_f64();
    let ad_h = g.ad_matrix(&x).unwrap().to_f64() / t;
    // ad_h restricted to the ideal, in ideal coordinates
    let pinv = ib.clone().pseudo_inverse(1e-12).map_err(|e| e.to_string())?;
    let r = &pinv * &ad_h * &ib;
    let eigvec = |mu: f64| -> DVector<f64> {
        let shifted = &r - DMatrix::identity(3, 3) * mu;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.unwrap();
        let k = (0..3).min_by(|&a, &b| svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap()).unwrap();
        &ib * vt.row(k).transpose()
    };
    let e = eigvec(2.0);
    let v = eigvec(-2.0);
    let ev = crate::forms::bracket_f64(g, &e, &v);
    let beta = ev.dot(&h) / h.dot(&h);
    let f = v / beta;
    Ok(vec![e, f, h])
}

/// Classifies a radical-plus-abelian algebra `C` (no semisimple part) as
/// `a ⊕ s`, returning `a`, the kind of `s` and its canonical basis, all in
/// `C`'s coordinates.
fn classify_radical(c: &LieAlgebra) -> Result<(Vec<Vec<Q>>, SKind, SBasis), String> {
    let n = c.dim();
    let full = Subspace::full(n);
    let der = c.derived_algebra();
    let center = c.center();
    match der.dim() {
        0 => Ok((full.vectors(), SKind::Trivial, SBasis::Exact(Vec::new()))),
        1 => {
            let y = der.vectors().remove(0);
            if center.contains(&y) {
                let v = center.complement_within(&full).vectors();
                let yi = y.iter().position(|x| !x.is_zero()).unwrap();
                let omega = |a: &[Q], b: &[Q]| &c.br(a, b)[yi] / &y[yi];
                let pairs = darboux(&v, omega).ok_or("degenerate Heisenberg form")?;
                let a = der.complement_within(&center).vectors();
                let mut s = vec![y];
                let d = pairs.len();
                for (x, yy) in pairs {
                    s.push(x);
                    s.push(yy);
                }
                Ok((a, SKind::Heisenberg(d), SBasis::Exact(s)))
            } else {
                let mut x = None;
                for i in 0..n {
                    let b = c.br(&unit(n, i), &y);
                    let Some(f) = crate::lie_core::is_multiple(&b, &y) else {
                        if b.iter().all(|v| v.is_zero()) {
                            continue;
                        }
                        return reject("[C, Y] is not contained in ℝY");
                    };
                    x = Some(crate::lie_core::linalg::vec_scale(&unit(n, i), &(Q::one() / f)));
                    break;
                }
                let x = x.unwrap();
                if center.dim() + 2 != n {
                    return reject("radical is not aff ⊕ abelian");
                }
                Ok((center.vectors(), SKind::Aff, SBasis::Exact(vec![x, y])))
            }
        }
        _ => twisted_radical(c, &der, &center),
    }
}

fn twisted_radical(c: &LieAlgebra, nil: &Subspace, center: &Subspace) -> Result<(Vec<Vec<Q>>, SKind, SBasis), String> {
    use crate::lie_core::linalg::{vec_add, vec_scale};
    let n = c.dim();
    let zl = c.bracket_spaces(nil, nil);
    if zl.dim() != 1 {
        return reject("the derived algebra of [r, r] is not one-dimensional");
    }
    let z = zl.vectors().remove(0);
    if !center.contains(&z) || center.intersection(nil).dim() != 1 {
        return reject("derived algebra is not Heisenberg with central Z");
    }
    let nz = nil.sum(center);
    if nz.dim() + 1 != n {
        return reject("radical is not ℝT ⋉ (he ⊕ a)");
    }
    let t = nz.complement_within(&Subspace::full(n)).vectors().remove(0);
    let a = zl.complement_within(center).vectors();
    let v0 = zl.complement_within(nil).vectors();
    let dd = v0.len();
    let mut split = v0.clone();
    split.push(z.clone());
    let sm = QMat::from_cols(n, &split);
    let coords = |x: &[Q]| solve(&sm, x);
    let mut amat = QMat::zeros(dd, dd);
    let mut phi = vec![Q::zero(); dd];
    let mut omega = QMat::zeros(dd, dd);
    for j in 0..dd {
        let cj = coords(&c.br(&t, &v0[j])).ok_or("ad_T leaves the nilradical")?;
        for i in 0..dd {
            amat[(i, j)] = cj[i].clone();
        }
        phi[j] = cj[dd].clone();
        for i in 0..dd {
            omega[(i, j)] = coords(&c.br(&v0[i], &v0[j])).ok_or("bracket leaves the nilradical")?[dd].clone();
        }
    }
    // T' = T + w with ω(w, x) = −φ(x)
    let wc = solve(&omega.transpose(), &vec_scale(&phi, &qi(-1))).ok_or("degenerate ω")?;
    let mut tp = t.clone();
    for (ci, v) in wc.iter().zip(&v0) {
        tp = vec_add(&tp, &vec_scale(v, ci));
    }
    if !is_squarefree(&minimal_polynomial(&amat)) {
        return reject("ad_T is not semisimple");
    }
    let a2 = amat.mul(&amat);
    let p2 = minimal_polynomial(&a2);
    let guesses: Vec<f64> = crate::spectral::eigenvalues(&a2.to_f64()).iter().map(|z| z.re).collect();
    let mus = verified_rational_roots(&p2, &guesses);
    if mus.len() + 1 != p2.len() {
        return reject("eigenvalues of ad_T² are not rational");
    }
    if mus.iter().any(|m| !m.is_negative()) {
        return reject("ad_T has a real or zero eigenvalue on the Heisenberg part");
    }
    let mut mus = mus;
    mus.sort_by(|x, y| y.cmp(x));
    // eigenspaces of A², each carrying ν-pairs
    let om = |x: &[Q], y: &[Q]| omega.bilinear(x, y);
    let mut blocks: Vec<(Q, Vec<(Vec<Q>, Vec<Q>, Q)>)> = Vec::new();
    let mut sign: Option<bool> = None;
    for mu in &mus {
        let e = kernel(&a2.sub(&QMat::identity(dd).scale(mu)));
        let nu_sq = -mu.clone();
        let mut space = e;
        let mut pairs = Vec::new();
        while !space.is_empty() {
            let x = space
                .iter()
                .find(|x| !om(x, &amat.mul_vec(x)).is_zero())
                .cloned()
                .or_else(|| {
                    (0..space.len())
                        .flat_map(|i| (i + 1..space.len()).map(move |j| (i, j)))
                        .map(|(i, j)| vec_add(&space[i], &space[j]))
                        .find(|x| !om(x, &amat.mul_vec(x)).is_zero())
                })
                .ok_or("isotropic eigenspace")?;
            let ax = amat.mul_vec(&x);
            let qx = om(&x, &ax);
            let pos = qx.is_positive();
            if *sign.get_or_insert(pos) != pos {
                return reject("ad_T rotates Heisenberg planes in opposite senses");
            }
            // ω-complement of span{x, Ax} inside the eigenspace
            let rows = QMat::from_rows(vec![omega.transpose().mul_vec(&x), omega.transpose().mul_vec(&ax)]);
            let basis_e = QMat::from_cols(dd, &space);
            let k = kernel(&rows.mul(&basis_e));
            let rest: Vec<Vec<Q>> = k.iter().map(|v| basis_e.mul_vec(v)).collect();
            pairs.push((x, ax, qx));
            space = rest;
        }
        blocks.push((nu_sq, pairs));
    }
    let flip = sign == Some(false);
    // ν-ratios
    let nu0_sq = blocks[0].0.clone();
    let ratios: Vec<Option<Q>> = blocks.iter().map(|(ns, _)| sqrt_q(&(ns / &nu0_sq))).collect();
    let lifted = |v: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (ci, b) in v.iter().zip(&v0) {
            out = vec_add(&out, &vec_scale(b, ci));
        }
        out
    };
    let s_t = if flip { vec_scale(&tp, &qi(-1)) } else { tp.clone() };
    if ratios.iter().all(|r| r.is_some()) {
        let raw: Vec<Q> = blocks
            .iter()
            .zip(&ratios)
            .flat_map(|((_, pairs), r)| std::iter::repeat(r.clone().unwrap()).take(pairs.len()))
            .collect();
        let lam = canonical_lambda(&raw);
        // scale: λ_k = s ν_k, where s = λ_min / ν_min
        let lam_min = lam[0].clone();
        let nu0 = sqrt_q(&nu0_sq);
        // pairs in canonical (ascending λ) order
        let mut ordered: Vec<(Q, Vec<Q>, Vec<Q>, Q)> = Vec::new();
        for ((_, pairs), r) in blocks.iter().zip(&ratios) {
            let lk = &lam_min * r.as_ref().unwrap();
            for (x, ax, qx) in pairs {
                ordered.push((lk.clone(), x.clone(), ax.clone(), qx.clone()));
            }
        }
        ordered.sort_by(|a, b| a.0.cmp(&b.0));
        // X = x, Y = ±Ax/ν, [X, Y] = w Z with w = |q|/ν; X* = tX, Y* = tY,
        // Z* = ζ Z, t² = λ ζ / w = λ ζ ν / |q|.
        let s_kind = SKind::TwistedHeisenberg(LambdaClass::Rational(lam.clone()));
        let exact = nu0.as_ref().and_then(|nu0| {
            let sc = &lam_min / nu0;
            let nu_of = |lk: &Q| lk / &sc;
            let (l0, _, _, q0) = &ordered[0];
            let zeta = &q0.abs() / (l0 * nu_of(l0));
            let mut cols = vec![vec_scale(&s_t, &sc), vec_scale(&z, &zeta)];
            for (lk, x, ax, qx) in &ordered {
                let nu = nu_of(lk);
                let tk = sqrt_q(&(lk * &zeta * &nu / qx.abs()))?;
                let sgn = if flip { qi(-1) } else { qi(1) };
                cols.push(vec_scale(&lifted(x), &tk));
                cols.push(vec_scale(&lifted(ax), &(&tk * &sgn / &nu)));
            }
            Some(cols)
        });
        if let Some(cols) = exact {
            let mut all = a.clone();
            all.extend(cols);
            let w = QMat::from_cols(n, &all);
            let induced = c.change_basis(&w, None).ok();
            let mut target = catalog(&CatalogSpec::TwistedHeisenberg(lam.clone())).unwrap();
            if !a.is_empty() {
                target = direct_sum(&catalog(&CatalogSpec::Abelian(a.len())).unwrap(), &target);
            }
            if induced.map(|i| i.triples() == target.triples()).unwrap_or(false) {
                let s = all.split_off(a.len());
                return Ok((a, s_kind, SBasis::Exact(s)));
            }
        }
        let lamf: Vec<f64> = lam.iter().map(to_f64).collect();
        let nums = numeric_twisted(&s_t, &z, flip, &blocks, &lifted, n, &lamf, &ordered_nu(&blocks))?;
        return Ok((a, s_kind, SBasis::Numeric(nums)));
    }
    let nus = ordered_nu(&blocks);
    let m = nus.iter().cloned().fold(f64::INFINITY, f64::min);
    let lamf: Vec<f64> = nus.iter().map(|x| x / m).collect();
    let nums = numeric_twisted(&s_t, &z, flip, &blocks, &lifted, n, &lamf, &nus)?;
    Ok((a, SKind::TwistedHeisenberg(LambdaClass::Irrational(lamf)), SBasis::Numeric(nums)))
}

fn ordered_nu(blocks: &[(Q, Vec<(Vec<Q>, Vec<Q>, Q)>)]) -> Vec<f64> {
    let mut v: Vec<f64> = blocks
        .iter()
        .flat_map(|(ns, pairs)| std::iter::repeat(to_f64(ns).sqrt()).take(pairs.len()))
        .collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Floating-point twisted basis `(T*, Z*, X*_k, Y*_k)` realizing `λ = lam`.
#[allow(clippy::too_many_arguments)]
fn numeric_twisted(
    t: &[Q],
    z: &[Q],
    flip: bool,
    blocks: &[(Q, Vec<(Vec<Q>, Vec<Q>, Q)>)],
    lifted: &dyn Fn(&[Q]) -> Vec<Q>,
    n: usize,
    lam: &[f64],
    nus: &[f64],
) -> Result<Vec<DVector<f64>>, String> {
    let col = |v: &[Q]| DVector::from_fn(n, |r, _| to_f64(&v[r]));
    let sc = lam[0] / nus[0];
    let mut pairs: Vec<(f64, Vec<Q>, Vec<Q>, f64)> = Vec::new();
    for (ns, ps) in blocks {
        let nu = to_f64(ns).sqrt();
        for (x, ax, qx) in ps {
            pairs.push((nu, x.clone(), ax.clone(), to_f64(qx).abs()));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut out = vec![col(t) * sc, col(z)];
    for (nu, x, ax, qx) in pairs {
        let lk = sc * nu;
        let tk = (lk * nu / qx).sqrt();
        let sgn = if flip { -1.0 } else { 1.0 };
        out.push(col(&lifted(&x)) * tk);
        out.push(col(&lifted(&ax)) * (tk * sgn / nu));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::q;

    #[test]
    fn canonical_forms() {
        assert_eq!(canonical_lambda(&[qi(4), qi(2)]), vec![qi(1), qi(2)]);
        assert_eq!(canonical_lambda(&[q(1, 2), q(1, 3)]), vec![qi(2), qi(3)]);
        assert_eq!(twisted_iso_test(&[qi(1), qi(2)], &[qi(2), qi(4)]), Some(q(1, 2)));
        assert_eq!(twisted_iso_test(&[qi(1), qi(2)], &[qi(1), qi(3)]), None);
    }

    #[test]
    fn classify_small() {
        let so3 = catalog(&CatalogSpec::So3).unwrap();
        let r = classify_decomposition(&so3);
        let c = r.classified().unwrap();
        assert_eq!((c.k_dim, c.a_dim, c.s_kind.clone()), (3, 0, SKind::Trivial));
        let he = catalog(&CatalogSpec::TwistedHeisenberg(vec![qi(2), qi(4)])).unwrap();
        let c = classify_decomposition(&he);
        let c = c.classified().unwrap();
        assert_eq!(c.s_kind, SKind::TwistedHeisenberg(LambdaClass::Rational(vec![qi(1), qi(2)])));
    }
}
