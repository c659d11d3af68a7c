//! Finite-dimensional real Lie algebras given by rational structure constants.

pub mod linalg;
pub mod poly;
mod subspace;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::forms::SymBilinearForm;
pub use linalg::{q, qi, QMat, Q};
pub use subspace::Subspace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("structure constant c[{0}][{0}] must vanish")]
    DiagonalBracket(usize),
    #[error("duplicate structure constant for pair ({0},{1}) and target {2}")]
    DuplicateEntry(usize, usize, usize),
    #[error("Jacobi identity fails on basis triple ({0},{1},{2})")]
    Jacobi(usize, usize, usize),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("seed vector is zero")]
    ZeroSeed,
    #[error("operator of size {found} does not act on dimension {expected}")]
    OperatorSize { expected: usize, found: usize },
    #[error("subspace is not closed under the bracket")]
    NotSubalgebra,
}

/// Structure constants `[e_i, e_j] = Σ_k c_ij^k e_k`, stored sparse with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    triples: Vec<(usize, usize, usize, Q)>,
    ad_basis: Vec<QMat>,
    /// The triples over a common denominator.
    int_table: (BigInt, Vec<(usize, usize, usize, BigInt)>),
}

impl LieAlgebra {
    /// Builds and validates: antisymmetry is enforced and the Jacobi identity
    /// must hold exactly.
    pub fn new(name: &str, labels: Vec<String>, triples: Vec<(usize, usize, usize, Q)>) -> Result<Self, LieError> {
        let a = Self::from_table_unchecked(name, labels, triples)?;
        if let Some((i, j, k)) = a.jacobi_violation() {
            return Err(LieError::Jacobi(i, j, k));
        }
        Ok(a)
    }

    /// Builds a table without checking the Jacobi identity. Pairs with `i > j`
    /// are folded into `(j, i)` with the sign flipped.
    pub fn from_table_unchecked(name: &str, labels: Vec<String>, triples: Vec<(usize, usize, usize, Q)>) -> Result<Self, LieError> {
        let n = labels.len();
        let mut norm: Vec<(usize, usize, usize, Q)> = Vec::new();
        for (i, j, k, v) in triples {
            for idx in [i, j, k] {
                if idx >= n {
                    return Err(LieError::IndexOutOfRange { index: idx, dim: n });
                }
            }
            if v.is_zero() {
                continue;
            }
            if i == j {
                return Err(LieError::DiagonalBracket(i));
            }
            let (a, b, v) = if i < j { (i, j, v) } else { (j, i, -v) };
            if norm.iter().any(|t| t.0 == a && t.1 == b && t.2 == k) {
                return Err(LieError::DuplicateEntry(a, b, k));
            }
            norm.push((a, b, k, v));
        }
        norm.sort_by(|x, y| (x.0, x.1, x.2).cmp(&(y.0, y.1, y.2)));
        let mut ad_basis = vec![QMat::zeros(n, n); n];
        for (i, j, k, v) in &norm {
            ad_basis[*i][(*k, *j)] += v;
            ad_basis[*j][(*k, *i)] -= v;
        }
        let den = norm.iter().fold(BigInt::one(), |acc, t| acc.lcm(t.3.denom()));
        let ints = norm.iter().map(|(i, j, k, v)| (*i, *j, *k, (v * Q::from_integer(den.clone())).to_integer())).collect();
        Ok(LieAlgebra { name: name.to_string(), labels, triples: norm, ad_basis, int_table: (den, ints) })
    }

    pub fn abelian_named(name: &str, labels: Vec<String>) -> Self {
        Self::from_table_unchecked(name, labels, Vec::new()).expect("abelian table is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn triples(&self) -> &[(usize, usize, usize, Q)] {
        &self.triples
    }

    pub fn basis(&self, i: usize) -> Vec<Q> {
        linalg::unit(self.dim(), i)
    }

    /// Structure constant `c_ij^k` for any ordering of `i, j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Q {
        self.ad_basis[i][(k, j)].clone()
    }

    fn check_len(&self, x: &[Q]) -> Result<(), LieError> {
        if x.len() != self.dim() {
            Err(LieError::DimensionMismatch { expected: self.dim(), found: x.len() })
        } else {
            Ok(())
        }
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Result<Vec<Q>, LieError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.br(x, y))
    }

    /// Bracket without length checks; panics on mismatch. Runs over the
    /// integers after clearing denominators.
    pub fn br(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let (xs, dx) = linalg::clear_denominators(x);
        let (ys, dy) = linalg::clear_denominators(y);
        let mut out = vec![BigInt::zero(); self.dim()];
        for (i, j, k, v) in &self.int_table.1 {
            let (xi, xj, yi, yj) = (&xs[*i], &xs[*j], &ys[*i], &ys[*j]);
            let a = !(xi.is_zero() || yj.is_zero());
            let b = !(xj.is_zero() || yi.is_zero());
            let t = match (a, b) {
                (false, false) => continue,
                (true, false) => xi * yj,
                (false, true) => -(xj * yi),
                (true, true) => xi * yj - xj * yi,
            };
            out[*k] += v * t;
        }
        let den = &self.int_table.0 * dx * dy;
        out.into_iter().map(|c| if c.is_zero() { Q::zero() } else { Q::new(c, den.clone()) }).collect()
    }

    /// Matrix of `ad_x`; column `j` is `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[Q]) -> Result<QMat, LieError> {
        self.check_len(x)?;
        let n = self.dim();
        let mut m = QMat::zeros(n, n);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.ad_basis[i].scale(c));
            }
        }
        Ok(m)
    }

    pub fn ad_basis(&self, i: usize) -> &QMat {
        &self.ad_basis[i]
    }

    /// Max-norm of the Jacobiator over all basis triples.
    pub fn jacobi_residual(&self) -> Q {
        let n = self.dim();
        let mut worst = Q::zero();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let r = self.jacobiator(a, b, c);
                    for x in r {
                        if x.abs() > worst {
                            worst = x.abs();
                        }
                    }
                }
            }
        }
        worst
    }

    fn jacobiator(&self, a: usize, b: usize, c: usize) -> Vec<Q> {
        let (x, y, z) = (self.basis(a), self.basis(b), self.basis(c));
        let t1 = self.br(&x, &self.br(&y, &z));
        let t2 = self.br(&y, &self.br(&z, &x));
        let t3 = self.br(&z, &self.br(&x, &y));
        linalg::vec_add(&linalg::vec_add(&t1, &t2), &t3)
    }

    /// First basis triple on which the Jacobi identity fails.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if !linalg::is_zero_vec(&self.jacobiator(a, b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn killing_form(&self) -> SymBilinearForm {
        let n = self.dim();
        let mut k = QMat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let (a, b) = (&self.ad_basis[i], &self.ad_basis[j]);
                let mut t = Q::zero();
                for r in 0..n {
                    for c in 0..n {
                        if !a[(r, c)].is_zero() && !b[(c, r)].is_zero() {
                            t += &a[(r, c)] * &b[(c, r)];
                        }
                    }
                }
                k[(i, j)] = t.clone();
                k[(j, i)] = t;
            }
        }
        SymBilinearForm::new(k).expect("Killing form is symmetric")
    }

    /// Common kernel of all `ad_{e_i}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let mut stacked = QMat::zeros(0, n);
        for ad in &self.ad_basis {
            stacked = stacked.vstack(ad);
        }
        Subspace::span(n, &stacked.kernel())
    }

    /// `[U, W]` for subspaces `U, W`.
    pub fn bracket_spaces(&self, u: &Subspace, w: &Subspace) -> Subspace {
        let mut out = Vec::new();
        for x in u.vectors() {
            for y in w.vectors() {
                let b = self.br(&x, &y);
                if !linalg::is_zero_vec(&b) {
                    out.push(b);
                }
            }
        }
        Subspace::span(self.dim(), &out)
    }

    pub fn derived_algebra(&self) -> Subspace {
        let g = Subspace::full(self.dim());
        self.bracket_spaces(&g, &g)
    }

    /// Terms of the derived series until two consecutive dimensions agree.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut out = vec![Subspace::full(self.dim())];
        loop {
            let last = out.last().unwrap();
            let next = self.bracket_spaces(last, last);
            let stop = next.dim() == last.dim();
            if stop {
                return out;
            }
            out.push(next);
        }
    }

    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let g = Subspace::full(self.dim());
        let mut out = vec![g.clone()];
        loop {
            let last = out.last().unwrap();
            let next = self.bracket_spaces(&g, last);
            if next.dim() == last.dim() {
                return out;
            }
            out.push(next);
        }
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        self.bracket_spaces(s, s).vectors().iter().all(|v| s.contains(v))
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        self.bracket_spaces(&Subspace::full(self.dim()), s).vectors().iter().all(|v| s.contains(v))
    }

    /// The algebra induced on a subalgebra, in the subspace's basis.
    pub fn subalgebra(&self, s: &Subspace, name: &str) -> Result<LieAlgebra, LieError> {
        let b = s.vectors();
        let mut triples = Vec::new();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let c = s.coords(&self.br(&b[i], &b[j])).ok_or(LieError::NotSubalgebra)?;
                for (k, v) in c.into_iter().enumerate() {
                    if !v.is_zero() {
                        triples.push((i, j, k, v));
                    }
                }
            }
        }
        let labels = (0..b.len()).map(|i| format!("u{}", i + 1)).collect();
        LieAlgebra::from_table_unchecked(name, labels, triples)
    }

    /// The same algebra in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &QMat, labels: Option<Vec<String>>) -> Result<LieAlgebra, LieError> {
        let n = self.dim();
        if p.rows() != n || p.cols() != n {
            return Err(LieError::DimensionMismatch { expected: n, found: p.cols() });
        }
        let pinv = p.inverse().ok_or(LieError::DependentBasis)?;
        let cols = p.columns();
        let mut triples = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = pinv.mul_vec(&self.br(&cols[i], &cols[j]));
                for (k, v) in c.into_iter().enumerate() {
                    if !v.is_zero() {
                        triples.push((i, j, k, v));
                    }
                }
            }
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("v{}", i + 1)).collect());
        LieAlgebra::from_table_unchecked(&self.name, labels, triples)
    }

    /// Same table after renaming.
    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn is_abelian(&self) -> bool {
        self.triples.is_empty()
    }
}

/// Block table with the left summand's basis first; cross brackets vanish.
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> LieAlgebra {
    let off = a.dim();
    let mut labels: Vec<String> = a.labels.clone();
    for l in &b.labels {
        let mut l2 = l.clone();
        while labels.contains(&l2) {
            l2.push('\'');
        }
        labels.push(l2);
    }
    let mut triples = a.triples.clone();
    triples.extend(b.triples.iter().map(|(i, j, k, v)| (i + off, j + off, k + off, v.clone())));
    let name = format!("{} ⊕ {}", a.name, b.name);
    LieAlgebra::from_table_unchecked(&name, labels, triples).expect("block table is valid")
}

/// Smallest subspace containing `seed` and stable under every operator.
pub fn generated_invariant_subspace(operators: &[QMat], seed: &[Q]) -> Result<Subspace, LieError> {
    let n = seed.len();
    if linalg::is_zero_vec(seed) {
        return Err(LieError::ZeroSeed);
    }
    for op in operators {
        if op.rows() != n || op.cols() != n {
            return Err(LieError::OperatorSize { expected: n, found: op.rows() });
        }
    }
    let mut vecs = vec![seed.to_vec()];
    let mut frontier = vecs.clone();
    let mut current = Subspace::span(n, &vecs);
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for op in operators {
                let w = op.mul_vec(v);
                if !current.contains(&w) {
                    vecs.push(w.clone());
                    current = Subspace::span(n, &vecs);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    Ok(current)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureFlags {
    pub solvable: bool,
    pub nilpotent: bool,
    pub semisimple: bool,
    pub reductive: bool,
    pub compact_type: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub derived_series_dims: Vec<usize>,
    pub lower_central_dims: Vec<usize>,
    pub flags: StructureFlags,
    pub center_dim: usize,
}

pub fn structure_report(a: &LieAlgebra) -> StructureReport {
    let derived: Vec<usize> = a.derived_series().iter().map(|s| s.dim()).collect();
    let lower: Vec<usize> = a.lower_central_series().iter().map(|s| s.dim()).collect();
    let killing = a.killing_form();
    let solvable = *derived.last().unwrap() == 0;
    let nilpotent = *lower.last().unwrap() == 0;
    let semisimple = killing.matrix().rank() == a.dim();
    let center = a.center();
    let radical = crate::algebra_zoo::radical(a);
    let reductive = radical.same_as(&center);
    let sig = killing.signature();
    let compact_type = reductive && sig.positive == 0;
    StructureReport {
        derived_series_dims: derived,
        lower_central_dims: lower,
        flags: StructureFlags { solvable, nilpotent, semisimple, reductive, compact_type },
        center_dim: center.dim(),
    }
}

/// `true` when `x` is a nonzero multiple of `y`.
pub fn is_multiple(x: &[Q], y: &[Q]) -> Option<Q> {
    let i = y.iter().position(|c| !c.is_zero())?;
    let f = &x[i] / &y[i];
    if x.iter().zip(y).all(|(a, b)| *a == &f * b) && !f.is_zero() {
        Some(f)
    } else {
        None
    }
}
