use num::Zero;

use super::linalg::{independent_columns, kernel, rank, solve, span_basis, QMat, Q};
use super::LieError;

/// A subspace of `ℚⁿ` stored as a matrix of independent columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: QMat,
}

impl Subspace {
    /// Fails unless the vectors are linearly independent.
    pub fn new(ambient: usize, vecs: &[Vec<Q>]) -> Result<Self, LieError> {
        if vecs.iter().any(|v| v.len() != ambient) {
            return Err(LieError::DimensionMismatch { expected: ambient, found: vecs.iter().map(|v| v.len()).find(|&l| l != ambient).unwrap_or(0) });
        }
        let m = QMat::from_cols(ambient, vecs);
        if rank(&m) != vecs.len() {
            return Err(LieError::DependentBasis);
        }
        Ok(Subspace { ambient, basis: m })
    }

    /// Span of arbitrary vectors, keeping an independent subset.
    pub fn span(ambient: usize, vecs: &[Vec<Q>]) -> Self {
        let b = span_basis(ambient, vecs);
        Subspace { ambient, basis: QMat::from_cols(ambient, &b) }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: QMat::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: QMat::identity(ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &QMat {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<Q>> {
        self.basis.columns()
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if self.dim() == 0 {
            return if v.iter().all(|x| x.is_zero()) { Some(Vec::new()) } else { None };
        }
        solve(&self.basis, v)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.vectors().iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_space(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.vectors();
        v.extend(other.vectors());
        Subspace::span(self.ambient, &v)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let m = self.basis.hstack(&other.basis.scale(&-Q::from_integer(1.into())));
        let vecs: Vec<Vec<Q>> = kernel(&m)
            .into_iter()
            .map(|k| self.basis.mul_vec(&k[..self.dim()]))
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    /// Orthogonal complement inside the ambient space for the bilinear form
    /// with Gram matrix `form`.
    pub fn form_orthogonal(&self, form: &QMat) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient);
        }
        let rows = self.basis.transpose().mul(form);
        Subspace::span(self.ambient, &kernel(&rows))
    }

    /// Orthogonal complement of `self` relative to the enclosing space `within`.
    pub fn form_orthogonal_within(&self, within: &Subspace, form: &QMat) -> Subspace {
        within.intersection(&self.form_orthogonal(form))
    }

    /// A complement of `self` inside `within`, chosen among `within`'s basis.
    pub fn complement_within(&self, within: &Subspace) -> Subspace {
        let mut cols = self.vectors();
        let k = cols.len();
        cols.extend(within.vectors());
        let m = QMat::from_cols(self.ambient, &cols);
        let picked: Vec<Vec<Q>> = independent_columns(&m)
            .into_iter()
            .filter(|&j| j >= k)
            .map(|j| cols[j].clone())
            .collect();
        Subspace { ambient: self.ambient, basis: QMat::from_cols(self.ambient, &picked) }
    }
}
