//! Dense matrices over exact rationals.
//!
//! Rank, kernel and solving go through fraction-free (Bareiss) row echelon
//! form on integer rows; symmetric forms are diagonalized by congruence.

use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num::bigint::BigInt;
use num::{BigRational, Integer, One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((a, b)) = s.split_once('.') {
        let neg = a.starts_with('-');
        let ip: BigInt = if a == "-" || a.is_empty() { BigInt::zero() } else { a.parse().ok()? };
        if b.is_empty() || !b.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let fp: BigInt = b.parse().ok()?;
        let scale = num::pow(BigInt::from(10), b.len());
        let frac = Q::new(fp, scale);
        let ip = Q::from_integer(ip.abs());
        let v = ip + frac;
        return Some(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Q::from_integer(n))
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact square root of a non-negative rational, if it is a rational square.
pub fn sqrt_q(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn vec_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Q], s: &Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| fmt_q(&self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        QMat { rows, cols, data: vals.iter().map(|&v| qi(v)).collect() }
    }

    pub fn diag(d: &[Q]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() && !self[(i, j)].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// `xᵀ A y`
    pub fn bilinear(&self, x: &[Q], y: &[Q]) -> Q {
        dot(x, &self.mul_vec(y))
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> QMat {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn commutator(&self, other: &QMat) -> QMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn max_abs(&self) -> Q {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn hstack(&self, other: &QMat) -> QMat {
        assert_eq!(self.rows, other.rows);
        let mut m = QMat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> QMat {
        let mut m = QMat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &QMat) -> QMat {
        let mut m = QMat::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// `Pᵀ A P`
    pub fn congruent(&self, p: &QMat) -> QMat {
        p.transpose().mul(self).mul(p)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(&self[(i, j)]))
    }

    pub fn rank(&self) -> usize {
        echelon(self).pivots.len()
    }

    pub fn kernel(&self) -> Vec<Vec<Q>> {
        kernel(self)
    }

    pub fn inverse(&self) -> Option<QMat> {
        inverse(self)
    }

    pub fn det(&self) -> Q {
        det(self)
    }
}

/// Integer row echelon form produced by fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
    swaps: usize,
}

fn integer_rows(m: &QMat) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Bareiss elimination to row echelon form over the integers.
pub fn echelon(m: &QMat) -> Echelon {
    let mut a = integer_rows(m);
    let (nr, nc) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else { continue };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        for i in r + 1..nr {
            for j in c + 1..nc {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division not exact");
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: a, pivots, cols: nc, swaps }
}

pub fn rank(m: &QMat) -> usize {
    echelon(m).pivots.len()
}

/// Basis of the null space `{x : m x = 0}`.
pub fn kernel(m: &QMat) -> Vec<Vec<Q>> {
    let e = echelon(m);
    let n = m.cols;
    let pivot_set: Vec<bool> = (0..n).map(|c| e.pivots.contains(&c)).collect();
    let mut out = Vec::new();
    for free in (0..n).filter(|&c| !pivot_set[c]) {
        let mut x = vec![Q::zero(); n];
        x[free] = Q::one();
        for (r, &p) in e.pivots.iter().enumerate().rev() {
            let mut s = Q::zero();
            for j in p + 1..n {
                if !e.rows[r][j].is_zero() && !x[j].is_zero() {
                    s += Q::from_integer(e.rows[r][j].clone()) * &x[j];
                }
            }
            x[p] = -s / Q::from_integer(e.rows[r][p].clone());
        }
        out.push(x);
    }
    out
}

/// One solution of `a x = b`, if consistent.
pub fn solve(a: &QMat, b: &[Q]) -> Option<Vec<Q>> {
    assert_eq!(a.rows, b.len());
    let aug = a.hstack(&QMat::from_cols(b.len(), &[b.to_vec()]));
    let e = echelon(&aug);
    let n = a.cols;
    if e.pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &p) in e.pivots.iter().enumerate().rev() {
        let mut s = Q::from_integer(e.rows[r][n].clone());
        for j in p + 1..n {
            if !e.rows[r][j].is_zero() && !x[j].is_zero() {
                s -= Q::from_integer(e.rows[r][j].clone()) * &x[j];
            }
        }
        x[p] = s / Q::from_integer(e.rows[r][p].clone());
    }
    Some(x)
}

/// Solves `a X = b` column by column.
pub fn solve_mat(a: &QMat, b: &QMat) -> Option<QMat> {
    let cols: Option<Vec<Vec<Q>>> = b.columns().iter().map(|c| solve(a, c)).collect();
    cols.map(|c| QMat::from_cols(a.cols, &c))
}

pub fn inverse(m: &QMat) -> Option<QMat> {
    if !m.is_square() || rank(m) != m.rows {
        return None;
    }
    solve_mat(m, &QMat::identity(m.rows))
}

pub fn det(m: &QMat) -> Q {
    assert!(m.is_square());
    let n = m.rows;
    if n == 0 {
        return Q::one();
    }
    let e = echelon(m);
    if e.pivots.len() < n {
        return Q::zero();
    }
    // Bareiss: last pivot equals det of the integer-scaled matrix
    let scale = (0..n).fold(BigInt::one(), |acc, i| {
        acc * m.row(i).iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
    });
    let mut d = Q::new(e.rows[n - 1][n - 1].clone(), scale);
    if e.swaps % 2 == 1 {
        d = -d;
    }
    d
}

/// Indices of a maximal independent subset of the columns.
pub fn independent_columns(m: &QMat) -> Vec<usize> {
    echelon(m).pivots
}

/// Basis (as columns) of the span of the given vectors.
pub fn span_basis(dim: usize, vecs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let prim: Vec<Vec<Q>> = vecs.iter().map(|v| primitive(v)).collect();
    let m = QMat::from_cols(dim, &prim);
    independent_columns(&m).into_iter().map(|j| vecs[j].clone()).collect()
}

/// `(w, d)` with `v = w / d` and `w` integral.
pub fn clear_denominators(v: &[Q]) -> (Vec<BigInt>, BigInt) {
    let d = v.iter().fold(BigInt::one(), |acc, x| if x.denom().is_one() { acc } else { acc.lcm(x.denom()) });
    let w = v.iter().map(|x| if x.is_zero() { BigInt::zero() } else { x.numer() * (&d / x.denom()) }).collect();
    (w, d)
}

/// Positive multiple of `v` with coprime integer entries.
fn primitive(v: &[Q]) -> Vec<Q> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

/// Congruence diagonalization of a symmetric matrix: returns `(P, d)` with
/// `Pᵀ A P = diag(d)` and `P` invertible.
pub fn congruence_diagonalize(a: &QMat) -> (QMat, Vec<Q>) {
    assert!(a.is_symmetric(), "congruence_diagonalize needs a symmetric matrix");
    let n = a.rows;
    let mut w = a.clone();
    let mut p = QMat::identity(n);
    for k in 0..n {
        if w[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !w[(j, j)].is_zero()) {
                swap_sym(&mut w, &mut p, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !w[(k, j)].is_zero()) {
                add_sym(&mut w, &mut p, k, j, &Q::one());
            } else {
                continue;
            }
        }
        let piv = w[(k, k)].clone();
        for i in k + 1..n {
            if w[(i, k)].is_zero() {
                continue;
            }
            let f = -(&w[(i, k)] / &piv);
            add_sym(&mut w, &mut p, i, k, &f);
        }
    }
    let d = (0..n).map(|i| w[(i, i)].clone()).collect();
    (p, d)
}

fn swap_sym(w: &mut QMat, p: &mut QMat, a: usize, b: usize) {
    let n = w.rows;
    for j in 0..n {
        let t = w[(a, j)].clone();
        w[(a, j)] = w[(b, j)].clone();
        w[(b, j)] = t;
    }
    for i in 0..n {
        let t = w[(i, a)].clone();
        w[(i, a)] = w[(i, b)].clone();
        w[(i, b)] = t;
        let t = p[(i, a)].clone();
        p[(i, a)] = p[(i, b)].clone();
        p[(i, b)] = t;
    }
}

/// Basis change `v_dst += f v_src`, applied as a congruence.
fn add_sym(w: &mut QMat, p: &mut QMat, dst: usize, src: usize, f: &Q) {
    let n = w.rows;
    for j in 0..n {
        let v = &w[(src, j)] * f;
        w[(dst, j)] += v;
    }
    for i in 0..n {
        let v = &w[(i, src)] * f;
        w[(i, dst)] += v;
        let v = &p[(i, src)] * f;
        p[(i, dst)] += v;
    }
}

/// Sylvester inertia `(positive, negative, zero)`.
pub fn inertia(a: &QMat) -> (usize, usize, usize) {
    let (_, d) = congruence_diagonalize(a);
    let pos = d.iter().filter(|x| x.is_positive()).count();
    let neg = d.iter().filter(|x| x.is_negative()).count();
    (pos, neg, d.len() - pos - neg)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// yielding every continued-fraction convergent in order.
pub fn convergents(x: f64, max_den: i64) -> Vec<Q> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        out.push(Q::new(h2.clone(), k2.clone()));
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
        if !r.is_finite() || r.abs() > 1e15 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/6"), Some(q(1, 2)));
        assert_eq!(parse_q("-4"), Some(qi(-4)));
        assert_eq!(parse_q("-0.25"), Some(q(-1, 4)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(fmt_q(&q(-6, 4)), "-3/2");
    }

    #[test]
    fn kernel_and_rank() {
        let m = QMat::from_i64(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&m.mul_vec(v)));
        }
    }

    #[test]
    fn inverse_and_det() {
        let m = QMat::from_rows(vec![
            vec![q(1, 2), qi(3), qi(0)],
            vec![qi(2), qi(-1), q(1, 3)],
            vec![qi(0), qi(5), qi(7)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(3));
        // det by cofactor expansion
        let d = q(1, 2) * (qi(-7) - q(5, 3)) - qi(3) * (qi(14) - qi(0));
        assert_eq!(m.det(), d);
        let swapped = QMat::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(swapped.det(), qi(-1));
    }

    #[test]
    fn congruence_inertia() {
        let k = QMat::from_i64(3, 3, &[0, 4, 0, 4, 0, 0, 0, 0, 8]);
        assert_eq!(inertia(&k), (2, 1, 0));
        let (p, d) = congruence_diagonalize(&k);
        assert_eq!(k.congruent(&p), QMat::diag(&d));
        assert_eq!(inertia(&QMat::zeros(4, 4)), (0, 0, 4));
    }

    #[test]
    fn solve_inconsistent() {
        let a = QMat::from_i64(2, 1, &[1, 1]);
        assert!(solve(&a, &[qi(1), qi(2)]).is_none());
        assert_eq!(solve(&a, &[qi(3), qi(3)]), Some(vec![qi(3)]));
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(sqrt_q(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(sqrt_q(&qi(2)), None);
        assert!(convergents(0.75, 100).contains(&q(3, 4)));
    }
}
