//! Univariate polynomials over ℚ, coefficients stored lowest degree first.

use num::{One, Signed, Zero};

use super::linalg::{kernel, QMat, Q};

pub type Poly = Vec<Q>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree(p: &Poly) -> Option<usize> {
    let p = trim(p.clone());
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn eval(p: &Poly, x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &Poly) -> Poly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer((i as i64).into())).collect())
}

fn monic(p: Poly) -> Poly {
    let p = trim(p);
    match p.last() {
        Some(l) if !l.is_one() => {
            let l = l.clone();
            p.into_iter().map(|c| c / &l).collect()
        }
        _ => p,
    }
}

/// Remainder of `a` modulo `b`.
pub fn rem(a: &Poly, b: &Poly) -> Poly {
    let b = trim(b.clone());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.clone());
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r = trim(r);
    }
    r
}

pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

/// A polynomial without repeated complex roots.
pub fn is_squarefree(p: &Poly) -> bool {
    let d = derivative(p);
    if d.is_empty() {
        return true;
    }
    gcd(p, &d).len() <= 1
}

/// Monic minimal polynomial of a square matrix, from the first linear
/// dependency among `I, M, M², …`.
pub fn minimal_polynomial(m: &QMat) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let mut powers: Vec<QMat> = vec![QMat::identity(n)];
    loop {
        let k = powers.len();
        let cols: Vec<Vec<Q>> = powers.iter().map(|p| p.entries().to_vec()).collect();
        let stacked = QMat::from_cols(n * n, &cols);
        let ker = kernel(&stacked);
        if let Some(v) = ker.into_iter().next() {
            return monic(v);
        }
        let next = powers[k - 1].mul(m);
        powers.push(next);
    }
}

/// Exact quotient `a / b`; panics unless `b` divides `a`.
pub fn div_exact(a: &Poly, b: &Poly) -> Poly {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        assert!(r.is_empty(), "inexact polynomial division");
        return Vec::new();
    }
    let lb = b.last().unwrap().clone();
    let mut q = vec![Q::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r = trim(r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    q
}

/// Rational with the smallest denominator in `[lo, hi]`.
pub fn simplest_between(lo: &Q, hi: &Q) -> Q {
    if lo > hi {
        return simplest_between(hi, lo);
    }
    if !lo.is_positive() && !hi.is_negative() {
        return Q::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    let next = &fl + Q::one();
    if next <= *hi {
        return next;
    }
    let inner = simplest_between(&(Q::one() / (hi - &fl)), &(Q::one() / (lo - &fl)));
    fl + Q::one() / inner
}

/// Rational root of `p` near the floating guess `x`, if one exists: the
/// bracketing interval is bisected exactly and its simplest rational tested.
pub fn rational_root_near(p: &Poly, x: f64) -> Option<Q> {
    let p = trim(p.clone());
    if p.len() < 2 || !x.is_finite() {
        return None;
    }
    let sq = div_exact(&p, &gcd(&p, &derivative(&p)));
    let center = Q::from_float(x)?;
    let sign = |v: &Q| {
        let e = eval(&sq, v);
        if e.is_zero() {
            0
        } else if e.is_positive() {
            1
        } else {
            -1
        }
    };
    let mut delta = Q::from_float(1e-7 * x.abs().max(1.0))?;
    let (mut lo, mut hi) = loop {
        let (lo, hi) = (&center - &delta, &center + &delta);
        if sign(&lo) == 0 {
            return Some(lo);
        }
        if sign(&hi) == 0 {
            return Some(hi);
        }
        if sign(&lo) != sign(&hi) {
            break (lo, hi);
        }
        delta *= Q::from_integer(16.into());
        if delta > Q::from_float(1e-2 * x.abs().max(1.0))? {
            return None;
        }
    };
    let s_lo = sign(&lo);
    for _ in 0..400 {
        let cand = simplest_between(&lo, &hi);
        if sign(&cand) == 0 {
            return Some(cand);
        }
        let mid = (&lo + &hi) / Q::from_integer(2.into());
        match sign(&mid) {
            0 => return Some(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    None
}

/// Distinct rational roots of `p` located near the floating guesses; each
/// root is verified exactly.
pub fn verified_rational_roots(p: &Poly, guesses: &[f64]) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::new();
    for &g in guesses {
        if let Some(c) = rational_root_near(p, g) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// Multiplicity of `r` as a root of `p`.
pub fn root_multiplicity(p: &Poly, r: &Q) -> usize {
    let mut p = trim(p.clone());
    let mut k = 0;
    while !p.is_empty() && eval(&p, r).is_zero() {
        // synthetic division by (x - r)
        let n = p.len();
        let mut q = vec![Q::zero(); n - 1];
        let mut carry = Q::zero();
        for i in (1..n).rev() {
            carry = &p[i] + carry * r;
            q[i - 1] = carry.clone();
        }
        p = q;
        k += 1;
    }
    k
}

pub fn sign_changes(p: &Poly) -> usize {
    let nz: Vec<&Q> = p.iter().filter(|c| !c.is_zero()).collect();
    nz.windows(2).filter(|w| w[0].is_positive() != w[1].is_positive()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::linalg::{qi, QMat};

    #[test]
    fn minpoly_of_rotation() {
        let j = QMat::from_i64(2, 2, &[0, -1, 1, 0]);
        assert_eq!(minimal_polynomial(&j), vec![qi(1), qi(0), qi(1)]);
        let n = QMat::from_i64(2, 2, &[0, 1, 0, 0]);
        let p = minimal_polynomial(&n);
        assert_eq!(p, vec![qi(0), qi(0), qi(1)]);
        assert!(!is_squarefree(&p));
    }

    #[test]
    fn gcd_and_roots() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = vec![qi(2), qi(-3), qi(1)];
        let b = vec![qi(-3), qi(2), qi(1)];
        assert_eq!(gcd(&a, &b), vec![qi(-1), qi(1)]);
        let roots = verified_rational_roots(&a, &[0.9999999, 2.0000001]);
        assert_eq!(roots, vec![qi(1), qi(2)]);
        let cube = vec![qi(-1), qi(3), qi(-3), qi(1)];
        assert_eq!(root_multiplicity(&cube, &qi(1)), 3);
        // (x - 1/1000003)(x + 2)^2
        let r = crate::lie_core::q(1, 1000003);
        let p = vec![-(&r) * qi(4), qi(4) - &r * qi(4), qi(4) - r.clone(), qi(1)];
        assert_eq!(verified_rational_roots(&p, &[1e-6, -2.0000001]), vec![r, qi(-2)]);
    }
}
