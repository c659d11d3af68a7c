#![allow(dead_code)]

use lorentz_lie::lie_core::{qi, LieAlgebra, QMat, Q};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn rand_q(r: &mut ChaCha8Rng, span: i64) -> Q {
    let n = r.gen_range(-span..=span);
    let d = r.gen_range(1..=3);
    Q::new(n.into(), d.into())
}

pub fn rand_vec(r: &mut ChaCha8Rng, n: usize, span: i64) -> Vec<Q> {
    (0..n).map(|_| rand_q(r, span)).collect()
}

/// Random invertible rational matrix.
pub fn rand_invertible(r: &mut ChaCha8Rng, n: usize) -> QMat {
    loop {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = if r.gen_bool(0.4) { rand_q(r, 2) } else { qi(0) };
            }
            m[(i, i)] += qi(1);
        }
        if m.rank() == n {
            return m;
        }
    }
}

pub fn permutation(r: &mut ChaCha8Rng, n: usize) -> QMat {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = r.gen_range(0..=i);
        idx.swap(i, j);
    }
    let mut m = QMat::zeros(n, n);
    for (c, &i) in idx.iter().enumerate() {
        m[(i, c)] = qi(1);
    }
    m
}

pub fn scramble(a: &LieAlgebra, r: &mut ChaCha8Rng) -> (LieAlgebra, QMat) {
    let p = permutation(r, a.dim()).mul(&rand_invertible(r, a.dim()));
    (a.change_basis(&p, None).unwrap(), p)
}

pub fn max_abs_f64(m: &nalgebra::DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Random traceless 2×2 matrix `[[a, b], [c, −a]]` of a chosen kind:
/// 0 real spectrum, 1 imaginary, 2 nilpotent, 3 zero.
pub fn sl2_matrix(r: &mut ChaCha8Rng, kind: u8) -> nalgebra::DMatrix<f64> {
    let (a, b, c) = match kind {
        0 => {
            let a: f64 = r.gen_range(0.3..2.0);
            let b: f64 = r.gen_range(-1.0..1.0);
            (a, b, 0.0)
        }
        1 => {
            let w: f64 = r.gen_range(0.3..2.0);
            let s: f64 = r.gen_range(0.5..2.0);
            (0.0, w * s, -w / s)
        }
        2 => {
            let b: f64 = r.gen_range(0.5..2.0);
            let t: f64 = r.gen_range(-1.0..1.0);
            // a² + bc = 0 with c = −a²/b
            (t, b, -t * t / b)
        }
        _ => (0.0, 0.0, 0.0),
    };
    // conjugate by a random matrix to hide the kind
    let p = loop {
        let p = nalgebra::DMatrix::<f64>::from_fn(2, 2, |_, _| r.gen_range(-1.0..1.0));
        if p.determinant().abs() > 0.3 {
            break p;
        }
    };
    let m = nalgebra::DMatrix::from_row_slice(2, 2, &[a, b, c, -a]);
    &p * m * p.try_inverse().unwrap()
}

/// Eigenvalues of a traceless 2×2 matrix in closed form.
pub fn sl2_eigen(m: &nalgebra::DMatrix<f64>) -> [nalgebra::Complex<f64>; 2] {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let s = nalgebra::Complex::new(-det, 0.0).sqrt();
    [s, -s]
}

/// Samples for the Jordan suite: `(matrix, closed-form spectrum)` drawn from
/// the block and tensor representations of `sl2 ⊕ sl2` on `ℝ⁴`, the
/// standard representation of `so3` and the adjoint one of `sl2`.
pub fn jordan_samples(seed: u64, count: usize) -> Vec<(nalgebra::DMatrix<f64>, Vec<nalgebra::Complex<f64>>)> {
    use nalgebra::{Complex, DMatrix};
    let mut r = rng(seed);
    let mut out = Vec::new();
    for i in 0..count {
        let kind = i % 4;
        match kind {
            0 | 1 => {
                let ka = r.gen_range(0..4);
                let a = sl2_matrix(&mut r, ka);
                let kb = r.gen_range(0..4);
                let b = sl2_matrix(&mut r, kb);
                let (ea, eb) = (sl2_eigen(&a), sl2_eigen(&b));
                if kind == 0 {
                    let mut m = DMatrix::zeros(4, 4);
                    m.view_mut((0, 0), (2, 2)).copy_from(&a);
                    m.view_mut((2, 2), (2, 2)).copy_from(&b);
                    out.push((m, vec![ea[0], ea[1], eb[0], eb[1]]));
                } else {
                    let i2 = DMatrix::<f64>::identity(2, 2);
                    let m = a.kronecker(&i2) + i2.kronecker(&b);
                    let spec = ea.iter().flat_map(|x| eb.iter().map(move |y| x + y)).collect();
                    out.push((m, spec));
                }
            }
            2 => {
                let w: Vec<f64> = (0..3).map(|_| r.gen_range(-2.0..2.0)).collect();
                let m = DMatrix::from_row_slice(3, 3, &[0.0, -w[2], w[1], w[2], 0.0, -w[0], -w[1], w[0], 0.0]);
                let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
                out.push((m, vec![Complex::new(0.0, 0.0), Complex::new(0.0, n), Complex::new(0.0, -n)]));
            }
            _ => {
                // ad_x on sl2 in the basis (e, f, h) for x = a e + b f + c h
                let ka = r.gen_range(0..4);
                let a = sl2_matrix(&mut r, ka);
                let (p, qq, s) = (a[(0, 1)], a[(1, 0)], a[(0, 0)]);
                let m = DMatrix::from_row_slice(3, 3, &[2.0 * s, 0.0, -2.0 * p, 0.0, -2.0 * s, 2.0 * qq, -qq, p, 0.0]);
                let e = sl2_eigen(&a);
                out.push((m, vec![Complex::new(0.0, 0.0), e[0] * 2.0, e[1] * 2.0]));
            }
        }
    }
    out
}

/// Greedy matching distance between two multisets of complex numbers.
pub fn spectrum_distance(a: &[nalgebra::Complex<f64>], b: &[nalgebra::Complex<f64>]) -> f64 {
    let mut rest: Vec<nalgebra::Complex<f64>> = b.to_vec();
    let mut worst: f64 = 0.0;
    for x in a {
        let (i, d) = rest
            .iter()
            .enumerate()
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .unwrap();
        worst = worst.max(d);
        rest.swap_remove(i);
    }
    worst
}

/// Random automorphism of `he_d^λ` in the basis `(T, Z, X₁, Y₁, …)`:
/// a scaling `X,Y ↦ cX, cY`, `Z ↦ c²Z`, rational rotations in each
/// `(X_k, Y_k)` plane and an inner automorphism `exp(ad_v)`, `v ∈ he_d`.
pub fn twisted_automorphism(r: &mut ChaCha8Rng, a: &LieAlgebra) -> QMat {
    let n = a.dim();
    let d = (n - 2) / 2;
    let c = Q::new(r.gen_range(1i64..=3).into(), r.gen_range(1i64..=3).into());
    let mut s = QMat::identity(n);
    s[(1, 1)] = &c * &c;
    let pyth = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];
    for k in 0..d {
        let (x, y) = (2 + 2 * k, 3 + 2 * k);
        let (p, q, h) = pyth[r.gen_range(0..pyth.len())];
        let (co, si) = (Q::new(p.into(), h.into()), Q::new(q.into(), h.into()));
        s[(x, x)] = &c * &co;
        s[(y, x)] = &c * &si;
        s[(x, y)] = -(&c * &si);
        s[(y, y)] = &c * &co;
    }
    let mut v = rand_vec(r, n, 2);
    v[0] = qi(0);
    let ad = a.ad_matrix(&v).unwrap();
    let exp = QMat::identity(n).add(&ad).add(&ad.mul(&ad).scale(&Q::new(1.into(), 2.into())));
    exp.mul(&s)
}
