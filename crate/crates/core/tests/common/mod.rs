#![allow(dead_code)]

use affconj::structure::jordan_block;
use affconj::{AffineOperator, Matrix, QMatrix, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Rational with numerator and denominator bounded by 9 in absolute value.
pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.random_range(-9..=9), rng.random_range(1..=9))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| small_rational(rng)).collect())
        .collect();
    Matrix::from_rows(rows).unwrap()
}

/// Random nonsingular integer matrix with entries in `-3..=3`.
pub fn random_basis(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| q(rng.random_range(-3..=3), 1)).collect())
            .collect();
        let s = Matrix::from_rows(rows).unwrap();
        if s.rank() == n {
            return s;
        }
    }
}

/// `(S⁻¹AS, S⁻¹b)`.
pub fn base_change(f: &AffineOperator<Rational>, s: &QMatrix) -> AffineOperator<Rational> {
    f.change_basis(s).unwrap()
}

/// Random operator without a fixed point: a column of `A - I` vanishes and
/// `b` leaves the column space of `A - I`. Some draws zero out further
/// columns of `A` to make it singular.
pub fn random_nofix(rng: &mut ChaCha8Rng, n: usize) -> AffineOperator<Rational> {
    loop {
        let mut a = random_matrix(rng, n);
        let j = rng.random_range(0..n);
        for i in 0..n {
            a[(i, j)] = if i == j { q(1, 1) } else { q(0, 1) };
        }
        if n > 1 && rng.random_bool(0.3) {
            let k = (j + 1 + rng.random_range(0..n - 1)) % n;
            for i in 0..n {
                a[(i, k)] = q(0, 1);
            }
        }
        let b: Vec<Rational> = (0..n).map(|_| small_rational(rng)).collect();
        let f = AffineOperator::new(a, b).unwrap();
        if affconj::conjugacy::fixed_point(&f).unwrap().is_none() {
            return f;
        }
    }
}

/// Random operator, with eigenvalue 1 and singular linear parts each
/// appearing in a fair share of draws.
pub fn random_operator(rng: &mut ChaCha8Rng, n: usize) -> AffineOperator<Rational> {
    let mut a = random_matrix(rng, n);
    match rng.random_range(0..4) {
        0 => {
            let j = rng.random_range(0..n);
            for i in 0..n {
                a[(i, j)] = if i == j { q(1, 1) } else { q(0, 1) };
            }
        }
        1 => {
            let j = rng.random_range(0..n);
            for i in 0..n {
                a[(i, j)] = q(0, 1);
            }
        }
        _ => {}
    }
    let mut b: Vec<Rational> = (0..n).map(|_| small_rational(rng)).collect();
    if rng.random_bool(0.2) {
        b = vec![q(0, 1); n];
    }
    AffineOperator::new(a, b).unwrap()
}

/// All partitions of `n` in descending order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Direct sum of Jordan blocks `J_k(λ)` from `(λ, k)` pairs.
pub fn jordan_sum(blocks: &[(Rational, usize)]) -> QMatrix {
    let ms: Vec<QMatrix> = blocks
        .iter()
        .map(|(l, k)| jordan_block(l.clone(), *k).unwrap())
        .collect();
    Matrix::direct_sum_all(&ms)
}

/// `S M S⁻¹`.
pub fn conjugate_by(m: &QMatrix, s: &QMatrix) -> QMatrix {
    &(s * m) * &s.inverse().unwrap()
}

/// Roots of a real polynomial (ascending coefficients) by Durand–Kerner
/// iteration in double precision.
pub fn durand_kerner(coeffs: &[f64]) -> Vec<num_complex::Complex64> {
    use num_complex::Complex64 as C;
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let c: Vec<C> = coeffs.iter().map(|&x| C::new(x / lead, 0.0)).collect();
    let eval = |z: C| c.iter().rev().fold(C::new(0.0, 0.0), |acc, &a| acc * z + a);
    let radius = 1.0 + c[..d].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..d)
        .map(|k| C::from_polar(radius, 0.4 + k as f64 * std::f64::consts::TAU / d as f64))
        .collect();
    for _ in 0..5000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let denom: C = (0..d).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            let step = eval(z[i]) / denom;
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}
