//! Matrix exponential and logarithm in double precision.
//!
//! The exponential is the degree-13 Padé approximant with scaling and
//! squaring. The logarithm uses inverse scaling and squaring: repeated
//! Denman–Beavers square roots until the matrix is close to `I`, then the
//! `atanh` series. A real logarithm at negative eigenvalues is assembled from
//! paired Jordan blocks, which is exact when those eigenvalues are rational.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{rational_to_f64, Field, FieldKind, Poly, Rational};
use crate::linalg::Matrix;
use crate::spectral::{count_real_roots, exact_linear_factors, jordan_types};
use crate::structure::jordan_chains;

pub type CMatrix = DMatrix<Complex64>;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn norm1(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// `e^M`.
pub fn expm(m: &CMatrix) -> Result<CMatrix> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(m.clone());
    }
    let norm = norm1(m);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = m * c(0.5f64.powi(s));
    let id = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| c(PADE13[k]);
    let inner_u = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9));
    let u = &a * (inner_u + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1));
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);
    let denom = (&v - &u)
        .try_inverse()
        .ok_or_else(|| Error::Internal("Padé denominator is singular".into()))?;
    let mut r = denom * (&v + &u);
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

fn sqrtm(m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows();
    let mut y = m.clone();
    let mut z = CMatrix::identity(n, n);
    for _ in 0..100 {
        let yi = y.clone().try_inverse().ok_or(Error::Singular)?;
        let zi = z.clone().try_inverse().ok_or(Error::Singular)?;
        let y_next = (&y + zi) * c(0.5);
        let z_next = (&z + yi) * c(0.5);
        let moved = norm1(&(&y_next - &y));
        y = y_next;
        z = z_next;
        if moved <= 1e-15 * norm1(&y) {
            break;
        }
    }
    Ok(y)
}

/// Principal logarithm; `M` must have no eigenvalues on `(-∞, 0]`.
pub fn logm_principal(m: &CMatrix) -> Result<CMatrix> {
    let n = check_square(m)?;
    let id = CMatrix::identity(n, n);
    let mut x = m.clone();
    let mut k = 0;
    while norm1(&(&x - &id)) > 0.25 {
        if k >= 64 {
            return Err(Error::Internal(
                "square-root iteration did not approach the identity".into(),
            ));
        }
        x = sqrtm(&x)?;
        k += 1;
    }
    let z = (&x - &id) * (&x + &id).try_inverse().ok_or(Error::Singular)?;
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut sum = z.clone();
    for j in (3..200).step_by(2) {
        term = &term * &z2;
        let t = &term * c(1.0 / j as f64);
        let size = norm1(&t);
        sum += t;
        if size <= 1e-18 * norm1(&sum).max(1e-300) {
            break;
        }
    }
    Ok(sum * c(2.0 * 2f64.powi(k)))
}

/// Eigenvalues of a square complex matrix.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    Schur::try_new(m.clone(), 1e-15, 10_000)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect())
        .ok_or_else(|| Error::Internal("Schur iteration did not converge".into()))
}

fn real_part(m: &CMatrix) -> CMatrix {
    m.map(|z| c(z.re))
}

/// Some logarithm of `M`, principal when possible, otherwise computed as
/// `log(e^{iφ} M) - iφ I` for a rotation `φ` that clears the negative axis.
fn log_any_branch(m: &CMatrix, eig: &[Complex64]) -> Result<CMatrix> {
    let n = m.nrows();
    let clearance = |phi: f64| {
        eig.iter()
            .map(|z| ((z.arg() + phi).rem_euclid(2.0 * PI) - PI).abs())
            .fold(PI, f64::min)
    };
    let phi = if clearance(0.0) >= 0.1 {
        0.0
    } else {
        (0..32)
            .map(|k| k as f64 * PI / 16.0)
            .max_by(|a, b| clearance(*a).total_cmp(&clearance(*b)))
            .expect("nonempty")
    };
    let rot = Complex64::from_polar(1.0, phi);
    let l = logm_principal(&(m * rot))?;
    Ok(l - CMatrix::identity(n, n) * Complex64::new(0.0, phi))
}

type RealSvd = nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>;

fn svd_accurate(m: &DMatrix<f64>, svd: &RealSvd) -> bool {
    let err = (svd.clone().recompose().expect("vectors requested") - m).norm();
    err <= 1e-12 * m.norm().max(1.0)
}

/// SVD with a reconstruction check. nalgebra occasionally returns an
/// inaccurate decomposition of a rank-deficient matrix; the transpose is
/// tried before giving up.
fn svd_real(m: &DMatrix<f64>) -> Result<RealSvd> {
    let svd = m.clone().svd(true, true);
    if svd_accurate(m, &svd) {
        return Ok(svd);
    }
    let t = m.transpose();
    let svd_t = t.clone().svd(true, true);
    if svd_accurate(&t, &svd_t) {
        return Ok(RealSvd {
            u: svd_t.v_t.map(|v| v.transpose()),
            v_t: svd_t.u.map(|u| u.transpose()),
            singular_values: svd_t.singular_values,
        });
    }
    Err(Error::Internal(
        "singular value decomposition did not converge".into(),
    ))
}

/// Singular values in decreasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let mut sv: Vec<f64> = svd_real(m)?.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

fn numeric_rank(m: &DMatrix<f64>, tol: f64) -> Result<usize> {
    match svd_real(m) {
        Ok(svd) => Ok(svd.singular_values.iter().filter(|&&s| s > tol).count()),
        Err(_) => Ok(m
            .clone()
            .col_piv_qr()
            .r()
            .diagonal()
            .iter()
            .filter(|s| s.abs() > tol)
            .count()),
    }
}

/// Orthonormal columns spanning a numerical kernel of known dimension: the
/// trailing columns of a column-pivoted QR factorization of `Mᵀ`.
fn numeric_kernel(m: &DMatrix<f64>, dim: usize) -> Result<Vec<Vec<f64>>> {
    let n = m.ncols();
    let q = m.transpose().col_piv_qr().q();
    Ok((n - dim..n)
        .map(|j| q.column(j).iter().copied().collect())
        .collect())
}

/// Orthonormal columns spanning a numerical image of known dimension.
fn numeric_image(m: &DMatrix<f64>, dim: usize) -> Result<Vec<Vec<f64>>> {
    let q = m.clone().col_piv_qr().q();
    Ok((0..dim)
        .map(|j| q.column(j).iter().copied().collect())
        .collect())
}

/// Basis `[image | kernel]` splitting a real matrix into the part without
/// negative eigenvalues and the `neg`-dimensional negative part, from
/// numerical eigenvalues.
pub(crate) fn numeric_negative_split(d: &DMatrix<f64>, neg: usize) -> Result<DMatrix<f64>> {
    let n = d.nrows();
    let scale = d.abs().column_sum().max().max(1.0);
    let eig = eigenvalues(&d.map(c))?;
    let mut negatives: Vec<f64> = eig
        .iter()
        .filter(|z| z.re < 0.0 && z.im.abs() <= 1e-7 * scale)
        .map(|z| z.re)
        .collect();
    if negatives.len() != neg {
        return Err(Error::Internal(format!(
            "found {} numerical negative eigenvalues, expected {neg}",
            negatives.len()
        )));
    }
    negatives.sort_by(f64::total_cmp);
    let id = DMatrix::<f64>::identity(n, n);
    let mut annihilator = id.clone();
    for lambda in negatives {
        annihilator = &annihilator * (d - &id * lambda);
    }
    let mut columns = numeric_image(&annihilator, n - neg)?;
    columns.extend(numeric_kernel(&annihilator, neg)?);
    Ok(DMatrix::from_fn(n, n, |i, j| columns[j][i]))
}

pub(crate) fn pair_rotation(k: usize) -> CMatrix {
    let mut r = CMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        r[(i, k + i)] = c(-PI);
        r[(k + i, i)] = c(PI);
    }
    r
}

pub(crate) fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), (b.nrows(), b.ncols())).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Partition multiplicities of a numerically clustered eigenvalue, from
/// ranks of powers of `M - λI`.
fn numeric_partition(m: &DMatrix<f64>, lambda: f64, mult: usize) -> Result<Vec<usize>> {
    let n = m.nrows();
    let shifted = m - DMatrix::identity(n, n) * lambda;
    let scale = m.abs().column_sum().max().max(1.0);
    let mut ranks = vec![n];
    let mut p = DMatrix::identity(n, n);
    for j in 1..=mult + 1 {
        p = &p * &shifted;
        ranks.push(numeric_rank(&p, 1e-8 * scale.powi(j as i32))?);
    }
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    Ok(at_least.windows(2).map(|w| w[0] - w[1]).collect())
}

/// A logarithm of a nonsingular matrix. With `real = true` the result is a
/// real logarithm of a real matrix, which exists exactly when every negative
/// eigenvalue has an even number of Jordan blocks of each size.
pub fn matrix_log(m: &CMatrix, real: bool) -> Result<CMatrix> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(m.clone());
    }
    let scale = norm1(m);
    let eig = eigenvalues(m)?;
    if eig.iter().any(|z| z.norm() <= 1e-12 * scale) {
        return Err(Error::Singular);
    }
    if !real {
        return log_any_branch(m, &eig);
    }
    if m.iter().any(|z| z.im.abs() > 1e-12 * scale) {
        return Err(Error::InvalidArgument(
            "real logarithm requested for a non-real matrix".into(),
        ));
    }
    let mut negatives: Vec<f64> = eig
        .iter()
        .filter(|z| z.re < 0.0 && z.im.abs() <= 1e-7 * scale)
        .map(|z| z.re)
        .collect();
    if negatives.is_empty() {
        return Ok(real_part(&logm_principal(m)?));
    }
    negatives.sort_by(f64::total_cmp);
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for x in negatives {
        match clusters.last_mut() {
            Some(cl) if (x - cl[cl.len() - 1]).abs() <= 1e-6 * x.abs().max(1.0) => cl.push(x),
            _ => clusters.push(vec![x]),
        }
    }
    let mr = m.map(|z| z.re);
    let mut centres = Vec::new();
    for cl in &clusters {
        let lambda = cl.iter().sum::<f64>() / cl.len() as f64;
        let parts = numeric_partition(&mr, lambda, cl.len())?;
        if parts.iter().any(|k| k % 2 == 1) {
            return Err(Error::NoRealLog(format!(
                "eigenvalue {lambda:.6} has an odd number of Jordan blocks of some size"
            )));
        }
        if parts.iter().skip(1).any(|&k| k > 0) {
            return Err(Error::Unsupported(
                "real logarithm at a numerically defective negative eigenvalue".into(),
            ));
        }
        centres.push((lambda, cl.len()));
    }
    let id = DMatrix::<f64>::identity(n, n);
    let mut annihilator = id.clone();
    for &(lambda, _) in &centres {
        annihilator = &annihilator * (&mr - &id * lambda);
    }
    let neg_dim: usize = centres.iter().map(|&(_, k)| k).sum();
    let mut columns = numeric_image(&annihilator, n - neg_dim)?;
    for &(lambda, k) in &centres {
        columns.extend(numeric_kernel(&(&mr - &id * lambda), k)?);
    }
    let t = DMatrix::from_fn(n, n, |i, j| columns[j][i]);
    let t_inv = t
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Internal("eigenbasis is singular".into()))?;
    let d = (&t_inv * &mr * &t).map(c);
    let comp = n - neg_dim;
    let mut blocks = Vec::new();
    if comp > 0 {
        blocks.push(real_part(&logm_principal(
            &d.view((0, 0), (comp, comp)).into_owned(),
        )?));
    }
    for &(lambda, k) in &centres {
        blocks.push(CMatrix::identity(k, k) * c(lambda.abs().ln()) + pair_rotation(k / 2));
    }
    let l = block_diag(&blocks);
    let tc = t.map(c);
    let tic = t_inv.map(c);
    Ok(real_part(&(tc * l * tic)))
}

/// `log(|μ| I - N)` for the lower shift `N` of size `k`.
fn log_negated_jordan(mu: f64, k: usize) -> CMatrix {
    let a = mu.abs();
    let mut out = CMatrix::identity(k, k) * c(a.ln());
    for j in 1..k {
        let coef = -1.0 / (j as f64 * a.powi(j as i32));
        for i in j..k {
            out[(i, i - j)] = c(coef);
        }
    }
    out
}

fn rational_poly<F: Field>(p: &Poly<F>) -> Poly<Rational> {
    Poly::new(p.coeffs().iter().map(|x| x.parts().0).collect())
}

/// A logarithm of an exact matrix. The existence test for a real logarithm
/// is exact; rational negative eigenvalues are handled through exact Jordan
/// chains, everything else numerically.
pub fn matrix_log_exact<F: Field>(m: &Matrix<F>, real: bool) -> Result<CMatrix> {
    let n = m.ensure_square()?;
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    if m.determinant()?.is_zero() {
        return Err(Error::Singular);
    }
    if !real {
        return matrix_log(&m.to_c64(), false);
    }
    if F::KIND == FieldKind::Complex && m.entries().iter().any(|x| !x.parts().1.is_zero()) {
        return Err(Error::InvalidArgument(
            "real logarithm requested for a non-real matrix".into(),
        ));
    }
    let zero = Rational::zero();
    for t in jordan_types(m)? {
        if count_real_roots(&rational_poly(&t.roots), None, Some(&zero)) == 0 {
            continue;
        }
        let mut sizes = t.partition.clone();
        sizes.dedup();
        if sizes
            .iter()
            .any(|s| t.partition.iter().filter(|p| *p == s).count() % 2 == 1)
        {
            return Err(Error::NoRealLog(format!(
                "a negative eigenvalue (root of {}) has Jordan partition {:?}",
                t.roots, t.partition
            )));
        }
    }
    let mus: Vec<F> = exact_linear_factors(&m.charpoly()?.square_free_part())
        .into_iter()
        .filter(|x| x.parts().0 < zero)
        .collect();
    if mus.is_empty() {
        return matrix_log(&m.to_c64(), true);
    }
    let mut annihilator = Matrix::identity(n);
    let mut pair_columns: Vec<Vec<F>> = Vec::new();
    let mut pair_blocks: Vec<(f64, usize)> = Vec::new();
    for mu in &mus {
        let shifted = m - &Matrix::identity(n).scale(mu);
        annihilator = &annihilator * &shifted.pow(n)?;
        let chains = jordan_chains(m, mu)?;
        for pair in chains.chunks(2) {
            if pair.len() != 2 || pair[0].len() != pair[1].len() {
                return Err(Error::Internal(
                    "unpaired Jordan chains at a negative eigenvalue".into(),
                ));
            }
            pair_columns.extend(pair[0].iter().cloned());
            pair_columns.extend(pair[1].iter().cloned());
            pair_blocks.push((rational_to_f64(&mu.parts().0), pair[0].len()));
        }
    }
    let mut columns = annihilator.column_space_basis();
    let comp = columns.len();
    columns.extend(pair_columns);
    let t = Matrix::from_columns(n, &columns);
    let t_inv = t.inverse()?;
    let mut blocks = Vec::new();
    if comp > 0 {
        let d = &(&t_inv * m) * &t;
        blocks.push(matrix_log(&d.block(0, 0, comp, comp).to_c64(), true)?);
    }
    for &(mu, k) in &pair_blocks {
        let l = log_negated_jordan(mu, k);
        let mut b = block_diag(&[l.clone(), l]);
        b += pair_rotation(k);
        blocks.push(b);
    }
    Ok(real_part(
        &(t.to_c64() * block_diag(&blocks) * t_inv.to_c64()),
    ))
}
