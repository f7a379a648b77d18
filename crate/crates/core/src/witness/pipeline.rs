//! Witness construction for operators without a fixed point.
//!
//! 1. Exact Jordan basis at the eigenvalues 1 and 0, invariant complement for
//!    the rest.
//! 2. Translate away the translation part wherever the block has a fixed point.
//! 3. Toeplitz change of basis on each remaining eigenvalue-1 block, leaving
//!    translation `e₁`.
//! 4. Polynomial straightening of each such block to `(I, e₁)`.
//! 5. Merge the translation directions into a single coordinate.
//! 6. Flows along that coordinate turn the remaining invertible part into
//!    `I` or `I ⊕ [-1]`.

use num_complex::Complex64;

use super::matfn::{block_diag, matrix_log_exact, numeric_negative_split, pair_rotation, CMatrix};
use super::{Stage, Witness};
use crate::conjugacy::{canonical_affine, fixed_point, realize, CanonicalForm};
use crate::error::{Error, Result};
use crate::exact::{Field, FieldKind, Poly, Rational};
use crate::linalg::{orthogonal_basis, AffineOperator, Matrix};
use crate::spectral::{count_real_roots_with_multiplicity, exact_linear_factors};
use crate::structure::jordan_chains;

/// A witness together with the canonical operator it conjugates to.
#[derive(Clone, Debug)]
pub struct PipelineResult<F: Field> {
    /// `h` with `f ∘ h = h ∘ canonical`.
    pub witness: Witness<F>,
    pub canonical: AffineOperator<F>,
    pub form: CanonicalForm,
}

fn embed_block<F: Field>(n: usize, at: usize, m: &Matrix<F>) -> Matrix<F> {
    let mut out = Matrix::identity(n);
    out.set_block(at, at, m);
    out
}

fn push_linear<F: Field>(h: &mut Witness<F>, m: Matrix<F>) -> Result<()> {
    if m == Matrix::identity(m.rows()) {
        return Ok(());
    }
    let inverse = m.inverse()?;
    h.push(Stage::Linear { matrix: m, inverse })
}

fn mismatch(step: &str) -> Error {
    Error::Internal(format!(
        "witness pipeline: unexpected operator after {step}"
    ))
}

/// Builds a witness conjugating `f` to the realization of its canonical form.
pub fn nofix_pipeline<F: Field>(f: &AffineOperator<F>) -> Result<PipelineResult<F>> {
    let n = f.dim();
    if fixed_point(f)?.is_some() {
        return Err(Error::InvalidArgument("operator has a fixed point".into()));
    }
    let form = canonical_affine(f)?;
    let target = realize::<F>(&form)?;
    let mut h = Witness::identity(n);
    let id = Matrix::<F>::identity(n);

    let chains1 = jordan_chains(&f.a, &F::one())?;
    let chains0 = jordan_chains(&f.a, &F::zero())?;
    let rest = (&(&f.a - &id).pow(n)? * &f.a.pow(n)?).orthogonal_column_basis();
    let mut columns: Vec<Vec<F>> = Vec::new();
    let mut blocks1 = Vec::new();
    for c in &chains1 {
        blocks1.push((columns.len(), c.len()));
        columns.extend(c.iter().cloned());
    }
    let n1 = columns.len();
    for c in &chains0 {
        columns.extend(c.iter().cloned());
    }
    let n0 = columns.len() - n1;
    columns.extend(rest);
    let t = Matrix::from_columns(n, &columns);
    let mut cur = f.change_basis(&t)?;
    push_linear(&mut h, t)?;

    let active: Vec<(usize, usize)> = blocks1
        .iter()
        .copied()
        .filter(|&(s, _)| !cur.b[s].is_zero())
        .collect();
    if active.is_empty() {
        return Err(mismatch("the Jordan basis"));
    }
    let mut p = vec![F::zero(); n];
    let mut pieces: Vec<(usize, usize)> = blocks1
        .iter()
        .copied()
        .filter(|b| !active.contains(b))
        .collect();
    if n > n1 {
        pieces.push((n1, n - n1));
    }
    for (s, len) in pieces {
        let sub = &cur.a.block(s, s, len, len) - &Matrix::identity(len);
        let rhs: Vec<F> = cur.b[s..s + len].iter().map(|v| -v.clone()).collect();
        let x = sub
            .solve(&rhs)?
            .ok_or_else(|| mismatch("splitting off fixed blocks"))?;
        p[s..s + len].clone_from_slice(&x);
    }
    if p.iter().any(|v| !v.is_zero()) {
        let ap = cur.a.mul_vec(&p)?;
        let b: Vec<F> = cur
            .b
            .iter()
            .zip(ap)
            .zip(&p)
            .map(|((b, a), x)| b.clone() + a - x)
            .collect();
        cur = AffineOperator::new(cur.a, b)?;
        h.push(Stage::Translation { offset: p })?;
    }
    let mut expected_b = vec![F::zero(); n];
    for &(s, len) in &active {
        expected_b[s..s + len].clone_from_slice(&cur.b[s..s + len]);
    }
    if cur.b != expected_b {
        return Err(mismatch("the translation"));
    }

    let mut s3 = Matrix::identity(n);
    for &(s, len) in &active {
        let a = &cur.b[s..s + len];
        let block = Matrix::new(
            len,
            len,
            (0..len)
                .flat_map(|i| (0..len).map(move |j| (i, j)))
                .map(|(i, j)| if i >= j { a[i - j].clone() } else { F::zero() })
                .collect(),
        )?;
        s3.set_block(s, s, &block);
    }
    cur = cur.change_basis(&s3)?;
    push_linear(&mut h, s3)?;

    let mut a = cur.a.clone();
    for &(s, len) in &active {
        if len > 1 {
            h.push(Stage::BlancPolynomial { start: s, len })?;
            a.set_block(s, s, &Matrix::identity(len));
        }
    }
    cur = AffineOperator::new(a, cur.b)?;

    let firsts: Vec<usize> = active.iter().map(|&(s, _)| s).collect();
    let mut order = firsts.clone();
    order.extend((0..n).filter(|i| !firsts.contains(i) && !(n1..n1 + n0).contains(i)));
    order.extend(n1..n1 + n0);
    let mut perm = Matrix::zeros(n, n);
    for (j, &i) in order.iter().enumerate() {
        perm[(i, j)] = F::one();
    }
    let mut merge = Matrix::identity(n);
    for i in 1..firsts.len() {
        merge[(i, 0)] = F::one();
    }
    let s5 = &perm * &merge;
    cur = cur.change_basis(&s5)?;
    push_linear(&mut h, s5)?;
    let mut e1 = vec![F::zero(); n];
    e1[0] = F::one();
    if cur.b != e1 {
        return Err(mismatch("merging translations"));
    }

    let d = n - 1 - n0;
    let dmat = cur.a.block(1, 1, d, d);
    let segre_part = cur.a.block(1 + d, 1 + d, n0, n0);
    let exact_after = if F::KIND == FieldKind::Real {
        let (neg, stages) = real_flows(&dmat, n)?;
        for s in stages {
            h.push(s)?;
        }
        let pos = d - neg;
        let pairs = neg / 2;
        let mut diag = vec![F::one(); 1 + pos + 2 * pairs];
        if neg % 2 == 1 {
            diag.push(-F::one());
        }
        Matrix::from_diag(&diag).direct_sum(&segre_part)
    } else {
        if dmat != Matrix::identity(d) {
            h.push(Stage::Flow {
                x: 0,
                ys: (1..=d).collect(),
                signs: vec![1; d],
                log: matrix_log_exact(&dmat, false)?,
            })?;
        }
        Matrix::identity(1 + d).direct_sum(&segre_part)
    };
    let canonical = AffineOperator::new(exact_after, e1)?;
    if canonical != target {
        return Err(mismatch("the flows"));
    }
    Ok(PipelineResult {
        witness: h,
        canonical,
        form,
    })
}

fn rational_part<F: Field>(p: &Poly<F>) -> Poly<Rational> {
    Poly::new(p.coeffs().iter().map(|x| x.parts().0).collect())
}

/// Stages of Step 6 over R for the invertible block `D` occupying
/// coordinates `1..=d`; returns the number of negative eigenvalues as well.
fn real_flows<F: Field>(dmat: &Matrix<F>, n: usize) -> Result<(usize, Vec<Stage<F>>)> {
    let d = dmat.rows();
    let mut stages = Vec::new();
    if d == 0 {
        return Ok((0, stages));
    }
    let chi = rational_part(&dmat.charpoly()?);
    let zero = Rational::from_integer(0.into());
    let neg = count_real_roots_with_multiplicity(&chi, None, Some(&zero));
    let mus: Vec<F> = exact_linear_factors(&dmat.charpoly()?.square_free_part())
        .into_iter()
        .filter(|x| x.parts().0 < zero)
        .collect();
    let mut annihilator = Matrix::identity(d);
    for mu in &mus {
        annihilator = &annihilator * &(dmat - &Matrix::identity(d).scale(mu)).pow(d)?;
    }
    let exact_neg = d - annihilator.rank();
    let (pos_log, neg_log) = if exact_neg == neg {
        let mut columns = annihilator.orthogonal_column_basis();
        let pos = columns.len();
        columns.extend(orthogonal_basis(&annihilator.kernel_basis()));
        let t = Matrix::from_columns(d, &columns);
        let split = &(&t.inverse()? * dmat) * &t;
        if neg > 0 {
            let m = embed_block(n, 1, &t);
            let inverse = m.inverse()?;
            stages.push(Stage::Linear { matrix: m, inverse });
        }
        let p = split.block(0, 0, pos, pos);
        let q = split.block(pos, pos, neg, neg).scale(&-F::one());
        (
            (p != Matrix::identity(pos))
                .then(|| matrix_log_exact(&p, true))
                .transpose()?,
            (q != Matrix::identity(neg))
                .then(|| matrix_log_exact(&q, true))
                .transpose()?,
        )
    } else {
        let df = dmat.to_c64().map(|z| z.re);
        let t = numeric_negative_split(&df, neg)?;
        let t_inv = t
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Internal("numerical eigenbasis is singular".into()))?;
        let split = &t_inv * &df * &t;
        let pos = d - neg;
        let leak =
            split.view((0, pos), (pos, neg)).norm() + split.view((pos, 0), (neg, pos)).norm();
        if leak > 1e-9 * split.norm() {
            return Err(Error::Internal(format!(
                "numerical invariant split is off by {leak:.1e}"
            )));
        }
        let split = split.map(|x| Complex64::new(x, 0.0));
        let mut matrix = CMatrix::identity(n, n);
        let mut inverse = CMatrix::identity(n, n);
        matrix
            .view_mut((1, 1), (d, d))
            .copy_from(&t.map(|x| Complex64::new(x, 0.0)));
        inverse
            .view_mut((1, 1), (d, d))
            .copy_from(&t_inv.map(|x| Complex64::new(x, 0.0)));
        stages.push(Stage::NumericLinear { matrix, inverse });
        let p = split.view((0, 0), (pos, pos)).into_owned();
        let q = -split.view((pos, pos), (neg, neg)).into_owned();
        (
            Some(super::matrix_log(&p, true)?),
            Some(super::matrix_log(&q, true)?),
        )
    };
    let pos = d - neg;
    if pos_log.is_some() || neg_log.is_some() || neg > 0 {
        let log = block_diag(&[
            pos_log.unwrap_or_else(|| CMatrix::zeros(pos, pos)),
            neg_log.unwrap_or_else(|| CMatrix::zeros(neg, neg)),
        ]);
        if log.iter().any(|z| *z != Complex64::new(0.0, 0.0)) {
            let mut signs = vec![1; pos];
            signs.extend(vec![-1; neg]);
            stages.push(Stage::Flow {
                x: 0,
                ys: (1..=d).collect(),
                signs,
                log,
            });
        }
    }
    let pairs = neg / 2;
    if pairs > 0 {
        stages.push(Stage::Flow {
            x: 0,
            ys: (1 + pos..1 + pos + 2 * pairs).collect(),
            signs: vec![1; 2 * pairs],
            log: pair_rotation(pairs),
        });
    }
    Ok((neg, stages))
}
