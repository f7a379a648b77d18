//! Deciding topological conjugacy of affine operators and computing their
//! canonical forms.
//!
//! An operator with a fixed point is conjugate to its linear part, and two
//! linear operators without roots of unity among their eigenvalues are
//! conjugate exactly when their nilpotent parts are similar, their
//! contracting and expanding parts have equal sizes (and, over R, equal
//! orientation), and their unit-circle parts are similar (over C, up to
//! complex conjugation). Operators without a fixed point are classified by
//! the nilpotent part alone, plus the sign of the determinant of the
//! nonsingular part over R.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{poly_gcd, Field, FieldKind, GaussianRational, Poly, Rational};
use crate::linalg::{AffineOperator, GMatrix, Matrix, QMatrix};
use crate::spectral::{
    distinct_unit_roots, jordan_types, nonzero_roots_sign, numeric_roots, root_of_unity_factor,
    stratum_counts, stratum_det_signs, unit_parts_similar, JordanType, StratumCounts,
};
use crate::structure::{companion, jordan_block, nilpotent_segre, realify, Segre};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    FixedPointMismatch,
    NilpotentMismatch,
    OrientationMismatch,
    SizeMismatch,
    UnitPartMismatch,
    Conjugate,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

/// Invariants of one operator, as compared by a decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorSummary {
    pub dim: usize,
    pub fixed_point: bool,
    /// Jordan blocks at the eigenvalue 0.
    pub segre: Segre,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strata: Option<StratumCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_sign_01: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_sign_1inf: Option<i8>,
    /// Sign of the determinant of the nonsingular part (no fixed point, over R).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core_det_sign: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    /// The condition that decided the verdict.
    pub clause: String,
    pub left: OperatorSummary,
    pub right: OperatorSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub conjugate: bool,
    pub reason: Reason,
    pub field: FieldKind,
    pub evidence: Evidence,
}

impl Verdict {
    fn new(
        reason: Reason,
        field: FieldKind,
        clause: &str,
        left: OperatorSummary,
        right: OperatorSummary,
    ) -> Self {
        Self {
            conjugate: reason == Reason::Conjugate,
            reason,
            field,
            evidence: Evidence {
                clause: clause.into(),
                left,
                right,
            },
        }
    }
}

/// A point `p` with `f(p) = p`, if there is one.
pub fn fixed_point<F: Field>(f: &AffineOperator<F>) -> Result<Option<Vec<F>>> {
    let n = f.dim();
    let shifted = &f.a - &Matrix::identity(n);
    let rhs: Vec<F> = f.b.iter().map(|v| -v.clone()).collect();
    shifted.solve(&rhs)
}

/// True when `1` is an eigenvalue of `A` and `(A - I)x = -b` has no
/// solution; this happens exactly when `f` has no fixed point.
pub fn corollary_check<F: Field>(f: &AffineOperator<F>) -> Result<bool> {
    let one_is_eigenvalue = f.a.charpoly()?.eval(&F::one()).is_zero();
    Ok(one_is_eigenvalue && fixed_point(f)?.is_none())
}

/// The rational matrix whose unit-circle Jordan structure is that of `A`
/// over R, or of `A ⊕ conj(A)` over C.
fn real_form<F: Field>(a: &Matrix<F>) -> QMatrix {
    match F::KIND {
        FieldKind::Real => a.map(|c| c.parts().0),
        FieldKind::Complex => {
            let g: GMatrix = a.map(|c| {
                let (re, im) = c.parts();
                GaussianRational::new(re, im)
            });
            realify(&g)
        }
    }
}

struct LinearData {
    summary: OperatorSummary,
    counts: StratumCounts,
    real: QMatrix,
}

fn analyze_linear<F: Field>(a: &Matrix<F>, fixed: bool) -> Result<LinearData> {
    let n = a.ensure_square()?;
    let cp = a.charpoly()?;
    if let Some((k, _)) = root_of_unity_factor(&cp, n) {
        return Err(Error::RootOfUnity { k });
    }
    let counts = stratum_counts(&cp)?;
    let (d01, d1inf) = match F::KIND {
        FieldKind::Real => {
            let s = stratum_det_signs(&cp.map(|c| c.parts().0));
            (Some(s.0), Some(s.1))
        }
        FieldKind::Complex => (None, None),
    };
    Ok(LinearData {
        summary: OperatorSummary {
            dim: n,
            fixed_point: fixed,
            segre: nilpotent_segre(a)?,
            strata: Some(counts),
            det_sign_01: d01,
            det_sign_1inf: d1inf,
            core_det_sign: None,
        },
        counts,
        real: real_form(a),
    })
}

fn real_types(m: &QMatrix) -> Result<Vec<JordanType<Rational>>> {
    jordan_types(m)
}

fn compare_linear(field: FieldKind, a: LinearData, b: LinearData) -> Result<Verdict> {
    let real = field == FieldKind::Real;
    let (ca, cb) = (a.counts, b.counts);
    let (sa, sb) = (&a.summary, &b.summary);
    let verdict =
        |reason, clause: &str| Verdict::new(reason, field, clause, sa.clone(), sb.clone());
    if sa.segre != sb.segre {
        return Ok(verdict(
            Reason::NilpotentMismatch,
            "nilpotent parts are not similar",
        ));
    }
    if ca.n01 != cb.n01 {
        return Ok(verdict(
            Reason::SizeMismatch,
            "contracting parts differ in size",
        ));
    }
    if real && sa.det_sign_01 != sb.det_sign_01 {
        return Ok(verdict(
            Reason::OrientationMismatch,
            "contracting parts differ in orientation",
        ));
    }
    if ca.n1 != cb.n1 {
        return Ok(verdict(
            Reason::UnitPartMismatch,
            "unit-circle parts differ in size",
        ));
    }
    if ca.n1 > 0 && !unit_parts_similar(&real_types(&a.real)?, &real_types(&b.real)?) {
        return Ok(verdict(
            Reason::UnitPartMismatch,
            "unit-circle parts are not similar",
        ));
    }
    if ca.n1inf != cb.n1inf {
        return Ok(verdict(
            Reason::SizeMismatch,
            "expanding parts differ in size",
        ));
    }
    if real && sa.det_sign_1inf != sb.det_sign_1inf {
        return Ok(verdict(
            Reason::OrientationMismatch,
            "expanding parts differ in orientation",
        ));
    }
    Ok(verdict(Reason::Conjugate, "all linear invariants agree"))
}

fn ensure_same_dim(n: usize, m: usize) -> Result<()> {
    if n != m {
        return Err(Error::DimensionMismatch(format!(
            "operators act on dimensions {n} and {m}"
        )));
    }
    Ok(())
}

/// Topological conjugacy of the linear operators `x ↦ Ax` and `x ↦ Bx`.
pub fn decide_linear<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Verdict> {
    ensure_same_dim(a.ensure_square()?, b.ensure_square()?)?;
    compare_linear(F::KIND, analyze_linear(a, true)?, analyze_linear(b, true)?)
}

/// Summary of an operator without a fixed point.
fn nofix_summary<F: Field>(f: &AffineOperator<F>) -> Result<OperatorSummary> {
    let core_det_sign = match F::KIND {
        FieldKind::Real => Some(nonzero_roots_sign(&f.a.charpoly()?.map(|c| c.parts().0))),
        FieldKind::Complex => None,
    };
    Ok(OperatorSummary {
        dim: f.dim(),
        fixed_point: false,
        segre: nilpotent_segre(&f.a)?,
        strata: None,
        det_sign_01: None,
        det_sign_1inf: None,
        core_det_sign,
    })
}

fn fixed_summary<F: Field>(f: &AffineOperator<F>) -> Result<OperatorSummary> {
    Ok(OperatorSummary {
        dim: f.dim(),
        fixed_point: true,
        segre: nilpotent_segre(&f.a)?,
        strata: None,
        det_sign_01: None,
        det_sign_1inf: None,
        core_det_sign: None,
    })
}

/// Topological conjugacy of two affine operators over the same field.
pub fn decide_affine<F: Field>(f: &AffineOperator<F>, g: &AffineOperator<F>) -> Result<Verdict> {
    ensure_same_dim(f.dim(), g.dim())?;
    let pf = fixed_point(f)?;
    let pg = fixed_point(g)?;
    match (pf.is_some(), pg.is_some()) {
        (true, true) => compare_linear(
            F::KIND,
            analyze_linear(&f.a, true)?,
            analyze_linear(&g.a, true)?,
        ),
        (true, false) | (false, true) => {
            let left = if pf.is_some() {
                fixed_summary(f)?
            } else {
                nofix_summary(f)?
            };
            let right = if pg.is_some() {
                fixed_summary(g)?
            } else {
                nofix_summary(g)?
            };
            Ok(Verdict::new(
                Reason::FixedPointMismatch,
                F::KIND,
                "exactly one operator has a fixed point",
                left,
                right,
            ))
        }
        (false, false) => {
            let (sa, sb) = (nofix_summary(f)?, nofix_summary(g)?);
            let (reason, clause) = if sa.segre != sb.segre {
                (Reason::NilpotentMismatch, "nilpotent parts are not similar")
            } else if sa.core_det_sign != sb.core_det_sign {
                (
                    Reason::OrientationMismatch,
                    "nonsingular parts differ in orientation",
                )
            } else {
                (
                    Reason::Conjugate,
                    "nilpotent parts similar and orientations agree",
                )
            };
            Ok(Verdict::new(reason, F::KIND, clause, sa, sb))
        }
    }
}

/// Identity key of a group of unit-circle eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitKey {
    /// Monic rational polynomial whose roots are exactly these eigenvalues,
    /// when such a polynomial exists.
    pub factor: Option<Poly<Rational>>,
    /// The eigenvalues with positive imaginary part, 15 decimals each.
    pub roots: Vec<String>,
}

impl PartialOrd for UnitKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UnitKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.roots.cmp(&other.roots).then_with(|| {
            self.factor
                .as_ref()
                .map(ToString::to_string)
                .cmp(&other.factor.as_ref().map(ToString::to_string))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Eigenvalue {
    Scalar(String),
    Unit(UnitKey),
}

/// `count` copies of `J_size(λ)` for each eigenvalue `λ` named by the key;
/// over R unit-circle blocks are realified pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JordanBlockSpec {
    pub eigenvalue: Eigenvalue,
    pub size: usize,
    pub count: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub realified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum CanonicalForm {
    /// `x ↦ (I_k ⊕ [-1] ⊕ J₀)x + e₁`, the `[-1]` present iff `epsilon = -1`.
    NoFixedPoint {
        field: FieldKind,
        k: usize,
        epsilon: i8,
        segre: Segre,
    },
    FixedPointLinear {
        field: FieldKind,
        summands: Vec<JordanBlockSpec>,
    },
}

impl CanonicalForm {
    pub fn field(&self) -> FieldKind {
        match self {
            CanonicalForm::NoFixedPoint { field, .. }
            | CanonicalForm::FixedPointLinear { field, .. } => *field,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CanonicalForm::NoFixedPoint {
                k, epsilon, segre, ..
            } => k + usize::from(*epsilon < 0) + segre.total(),
            CanonicalForm::FixedPointLinear { field, summands } => summands
                .iter()
                .map(|s| {
                    let per_root = match &s.eigenvalue {
                        Eigenvalue::Scalar(_) => 1,
                        Eigenvalue::Unit(key) => match field {
                            FieldKind::Real => 2 * key.roots.len(),
                            FieldKind::Complex => key.roots.len(),
                        },
                    };
                    per_root * s.size * s.count
                })
                .sum(),
        }
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalForm::NoFixedPoint {
                k, epsilon, segre, ..
            } => {
                write!(f, "NoFixedPoint{{k:{k},eps:{:+},segre:{segre}}}", epsilon)
            }
            CanonicalForm::FixedPointLinear { summands, .. } => {
                let parts: Vec<String> = summands
                    .iter()
                    .map(|s| {
                        let lambda = match &s.eigenvalue {
                            Eigenvalue::Scalar(v) => v.clone(),
                            Eigenvalue::Unit(key) => match &key.factor {
                                Some(p) => format!("roots of {p}"),
                                None => key.roots.join(", "),
                            },
                        };
                        let r = if s.realified { "^R" } else { "" };
                        if s.count == 1 {
                            format!("J{}({lambda}){r}", s.size)
                        } else {
                            format!("{}×J{}({lambda}){r}", s.count, s.size)
                        }
                    })
                    .collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

fn format_root(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-16 { 0.0 } else { x };
    format!("{:.15}{:+.15}i", clean(z.re), clean(z.im))
}

/// Monic rational polynomial with exactly the given roots, if one divides `p`.
fn recognize_factor(roots: &[Complex64], p: &Poly<Rational>) -> Option<Poly<Rational>> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        coeffs = next;
    }
    let monic = p.monic();
    let ell = monic
        .coeffs()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        });
    let scale = ell.to_f64()?;
    let candidate = Poly::new(
        coeffs
            .iter()
            .map(|c| {
                let v = (c.re * scale).round();
                Rational::from_float(v).map(|v| v / Rational::from_integer(ell.clone()))
            })
            .collect::<Option<Vec<_>>>()?,
    );
    (candidate.degree() == roots.len() && candidate.divides(&monic)).then_some(candidate)
}

/// Unit-circle eigenvalue groups of a rational matrix: the key, the Jordan
/// partition at each root, and the rational factor when one exists.
fn unit_groups(m: &QMatrix) -> Result<Vec<(UnitKey, Vec<usize>)>> {
    let mut out = Vec::new();
    for t in jordan_types(m)? {
        let u = distinct_unit_roots(&t.roots);
        if u == 0 {
            continue;
        }
        let mirror = poly_gcd(&t.roots, &t.roots.reciprocal());
        let mut factor = (distinct_unit_roots(&mirror) == mirror.degree()).then(|| mirror.clone());
        let roots = match &factor {
            Some(f) => numeric_roots(f),
            None => {
                let mut r = numeric_roots(&mirror);
                r.sort_by(|a, b| (a.norm() - 1.0).abs().total_cmp(&(b.norm() - 1.0).abs()));
                r.truncate(u);
                factor =
                    recognize_factor(&r, &t.roots).filter(|f| distinct_unit_roots(f) == f.degree());
                match &factor {
                    Some(f) => numeric_roots(f),
                    None => r,
                }
            }
        };
        let mut upper: Vec<Complex64> = roots.into_iter().filter(|z| z.im > 0.0).collect();
        upper.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let key = UnitKey {
            factor,
            roots: upper.into_iter().map(format_root).collect(),
        };
        out.push((key, t.partition));
    }
    Ok(out)
}

fn scalar_blocks(value: &str, count: usize) -> Option<JordanBlockSpec> {
    (count > 0).then(|| JordanBlockSpec {
        eigenvalue: Eigenvalue::Scalar(value.into()),
        size: 1,
        count,
        realified: false,
    })
}

fn grouped(sizes: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &s in sizes {
        match out.last_mut() {
            Some((k, c)) if *k == s => *c += 1,
            _ => out.push((s, 1)),
        }
    }
    out
}

/// Canonical form of the linear operator `x ↦ Ax`.
pub fn canonical_linear<F: Field>(a: &Matrix<F>) -> Result<CanonicalForm> {
    let data = analyze_linear(a, true)?;
    let real = F::KIND == FieldKind::Real;
    let mut summands = Vec::new();
    for (size, count) in grouped(data.summary.segre.sizes()) {
        summands.push(JordanBlockSpec {
            eigenvalue: Eigenvalue::Scalar("0".into()),
            size,
            count,
            realified: false,
        });
    }
    let c = data.counts;
    let flip01 = usize::from(real && data.summary.det_sign_01 == Some(-1));
    summands.extend(scalar_blocks("-1/2", flip01));
    summands.extend(scalar_blocks("1/2", c.n01 - flip01));
    if c.n1 > 0 {
        let mut units = Vec::new();
        for (key, partition) in unit_groups(&data.real)? {
            for (size, count) in grouped(&partition) {
                units.push(JordanBlockSpec {
                    eigenvalue: Eigenvalue::Unit(key.clone()),
                    size,
                    count,
                    realified: real,
                });
            }
        }
        units.sort_by(|x, y| match (&x.eigenvalue, &y.eigenvalue) {
            (Eigenvalue::Unit(kx), Eigenvalue::Unit(ky)) => kx.cmp(ky).then(y.size.cmp(&x.size)),
            _ => Ordering::Equal,
        });
        summands.extend(units);
    }
    let flip1inf = usize::from(real && data.summary.det_sign_1inf == Some(-1));
    summands.extend(scalar_blocks("-2", flip1inf));
    summands.extend(scalar_blocks("2", c.n1inf - flip1inf));
    Ok(CanonicalForm::FixedPointLinear {
        field: F::KIND,
        summands,
    })
}

/// Canonical form of an affine operator.
pub fn canonical_affine<F: Field>(f: &AffineOperator<F>) -> Result<CanonicalForm> {
    if fixed_point(f)?.is_some() {
        return canonical_linear(&f.a);
    }
    let s = nofix_summary(f)?;
    let epsilon = s.core_det_sign.unwrap_or(1);
    let k = f
        .dim()
        .checked_sub(s.segre.total() + usize::from(epsilon < 0))
        .filter(|&k| k >= 1)
        .ok_or_else(|| {
            Error::Internal("operator without fixed point has no eigenvalue 1".into())
        })?;
    Ok(CanonicalForm::NoFixedPoint {
        field: F::KIND,
        k,
        epsilon,
        segre: s.segre,
    })
}

fn scalar_value(s: &str) -> Result<Rational> {
    crate::exact::scalar::parse_rational(s)
}

fn lift<F: Field>(m: &QMatrix) -> Matrix<F> {
    m.map(|c| F::from_rational(c.clone()))
}

/// Gaussian polynomial `v` with `v · conj(v) = u` whose roots are the roots of
/// `u` in the upper half plane.
fn upper_half_factor(u: &Poly<Rational>) -> Option<Poly<GaussianRational>> {
    let upper: Vec<Complex64> = numeric_roots(u)
        .into_iter()
        .filter(|z| z.im > 0.0)
        .collect();
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in &upper {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        coeffs = next;
    }
    let ell = u
        .monic()
        .coeffs()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        });
    let scale = ell.to_f64()?;
    let den = Rational::from_integer(ell);
    let v = Poly::new(
        coeffs
            .iter()
            .map(|c| {
                let re = Rational::from_float((c.re * scale).round())? / den.clone();
                let im = Rational::from_float((c.im * scale).round())? / den.clone();
                Some(GaussianRational::new(re, im))
            })
            .collect::<Option<Vec<_>>>()?,
    );
    let norm = v.norm_poly();
    (norm == u.monic()).then_some(v)
}

fn unit_block<F: Field>(
    field: FieldKind,
    key: &UnitKey,
    size: usize,
    count: usize,
) -> Result<Vec<Matrix<F>>> {
    let u = key.factor.as_ref().ok_or_else(|| {
        Error::Unsupported("unit-circle eigenvalues without a rational factor".into())
    })?;
    match field {
        FieldKind::Real => {
            let c = lift::<F>(&companion(&u.pow(size))?);
            Ok(vec![c; count])
        }
        FieldKind::Complex => {
            if let Some(v) = upper_half_factor(u) {
                let c = companion(&v.pow(size))?;
                let entries = c
                    .entries()
                    .iter()
                    .map(|z| F::from_parts(z.re.clone(), z.im.clone()))
                    .collect::<Result<Vec<F>>>()?;
                Ok(vec![Matrix::new(c.rows(), c.cols(), entries)?; count])
            } else if count.is_multiple_of(2) {
                let c = lift::<F>(&companion(&u.pow(size))?);
                Ok(vec![c; count / 2])
            } else {
                Err(Error::Unsupported(format!(
                    "no Gaussian factor splits the unit-circle eigenvalues of {u}"
                )))
            }
        }
    }
}

/// The literal operator described by a canonical form.
pub fn realize<F: Field>(form: &CanonicalForm) -> Result<AffineOperator<F>> {
    if form.field() != F::KIND {
        return Err(Error::FieldMismatch(format!(
            "canonical form over {} realized over {}",
            form.field(),
            F::KIND
        )));
    }
    match form {
        CanonicalForm::NoFixedPoint {
            k, epsilon, segre, ..
        } => {
            let mut a = Matrix::<F>::identity(*k);
            if *epsilon < 0 {
                a = a.direct_sum(&Matrix::from_diag(&[-F::one()]));
            }
            a = a.direct_sum(&segre.build());
            let mut b = vec![F::zero(); a.rows()];
            b[0] = F::one();
            AffineOperator::new(a, b)
        }
        CanonicalForm::FixedPointLinear { field, summands } => {
            let mut blocks: Vec<Matrix<F>> = Vec::new();
            for s in summands {
                match &s.eigenvalue {
                    Eigenvalue::Scalar(v) => {
                        let lambda = F::from_rational(scalar_value(v)?);
                        for _ in 0..s.count {
                            blocks.push(jordan_block(lambda.clone(), s.size)?);
                        }
                    }
                    Eigenvalue::Unit(key) => {
                        blocks.extend(unit_block::<F>(*field, key, s.size, s.count)?)
                    }
                }
            }
            AffineOperator::linear(Matrix::direct_sum_all(&blocks))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn op(a: QMatrix, b: &[i64]) -> AffineOperator<Rational> {
        AffineOperator::new(a, b.iter().map(|&v| q(v, 1)).collect()).unwrap()
    }

    fn diag(vals: &[(i64, i64)]) -> QMatrix {
        QMatrix::from_diag(&vals.iter().map(|&(n, d)| q(n, d)).collect::<Vec<_>>())
    }

    #[test]
    fn fixed_point_examples() {
        let f = op(diag(&[(2, 1)]), &[1]);
        assert_eq!(fixed_point(&f).unwrap(), Some(vec![q(-1, 1)]));
        let g = op(jordan_block(q(1, 1), 2).unwrap(), &[1, 0]);
        assert_eq!(fixed_point(&g).unwrap(), None);
        let id = op(diag(&[(1, 1)]), &[0]);
        assert_eq!(fixed_point(&id).unwrap(), Some(vec![q(0, 1)]));
    }

    #[test]
    fn decide_linear_examples() {
        let v = decide_linear(&diag(&[(1, 2), (3, 1)]), &diag(&[(1, 3), (2, 1)])).unwrap();
        assert_eq!(v.reason, Reason::Conjugate);
        let v = decide_linear(&diag(&[(1, 2)]), &diag(&[(-1, 2)])).unwrap();
        assert_eq!(v.reason, Reason::OrientationMismatch);
        assert!(!v.conjugate);
        let rot = QMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
        assert_eq!(decide_linear(&rot, &rot), Err(Error::RootOfUnity { k: 4 }));

        let a = GMatrix::from_rows(vec![vec!["3/5+4/5 i".parse().unwrap()]]).unwrap();
        let b = GMatrix::from_rows(vec![vec!["3/5-4/5 i".parse().unwrap()]]).unwrap();
        assert_eq!(decide_linear(&a, &b).unwrap().reason, Reason::Conjugate);
    }

    #[test]
    fn canonical_linear_examples() {
        let render = |a: &QMatrix| canonical_linear(a).unwrap().to_string();
        assert_eq!(
            render(&diag(&[(3, 1), (1, 4), (0, 1)])),
            "{J1(0), J1(1/2), J1(2)}"
        );
        assert_eq!(render(&diag(&[(-3, 1), (-1, 4)])), "{J1(-1/2), J1(-2)}");
        assert_eq!(render(&diag(&[(-3, 1), (-5, 1)])), "{2×J1(2)}");
        let rot =
            QMatrix::from_rows(vec![vec![q(3, 5), q(-4, 5)], vec![q(4, 5), q(3, 5)]]).unwrap();
        assert_eq!(render(&rot), "{J1(roots of x^2 - 6/5*x + 1)^R}");
    }

    #[test]
    fn canonical_affine_examples() {
        let f = op(diag(&[(1, 1)]), &[1]);
        assert_eq!(
            canonical_affine(&f).unwrap().to_string(),
            "NoFixedPoint{k:1,eps:+1,segre:[]}"
        );
        let f = op(diag(&[(1, 1), (-1, 1)]), &[1, 0]);
        assert_eq!(
            canonical_affine(&f).unwrap().to_string(),
            "NoFixedPoint{k:1,eps:-1,segre:[]}"
        );
        let f = op(diag(&[(1, 1), (0, 1)]), &[1, 0]);
        assert_eq!(
            canonical_affine(&f).unwrap().to_string(),
            "NoFixedPoint{k:1,eps:+1,segre:[1]}"
        );
        let a = GMatrix::from_rows(vec![
            vec!["1".parse().unwrap(), "0".parse().unwrap()],
            vec!["0".parse().unwrap(), GaussianRational::i()],
        ])
        .unwrap();
        let f = AffineOperator::new(a, vec!["1".parse().unwrap(), "0".parse().unwrap()]).unwrap();
        assert_eq!(
            canonical_affine(&f).unwrap().to_string(),
            "NoFixedPoint{k:2,eps:+1,segre:[]}"
        );
    }

    #[test]
    fn decide_affine_examples() {
        let f = op(diag(&[(1, 1), (-2, 1)]), &[1, 0]);
        let g = op(diag(&[(1, 1), (2, 1)]), &[1, 0]);
        assert_eq!(
            decide_affine(&f, &g).unwrap().reason,
            Reason::OrientationMismatch
        );
        assert_eq!(
            decide_affine(&f.to_gaussian(), &g.to_gaussian())
                .unwrap()
                .reason,
            Reason::Conjugate
        );
        let f = op(diag(&[(2, 1)]), &[1]);
        let g = op(diag(&[(1, 1)]), &[1]);
        assert_eq!(
            decide_affine(&f, &g).unwrap().reason,
            Reason::FixedPointMismatch
        );
    }

    #[test]
    fn corollary_examples() {
        assert!(corollary_check(&op(jordan_block(q(1, 1), 2).unwrap(), &[1, 0])).unwrap());
        assert!(!corollary_check(&op(diag(&[(2, 1)]), &[1])).unwrap());
        assert!(corollary_check(&op(QMatrix::identity(2), &[1, 1])).unwrap());
    }

    #[test]
    fn realize_round_trip() {
        let rot =
            QMatrix::from_rows(vec![vec![q(3, 5), q(-4, 5)], vec![q(4, 5), q(3, 5)]]).unwrap();
        let a = diag(&[(-3, 1), (1, 4), (0, 1)]).direct_sum(&rot);
        let form = canonical_linear(&a).unwrap();
        let g = realize::<Rational>(&form).unwrap();
        assert_eq!(canonical_linear(&g.a).unwrap(), form);
        assert!(decide_linear(&a, &g.a).unwrap().conjugate);

        let z = GMatrix::from_rows(vec![vec!["3/5+4/5 i".parse().unwrap()]]).unwrap();
        let form = canonical_linear(&z).unwrap();
        let g = realize::<GaussianRational>(&form).unwrap();
        assert_eq!(g.dim(), 1);
        assert!(decide_linear(&z, &g.a).unwrap().conjugate);
    }
}
