//! Explicit conjugating homeomorphisms.
//!
//! A witness `h` for operators `f` and `g` satisfies `f ∘ h = h ∘ g`: it sends
//! points in the coordinates of `g` to points in the coordinates of `f`. A
//! witness is a chain of stages `h = h₁ ∘ h₂ ∘ … ∘ h_k`, each of which is
//! affine, polynomial or a matrix flow `y ↦ Σ e^{xG} y` driven by one
//! coordinate `x`. Stages with exact data are evaluated exactly on exact
//! points; flows and numerically computed bases force double precision.

pub mod matfn;
pub mod pipeline;

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conjugacy::fixed_point;
use crate::error::{Error, Result};
use crate::exact::{rational_to_f64, scalar::text, Field, FieldKind, Rational};
use crate::linalg::{AffineOperator, Matrix};

pub use matfn::{eigenvalues, expm, matrix_log, matrix_log_exact, CMatrix};
pub use pipeline::{nofix_pipeline, PipelineResult};

/// A point handled by a witness.
#[derive(Clone, Debug, PartialEq)]
pub enum Point<F: Field> {
    Exact(Vec<F>),
    Numeric(Vec<Complex64>),
}

impl<F: Field> Point<F> {
    pub fn len(&self) -> usize {
        match self {
            Point::Exact(v) => v.len(),
            Point::Numeric(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        match self {
            Point::Exact(v) => v.iter().map(Field::to_c64).collect(),
            Point::Numeric(v) => v.clone(),
        }
    }
}

/// Arithmetic shared by exact scalars and doubles, enough to evaluate the
/// polynomial stage.
trait Ring: Clone {
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn int(k: i64) -> Self;
}

impl<F: Field> Ring for F {
    fn plus(&self, o: &Self) -> Self {
        self.clone() + o
    }
    fn minus(&self, o: &Self) -> Self {
        self.clone() - o
    }
    fn times(&self, o: &Self) -> Self {
        self.clone() * o
    }
    fn int(k: i64) -> Self {
        F::from_i64(k)
    }
}

impl Ring for Complex64 {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn int(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }
}

/// `C(φ, r)` as a polynomial in `φ`.
fn binom<R: Ring>(phi: &R, r: usize, inv: impl Fn(i64) -> R) -> R {
    let mut acc = R::int(1);
    let mut fact = 1i64;
    for j in 0..r {
        acc = acc.times(&phi.minus(&R::int(j as i64)));
        fact *= j as i64 + 1;
    }
    acc.times(&inv(fact))
}

/// Correction term `P_k` of the polynomial map that straightens
/// `(J_m(1), e₁)` into `(I_m, e₁)`; `x` is 0-indexed.
fn blanc_term<R: Ring>(x: &[R], k: usize, inv: &impl Fn(i64) -> R) -> R {
    let sign = |e: usize| {
        if e.is_multiple_of(2) {
            R::int(1)
        } else {
            R::int(-1)
        }
    };
    let x1 = &x[0];
    let mut p =
        sign(k)
            .times(&R::int(k as i64))
            .times(&binom(&x1.plus(&R::int(k as i64 - 1)), k + 1, inv));
    for i in 1..k {
        let c = binom(&x1.plus(&R::int(i as i64 - 1)), i, inv);
        p = p.plus(&sign(i).times(&c).times(&x[k - i]));
    }
    p
}

/// `x ↦ (x₁, x₂ + P₁, …, x_m + P_{m-1})` on the block.
fn blanc_apply<R: Ring>(x: &mut [R], inv: impl Fn(i64) -> R) {
    let original = x.to_vec();
    for k in 1..x.len() {
        x[k] = original[k].plus(&blanc_term(&original, k, &inv));
    }
}

fn blanc_unapply<R: Ring>(x: &mut [R], inv: impl Fn(i64) -> R) {
    for k in 1..x.len() {
        let p = blanc_term(x, k, &inv);
        x[k] = x[k].minus(&p);
    }
}

fn field_inv<F: Field>(k: i64) -> F {
    F::one() / F::from_i64(k)
}

fn float_inv(k: i64) -> Complex64 {
    Complex64::new(1.0 / k as f64, 0.0)
}

mod cmat {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(serde::de::Error::custom("ragged numeric matrix"));
        }
        Ok(CMatrix::from_fn(n, m, |i, j| {
            Complex64::new(rows[i][j][0], rows[i][j][1])
        }))
    }
}

/// One factor of a witness, acting on the whole space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", bound = "")]
pub enum Stage<F: Field> {
    /// `x ↦ x + offset`.
    Translation {
        #[serde(with = "text::vec")]
        offset: Vec<F>,
    },
    /// `x ↦ M x`.
    Linear {
        matrix: Matrix<F>,
        inverse: Matrix<F>,
    },
    /// `x ↦ M x` with a numerically computed `M`.
    NumericLinear {
        #[serde(with = "cmat")]
        matrix: CMatrix,
        #[serde(with = "cmat")]
        inverse: CMatrix,
    },
    /// Inverse of the straightening polynomial map on coordinates
    /// `start..start + len`, so that `(J_len(1), e₁)` is conjugated to
    /// `(I_len, e₁)`.
    BlancPolynomial { start: usize, len: usize },
    /// `y ↦ Σ e^{xG} y` on the coordinates `ys`, driven by coordinate `x`,
    /// where `Σ = diag(signs)` commutes with `G`.
    Flow {
        x: usize,
        ys: Vec<usize>,
        signs: Vec<i8>,
        #[serde(with = "cmat")]
        log: CMatrix,
    },
}

impl<F: Field> Stage<F> {
    fn is_exact(&self) -> bool {
        matches!(
            self,
            Stage::Translation { .. } | Stage::Linear { .. } | Stage::BlancPolynomial { .. }
        )
    }

    fn name(&self) -> &'static str {
        match self {
            Stage::Translation { .. } => "Translation",
            Stage::Linear { .. } | Stage::NumericLinear { .. } => "Linear",
            Stage::BlancPolynomial { .. } => "BlancPolynomial",
            Stage::Flow { .. } => "Flow",
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        let ok = match self {
            Stage::Translation { offset } => offset.len() == dim,
            Stage::Linear { matrix, inverse } => {
                matrix.rows() == dim
                    && matrix.cols() == dim
                    && inverse.rows() == dim
                    && inverse.cols() == dim
            }
            Stage::NumericLinear { matrix, inverse } => {
                matrix.shape() == (dim, dim) && inverse.shape() == (dim, dim)
            }
            Stage::BlancPolynomial { start, len } => start + len <= dim,
            Stage::Flow { x, ys, signs, log } => {
                *x < dim
                    && ys.iter().all(|&y| y < dim && y != *x)
                    && signs.len() == ys.len()
                    && signs.iter().all(|s| s.abs() == 1)
                    && log.shape() == (ys.len(), ys.len())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{} stage does not fit dimension {dim}",
                self.name()
            )))
        }
    }

    fn apply(&self, p: Point<F>, forward: bool) -> Result<Point<F>> {
        match (self, p) {
            (Stage::Translation { offset }, Point::Exact(v)) => Ok(Point::Exact(
                v.into_iter()
                    .zip(offset)
                    .map(|(a, o)| if forward { a + o } else { a - o })
                    .collect(),
            )),
            (Stage::Linear { matrix, inverse }, Point::Exact(v)) => Ok(Point::Exact(
                if forward { matrix } else { inverse }.mul_vec(&v)?,
            )),
            (Stage::BlancPolynomial { start, len }, Point::Exact(mut v)) => {
                let block = &mut v[*start..start + len];
                if forward {
                    blanc_unapply(block, field_inv::<F>);
                } else {
                    blanc_apply(block, field_inv::<F>);
                }
                Ok(Point::Exact(v))
            }
            (stage, p) => Ok(Point::Numeric(stage.apply_numeric(p.to_c64(), forward)?)),
        }
    }

    fn apply_numeric(&self, mut v: Vec<Complex64>, forward: bool) -> Result<Vec<Complex64>> {
        match self {
            Stage::Translation { offset } => {
                for (a, o) in v.iter_mut().zip(offset) {
                    let o = o.to_c64();
                    *a = if forward { *a + o } else { *a - o };
                }
            }
            Stage::Linear { matrix, inverse } => {
                let m = if forward { matrix } else { inverse }.to_c64();
                v = (m * CMatrix::from_column_slice(v.len(), 1, &v))
                    .iter()
                    .copied()
                    .collect();
            }
            Stage::NumericLinear { matrix, inverse } => {
                let m = if forward { matrix } else { inverse };
                v = (m * CMatrix::from_column_slice(v.len(), 1, &v))
                    .iter()
                    .copied()
                    .collect();
            }
            Stage::BlancPolynomial { start, len } => {
                let block = &mut v[*start..start + len];
                if forward {
                    blanc_unapply(block, float_inv);
                } else {
                    blanc_apply(block, float_inv);
                }
            }
            Stage::Flow { x, ys, signs, log } => {
                let t = v[*x];
                let e = expm(&(log * if forward { t } else { -t }))?;
                let sigma: Vec<f64> = signs.iter().map(|&s| f64::from(s)).collect();
                let mut y = CMatrix::from_fn(ys.len(), 1, |i, _| v[ys[i]]);
                if forward {
                    y = e * y;
                    for (i, s) in sigma.iter().enumerate() {
                        y[i] *= s;
                    }
                } else {
                    for (i, s) in sigma.iter().enumerate() {
                        y[i] *= s;
                    }
                    y = e * y;
                }
                for (i, &idx) in ys.iter().enumerate() {
                    v[idx] = y[i];
                }
            }
        }
        Ok(v)
    }
}

/// Kind of a witness, by its stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    Translation,
    Linear,
    BlancPolynomial,
    Flow,
    Composite,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A conjugating homeomorphism `h = h₁ ∘ … ∘ h_k` of `F^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Witness<F: Field> {
    pub field: FieldKind,
    pub dim: usize,
    pub stages: Vec<Stage<F>>,
}

impl<F: Field> Witness<F> {
    pub fn identity(dim: usize) -> Self {
        Self {
            field: F::KIND,
            dim,
            stages: Vec::new(),
        }
    }

    pub fn from_stages(dim: usize, stages: Vec<Stage<F>>) -> Result<Self> {
        for s in &stages {
            s.check(dim)?;
        }
        Ok(Self {
            field: F::KIND,
            dim,
            stages,
        })
    }

    /// `self ∘ other`.
    pub fn compose(mut self, other: Witness<F>) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "composing witnesses of dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        self.stages.extend(other.stages);
        Ok(self)
    }

    /// Appends `stage` as the innermost factor.
    pub fn push(&mut self, stage: Stage<F>) -> Result<()> {
        stage.check(self.dim)?;
        self.stages.push(stage);
        Ok(())
    }

    pub fn kind(&self) -> WitnessKind {
        let mut names = self.stages.iter().map(Stage::name);
        match (names.next(), names.next()) {
            (None, _) => WitnessKind::Linear,
            (Some(n), None) => match n {
                "Translation" => WitnessKind::Translation,
                "Linear" => WitnessKind::Linear,
                "BlancPolynomial" => WitnessKind::BlancPolynomial,
                _ => WitnessKind::Flow,
            },
            _ => WitnessKind::Composite,
        }
    }

    /// Whether every stage evaluates exactly.
    pub fn is_exact(&self) -> bool {
        self.stages.iter().all(Stage::is_exact)
    }

    fn check_point(&self, p: &Point<F>) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for a witness of dimension {}",
                p.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// `h(x)`.
    pub fn forward(&self, x: &Point<F>) -> Result<Point<F>> {
        self.check_point(x)?;
        self.stages
            .iter()
            .rev()
            .try_fold(x.clone(), |p, s| s.apply(p, true))
    }

    /// `h⁻¹(y)`.
    pub fn inverse(&self, y: &Point<F>) -> Result<Point<F>> {
        self.check_point(y)?;
        self.stages
            .iter()
            .try_fold(y.clone(), |p, s| s.apply(p, false))
    }

    /// `h(x)` for an exact witness.
    pub fn forward_exact(&self, x: &[F]) -> Result<Vec<F>> {
        match self.forward(&Point::Exact(x.to_vec()))? {
            Point::Exact(v) => Ok(v),
            Point::Numeric(_) => Err(Error::Unsupported("witness has numerical stages".into())),
        }
    }

    /// `h⁻¹(y)` for an exact witness.
    pub fn inverse_exact(&self, y: &[F]) -> Result<Vec<F>> {
        match self.inverse(&Point::Exact(y.to_vec()))? {
            Point::Exact(v) => Ok(v),
            Point::Numeric(_) => Err(Error::Unsupported("witness has numerical stages".into())),
        }
    }
}

/// `h(x) = x + p` for a fixed point `p` of `f`; conjugates `f` to its linear
/// part.
pub fn translation_witness<F: Field>(f: &AffineOperator<F>) -> Result<Witness<F>> {
    let p = fixed_point(f)?
        .ok_or_else(|| Error::InvalidArgument("operator has no fixed point".into()))?;
    Witness::from_stages(f.dim(), vec![Stage::Translation { offset: p }])
}

/// `h(x) = S x` conjugating `(J_m(1), a)` to `(J_m(1), e₁)` when `a₁ ≠ 0`.
/// `S` is `a₁` times the lower-triangular Toeplitz matrix with first column
/// `a / a₁`; it commutes with `J_m(1)` and sends `e₁` to `a`.
pub fn step3_witness<F: Field>(a: &[F]) -> Result<Witness<F>> {
    let m = a.len();
    if a.first().is_none_or(Field::is_zero) {
        return Err(Error::InvalidArgument(
            "leading translation coordinate must be nonzero".into(),
        ));
    }
    let s = Matrix::new(
        m,
        m,
        (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| if i >= j { a[i - j].clone() } else { F::zero() })
            .collect(),
    )?;
    let inverse = s.inverse()?;
    Witness::from_stages(m, vec![Stage::Linear { matrix: s, inverse }])
}

/// Polynomial witness conjugating `(J_m(1), e₁)` to `(I_m, e₁)`.
pub fn blanc_witness<F: Field>(m: usize) -> Witness<F> {
    Witness {
        field: F::KIND,
        dim: m,
        stages: vec![Stage::BlancPolynomial { start: 0, len: m }],
    }
}

/// `h(x, y) = (x, ε e^{x log F} y)`, conjugating `(I₁, [1]) ⊕ (εF, 0)` to
/// `(I₁, [1]) ⊕ (εI, 0)`. Over R the logarithm must be real.
pub fn flow_witness<F: Field>(m: &Matrix<F>, epsilon: i8) -> Result<Witness<F>> {
    if epsilon.abs() != 1 {
        return Err(Error::InvalidArgument(format!(
            "sign must be ±1, got {epsilon}"
        )));
    }
    let n = m.ensure_square()?;
    let log = matrix_log_exact(m, F::KIND == FieldKind::Real)?;
    Witness::from_stages(
        n + 1,
        vec![Stage::Flow {
            x: 0,
            ys: (1..=n).collect(),
            signs: vec![epsilon; n],
            log,
        }],
    )
}

/// Outcome of checking `f ∘ h = h ∘ g` on sample points. Distances are
/// absolute for vectors of norm at most 1 and relative beyond that.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    /// `max |f(h(x)) - h(g(x))| / max(1, |h(g(x))|)`.
    pub conjugacy: f64,
    /// `max |h⁻¹(h(x)) - x| / max(1, |x|)`.
    pub inverse: f64,
    /// Sample point attaining the larger of the two.
    pub worst_point: Vec<[f64; 2]>,
    pub samples: usize,
    pub seed: u64,
    /// Whether the evaluation was carried out in exact arithmetic.
    pub exact: bool,
}

impl Residual {
    pub fn max(&self) -> f64 {
        self.conjugacy.max(self.inverse)
    }
}

fn sample_point<F: Field>(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<F>> {
    let mut coord = || Rational::new(rng.random_range(-128i64..=128).into(), 64.into());
    (0..n)
        .map(|_| {
            let re = coord();
            let im = if F::KIND == FieldKind::Complex {
                coord()
            } else {
                Rational::from_integer(0.into())
            };
            F::from_parts(re, im)
        })
        .collect()
}

/// `|a - b| / max(1, |b|)`.
fn exact_distance<F: Field>(a: &[F], b: &[F]) -> f64 {
    let sq = a
        .iter()
        .zip(b)
        .fold(Rational::from_integer(0.into()), |acc, (x, y)| {
            let (re, im) = (x.clone() - y).parts();
            acc + &re * &re + &im * &im
        });
    let size = b.iter().map(|y| y.to_c64().norm_sqr()).sum::<f64>().sqrt();
    rational_to_f64(&sq).sqrt() / size.max(1.0)
}

/// `|a - b| / max(1, |b|)`.
fn numeric_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let size = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
        / size.max(1.0)
}

fn apply_numeric<F: Field>(f: &AffineOperator<F>, x: &[Complex64]) -> Vec<Complex64> {
    let a = f.a.to_c64();
    let ax = a * CMatrix::from_column_slice(x.len(), 1, x);
    ax.iter().zip(&f.b).map(|(u, v)| u + v.to_c64()).collect()
}

/// Checks `f ∘ h = h ∘ g` and `h⁻¹ ∘ h = id` at `samples` points drawn from
/// `[-2, 2]^n` (both parts over C) with a seeded generator.
pub fn verify_conjugacy<F: Field>(
    f: &AffineOperator<F>,
    g: &AffineOperator<F>,
    h: &Witness<F>,
    samples: usize,
    seed: u64,
) -> Result<Residual> {
    let n = f.dim();
    if g.dim() != n || h.dim != n {
        return Err(Error::DimensionMismatch(format!(
            "operators of dimensions {n} and {} with a witness of dimension {}",
            g.dim(),
            h.dim
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exact = h.is_exact();
    let mut out = Residual {
        conjugacy: 0.0,
        inverse: 0.0,
        worst_point: Vec::new(),
        samples,
        seed,
        exact,
    };
    let mut worst = -1.0f64;
    for _ in 0..samples {
        let x = sample_point::<F>(&mut rng, n)?;
        let (conj, inv) = if exact {
            let hx = h.forward_exact(&x)?;
            let lhs = f.apply(&hx)?;
            let rhs = h.forward_exact(&g.apply(&x)?)?;
            let back = h.inverse_exact(&hx)?;
            (exact_distance(&lhs, &rhs), exact_distance(&back, &x))
        } else {
            let xc: Vec<Complex64> = x.iter().map(Field::to_c64).collect();
            let hx = h.forward(&Point::Numeric(xc.clone()))?.to_c64();
            let lhs = apply_numeric(f, &hx);
            let rhs = h.forward(&Point::Numeric(apply_numeric(g, &xc)))?.to_c64();
            let back = h.inverse(&Point::Numeric(hx))?.to_c64();
            (numeric_distance(&lhs, &rhs), numeric_distance(&back, &xc))
        };
        if !conj.is_finite() || !inv.is_finite() {
            return Err(Error::Internal(
                "witness produced a non-finite value".into(),
            ));
        }
        out.conjugacy = out.conjugacy.max(conj);
        out.inverse = out.inverse.max(inv);
        if conj.max(inv) > worst {
            worst = conj.max(inv);
            out.worst_point = x
                .iter()
                .map(|v| {
                    let z = v.to_c64();
                    [z.re, z.im]
                })
                .collect();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::QMatrix;
    use crate::structure::jordan_block;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn unit_translation(a: QMatrix) -> AffineOperator<Rational> {
        let mut b = vec![q(0, 1); a.rows()];
        b[0] = q(1, 1);
        AffineOperator::new(a, b).unwrap()
    }

    #[test]
    fn translation_to_linear_part() {
        let f = AffineOperator::new(QMatrix::from_i64_rows(&[&[2]]), vec![q(1, 1)]).unwrap();
        let h = translation_witness(&f).unwrap();
        assert_eq!(h.kind(), WitnessKind::Translation);
        assert_eq!(h.forward_exact(&[q(0, 1)]).unwrap(), vec![q(-1, 1)]);
        let r = verify_conjugacy(&f, &f.linear_part(), &h, 20, 1).unwrap();
        assert!(r.exact);
        assert_eq!(r.max(), 0.0);
    }

    #[test]
    fn toeplitz_moves_translation() {
        let a = vec![q(2, 1), q(-1, 1), q(3, 1)];
        let h = step3_witness(&a).unwrap();
        let j = jordan_block(q(1, 1), 3).unwrap();
        let f = AffineOperator::new(j.clone(), a).unwrap();
        let g = unit_translation(j);
        assert_eq!(verify_conjugacy(&f, &g, &h, 20, 2).unwrap().max(), 0.0);
        assert!(step3_witness(&[q(0, 1), q(1, 1)]).is_err());
    }

    #[test]
    fn polynomial_straightening() {
        for m in 1..=6 {
            let h = blanc_witness::<Rational>(m);
            let f = unit_translation(jordan_block(q(1, 1), m).unwrap());
            let g = unit_translation(QMatrix::identity(m));
            let r = verify_conjugacy(&f, &g, &h, 30, m as u64).unwrap();
            assert_eq!(r.max(), 0.0, "m = {m}");
        }
    }

    #[test]
    fn scalar_flow() {
        let h = flow_witness(&QMatrix::from_i64_rows(&[&[2]]), 1).unwrap();
        let y = h
            .forward(&Point::Exact(vec![q(0, 1), q(1, 1)]))
            .unwrap()
            .to_c64();
        assert!((y[0].norm() + (y[1] - 1.0).norm()) < 1e-15);
        let f = AffineOperator::new(
            QMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]),
            vec![q(1, 1), q(0, 1)],
        )
        .unwrap();
        let g = unit_translation(QMatrix::identity(2));
        let r = verify_conjugacy(&f, &g, &h, 50, 3).unwrap();
        assert!(!r.exact);
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn witness_json_round_trip() {
        let mut h = blanc_witness::<Rational>(3);
        h.push(Stage::Translation {
            offset: vec![q(1, 2), q(0, 1), q(-3, 1)],
        })
        .unwrap();
        let flow = flow_witness(&QMatrix::from_i64_rows(&[&[3, 1], &[0, 3]]), -1).unwrap();
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(serde_json::from_str::<Witness<Rational>>(&text).unwrap(), h);
        let text = serde_json::to_string(&flow).unwrap();
        assert_eq!(
            serde_json::from_str::<Witness<Rational>>(&text).unwrap(),
            flow
        );
    }
}
