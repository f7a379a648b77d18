//! Exact dense linear algebra over Q and Q(i).
//!
//! Matrices are row-major. Rank and determinant use fraction-free (Bareiss)
//! elimination; solving and kernels use reduced row echelon form. The
//! characteristic polynomial comes from Berkowitz' division-free recurrence.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{Field, FieldKind, GaussianRational, Poly, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

pub type QMatrix = Matrix<Rational>;
pub type GMatrix = Matrix<GaussianRational>;

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    /// Integer entries, convenient for tests and fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![F::one(); n])
    }

    pub fn from_diag(diag: &[F]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
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

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
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

    pub fn conj(&self) -> Self {
        self.map(F::conj)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|v| v.clone() * c)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + &(a.clone() * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, x)| acc + &(a.clone() * x))
            })
            .collect())
    }

    pub fn pow(&self, e: usize) -> Result<Self> {
        let n = self.ensure_square()?;
        let mut out = Self::identity(n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(out)
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn direct_sum_all<'a>(blocks: impl IntoIterator<Item = &'a Self>) -> Self {
        blocks
            .into_iter()
            .fold(Self::zeros(0, 0), |acc, b| acc.direct_sum(b))
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// Permutes rows and columns symmetrically: entry `(i, j)` of the result is
    /// entry `(order[i], order[j])` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = order.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self[(order[i], order[j])].clone();
            }
        }
        m
    }

    /// Fraction-free elimination; returns the echelon form, rank and the
    /// sign of the row permutation.
    fn bareiss(&self) -> (Self, usize, bool) {
        let mut m = self.clone();
        let mut prev = F::one();
        let mut rank = 0;
        let mut negated = false;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            if p != rank {
                m.swap_rows(p, rank);
                negated = !negated;
            }
            let piv = m[(rank, c)].clone();
            for i in rank + 1..m.rows {
                let lead = m[(i, c)].clone();
                for j in c + 1..m.cols {
                    let v = (piv.clone() * &m[(i, j)] - &(lead.clone() * &m[(rank, j)])) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, c)] = F::zero();
            }
            prev = piv;
            rank += 1;
        }
        (m, rank, negated)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.bareiss().1
    }

    pub fn determinant(&self) -> Result<F> {
        let n = self.ensure_square()?;
        if n == 0 {
            return Ok(F::one());
        }
        let (m, rank, negated) = self.bareiss();
        if rank < n {
            return Ok(F::zero());
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if negated { -d } else { d })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let t = f.clone() * &m[(r, j)];
                    m[(i, j)] = m[(i, j)].clone() - &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// One solution of `self · x = c` (free variables set to zero), or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, c: &[F]) -> Result<Option<Vec<F>>> {
        if c.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{} rows but right-hand side of length {}",
                self.rows,
                c.len()
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, v) in c.iter().enumerate() {
            aug[(i, self.cols)] = v.clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    /// Basis of the null space `{x : self · x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, taken from the pivot columns of `self`.
    /// Reduced basis of the column space: the nonzero rows of `rref(Aᵀ)`.
    pub fn column_space_basis(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.transpose().rref();
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }

    /// Pairwise orthogonal basis of the column space, for callers that go on
    /// to floating point and need a well-conditioned representation.
    pub fn orthogonal_column_basis(&self) -> Vec<Vec<F>> {
        orthogonal_basis(&self.column_space_basis())
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.ensure_square()?;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(r.block(0, n, n, n))
    }

    /// `det(xI - self)`, monic of degree `n`.
    pub fn charpoly(&self) -> Result<Poly<F>> {
        let n = self.ensure_square()?;
        // coefficients, highest degree first
        let mut v = vec![F::one()];
        for r in 0..n {
            // column r+2 Toeplitz generator: 1, -a_rr, -R C, -R A C, ...
            let mut t = Vec::with_capacity(r + 2);
            t.push(F::one());
            t.push(-self[(r, r)].clone());
            let row: Vec<F> = (0..r).map(|j| self[(r, j)].clone()).collect();
            let mut col: Vec<F> = (0..r).map(|i| self[(i, r)].clone()).collect();
            for _ in 0..r {
                let dot = row
                    .iter()
                    .zip(&col)
                    .fold(F::zero(), |acc, (a, b)| acc + &(a.clone() * b));
                t.push(-dot);
                // col <- A_r col
                col = (0..r)
                    .map(|i| {
                        (0..r).fold(F::zero(), |acc, k| acc + &(self[(i, k)].clone() * &col[k]))
                    })
                    .collect();
            }
            let mut next = vec![F::zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    if i >= j {
                        *slot = slot.clone() + &(t[i - j].clone() * vj);
                    }
                }
            }
            v = next;
        }
        v.reverse();
        Ok(Poly::new(v))
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        let n = self.ensure_square()?;
        Ok(self.pow(n)?.is_zero())
    }

    pub fn to_c64(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_c64())
    }
}

/// Exact Gram–Schmidt with the Hermitian inner product. Each output vector
/// is scaled so that its entry of largest modulus is 1.
pub fn orthogonal_basis<F: Field>(vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    let dot = |u: &[F], v: &[F]| {
        u.iter()
            .zip(v)
            .fold(F::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
    };
    let mut out: Vec<Vec<F>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for u in &out {
            let c = dot(u, &w) / dot(u, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi = wi.clone() - c.clone() * ui.clone();
            }
        }
        let Some(big) = w
            .iter()
            .filter(|x| !x.is_zero())
            .max_by(|a, b| a.to_c64().norm().total_cmp(&b.to_c64().norm()))
            .cloned()
        else {
            continue;
        };
        out.push(w.into_iter().map(|x| x / big.clone()).collect());
    }
    out
}

/// `p(M)` by Horner's rule.
pub fn mat_poly_eval<F: Field>(p: &Poly<F>, m: &Matrix<F>) -> Result<Matrix<F>> {
    let n = m.ensure_square()?;
    let mut acc = Matrix::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = &acc * m;
        for i in 0..n {
            acc[(i, i)] = acc[(i, i)].clone() + c;
        }
    }
    Ok(acc)
}

impl<F: Field> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        self.try_mul(rhs).expect("matrix product dimensions")
    }
}

impl<F: Field> Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sum dimensions"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }
}

impl<F: Field> Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference dimensions"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        }
    }
}

impl<F: Field> Neg for &Matrix<F> {
    type Output = Matrix<F>;
    fn neg(self) -> Matrix<F> {
        self.map(|v| -v.clone())
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Field tag used in the JSON form of a matrix.
fn field_tag<F: Field>() -> &'static str {
    match F::KIND {
        FieldKind::Real => "Q",
        FieldKind::Complex => "Qi",
    }
}

impl<F: Field> Serialize for Matrix<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        let mut st = s.serialize_struct("Matrix", 2)?;
        st.serialize_field("field", field_tag::<F>())?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixRepr {
    Tagged {
        field: Option<String>,
        rows: Vec<Vec<serde_json::Value>>,
    },
    Bare(Vec<Vec<serde_json::Value>>),
}

/// Scalar entry in JSON: a string in the scalar text format or a number.
pub(crate) fn scalar_from_json<F: Field>(v: &serde_json::Value) -> Result<F> {
    match v {
        serde_json::Value::String(s) => F::parse(s),
        serde_json::Value::Number(n) => F::parse(&n.to_string()),
        other => Err(Error::Parse(format!("expected a scalar, found {other}"))),
    }
}

impl<'de, F: Field> Deserialize<'de> for Matrix<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let (field, rows) = match MatrixRepr::deserialize(d)? {
            MatrixRepr::Tagged { field, rows } => (field, rows),
            MatrixRepr::Bare(rows) => (None, rows),
        };
        if let Some(tag) = field {
            if tag != "Q" && tag != "Qi" {
                return Err(D::Error::custom(format!("unknown field tag {tag:?}")));
            }
            if F::KIND == FieldKind::Real && tag == "Qi" {
                return Err(D::Error::custom("matrix tagged Qi read as rational"));
            }
        }
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(scalar_from_json::<F>)
                    .collect::<Result<Vec<F>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Matrix::from_rows(parsed).map_err(D::Error::custom)
    }
}

impl GMatrix {
    pub fn from_rational(m: &QMatrix) -> Self {
        m.map(|v| GaussianRational::from_real(v.clone()))
    }
}

impl QMatrix {
    /// Embeds a rational matrix into Q(i).
    pub fn to_gaussian(&self) -> GMatrix {
        GMatrix::from_rational(self)
    }
}

/// Affine operator `x ↦ A x + b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineOperator<F: Field> {
    pub a: Matrix<F>,
    pub b: Vec<F>,
}

impl<F: Field> AffineOperator<F> {
    pub fn new(a: Matrix<F>, b: Vec<F>) -> Result<Self> {
        let n = a.ensure_square()?;
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n}x{n} linear part with a translation of length {}",
                b.len()
            )));
        }
        Ok(Self { a, b })
    }

    pub fn linear(a: Matrix<F>) -> Result<Self> {
        let n = a.ensure_square()?;
        Self::new(a, vec![F::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn apply(&self, x: &[F]) -> Result<Vec<F>> {
        let ax = self.a.mul_vec(x)?;
        Ok(ax.into_iter().zip(&self.b).map(|(u, v)| u + v).collect())
    }

    /// The linear part as an operator with zero translation.
    pub fn linear_part(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: vec![F::zero(); self.dim()],
        }
    }

    /// `(S⁻¹AS, S⁻¹b)`: the operator in the basis given by the columns of `S`.
    pub fn change_basis(&self, s: &Matrix<F>) -> Result<Self> {
        let s_inv = s.inverse()?;
        let a = &(&s_inv * &self.a) * s;
        let b = s_inv.mul_vec(&self.b)?;
        Self::new(a, b)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut b = self.b.clone();
        b.extend(other.b.iter().cloned());
        Self {
            a: self.a.direct_sum(&other.a),
            b,
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> AffineOperator<G> {
        AffineOperator {
            a: self.a.map(f),
            b: self.b.iter().map(f).collect(),
        }
    }
}

impl<F: Field> Serialize for AffineOperator<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let b: Vec<String> = self.b.iter().map(ToString::to_string).collect();
        let mut st = s.serialize_struct("AffineOperator", 2)?;
        st.serialize_field("A", &self.a)?;
        st.serialize_field("b", &b)?;
        st.end()
    }
}

impl<'de, F: Field> Deserialize<'de> for AffineOperator<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields, bound = "")]
        struct Repr<F: Field> {
            #[serde(rename = "A")]
            a: Matrix<F>,
            b: Vec<serde_json::Value>,
        }
        let r = Repr::<F>::deserialize(d)?;
        let b =
            r.b.iter()
                .map(scalar_from_json::<F>)
                .collect::<Result<Vec<F>>>()
                .map_err(D::Error::custom)?;
        AffineOperator::new(r.a, b).map_err(D::Error::custom)
    }
}

impl AffineOperator<Rational> {
    pub fn to_gaussian(&self) -> AffineOperator<GaussianRational> {
        self.map(|v| GaussianRational::from_real(v.clone()))
    }
}
