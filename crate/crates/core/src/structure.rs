//! Jordan structure: Segre characteristics, block sizes at a factor of the
//! characteristic polynomial, Jordan blocks and realification.
//!
//! Jordan blocks are lower triangular: the eigenvalue on the diagonal and
//! ones on the first subdiagonal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{poly_gcd, Field, GaussianRational, Poly};
use crate::linalg::{mat_poly_eval, GMatrix, Matrix, QMatrix};
use crate::spectral::jordan_types;

/// Block sizes of a nilpotent matrix, descending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Segre(Vec<usize>);

impl Segre {
    pub fn new(mut sizes: Vec<usize>) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::InvalidArgument(
                "block sizes must be positive".into(),
            ));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(sizes))
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    /// Dimension of the nilpotent matrix.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `rank(J^i)` for the nilpotent Jordan matrix with these blocks.
    pub fn rank_of_power(&self, i: usize) -> usize {
        self.0.iter().map(|&s| s.saturating_sub(i)).sum()
    }

    /// Direct sum of `J_k(0)` over the blocks.
    pub fn build<F: Field>(&self) -> Matrix<F> {
        let blocks: Vec<Matrix<F>> = self
            .0
            .iter()
            .map(|&k| jordan_block(F::zero(), k).expect("positive size"))
            .collect();
        Matrix::direct_sum_all(&blocks)
    }
}

impl std::fmt::Display for Segre {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Reads block sizes off the rank sequence `rank(N^j)`.
fn partition_from_ranks(ranks: &[usize], scale: usize) -> Result<Vec<(usize, usize)>> {
    // at_least[j] = number of blocks of size > j
    let mut at_least = Vec::new();
    for w in ranks.windows(2) {
        let diff = w[0] - w[1];
        if diff % scale != 0 {
            return Err(Error::NonUniformFactor(
                "rank drops are not a multiple of the degree".into(),
            ));
        }
        at_least.push(diff / scale);
    }
    let mut out = Vec::new();
    for (j, &c) in at_least.iter().enumerate() {
        let next = at_least.get(j + 1).copied().unwrap_or(0);
        if c > next {
            out.push((j + 1, c - next));
        }
    }
    out.reverse();
    Ok(out)
}

pub fn segre_of_nilpotent<F: Field>(n: &Matrix<F>) -> Result<Segre> {
    let size = n.ensure_square()?;
    let mut ranks = vec![size];
    let mut power = Matrix::identity(size);
    while *ranks.last().expect("nonempty") > 0 {
        if ranks.len() > size {
            return Err(Error::NotNilpotent);
        }
        power = &power * n;
        let r = power.rank();
        if r == *ranks.last().expect("nonempty") {
            return Err(Error::NotNilpotent);
        }
        ranks.push(r);
    }
    let mut sizes = Vec::new();
    for (k, count) in partition_from_ranks(&ranks, 1)? {
        sizes.extend(std::iter::repeat_n(k, count));
    }
    Segre::new(sizes)
}

/// Block sizes at the eigenvalue 0 of any square matrix, from the ranks of
/// its powers.
pub fn nilpotent_segre<F: Field>(a: &Matrix<F>) -> Result<Segre> {
    let n = a.ensure_square()?;
    let mut ranks = vec![n];
    let mut power = Matrix::identity(n);
    loop {
        power = &power * a;
        let r = power.rank();
        if r == *ranks.last().expect("nonempty") {
            break;
        }
        ranks.push(r);
    }
    let mut sizes = Vec::new();
    for (k, count) in partition_from_ranks(&ranks, 1)? {
        sizes.extend(std::iter::repeat_n(k, count));
    }
    Segre::new(sizes)
}

/// Jordan blocks at each root of `q`: pairs `(size, count)`, largest first,
/// where `count` is the number of blocks of that size at a single root.
pub fn block_structure_at_factor<F: Field>(
    a: &Matrix<F>,
    q: &Poly<F>,
) -> Result<Vec<(usize, usize)>> {
    let n = a.ensure_square()?;
    if q.is_constant() {
        return Err(Error::InvalidArgument(
            "factor must have positive degree".into(),
        ));
    }
    if !poly_gcd(q, &q.derivative()).is_constant() {
        return Err(Error::NotSquareFree);
    }
    let cp = a.charpoly()?;
    if !q.divides(&cp) {
        return Err(Error::NotADivisor(q.to_string()));
    }
    let q = q.monic();
    let types = jordan_types(a)?;
    if !types.iter().any(|t| q.divides(&t.roots)) {
        return Err(Error::NonUniformFactor(q.to_string()));
    }
    let qa = mat_poly_eval(&q, a)?;
    let mut ranks = vec![n];
    let mut power = Matrix::identity(n);
    loop {
        power = &power * &qa;
        let r = power.rank();
        if r == *ranks.last().expect("nonempty") {
            break;
        }
        ranks.push(r);
    }
    partition_from_ranks(&ranks, q.degree())
}

/// Jordan chains of `A` at the eigenvalue `λ`, longest first. Each chain is
/// `[v, Nv, …, N^{k-1}v]` with `N = A - λI` and `N^k v = 0`, so in the basis
/// given by one chain `A` acts as the lower-triangular `J_k(λ)`.
pub fn jordan_chains<F: Field>(a: &Matrix<F>, lambda: &F) -> Result<Vec<Vec<Vec<F>>>> {
    let n = a.ensure_square()?;
    let shift = a - &Matrix::identity(n).scale(lambda);
    let mut kernels = vec![Vec::new()];
    let mut power = Matrix::identity(n);
    loop {
        power = &power * &shift;
        let k = power.kernel_basis();
        if k.len() == kernels.last().map_or(0, Vec::len) {
            break;
        }
        kernels.push(k);
    }
    let apply = |v: &[F]| shift.mul_vec(v).expect("square");
    let mut chains: Vec<Vec<Vec<F>>> = Vec::new();
    for level in (1..kernels.len()).rev() {
        let mut span: Vec<Vec<F>> = kernels[level - 1].clone();
        for c in &chains {
            span.push(c[c.len() - level].clone());
        }
        let mut rank = Matrix::from_columns(n, &span).rank();
        for u in &kernels[level] {
            span.push(u.clone());
            let r = Matrix::from_columns(n, &span).rank();
            if r > rank {
                rank = r;
                let mut chain = vec![u.clone()];
                for _ in 1..level {
                    let next = apply(chain.last().expect("nonempty"));
                    chain.push(next);
                }
                chains.push(chain);
            } else {
                span.pop();
            }
        }
    }
    Ok(chains)
}

/// `J_n(λ)`.
pub fn jordan_block<F: Field>(lambda: F, n: usize) -> Result<Matrix<F>> {
    if n == 0 {
        return Err(Error::InvalidArgument("Jordan block of size 0".into()));
    }
    let mut m = Matrix::from_diag(&vec![lambda; n]);
    for i in 1..n {
        m[(i, i - 1)] = F::one();
    }
    Ok(m)
}

/// Real `2n × 2n` form of a complex matrix: each entry `a + bi` becomes the
/// block `[[a, -b], [b, a]]`.
pub fn realify(m: &GMatrix) -> QMatrix {
    let mut out = QMatrix::zeros(2 * m.rows(), 2 * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let GaussianRational { re, im } = m[(i, j)].clone();
            out[(2 * i, 2 * j)] = re.clone();
            out[(2 * i, 2 * j + 1)] = -im.clone();
            out[(2 * i + 1, 2 * j)] = im;
            out[(2 * i + 1, 2 * j + 1)] = re;
        }
    }
    out
}

/// Companion matrix of a monic polynomial in the lower-triangular layout:
/// ones on the subdiagonal, coefficients in the last column.
pub fn companion<F: Field>(p: &Poly<F>) -> Result<Matrix<F>> {
    if p.is_constant() {
        return Err(Error::InvalidArgument("companion of a constant".into()));
    }
    let p = p.monic();
    let d = p.degree();
    let mut m = Matrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = F::one();
    }
    for i in 0..d {
        m[(i, d - 1)] = -p.coeff(i);
    }
    Ok(m)
}

pub fn rational_matrix_of(m: &GMatrix) -> Option<QMatrix> {
    m.entries()
        .iter()
        .all(GaussianRational::is_real)
        .then(|| m.map(|z| z.re.clone()))
}
