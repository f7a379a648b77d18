//! Locating eigenvalues by modulus with exact arithmetic.
//!
//! Real root counts come from Sturm sequences. Roots on the unit circle are
//! counted after the Möbius substitution `z = (1+t)/(1-t)`, which sends the
//! circle to the imaginary axis and the open disc to the left half plane;
//! the half-plane split is then a Routh–Hurwitz count via Cauchy indices.
//! Polynomials over Q(i) are handled through `p · conj(p)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    coprime_basis, embed, poly_gcd, product, sign, squarefree_decompose, Field, FieldKind, Poly,
    Rational,
};
use crate::linalg::Matrix;

fn sign_at(p: &Poly<Rational>, x: &Rational) -> i8 {
    sign(&p.eval(x))
}

/// Sign of `p` near `+∞` (`positive`) or `-∞`.
fn sign_at_infinity(p: &Poly<Rational>, positive: bool) -> i8 {
    if p.is_zero() {
        return 0;
    }
    let s = sign(&p.leading());
    if !positive && p.degree() % 2 == 1 {
        -s
    } else {
        s
    }
}

/// `p, q, -rem(p, q), …` with every term scaled by a positive constant.
fn remainder_sequence(p: &Poly<Rational>, q: &Poly<Rational>) -> Vec<Poly<Rational>> {
    let normalize = |r: Poly<Rational>| {
        if r.is_zero() {
            r
        } else {
            let c = r.leading().abs();
            r.scale(&(<Rational as Field>::one() / c))
        }
    };
    let mut seq = vec![p.clone()];
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        seq.push(b.clone());
        let r = a.rem(&b).expect("nonzero divisor");
        a = b;
        b = normalize(-&r);
    }
    seq
}

fn sign_changes(signs: impl IntoIterator<Item = i8>) -> usize {
    let mut last = 0;
    let mut changes = 0;
    for s in signs.into_iter().filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

#[derive(Clone, Debug)]
enum Bound<'a> {
    NegInf,
    PosInf,
    At(&'a Rational),
}

fn variations(seq: &[Poly<Rational>], at: &Bound<'_>) -> usize {
    sign_changes(seq.iter().map(|p| match at {
        Bound::NegInf => sign_at_infinity(p, false),
        Bound::PosInf => sign_at_infinity(p, true),
        Bound::At(x) => sign_at(p, x),
    }))
}

/// Cauchy index of `q/p` over the whole real line.
pub fn cauchy_index(q: &Poly<Rational>, p: &Poly<Rational>) -> i64 {
    if p.is_zero() || q.is_zero() {
        return 0;
    }
    let seq = remainder_sequence(p, q);
    variations(&seq, &Bound::NegInf) as i64 - variations(&seq, &Bound::PosInf) as i64
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`;
/// `None` stands for an infinite endpoint.
pub fn count_real_roots(p: &Poly<Rational>, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
    if p.is_zero() || p.is_constant() {
        return 0;
    }
    let s = p.square_free_part();
    let seq = remainder_sequence(&s, &s.derivative());
    let a = lo.map_or(Bound::NegInf, Bound::At);
    let b = hi.map_or(Bound::PosInf, Bound::At);
    let va = variations(&seq, &a);
    let vb = variations(&seq, &b);
    let mut n = va.saturating_sub(vb);
    if let Some(h) = hi {
        if s.eval(h).is_zero() && n > 0 {
            n -= 1;
        }
    }
    n
}

/// Real roots of `p` in `(lo, hi)` counted with multiplicity.
pub fn count_real_roots_with_multiplicity(
    p: &Poly<Rational>,
    lo: Option<&Rational>,
    hi: Option<&Rational>,
) -> usize {
    if p.is_zero() {
        return 0;
    }
    squarefree_decompose(p)
        .expect("nonzero")
        .iter()
        .map(|(f, m)| m * count_real_roots(f, lo, hi))
        .sum()
}

/// `(1-t)^d s((1+t)/(1-t))` with `d = deg s`.
fn mobius(s: &Poly<Rational>) -> Poly<Rational> {
    let d = s.degree();
    let plus = Poly::from_i64s(&[1, 1]);
    let minus = Poly::from_i64s(&[1, -1]);
    let mut q = Poly::zero();
    for (k, c) in s.coeffs().iter().enumerate() {
        let term = &plus.pow(k) * &minus.pow(d - k);
        q = &q + &term.scale(c);
    }
    q
}

/// Real and imaginary parts of `q(iy)` as polynomials in `y`.
fn imaginary_axis_parts(q: &Poly<Rational>) -> (Poly<Rational>, Poly<Rational>) {
    let mut re = vec![Rational::zero(); q.coeffs().len()];
    let mut im = re.clone();
    for (k, c) in q.coeffs().iter().enumerate() {
        let c = c.clone();
        match k % 4 {
            0 => re[k] = c,
            1 => im[k] = c,
            2 => re[k] = -c,
            _ => im[k] = -c,
        }
    }
    (Poly::new(re), Poly::new(im))
}

/// Left half plane minus right half plane root count for a real polynomial
/// with no roots on the imaginary axis.
fn half_plane_difference(q: &Poly<Rational>) -> i64 {
    let (p0, p1) = imaginary_axis_parts(q);
    if q.degree().is_multiple_of(2) {
        -cauchy_index(&p1, &p0)
    } else {
        cauchy_index(&p0, &p1)
    }
}

/// Distinct roots of a square-free real polynomial inside, on and outside
/// the unit circle. Roots at `0`, `1` and `-1` must have been removed.
fn circle_split(s: &Poly<Rational>) -> (usize, usize, usize) {
    if s.is_constant() {
        return (0, 0, 0);
    }
    let q = mobius(s);
    let (p0, p1) = imaginary_axis_parts(&q);
    let on = count_real_roots(&poly_gcd(&p0, &p1), None, None);
    let q_neg = Poly::new(
        q.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
            .collect(),
    );
    // roots symmetric under t -> -t, including the imaginary axis
    let sym = poly_gcd(&q, &q_neg);
    let rest = q.exact_div(&sym).expect("gcd divides");
    let paired = (sym.degree() - on) / 2;
    let diff = half_plane_difference(&rest);
    let deg = rest.degree() as i64;
    let left = ((deg + diff) / 2) as usize;
    let right = ((deg - diff) / 2) as usize;
    (paired + left, on, paired + right)
}

/// Eigenvalue counts per modulus stratum, with multiplicity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StratumCounts {
    pub n0: usize,
    pub n01: usize,
    pub n1: usize,
    pub n1inf: usize,
}

impl StratumCounts {
    pub fn total(&self) -> usize {
        self.n0 + self.n01 + self.n1 + self.n1inf
    }

    fn add_scaled(&mut self, other: StratumCounts, m: usize) {
        self.n0 += m * other.n0;
        self.n01 += m * other.n01;
        self.n1 += m * other.n1;
        self.n1inf += m * other.n1inf;
    }

    fn halved(self) -> Self {
        Self {
            n0: self.n0 / 2,
            n01: self.n01 / 2,
            n1: self.n1 / 2,
            n1inf: self.n1inf / 2,
        }
    }
}

fn x_minus(r: i64) -> Poly<Rational> {
    Poly::from_i64s(&[-r, 1])
}

/// Counts of distinct roots of a square-free real polynomial.
fn squarefree_counts(f: &Poly<Rational>) -> StratumCounts {
    let mut c = StratumCounts::default();
    let z = f.zero_multiplicity();
    c.n0 = z;
    let mut f = f.shift_down(z);
    for r in [1, -1] {
        if f.eval(&Rational::from_integer(r.into())).is_zero() {
            c.n1 += 1;
            f = f.exact_div(&x_minus(r)).expect("root divides");
        }
    }
    let (inside, on, outside) = circle_split(&f);
    c.n01 = inside;
    c.n1 += on;
    c.n1inf = outside;
    c
}

fn real_counts(p: &Poly<Rational>) -> StratumCounts {
    let mut total = StratumCounts::default();
    for (f, m) in squarefree_decompose(p).expect("nonzero polynomial") {
        total.add_scaled(squarefree_counts(&f), m);
    }
    total
}

/// A real polynomial with the same stratum counts (doubled over Q(i)).
fn counting_poly<F: Field>(p: &Poly<F>) -> (Poly<Rational>, bool) {
    match F::KIND {
        FieldKind::Real => (p.map(|c| c.parts().0), false),
        FieldKind::Complex => ((p * &p.conj()).map(|c| c.parts().0), true),
    }
}

/// Stratum counts of the roots of `p`, with multiplicity.
pub fn stratum_counts<F: Field>(p: &Poly<F>) -> Result<StratumCounts> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (r, halve) = counting_poly(p);
    let c = real_counts(&r);
    Ok(if halve { c.halved() } else { c })
}

fn is_squarefree<F: Field>(p: &Poly<F>) -> bool {
    poly_gcd(p, &p.derivative()).is_constant()
}

/// Number of distinct roots of a square-free polynomial on the unit circle.
pub fn count_roots_on_unit_circle<F: Field>(p: &Poly<F>) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !is_squarefree(p) {
        return Err(Error::NotSquareFree);
    }
    Ok(stratum_counts(p)?.n1)
}

/// Unit-circle roots of any nonzero polynomial, counted without multiplicity.
pub(crate) fn distinct_unit_roots<F: Field>(p: &Poly<F>) -> usize {
    if p.is_constant() {
        return 0;
    }
    stratum_counts(&p.square_free_part()).map_or(0, |c| c.n1)
}

/// Roots of a square-free factor split by stratum; `mixed` keeps the pieces
/// whose roots could not be separated without leaving the ground field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct StrataFactors<F: Field> {
    pub p0: Poly<F>,
    pub p01: Poly<F>,
    pub p1: Poly<F>,
    pub p1inf: Poly<F>,
    pub mixed: Vec<MixedFactor<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct MixedFactor<F: Field> {
    pub factor: Poly<F>,
    pub multiplicity: usize,
    /// Distinct roots of `factor` in each stratum.
    pub roots: StratumCounts,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct ModulusPartition<F: Field> {
    pub n0: usize,
    pub n01: usize,
    pub n1: usize,
    pub n1inf: usize,
    pub factors: StrataFactors<F>,
    /// Sign of the product of the eigenvalues with `0 < |λ| < 1` (real input only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_sign_01: Option<i8>,
    /// Sign of the product of the eigenvalues with `|λ| > 1` (real input only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_sign_1inf: Option<i8>,
}

impl<F: Field> ModulusPartition<F> {
    pub fn counts(&self) -> StratumCounts {
        StratumCounts {
            n0: self.n0,
            n01: self.n01,
            n1: self.n1,
            n1inf: self.n1inf,
        }
    }
}

/// Least common multiple of the denominators of the real and imaginary parts.
fn denominator_lcm<F: Field>(p: &Poly<F>) -> num_bigint::BigInt {
    p.coeffs()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, c| {
            let (re, im) = c.parts();
            acc.lcm(re.denom()).lcm(im.denom())
        })
}

fn round_to_field<F: Field>(z: Complex64, scale: f64) -> Option<F> {
    let re = (z.re * scale).round();
    let im = if F::KIND == FieldKind::Real {
        0.0
    } else {
        (z.im * scale).round()
    };
    if !re.is_finite() || !im.is_finite() {
        return None;
    }
    let v = F::from_c64(Complex64::new(re, im)).ok()?;
    let s = F::from_c64(Complex64::new(scale, 0.0)).ok()?;
    Some(v / s)
}

/// Roots in the ground field, found by rounding numerical roots onto the
/// lattice that a divisor of `p` must live on and confirming exactly.
pub(crate) fn exact_linear_factors<F: Field>(p: &Poly<F>) -> Vec<F> {
    let monic = p.monic();
    let ell = denominator_lcm(&monic);
    let Some(scale) = ell.to_f64().filter(|s| s.is_finite() && *s < 1e12) else {
        return Vec::new();
    };
    let mut found: Vec<F> = Vec::new();
    for z in numeric_roots(&monic) {
        if F::KIND == FieldKind::Real && z.im.abs() > 1e-6 * z.re.abs().max(1.0) {
            continue;
        }
        if let Some(r) = round_to_field::<F>(z, scale) {
            if !found.contains(&r) && monic.eval(&r).is_zero() {
                found.push(r);
            }
        }
    }
    found
}

fn classify_piece<F: Field>(piece: Poly<F>, m: usize, out: &mut StrataFactors<F>) {
    if piece.is_constant() {
        return;
    }
    let c = stratum_counts(&piece).expect("nonzero");
    let deg = piece.degree();
    let powered = piece.pow(m);
    if c.n01 == deg {
        out.p01 = &out.p01 * &powered;
    } else if c.n1 == deg {
        out.p1 = &out.p1 * &powered;
    } else if c.n1inf == deg {
        out.p1inf = &out.p1inf * &powered;
    } else {
        out.mixed.push(MixedFactor {
            factor: piece,
            multiplicity: m,
            roots: c,
        });
    }
}

fn split_factors<F: Field>(p: &Poly<F>) -> Result<StrataFactors<F>> {
    let mut out = StrataFactors {
        p0: Poly::one(),
        p01: Poly::one(),
        p1: Poly::one(),
        p1inf: Poly::one(),
        mixed: Vec::new(),
    };
    for (f, m) in squarefree_decompose(p)? {
        let z = f.zero_multiplicity();
        if z > 0 {
            out.p0 = &out.p0 * &Poly::x().pow(m);
        }
        let mut rest = f.shift_down(z);
        for r in exact_linear_factors(&rest) {
            let lin = Poly::linear(r);
            rest = rest.exact_div(&lin)?;
            classify_piece(lin, m, &mut out);
        }
        // unit-circle roots satisfy 1/conj(z) = z
        let mirror = rest.conj().reciprocal();
        let g = poly_gcd(&rest, &mirror);
        if !g.is_constant() && g.degree() < rest.degree() {
            let other = rest.exact_div(&g)?;
            classify_piece(g, m, &mut out);
            classify_piece(other.monic(), m, &mut out);
        } else {
            classify_piece(rest.monic(), m, &mut out);
        }
    }
    Ok(out)
}

fn parity_sign(k: usize) -> i8 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Signs of the products of the roots of a real polynomial lying in
/// `0 < |λ| < 1` and in `|λ| > 1`: only negative real roots can flip them.
pub fn stratum_det_signs(p: &Poly<Rational>) -> (i8, i8) {
    let minus_one = -Rational::from_integer(1.into());
    let zero = Rational::zero();
    let neg01 = count_real_roots_with_multiplicity(p, Some(&minus_one), Some(&zero));
    let neg1inf = count_real_roots_with_multiplicity(p, None, Some(&minus_one));
    (parity_sign(neg01), parity_sign(neg1inf))
}

/// Sign of the product of the nonzero roots of a real polynomial.
pub fn nonzero_roots_sign(p: &Poly<Rational>) -> i8 {
    let zero = Rational::zero();
    parity_sign(count_real_roots_with_multiplicity(p, None, Some(&zero)))
}

/// Splits the roots of `p` by modulus: `0`, `(0, 1)`, `1`, `(1, ∞)`.
pub fn modulus_partition<F: Field>(p: &Poly<F>) -> Result<ModulusPartition<F>> {
    let c = stratum_counts(p)?;
    let factors = split_factors(p)?;
    let (det_sign_01, det_sign_1inf) = if F::KIND == FieldKind::Real {
        let s = stratum_det_signs(&p.map(|c| c.parts().0));
        (Some(s.0), Some(s.1))
    } else {
        (None, None)
    };
    Ok(ModulusPartition {
        n0: c.n0,
        n01: c.n01,
        n1: c.n1,
        n1inf: c.n1inf,
        factors,
        det_sign_01,
        det_sign_1inf,
    })
}

/// Numerical roots of a polynomial: eigenvalues of the companion matrix
/// followed by a few Newton steps.
pub fn numeric_roots<F: Field>(p: &Poly<F>) -> Vec<Complex64> {
    if p.is_constant() {
        return Vec::new();
    }
    let monic = p.monic();
    let c: Vec<Complex64> = monic.coeffs().iter().map(Field::to_c64).collect();
    let d = monic.degree();
    if d == 1 {
        return vec![-c[0]];
    }
    let comp = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -c[i]
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eig = Schur::try_new(comp, 1e-14, 10_000)
        .map(|s| {
            s.eigenvalues()
                .map(|v| v.iter().copied().collect::<Vec<_>>())
        })
        .unwrap_or(None)
        .unwrap_or_else(|| aberth(&c));
    let dc: Vec<Complex64> = (1..=d).map(|k| c[k] * k as f64).collect();
    eig.into_iter()
        .map(|mut z| {
            for _ in 0..3 {
                let pv = horner(&c, z);
                let dv = horner(&dc, z);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = pv / dv;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect()
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Aberth–Ehrlich iteration, used when the Schur iteration does not converge.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let dc: Vec<Complex64> = (1..=d).map(|k| c[k] * k as f64).collect();
    let radius = 1.0 + c[..d].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.5,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let ratio = horner(c, z[i]) / horner(&dc, z[i]);
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let w = ratio / (1.0 - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn totient(k: u64) -> u64 {
    let mut n = k;
    let mut result = k;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `k`-th cyclotomic polynomial `Φ_k`.
pub fn cyclotomic(k: u64) -> Poly<Rational> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Poly<Rational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache lock").get(&k) {
        return p.clone();
    }
    let mut num = Poly::monomial(Rational::from_integer(1.into()), k as usize);
    num = &num - &Poly::one();
    let divisors = (1..k).filter(|d| k.is_multiple_of(*d));
    let den = product(divisors.map(cyclotomic));
    let phi = num.exact_div(&den).expect("cyclotomic recursion");
    cache.lock().expect("cache lock").insert(k, phi.clone());
    phi
}

/// Smallest `k` such that `p` shares a root with `Φ_k`, scanning every `k`
/// whose primitive roots have degree at most `n` over the ground field.
pub fn root_of_unity_factor<F: Field>(p: &Poly<F>, n: usize) -> Option<(u64, Poly<F>)> {
    if p.is_constant() {
        return None;
    }
    // degree over Q of a root lying in a degree-n extension of Q(i)
    let bound = match F::KIND {
        FieldKind::Real => n as u64,
        FieldKind::Complex => 2 * n as u64,
    };
    (1..=2 * bound * bound + 2)
        .filter(|&k| totient(k) <= bound)
        .find_map(|k| {
            let phi: Poly<F> = embed(&cyclotomic(k));
            (!poly_gcd(p, &phi).is_constant()).then_some((k, phi))
        })
}

/// Transition to the block form `A* ⊕ A₀` with `A*` nonsingular and `A₀`
/// nilpotent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct FittingSplit<F: Field> {
    pub nonsingular_part: Matrix<F>,
    pub nilpotent_part: Matrix<F>,
    pub transition: Matrix<F>,
}

pub fn fitting_split<F: Field>(a: &Matrix<F>) -> Result<FittingSplit<F>> {
    let n = a.ensure_square()?;
    let an = a.pow(n)?;
    let image = an.column_space_basis();
    let kernel = an.kernel_basis();
    let r = image.len();
    let mut cols = image;
    cols.extend(kernel);
    let s = Matrix::from_columns(n, &cols);
    let conj = &(&s.inverse()? * a) * &s;
    Ok(FittingSplit {
        nonsingular_part: conj.block(0, 0, r, r),
        nilpotent_part: conj.block(r, r, n - r, n - r),
        transition: s,
    })
}

/// Invariant factors of `A` (the non-constant diagonal of the Smith form of
/// `xI - A`), in divisibility order.
pub fn invariant_factors<F: Field>(a: &Matrix<F>) -> Result<Vec<Poly<F>>> {
    let n = a.ensure_square()?;
    let mut m: Vec<Vec<Poly<F>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -a[(i, j)].clone();
                    if i == j {
                        Poly::new(vec![c, F::one()])
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            let pivot = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by_key(|&(i, j)| m[i][j].degree());
            let Some((pi, pj)) = pivot else {
                return Err(Error::Internal("xI - A is singular".into()));
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let (q, r) = m[i][k].div_rem(&m[k][k])?;
                for j in k..n {
                    let t = &q * &m[k][j];
                    m[i][j] = &m[i][j] - &t;
                }
                clean &= r.is_zero();
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let (q, r) = m[k][j].div_rem(&m[k][k])?;
                for row in m.iter_mut().skip(k) {
                    let t = &q * &row[k];
                    row[j] = &row[j] - &t;
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (k + 1..n).find(|&i| (k + 1..n).any(|j| !m[k][k].divides(&m[i][j])));
            match offender {
                Some(i) => {
                    for j in k..n {
                        let t = m[i][j].clone();
                        m[k][j] = &m[k][j] + &t;
                    }
                }
                None => break,
            }
        }
        diag.push(m[k][k].monic());
    }
    diag.retain(|d| !d.is_constant());
    Ok(diag)
}

/// Similarity over the ground field: equal invariant factors.
pub fn similar<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<bool> {
    let n = a.ensure_square()?;
    if b.ensure_square()? != n {
        return Ok(false);
    }
    if a == b {
        return Ok(true);
    }
    Ok(invariant_factors(a)? == invariant_factors(b)?)
}

/// All eigenvalues sharing one Jordan partition, gathered into a square-free
/// polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct JordanType<F: Field> {
    /// Block sizes at each root, descending.
    pub partition: Vec<usize>,
    pub roots: Poly<F>,
}

/// Groups the eigenvalues of `A` by their Jordan partitions.
pub fn jordan_types<F: Field>(a: &Matrix<F>) -> Result<Vec<JordanType<F>>> {
    let inv = invariant_factors(a)?;
    let layers: Vec<Vec<(Poly<F>, usize)>> = inv
        .iter()
        .map(squarefree_decompose)
        .collect::<Result<_>>()?;
    let all: Vec<Poly<F>> = layers.iter().flatten().map(|(f, _)| f.clone()).collect();
    let mut groups: BTreeMap<Vec<usize>, Vec<Poly<F>>> = BTreeMap::new();
    for c in coprime_basis(&all) {
        let mut partition: Vec<usize> = layers
            .iter()
            .filter_map(|ls| ls.iter().find(|(f, _)| c.divides(f)).map(|(_, m)| *m))
            .collect();
        partition.sort_unstable_by(|x, y| y.cmp(x));
        groups.entry(partition).or_default().push(c);
    }
    Ok(groups
        .into_iter()
        .rev()
        .map(|(partition, ps)| JordanType {
            partition,
            roots: product(ps).monic(),
        })
        .collect())
}

/// Whether the unit-circle parts of two matrices, described by their Jordan
/// types, are similar: every partition must occur at the same unit roots.
pub fn unit_parts_similar<F: Field>(a: &[JordanType<F>], b: &[JordanType<F>]) -> bool {
    let find = |ts: &[JordanType<F>], p: &[usize]| {
        ts.iter()
            .find(|t| t.partition == p)
            .map_or_else(Poly::one, |t| t.roots.clone())
    };
    let partitions: Vec<&Vec<usize>> = a.iter().chain(b).map(|t| &t.partition).collect();
    partitions.into_iter().all(|p| {
        let pa = find(a, p);
        let pb = find(b, p);
        let ua = distinct_unit_roots(&pa);
        let ub = distinct_unit_roots(&pb);
        ua == ub && (ua == 0 || distinct_unit_roots(&poly_gcd(&pa, &pb)) == ua)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussianRational;
    use crate::linalg::QMatrix;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn qpoly(cs: &[(i64, i64)]) -> Poly<Rational> {
        Poly::new(cs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn partition_examples() {
        let p = qpoly(&[(1, 1), (-5, 2), (1, 1)]);
        let mp = modulus_partition(&p).unwrap();
        assert_eq!((mp.n0, mp.n01, mp.n1, mp.n1inf), (0, 1, 0, 1));
        assert_eq!(mp.factors.p01, qpoly(&[(-1, 2), (1, 1)]));
        assert_eq!(mp.factors.p1inf, qpoly(&[(-2, 1), (1, 1)]));

        let mp = modulus_partition(&Poly::<Rational>::from_i64s(&[0, 0, 0, 1])).unwrap();
        assert_eq!(
            mp.counts(),
            StratumCounts {
                n0: 3,
                ..Default::default()
            }
        );

        let rot = qpoly(&[(1, 1), (-6, 5), (1, 1)]);
        let mp = modulus_partition(&rot).unwrap();
        assert_eq!(
            mp.counts(),
            StratumCounts {
                n1: 2,
                ..Default::default()
            }
        );
        assert_eq!(mp.factors.p1, rot);
    }

    #[test]
    fn unit_circle_examples() {
        assert_eq!(
            count_roots_on_unit_circle(&Poly::<Rational>::from_i64s(&[1, 0, 1])).unwrap(),
            2
        );
        assert_eq!(
            count_roots_on_unit_circle(&Poly::<Rational>::from_i64s(&[-2, 1])).unwrap(),
            0
        );
        assert_eq!(
            count_roots_on_unit_circle(&qpoly(&[(1, 1), (-6, 5), (1, 1)])).unwrap(),
            2
        );
        assert_eq!(
            count_roots_on_unit_circle(&Poly::<Rational>::from_i64s(&[1, -2, 1])),
            Err(Error::NotSquareFree)
        );
    }

    #[test]
    fn salem_like_factor_stays_mixed() {
        // x^4 - 3x^3 + 3x^2 - 3x + 1: two real roots off the circle, a unit pair
        let p = Poly::<Rational>::from_i64s(&[1, -3, 3, -3, 1]);
        let mp = modulus_partition(&p).unwrap();
        assert_eq!(
            mp.counts(),
            StratumCounts {
                n0: 0,
                n01: 1,
                n1: 2,
                n1inf: 1
            }
        );
    }

    #[test]
    fn gaussian_counts() {
        let z: GaussianRational = "3/5+4/5 i".parse().unwrap();
        let p = Poly::linear(z);
        assert_eq!(count_roots_on_unit_circle(&p).unwrap(), 1);
        let w: GaussianRational = "1/2 i".parse().unwrap();
        let c = stratum_counts(&(&p * &Poly::linear(w))).unwrap();
        assert_eq!(
            c,
            StratumCounts {
                n01: 1,
                n1: 1,
                ..Default::default()
            }
        );
    }

    #[test]
    fn root_of_unity_examples() {
        let rot = QMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
        let cp = rot.charpoly().unwrap();
        assert_eq!(
            root_of_unity_factor(&cp, 2),
            Some((4, Poly::from_i64s(&[1, 0, 1])))
        );
        assert_eq!(
            root_of_unity_factor(&Poly::<Rational>::from_i64s(&[-1, 1]), 1),
            Some((1, Poly::from_i64s(&[-1, 1])))
        );
        assert_eq!(
            root_of_unity_factor(&qpoly(&[(1, 1), (-6, 5), (1, 1)]), 2),
            None
        );
        let i_root = Poly::linear(GaussianRational::i());
        assert_eq!(root_of_unity_factor(&i_root, 1).map(|(k, _)| k), Some(4));
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic(1), Poly::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic(6), Poly::from_i64s(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), Poly::from_i64s(&[1, 0, -1, 0, 1]));
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn fitting_examples() {
        let a = QMatrix::from_i64_rows(&[&[1, 0], &[0, 0]]);
        let fs = fitting_split(&a).unwrap();
        assert_eq!(fs.nonsingular_part, QMatrix::from_i64_rows(&[&[1]]));
        assert_eq!(fs.nilpotent_part, QMatrix::from_i64_rows(&[&[0]]));

        let j2 = QMatrix::from_i64_rows(&[&[0, 0], &[1, 0]]);
        let fs = fitting_split(&j2).unwrap();
        assert_eq!(fs.nonsingular_part.rows(), 0);
        assert!(similar(&fs.nilpotent_part, &j2).unwrap());

        let a = QMatrix::from_i64_rows(&[&[1, 1], &[0, 0]]);
        let fs = fitting_split(&a).unwrap();
        let s = &fs.transition;
        let back = &(&s.inverse().unwrap() * &a) * s;
        assert_eq!(back, fs.nonsingular_part.direct_sum(&fs.nilpotent_part));
        assert_eq!(fs.nonsingular_part, QMatrix::from_i64_rows(&[&[1]]));
    }

    #[test]
    fn similarity_examples() {
        let j21 = QMatrix::from_i64_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        let j3 = QMatrix::from_i64_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert!(!similar(&j21, &j3).unwrap());
        let up = QMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let down = QMatrix::from_i64_rows(&[&[0, 0], &[1, 0]]);
        assert!(similar(&up, &down).unwrap());
        assert_eq!(
            invariant_factors(&j21).unwrap(),
            vec![Poly::from_i64s(&[0, 1]), Poly::from_i64s(&[0, 0, 1])]
        );
    }

    #[test]
    fn jordan_types_group_roots() {
        // diag(2, 3) ⊕ J2(5): roots 2 and 3 share partition [1]
        let a =
            QMatrix::from_i64_rows(&[&[2, 0, 0, 0], &[0, 3, 0, 0], &[0, 0, 5, 0], &[0, 0, 1, 5]]);
        let types = jordan_types(&a).unwrap();
        assert_eq!(types.len(), 2);
        assert_eq!(types[0].partition, vec![2]);
        assert_eq!(types[0].roots, Poly::from_i64s(&[-5, 1]));
        assert_eq!(types[1].partition, vec![1]);
        assert_eq!(types[1].roots, Poly::from_i64s(&[6, -5, 1]));
    }
}
