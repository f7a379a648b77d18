//! Exact ground-field scalars: rationals and Gaussian rationals.
//!
//! Every predicate the classifier evaluates is discontinuous in the matrix
//! entries, so the decision paths never touch floating point. Both field
//! types normalize eagerly (`BigRational` reduces after each operation).

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Which ground field a computation is interpreted over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    /// Real operators, exact entries in Q.
    #[serde(rename = "R")]
    Real,
    /// Complex operators, exact entries in Q(i).
    #[serde(rename = "C")]
    Complex,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Real => f.write_str("R"),
            FieldKind::Complex => f.write_str("C"),
        }
    }
}

/// An exact field usable as matrix and polynomial coefficients.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    const KIND: FieldKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn from_rational(q: Rational) -> Self;
    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }
    /// Complex conjugate; the identity on Q.
    fn conj(&self) -> Self;
    /// Real and imaginary parts.
    fn parts(&self) -> (Rational, Rational);
    /// Nearest double-precision complex value.
    fn to_c64(&self) -> Complex64 {
        let (re, im) = self.parts();
        Complex64::new(rational_to_f64(&re), rational_to_f64(&im))
    }
    /// Exact conversion from a complex double (doubles are dyadic rationals).
    fn from_c64(z: Complex64) -> Result<Self, Error>;
    fn parse(s: &str) -> Result<Self, Error>;
    /// Exact conversion from `re + im·i`; fails over Q when `im != 0`.
    fn from_parts(re: Rational, im: Rational) -> Result<Self, Error>;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite double.
pub fn rational_from_f64(x: f64) -> Result<Rational, Error> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(q: &Rational) -> i8 {
    if Zero::is_zero(q) {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.is_empty() {
        return Err(Error::Parse(format!("empty rational in {s:?}")));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(n, d))
    } else if let Some((int, frac)) = t.split_once('.') {
        // finite decimals are accepted on input; they are exact rationals
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches('-');
        let digits = format!("{int_digits}{frac}");
        let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        Ok(if neg { -q } else { q })
    } else {
        let n = BigInt::from_str(t).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        Ok(Rational::from_integer(n))
    }
}

impl Field for Rational {
    const KIND: FieldKind = FieldKind::Real;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn parts(&self) -> (Rational, Rational) {
        (self.clone(), Zero::zero())
    }
    fn from_c64(z: Complex64) -> Result<Self, Error> {
        if z.im != 0.0 {
            return Err(Error::FieldMismatch(
                "complex value where a real one is required".into(),
            ));
        }
        rational_from_f64(z.re)
    }
    fn parse(s: &str) -> Result<Self, Error> {
        let z = GaussianRational::parse(s)?;
        if !Zero::is_zero(&z.im) {
            return Err(Error::FieldMismatch(format!(
                "entry {s:?} has a nonzero imaginary part"
            )));
        }
        Ok(z.re)
    }
    fn from_parts(re: Rational, im: Rational) -> Result<Self, Error> {
        if !Zero::is_zero(&im) {
            return Err(Error::FieldMismatch("nonreal value over Q".into()));
        }
        Ok(re)
    }
}

/// Gaussian rational `re + im·i` with `re, im ∈ Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(Zero::zero(), One::one())
    }

    pub fn from_real(re: Rational) -> Self {
        Self::new(re, Zero::zero())
    }

    /// `|z|^2 = re^2 + im^2`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        Zero::is_zero(&self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            return write!(f, "{}", self.re);
        }
        if Zero::is_zero(&self.re) {
            return write!(f, "{} i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{} i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{} i", self.re, self.im)
        }
    }
}

impl GaussianRational {
    /// Parses `"p/q"`, `"r/s i"`, `"p/q+r/s i"`, `"p/q - r/s i"`, `"i"`, `"-i"`.
    fn parse_text(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = compact.strip_suffix('i') else {
            return Ok(Self::from_real(parse_rational(&compact)?));
        };
        // split real and imaginary parts at the last sign that is not the first character
        // and not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            if bytes[idx] == b'+' || bytes[idx] == b'-' {
                split = Some(idx);
                break;
            }
        }
        let (re_txt, im_txt) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let im_txt = im_txt.strip_suffix('*').unwrap_or(im_txt);
        let im = match im_txt {
            "" | "+" => One::one(),
            "-" => -<Rational as One>::one(),
            t => parse_rational(t)?,
        };
        let re = if re_txt.is_empty() {
            Zero::zero()
        } else {
            parse_rational(re_txt)?
        };
        Ok(Self::new(re, im))
    }
}

impl FromStr for GaussianRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Self::parse_text(s)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}
impl<'a> Add<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn add(self, rhs: &'a Self) -> Self {
        Self::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}
impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}
impl<'a> Sub<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: &'a Self) -> Self {
        Self::new(self.re - &rhs.re, self.im - &rhs.im)
    }
}
impl<'a> Mul<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: &'a Self) -> Self {
        if Zero::is_zero(&self.im) && Zero::is_zero(&rhs.im) {
            return Self::from_real(self.re * &rhs.re);
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}
impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self * &rhs
    }
}
impl<'a> Div<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn div(self, rhs: &'a Self) -> Self {
        if Zero::is_zero(&rhs.im) {
            return Self::new(self.re / &rhs.re, self.im / &rhs.re);
        }
        let n = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Self::new(num.re / &n, num.im / &n)
    }
}
impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self / &rhs
    }
}
impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Field for GaussianRational {
    const KIND: FieldKind = FieldKind::Complex;

    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::from_real(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn from_rational(q: Rational) -> Self {
        Self::from_real(q)
    }
    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
    fn parts(&self) -> (Rational, Rational) {
        (self.re.clone(), self.im.clone())
    }
    fn from_c64(z: Complex64) -> Result<Self, Error> {
        Ok(Self::new(
            rational_from_f64(z.re)?,
            rational_from_f64(z.im)?,
        ))
    }
    fn parse(s: &str) -> Result<Self, Error> {
        Self::parse_text(s)
    }
    fn from_parts(re: Rational, im: Rational) -> Result<Self, Error> {
        Ok(Self::new(re, im))
    }
}

/// Serde adapter writing scalars in their text form.
pub mod text {
    use super::*;

    pub fn serialize<F: Field, S: Serializer>(v: &F, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, F: Field, D: Deserializer<'de>>(d: D) -> Result<F, D::Error> {
        let raw = String::deserialize(d)?;
        F::parse(&raw).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<F: Field, S: Serializer>(v: &[F], s: S) -> Result<S::Ok, S::Error> {
            let texts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            texts.serialize(s)
        }

        pub fn deserialize<'de, F: Field, D: Deserializer<'de>>(d: D) -> Result<Vec<F>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|t| F::parse(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rational_text_forms() {
        assert_eq!(Rational::parse("1/2").unwrap(), q(1, 2));
        assert_eq!(Rational::parse("-6/4").unwrap(), q(-3, 2));
        assert_eq!(Rational::parse("0.25").unwrap(), q(1, 4));
        assert_eq!(Rational::parse("-1.5").unwrap(), q(-3, 2));
        assert_eq!(q(4, 2).to_string(), "2");
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("abc").is_err());
        assert!(Rational::parse("1+i").is_err());
    }

    #[test]
    fn canonical_zero() {
        let z = q(0, 7);
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    #[test]
    fn gaussian_text_forms() {
        let cases = [
            ("3/5+4/5 i", GaussianRational::new(q(3, 5), q(4, 5))),
            ("3/5 - 4/5 i", GaussianRational::new(q(3, 5), q(-4, 5))),
            ("i", GaussianRational::i()),
            ("-i", -GaussianRational::i()),
            ("2i", GaussianRational::new(q(0, 1), q(2, 1))),
            ("1+i", GaussianRational::new(q(1, 1), q(1, 1))),
            ("-1/2", GaussianRational::from_real(q(-1, 2))),
            ("-7/3 i", GaussianRational::new(q(0, 1), q(-7, 3))),
        ];
        for (txt, want) in cases {
            let got: GaussianRational = txt.parse().unwrap();
            assert_eq!(got, want, "{txt}");
            let back: GaussianRational = got.to_string().parse().unwrap();
            assert_eq!(back, got);
        }
    }

    #[test]
    fn gaussian_arithmetic() {
        let a = GaussianRational::new(q(1, 1), q(1, 1));
        assert_eq!(
            (a.clone() * &a.conj()),
            GaussianRational::from_real(q(2, 1))
        );
        let b = GaussianRational::new(q(3, 5), q(4, 5));
        assert_eq!(b.clone() / &b, GaussianRational::one());
        assert_eq!(b.conj().conj(), b);
        assert_eq!(b.norm_sqr(), q(1, 1));
    }
}
