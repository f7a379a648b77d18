//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{Field, GaussianRational, Rational};
use crate::error::{Error, Result};

/// Polynomial with coefficients stored lowest degree first. The zero
/// polynomial has no coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(c: F, degree: usize) -> Self {
        let mut coeffs = vec![F::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `x - root`.
    pub fn linear(root: F) -> Self {
        Self::new(vec![-root, F::one()])
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading().inv();
        self.scale(&lc)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * &F::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * q) + &Self::constant(c.clone())
        })
    }

    /// Coefficient-wise conjugate.
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(F::conj).collect())
    }

    /// `x^deg · p(1/x)`.
    pub fn reciprocal(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Multiplicity of 0 as a root.
    pub fn zero_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Drops the factor `x^k`.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lc_inv = d.leading().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                let t = c.clone() * dj;
                rem[k + j] = rem[k + j].clone() - &t;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Quotient of an exact division; errors if a remainder is left.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, p: &Self) -> bool {
        if self.is_zero() {
            return p.is_zero();
        }
        p.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn square_free_part(&self) -> Self {
        if self.is_constant() {
            return Self::one();
        }
        let g = poly_gcd(self, &self.derivative());
        self.exact_div(&g)
            .expect("gcd divides its argument")
            .monic()
    }
}

/// Embeds a rational polynomial into any field.
pub fn embed<F: Field>(p: &Poly<Rational>) -> Poly<F> {
    p.map(|c| F::from_rational(c.clone()))
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd<F: Field>(p: &Poly<F>, q: &Poly<F>) -> Poly<F> {
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let r = a.rem(&b).expect("divisor is nonzero");
        a = b;
        // keep remainders monic to limit coefficient growth
        b = r.monic();
    }
    a.monic()
}

/// Square-free decomposition `p = c · ∏ f_i^{m_i}` (Yun's algorithm) with
/// monic, pairwise coprime, square-free `f_i` and increasing `m_i`.
pub fn squarefree_decompose<F: Field>(p: &Poly<F>) -> Result<Vec<(Poly<F>, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    if p.is_constant() {
        return Ok(out);
    }
    let f = p.monic();
    let df = f.derivative();
    let b = poly_gcd(&f, &df);
    let mut c = f.exact_div(&b)?;
    let mut d = &df.exact_div(&b)? - &c.derivative();
    let mut mult = 1;
    while !c.is_constant() {
        let a = poly_gcd(&c, &d);
        c = c.exact_div(&a)?;
        d = &d.exact_div(&a)? - &c.derivative();
        if !a.is_constant() {
            out.push((a, mult));
        }
        mult += 1;
    }
    Ok(out)
}

/// Product of a list of polynomials.
pub fn product<F: Field>(ps: impl IntoIterator<Item = Poly<F>>) -> Poly<F> {
    ps.into_iter().fold(Poly::one(), |acc, p| &acc * &p)
}

/// Pairwise coprime, square-free refinement of a family of square-free
/// polynomials: every input is a product of some of the returned elements.
pub fn coprime_basis<F: Field>(polys: &[Poly<F>]) -> Vec<Poly<F>> {
    let mut basis: Vec<Poly<F>> = Vec::new();
    for p in polys {
        if p.is_constant() {
            continue;
        }
        let mut rest = p.monic();
        let mut next = Vec::with_capacity(basis.len() + 2);
        for b in basis {
            let g = poly_gcd(&b, &rest);
            if g.is_constant() {
                next.push(b);
                continue;
            }
            let cof = b.exact_div(&g).expect("gcd divides");
            if !cof.is_constant() {
                next.push(cof.monic());
            }
            rest = rest.exact_div(&g).expect("gcd divides");
            next.push(g);
        }
        if !rest.is_constant() {
            next.push(rest.monic());
        }
        basis = next;
    }
    basis
}

impl Poly<GaussianRational> {
    /// `p · conj(p)`, a polynomial with rational coefficients whose roots are
    /// the roots of `p` together with their conjugates.
    pub fn norm_poly(&self) -> Poly<Rational> {
        let prod = self * &self.conj();
        prod.map(|c| c.re.clone())
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + &(a.clone() * b);
            }
        }
        Poly::new(out)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let txt = c.to_string();
            let compound = txt.contains(' ') || txt[1..].contains(['+', '-']);
            let (neg, body) = match txt.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, txt.clone()),
            };
            let body = if compound { format!("({body})") } else { body };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => f.write_str(&body)?,
                _ => {
                    if body != "1" {
                        write!(f, "{body}*")?;
                    }
                    if k == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<F: Field> Serialize for Poly<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let texts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        texts.serialize(s)
    }
}

impl<'de, F: Field> Deserialize<'de> for Poly<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|t| F::parse(t).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<F>, _>>()?;
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Poly<Rational>;

    fn p(cs: &[i64]) -> P {
        P::from_i64s(cs)
    }

    #[test]
    fn gcd_examples() {
        // gcd(x^2-1, x-1) = x-1
        assert_eq!(poly_gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])), p(&[-1, 1]));
        // gcd(x^2+1, x-2) = 1
        assert_eq!(poly_gcd(&p(&[1, 0, 1]), &p(&[-2, 1])), P::one());
        // x^3-x = x(x-1)(x+1), x^2-2x+1 = (x-1)^2
        assert_eq!(poly_gcd(&p(&[0, -1, 0, 1]), &p(&[1, -2, 1])), p(&[-1, 1]));
        // gcd with zero is the monic other argument
        assert_eq!(poly_gcd(&p(&[4, 2]), &P::zero()), p(&[2, 1]));
    }

    #[test]
    fn squarefree_examples() {
        // (x-1)^2 (x-2)
        let f = &p(&[-1, 1]).pow(2) * &p(&[-2, 1]);
        assert_eq!(
            squarefree_decompose(&f).unwrap(),
            vec![(p(&[-2, 1]), 1), (p(&[-1, 1]), 2)]
        );
        assert_eq!(
            squarefree_decompose(&p(&[0, 0, 0, 1])).unwrap(),
            vec![(p(&[0, 1]), 3)]
        );
        // x^4 - 2x^2 + 1 = (x^2-1)^2
        assert_eq!(
            squarefree_decompose(&p(&[1, 0, -2, 0, 1])).unwrap(),
            vec![(p(&[-1, 0, 1]), 2)]
        );
        assert_eq!(squarefree_decompose(&P::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn display_forms() {
        let f = P::new(vec![
            Rational::from_integer(1.into()),
            Rational::new((-6).into(), 5.into()),
            Rational::from_integer(1.into()),
        ]);
        assert_eq!(f.to_string(), "x^2 - 6/5*x + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        let g: Poly<GaussianRational> =
            Poly::new(vec!["-3/5-4/5 i".parse().unwrap(), GaussianRational::one()]);
        assert_eq!(g.to_string(), "x + (-3/5-4/5 i)");
    }

    #[test]
    fn norm_poly_of_gaussian_linear() {
        let g: Poly<GaussianRational> = Poly::linear("3/5+4/5 i".parse().unwrap());
        let n = g.norm_poly();
        assert_eq!(n.coeffs()[1], Rational::new((-6).into(), 5.into()));
        assert_eq!(n.coeffs()[0], Rational::from_integer(1.into()));
    }

    #[test]
    fn coprime_basis_refines() {
        let a = &p(&[-1, 1]) * &p(&[-2, 1]);
        let b = &p(&[-2, 1]) * &p(&[-3, 1]);
        let basis = coprime_basis(&[a, b]);
        assert_eq!(basis.len(), 3);
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                assert!(poly_gcd(&basis[i], &basis[j]).is_constant());
            }
        }
    }
}
