//! Exact scalars and univariate polynomials over Q and Q(i).

pub mod poly;
pub mod scalar;

pub use poly::{coprime_basis, embed, poly_gcd, product, squarefree_decompose, Poly};
pub use scalar::{rational_to_f64, sign, Field, FieldKind, GaussianRational, Rational};
