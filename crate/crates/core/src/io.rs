//! Reading operators from JSON and choosing the ground field.
//!
//! Entries are read over Q(i). The field is C when some entry has a nonzero
//! imaginary part or when C is requested; otherwise R.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Field, FieldKind, GaussianRational, Rational};
use crate::linalg::AffineOperator;

/// An operator over whichever field was inferred.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum AnyOperator {
    Real(AffineOperator<Rational>),
    Complex(AffineOperator<GaussianRational>),
}

impl AnyOperator {
    pub fn field(&self) -> FieldKind {
        match self {
            AnyOperator::Real(_) => FieldKind::Real,
            AnyOperator::Complex(_) => FieldKind::Complex,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyOperator::Real(f) => f.dim(),
            AnyOperator::Complex(f) => f.dim(),
        }
    }
}

/// Parses `{"A": <matrix>, "b": [...]}` over Q(i).
pub fn parse_operator(text: &str) -> Result<AffineOperator<GaussianRational>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn is_real(f: &AffineOperator<GaussianRational>) -> bool {
    f.a.entries().iter().chain(&f.b).all(|z| z.im.is_zero())
}

/// The field a group of operators is read over.
pub fn infer_field(
    ops: &[AffineOperator<GaussianRational>],
    requested: Option<FieldKind>,
) -> Result<FieldKind> {
    let real = ops.iter().all(is_real);
    match requested {
        Some(FieldKind::Real) if !real => Err(Error::FieldMismatch(
            "entries with nonzero imaginary part cannot be read over R".into(),
        )),
        Some(k) => Ok(k),
        None if real => Ok(FieldKind::Real),
        None => Ok(FieldKind::Complex),
    }
}

/// Converts to the given field.
pub fn with_field(f: AffineOperator<GaussianRational>, field: FieldKind) -> Result<AnyOperator> {
    match field {
        FieldKind::Complex => Ok(AnyOperator::Complex(f)),
        FieldKind::Real => {
            if !is_real(&f) {
                return Err(Error::FieldMismatch("operator has non-real entries".into()));
            }
            Ok(AnyOperator::Real(f.map(|z| z.re.clone())))
        }
    }
}

/// Parses a group of operators and reads them over a common field.
pub fn read_operators(texts: &[&str], requested: Option<FieldKind>) -> Result<Vec<AnyOperator>> {
    let ops = texts
        .iter()
        .map(|t| parse_operator(t))
        .collect::<Result<Vec<_>>>()?;
    let field = infer_field(&ops, requested)?;
    ops.into_iter().map(|f| with_field(f, field)).collect()
}
