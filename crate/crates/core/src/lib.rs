pub mod conjugacy;
pub mod error;
pub mod exact;
pub mod io;
pub mod linalg;
pub mod spectral;
pub mod structure;
pub mod witness;

pub use error::{Error, Result};
pub use exact::{Field, FieldKind, GaussianRational, Poly, Rational};
pub use linalg::{mat_poly_eval, AffineOperator, GMatrix, Matrix, QMatrix};
