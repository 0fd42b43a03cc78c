//! Exact and high-precision arithmetic underpinning the whole crate.
//!
//! The layers, bottom to top: binary big-floats and complex pairs
//! ([`bigfloat`]), dense rational polynomials ([`poly`]), number fields with
//! a pinned complex embedding ([`numberfield`]), the mixed exact/float
//! complex type [`ExactComplex`] ([`exact`]), and LLL-based recognition of
//! floats as algebraic numbers ([`recognize`]).

pub mod bigfloat;
pub mod exact;
pub mod numberfield;
pub mod poly;
pub mod recognize;

pub use bigfloat::{f_parse_decimal, f_to_decimal_string, pow2, rat_from_f, CF, DEFAULT_PREC, F};
pub use exact::{rational_coordinates, ExactComplex, Value};
pub use numberfield::{NumberField, NumberFieldElement};
pub use recognize::recognize_algebraic;

/// Exact rational scalar used across lattices and field coefficients.
pub type Rational = num_rational::BigRational;

#[derive(thiserror::Error, Debug)]
pub enum NumericsError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid number field: {0}")]
    BadField(String),
    #[error("root approximation matches {0} roots instead of exactly one")]
    EmbeddingAmbiguous(usize),
}

/// Evaluate any exact value to a complex big-float at `prec` bits.
pub fn eval_numeric(x: &ExactComplex, prec: u32) -> CF {
    x.eval(prec)
}
