//! Exact arithmetic in cyclotomic fields Q(zeta_n): elements in the power
//! basis, polynomials over them, complex embeddings at arbitrary precision,
//! and in-field square roots.

pub mod cyclotomic;
pub mod embed;
pub mod poly;
pub mod rational;
pub mod sqrt;

pub use cyclotomic::{CyclotomicField, FieldElement};
pub use poly::Poly;
pub use rational::{format_rational, parse_rational, rational_sqrt, Rational};
pub use sqrt::{sqrt_in_field, sqrt_in_field_with, SqrtOptions};
