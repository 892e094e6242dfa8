//! Exact invariants of smooth plane quartics x^3 + p(t) x^2 + q(t) x + r(t):
//! bitangent lines, square-root sections of the restricted quartic, the
//! height pairing between sections, and the connected-component invariants
//! of subarrangements, with an independent floating-point oracle.

pub mod curve;
pub mod oracle;
pub mod pairing;
pub mod topology;
pub mod cli;
pub mod error;
pub mod exactfield;
pub mod io;

pub use error::{Error, Result};
