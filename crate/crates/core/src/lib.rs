//! Exact extremal geometry of Lipschitz-free spaces over finite metric
//! spaces.
//!
//! Norms are computed exactly through optimal transport with primal and
//! dual certificates, and everything downstream (denting pairs, Daugavet
//! tests, supporting functionals, slice scans) works in exact rational
//! arithmetic.

pub mod calculus;
pub mod classify;
pub mod error;
pub mod free_space;
pub mod io;
pub mod metric;
pub mod rational;
pub mod spaces;

pub use error::{Error, Result};
pub use free_space::{
    combine, lipschitz_constant, mcshane_extend, molecule, norm, pairing, FreeElement,
    LipschitzFunction, MoleculeTerm, NormCertificate,
};
pub use metric::{FiniteMetricSpace, Point, PointIdx, SegmentQuery, Violation};
pub use rational::Rational;
