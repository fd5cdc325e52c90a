//! Molecule calculus: pair norms, the cycle inequality, `M(μ)` and the
//! supporting functions built from it.

mod cycle;
mod mu;
mod pair;
mod support;

pub use cycle::{cycle_inequality, rerepresent, CycleReport};
pub use mu::{lambda_max, lambda_profile, mu_member, mu_set, MuMember, MuScope, MuSet};
pub use pair::{pair_distance, pair_sum_norm, PairNormReport};
pub use support::{f_mu, jrz_kernel, support_function, FMu};
