use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::free_space::{lipschitz_constant, pairing, FreeElement, LipschitzFunction};
use crate::metric::{FiniteMetricSpace, PointIdx};
use crate::rational::{one, to_canonical, Rational};

/// `S(f, α) = {μ ∈ B : f(μ) > 1 − α}` for a functional of norm one.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    f: LipschitzFunction,
    alpha: Rational,
}

impl Slice {
    /// Requires `lip(f) = 1` exactly and `0 < α < 1`.
    pub fn new(space: &FiniteMetricSpace, f: LipschitzFunction, alpha: Rational) -> Result<Self> {
        check_alpha(&alpha)?;
        let lip = lipschitz_constant(space, &f);
        if !lip.is_one() {
            return Err(Error::pre(format!(
                "slice functional must have Lipschitz constant 1, has {}",
                to_canonical(&lip)
            )));
        }
        Ok(Slice { f, alpha })
    }

    /// Divides `f` by its Lipschitz constant first.
    pub fn normalized(
        space: &FiniteMetricSpace,
        f: LipschitzFunction,
        alpha: Rational,
    ) -> Result<Self> {
        let lip = lipschitz_constant(space, &f);
        if lip.is_zero() {
            return Err(Error::pre("cannot normalize the zero function"));
        }
        Slice::new(space, f.scaled(&(one() / lip)), alpha)
    }

    pub fn f(&self) -> &LipschitzFunction {
        &self.f
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// `1 − α`.
    pub fn threshold(&self) -> Rational {
        one() - &self.alpha
    }

    pub fn contains(&self, el: &FreeElement) -> bool {
        pairing(&self.f, el) > self.threshold()
    }

    pub fn contains_molecule(&self, space: &FiniteMetricSpace, u: PointIdx, v: PointIdx) -> bool {
        u != v && self.f.on_molecule(space, u, v) > self.threshold()
    }

    /// In-slice molecules in id order.
    pub fn molecules(&self, space: &FiniteMetricSpace) -> Vec<(PointIdx, PointIdx)> {
        space
            .ordered_pairs()
            .into_iter()
            .filter(|&(u, v)| self.contains_molecule(space, u, v))
            .collect()
    }
}

pub(crate) fn check_alpha(alpha: &Rational) -> Result<()> {
    if !alpha.is_positive() || alpha >= &one() {
        return Err(Error::pre(format!(
            "slice depth must lie in (0,1), got {}",
            to_canonical(alpha)
        )));
    }
    Ok(())
}
