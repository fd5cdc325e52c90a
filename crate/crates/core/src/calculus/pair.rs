use std::cmp::max;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, PointIdx};
use crate::rational::{abs, two, Rational};

/// Closed-form norm of `m_xy + m_uv`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairNormReport {
    /// `min(2, (d(x,v) + d(u,y) + |d(x,y) − d(u,v)|) / max(d(x,y), d(u,v)))`
    pub value: Rational,
    /// `(d(x,y) + d(u,v) − d(x,v) − d(u,y)) / max(d(x,y), d(u,v))`; the
    /// uncapped formula equals `2 − epsilon_star`.
    pub epsilon_star: Rational,
    /// The uncapped formula exceeded 2.
    pub attained_by_cap: bool,
}

/// `‖m_xy + m_uv‖` without solving a transport problem.
///
/// For every `ε > 0` the norm is at least `2 − ε` exactly when
/// `d(x,v) + d(u,y) ≥ d(x,y) + d(u,v) − ε·max(d(x,y), d(u,v))`, so the norm
/// is `2 − ε*` when `ε* ≥ 0` and saturates at 2 otherwise.
pub fn pair_sum_norm(
    space: &FiniteMetricSpace,
    x: PointIdx,
    y: PointIdx,
    u: PointIdx,
    v: PointIdx,
) -> Result<PairNormReport> {
    if x == y || u == v {
        return Err(Error::pre("pair norm needs two nondegenerate molecules"));
    }
    let dxy = space.d(x, y);
    let duv = space.d(u, v);
    let scale = max(dxy, duv);
    let epsilon_star = (dxy + duv - space.d(x, v) - space.d(u, y)) / scale;
    let raw = (space.d(x, v) + space.d(u, y) + abs(&(dxy - duv))) / scale;
    let attained_by_cap = epsilon_star.is_negative();
    Ok(PairNormReport {
        value: if attained_by_cap { two() } else { raw },
        epsilon_star,
        attained_by_cap,
    })
}

/// `‖m_xy − m_uv‖ = ‖m_xy + m_vu‖`.
pub fn pair_distance(
    space: &FiniteMetricSpace,
    x: PointIdx,
    y: PointIdx,
    u: PointIdx,
    v: PointIdx,
) -> Result<Rational> {
    Ok(pair_sum_norm(space, x, y, v, u)?.value)
}
