use num_traits::Signed;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, PointIdx, SegmentQuery};
use crate::rational::{to_canonical, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct DescentResult {
    pub x: PointIdx,
    pub y: PointIdx,
    /// Intermediate pairs, starting with `(u, v)` and ending with `(x, y)`.
    pub path: Vec<(PointIdx, PointIdx)>,
}

/// Finds a denting molecule `m_xy` with `x ∈ B(u,r)` and `y ∈ B(v,s)`.
///
/// Requires `r + s < d(u,v)` and `[u,v]_δ ⊆ B(u,r) ∪ B(v,s)` (radii are
/// absolute). Starting from `(x, y) = (u, v)` the loop keeps
/// `d(u,x) + d(x,y) + d(y,v) < d(u,v) + δ`, so every point of `[x,y]` lies in
/// `[u,v]_δ` and hence in one of the two balls. An interior point of `[x,y]`
/// replaces the endpoint whose ball contains it; `d(x,y)` strictly drops, so
/// the loop ends at a pair with trivial segment.
pub fn denting_descent(
    space: &FiniteMetricSpace,
    u: PointIdx,
    v: PointIdx,
    r: &Rational,
    s: &Rational,
    delta: &Rational,
) -> Result<DescentResult> {
    if u == v {
        return Err(Error::pre("descent needs distinct endpoints"));
    }
    if !r.is_positive() || !s.is_positive() || !delta.is_positive() {
        return Err(Error::pre("radii and delta must be positive"));
    }
    if r + s >= *space.d(u, v) {
        return Err(Error::pre(format!(
            "radii sum {} must be below d(u,v) = {}",
            to_canonical(&(r + s)),
            to_canonical(space.d(u, v))
        )));
    }
    let seg = space.delta_segment(&SegmentQuery {
        u,
        v,
        delta: delta.clone(),
    })?;
    if let Some(&p) = seg
        .iter()
        .find(|&&p| !space.in_ball(u, p, r) && !space.in_ball(v, p, s))
    {
        return Err(Error::pre(format!(
            "point {} of the delta-segment lies in neither ball",
            space.id(p)
        )));
    }

    let (mut x, mut y) = (u, v);
    let mut path = vec![(x, y)];
    loop {
        let interior = space.segment(x, y)?.into_iter().find(|&p| p != x && p != y);
        let Some(p) = interior else {
            return Ok(DescentResult { x, y, path });
        };
        if space.in_ball(u, p, r) {
            x = p;
        } else {
            y = p;
        }
        path.push((x, y));
    }
}
