use crate::calculus::pair_distance;
use crate::error::Result;
use crate::free_space::{molecule, norm, FreeElement};
use crate::metric::{FiniteMetricSpace, PointIdx};
use crate::rational::Rational;

/// `m_uv` is a denting point of the unit ball.
///
/// On a finite space δ-segments stabilise to `[u,v]` and balls of small
/// radius are singletons, so "for every ε there is γ with
/// `[u,v]_γ ⊆ B(u,ε) ∪ B(v,ε)`" reduces to `[u,v] = {u,v}`.
pub fn is_denting(space: &FiniteMetricSpace, u: PointIdx, v: PointIdx) -> Result<bool> {
    Ok(space.segment(u, v)?.len() == 2)
}

/// Unordered denting pairs `(u, v)` with `u` before `v` in id order.
pub fn denting_set(space: &FiniteMetricSpace) -> Vec<(PointIdx, PointIdx)> {
    space
        .ordered_pairs()
        .into_iter()
        .filter(|&(u, v)| space.rank(u) < space.rank(v))
        .filter(|&(u, v)| is_denting(space, u, v).expect("distinct points"))
        .collect()
}

/// Both orientations of every denting pair, in id order.
pub fn denting_molecules(space: &FiniteMetricSpace) -> Vec<(PointIdx, PointIdx)> {
    let mut out: Vec<_> = denting_set(space)
        .into_iter()
        .flat_map(|(u, v)| [(u, v), (v, u)])
        .collect();
    space.sort_pairs(&mut out);
    out
}

/// `‖μ − m_uv‖`, through the closed form when `μ` is a molecule.
pub fn distance_to_molecule(
    space: &FiniteMetricSpace,
    el: &FreeElement,
    u: PointIdx,
    v: PointIdx,
) -> Result<Rational> {
    match el.as_molecule() {
        Some((x, y)) => pair_distance(space, x, y, u, v),
        None => Ok(norm(space, &el.minus(&molecule(space, u, v)?))?.value),
    }
}
