use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::free_space::{molecule, norm, pairing, FreeElement, LipschitzFunction};
use crate::metric::{FiniteMetricSpace, PointIdx};
use crate::rational::{one, to_canonical, zero, Rational};

/// Largest `λ ∈ [0,1]` with `‖μ − λ·m_uv‖ ≤ 1 − λ`, for a unit-norm `μ`.
///
/// `ψ(λ) = ‖μ − λ m_uv‖ + λ − 1` is convex, piecewise linear, nonnegative
/// and vanishes at 0, so its zero set is `[0, λ_max]`. Starting from
/// `λ = 1`, each dual potential of `μ − λ m_uv` gives a supporting line of
/// `ψ`; jumping to the root of that line never overshoots `λ_max` and
/// visits a new linear piece every time, so the walk ends exactly.
pub fn lambda_max(
    space: &FiniteMetricSpace,
    el: &FreeElement,
    u: PointIdx,
    v: PointIdx,
) -> Result<Rational> {
    let m = molecule(space, u, v)?;
    let mut lambda = one();
    for _ in 0..10_000 {
        let shifted = el.minus(&m.scaled(&lambda));
        let cert = norm(space, &shifted)?;
        let psi = &cert.value + &lambda - one();
        if psi.is_zero() {
            return Ok(lambda);
        }
        if psi.is_negative() {
            return Err(Error::pre("element has norm above one"));
        }
        let f = &cert.potential;
        let slope = one() - f.on_molecule(space, u, v);
        if !slope.is_positive() {
            return Err(Error::pre("element is not of unit norm"));
        }
        let next = (one() - pairing(f, el)) / slope;
        if next >= lambda || next.is_negative() {
            return Err(Error::Solver("supporting-line walk did not descend".into()));
        }
        lambda = next;
    }
    Err(Error::Solver(
        "supporting-line walk did not terminate".into(),
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MuMember {
    pub u: PointIdx,
    pub v: PointIdx,
    /// `λ_max(u, v) > 0`
    pub lambda: Rational,
    /// `ν` with `μ = λ m_uv + (1 − λ) ν` and `‖ν‖ = 1`.
    pub residual: FreeElement,
}

/// Which ordered pairs [`mu_set`] examines.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MuScope {
    /// Pairs drawn from the support and the presentation points.
    #[default]
    Presentation,
    AllPairs,
}

/// Molecules `m_uv` that appear with positive weight in some decomposition
/// `μ = λ m_uv + (1 − λ) ν` with `‖ν‖ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MuSet {
    pub members: Vec<MuMember>,
    /// Ordered pairs examined, in id order.
    pub candidates: Vec<(PointIdx, PointIdx)>,
}

impl MuSet {
    pub fn contains(&self, u: PointIdx, v: PointIdx) -> bool {
        self.member(u, v).is_some()
    }

    pub fn member(&self, u: PointIdx, v: PointIdx) -> Option<&MuMember> {
        self.members.iter().find(|m| m.u == u && m.v == v)
    }
}

fn require_unit(space: &FiniteMetricSpace, el: &FreeElement) -> Result<LipschitzFunction> {
    let cert = norm(space, el)?;
    if !cert.value.is_one() {
        return Err(Error::pre(format!(
            "element must have norm 1, has {}",
            to_canonical(&cert.value)
        )));
    }
    Ok(cert.potential)
}

/// Membership witness for a single ordered pair, or `None` when `m_uv` is
/// not in `M(μ)`. `norming` is any 1-Lipschitz `g` with `g(μ) = 1`; every
/// member satisfies `g(m_uv) = 1`, so other pairs are excluded without a
/// solve.
pub fn mu_member(
    space: &FiniteMetricSpace,
    el: &FreeElement,
    norming: &LipschitzFunction,
    u: PointIdx,
    v: PointIdx,
) -> Result<Option<MuMember>> {
    if u == v || !norming.on_molecule(space, u, v).is_one() {
        return Ok(None);
    }
    let lambda = lambda_max(space, el, u, v)?;
    if lambda.is_zero() {
        return Ok(None);
    }
    let m = molecule(space, u, v)?;
    let residual = if lambda.is_one() {
        m
    } else {
        el.minus(&m.scaled(&lambda))
            .scaled(&(one() / (one() - &lambda)))
    };
    Ok(Some(MuMember {
        u,
        v,
        lambda,
        residual,
    }))
}

pub fn mu_set(space: &FiniteMetricSpace, el: &FreeElement, scope: MuScope) -> Result<MuSet> {
    let norming = require_unit(space, el)?;
    let candidates = match scope {
        MuScope::AllPairs => space.ordered_pairs(),
        MuScope::Presentation => {
            let mut pts: BTreeSet<PointIdx> = el.support().into_iter().collect();
            if let Some(terms) = el.presentation() {
                pts.extend(terms.iter().flat_map(|t| [t.x, t.y]));
            }
            let mut pairs: Vec<_> = pts
                .iter()
                .flat_map(|&u| pts.iter().filter(move |&&v| v != u).map(move |&v| (u, v)))
                .collect();
            space.sort_pairs(&mut pairs);
            pairs
        }
    };
    let mut members = Vec::new();
    for &(u, v) in &candidates {
        if let Some(m) = mu_member(space, el, &norming, u, v)? {
            members.push(m);
        }
    }
    Ok(MuSet {
        members,
        candidates,
    })
}

/// `λ_max` for every ordered pair, zero for non-members. Convenience for
/// reports.
pub fn lambda_profile(
    space: &FiniteMetricSpace,
    el: &FreeElement,
    pairs: &[(PointIdx, PointIdx)],
) -> Result<Vec<Rational>> {
    let norming = require_unit(space, el)?;
    pairs
        .iter()
        .map(|&(u, v)| {
            Ok(mu_member(space, el, &norming, u, v)?
                .map(|m| m.lambda)
                .unwrap_or_else(zero))
        })
        .collect()
}
