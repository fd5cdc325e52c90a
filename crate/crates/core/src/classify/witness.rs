use num_traits::Signed;

use crate::classify::daugavet::require_unit;
use crate::classify::denting::distance_to_molecule;
use crate::classify::Slice;
use crate::error::{Error, Result};
use crate::free_space::FreeElement;
use crate::metric::{FiniteMetricSpace, PointIdx, SegmentQuery};
use crate::rational::{one, pow, rat, to_canonical, two, Rational};

const MAX_STEPS: u32 = 4096;
const MAX_HALVINGS: u32 = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessStep {
    pub u: PointIdx,
    pub v: PointIdx,
    pub length: Rational,
    pub distance: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalReason {
    /// `[u_k, v_k]_{δ d_k}` has no point outside both shrunken balls.
    NoSplitPoint,
    /// All `n` halving steps were used without reaching `2 − ε`.
    StepBudgetExhausted,
}

impl TerminalReason {
    pub fn name(self) -> &'static str {
        match self {
            TerminalReason::NoSplitPoint => "no-split-point",
            TerminalReason::StepBudgetExhausted => "step-budget-exhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessOutcome {
    /// In-slice molecule with `‖μ − m_uv‖ ≥ 2 − ε`.
    Found(WitnessStep),
    /// Last in-slice pair reached; its length is bounded below by the
    /// space's resolution.
    Terminal {
        last: WitnessStep,
        reason: TerminalReason,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub outcome: WitnessOutcome,
    pub path: Vec<WitnessStep>,
    /// Step budget `n`.
    pub steps: u32,
    pub delta: Rational,
    /// Smallest positive distance of the space.
    pub gamma: Rational,
}

impl WitnessReport {
    pub fn found(&self) -> Option<&WitnessStep> {
        match &self.outcome {
            WitnessOutcome::Found(step) => Some(step),
            WitnessOutcome::Terminal { .. } => None,
        }
    }
}

/// Starting pair: largest `f(m_uv)`, then shortest, then id order.
fn start_pair(space: &FiniteMetricSpace, slice: &Slice) -> Option<(PointIdx, PointIdx)> {
    let f = slice.f();
    let mut best: Option<((PointIdx, PointIdx), Rational)> = None;
    for (u, v) in slice.molecules(space) {
        let value = f.on_molecule(space, u, v);
        let better = match &best {
            None => true,
            Some(((bu, bv), bval)) => {
                value > *bval || (value == *bval && space.d(u, v) < space.d(*bu, *bv))
            }
        };
        if better {
            best = Some(((u, v), value));
        }
    }
    best.map(|(pair, _)| pair)
}

/// Replays the slice-splitting argument that turns the segment condition
/// into the Daugavet property.
///
/// From an in-slice pair `(u_k, v_k)` at distance below `2 − ε`, a point `p`
/// of `[u_k, v_k]_{δ d_k}` outside `B(u_k, ε d_k/4) ∪ B(v_k, ε d_k/4)` splits
/// the pair; one half still satisfies
/// `f(u) − f(v) > (1−α)(1+δ)^{n−k−1} d(u,v)` and is shorter by a factor
/// `1 − ε/4 + δ`. `n` and `δ` are fixed from `ε` and the smallest distance
/// `γ` so that `(1 − ε/4 + δ)^n d_0 < γ`.
pub fn daugavet_witness_search(
    space: &FiniteMetricSpace,
    el: &FreeElement,
    slice: &Slice,
    eps: &Rational,
) -> Result<WitnessReport> {
    if !eps.is_positive() || eps >= &two() {
        return Err(Error::pre(format!(
            "eps must lie in (0,2), got {}",
            to_canonical(eps)
        )));
    }
    require_unit(space, el)?;
    if !slice.contains(el) {
        return Err(Error::pre("slice does not contain the element"));
    }
    let f = slice.f();
    let (u0, v0) = start_pair(space, slice)
        .ok_or_else(|| Error::Solver("slice contains no molecule".into()))?;
    let gamma = space.min_positive_distance().expect("two distinct points");
    let d0 = space.d(u0, v0).clone();
    let quarter = eps / rat(4, 1);
    let shrink = one() - &quarter;

    let mut n = 0u32;
    while pow(&shrink, n) * &d0 >= gamma {
        n += 1;
        if n > MAX_STEPS {
            return Err(Error::Solver("step budget does not fit".into()));
        }
    }
    let f0 = f.value(u0) - f.value(v0);
    let mut delta = eps / rat(8, 1);
    let mut halvings = 0;
    while pow(&(&shrink + &delta), n) * &d0 >= gamma
        || f0 <= slice.threshold() * pow(&(one() + &delta), n) * &d0
    {
        delta /= two();
        halvings += 1;
        if halvings > MAX_HALVINGS {
            return Err(Error::Solver("no admissible delta found".into()));
        }
    }

    let step = |u: PointIdx, v: PointIdx| -> Result<WitnessStep> {
        Ok(WitnessStep {
            u,
            v,
            length: space.d(u, v).clone(),
            distance: distance_to_molecule(space, el, u, v)?,
        })
    };
    let target = two() - eps;
    let (mut u, mut v) = (u0, v0);
    let mut path = Vec::new();
    for k in 0..=n {
        let current = step(u, v)?;
        path.push(current.clone());
        if current.distance >= target {
            return Ok(WitnessReport {
                outcome: WitnessOutcome::Found(current),
                path,
                steps: n,
                delta,
                gamma,
            });
        }
        if k == n {
            return Ok(WitnessReport {
                outcome: WitnessOutcome::Terminal {
                    last: current,
                    reason: TerminalReason::StepBudgetExhausted,
                },
                path,
                steps: n,
                delta,
                gamma,
            });
        }
        let dk = space.d(u, v).clone();
        let radius = &quarter * &dk;
        let split = space
            .delta_segment(&SegmentQuery {
                u,
                v,
                delta: &delta * &dk,
            })?
            .into_iter()
            .find(|&p| !space.in_ball(u, p, &radius) && !space.in_ball(v, p, &radius));
        let Some(p) = split else {
            return Ok(WitnessReport {
                outcome: WitnessOutcome::Terminal {
                    last: current,
                    reason: TerminalReason::NoSplitPoint,
                },
                path,
                steps: n,
                delta,
                gamma,
            });
        };
        let factor = slice.threshold() * pow(&(one() + &delta), n - k - 1);
        if f.value(u) - f.value(p) > &factor * space.d(u, p) {
            v = p;
        } else {
            u = p;
        }
        if !slice.contains_molecule(space, u, v) {
            return Err(Error::Solver("split left the slice".into()));
        }
    }
    unreachable!("loop returns at k = n")
}
