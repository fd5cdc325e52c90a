use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::free_space::{combine, MoleculeTerm};
use crate::metric::FiniteMetricSpace;
use crate::rational::{to_canonical, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct CycleReport {
    /// `Σ_j d(x_{k_j}, y_{k_{j+1}})`
    pub lhs: Rational,
    /// `Σ_j d(x_{k_j}, y_{k_j})`
    pub rhs: Rational,
    pub slack: Rational,
}

fn check_cycle(terms: &[MoleculeTerm], cycle: &[usize]) -> Result<()> {
    if terms.is_empty() {
        return Err(Error::pre("cycle needs a nonempty presentation"));
    }
    if cycle.len() < 2 {
        return Err(Error::pre("cycle must list at least k_1 and k_{m+1}"));
    }
    if cycle.first() != cycle.last() {
        return Err(Error::pre("cycle must be closed (first index equals last)"));
    }
    if let Some(&bad) = cycle.iter().find(|&&k| k >= terms.len()) {
        return Err(Error::pre(format!(
            "cycle index {bad} out of range for {} terms",
            terms.len()
        )));
    }
    Ok(())
}

/// Both sides of the cycle inequality for a closed index sequence
/// `k_1, …, k_{m+1}` (0-based, `k_1 = k_{m+1}`). Unit-norm combinations
/// have nonnegative slack on every cycle.
pub fn cycle_inequality(
    space: &FiniteMetricSpace,
    terms: &[MoleculeTerm],
    cycle: &[usize],
) -> Result<CycleReport> {
    check_cycle(terms, cycle)?;
    let mut lhs = Rational::zero();
    let mut rhs = Rational::zero();
    for w in cycle.windows(2) {
        let (here, next) = (&terms[w[0]], &terms[w[1]]);
        lhs += space.d(here.x, next.y);
        rhs += space.d(here.x, here.y);
    }
    let slack = &lhs - &rhs;
    Ok(CycleReport { lhs, rhs, slack })
}

/// Rewrites a presentation along a zero-slack cycle.
///
/// With `λ0 = min_i λ_i / d(x_i,y_i)` every cycle term gives up
/// `λ0·d(x_i,y_i)` of its weight, and the cross molecules
/// `m_{x_{k_j} y_{k_{j+1}}}` receive `λ0·d(x_{k_j}, y_{k_{j+1}})`. The
/// measure is unchanged and, because the slack is zero, so is the total
/// weight. Terms whose weight drops to zero are removed and repeated pairs
/// merged.
pub fn rerepresent(
    space: &FiniteMetricSpace,
    terms: &[MoleculeTerm],
    cycle: &[usize],
) -> Result<Vec<MoleculeTerm>> {
    let report = cycle_inequality(space, terms, cycle)?;
    if !report.slack.is_zero() {
        return Err(Error::pre(format!(
            "re-representation needs a zero-slack cycle, slack is {}",
            to_canonical(&report.slack)
        )));
    }
    let body = &cycle[..cycle.len() - 1];
    for (i, k) in body.iter().enumerate() {
        if body[i + 1..].contains(k) {
            return Err(Error::pre(format!("cycle index {k} repeats")));
        }
    }
    let lambda0 = terms
        .iter()
        .map(|t| &t.weight / space.d(t.x, t.y))
        .min()
        .expect("nonempty presentation");

    let mut out: Vec<MoleculeTerm> = Vec::new();
    let mut push = |x, y, weight: Rational| {
        if !weight.is_positive() {
            return;
        }
        match out.iter_mut().find(|t| t.x == x && t.y == y) {
            Some(t) => t.weight += weight,
            None => out.push(MoleculeTerm::new(x, y, weight)),
        }
    };
    for (i, t) in terms.iter().enumerate() {
        let l = if body.contains(&i) {
            &t.weight - &lambda0 * space.d(t.x, t.y)
        } else {
            t.weight.clone()
        };
        push(t.x, t.y, l);
    }
    for w in cycle.windows(2) {
        let (x, y) = (terms[w[0]].x, terms[w[1]].y);
        if x != y {
            push(x, y, &lambda0 * space.d(x, y));
        }
    }

    let before = combine(space, terms)?;
    let after = combine(space, &out)?;
    if before.masses() != after.masses() {
        return Err(Error::Solver(
            "re-representation changed the measure".into(),
        ));
    }
    Ok(out)
}
