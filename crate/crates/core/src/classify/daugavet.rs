use num_traits::{One, Signed};

use crate::classify::denting::{denting_molecules, distance_to_molecule};
use crate::error::{Error, Result};
use crate::free_space::{norm, FreeElement};
use crate::metric::{FiniteMetricSpace, PointIdx};
use crate::rational::{to_canonical, two, Rational};

pub(crate) fn require_unit(space: &FiniteMetricSpace, el: &FreeElement) -> Result<()> {
    let value = norm(space, el)?.value;
    if !value.is_one() {
        return Err(Error::pre(format!(
            "element must have norm 1, has {}",
            to_canonical(&value)
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DentingDistance {
    pub u: PointIdx,
    pub v: PointIdx,
    pub distance: Rational,
    pub excluded: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DaugavetStatus {
    /// Every denting molecule is at distance 2.
    Daugavet,
    /// Only excluded molecules are closer than 2.
    FailsOnlyByExcluded,
    NotDaugavet,
}

impl DaugavetStatus {
    pub fn name(self) -> &'static str {
        match self {
            DaugavetStatus::Daugavet => "daugavet",
            DaugavetStatus::FailsOnlyByExcluded => "fails-only-by-excluded",
            DaugavetStatus::NotDaugavet => "not-daugavet",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DaugavetVerdict {
    /// All denting molecules, excluded ones included, are at distance 2.
    pub is_daugavet: bool,
    pub status: DaugavetStatus,
    /// Closest molecule among the failures that decide `status`; ties go to
    /// the first pair in id order.
    pub offending: Option<DentingDistance>,
    /// Both orientations, in id order.
    pub denting_set: Vec<(PointIdx, PointIdx)>,
    pub distances: Vec<DentingDistance>,
}

impl DaugavetVerdict {
    /// Smallest distance over the non-excluded denting molecules.
    pub fn min_unexcluded(&self) -> Option<&Rational> {
        self.distances
            .iter()
            .filter(|d| !d.excluded)
            .map(|d| &d.distance)
            .min()
    }
}

fn closest<'a>(rows: impl Iterator<Item = &'a DentingDistance>) -> Option<DentingDistance> {
    let mut best: Option<&DentingDistance> = None;
    for row in rows {
        if best.is_none_or(|b| row.distance < b.distance) {
            best = Some(row);
        }
    }
    best.cloned()
}

/// Daugavet test for a unit-norm element: every denting molecule of the
/// ball must be at distance exactly 2. `exclude` lists ordered pairs whose
/// failures are reported separately (a truncated example can make the
/// tested point itself denting).
pub fn is_daugavet(
    space: &FiniteMetricSpace,
    el: &FreeElement,
    exclude: &[(PointIdx, PointIdx)],
) -> Result<DaugavetVerdict> {
    require_unit(space, el)?;
    let denting = denting_molecules(space);
    let distances = denting
        .iter()
        .map(|&(u, v)| {
            Ok(DentingDistance {
                u,
                v,
                distance: distance_to_molecule(space, el, u, v)?,
                excluded: exclude.contains(&(u, v)),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let failing = |excluded: bool| {
        closest(
            distances
                .iter()
                .filter(move |d| d.excluded == excluded && d.distance < two()),
        )
    };
    let (status, offending) = match (failing(false), failing(true)) {
        (Some(row), _) => (DaugavetStatus::NotDaugavet, Some(row)),
        (None, Some(row)) => (DaugavetStatus::FailsOnlyByExcluded, Some(row)),
        (None, None) => (DaugavetStatus::Daugavet, None),
    };
    Ok(DaugavetVerdict {
        is_daugavet: status == DaugavetStatus::Daugavet,
        status,
        offending,
        denting_set: denting,
        distances,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionRow {
    pub u: PointIdx,
    pub v: PointIdx,
    /// Minimal `r + s` from [`FiniteMetricSpace::min_enclosing_radii`].
    pub r_plus_s: Rational,
    /// `2 − 2(r + s)`
    pub bound: Rational,
    pub distance: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    /// Pairs with a positive bound, in id order.
    pub checked: Vec<ConditionRow>,
    pub violations: Vec<ConditionRow>,
    /// Pairs whose bound is `≤ 0`.
    pub vacuous: usize,
}

/// Checks `‖μ − m_uv‖ ≥ 2 − 2(r+s)` for every ordered pair, with `r + s`
/// the smallest sum for which `[u,v]` fits in `B(u, r·d) ∪ B(v, s·d)`.
pub fn condition_iii_check(space: &FiniteMetricSpace, el: &FreeElement) -> Result<ConditionReport> {
    require_unit(space, el)?;
    let mut report = ConditionReport {
        checked: Vec::new(),
        violations: Vec::new(),
        vacuous: 0,
    };
    for (u, v) in space.ordered_pairs() {
        let r_plus_s = space.min_enclosing_radii(u, v)?.r_plus_s;
        let bound = two() - two() * &r_plus_s;
        if !bound.is_positive() {
            report.vacuous += 1;
            continue;
        }
        let distance = distance_to_molecule(space, el, u, v)?;
        let row = ConditionRow {
            u,
            v,
            r_plus_s,
            bound,
            distance,
        };
        if row.distance < row.bound {
            report.violations.push(row.clone());
        }
        report.checked.push(row);
    }
    Ok(report)
}
