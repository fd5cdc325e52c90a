use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, PointIdx};
use crate::rational::{one, zero, Rational};

/// `weight · m_xy` inside a molecule presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoleculeTerm {
    pub x: PointIdx,
    pub y: PointIdx,
    pub weight: Rational,
}

impl MoleculeTerm {
    pub fn new(x: PointIdx, y: PointIdx, weight: Rational) -> Self {
        MoleculeTerm { x, y, weight }
    }
}

/// Finitely supported measure of total mass zero, stored densely over the
/// points of its space, optionally with the molecule combination it came
/// from.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeElement {
    masses: Vec<Rational>,
    presentation: Option<Vec<MoleculeTerm>>,
}

impl FreeElement {
    pub fn zero(space: &FiniteMetricSpace) -> Self {
        FreeElement {
            masses: vec![zero(); space.len()],
            presentation: None,
        }
    }

    pub fn from_masses(space: &FiniteMetricSpace, masses: Vec<Rational>) -> Result<Self> {
        if masses.len() != space.len() {
            return Err(Error::Format(format!(
                "element has {} masses for a space of {} points",
                masses.len(),
                space.len()
            )));
        }
        let total: Rational = masses.iter().sum();
        if !total.is_zero() {
            return Err(Error::pre(format!(
                "total mass must be zero, got {}",
                crate::rational::to_canonical(&total)
            )));
        }
        Ok(FreeElement {
            masses,
            presentation: None,
        })
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn mass(&self, p: PointIdx) -> &Rational {
        &self.masses[p]
    }

    pub fn presentation(&self) -> Option<&[MoleculeTerm]> {
        self.presentation.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.masses.iter().all(Zero::is_zero)
    }

    /// Points carrying nonzero mass, in index order.
    pub fn support(&self) -> Vec<PointIdx> {
        (0..self.masses.len())
            .filter(|&p| !self.masses[p].is_zero())
            .collect()
    }

    /// Single-term presentation `(x, y)` with unit weight, if that is what
    /// this element is.
    pub fn as_molecule(&self) -> Option<(PointIdx, PointIdx)> {
        match self.presentation.as_deref() {
            Some([t]) if t.weight == one() => Some((t.x, t.y)),
            _ => None,
        }
    }

    pub fn without_presentation(mut self) -> Self {
        self.presentation = None;
        self
    }

    pub fn plus(&self, other: &FreeElement) -> FreeElement {
        self.zip(other, |a, b| a + b)
    }

    pub fn minus(&self, other: &FreeElement) -> FreeElement {
        self.zip(other, |a, b| a - b)
    }

    /// `factor · self`; a positive factor keeps the presentation.
    pub fn scaled(&self, factor: &Rational) -> FreeElement {
        let presentation = if factor.is_positive() {
            self.presentation.as_ref().map(|terms| {
                terms
                    .iter()
                    .map(|t| MoleculeTerm::new(t.x, t.y, &t.weight * factor))
                    .collect()
            })
        } else {
            None
        };
        FreeElement {
            masses: self.masses.iter().map(|m| m * factor).collect(),
            presentation,
        }
    }

    fn zip(
        &self,
        other: &FreeElement,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> FreeElement {
        assert_eq!(
            self.masses.len(),
            other.masses.len(),
            "elements over different spaces"
        );
        FreeElement {
            masses: self
                .masses
                .iter()
                .zip(&other.masses)
                .map(|(a, b)| op(a, b))
                .collect(),
            presentation: None,
        }
    }
}

/// `m_xy = (δ_x − δ_y) / d(x,y)`.
pub fn molecule(space: &FiniteMetricSpace, x: PointIdx, y: PointIdx) -> Result<FreeElement> {
    combine(space, &[MoleculeTerm::new(x, y, one())])
}

/// `Σ weight_i · m_{x_i y_i}`, keeping the terms as the presentation.
/// Weights need not sum to one.
pub fn combine(space: &FiniteMetricSpace, terms: &[MoleculeTerm]) -> Result<FreeElement> {
    let mut masses = vec![zero(); space.len()];
    for t in terms {
        if t.x >= space.len() || t.y >= space.len() {
            return Err(Error::Format(
                "molecule term refers to an unknown point".into(),
            ));
        }
        if t.x == t.y {
            return Err(Error::pre("molecule requires distinct points"));
        }
        if !t.weight.is_positive() {
            return Err(Error::pre("molecule weights must be positive"));
        }
        let share = &t.weight / space.d(t.x, t.y);
        masses[t.x] += &share;
        masses[t.y] -= &share;
    }
    Ok(FreeElement {
        masses,
        presentation: Some(terms.to_vec()),
    })
}

/// Sum of presentation weights.
pub fn total_weight(terms: &[MoleculeTerm]) -> Rational {
    terms.iter().map(|t| &t.weight).sum()
}
