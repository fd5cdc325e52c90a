use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::free_space::FreeElement;
use crate::metric::{FiniteMetricSpace, PointIdx};
use crate::rational::{to_canonical, zero, Rational};

/// Real function on the points of a space with `f(base) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzFunction {
    values: Vec<Rational>,
}

impl LipschitzFunction {
    pub fn zero(space: &FiniteMetricSpace) -> Self {
        LipschitzFunction {
            values: vec![zero(); space.len()],
        }
    }

    /// Rejects value vectors that do not vanish at the base point.
    pub fn new(space: &FiniteMetricSpace, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Format(format!(
                "function has {} values for a space of {} points",
                values.len(),
                space.len()
            )));
        }
        if !values[space.base()].is_zero() {
            return Err(Error::pre(format!(
                "function must vanish at the base point {}",
                space.id(space.base())
            )));
        }
        Ok(LipschitzFunction { values })
    }

    /// Subtracts the value at the base point.
    pub fn shifted(space: &FiniteMetricSpace, mut values: Vec<Rational>) -> Self {
        assert_eq!(values.len(), space.len());
        let offset = values[space.base()].clone();
        for v in &mut values {
            *v -= &offset;
        }
        LipschitzFunction { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, p: PointIdx) -> &Rational {
        &self.values[p]
    }

    /// `f(m_uv) = (f(u) − f(v)) / d(u,v)`.
    pub fn on_molecule(&self, space: &FiniteMetricSpace, u: PointIdx, v: PointIdx) -> Rational {
        (&self.values[u] - &self.values[v]) / space.d(u, v)
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        LipschitzFunction {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

/// `Σ_p μ(p) f(p)`.
pub fn pairing(f: &LipschitzFunction, el: &FreeElement) -> Rational {
    f.values()
        .iter()
        .zip(el.masses())
        .filter(|(_, m)| !m.is_zero())
        .map(|(v, m)| v * m)
        .sum()
}

/// Exact Lipschitz constant, maximized over all pairs.
pub fn lipschitz_constant(space: &FiniteMetricSpace, f: &LipschitzFunction) -> Rational {
    let mut best = zero();
    for p in 0..space.len() {
        for q in p + 1..space.len() {
            let slope = (f.value(p) - f.value(q)).abs() / space.d(p, q);
            if slope > best {
                best = slope;
            }
        }
    }
    best
}

/// Which classical envelope [`mcshane_extend`] uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Envelope {
    /// `min_q (g(q) + L·d(p,q))`: the largest `L`-Lipschitz extension.
    #[default]
    Upper,
    /// `max_q (g(q) − L·d(p,q))`: the smallest one.
    Lower,
}

/// Envelope values before the base-point shift; they agree with `partial`
/// on its domain.
pub fn envelope_values(
    space: &FiniteMetricSpace,
    partial: &[(PointIdx, Rational)],
    lip: &Rational,
    envelope: Envelope,
) -> Result<Vec<Rational>> {
    if partial.is_empty() {
        return Err(Error::pre("extension needs a nonempty domain"));
    }
    if !lip.is_positive() {
        return Err(Error::pre("Lipschitz bound must be positive"));
    }
    for (i, (p, gp)) in partial.iter().enumerate() {
        for (q, gq) in &partial[i + 1..] {
            if p == q {
                if gp != gq {
                    return Err(Error::pre(format!(
                        "conflicting values at {}",
                        space.id(*p)
                    )));
                }
                continue;
            }
            if (gp - gq).abs() > lip * space.d(*p, *q) {
                return Err(Error::pre(format!(
                    "partial assignment is not {}-Lipschitz on ({}, {})",
                    to_canonical(lip),
                    space.id(*p),
                    space.id(*q)
                )));
            }
        }
    }
    Ok((0..space.len())
        .map(|p| {
            let candidates = partial.iter().map(|(q, g)| match envelope {
                Envelope::Upper => g + lip * space.d(p, *q),
                Envelope::Lower => g - lip * space.d(p, *q),
            });
            match envelope {
                Envelope::Upper => candidates.min(),
                Envelope::Lower => candidates.max(),
            }
            .expect("nonempty domain")
        })
        .collect())
}

/// McShane extension of an `L`-Lipschitz partial assignment, shifted to
/// vanish at the base point.
pub fn mcshane_extend(
    space: &FiniteMetricSpace,
    partial: &[(PointIdx, Rational)],
    lip: &Rational,
) -> Result<LipschitzFunction> {
    mcshane_extend_with(space, partial, lip, Envelope::Upper)
}

pub fn mcshane_extend_with(
    space: &FiniteMetricSpace,
    partial: &[(PointIdx, Rational)],
    lip: &Rational,
    envelope: Envelope,
) -> Result<LipschitzFunction> {
    let values = envelope_values(space, partial, lip, envelope)?;
    Ok(LipschitzFunction::shifted(space, values))
}
