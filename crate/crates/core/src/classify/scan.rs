use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{f_mu, support_function};
use crate::classify::daugavet::require_unit;
use crate::classify::slice::check_alpha;
use crate::classify::Slice;
use crate::error::{Error, Result};
use crate::free_space::{mcshane_extend, norm, FreeElement, LipschitzFunction};
use crate::metric::{FiniteMetricSpace, PointIdx};
use crate::rational::{rat, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    /// Position of the slice in the input list.
    pub slice: usize,
    pub alpha: Rational,
    pub min_length: Rational,
    /// Shortest in-slice molecule, first in id order among ties.
    pub witness: (PointIdx, PointIdx),
}

/// Shortest molecule in each slice. Every slice must contain `el`.
pub fn delta_scan(
    space: &FiniteMetricSpace,
    el: &FreeElement,
    slices: &[Slice],
) -> Result<Vec<ScanRow>> {
    require_unit(space, el)?;
    slices
        .iter()
        .enumerate()
        .map(|(i, slice)| {
            if !slice.contains(el) {
                return Err(Error::pre(format!(
                    "slice {i} does not contain the element"
                )));
            }
            let mut best: Option<(PointIdx, PointIdx)> = None;
            for (u, v) in slice.molecules(space) {
                if best.is_none_or(|(bu, bv)| space.d(u, v) < space.d(bu, bv)) {
                    best = Some((u, v));
                }
            }
            let witness =
                best.ok_or_else(|| Error::Solver(format!("slice {i} has no molecule")))?;
            Ok(ScanRow {
                slice: i,
                alpha: slice.alpha().clone(),
                min_length: space.d(witness.0, witness.1).clone(),
                witness,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceConfig {
    pub alphas: Vec<Rational>,
    pub seed: u64,
    /// Number of random two-point extensions.
    pub random: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedSlice {
    /// `potential`, `f_mu`, `support`, or `random-<i>`.
    pub name: String,
    pub slice: Slice,
}

/// Deterministic slice family around `el`: the transport potential, `f_μ`
/// and the support function when a normalized presentation exists, and
/// seeded random McShane extensions of two-point assignments. Each
/// functional is paired with every configured `α`; slices missing `el` are
/// dropped.
pub fn make_slices(
    space: &FiniteMetricSpace,
    el: &FreeElement,
    config: &SliceConfig,
) -> Result<Vec<NamedSlice>> {
    require_unit(space, el)?;
    if config.alphas.is_empty() {
        return Err(Error::pre("alpha list is empty"));
    }
    for alpha in &config.alphas {
        check_alpha(alpha)?;
    }
    let mut functions: Vec<(String, LipschitzFunction)> =
        vec![("potential".into(), norm(space, el)?.potential)];
    let normalized = el.presentation().is_some_and(|t| {
        !t.is_empty() && t.iter().map(|t| &t.weight).sum::<Rational>() == rat(1, 1)
    });
    if normalized {
        functions.push(("f_mu".into(), f_mu(space, el)?.f));
        functions.push(("support".into(), support_function(space, el)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in 0..config.random {
        let p = rng.random_range(0..space.len());
        let mut q = rng.random_range(0..space.len() - 1);
        if q >= p {
            q += 1;
        }
        let t = rat(rng.random_range(1..=4), 4);
        let partial = [(p, t * space.d(p, q)), (q, rat(0, 1))];
        let f = mcshane_extend(space, &partial, &rat(1, 1))?;
        functions.push((format!("random-{i}"), f));
    }

    let mut out = Vec::new();
    for (name, f) in functions {
        for alpha in &config.alphas {
            let slice = Slice::normalized(space, f.clone(), alpha.clone())?;
            if slice.contains(el) {
                out.push(NamedSlice {
                    name: name.clone(),
                    slice,
                });
            }
        }
    }
    Ok(out)
}
