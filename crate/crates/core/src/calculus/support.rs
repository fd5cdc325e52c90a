use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::calculus::mu::mu_member;
use crate::error::{Error, Result};
use crate::free_space::{
    lipschitz_constant, mcshane_extend, norm, pairing, FreeElement, LipschitzFunction, MoleculeTerm,
};
use crate::metric::{FiniteMetricSpace, PointIdx};
use crate::rational::{int, one, to_canonical, two, zero, Rational};

/// Presentation of a unit-norm element whose weights sum to 1, together
/// with a norming potential.
fn unit_presentation<'a>(
    space: &FiniteMetricSpace,
    el: &'a FreeElement,
) -> Result<(&'a [MoleculeTerm], LipschitzFunction)> {
    let terms = el
        .presentation()
        .filter(|t| !t.is_empty())
        .ok_or_else(|| Error::pre("element needs a nonempty molecule presentation"))?;
    let total: Rational = terms.iter().map(|t| &t.weight).sum();
    if !total.is_one() {
        return Err(Error::pre(format!(
            "presentation weights must sum to 1, sum to {}",
            to_canonical(&total)
        )));
    }
    let cert = norm(space, el)?;
    if !cert.value.is_one() {
        return Err(Error::pre(format!(
            "element must have norm 1, has {}",
            to_canonical(&cert.value)
        )));
    }
    Ok((terms, cert.potential))
}

fn gap(space: &FiniteMetricSpace, g: &LipschitzFunction, p: PointIdx, q: PointIdx) -> Rational {
    space.d(p, q) - (g.value(p) - g.value(q))
}

/// Cross pairs `(i, j)` with `x_i != y_j`, in index order.
fn cross_pairs(terms: &[MoleculeTerm]) -> Vec<(usize, usize)> {
    (0..terms.len())
        .flat_map(|i| (0..terms.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| terms[i].x != terms[j].y)
        .collect()
}

/// Norming function that is tight on a cross molecule `m_{x_i y_j}` exactly
/// when that molecule belongs to `M(μ)`.
///
/// Starts from the transport potential `g`. For every cross pair outside
/// `M(μ)` on which `g` is tight, the terms reachable from `j` along tight
/// cross edges are lifted by half the smallest positive gap of `g` on the
/// presentation points, which breaks tightness on `(i, j)` and keeps every
/// diagonal term tight; the lifted function is McShane-extended. The result
/// averages these over all excluded pairs.
pub fn support_function(space: &FiniteMetricSpace, el: &FreeElement) -> Result<LipschitzFunction> {
    let (terms, g) = unit_presentation(space, el)?;
    let mut excluded = Vec::new();
    for (i, j) in cross_pairs(terms) {
        let (x, y) = (terms[i].x, terms[j].y);
        if mu_member(space, el, &g, x, y)?.is_none() {
            excluded.push((i, j));
        }
    }
    if excluded.is_empty() {
        return Ok(g);
    }

    let m0: BTreeSet<PointIdx> = terms.iter().flat_map(|t| [t.x, t.y]).collect();
    let delta = m0
        .iter()
        .flat_map(|&p| m0.iter().map(move |&q| (p, q)))
        .filter(|&(p, q)| p != q)
        .map(|(p, q)| gap(space, &g, p, q))
        .filter(|e| e.is_positive())
        .min()
        .map(|e| e / two());

    let n = terms.len();
    let tight = |a: usize, b: usize| gap(space, &g, terms[a].x, terms[b].y).is_zero();
    let mut sum = vec![zero(); space.len()];
    for &(k1, k2) in &excluded {
        let h = if !tight(k1, k2) {
            g.clone()
        } else {
            let delta = delta
                .clone()
                .ok_or_else(|| Error::Solver("no positive gap to perturb by".into()))?;
            let mut in_b = vec![false; n];
            let mut stack = vec![k2];
            in_b[k2] = true;
            while let Some(a) = stack.pop() {
                for b in 0..n {
                    if !in_b[b] && tight(a, b) {
                        in_b[b] = true;
                        stack.push(b);
                    }
                }
            }
            if in_b[k1] {
                return Err(Error::Solver(format!(
                    "tight chain closes through excluded pair ({}, {})",
                    space.id(terms[k1].x),
                    space.id(terms[k2].y)
                )));
            }
            let c: BTreeSet<PointIdx> = (0..n)
                .filter(|&i| in_b[i])
                .flat_map(|i| [terms[i].x, terms[i].y])
                .collect();
            let partial: Vec<_> = m0
                .iter()
                .map(|&p| {
                    let v = g.value(p).clone();
                    (p, if c.contains(&p) { v + &delta } else { v })
                })
                .collect();
            mcshane_extend(space, &partial, &one())?
        };
        for (s, v) in sum.iter_mut().zip(h.values()) {
            *s += v;
        }
    }
    let count = int(excluded.len() as i64);
    let f = LipschitzFunction::shifted(space, sum.into_iter().map(|v| v / &count).collect());

    if lipschitz_constant(space, &f) > one() || !pairing(&f, el).is_one() {
        return Err(Error::Solver(
            "support function lost the norming property".into(),
        ));
    }
    for &(i, j) in &excluded {
        if f.on_molecule(space, terms[i].x, terms[j].y).is_one() {
            return Err(Error::Solver(format!(
                "support function still tight on ({}, {})",
                space.id(terms[i].x),
                space.id(terms[j].y)
            )));
        }
    }
    Ok(f)
}

/// `f_xy(p) = (d(x,y)/2)·(d(y,p) − d(x,p)) / (d(x,p) + d(y,p))`.
pub fn jrz_kernel(
    space: &FiniteMetricSpace,
    x: PointIdx,
    y: PointIdx,
    p: PointIdx,
) -> Result<Rational> {
    if x == y {
        return Err(Error::pre("kernel needs distinct points"));
    }
    let (dx, dy) = (space.d(x, p), space.d(y, p));
    Ok(space.d(x, y) / two() * (dy - dx) / (dx + dy))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FMu {
    pub f: LipschitzFunction,
    /// Supremum of admissible `δ`: every non-tight cross pair has
    /// `g(x_i) − g(y_j) ≤ (1 − delta)·d(x_i, y_j)`, so slices with
    /// `α < delta` satisfy the localisation property. Capped at 1.
    pub delta: Rational,
    /// The support function the construction started from.
    pub g: LipschitzFunction,
}

/// Norming function whose slices only contain molecules close to some
/// `[x_i, y_j]` with `m_{x_i y_j} ∈ M(μ)`.
///
/// `h_i(p) = max_j (g(x_i) − g(y_j))·d(x_i,p)/(d(x_i,p) + d(y_j,p))` over
/// `j` with `x_i != y_j`, and `f(p) = max_i (g(x_i) − h_i(p))`, shifted.
pub fn f_mu(space: &FiniteMetricSpace, el: &FreeElement) -> Result<FMu> {
    let g = support_function(space, el)?;
    let terms = el.presentation().expect("checked by support_function");

    let h = |i: usize, p: PointIdx| -> Rational {
        let xi = terms[i].x;
        terms
            .iter()
            .filter(|t| t.y != xi)
            .map(|t| {
                let num = (g.value(xi) - g.value(t.y)) * space.d(xi, p);
                num / (space.d(xi, p) + space.d(t.y, p))
            })
            .max()
            .expect("the diagonal term is always present")
    };
    let values = (0..space.len())
        .map(|p| {
            (0..terms.len())
                .map(|i| g.value(terms[i].x) - h(i, p))
                .max()
                .expect("nonempty presentation")
        })
        .collect();
    let f = LipschitzFunction::shifted(space, values);

    let delta = cross_pairs(terms)
        .into_iter()
        .map(|(i, j)| {
            let (x, y) = (terms[i].x, terms[j].y);
            one() - g.on_molecule(space, x, y)
        })
        .filter(|e| e.is_positive())
        .min()
        .map_or_else(one, |e| e.min(one()));

    if lipschitz_constant(space, &f) > one() || !pairing(&f, el).is_one() {
        return Err(Error::Solver("f_mu lost the norming property".into()));
    }
    Ok(FMu { f, delta, g })
}
