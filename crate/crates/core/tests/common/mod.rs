//! Independent oracles and instance generators shared by the integration
//! tests and the acceptance harness. Nothing here calls the flow solver.
#![allow(dead_code)]

use lipfree::free_space::{combine, FreeElement, LipschitzFunction, MoleculeTerm};
use lipfree::metric::{FiniteMetricSpace, PointIdx};
use lipfree::rational::{abs, pow, rat, zero, Rational};
use lipfree::spaces::{gen_random, RandomScheme};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `max Σ μ(p) f(p)` over `{f : f(base) = 0, |f(p) − f(q)| ≤ d(p,q)}` by
/// enumerating the vertices of the polytope. Each vertex is pinned by a
/// spanning tree of tight edges with a sign per edge.
pub fn dual_lp_norm(space: &FiniteMetricSpace, masses: &[Rational]) -> Rational {
    let n = space.len();
    assert!(n <= 6, "vertex enumeration is exponential");
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut best: Option<Rational> = None;
    for subset in 0u32..(1 << edges.len()) {
        if subset.count_ones() as usize != n - 1 {
            continue;
        }
        let tree: Vec<(usize, usize)> = (0..edges.len())
            .filter(|i| subset >> i & 1 == 1)
            .map(|i| edges[i])
            .collect();
        for signs in 0u32..(1 << (n - 1)) {
            let Some(f) = tree_values(space, &tree, signs) else {
                break;
            };
            let feasible = (0..n).all(|p| (0..n).all(|q| &f[p] - &f[q] <= *space.d(p, q)));
            if feasible {
                let value: Rational = masses.iter().zip(&f).map(|(m, v)| m * v).sum();
                if best.as_ref().is_none_or(|b| value > *b) {
                    best = Some(value);
                }
            }
        }
    }
    best.expect("the polytope has a vertex")
}

/// Values fixed by `f(a) − f(b) = ±d(a,b)` along the tree edges, or `None`
/// when the edges do not span.
fn tree_values(
    space: &FiniteMetricSpace,
    tree: &[(usize, usize)],
    signs: u32,
) -> Option<Vec<Rational>> {
    let n = space.len();
    let mut f: Vec<Option<Rational>> = vec![None; n];
    f[space.base()] = Some(zero());
    let mut changed = true;
    while changed {
        changed = false;
        for (i, &(a, b)) in tree.iter().enumerate() {
            let step = if signs >> i & 1 == 1 {
                space.d(a, b).clone()
            } else {
                -space.d(a, b).clone()
            };
            match (&f[a], &f[b]) {
                (Some(fa), None) => {
                    f[b] = Some(fa - &step);
                    changed = true;
                }
                (None, Some(fb)) => {
                    f[a] = Some(fb + &step);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    f.into_iter().collect()
}

pub fn brute_segment(space: &FiniteMetricSpace, u: PointIdx, v: PointIdx) -> Vec<PointIdx> {
    (0..space.len())
        .filter(|&p| space.d(u, p) + space.d(p, v) == *space.d(u, v))
        .collect()
}

/// Unordered pairs `(a, b)`, `a < b` by index, with a two-point segment.
pub fn brute_denting(space: &FiniteMetricSpace) -> Vec<(PointIdx, PointIdx)> {
    let mut out = Vec::new();
    for a in 0..space.len() {
        for b in a + 1..space.len() {
            if brute_segment(space, a, b).len() == 2 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Minimal `max_{U} a + max_{V} b` over all `2^k` splits of the items.
pub fn brute_partition(items: &[(Rational, Rational)]) -> Rational {
    let k = items.len();
    (0u32..(1 << k))
        .map(|mask| {
            let mut r = zero();
            let mut s = zero();
            for (i, (a, b)) in items.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    r = r.max(a.clone());
                } else {
                    s = s.max(b.clone());
                }
            }
            r + s
        })
        .min()
        .expect("at least one split")
}

/// Masses of `Σ w·m_xy`, expanded by hand.
pub fn term_masses(
    space: &FiniteMetricSpace,
    terms: &[(PointIdx, PointIdx, Rational)],
) -> Vec<Rational> {
    let mut masses = vec![zero(); space.len()];
    for (x, y, w) in terms {
        let m = w / space.d(*x, *y);
        masses[*x] += &m;
        masses[*y] -= &m;
    }
    masses
}

pub fn random_space(seed: u64, min: usize, max: usize) -> FiniteMetricSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.random_range(min..=max);
    let scheme = if rng.random_bool(0.75) {
        RandomScheme::ShortestPath
    } else {
        RandomScheme::EuclideanSnap
    };
    gen_random(n, seed, scheme).expect("generator")
}

pub fn random_masses(space: &FiniteMetricSpace, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let n = space.len();
    let mut masses: Vec<Rational> = (0..n)
        .map(|_| rat(rng.random_range(-4..=4), rng.random_range(1..=3)))
        .collect();
    let total: Rational = masses.iter().sum();
    let last = rng.random_range(0..n);
    masses[last] -= total;
    masses
}

/// `g(p) = min_s (c_s + d(p,s))`, a 1-Lipschitz function by construction.
pub fn random_cone_function(space: &FiniteMetricSpace, rng: &mut ChaCha8Rng) -> LipschitzFunction {
    let k = rng.random_range(1..=3);
    let sources: Vec<(PointIdx, Rational)> = (0..k)
        .map(|_| {
            (
                rng.random_range(0..space.len()),
                rat(rng.random_range(0..=8), 4),
            )
        })
        .collect();
    let values = (0..space.len())
        .map(|p| {
            sources
                .iter()
                .map(|(s, c)| c + space.d(p, *s))
                .min()
                .expect("nonempty")
        })
        .collect();
    LipschitzFunction::shifted(space, values)
}

/// Unit-norm combination of at most `max_terms` molecules, all tight for a
/// random 1-Lipschitz `g`; `g(μ) = 1 = Σλ` pins the norm at 1.
pub fn random_unit_combination(
    space: &FiniteMetricSpace,
    rng: &mut ChaCha8Rng,
    max_terms: usize,
) -> Option<(FreeElement, LipschitzFunction)> {
    let g = random_cone_function(space, rng);
    let tight: Vec<(PointIdx, PointIdx)> = space
        .ordered_pairs()
        .into_iter()
        .filter(|&(p, q)| g.value(p) - g.value(q) == *space.d(p, q))
        .collect();
    if tight.is_empty() {
        return None;
    }
    let count = rng.random_range(1..=max_terms.min(tight.len()));
    let mut chosen: Vec<(PointIdx, PointIdx)> = Vec::new();
    while chosen.len() < count {
        let pair = tight[rng.random_range(0..tight.len())];
        if !chosen.contains(&pair) {
            chosen.push(pair);
        }
    }
    let raw: Vec<i64> = chosen.iter().map(|_| rng.random_range(1..=4)).collect();
    let total: i64 = raw.iter().sum();
    let terms: Vec<MoleculeTerm> = chosen
        .iter()
        .zip(&raw)
        .map(|(&(x, y), &w)| MoleculeTerm::new(x, y, rat(w, total)))
        .collect();
    Some((combine(space, &terms).expect("valid terms"), g))
}

pub fn dyadic(k: u32) -> Rational {
    pow(&rat(1, 2), k)
}

/// Bridge-space (`example32`) denting pairs read off the labels: horizontal neighbours on
/// each level, consecutive points of the columns `a = 0` and `a = 1`
/// (including the bottom corners), and `(x, y)`. Sorted, `a < b` by index.
pub fn example32_predicted_denting(space: &FiniteMetricSpace) -> Vec<(PointIdx, PointIdx)> {
    let label = |p: PointIdx| space.label(p).expect("labelled point").clone();
    let mut out = Vec::new();
    for p in 0..space.len() {
        for q in p + 1..space.len() {
            let ([a1, b1], [a2, b2]) = (label(p), label(q));
            let horizontal = b1 == b2 && b1.is_positive() && abs(&(&a1 - &a2)) == b1;
            let column = a1 == a2 && (a1.is_zero() || a1.is_one()) && {
                let (lo, hi) = (b1.clone().min(b2.clone()), b1.clone().max(b2.clone()));
                (0..space.len()).all(|r| {
                    let [a3, b3] = label(r);
                    a3 != a1 || !(lo < b3 && b3 < hi)
                })
            };
            let corners = b1.is_zero() && b2.is_zero();
            if horizontal || column || corners {
                out.push((p, q));
            }
        }
    }
    out
}

/// Unordered pairs normalized to `a < b` by index and sorted.
pub fn by_index(pairs: &[(PointIdx, PointIdx)]) -> Vec<(PointIdx, PointIdx)> {
    let mut out: Vec<_> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    out.sort();
    out
}
