//! Generators: the two planar example families, lattice grids, and seeded
//! random metric spaces.
//!
//! `example32(N)` is the truncation `S_0 ∪ … ∪ S_N` of the countable space
//! with levels `S_n = {(k/2^n, 1/2^n)}` under the "bridge" metric
//!
//! ```text
//! d((a1,b1),(a2,b2)) = |a1 − a2|                              if b1 = b2
//!                    = min(a1 + a2, 2 − a1 − a2) + |b1 − b2|  otherwise
//! ```
//!
//! `example46(k)` is the dyadic discretization with step `2^-k` of two unit
//! vertical segments `{0,1} × [0,1]` under the ℓ∞ metric.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::free_space::{combine, FreeElement, LipschitzFunction, MoleculeTerm};
use crate::metric::{FiniteMetricSpace, Point, PointIdx};
use crate::rational::{abs, int, one, pow, rat, to_canonical, zero, Rational};

pub const MAX_RANDOM_POINTS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomScheme {
    /// Shortest-path closure of random rational edge weights.
    ShortestPath,
    /// Random points on a `1/4` lattice under the ℓ1 metric.
    EuclideanSnap,
}

impl RandomScheme {
    pub fn name(self) -> &'static str {
        match self {
            RandomScheme::ShortestPath => "shortest-path",
            RandomScheme::EuclideanSnap => "euclidean-snap",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "shortest-path" => Ok(RandomScheme::ShortestPath),
            "euclidean-snap" => Ok(RandomScheme::EuclideanSnap),
            other => Err(Error::Format(format!("unknown random scheme {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Example32 {
        depth: u32,
    },
    Example46 {
        step_exponent: u32,
    },
    Grid {
        rows: usize,
        cols: usize,
    },
    Random {
        n: usize,
        seed: u64,
        scheme: RandomScheme,
    },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<FiniteMetricSpace> {
        match *self {
            GeneratorSpec::Example32 { depth } => gen_example32(depth),
            GeneratorSpec::Example46 { step_exponent } => gen_example46(step_exponent),
            GeneratorSpec::Grid { rows, cols } => gen_grid(rows, cols),
            GeneratorSpec::Random { n, seed, scheme } => gen_random(n, seed, scheme),
        }
    }

    /// Short identifier used in reports and CSV rows.
    pub fn space_id(&self) -> String {
        match self {
            GeneratorSpec::Example32 { depth } => format!("example32-d{depth}"),
            GeneratorSpec::Example46 { step_exponent } => format!("example46-k{step_exponent}"),
            GeneratorSpec::Grid { rows, cols } => format!("grid-{rows}x{cols}"),
            GeneratorSpec::Random { n, seed, scheme } => {
                format!("random-{}-n{n}-s{seed}", scheme.name())
            }
        }
    }
}

fn width(max: u64) -> usize {
    max.to_string().len()
}

pub fn example32_distance(p: &[Rational; 2], q: &[Rational; 2]) -> Rational {
    let ([a1, b1], [a2, b2]) = (p, q);
    if b1 == b2 {
        abs(&(a1 - a2))
    } else {
        let left = a1 + a2;
        let right = int(2) - &left;
        std::cmp::min(left, right) + abs(&(b1 - b2))
    }
}

/// Truncation of the bridge space at depth `N`: `2^(N+1) + N` points, base
/// `x = (0,0)`, with `y = (1,0)`.
pub fn gen_example32(depth: u32) -> Result<FiniteMetricSpace> {
    if depth == 0 {
        return Err(Error::pre("example32 needs depth >= 1"));
    }
    if depth > 16 {
        return Err(Error::pre("example32 depth above 16 is not supported"));
    }
    let w = width(1u64 << depth);
    let mut points = vec![
        Point::labelled("x", zero(), zero()),
        Point::labelled("y", one(), zero()),
    ];
    for n in 1..=depth {
        let scale = 1i64 << n;
        for k in 0..=scale {
            points.push(Point::labelled(
                format!("s{n}_{k:0w$}"),
                rat(k, scale),
                rat(1, scale),
            ));
        }
    }
    let dist = pairwise(&points, example32_distance);
    Ok(FiniteMetricSpace::new(points, dist, "x")?
        .with_meta(json!({"kind": "example32", "params": {"depth": depth}})))
}

pub fn linf_distance(p: &[Rational; 2], q: &[Rational; 2]) -> Rational {
    std::cmp::max(abs(&(&p[0] - &q[0])), abs(&(&p[1] - &q[1])))
}

/// Two columns `a ∈ {0,1}`, heights `b ∈ {0, h, …, 1}` with `h = 2^-k`, ℓ∞
/// metric, base `x1`. The corners are named `x1=(0,0)`, `y1=(1,0)`,
/// `x2=(1,1)`, `y2=(0,1)`.
pub fn gen_example46(step_exponent: u32) -> Result<FiniteMetricSpace> {
    if step_exponent == 0 {
        return Err(Error::pre("example46 needs step exponent >= 1"));
    }
    if step_exponent > 16 {
        return Err(Error::pre(
            "example46 step exponent above 16 is not supported",
        ));
    }
    let steps = 1i64 << step_exponent;
    let w = width(steps as u64);
    let mut points = Vec::new();
    for a in 0..=1i64 {
        for j in 0..=steps {
            let id = match (a, j == 0, j == steps) {
                (0, true, _) => "x1".to_string(),
                (1, true, _) => "y1".to_string(),
                (1, _, true) => "x2".to_string(),
                (0, _, true) => "y2".to_string(),
                _ => format!("c{a}_{j:0w$}"),
            };
            points.push(Point::labelled(id, int(a), rat(j, steps)));
        }
    }
    let dist = pairwise(&points, linf_distance);
    Ok(FiniteMetricSpace::new(points, dist, "x1")?
        .with_meta(json!({"kind": "example46", "params": {"step_exponent": step_exponent}})))
}

/// Integer lattice `rows × cols` under ℓ1, base at the origin.
pub fn gen_grid(rows: usize, cols: usize) -> Result<FiniteMetricSpace> {
    if rows == 0 || cols == 0 || rows * cols < 2 {
        return Err(Error::pre("grid needs at least two points"));
    }
    let wr = width(rows as u64);
    let wc = width(cols as u64);
    let mut points = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            points.push(Point::labelled(
                format!("g{r:0wr$}_{c:0wc$}"),
                int(r as i64),
                int(c as i64),
            ));
        }
    }
    let dist = pairwise(&points, l1_distance);
    let base = points[0].id.clone();
    Ok(FiniteMetricSpace::new(points, dist, &base)?
        .with_meta(json!({"kind": "grid", "params": {"rows": rows, "cols": cols}})))
}

fn l1_distance(p: &[Rational; 2], q: &[Rational; 2]) -> Rational {
    abs(&(&p[0] - &q[0])) + abs(&(&p[1] - &q[1]))
}

fn pairwise(
    points: &[Point],
    metric: impl Fn(&[Rational; 2], &[Rational; 2]) -> Rational,
) -> Vec<Vec<Rational>> {
    points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|q| metric(p.label.as_ref().unwrap(), q.label.as_ref().unwrap()))
                .collect()
        })
        .collect()
}

/// Seeded random metric space on `n` points `p00, p01, …`.
pub fn gen_random(n: usize, seed: u64, scheme: RandomScheme) -> Result<FiniteMetricSpace> {
    if n < 2 {
        return Err(Error::pre("random space needs at least two points"));
    }
    if n > MAX_RANDOM_POINTS {
        return Err(Error::pre(format!(
            "random space capped at {MAX_RANDOM_POINTS} points"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = width(n as u64 - 1).max(2);
    let ids: Vec<String> = (0..n).map(|i| format!("p{i:0w$}")).collect();
    let (points, dist) = match scheme {
        RandomScheme::ShortestPath => {
            let mut dist = vec![vec![None::<Rational>; n]; n];
            let edge = |rng: &mut ChaCha8Rng| rat(rng.random_range(1..=4), rng.random_range(1..=2));
            for i in 0..n {
                dist[i][i] = Some(zero());
                for j in i + 1..n {
                    // a spanning path keeps the graph connected
                    if j == i + 1 || rng.random_bool(0.5) {
                        let wgt = edge(&mut rng);
                        dist[i][j] = Some(wgt.clone());
                        dist[j][i] = Some(wgt);
                    }
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if let (Some(a), Some(b)) = (&dist[i][k], &dist[k][j]) {
                            let via = a + b;
                            if dist[i][j].as_ref().is_none_or(|cur| via < *cur) {
                                dist[i][j] = Some(via);
                            }
                        }
                    }
                }
            }
            let dist = dist
                .into_iter()
                .map(|row| row.into_iter().map(|d| d.expect("connected")).collect())
                .collect();
            (ids.into_iter().map(Point::new).collect::<Vec<_>>(), dist)
        }
        RandomScheme::EuclideanSnap => {
            let mut coords: Vec<(i64, i64)> = Vec::with_capacity(n);
            let side = std::cmp::max(8, (n as f64).sqrt().ceil() as i64 * 2);
            while coords.len() < n {
                let c = (rng.random_range(0..=side), rng.random_range(0..=side));
                if !coords.contains(&c) {
                    coords.push(c);
                }
            }
            let points: Vec<Point> = ids
                .into_iter()
                .zip(&coords)
                .map(|(id, &(a, b))| Point::labelled(id, rat(a, 4), rat(b, 4)))
                .collect();
            let dist = pairwise(&points, l1_distance);
            (points, dist)
        }
    };
    let base = points[0].id.clone();
    Ok(
        FiniteMetricSpace::new(points, dist, &base)?.with_meta(json!({
            "kind": "random",
            "params": {"n": n, "scheme": scheme.name()},
            "seed": seed,
        })),
    )
}

/// Looks up a point by its coordinate label.
pub fn at(space: &FiniteMetricSpace, a: Rational, b: Rational) -> Result<PointIdx> {
    space.find_label(&a, &b).ok_or_else(|| {
        Error::Format(format!(
            "no point labelled ({}, {})",
            to_canonical(&a),
            to_canonical(&b)
        ))
    })
}

/// `(1/2, 2^-(n+2))`, the midpoint witness that keeps `[x,y]_{2^-n}` away
/// from both endpoint balls.
pub fn example32_midpoint_witness(space: &FiniteMetricSpace, n: u32) -> Result<PointIdx> {
    at(space, rat(1, 2), pow(&rat(1, 2), n + 2))
}

/// Denting pairs of an `example32` truncation read off the labels:
/// neighbours on a level (`|a1 − a2| = b`), consecutive points of the
/// columns `a = 0` and `a = 1`, and `(x, y)`. Oriented and sorted like
/// `denting_set`.
pub fn example32_denting_prediction(
    space: &FiniteMetricSpace,
) -> Result<Vec<(PointIdx, PointIdx)>> {
    let labels = (0..space.len())
        .map(|p| {
            space
                .label(p)
                .ok_or_else(|| Error::Format(format!("point {} has no label", space.id(p))))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for p in 0..space.len() {
        for q in p + 1..space.len() {
            let ([a1, b1], [a2, b2]) = (labels[p], labels[q]);
            let level = b1 == b2 && (*b1 == zero() || abs(&(a1 - a2)) == *b1);
            if level {
                out.push((p, q));
            }
        }
    }
    for a in [zero(), one()] {
        let mut column: Vec<PointIdx> = (0..space.len()).filter(|&p| labels[p][0] == a).collect();
        column.sort_by(|&p, &q| labels[p][1].cmp(&labels[q][1]));
        out.extend(column.windows(2).map(|w| (w[0], w[1])));
    }
    for pair in &mut out {
        if space.rank(pair.0) > space.rank(pair.1) {
            *pair = (pair.1, pair.0);
        }
    }
    space.sort_pairs(&mut out);
    out.dedup();
    Ok(out)
}

/// Corner points `(x1, y1, x2, y2)` of an `example46` space.
pub fn example46_corners(space: &FiniteMetricSpace) -> Result<[PointIdx; 4]> {
    Ok([
        space.index_of("x1")?,
        space.index_of("y1")?,
        space.index_of("x2")?,
        space.index_of("y2")?,
    ])
}

/// `½ m_{x1y1} + ½ m_{x2y2}`.
pub fn example46_balanced(space: &FiniteMetricSpace) -> Result<FreeElement> {
    let [x1, y1, x2, y2] = example46_corners(space)?;
    combine(
        space,
        &[
            MoleculeTerm::new(x1, y1, rat(1, 2)),
            MoleculeTerm::new(x2, y2, rat(1, 2)),
        ],
    )
}

/// `f(0,b) = c0 + s0·b`, `f(1,b) = c1 + s1·b`, shifted to vanish at `x1`.
pub fn column_affine_function(
    space: &FiniteMetricSpace,
    c0: &Rational,
    s0: &Rational,
    c1: &Rational,
    s1: &Rational,
) -> Result<LipschitzFunction> {
    let values = (0..space.len())
        .map(|p| {
            let [a, b] = space
                .label(p)
                .ok_or_else(|| Error::Format(format!("point {} has no label", space.id(p))))?;
            if a == &zero() {
                Ok(c0 + s0 * b)
            } else if a == &one() {
                Ok(c1 + s1 * b)
            } else {
                Err(Error::Format(format!(
                    "point {} is not on a column",
                    space.id(p)
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LipschitzFunction::shifted(space, values))
}

/// `f(0,b) = 1 − b`, `f(1,b) = b`: norms `½m_{x1y1} + ½m_{x2y2}` and is
/// tight on every vertical molecule pointing up the left column or down
/// the right one.
pub fn example46_balanced_function(space: &FiniteMetricSpace) -> Result<LipschitzFunction> {
    column_affine_function(space, &one(), &int(-1), &zero(), &one())
}

/// `f(0,b) = 1 − b/2`, `f(1,b) = b/2`: norms `m_{x1y1}` with half slope
/// along the columns.
pub fn example46_half_slope_function(space: &FiniteMetricSpace) -> Result<LipschitzFunction> {
    column_affine_function(space, &one(), &rat(-1, 2), &zero(), &rat(1, 2))
}
