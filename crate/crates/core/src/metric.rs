//! Finite metric spaces with exact rational distances, and the segment
//! geometry the classifiers are built on.

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{zero, Canonical, Rational};

/// Index of a point inside its [`FiniteMetricSpace`].
pub type PointIdx = usize;

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub id: String,
    /// Optional planar coordinates. Metadata only; never used for distances.
    pub label: Option<[Rational; 2]>,
}

impl Point {
    pub fn new(id: impl Into<String>) -> Self {
        Point {
            id: id.into(),
            label: None,
        }
    }

    pub fn labelled(id: impl Into<String>, a: Rational, b: Rational) -> Self {
        Point {
            id: id.into(),
            label: Some([a, b]),
        }
    }
}

/// First broken metric axiom found by [`FiniteMetricSpace::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NonZeroDiagonal {
        p: String,
        value: Rational,
    },
    NonPositive {
        p: String,
        q: String,
        value: Rational,
    },
    Asymmetric {
        p: String,
        q: String,
        forward: Rational,
        backward: Rational,
    },
    Triangle {
        p: String,
        q: String,
        via: String,
        direct: Rational,
        detour: Rational,
    },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::NonZeroDiagonal { .. } => "identity",
            Violation::NonPositive { .. } => "positivity",
            Violation::Asymmetric { .. } => "symmetry",
            Violation::Triangle { .. } => "triangle",
        }
    }

    pub fn witnesses(&self) -> Vec<&str> {
        match self {
            Violation::NonZeroDiagonal { p, .. } => vec![p],
            Violation::NonPositive { p, q, .. } | Violation::Asymmetric { p, q, .. } => vec![p, q],
            Violation::Triangle { p, q, via, .. } => vec![p, q, via],
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonZeroDiagonal { p, value } => {
                write!(f, "d({p},{p}) = {} is not zero", Canonical(value))
            }
            Violation::NonPositive { p, q, value } => {
                write!(f, "d({p},{q}) = {} is not positive", Canonical(value))
            }
            Violation::Asymmetric {
                p,
                q,
                forward,
                backward,
            } => write!(
                f,
                "d({p},{q}) = {} but d({q},{p}) = {}",
                Canonical(forward),
                Canonical(backward)
            ),
            Violation::Triangle {
                p,
                q,
                via,
                direct,
                detour,
            } => write!(
                f,
                "d({p},{q}) = {} exceeds d({p},{via}) + d({via},{q}) = {}",
                Canonical(direct),
                Canonical(detour)
            ),
        }
    }
}

/// `(u, v, δ)` naming the δ-segment `[u,v]_δ`.
#[derive(Clone, Debug)]
pub struct SegmentQuery {
    pub u: PointIdx,
    pub v: PointIdx,
    pub delta: Rational,
}

/// Optimal split of a segment into a `u`-part and a `v`-part.
///
/// Radii are normalized by `d(u,v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnclosingRadii {
    pub r_plus_s: Rational,
    pub r: Rational,
    pub s: Rational,
    pub u_part: Vec<PointIdx>,
    pub v_part: Vec<PointIdx>,
}

#[derive(Clone, Debug)]
pub struct FiniteMetricSpace {
    points: Vec<Point>,
    dist: Vec<Vec<Rational>>,
    base: PointIdx,
    index: HashMap<String, PointIdx>,
    rank: Vec<usize>,
    meta: Option<serde_json::Value>,
}

impl FiniteMetricSpace {
    /// Builds a space and checks every metric axiom.
    pub fn new(points: Vec<Point>, dist: Vec<Vec<Rational>>, base: &str) -> Result<Self> {
        let space = Self::from_parts(points, dist, base)?;
        space.validate()?;
        Ok(space)
    }

    /// Structural checks only (shape, unique ids, base present). Metric
    /// axioms are left to [`validate`](Self::validate).
    pub fn from_parts(points: Vec<Point>, dist: Vec<Vec<Rational>>, base: &str) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Format("space has no points".into()));
        }
        let n = points.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::Format(format!(
                "distance matrix must be {n}x{n} to match the point list"
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.id.clone(), i).is_some() {
                return Err(Error::Format(format!("duplicate point id {:?}", p.id)));
            }
        }
        let base = *index
            .get(base)
            .ok_or_else(|| Error::Format(format!("base point {base:?} is not declared")))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| points[a].id.cmp(&points[b].id));
        let mut rank = vec![0; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        Ok(FiniteMetricSpace {
            points,
            dist,
            base,
            index,
            rank,
            meta: None,
        })
    }

    pub fn with_meta(mut self, meta: serde_json::Value) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn meta(&self) -> Option<&serde_json::Value> {
        self.meta.as_ref()
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.len();
        let id = |i: usize| self.points[i].id.clone();
        for p in 0..n {
            if !self.dist[p][p].is_zero() {
                return Err(Violation::NonZeroDiagonal {
                    p: id(p),
                    value: self.dist[p][p].clone(),
                });
            }
        }
        for p in 0..n {
            for q in 0..n {
                if p != q && !self.dist[p][q].is_positive() {
                    return Err(Violation::NonPositive {
                        p: id(p),
                        q: id(q),
                        value: self.dist[p][q].clone(),
                    });
                }
            }
        }
        for p in 0..n {
            for q in p + 1..n {
                if self.dist[p][q] != self.dist[q][p] {
                    return Err(Violation::Asymmetric {
                        p: id(p),
                        q: id(q),
                        forward: self.dist[p][q].clone(),
                        backward: self.dist[q][p].clone(),
                    });
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let detour = &self.dist[p][r] + &self.dist[r][q];
                    if self.dist[p][q] > detour {
                        return Err(Violation::Triangle {
                            p: id(p),
                            q: id(q),
                            via: id(r),
                            direct: self.dist[p][q].clone(),
                            detour,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn base(&self) -> PointIdx {
        self.base
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn id(&self, p: PointIdx) -> &str {
        &self.points[p].id
    }

    pub fn label(&self, p: PointIdx) -> Option<&[Rational; 2]> {
        self.points[p].label.as_ref()
    }

    pub fn index_of(&self, id: &str) -> Result<PointIdx> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Format(format!("unknown point id {id:?}")))
    }

    /// Point carrying exactly this coordinate label, if any.
    pub fn find_label(&self, a: &Rational, b: &Rational) -> Option<PointIdx> {
        self.points
            .iter()
            .position(|p| matches!(&p.label, Some([la, lb]) if la == a && lb == b))
    }

    #[inline]
    pub fn d(&self, p: PointIdx, q: PointIdx) -> &Rational {
        &self.dist[p][q]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    /// Position of the point in lexicographic id order; used for every
    /// tie-break so results do not depend on declaration order.
    pub fn rank(&self, p: PointIdx) -> usize {
        self.rank[p]
    }

    pub fn sort_points(&self, pts: &mut [PointIdx]) {
        pts.sort_by_key(|&p| self.rank[p]);
    }

    pub fn sort_pairs(&self, pairs: &mut [(PointIdx, PointIdx)]) {
        pairs.sort_by_key(|&(u, v)| (self.rank[u], self.rank[v]));
    }

    /// All ordered pairs `(u, v)` with `u != v`, in id order.
    pub fn ordered_pairs(&self) -> Vec<(PointIdx, PointIdx)> {
        let mut pairs: Vec<_> = (0..self.len())
            .flat_map(|u| {
                (0..self.len())
                    .filter(move |&v| v != u)
                    .map(move |v| (u, v))
            })
            .collect();
        self.sort_pairs(&mut pairs);
        pairs
    }

    pub fn min_positive_distance(&self) -> Option<Rational> {
        self.ordered_pairs()
            .into_iter()
            .map(|(u, v)| self.dist[u][v].clone())
            .min()
    }

    pub fn in_ball(&self, center: PointIdx, p: PointIdx, radius: &Rational) -> bool {
        &self.dist[center][p] <= radius
    }

    /// `d(u,p) + d(v,p) - d(u,v)`, the betweenness defect of `p`.
    pub fn excess(&self, u: PointIdx, v: PointIdx, p: PointIdx) -> Rational {
        &self.dist[u][p] + &self.dist[v][p] - &self.dist[u][v]
    }

    fn distinct(&self, u: PointIdx, v: PointIdx) -> Result<()> {
        if u == v {
            return Err(Error::pre(format!(
                "segment endpoints must differ (got {} twice)",
                self.id(u)
            )));
        }
        Ok(())
    }

    /// `[u,v] = {p : d(u,p) + d(v,p) = d(u,v)}`.
    pub fn segment(&self, u: PointIdx, v: PointIdx) -> Result<Vec<PointIdx>> {
        self.distinct(u, v)?;
        let mut pts: Vec<_> = (0..self.len())
            .filter(|&p| self.excess(u, v, p).is_zero())
            .collect();
        self.sort_points(&mut pts);
        Ok(pts)
    }

    /// `[u,v]_δ = {p : d(u,p) + d(v,p) < d(u,v) + δ}` (strict).
    pub fn delta_segment(&self, q: &SegmentQuery) -> Result<Vec<PointIdx>> {
        self.distinct(q.u, q.v)?;
        let mut pts: Vec<_> = (0..self.len())
            .filter(|&p| self.excess(q.u, q.v, p) < q.delta)
            .collect();
        self.sort_points(&mut pts);
        Ok(pts)
    }

    /// Smallest positive excess over points off `[u,v]`; every δ-segment with
    /// `0 < δ <= gap` equals `[u,v]`. `None` when all points lie on `[u,v]`.
    pub fn stabilization_gap(&self, u: PointIdx, v: PointIdx) -> Result<Option<Rational>> {
        self.distinct(u, v)?;
        Ok((0..self.len())
            .map(|p| self.excess(u, v, p))
            .filter(|e| e.is_positive())
            .min())
    }

    /// Minimal `r + s` such that `[u,v] ⊆ B(u, r·d(u,v)) ∪ B(v, s·d(u,v))`.
    ///
    /// This is the `δ → 0` limit of the enclosing condition: on a finite
    /// space small δ-segments coincide with `[u,v]`.
    pub fn min_enclosing_radii(&self, u: PointIdx, v: PointIdx) -> Result<EnclosingRadii> {
        let seg = self.segment(u, v)?;
        let duv = self.d(u, v);
        let items: Vec<_> = seg
            .iter()
            .map(|&p| (p, self.d(u, p) / duv, self.d(v, p) / duv))
            .collect();
        let split = min_partition_radii(&items);
        let mut u_part = Vec::new();
        let mut v_part = Vec::new();
        for (p, a, _) in &items {
            if a <= &split.r {
                u_part.push(*p);
            } else {
                v_part.push(*p);
            }
        }
        Ok(EnclosingRadii {
            r_plus_s: split.r_plus_s,
            r: split.r,
            s: split.s,
            u_part,
            v_part,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionRadii {
    pub r_plus_s: Rational,
    pub r: Rational,
    pub s: Rational,
}

/// Minimizes `max_{u-part} a + max_{v-part} b` over all two-way partitions of
/// `items = [(id, a, b)]`. An optimal `u`-part is always a sublevel set of
/// `a`, so a sweep over the sorted `a` values suffices. Ties prefer the
/// smaller `r`.
pub fn min_partition_radii<T>(items: &[(T, Rational, Rational)]) -> PartitionRadii {
    let mut by_a: Vec<(&Rational, &Rational)> = items.iter().map(|(_, a, b)| (a, b)).collect();
    by_a.sort_by(|x, y| x.0.cmp(y.0));
    // suffix_max[i] = max b over by_a[i..]
    let mut suffix_max = vec![zero(); by_a.len() + 1];
    for i in (0..by_a.len()).rev() {
        suffix_max[i] = std::cmp::max(suffix_max[i + 1].clone(), by_a[i].1.clone());
    }
    // Items with a <= 0 already sit in the zero-radius u-ball.
    let mut i = 0;
    while i < by_a.len() && by_a[i].0 <= &zero() {
        i += 1;
    }
    let mut best = PartitionRadii {
        r_plus_s: suffix_max[i].clone(),
        r: zero(),
        s: suffix_max[i].clone(),
    };
    while i < by_a.len() {
        let r = by_a[i].0.clone();
        let mut j = i;
        while j < by_a.len() && by_a[j].0 == &r {
            j += 1;
        }
        let s = suffix_max[j].clone();
        let total = &r + &s;
        if total < best.r_plus_s {
            best = PartitionRadii {
                r_plus_s: total,
                r,
                s,
            };
        }
        i = j;
    }
    best
}
