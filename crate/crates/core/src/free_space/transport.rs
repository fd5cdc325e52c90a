//! Exact Kantorovich–Rubinstein norm.
//!
//! The norm of a mass-zero measure is the cost of an optimal transport plan
//! moving its positive part onto its negative part. We solve it as an
//! uncapacitated min-cost flow by successive shortest paths over the
//! support, in exact arithmetic. Costs obey the triangle inequality, so
//! intermediate points off the support are never needed.
//!
//! The dual certificate is read off the final residual graph: with `dist`
//! the shortest-path distance from a virtual root joined to every node at
//! cost zero, `f = −dist` is 1-Lipschitz on the support and tight on every
//! arc carrying flow. The McShane envelope then extends it to the whole
//! space without raising its Lipschitz constant.

use std::collections::VecDeque;
use std::sync::OnceLock;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::free_space::lipschitz::{envelope_values, Envelope};
use crate::free_space::{pairing, FreeElement, LipschitzFunction};
use crate::metric::{FiniteMetricSpace, PointIdx};
use crate::rational::{one, zero, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct FlowArc {
    pub from: PointIdx,
    pub to: PointIdx,
    pub amount: Rational,
}

/// Primal plan and dual potential certifying `value = ‖μ‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormCertificate {
    pub value: Rational,
    pub flow: Vec<FlowArc>,
    pub potential: LipschitzFunction,
}

/// Shortest-path routine used inside the solver. Affects running time only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathRule {
    /// Full Bellman–Ford sweeps.
    BellmanFord,
    /// Queue-driven relaxation (SPFA).
    Queue,
}

impl PathRule {
    pub const ENV_VAR: &'static str = "LIPFREE_PATH_RULE";

    /// Reads [`Self::ENV_VAR`] once per process; unknown values fall back to
    /// Bellman–Ford.
    pub fn from_env() -> PathRule {
        static RULE: OnceLock<PathRule> = OnceLock::new();
        *RULE.get_or_init(|| match std::env::var(Self::ENV_VAR).as_deref() {
            Ok("spfa") | Ok("queue") => PathRule::Queue,
            _ => PathRule::BellmanFord,
        })
    }
}

pub fn norm(space: &FiniteMetricSpace, el: &FreeElement) -> Result<NormCertificate> {
    norm_with(space, el, PathRule::from_env())
}

pub fn norm_value(space: &FiniteMetricSpace, el: &FreeElement) -> Result<Rational> {
    Ok(norm(space, el)?.value)
}

pub fn norm_with(
    space: &FiniteMetricSpace,
    el: &FreeElement,
    rule: PathRule,
) -> Result<NormCertificate> {
    if el.masses().len() != space.len() {
        return Err(Error::Format("element and space sizes differ".into()));
    }
    let support = el.support();
    if support.is_empty() {
        return Ok(NormCertificate {
            value: zero(),
            flow: Vec::new(),
            potential: LipschitzFunction::zero(space),
        });
    }
    let mut solver = Solver::new(space, el, support, rule);
    solver.run()?;
    solver.certificate(el)
}

struct Solver<'a> {
    space: &'a FiniteMetricSpace,
    nodes: Vec<PointIdx>,
    /// Remaining supply (>0) or demand (<0) per node.
    excess: Vec<Rational>,
    /// flow[a][b] on the arc nodes[a] -> nodes[b].
    flow: Vec<Vec<Rational>>,
    cost: Vec<Vec<Rational>>,
    rule: PathRule,
}

impl<'a> Solver<'a> {
    fn new(
        space: &'a FiniteMetricSpace,
        el: &FreeElement,
        mut nodes: Vec<PointIdx>,
        rule: PathRule,
    ) -> Self {
        space.sort_points(&mut nodes);
        let k = nodes.len();
        let cost = nodes
            .iter()
            .map(|&a| nodes.iter().map(|&b| space.d(a, b).clone()).collect())
            .collect();
        Solver {
            space,
            excess: nodes.iter().map(|&p| el.mass(p).clone()).collect(),
            nodes,
            flow: vec![vec![zero(); k]; k],
            cost,
            rule,
        }
    }

    /// Cost of the cheapest residual arc a -> b and whether it is the
    /// reverse of flow already on b -> a.
    fn arc(&self, a: usize, b: usize) -> (Rational, bool) {
        if self.flow[b][a].is_positive() {
            (-self.cost[a][b].clone(), true)
        } else {
            (self.cost[a][b].clone(), false)
        }
    }

    /// Shortest distances from `sources` (distance zero) in the residual
    /// graph; `pred[b] = (a, reverse)`.
    #[allow(clippy::type_complexity)]
    fn shortest_paths(
        &self,
        sources: &[usize],
    ) -> Result<(Vec<Option<Rational>>, Vec<Option<(usize, bool)>>)> {
        let k = self.nodes.len();
        let mut dist: Vec<Option<Rational>> = vec![None; k];
        let mut pred = vec![None; k];
        for &s in sources {
            dist[s] = Some(zero());
        }
        let relax = |a: usize,
                     b: usize,
                     dist: &mut Vec<Option<Rational>>,
                     pred: &mut Vec<Option<(usize, bool)>>|
         -> bool {
            let Some(da) = dist[a].clone() else {
                return false;
            };
            let (c, reverse) = self.arc(a, b);
            let cand = da + c;
            let better = match &dist[b] {
                None => true,
                Some(db) => &cand < db,
            };
            if better {
                dist[b] = Some(cand);
                pred[b] = Some((a, reverse));
            }
            better
        };
        match self.rule {
            PathRule::BellmanFord => {
                let mut settled = false;
                for _ in 0..=k {
                    let mut changed = false;
                    for a in 0..k {
                        for b in 0..k {
                            if a != b && relax(a, b, &mut dist, &mut pred) {
                                changed = true;
                            }
                        }
                    }
                    if !changed {
                        settled = true;
                        break;
                    }
                }
                if !settled {
                    return Err(Error::Solver("negative cycle in residual graph".into()));
                }
            }
            PathRule::Queue => {
                let mut queue: VecDeque<usize> = sources.iter().copied().collect();
                let mut queued = vec![false; k];
                let mut pops = vec![0usize; k];
                for &s in sources {
                    queued[s] = true;
                }
                while let Some(a) = queue.pop_front() {
                    queued[a] = false;
                    pops[a] += 1;
                    if pops[a] > k + 1 {
                        return Err(Error::Solver("negative cycle in residual graph".into()));
                    }
                    for b in 0..k {
                        if a != b && relax(a, b, &mut dist, &mut pred) && !queued[b] {
                            queued[b] = true;
                            queue.push_back(b);
                        }
                    }
                }
            }
        }
        Ok((dist, pred))
    }

    fn run(&mut self) -> Result<()> {
        loop {
            let sources: Vec<usize> = (0..self.nodes.len())
                .filter(|&i| self.excess[i].is_positive())
                .collect();
            if sources.is_empty() {
                return Ok(());
            }
            let (dist, pred) = self.shortest_paths(&sources)?;
            // nearest node with unmet demand; nodes are in id order already
            let target = (0..self.nodes.len())
                .filter(|&j| self.excess[j].is_negative())
                .filter_map(|j| dist[j].as_ref().map(|d| (d, j)))
                .min_by(|x, y| x.0.cmp(y.0))
                .map(|(_, j)| j)
                .ok_or_else(|| Error::Solver("no reachable demand node".into()))?;

            let mut path = Vec::new();
            let mut at = target;
            while let Some((prev, reverse)) = pred[at] {
                path.push((prev, at, reverse));
                at = prev;
                if path.len() > self.nodes.len() {
                    return Err(Error::Solver("predecessor cycle".into()));
                }
            }
            let source = at;
            let mut amount =
                std::cmp::min(self.excess[source].clone(), -self.excess[target].clone());
            for &(a, b, reverse) in &path {
                if reverse && self.flow[b][a] < amount {
                    amount = self.flow[b][a].clone();
                }
            }
            for &(a, b, reverse) in &path {
                if reverse {
                    self.flow[b][a] -= &amount;
                } else {
                    self.flow[a][b] += &amount;
                }
            }
            self.excess[source] -= &amount;
            self.excess[target] += &amount;
        }
    }

    fn certificate(&self, el: &FreeElement) -> Result<NormCertificate> {
        let k = self.nodes.len();
        let mut value = zero();
        let mut flow = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if self.flow[a][b].is_positive() {
                    value += &self.flow[a][b] * &self.cost[a][b];
                    flow.push(FlowArc {
                        from: self.nodes[a],
                        to: self.nodes[b],
                        amount: self.flow[a][b].clone(),
                    });
                }
            }
        }
        let all: Vec<usize> = (0..k).collect();
        let (dist, _) = self.shortest_paths(&all)?;
        let partial: Vec<(PointIdx, Rational)> = self
            .nodes
            .iter()
            .zip(dist)
            .map(|(&p, d)| (p, -d.expect("every node is a root")))
            .collect();
        let values = envelope_values(self.space, &partial, &one(), Envelope::Upper)?;
        let potential = LipschitzFunction::shifted(self.space, values);
        if pairing(&potential, el) != value {
            return Err(Error::Solver("nonzero duality gap".into()));
        }
        Ok(NormCertificate {
            value,
            flow,
            potential,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_space::{lipschitz_constant, molecule};
    use crate::metric::Point;
    use crate::rational::{int, rat};

    fn square() -> FiniteMetricSpace {
        // 4-cycle with unit edges, graph metric
        let d = |x: &[i64]| x.iter().map(|&v| int(v)).collect::<Vec<_>>();
        FiniteMetricSpace::new(
            ["a", "b", "c", "d"]
                .iter()
                .map(|s| Point::new(*s))
                .collect(),
            vec![
                d(&[0, 1, 2, 1]),
                d(&[1, 0, 1, 2]),
                d(&[2, 1, 0, 1]),
                d(&[1, 2, 1, 0]),
            ],
            "a",
        )
        .unwrap()
    }

    fn check(space: &FiniteMetricSpace, el: &FreeElement, cert: &NormCertificate) {
        let mut net = vec![zero(); space.len()];
        let mut cost = zero();
        for arc in &cert.flow {
            assert!(arc.amount.is_positive());
            net[arc.from] += &arc.amount;
            net[arc.to] -= &arc.amount;
            cost += &arc.amount * space.d(arc.from, arc.to);
        }
        assert_eq!(net, el.masses());
        assert_eq!(cost, cert.value);
        assert!(lipschitz_constant(space, &cert.potential) <= one());
        assert_eq!(pairing(&cert.potential, el), cert.value);
    }

    #[test]
    fn dirac_difference_costs_the_distance() {
        let s = square();
        let el = FreeElement::from_masses(&s, vec![int(1), zero(), int(-1), zero()]).unwrap();
        let cert = norm(&s, &el).unwrap();
        assert_eq!(cert.value, int(2));
        check(&s, &el, &cert);
    }

    #[test]
    fn zero_element() {
        let s = square();
        let cert = norm(&s, &FreeElement::zero(&s)).unwrap();
        assert_eq!(cert.value, zero());
        assert!(cert.flow.is_empty());
    }

    #[test]
    fn molecules_have_unit_norm_under_both_rules() {
        let s = square();
        for (u, v) in s.ordered_pairs() {
            let m = molecule(&s, u, v).unwrap();
            for rule in [PathRule::BellmanFord, PathRule::Queue] {
                let cert = norm_with(&s, &m, rule).unwrap();
                assert_eq!(cert.value, one());
                check(&s, &m, &cert);
            }
        }
    }

    #[test]
    fn rerouting_needs_reverse_arcs() {
        let s = square();
        // +1 at a and c, -1 at b and d: every plan costs 2
        let el = FreeElement::from_masses(&s, vec![int(1), int(-1), int(1), int(-1)]).unwrap();
        let cert = norm(&s, &el).unwrap();
        assert_eq!(cert.value, int(2));
        check(&s, &el, &cert);
        let el =
            FreeElement::from_masses(&s, vec![rat(3, 2), rat(-1, 3), zero(), rat(-7, 6)]).unwrap();
        let cert = norm(&s, &el).unwrap();
        assert_eq!(cert.value, rat(3, 2));
        check(&s, &el, &cert);
    }
}
