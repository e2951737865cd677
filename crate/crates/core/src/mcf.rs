//! Exact integral minimum cost flow for one fixed scenario, and optimality
//! certificates built from node potentials.
//!
//! The solver is successive shortest augmenting paths. All arc costs are
//! nonnegative, so the initial potentials are zero and every shortest-path
//! search runs Dijkstra on nonnegative reduced costs. Ties are broken towards
//! the lowest node and arc ids, which makes every output deterministic.

use std::collections::VecDeque;

use thiserror::Error;

use crate::model::{validate_flow, ArcId, Flow, Instance, NodeId, Scenario, Violation};

/// Node potentials `π`, one per node.
///
/// Reduced costs are `c^π_e = c_e − π_tail + π_head`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Potentials {
    pi: Vec<i64>,
}

impl Potentials {
    /// `values[k]` is the potential of node `k + 1`.
    pub fn new(values: Vec<i64>) -> Self {
        Potentials { pi: values }
    }

    pub fn zero(num_nodes: usize) -> Self {
        Potentials {
            pi: vec![0; num_nodes],
        }
    }

    pub fn get(&self, node: NodeId) -> i64 {
        self.pi[node - 1]
    }

    pub fn set(&mut self, node: NodeId, value: i64) {
        self.pi[node - 1] = value;
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.pi
    }

    pub fn reduced_cost(&self, instance: &Instance, arc: ArcId) -> i64 {
        let a = &instance.arcs[arc];
        a.cost - self.get(a.tail) + self.get(a.head)
    }
}

/// Outcome of [`min_cost_flow`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McfResult {
    Optimal {
        flow: Flow,
        potentials: Potentials,
    },
    /// No flow of the requested size exists; carries the maximum flow value.
    Infeasible {
        max_flow: i64,
    },
}

impl McfResult {
    pub fn cost(&self) -> Option<i64> {
        match self {
            McfResult::Optimal { flow, .. } => Some(flow.total_cost),
            McfResult::Infeasible { .. } => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, McfResult::Optimal { .. })
    }

    pub fn into_optimal(self) -> Option<(Flow, Potentials)> {
        match self {
            McfResult::Optimal { flow, potentials } => Some((flow, potentials)),
            McfResult::Infeasible { .. } => None,
        }
    }
}

/// Residual network over 0-based node indices. Residual arc `2e` is the
/// forward copy of arc `e`, `2e + 1` the backward copy.
struct Residual<'a> {
    instance: &'a Instance,
    caps: &'a [i64],
    x: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl<'a> Residual<'a> {
    fn new(instance: &'a Instance, caps: &'a [i64], x: Vec<i64>) -> Self {
        let mut adj = vec![Vec::new(); instance.num_nodes];
        for a in &instance.arcs {
            adj[a.tail - 1].push(2 * a.id);
            adj[a.head - 1].push(2 * a.id + 1);
        }
        Residual {
            instance,
            caps,
            x,
            adj,
        }
    }

    fn from(&self, r: usize) -> usize {
        let a = &self.instance.arcs[r / 2];
        if r.is_multiple_of(2) {
            a.tail - 1
        } else {
            a.head - 1
        }
    }

    fn to(&self, r: usize) -> usize {
        let a = &self.instance.arcs[r / 2];
        if r.is_multiple_of(2) {
            a.head - 1
        } else {
            a.tail - 1
        }
    }

    fn cap(&self, r: usize) -> i64 {
        let e = r / 2;
        if r.is_multiple_of(2) {
            self.caps[e] - self.x[e]
        } else {
            self.x[e]
        }
    }

    fn cost(&self, r: usize) -> i64 {
        let c = self.instance.arcs[r / 2].cost;
        if r.is_multiple_of(2) {
            c
        } else {
            -c
        }
    }

    fn push(&mut self, r: usize, amount: i64) {
        if r.is_multiple_of(2) {
            self.x[r / 2] += amount;
        } else {
            self.x[r / 2] -= amount;
        }
    }

    /// Dijkstra from `src` on reduced costs `cost + h[from] − h[to]`.
    /// Returns distances (`None` when unreachable) and predecessor arcs.
    fn dijkstra(&self, src: usize, h: &[i64]) -> (Vec<Option<i64>>, Vec<usize>) {
        let n = self.instance.num_nodes;
        let mut dist: Vec<Option<i64>> = vec![None; n];
        let mut prev = vec![usize::MAX; n];
        let mut done = vec![false; n];
        dist[src] = Some(0);
        loop {
            let mut pick: Option<(usize, i64)> = None;
            for (v, d) in dist.iter().enumerate() {
                if let (false, Some(d)) = (done[v], *d) {
                    if pick.is_none_or(|(_, best)| d < best) {
                        pick = Some((v, d));
                    }
                }
            }
            let Some((u, du)) = pick else { break };
            done[u] = true;
            for &r in &self.adj[u] {
                if self.cap(r) <= 0 {
                    continue;
                }
                let v = self.to(r);
                let nd = du + self.cost(r) + h[u] - h[v];
                if dist[v].is_none_or(|dv| nd < dv) {
                    dist[v] = Some(nd);
                    prev[v] = r;
                }
            }
        }
        (dist, prev)
    }

    /// Successive shortest paths until `amount` units have been sent.
    /// Returns `false` when the sink becomes unreachable first.
    fn augment(&mut self, s: usize, t: usize, amount: i64) -> bool {
        let mut h = vec![0i64; self.instance.num_nodes];
        let mut remaining = amount;
        while remaining > 0 {
            let (dist, prev) = self.dijkstra(s, &h);
            if dist[t].is_none() {
                return false;
            }
            let mut delta = remaining;
            let mut v = t;
            while v != s {
                let r = prev[v];
                delta = delta.min(self.cap(r));
                v = self.from(r);
            }
            let mut v = t;
            while v != s {
                let r = prev[v];
                self.push(r, delta);
                v = self.from(r);
            }
            remaining -= delta;
            for (hv, d) in h.iter_mut().zip(&dist) {
                if let Some(d) = d {
                    *hv += d;
                }
            }
        }
        true
    }

    /// Bellman-Ford from a virtual root joined to every node by a zero-cost
    /// arc. `π = −dist` then has nonnegative reduced cost on every residual
    /// arc, with `0 ≤ π ≤ Σ c`. `None` if a negative residual cycle exists.
    fn certifying_potentials(&self) -> Option<Potentials> {
        let n = self.instance.num_nodes;
        let mut dist = vec![0i64; n];
        let residual_arcs = 2 * self.instance.num_arcs();
        for _ in 0..=n {
            let mut changed = false;
            for r in 0..residual_arcs {
                if self.cap(r) <= 0 {
                    continue;
                }
                let (u, v) = (self.from(r), self.to(r));
                let nd = dist[u] + self.cost(r);
                if nd < dist[v] {
                    dist[v] = nd;
                    changed = true;
                }
            }
            if !changed {
                return Some(Potentials::new(dist.iter().map(|d| -d).collect()));
            }
        }
        None
    }
}

/// Optimal flow values for `caps`, or `None` when the requested amount cannot
/// be routed. Used directly by the enumeration oracle.
pub(crate) fn optimal_flow_values(instance: &Instance, caps: &[i64]) -> Option<Vec<i64>> {
    let mut res = Residual::new(instance, caps, vec![0; instance.num_arcs()]);
    if res.augment(instance.source - 1, instance.sink - 1, instance.flow_amount) {
        Some(res.x)
    } else {
        None
    }
}

/// Minimum cost flow of size `f` under `scenario`.
///
/// Feasibility is settled first by a maximum flow computation; the returned
/// potentials certify the optimality of the returned flow.
pub fn min_cost_flow(instance: &Instance, scenario: &Scenario) -> McfResult {
    let max_flow = max_flow_value(instance, scenario);
    if max_flow < instance.flow_amount {
        return McfResult::Infeasible { max_flow };
    }
    let caps = &scenario.capacities;
    let mut res = Residual::new(instance, caps, vec![0; instance.num_arcs()]);
    let routed = res.augment(instance.source - 1, instance.sink - 1, instance.flow_amount);
    debug_assert!(routed, "max flow admitted the requested amount");
    let potentials = res
        .certifying_potentials()
        .expect("successive shortest paths leave no negative residual cycle");
    let flow = Flow::from_values(instance, res.x);
    McfResult::Optimal { flow, potentials }
}

/// Certifying potentials for a given flow, or `None` when the flow admits a
/// negative residual cycle (i.e. it is not optimal).
pub fn potentials_for(instance: &Instance, scenario: &Scenario, flow: &Flow) -> Option<Potentials> {
    Residual::new(instance, &scenario.capacities, flow.values.clone()).certifying_potentials()
}

/// Maximum s-t flow value under the scenario capacities (Edmonds-Karp).
pub fn max_flow_value(instance: &Instance, scenario: &Scenario) -> i64 {
    let mut res = Residual::new(instance, &scenario.capacities, vec![0; instance.num_arcs()]);
    let (s, t) = (instance.source - 1, instance.sink - 1);
    let n = instance.num_nodes;
    let mut total = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &r in &res.adj[u] {
                let v = res.to(r);
                if !seen[v] && res.cap(r) > 0 {
                    seen[v] = true;
                    prev[v] = r;
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            return total;
        }
        let mut delta = i64::MAX;
        let mut v = t;
        while v != s {
            delta = delta.min(res.cap(prev[v]));
            v = res.from(prev[v]);
        }
        let mut v = t;
        while v != s {
            res.push(prev[v], delta);
            v = res.from(prev[v]);
        }
        total += delta;
    }
}

/// An arc whose reduced cost sign contradicts its flow value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackViolation {
    pub arc: ArcId,
    pub reduced_cost: i64,
    pub flow: i64,
    pub capacity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("flow is not feasible: {0}")]
    Flow(Violation),
    #[error("potential vector has {found} entries for {expected} nodes")]
    Dimension { expected: usize, found: usize },
    #[error("complementary slackness violated on arcs {:?}", .0.iter().map(|v| v.arc).collect::<Vec<_>>())]
    Slackness(Vec<SlackViolation>),
}

/// Checks the complementary slackness conditions
/// `c^π_e > 0 ⟹ x_e = 0` and `c^π_e < 0 ⟹ x_e = u_e` on every arc.
pub fn certify_optimality(
    instance: &Instance,
    scenario: &Scenario,
    flow: &Flow,
    potentials: &Potentials,
) -> Result<(), CertifyError> {
    validate_flow(instance, scenario, flow).map_err(CertifyError::Flow)?;
    if potentials.len() != instance.num_nodes {
        return Err(CertifyError::Dimension {
            expected: instance.num_nodes,
            found: potentials.len(),
        });
    }
    let violations: Vec<SlackViolation> = instance
        .arcs
        .iter()
        .filter_map(|a| {
            let rc = potentials.reduced_cost(instance, a.id);
            let x = flow.values[a.id];
            let u = scenario.capacities[a.id];
            let bad = (rc > 0 && x != 0) || (rc < 0 && x != u);
            bad.then_some(SlackViolation {
                arc: a.id,
                reduced_cost: rc,
                flow: x,
                capacity: u,
            })
        })
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CertifyError::Slackness(violations))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ComplementError {
    /// Cancelling flow on an opposite pair would change the cost, which an
    /// optimal flow never requires.
    #[error("arcs {forward} and {backward} carry flow both ways at positive cost")]
    CostChange { forward: ArcId, backward: ArcId },
}

/// Cancels flow circulating on opposite arc pairs `(i,j)`, `(j,i)` so that at
/// most one direction carries flow. Parallel arcs are handled pairwise in
/// ascending id order.
pub fn make_complementary(instance: &Instance, flow: &Flow) -> Result<Flow, ComplementError> {
    let mut x = flow.values.clone();
    let arcs = &instance.arcs;
    for a in arcs {
        for b in arcs {
            if b.id <= a.id || a.tail != b.head || a.head != b.tail {
                continue;
            }
            let eps = x[a.id].min(x[b.id]);
            if eps == 0 {
                continue;
            }
            if a.cost > 0 || b.cost > 0 {
                return Err(ComplementError::CostChange {
                    forward: a.id,
                    backward: b.id,
                });
            }
            x[a.id] -= eps;
            x[b.id] -= eps;
        }
    }
    Ok(Flow {
        values: x,
        total_cost: flow.total_cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_paradox_simple;

    #[test]
    fn example_worst_scenario_costs_twelve() {
        let inst = gen_paradox_simple();
        let res = min_cost_flow(&inst, &Scenario::new(vec![1, 1, 1, 0, 0]));
        let (flow, pi) = res.into_optimal().unwrap();
        assert_eq!(flow.total_cost, 12);
        assert_eq!(flow.values, vec![1, 1, 1, 0, 0]);
        let s = Scenario::new(vec![1, 1, 1, 0, 0]);
        assert_eq!(certify_optimality(&inst, &s, &flow, &pi), Ok(()));
    }

    #[test]
    fn two_units_cost_four() {
        let inst = gen_paradox_simple().with_flow_amount(2);
        let res = min_cost_flow(&inst, &Scenario::upper(&inst));
        assert_eq!(res.cost(), Some(4));
    }

    #[test]
    fn zero_upper_is_infeasible() {
        let inst = Instance::new(3, 1, 3, 1, &[(1, 2, 0, 0, 1), (2, 3, 0, 0, 1)]).unwrap();
        assert_eq!(
            min_cost_flow(&inst, &Scenario::upper(&inst)),
            McfResult::Infeasible { max_flow: 0 }
        );
    }

    #[test]
    fn max_flow_values() {
        let inst = gen_paradox_simple();
        assert_eq!(max_flow_value(&inst, &Scenario::upper(&inst)), 2);
        assert_eq!(max_flow_value(&inst, &Scenario::new(vec![0; 5])), 0);
        let single = Instance::new(2, 1, 2, 1, &[(1, 2, 0, 9, 3)]).unwrap();
        assert_eq!(max_flow_value(&single, &Scenario::new(vec![7])), 7);
    }

    #[test]
    fn zero_flow_zero_potentials_certified() {
        let inst = gen_paradox_simple().with_flow_amount(0);
        let flow = Flow::zero(&inst);
        let pi = Potentials::zero(inst.num_nodes);
        assert_eq!(
            certify_optimality(&inst, &Scenario::upper(&inst), &flow, &pi),
            Ok(())
        );
    }

    #[test]
    fn perturbed_potentials_violate() {
        let inst = gen_paradox_simple();
        let s = Scenario::new(vec![1, 1, 1, 0, 0]);
        let (flow, pi) = min_cost_flow(&inst, &s).into_optimal().unwrap();
        // Interior nodes are 2 and 3; at least one perturbation must break
        // a reduced-cost sign on an arc incident to the perturbed node.
        let mut broken = 0;
        for node in [2, 3] {
            let mut p = pi.clone();
            p.set(node, p.get(node) + 1);
            if let Err(CertifyError::Slackness(v)) = certify_optimality(&inst, &s, &flow, &p) {
                broken += 1;
                for viol in v {
                    let a = &inst.arcs[viol.arc];
                    assert!(a.tail == node || a.head == node);
                }
            }
        }
        assert!(broken >= 1);
    }

    #[test]
    fn complementary_cancels_zero_cost_pair() {
        let inst = Instance::new(3, 1, 3, 1, &[(1, 2, 0, 3, 0), (2, 1, 0, 3, 0), (2, 3, 0, 3, 0)]).unwrap();
        let flow = Flow::from_values(&inst, vec![2, 1, 1]);
        let c = make_complementary(&inst, &flow).unwrap();
        assert_eq!(c.values, vec![1, 0, 1]);
        assert_eq!(c.total_cost, flow.total_cost);

        let plain = gen_paradox_simple();
        let f = Flow::from_values(&plain, vec![1, 1, 1, 0, 0]);
        assert_eq!(make_complementary(&plain, &f).unwrap(), f);
    }

    #[test]
    fn complementary_rejects_costly_pair() {
        let inst = Instance::new(3, 1, 3, 1, &[(1, 2, 0, 3, 1), (2, 1, 0, 3, 0), (2, 3, 0, 3, 0)]).unwrap();
        let flow = Flow::from_values(&inst, vec![2, 1, 1]);
        assert!(make_complementary(&inst, &flow).is_err());
    }
}
