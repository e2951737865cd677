//! Post-processing of worst scenarios: minimal capacities, interior arcs and
//! the cycle-canceling procedure that leaves the interior arcs acyclic.

use thiserror::Error;

use crate::mcf::{certify_optimality, make_complementary, potentials_for, CertifyError, ComplementError};
use crate::model::{validate_flow, ArcId, Flow, Instance, NodeId, Scenario, Violation};

/// Arcs whose capacity lies strictly inside their interval, ascending ids.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InteriorSet {
    pub arcs: Vec<ArcId>,
}

impl InteriorSet {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Whether the arcs, taken as undirected edges, contain no cycle.
    pub fn is_forest(&self, instance: &Instance) -> bool {
        find_cycle(instance, &self.arcs).is_none()
    }
}

/// `max{u̲, x}` componentwise. The flow stays optimal with unchanged cost.
pub fn minimal_capacities(instance: &Instance, flow: &Flow) -> Scenario {
    Scenario::new(
        instance
            .arcs
            .iter()
            .map(|a| a.capacity.lower.max(flow.values[a.id]))
            .collect(),
    )
}

pub fn interior_arcs(instance: &Instance, scenario: &Scenario) -> InteriorSet {
    InteriorSet {
        arcs: instance
            .arcs
            .iter()
            .filter(|a| a.capacity.is_interior(scenario.capacities[a.id]))
            .map(|a| a.id)
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("flow is not feasible: {0}")]
    InvalidFlow(Violation),
    #[error("flow is not optimal for the scenario")]
    NotOptimal,
    #[error(transparent)]
    NotComplementary(#[from] ComplementError),
    #[error("optimality certificate failed after normalization: {0}")]
    Certificate(#[from] CertifyError),
    /// The interior arcs close a cycle of nonzero cost, which cannot happen
    /// at a worst-case scenario: shifting flow around it would raise the
    /// optimal cost.
    #[error("scenario is not worst-case: interior cycle {cycle:?} has cost {cost}")]
    NotWorstCase { cycle: Vec<ArcId>, cost: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremal {
    pub scenario: Scenario,
    pub flow: Flow,
    /// Number of cycles canceled.
    pub iterations: usize,
}

/// One traversal step of an undirected cycle: `forward` when the arc is
/// traversed from tail to head.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Step {
    arc: ArcId,
    forward: bool,
}

/// First undirected cycle among `arcs`, found by depth-first search visiting
/// nodes and adjacency in ascending id order.
fn find_cycle(instance: &Instance, arcs: &[ArcId]) -> Option<Vec<Step>> {
    let n = instance.num_nodes;
    let mut adj: Vec<Vec<(ArcId, NodeId)>> = vec![Vec::new(); n + 1];
    let mut sorted = arcs.to_vec();
    sorted.sort_unstable();
    for &e in &sorted {
        let a = &instance.arcs[e];
        adj[a.tail].push((e, a.head));
        adj[a.head].push((e, a.tail));
    }
    let mut depth = vec![usize::MAX; n + 1];
    // (node, arc used to enter it)
    let mut parent: Vec<Option<(NodeId, ArcId)>> = vec![None; n + 1];
    for root in 1..=n {
        if depth[root] != usize::MAX || adj[root].is_empty() {
            continue;
        }
        depth[root] = 0;
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next == adj[v].len() {
                stack.pop();
                continue;
            }
            let (e, w) = adj[v][*next];
            *next += 1;
            if parent[v].is_some_and(|(_, pe)| pe == e) {
                continue;
            }
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some((v, e));
                stack.push((w, 0));
            } else if depth[w] < depth[v] {
                // back edge v -> w closes the cycle w ... v -> w
                let mut path = Vec::new();
                let mut u = v;
                while u != w {
                    let (p, pe) = parent[u].unwrap();
                    path.push((p, pe, u));
                    u = p;
                }
                path.reverse();
                let mut steps: Vec<Step> = path
                    .into_iter()
                    .map(|(from, arc, _)| Step {
                        arc,
                        forward: instance.arcs[arc].tail == from,
                    })
                    .collect();
                steps.push(Step {
                    arc: e,
                    forward: instance.arcs[e].tail == v,
                });
                return Some(steps);
            }
        }
    }
    None
}

fn slack(instance: &Instance, x: &[i64], steps: &[Step], flip: bool) -> i64 {
    steps
        .iter()
        .map(|st| {
            let a = &instance.arcs[st.arc];
            if st.forward != flip {
                a.capacity.upper - x[st.arc]
            } else {
                x[st.arc] - a.capacity.lower
            }
        })
        .min()
        .unwrap_or(i64::MAX)
}

/// Reshapes a worst scenario so that its interior arcs form a forest
/// (hence at most `n − 1` of them), keeping the flow optimal and the cost
/// unchanged.
///
/// The input is first normalized: opposite-direction flow is canceled and
/// the scenario is lowered to `max{u̲, x}`. Then, while the interior arcs
/// contain an undirected cycle, flow is shifted around it by the largest
/// amount that keeps every cycle arc within its interval, and the cycle's
/// capacities are pinned to the new flow. Each round drives at least one
/// arc to a bound.
pub fn extremalize_to_forest(
    instance: &Instance,
    scenario: &Scenario,
    flow: &Flow,
) -> Result<Extremal, StructureError> {
    validate_flow(instance, scenario, flow).map_err(StructureError::InvalidFlow)?;
    if potentials_for(instance, scenario, flow).is_none() {
        return Err(StructureError::NotOptimal);
    }
    let mut flow = make_complementary(instance, flow)?;
    let mut scenario = minimal_capacities(instance, &flow);
    let pi = potentials_for(instance, &scenario, &flow).ok_or(StructureError::NotOptimal)?;
    certify_optimality(instance, &scenario, &flow, &pi)?;

    let mut iterations = 0;
    loop {
        let interior = interior_arcs(instance, &scenario);
        let Some(cycle) = find_cycle(instance, &interior.arcs) else {
            break;
        };
        let cost: i64 = cycle
            .iter()
            .map(|st| {
                let c = instance.arcs[st.arc].cost;
                if st.forward {
                    c
                } else {
                    -c
                }
            })
            .sum();
        if cost != 0 {
            return Err(StructureError::NotWorstCase {
                cycle: cycle.iter().map(|st| st.arc).collect(),
                cost,
            });
        }
        let mut flip = false;
        let mut delta = slack(instance, &flow.values, &cycle, false);
        if delta == 0 {
            flip = true;
            delta = slack(instance, &flow.values, &cycle, true);
        }
        debug_assert!(delta > 0, "interior arcs have slack on both sides");
        for st in &cycle {
            if st.forward != flip {
                flow.values[st.arc] += delta;
            } else {
                flow.values[st.arc] -= delta;
            }
            scenario.capacities[st.arc] = flow.values[st.arc];
        }
        iterations += 1;
    }
    Ok(Extremal {
        scenario,
        flow,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_interior_chain, gen_paradox_simple};
    use crate::mcf::min_cost_flow;

    #[test]
    fn minimal_capacity_examples() {
        let inst = gen_paradox_simple();
        let flow = Flow::from_values(&inst, vec![1, 1, 1, 0, 0]);
        assert_eq!(
            minimal_capacities(&inst, &flow),
            Scenario::new(vec![1, 1, 1, 0, 0])
        );

        let wide = Instance::new(3, 1, 3, 2, &[(1, 2, 1, 4, 1), (2, 3, 0, 4, 1)]).unwrap();
        let flow = Flow::from_values(&wide, vec![2, 2]);
        assert_eq!(minimal_capacities(&wide, &flow).capacities, vec![2, 2]);
        let low = Flow::from_values(&wide, vec![0, 0]);
        assert_eq!(minimal_capacities(&wide, &low), Scenario::lower(&wide));
    }

    #[test]
    fn interior_examples() {
        let inst = gen_paradox_simple();
        assert!(interior_arcs(&inst, &Scenario::upper(&inst)).is_empty());
        let wide = Instance::new(3, 1, 3, 2, &[(1, 2, 1, 4, 1), (2, 3, 0, 4, 1)]).unwrap();
        assert_eq!(interior_arcs(&wide, &Scenario::new(vec![4, 2])).arcs, vec![1]);
    }

    #[test]
    fn chain_worst_scenario_is_already_a_forest() {
        let inst = gen_interior_chain(6).unwrap();
        let mut caps = Scenario::lower(&inst).capacities;
        for a in &inst.arcs {
            if a.capacity.lower < a.capacity.upper {
                caps[a.id] = 1;
            }
        }
        let scenario = Scenario::new(caps);
        let (flow, _) = min_cost_flow(&inst, &scenario).into_optimal().unwrap();
        let out = extremalize_to_forest(&inst, &scenario, &flow).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.scenario, scenario);
        assert_eq!(out.flow.total_cost, 33);
        assert_eq!(interior_arcs(&inst, &out.scenario).len(), 5);
    }

    #[test]
    fn zero_cost_cycle_is_canceled() {
        // Two parallel routes of equal cost, both interior.
        let inst = Instance::new(3, 1, 3, 2, &[(1, 2, 0, 3, 1), (2, 3, 0, 3, 1), (1, 3, 0, 3, 2)]).unwrap();
        let scenario = Scenario::new(vec![1, 1, 1]);
        let flow = Flow::from_values(&inst, vec![1, 1, 1]);
        let out = extremalize_to_forest(&inst, &scenario, &flow).unwrap();
        assert_eq!(out.iterations, 1);
        assert_eq!(out.flow.total_cost, 4);
        assert!(interior_arcs(&inst, &out.scenario).is_forest(&inst));
        assert_eq!(validate_flow(&inst, &out.scenario, &out.flow), Ok(()));
    }

    #[test]
    fn rejects_non_optimal_and_non_worst() {
        let inst = Instance::new(3, 1, 3, 2, &[(1, 2, 0, 3, 1), (2, 3, 0, 3, 1), (1, 3, 0, 3, 5)]).unwrap();
        let upper = Scenario::upper(&inst);
        let bad = Flow::from_values(&inst, vec![1, 1, 1]);
        assert_eq!(
            extremalize_to_forest(&inst, &upper, &bad),
            Err(StructureError::NotOptimal)
        );
        // optimal under (1,1,1) but the interior cycle has cost 1 + 1 - 5
        let s = Scenario::new(vec![1, 1, 1]);
        assert!(matches!(
            extremalize_to_forest(&inst, &s, &bad),
            Err(StructureError::NotWorstCase { cost: -3, .. })
        ));
    }

    #[test]
    fn cycle_search_finds_parallel_pair() {
        let inst = Instance::new(2, 1, 2, 1, &[(1, 2, 0, 3, 1), (1, 2, 0, 3, 1)]).unwrap();
        let c = find_cycle(&inst, &[0, 1]).unwrap();
        assert_eq!(c.len(), 2);
        assert!(find_cycle(&inst, &[0]).is_none());
    }
}
