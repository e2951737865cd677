//! The more-for-less paradox: `c_w(f + 1) < c_w(f)`.
//!
//! Covers worst-value profiles over flow amounts, detection with a negative
//! augmenting-path witness, the instance constructor behind the sufficient
//! condition, and the exact improving-path search on complete digraphs that
//! decides immunity there.

use std::fmt;

use thiserror::Error;

use crate::generators::{complete_instance, COMPLETE_LIMIT};
use crate::mcf::max_flow_value;
use crate::model::{validate_flow, ArcId, Flow, Instance, NodeId, Scenario, Violation};
use crate::oracle::{BruteForce, OracleError, WorstResult};
use crate::spdp::{sp_decompose, worst_value_with_tree, SpOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn sign(self) -> i64 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

/// An undirected s-t path given as arcs with the direction they are
/// traversed in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentingPath {
    pub steps: Vec<(ArcId, Direction)>,
}

impl AugmentingPath {
    /// Forward arcs count `+c_e`, backward arcs `−c_e`.
    pub fn signed_cost(&self, instance: &Instance) -> i64 {
        self.steps
            .iter()
            .map(|&(e, d)| d.sign() * instance.arcs[e].cost)
            .sum()
    }

    /// Node sequence from the source, or `None` if the steps do not chain
    /// into a simple s-t path.
    pub fn nodes(&self, instance: &Instance) -> Option<Vec<NodeId>> {
        let mut nodes = vec![instance.source];
        for &(e, d) in &self.steps {
            let a = instance.arcs.get(e)?;
            let (from, to) = match d {
                Direction::Forward => (a.tail, a.head),
                Direction::Backward => (a.head, a.tail),
            };
            if *nodes.last().unwrap() != from || nodes.contains(&to) {
                return None;
            }
            nodes.push(to);
        }
        (*nodes.last().unwrap() == instance.sink).then_some(nodes)
    }

    /// Whether one more unit can be pushed along the path: forward arcs need
    /// `x_e < u_e`, backward arcs `x_e > 0`.
    pub fn is_augmenting(&self, instance: &Instance, scenario: &Scenario, flow: &Flow) -> bool {
        self.nodes(instance).is_some()
            && self.steps.iter().all(|&(e, d)| match d {
                Direction::Forward => flow.values[e] < scenario.capacities[e],
                Direction::Backward => flow.values[e] > 0,
            })
    }

    /// `flow` with one unit pushed along the path.
    pub fn push(&self, flow: &Flow) -> Vec<i64> {
        let mut x = flow.values.clone();
        for &(e, d) in &self.steps {
            x[e] += d.sign();
        }
        x
    }
}

impl fmt::Display for AugmentingPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, d)) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match d {
                Direction::Forward => write!(f, "+{e}")?,
                Direction::Backward => write!(f, "-{e}")?,
            }
        }
        Ok(())
    }
}

/// A flow-independent s-t path in a complete digraph, as traversed node
/// pairs: `(from, to, Forward)` uses arc `(from, to)`, `(from, to, Backward)`
/// uses arc `(to, from)` against its direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImprovingPath {
    pub steps: Vec<(NodeId, NodeId, Direction)>,
}

impl ImprovingPath {
    /// The arc `(tail, head)` behind each step, with its direction.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId, Direction)> {
        self.steps
            .iter()
            .map(|&(from, to, d)| match d {
                Direction::Forward => (from, to, d),
                Direction::Backward => (to, from, d),
            })
            .collect()
    }

    pub fn signed_cost(&self, costs: &[Vec<i64>]) -> i64 {
        self.arcs()
            .iter()
            .map(|&(i, j, d)| d.sign() * costs[i - 1][j - 1])
            .sum()
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = self.steps.first().map(|s| s.0).into_iter().collect();
        v.extend(self.steps.iter().map(|s| s.1));
        v
    }
}

impl fmt::Display for ImprovingPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nodes = self.nodes();
        for (i, v) in nodes.iter().enumerate() {
            if i > 0 {
                let d = self.steps[i - 1].2;
                f.write_str(if d == Direction::Forward { " -> " } else { " <- " })?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParadoxReport {
    pub f: i64,
    pub c_w_at_f: i64,
    pub c_w_at_f_plus_1: i64,
    /// Negative augmenting path for the worst flow at `f` under `scenario`.
    pub witness: Option<AugmentingPath>,
    /// Componentwise maximum of the two worst scenarios.
    pub scenario: Scenario,
    /// Worst-case optimal flow at `f`.
    pub flow: Flow,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParadoxError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("complete graph on {0} nodes exceeds the limit of {COMPLETE_LIMIT}")]
    TooLarge(usize),
    #[error("cost matrix must be {0}x{0} with nonnegative entries")]
    BadMatrix(usize),
    #[error("source and sink must be distinct nodes of the graph")]
    BadTerminals,
    #[error("flow is not valid: {0}")]
    InvalidFlow(Violation),
    #[error("path is not augmenting for the flow")]
    NotAugmenting,
    #[error("path has nonnegative cost {0}")]
    NonNegativeCost(i64),
}

/// One entry of a worst-value profile: `None` when no scenario admits `f`.
pub type ProfileEntry = (i64, Option<i64>);

fn worst_at(brute: &BruteForce, instance: &Instance) -> Result<Option<WorstResult>, OracleError> {
    match brute.worst_value(instance) {
        Ok(w) => Ok(Some(w)),
        Err(OracleError::AllInfeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `c_w(f)` for `f = 1..=f_max`. Series-parallel instances go through the
/// dynamic program, everything else through enumeration.
pub fn worst_value_profile(
    instance: &Instance,
    f_max: i64,
    brute: &BruteForce,
) -> Result<Vec<ProfileEntry>, ParadoxError> {
    let tree = sp_decompose(instance).ok();
    (1..=f_max)
        .map(|f| {
            let inst = instance.with_flow_amount(f);
            let value = match &tree {
                Some(tree) => match worst_value_with_tree(tree, &inst) {
                    SpOutcome::Worst(c) => Some(c),
                    SpOutcome::Infeasible => None,
                },
                None => worst_at(brute, &inst)?.map(|w| w.c_w),
            };
            Ok((f, value))
        })
        .collect()
}

/// Scans `f = 1, 2, …` below `min(f_max, maxflow(ū))` for the first
/// `c_w(f + 1) < c_w(f)`.
///
/// The witness comes from the worst flows `x^f`, `x^{f+1}`: their difference
/// is a unit s-t flow in the signed support, which is split into cycles
/// (peeled lowest arc id first) and one path. That path is reported when its
/// cost is negative; otherwise the most negative simple s-t path in the
/// support is used, and `None` if there is none.
pub fn detect_paradox(
    instance: &Instance,
    f_max: Option<i64>,
    brute: &BruteForce,
) -> Result<Option<ParadoxReport>, ParadoxError> {
    let mut limit = max_flow_value(instance, &Scenario::upper(instance));
    if let Some(k) = f_max {
        limit = limit.min(k);
    }
    if limit < 2 {
        return Ok(None);
    }
    let mut prev = worst_at(brute, &instance.with_flow_amount(1))?;
    for f in 1..limit {
        let next = worst_at(brute, &instance.with_flow_amount(f + 1))?;
        if let (Some(lo), Some(hi)) = (&prev, &next) {
            if hi.c_w < lo.c_w {
                let scenario = Scenario::new(
                    lo.scenario
                        .capacities
                        .iter()
                        .zip(&hi.scenario.capacities)
                        .map(|(a, b)| *a.max(b))
                        .collect(),
                );
                let diff: Vec<i64> = hi
                    .flow
                    .values
                    .iter()
                    .zip(&lo.flow.values)
                    .map(|(a, b)| a - b)
                    .collect();
                let witness = extract_witness(instance, &diff);
                return Ok(Some(ParadoxReport {
                    f,
                    c_w_at_f: lo.c_w,
                    c_w_at_f_plus_1: hi.c_w,
                    witness,
                    scenario,
                    flow: lo.flow.clone(),
                }));
            }
        }
        prev = next;
    }
    Ok(None)
}

/// Signed support of a difference vector: `(from, to, arc, direction, units)`.
fn signed_support(instance: &Instance, diff: &[i64]) -> Vec<(NodeId, NodeId, ArcId, Direction, i64)> {
    instance
        .arcs
        .iter()
        .filter(|a| diff[a.id] != 0)
        .map(|a| {
            if diff[a.id] > 0 {
                (a.tail, a.head, a.id, Direction::Forward, diff[a.id])
            } else {
                (a.head, a.tail, a.id, Direction::Backward, -diff[a.id])
            }
        })
        .collect()
}

/// A directed cycle among edges with positive units, as edge indices.
fn find_directed_cycle(n: usize, edges: &[(NodeId, NodeId, ArcId, Direction, i64)]) -> Option<Vec<usize>> {
    // edges are already in ascending arc id order
    let mut state = vec![0u8; n + 1];
    for root in 1..=n {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(NodeId, usize)> = vec![(root, 0)];
        let mut via: Vec<usize> = Vec::new();
        state[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let found = (*next..edges.len()).find(|&k| edges[k].0 == v && edges[k].4 > 0);
            match found {
                None => {
                    state[v] = 2;
                    stack.pop();
                    via.pop();
                }
                Some(k) => {
                    *next = k + 1;
                    let w = edges[k].1;
                    if state[w] == 1 {
                        let start = stack.iter().position(|&(u, _)| u == w).unwrap();
                        let mut cycle: Vec<usize> = via[start..].to_vec();
                        cycle.push(k);
                        return Some(cycle);
                    }
                    if state[w] == 0 {
                        state[w] = 1;
                        stack.push((w, 0));
                        via.push(k);
                    }
                }
            }
        }
    }
    None
}

fn extract_witness(instance: &Instance, diff: &[i64]) -> Option<AugmentingPath> {
    let original = signed_support(instance, diff);
    let mut edges = original.clone();
    while let Some(cycle) = find_directed_cycle(instance.num_nodes, &edges) {
        let eps = cycle.iter().map(|&k| edges[k].4).min().unwrap();
        for k in cycle {
            edges[k].4 -= eps;
        }
    }
    // what remains is acyclic and carries one unit from s to t
    let mut steps = Vec::new();
    let mut v = instance.source;
    while v != instance.sink {
        let k = edges.iter().position(|e| e.0 == v && e.4 > 0)?;
        edges[k].4 -= 1;
        steps.push((edges[k].2, edges[k].3));
        v = edges[k].1;
    }
    let path = AugmentingPath { steps };
    if path.signed_cost(instance) < 0 && path.nodes(instance).is_some() {
        return Some(path);
    }
    most_negative_simple_path(instance, &original)
}

fn most_negative_simple_path(
    instance: &Instance,
    edges: &[(NodeId, NodeId, ArcId, Direction, i64)],
) -> Option<AugmentingPath> {
    fn dfs(
        inst: &Instance,
        edges: &[(NodeId, NodeId, ArcId, Direction, i64)],
        v: NodeId,
        seen: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        best: &mut Option<(i64, Vec<usize>)>,
    ) {
        if v == inst.sink {
            let cost: i64 = cur
                .iter()
                .map(|&k| edges[k].3.sign() * inst.arcs[edges[k].2].cost)
                .sum();
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                *best = Some((cost, cur.clone()));
            }
            return;
        }
        for (k, e) in edges.iter().enumerate() {
            if e.0 == v && !seen[e.1] {
                seen[e.1] = true;
                cur.push(k);
                dfs(inst, edges, e.1, seen, cur, best);
                cur.pop();
                seen[e.1] = false;
            }
        }
    }
    let mut seen = vec![false; instance.num_nodes + 1];
    seen[instance.source] = true;
    let mut best = None;
    dfs(
        instance,
        edges,
        instance.source,
        &mut seen,
        &mut Vec::new(),
        &mut best,
    );
    match best {
        Some((cost, ks)) if cost < 0 => Some(AugmentingPath {
            steps: ks.iter().map(|&k| (edges[k].2, edges[k].3)).collect(),
        }),
        _ => None,
    }
}

/// Interval instance that exhibits the paradox between `f` and `f + 1`,
/// built from a size-`f` flow and a negative path augmenting it: every arc
/// gets the interval `[0, max{x^f_e, x^{f+1}_e}]`, where `x^{f+1}` is the
/// flow after pushing one unit along the path.
pub fn construct_paradox_instance(
    skeleton: &Instance,
    flow: &Flow,
    path: &AugmentingPath,
) -> Result<Instance, ParadoxError> {
    let roomy = Scenario::new(
        skeleton
            .arcs
            .iter()
            .map(|a| a.capacity.upper.max(flow.values.get(a.id).copied().unwrap_or(0)) + 1)
            .collect(),
    );
    let relaxed = Instance::new_unchecked(
        skeleton.num_nodes,
        skeleton.source,
        skeleton.sink,
        skeleton.flow_amount,
        &skeleton
            .arcs
            .iter()
            .map(|a| (a.tail, a.head, 0, roomy.capacities[a.id], a.cost))
            .collect::<Vec<_>>(),
    );
    validate_flow(&relaxed, &roomy, flow).map_err(ParadoxError::InvalidFlow)?;
    if !path.is_augmenting(&relaxed, &roomy, flow) {
        return Err(ParadoxError::NotAugmenting);
    }
    let cost = path.signed_cost(skeleton);
    if cost >= 0 {
        return Err(ParadoxError::NonNegativeCost(cost));
    }
    let next = path.push(flow);
    let arcs: Vec<_> = skeleton
        .arcs
        .iter()
        .map(|a| (a.tail, a.head, 0, flow.values[a.id].max(next[a.id]), a.cost))
        .collect();
    Ok(Instance::new_unchecked(
        skeleton.num_nodes,
        skeleton.source,
        skeleton.sink,
        skeleton.flow_amount,
        &arcs,
    ))
}

fn check_complete(n: usize, costs: &[Vec<i64>], s: NodeId, t: NodeId) -> Result<(), ParadoxError> {
    if n > COMPLETE_LIMIT {
        return Err(ParadoxError::TooLarge(n));
    }
    if n < 2 || costs.len() != n || costs.iter().any(|r| r.len() != n || r.iter().any(|&c| c < 0)) {
        return Err(ParadoxError::BadMatrix(n));
    }
    if s == t || !(1..=n).contains(&s) || !(1..=n).contains(&t) {
        return Err(ParadoxError::BadTerminals);
    }
    Ok(())
}

/// Most negative improving path in the complete digraph on `n` nodes.
///
/// It suffices to consider paths `s → i`, then backward along a directed
/// path from `j` to `i` through intermediate nodes, then `j → t`; their cost
/// is `c_si − ldp(i, j) + c_jt` with `ldp` the longest directed `j`-`i`
/// path, found by dynamic programming over subsets of intermediate nodes.
/// `i = j` gives the forward path `s → i → t`; the direct arc `s → t` is
/// considered last. Ties keep the first candidate in `(i, j)` order.
pub fn most_negative_improving_path_complete(
    n: usize,
    costs: &[Vec<i64>],
    s: NodeId,
    t: NodeId,
) -> Result<(ImprovingPath, i64), ParadoxError> {
    check_complete(n, costs, s, t)?;
    let c = |i: NodeId, j: NodeId| costs[i - 1][j - 1];
    let mid: Vec<NodeId> = (1..=n).filter(|&v| v != s && v != t).collect();
    let k = mid.len();
    let mut best: Option<(i64, ImprovingPath)> = None;

    for (jj, &j) in mid.iter().enumerate() {
        // dp[mask][v]: longest directed path from j visiting exactly mask, ending at v
        let full = 1usize << k;
        let mut dp = vec![vec![i64::MIN; k]; full];
        let mut parent = vec![vec![usize::MAX; k]; full];
        dp[1 << jj][jj] = 0;
        for mask in 0..full {
            for v in 0..k {
                if dp[mask][v] == i64::MIN {
                    continue;
                }
                for w in 0..k {
                    if mask & (1 << w) != 0 {
                        continue;
                    }
                    let cand = dp[mask][v] + c(mid[v], mid[w]);
                    let nm = mask | (1 << w);
                    if cand > dp[nm][w] {
                        dp[nm][w] = cand;
                        parent[nm][w] = v;
                    }
                }
            }
        }
        for (ii, &i) in mid.iter().enumerate() {
            let mut ldp = i64::MIN;
            let mut arg = 0;
            for (mask, row) in dp.iter().enumerate().take(full) {
                if row[ii] > ldp {
                    ldp = row[ii];
                    arg = mask;
                }
            }
            if ldp == i64::MIN {
                continue;
            }
            let cost = c(s, i) - ldp + c(j, t);
            if best.as_ref().is_some_and(|(b, _)| cost >= *b) {
                continue;
            }
            // directed chain j = v0 → … → vr = i
            let mut chain = vec![ii];
            let (mut mask, mut v) = (arg, ii);
            while parent[mask][v] != usize::MAX {
                let p = parent[mask][v];
                mask &= !(1 << v);
                v = p;
                chain.push(v);
            }
            // chain now runs i … j
            let mut steps = vec![(s, i, Direction::Forward)];
            for w in chain.windows(2) {
                steps.push((mid[w[0]], mid[w[1]], Direction::Backward));
            }
            steps.push((j, t, Direction::Forward));
            best = Some((cost, ImprovingPath { steps }));
        }
    }
    let direct = c(s, t);
    if best.as_ref().is_none_or(|(b, _)| direct < *b) {
        best = Some((
            direct,
            ImprovingPath {
                steps: vec![(s, t, Direction::Forward)],
            },
        ));
    }
    let (cost, path) = best.expect("direct arc always exists");
    Ok((path, cost))
}

/// No interval capacities on the complete digraph with these costs produce
/// the paradox, which holds exactly when no improving path has negative cost.
pub fn is_immune(n: usize, costs: &[Vec<i64>], s: NodeId, t: NodeId) -> Result<bool, ParadoxError> {
    most_negative_improving_path_complete(n, costs, s, t).map(|(_, c)| c >= 0)
}

/// Complete-digraph instance exhibiting the paradox for a negative improving
/// path. Each backward arc `(a, b)` of the path carries one unit along
/// `s → a → b → t`, giving the flow amount; one more unit fits only along the
/// path itself. Arcs used by these routes get `[0, 1]`, all others `[0, 0]`.
pub fn paradox_from_improving_path(
    n: usize,
    costs: &[Vec<i64>],
    s: NodeId,
    t: NodeId,
    path: &ImprovingPath,
) -> Result<Instance, ParadoxError> {
    check_complete(n, costs, s, t)?;
    let cost = path.signed_cost(costs);
    if cost >= 0 {
        return Err(ParadoxError::NonNegativeCost(cost));
    }
    let mut used = vec![vec![false; n + 1]; n + 1];
    let mut f = 0;
    for (a, b, d) in path.arcs() {
        used[a][b] = true;
        if d == Direction::Backward {
            used[s][a] = true;
            used[b][t] = true;
            f += 1;
        }
    }
    Ok(complete_instance(n, s, t, f, |i, j| {
        (0, i64::from(used[i][j]), costs[i - 1][j - 1])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_paradox_complex, gen_paradox_simple};
    use crate::model::validate_instance;

    fn brute() -> BruteForce {
        BruteForce::default()
    }

    fn matrix(n: usize, v: i64) -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0 } else { v }).collect())
            .collect()
    }

    #[test]
    fn profiles() {
        let simple = gen_paradox_simple();
        assert_eq!(
            worst_value_profile(&simple, 2, &brute()).unwrap(),
            vec![(1, Some(12)), (2, Some(4))]
        );
        let complex = gen_paradox_complex();
        assert_eq!(
            worst_value_profile(&complex, 2, &brute()).unwrap(),
            vec![(1, Some(29)), (2, Some(27))]
        );
        let single = Instance::new(2, 1, 2, 1, &[(1, 2, 0, 5, 2)]).unwrap();
        let p = worst_value_profile(&single, 6, &brute()).unwrap();
        assert_eq!(
            p,
            vec![
                (1, Some(2)),
                (2, Some(4)),
                (3, Some(6)),
                (4, Some(8)),
                (5, Some(10)),
                (6, None)
            ]
        );
    }

    #[test]
    fn simple_example_paradox_and_witness() {
        let inst = gen_paradox_simple();
        let r = detect_paradox(&inst, None, &brute()).unwrap().unwrap();
        assert_eq!((r.f, r.c_w_at_f, r.c_w_at_f_plus_1), (1, 12, 4));
        let w = r.witness.unwrap();
        assert_eq!(
            w.steps,
            vec![
                (4, Direction::Forward),
                (1, Direction::Backward),
                (3, Direction::Forward)
            ]
        );
        assert_eq!(w.signed_cost(&inst), -8);
        assert_eq!(w.nodes(&inst), Some(vec![1, 3, 2, 4]));
        assert!(w.is_augmenting(&inst, &r.scenario, &r.flow));
        assert_eq!(w.to_string(), "+4 -1 +3");
    }

    #[test]
    fn complex_example_paradox() {
        let inst = gen_paradox_complex();
        let r = detect_paradox(&inst, None, &brute()).unwrap().unwrap();
        assert_eq!((r.f, r.c_w_at_f, r.c_w_at_f_plus_1), (1, 29, 27));
        let w = r.witness.unwrap();
        assert!(w.signed_cost(&inst) < 0);
        assert!(w.is_augmenting(&inst, &r.scenario, &r.flow));
    }

    #[test]
    fn monotone_instance_has_no_paradox() {
        let single = Instance::new(2, 1, 2, 1, &[(1, 2, 0, 5, 2)]).unwrap();
        assert_eq!(detect_paradox(&single, None, &brute()).unwrap(), None);
    }

    #[test]
    fn construct_from_example_flow() {
        let inst = gen_paradox_simple();
        let flow = Flow::from_values(&inst, vec![1, 1, 1, 0, 0]);
        let path = AugmentingPath {
            steps: vec![
                (4, Direction::Forward),
                (1, Direction::Backward),
                (3, Direction::Forward),
            ],
        };
        let built = construct_paradox_instance(&inst, &flow, &path).unwrap();
        assert_eq!(validate_instance(&built), Ok(()));
        let uppers: Vec<i64> = built.arcs.iter().map(|a| a.capacity.upper).collect();
        assert_eq!(uppers, vec![1, 1, 1, 1, 1]);
        let r = detect_paradox(&built, None, &brute()).unwrap().unwrap();
        assert_eq!(r.f, 1);

        let positive = AugmentingPath {
            steps: vec![(0, Direction::Forward), (3, Direction::Forward)],
        };
        assert_eq!(
            construct_paradox_instance(&inst, &flow, &positive),
            Err(ParadoxError::NonNegativeCost(2))
        );
        let not_aug = AugmentingPath {
            steps: vec![
                (0, Direction::Forward),
                (1, Direction::Forward),
                (4, Direction::Backward),
                (3, Direction::Forward),
            ],
        };
        assert_eq!(
            construct_paradox_instance(&inst, &flow, &not_aug),
            Err(ParadoxError::NotAugmenting)
        );
    }

    #[test]
    fn improving_paths_on_small_complete_graphs() {
        let ones = matrix(4, 1);
        let (p, c) = most_negative_improving_path_complete(4, &ones, 1, 4).unwrap();
        assert_eq!(c, 1);
        assert_eq!(p.signed_cost(&ones), 1);
        assert!(is_immune(4, &ones, 1, 4).unwrap());

        let mut bumped = ones.clone();
        bumped[2][1] = 5; // arc (3, 2)
        let (p, c) = most_negative_improving_path_complete(4, &bumped, 1, 4).unwrap();
        assert_eq!(c, -3);
        assert_eq!(
            p.steps,
            vec![
                (1, 2, Direction::Forward),
                (2, 3, Direction::Backward),
                (3, 4, Direction::Forward)
            ]
        );
        assert_eq!(p.to_string(), "1 -> 2 <- 3 -> 4");
        assert!(!is_immune(4, &bumped, 1, 4).unwrap());

        assert!(is_immune(5, &matrix(5, 0), 1, 5).unwrap());
    }

    #[test]
    fn three_nodes_only_forward_routes() {
        let costs = vec![vec![0, 2, 9], vec![4, 0, 3], vec![1, 1, 0]];
        let (p, c) = most_negative_improving_path_complete(3, &costs, 1, 3).unwrap();
        assert_eq!(c, 5);
        assert!(p.steps.iter().all(|s| s.2 == Direction::Forward));
        let cheap_direct = vec![vec![0, 2, 1], vec![4, 0, 3], vec![1, 1, 0]];
        let (p, c) = most_negative_improving_path_complete(3, &cheap_direct, 1, 3).unwrap();
        assert_eq!((p.steps.len(), c), (1, 1));
    }

    #[test]
    fn complete_graph_argument_checks() {
        let big = matrix(COMPLETE_LIMIT + 1, 1);
        assert_eq!(
            is_immune(COMPLETE_LIMIT + 1, &big, 1, 2),
            Err(ParadoxError::TooLarge(COMPLETE_LIMIT + 1))
        );
        assert_eq!(is_immune(4, &matrix(3, 1), 1, 4), Err(ParadoxError::BadMatrix(4)));
        assert_eq!(is_immune(4, &matrix(4, 1), 2, 2), Err(ParadoxError::BadTerminals));
    }

    #[test]
    fn recipe_instance_shows_paradox() {
        let mut costs = matrix(4, 1);
        costs[2][1] = 5;
        let (p, _) = most_negative_improving_path_complete(4, &costs, 1, 4).unwrap();
        let inst = paradox_from_improving_path(4, &costs, 1, 4, &p).unwrap();
        assert_eq!(inst.flow_amount, 1);
        assert_eq!(validate_instance(&inst), Ok(()));
        let r = detect_paradox(&inst, None, &brute()).unwrap().unwrap();
        assert_eq!((r.f, r.c_w_at_f, r.c_w_at_f_plus_1), (1, 7, 4));
    }
}
