//! Pseudopolynomial worst-value computation on two-terminal series-parallel
//! networks.
//!
//! Every component of the decomposition carries a [`ComponentData`] table:
//! the worst optimal cost of pushing each amount `0..=f` through it, the
//! largest amount it carries under every scenario (`r_lo`), and the largest
//! amount it carries under some scenario (`r_hi`). Leaves are built
//! directly; serial and parallel compositions combine child tables in
//! `O(f)` and `O(f²)` time, for `O(m f²)` overall.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::{Arc, ArcId, Instance, NodeId};

/// Binary decomposition tree of a two-terminal series-parallel network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpTree {
    Leaf {
        arc: ArcId,
        source: NodeId,
        sink: NodeId,
    },
    /// `left.sink` is merged with `right.source`.
    Serial {
        left: Box<SpTree>,
        right: Box<SpTree>,
        source: NodeId,
        sink: NodeId,
    },
    /// Sources and sinks of both children are merged pairwise.
    Parallel {
        left: Box<SpTree>,
        right: Box<SpTree>,
        source: NodeId,
        sink: NodeId,
    },
}

impl SpTree {
    pub fn source(&self) -> NodeId {
        match self {
            SpTree::Leaf { source, .. } | SpTree::Serial { source, .. } | SpTree::Parallel { source, .. } => {
                *source
            }
        }
    }

    pub fn sink(&self) -> NodeId {
        match self {
            SpTree::Leaf { sink, .. } | SpTree::Serial { sink, .. } | SpTree::Parallel { sink, .. } => *sink,
        }
    }

    /// Arc ids of the leaves, left to right.
    pub fn leaves(&self) -> Vec<ArcId> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<ArcId>) {
        match self {
            SpTree::Leaf { arc, .. } => out.push(*arc),
            SpTree::Serial { left, right, .. } | SpTree::Parallel { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    fn serial(left: SpTree, right: SpTree) -> SpTree {
        SpTree::Serial {
            source: left.source(),
            sink: right.sink(),
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    fn parallel(left: SpTree, right: SpTree) -> SpTree {
        SpTree::Parallel {
            source: left.source(),
            sink: left.sink(),
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

/// Renders the tree in the `S(T,T)` / `P(T,T)` / `<arc_id>` grammar.
impl fmt::Display for SpTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpTree::Leaf { arc, .. } => write!(f, "{arc}"),
            SpTree::Serial { left, right, .. } => write!(f, "S({left},{right})"),
            SpTree::Parallel { left, right, .. } => write!(f, "P({left},{right})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpError {
    #[error("not series-parallel")]
    NotSeriesParallel,
    #[error("instance is disconnected")]
    Disconnected,
    #[error("invalid decomposition tree: {0}")]
    InvalidTree(String),
}

fn invalid(msg: impl Into<String>) -> SpError {
    SpError::InvalidTree(msg.into())
}

/// Recognizes a two-terminal series-parallel network by repeated reduction.
///
/// Parallel bundles (same tail and head) are merged and nodes other than the
/// terminals with exactly one incoming and one outgoing arc are contracted,
/// lowest ids first, until a single source-to-sink arc remains. Arcs keep
/// their direction; a component must carry flow from its source to its sink.
pub fn sp_decompose(instance: &Instance) -> Result<SpTree, SpError> {
    if !is_connected(instance) {
        return Err(SpError::Disconnected);
    }
    let (s, t) = (instance.source, instance.sink);
    let mut edges: Vec<Option<SpTree>> = instance
        .arcs
        .iter()
        .map(|a| {
            Some(SpTree::Leaf {
                arc: a.id,
                source: a.tail,
                sink: a.head,
            })
        })
        .collect();

    loop {
        let live: Vec<usize> = (0..edges.len()).filter(|&k| edges[k].is_some()).collect();
        if live.len() == 1 {
            let tree = edges[live[0]].take().unwrap();
            return if tree.source() == s && tree.sink() == t {
                Ok(tree)
            } else {
                Err(SpError::NotSeriesParallel)
            };
        }
        if let Some((a, b)) = find_parallel_pair(&edges, &live) {
            let right = edges[b].take().unwrap();
            let left = edges[a].take().unwrap();
            edges[a] = Some(SpTree::parallel(left, right));
            continue;
        }
        if let Some((a, b)) = find_series_pair(&edges, &live, instance.num_nodes, s, t) {
            let left = edges[a].take().unwrap();
            let right = edges[b].take().unwrap();
            edges[a.min(b)] = Some(SpTree::serial(left, right));
            continue;
        }
        return Err(SpError::NotSeriesParallel);
    }
}

fn find_parallel_pair(edges: &[Option<SpTree>], live: &[usize]) -> Option<(usize, usize)> {
    for (i, &a) in live.iter().enumerate() {
        let ea = edges[a].as_ref().unwrap();
        for &b in &live[i + 1..] {
            let eb = edges[b].as_ref().unwrap();
            if ea.source() == eb.source() && ea.sink() == eb.sink() {
                return Some((a, b));
            }
        }
    }
    None
}

/// Lowest non-terminal node with exactly one live in-edge and one live
/// out-edge; returns `(in_edge, out_edge)`.
fn find_series_pair(
    edges: &[Option<SpTree>],
    live: &[usize],
    num_nodes: usize,
    s: NodeId,
    t: NodeId,
) -> Option<(usize, usize)> {
    let mut ins: Vec<Vec<usize>> = vec![Vec::new(); num_nodes + 1];
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); num_nodes + 1];
    for &k in live {
        let e = edges[k].as_ref().unwrap();
        outs[e.source()].push(k);
        ins[e.sink()].push(k);
    }
    (1..=num_nodes).filter(|&v| v != s && v != t).find_map(|v| {
        match (ins[v].as_slice(), outs[v].as_slice()) {
            (&[a], &[b]) if edges[a].as_ref().unwrap().source() != edges[b].as_ref().unwrap().sink() => {
                Some((a, b))
            }
            _ => None,
        }
    })
}

fn is_connected(instance: &Instance) -> bool {
    let n = instance.num_nodes;
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for a in &instance.arcs {
        let (x, y) = (find(&mut parent, a.tail), find(&mut parent, a.head));
        parent[x] = y;
    }
    let root = find(&mut parent, 1);
    (2..=n).all(|v| find(&mut parent, v) == root)
}

/// Parses a caller-supplied decomposition such as `P(S(0,1),2)` and checks
/// that it describes `instance`.
pub fn parse_sp_tree(text: &str, instance: &Instance) -> Result<SpTree, SpError> {
    let bytes: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    let mut pos = 0;
    let tree = parse_node(&bytes, &mut pos, instance)?;
    if pos != bytes.len() {
        return Err(invalid(format!("trailing input at offset {pos}")));
    }
    check_tree(&tree, instance)?;
    Ok(tree)
}

fn parse_node(b: &[u8], pos: &mut usize, instance: &Instance) -> Result<SpTree, SpError> {
    match b.get(*pos) {
        Some(&op @ (b'S' | b'P')) => {
            *pos += 1;
            expect(b, pos, b'(')?;
            let left = parse_node(b, pos, instance)?;
            expect(b, pos, b',')?;
            let right = parse_node(b, pos, instance)?;
            expect(b, pos, b')')?;
            if op == b'S' {
                if left.sink() != right.source() {
                    return Err(invalid(format!(
                        "serial composition joins node {} to node {}",
                        left.sink(),
                        right.source()
                    )));
                }
                Ok(SpTree::serial(left, right))
            } else {
                if left.source() != right.source() || left.sink() != right.sink() {
                    return Err(invalid(
                        "parallel composition of components with different terminals",
                    ));
                }
                Ok(SpTree::parallel(left, right))
            }
        }
        Some(c) if c.is_ascii_digit() => {
            let start = *pos;
            while b.get(*pos).is_some_and(u8::is_ascii_digit) {
                *pos += 1;
            }
            let id: usize = std::str::from_utf8(&b[start..*pos])
                .unwrap()
                .parse()
                .map_err(|_| invalid("arc id too large"))?;
            let arc = instance
                .arcs
                .get(id)
                .ok_or_else(|| invalid(format!("arc {id} does not exist")))?;
            Ok(SpTree::Leaf {
                arc: id,
                source: arc.tail,
                sink: arc.head,
            })
        }
        _ => Err(invalid(format!("unexpected input at offset {}", *pos))),
    }
}

fn expect(b: &[u8], pos: &mut usize, c: u8) -> Result<(), SpError> {
    if b.get(*pos) == Some(&c) {
        *pos += 1;
        Ok(())
    } else {
        Err(invalid(format!("expected '{}' at offset {}", c as char, *pos)))
    }
}

/// Validates a decomposition against the instance: leaves are exactly the
/// arcs, the root spans source to sink, and every node merged by a serial
/// composition touches only arcs inside that composition.
pub fn check_tree(tree: &SpTree, instance: &Instance) -> Result<(), SpError> {
    let leaves = tree.leaves();
    let set: BTreeSet<ArcId> = leaves.iter().copied().collect();
    if set.len() != leaves.len() || set.len() != instance.num_arcs() {
        return Err(invalid("leaves must list every arc exactly once"));
    }
    if tree.source() != instance.source || tree.sink() != instance.sink {
        return Err(invalid("root terminals differ from the instance source and sink"));
    }
    check_inner(tree, instance)
}

fn check_inner(tree: &SpTree, instance: &Instance) -> Result<(), SpError> {
    match tree {
        SpTree::Leaf { .. } => Ok(()),
        SpTree::Parallel { left, right, .. } => {
            check_inner(left, instance)?;
            check_inner(right, instance)
        }
        SpTree::Serial { left, right, .. } => {
            check_inner(left, instance)?;
            check_inner(right, instance)?;
            let mid = left.sink();
            let inside: BTreeSet<ArcId> = tree.leaves().into_iter().collect();
            let leaks = instance
                .arcs
                .iter()
                .any(|a| (a.tail == mid || a.head == mid) && !inside.contains(&a.id));
            if leaks || mid == instance.source || mid == instance.sink || tree.source() == tree.sink() {
                return Err(invalid(format!(
                    "node {mid} is not internal to its serial composition"
                )));
            }
            Ok(())
        }
    }
}

/// Per-component dynamic programming state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentData {
    /// `costs[k]` is the worst optimal cost of sending `k` units through the
    /// component; `None` stands for `−∞` (amount not transportable).
    pub costs: Vec<Option<i64>>,
    /// Largest amount transportable under every scenario, capped at `f`.
    pub r_lo: i64,
    /// Largest amount transportable under some scenario, capped at `f`.
    pub r_hi: i64,
}

impl ComponentData {
    pub fn f(&self) -> i64 {
        self.costs.len() as i64 - 1
    }

    pub fn at(&self, amount: i64) -> Option<i64> {
        self.costs[amount as usize]
    }

    /// Checks the table invariants; returns a description of the first
    /// failure.
    pub fn check(&self) -> Result<(), String> {
        if self.costs.first() != Some(&Some(0)) {
            return Err("d(0) must be 0".into());
        }
        if self.r_lo > self.r_hi {
            return Err(format!("r_lo {} exceeds r_hi {}", self.r_lo, self.r_hi));
        }
        let last_finite = self.costs.iter().rposition(Option::is_some).unwrap() as i64;
        if last_finite != self.r_hi {
            return Err(format!("r_hi {} but d finite up to {last_finite}", self.r_hi));
        }
        if self.costs[..=self.r_hi as usize].iter().any(Option::is_none) {
            return Err("d has a gap below r_hi".into());
        }
        Ok(())
    }
}

pub fn leaf_table(arc: &Arc, f: i64) -> ComponentData {
    let r_hi = arc.capacity.upper.min(f);
    let costs = (0..=f).map(|k| (k <= r_hi).then_some(arc.cost * k)).collect();
    ComponentData {
        costs,
        r_lo: arc.capacity.lower.min(f),
        r_hi,
    }
}

pub fn serial_table(left: &ComponentData, right: &ComponentData, f: i64) -> ComponentData {
    let costs = (0..=f as usize)
        .map(|k| Some(left.costs[k]? + right.costs[k]?))
        .collect();
    ComponentData {
        costs,
        r_lo: left.r_lo.min(right.r_lo),
        r_hi: left.r_hi.min(right.r_hi),
    }
}

pub fn parallel_table(left: &ComponentData, right: &ComponentData, f: i64) -> ComponentData {
    parallel_table_counted(left, right, f, &mut 0)
}

/// Parallel rule; `steps` accumulates the number of split points examined.
fn parallel_table_counted(
    left: &ComponentData,
    right: &ComponentData,
    f: i64,
    steps: &mut u64,
) -> ComponentData {
    let (lo1, hi1, lo2, hi2) = (left.r_lo, left.r_hi, right.r_lo, right.r_hi);
    let split = |k: i64, f1: i64| Some(left.at(f1)? + right.at(k - f1)?);
    let costs = (0..=f)
        .map(|k| {
            if hi1 + hi2 < k {
                None
            } else if lo1 + lo2 > k {
                // Both parts stay below their restrictable amounts: the flow
                // is routed at lower-bound capacities, so the cheapest split wins.
                let range = (k - lo2).max(0)..=lo1.min(k);
                *steps += range.clone().count() as u64;
                range.filter_map(|f1| split(k, f1)).min()
            } else {
                let range = lo1.max(k - hi2)..=(k - lo2).min(hi1);
                *steps += range.clone().count() as u64;
                range.filter_map(|f1| split(k, f1)).max()
            }
        })
        .collect();
    ComponentData {
        costs,
        r_lo: (lo1 + lo2).min(f),
        r_hi: (hi1 + hi2).min(f),
    }
}

/// Outcome of the series-parallel computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpOutcome {
    Worst(i64),
    Infeasible,
}

/// Counters collected while evaluating a decomposition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    pub leaves: usize,
    pub serial: usize,
    pub parallel: usize,
    /// Split points examined by all parallel compositions.
    pub parallel_steps: u64,
}

/// Bottom-up evaluation of the tables along `tree`.
pub fn evaluate(tree: &SpTree, instance: &Instance, stats: &mut DpStats) -> ComponentData {
    let f = instance.flow_amount;
    match tree {
        SpTree::Leaf { arc, .. } => {
            stats.leaves += 1;
            leaf_table(&instance.arcs[*arc], f)
        }
        SpTree::Serial { left, right, .. } => {
            let l = evaluate(left, instance, stats);
            let r = evaluate(right, instance, stats);
            stats.serial += 1;
            serial_table(&l, &r, f)
        }
        SpTree::Parallel { left, right, .. } => {
            let l = evaluate(left, instance, stats);
            let r = evaluate(right, instance, stats);
            stats.parallel += 1;
            parallel_table_counted(&l, &r, f, &mut stats.parallel_steps)
        }
    }
}

pub fn worst_value_with_tree(tree: &SpTree, instance: &Instance) -> SpOutcome {
    let root = evaluate(tree, instance, &mut DpStats::default());
    match root.at(instance.flow_amount) {
        Some(v) => SpOutcome::Worst(v),
        None => SpOutcome::Infeasible,
    }
}

/// `c_w` on a series-parallel instance in `O(m f²)` time.
pub fn worst_value_sp(instance: &Instance) -> Result<SpOutcome, SpError> {
    let tree = sp_decompose(instance)?;
    Ok(worst_value_with_tree(&tree, instance))
}
