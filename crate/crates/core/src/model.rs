//! Domain types shared by every analysis: instances with interval arc
//! capacities, and the scenarios and flows that live inside them.
//!
//! Nodes are labeled `1..=n`. Arcs are addressed by their dense id, which is
//! also their position in [`Instance::arcs`]; parallel and antiparallel arcs
//! are distinct arcs.

use std::fmt;

/// Node label, `1..=num_nodes`.
pub type NodeId = usize;

/// Dense arc index, `0..num_arcs`.
pub type ArcId = usize;

/// Closed integer interval `[lower, upper]` of admissible capacities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntervalCapacity {
    pub lower: i64,
    pub upper: i64,
}

impl IntervalCapacity {
    pub fn new(lower: i64, upper: i64) -> Self {
        IntervalCapacity { lower, upper }
    }

    /// A degenerate interval `[value, value]`.
    pub fn crisp(value: i64) -> Self {
        IntervalCapacity {
            lower: value,
            upper: value,
        }
    }

    pub fn contains(&self, value: i64) -> bool {
        self.lower <= value && value <= self.upper
    }

    /// `value` lies strictly between the bounds.
    pub fn is_interior(&self, value: i64) -> bool {
        self.lower < value && value < self.upper
    }

    /// Number of integer points in the interval.
    pub fn width(&self) -> u128 {
        (self.upper - self.lower + 1).max(0) as u128
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub id: ArcId,
    pub tail: NodeId,
    pub head: NodeId,
    /// Cost per unit of flow.
    pub cost: i64,
    pub capacity: IntervalCapacity,
}

/// A single-commodity s-t minimum cost flow instance with interval capacities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    pub num_nodes: usize,
    pub arcs: Vec<Arc>,
    pub source: NodeId,
    pub sink: NodeId,
    /// Requested flow amount `f`.
    pub flow_amount: i64,
}

/// Arc description used to build instances: `(tail, head, lower, upper, cost)`.
pub type ArcSpec = (NodeId, NodeId, i64, i64, i64);

impl Instance {
    /// Builds an instance, assigning arc ids in slice order, and validates it.
    pub fn new(
        num_nodes: usize,
        source: NodeId,
        sink: NodeId,
        flow_amount: i64,
        arcs: &[ArcSpec],
    ) -> Result<Self, Violation> {
        let instance = Self::new_unchecked(num_nodes, source, sink, flow_amount, arcs);
        validate_instance(&instance)?;
        Ok(instance)
    }

    /// Same as [`Instance::new`] without validation.
    pub fn new_unchecked(
        num_nodes: usize,
        source: NodeId,
        sink: NodeId,
        flow_amount: i64,
        arcs: &[ArcSpec],
    ) -> Self {
        let arcs = arcs
            .iter()
            .enumerate()
            .map(|(id, &(tail, head, lower, upper, cost))| Arc {
                id,
                tail,
                head,
                cost,
                capacity: IntervalCapacity::new(lower, upper),
            })
            .collect();
        Instance {
            num_nodes,
            arcs,
            source,
            sink,
            flow_amount,
        }
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// Copy of the instance with a different requested flow amount.
    pub fn with_flow_amount(&self, flow_amount: i64) -> Self {
        Instance {
            flow_amount,
            ..self.clone()
        }
    }

    /// Number of integral scenarios in the capacity box.
    pub fn scenario_count(&self) -> u128 {
        self.arcs
            .iter()
            .try_fold(1u128, |acc, a| acc.checked_mul(a.capacity.width()))
            .unwrap_or(u128::MAX)
    }

    pub fn total_cost(&self) -> i64 {
        self.arcs.iter().map(|a| a.cost).sum()
    }
}

/// One capacity per arc, indexed by arc id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scenario {
    pub capacities: Vec<i64>,
}

impl Scenario {
    pub fn new(capacities: Vec<i64>) -> Self {
        Scenario { capacities }
    }

    /// The scenario `u̲` with every arc at its lower bound.
    pub fn lower(instance: &Instance) -> Self {
        Scenario::new(instance.arcs.iter().map(|a| a.capacity.lower).collect())
    }

    /// The scenario `ū` with every arc at its upper bound.
    pub fn upper(instance: &Instance) -> Self {
        Scenario::new(instance.arcs.iter().map(|a| a.capacity.upper).collect())
    }

    pub fn validate(&self, instance: &Instance) -> Result<(), Violation> {
        if self.capacities.len() != instance.num_arcs() {
            return Err(Violation::ArcCountMismatch {
                expected: instance.num_arcs(),
                found: self.capacities.len(),
            });
        }
        for (arc, &u) in instance.arcs.iter().zip(&self.capacities) {
            if !arc.capacity.contains(u) {
                return Err(Violation::OutOfInterval {
                    arc: arc.id,
                    value: u,
                });
            }
        }
        Ok(())
    }
}

/// One flow value per arc together with the total cost it was computed with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flow {
    pub values: Vec<i64>,
    pub total_cost: i64,
}

impl Flow {
    /// Builds a flow and computes its total cost from the instance costs.
    pub fn from_values(instance: &Instance, values: Vec<i64>) -> Self {
        let total_cost = flow_cost(instance, &values);
        Flow { values, total_cost }
    }

    pub fn zero(instance: &Instance) -> Self {
        Flow {
            values: vec![0; instance.num_arcs()],
            total_cost: 0,
        }
    }

    /// Net outflow at `node`.
    pub fn net_outflow(&self, instance: &Instance, node: NodeId) -> i64 {
        instance
            .arcs
            .iter()
            .map(|a| {
                let x = self.values[a.id];
                (if a.tail == node { x } else { 0 }) - (if a.head == node { x } else { 0 })
            })
            .sum()
    }
}

pub fn flow_cost(instance: &Instance, values: &[i64]) -> i64 {
    instance.arcs.iter().zip(values).map(|(a, &x)| a.cost * x).sum()
}

/// The first invariant an instance, scenario or flow breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoNodes,
    SourceEqualsSink,
    NodeOutOfRange { node: NodeId },
    NegativeFlowAmount,
    ArcIdMismatch { position: usize, id: ArcId },
    SelfLoop { arc: ArcId },
    ArcEndpointOutOfRange { arc: ArcId, node: NodeId },
    NegativeCost { arc: ArcId },
    NegativeBound { arc: ArcId },
    CrossedBounds { arc: ArcId },
    IsolatedNode { node: NodeId },
    ArcCountMismatch { expected: usize, found: usize },
    OutOfInterval { arc: ArcId, value: i64 },
    NegativeFlow { arc: ArcId },
    Capacity { arc: ArcId, value: i64, capacity: i64 },
    SourceBalance { net: i64, expected: i64 },
    SinkBalance { net: i64, expected: i64 },
    NodeBalance { node: NodeId, net: i64 },
    CostMismatch { stored: i64, computed: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            NoNodes => write!(f, "instance has no nodes"),
            SourceEqualsSink => write!(f, "source equals sink"),
            NodeOutOfRange { node } => write!(f, "terminal node {node} out of range"),
            NegativeFlowAmount => write!(f, "negative flow amount"),
            ArcIdMismatch { position, id } => {
                write!(f, "arc at position {position} carries id {id}")
            }
            SelfLoop { arc } => write!(f, "self-loop on arc {arc}"),
            ArcEndpointOutOfRange { arc, node } => {
                write!(f, "arc {arc} endpoint {node} out of range")
            }
            NegativeCost { arc } => write!(f, "negative cost on arc {arc}"),
            NegativeBound { arc } => write!(f, "negative capacity bound on arc {arc}"),
            CrossedBounds { arc } => write!(f, "interval bounds crossed on arc {arc}"),
            IsolatedNode { node } => write!(f, "node {node} is not incident to any arc"),
            ArcCountMismatch { expected, found } => {
                write!(f, "arc count mismatch: expected {expected}, found {found}")
            }
            OutOfInterval { arc, value } => {
                write!(f, "capacity {value} on arc {arc} out of interval")
            }
            NegativeFlow { arc } => write!(f, "negative flow on arc {arc}"),
            Capacity { arc, value, capacity } => {
                write!(f, "capacity exceeded on arc {arc}: {value} > {capacity}")
            }
            SourceBalance { net, expected } => {
                write!(f, "source balance: net outflow {net}, expected {expected}")
            }
            SinkBalance { net, expected } => {
                write!(f, "sink balance: net outflow {net}, expected {expected}")
            }
            NodeBalance { node, net } => {
                write!(f, "node balance violated at node {node}: net outflow {net}")
            }
            CostMismatch { stored, computed } => {
                write!(f, "total cost {stored} differs from recomputed {computed}")
            }
        }
    }
}

impl std::error::Error for Violation {}

/// Checks every instance invariant and reports the first one violated.
///
/// A requested flow of zero is accepted; every analysis treats it as the
/// trivial problem with worst optimal value 0.
pub fn validate_instance(instance: &Instance) -> Result<(), Violation> {
    let n = instance.num_nodes;
    if n == 0 {
        return Err(Violation::NoNodes);
    }
    for node in [instance.source, instance.sink] {
        if node == 0 || node > n {
            return Err(Violation::NodeOutOfRange { node });
        }
    }
    if instance.source == instance.sink {
        return Err(Violation::SourceEqualsSink);
    }
    if instance.flow_amount < 0 {
        return Err(Violation::NegativeFlowAmount);
    }
    let mut incident = vec![false; n + 1];
    for (position, arc) in instance.arcs.iter().enumerate() {
        if arc.id != position {
            return Err(Violation::ArcIdMismatch { position, id: arc.id });
        }
        for node in [arc.tail, arc.head] {
            if node == 0 || node > n {
                return Err(Violation::ArcEndpointOutOfRange { arc: arc.id, node });
            }
        }
        if arc.tail == arc.head {
            return Err(Violation::SelfLoop { arc: arc.id });
        }
        if arc.cost < 0 {
            return Err(Violation::NegativeCost { arc: arc.id });
        }
        if arc.capacity.lower < 0 || arc.capacity.upper < 0 {
            return Err(Violation::NegativeBound { arc: arc.id });
        }
        if arc.capacity.lower > arc.capacity.upper {
            return Err(Violation::CrossedBounds { arc: arc.id });
        }
        incident[arc.tail] = true;
        incident[arc.head] = true;
    }
    if let Some(node) = (1..=n).find(|&v| !incident[v]) {
        return Err(Violation::IsolatedNode { node });
    }
    Ok(())
}

/// Checks balance, capacity bounds and the stored total cost of `flow`.
pub fn validate_flow(instance: &Instance, scenario: &Scenario, flow: &Flow) -> Result<(), Violation> {
    let m = instance.num_arcs();
    for len in [scenario.capacities.len(), flow.values.len()] {
        if len != m {
            return Err(Violation::ArcCountMismatch {
                expected: m,
                found: len,
            });
        }
    }
    for arc in &instance.arcs {
        let x = flow.values[arc.id];
        let u = scenario.capacities[arc.id];
        if x < 0 {
            return Err(Violation::NegativeFlow { arc: arc.id });
        }
        if x > u {
            return Err(Violation::Capacity {
                arc: arc.id,
                value: x,
                capacity: u,
            });
        }
    }
    let mut net = vec![0i64; instance.num_nodes + 1];
    for arc in &instance.arcs {
        net[arc.tail] += flow.values[arc.id];
        net[arc.head] -= flow.values[arc.id];
    }
    let f = instance.flow_amount;
    if net[instance.source] != f {
        return Err(Violation::SourceBalance {
            net: net[instance.source],
            expected: f,
        });
    }
    if net[instance.sink] != -f {
        return Err(Violation::SinkBalance {
            net: net[instance.sink],
            expected: -f,
        });
    }
    for (node, &v) in net.iter().enumerate().skip(1) {
        if node != instance.source && node != instance.sink && v != 0 {
            return Err(Violation::NodeBalance { node, net: v });
        }
    }
    let computed = flow_cost(instance, &flow.values);
    if computed != flow.total_cost {
        return Err(Violation::CostMismatch {
            stored: flow.total_cost,
            computed,
        });
    }
    Ok(())
}
