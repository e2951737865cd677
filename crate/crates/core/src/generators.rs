//! Constructors for the named instance families and seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{ArcSpec, Instance};

/// Largest complete graph the generators and the improving-path search accept.
pub const COMPLETE_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid knapsack data: {0}")]
    Knapsack(&'static str),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
}

/// A 0/1 knapsack: maximize `Σ values_i y_i` subject to `Σ weights_i y_i ≤ capacity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackData {
    pub capacity: i64,
    pub weights: Vec<i64>,
    pub values: Vec<i64>,
}

impl KnapsackData {
    pub fn new(capacity: i64, weights: Vec<i64>, values: Vec<i64>) -> Result<Self, GenError> {
        if weights.len() != values.len() {
            return Err(GenError::Knapsack("weights and values differ in length"));
        }
        if weights.is_empty() {
            return Err(GenError::Knapsack("no items"));
        }
        if weights.iter().chain(&values).any(|&v| v < 1) {
            return Err(GenError::Knapsack("weights and values must be positive"));
        }
        if capacity < 0 {
            return Err(GenError::Knapsack("negative capacity"));
        }
        Ok(KnapsackData {
            capacity,
            weights,
            values,
        })
    }
}

/// Flow instance whose worst optimal value equals the knapsack optimum.
///
/// Node 1 is the source, items are nodes `2..=k+1`, the sink is `k+2`, and
/// each item gets one auxiliary node `k+2+i`. Per item, in order:
/// `s→i` with capacity `[0, a_i]` and cost 0, `i→t` with crisp capacity 1
/// and cost `c'_i`, then the zero-cost bypass of capacity `a_i − 1` split as
/// `i→aux` (capacity `a_i − 1`) and `aux→t` (capacity `a_i`), which keeps the
/// graph free of parallel arcs and series-parallel.
/// The requested flow is `min(b, Σ a_i)`.
pub fn gen_knapsack_reduction(k: &KnapsackData) -> Instance {
    let items = k.weights.len();
    let s = 1;
    let t = items + 2;
    let mut arcs: Vec<ArcSpec> = Vec::with_capacity(4 * items);
    for (i, (&a, &c)) in k.weights.iter().zip(&k.values).enumerate() {
        let node = i + 2;
        let aux = items + 3 + i;
        arcs.push((s, node, 0, a, 0));
        arcs.push((node, t, 1, 1, c));
        arcs.push((node, aux, a - 1, a - 1, 0));
        arcs.push((aux, t, a, a, 0));
    }
    let f = k.capacity.min(k.weights.iter().sum());
    Instance::new(2 * items + 2, s, t, f, &arcs).expect("knapsack reduction is well formed")
}

/// The chain family on `n ≥ 6` nodes whose every worst scenario has `n − 1`
/// interior capacities. Source 1, sink `n`, requested flow `n`.
pub fn gen_interior_chain(n: usize) -> Result<Instance, GenError> {
    if n < 6 {
        return Err(GenError::OutOfRange(format!("chain needs n >= 6, got {n}")));
    }
    let ni = n as i64;
    let mut arcs: Vec<ArcSpec> = Vec::with_capacity(2 * n - 2);
    for i in 1..=n - 4 {
        let cap = ni - i as i64;
        arcs.push((i, i + 1, cap, cap, 2));
    }
    for i in [n - 3, n - 2] {
        let cap = ni - i as i64 - 1;
        arcs.push((i, i + 1, cap, cap, 2));
    }
    arcs.push((n - 1, n, 2, 2, 2));
    for i in 1..=n - 2 {
        arcs.push((i, n, 0, 2, 1));
    }
    arcs.push((n - 3, n - 1, 0, 2, 1));
    Ok(Instance::new(n, 1, n, ni, &arcs).expect("chain instance is well formed"))
}

/// Bridge network on four nodes (`s = 1`, `t = 4`) where one unit of flow
/// costs 12 in the worst case but two units cost only 4.
pub fn gen_paradox_simple() -> Instance {
    Instance::new(
        4,
        1,
        4,
        1,
        &[
            (1, 2, 1, 1, 1),
            (2, 3, 1, 1, 10),
            (3, 4, 1, 1, 1),
            (2, 4, 0, 1, 1),
            (1, 3, 0, 1, 1),
        ],
    )
    .expect("well formed")
}

/// Six-node network (`s = 1`, `t = 6`) with worst values 29 at one unit and
/// 27 at two units.
pub fn gen_paradox_complex() -> Instance {
    Instance::new(
        6,
        1,
        6,
        1,
        &[
            (1, 2, 1, 1, 5),
            (1, 3, 0, 1, 4),
            (2, 3, 1, 1, 7),
            (4, 5, 1, 1, 7),
            (3, 4, 1, 1, 5),
            (2, 5, 0, 1, 4),
            (4, 6, 0, 1, 4),
            (5, 6, 1, 1, 5),
        ],
    )
    .expect("well formed")
}

/// Arc id of `(i, j)` in the complete digraph on `n` nodes, arcs listed
/// row by row with the diagonal skipped.
pub fn complete_arc_id(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j && i >= 1 && j >= 1 && i <= n && j <= n);
    (i - 1) * (n - 1) + if j < i { j - 1 } else { j - 2 }
}

/// Complete digraph skeleton with the given costs and capacity intervals.
pub fn complete_instance(
    n: usize,
    source: usize,
    sink: usize,
    flow_amount: i64,
    mut arc: impl FnMut(usize, usize) -> (i64, i64, i64),
) -> Instance {
    let mut arcs: Vec<ArcSpec> = Vec::with_capacity(n * (n - 1));
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                let (lo, hi, cost) = arc(i, j);
                arcs.push((i, j, lo, hi, cost));
            }
        }
    }
    Instance::new_unchecked(n, source, sink, flow_amount, &arcs)
}

/// Complete digraph on `n` nodes, every arc `[0, 2]` with cost 1, `f = 1`,
/// source 1 and sink `n`. Feasible exactly when every s-t cut has capacity
/// at least 1.
pub fn gen_cut_complete(n: usize) -> Result<Instance, GenError> {
    if !(3..=COMPLETE_LIMIT).contains(&n) {
        return Err(GenError::OutOfRange(format!(
            "complete graph needs 3 <= n <= {COMPLETE_LIMIT}, got {n}"
        )));
    }
    Ok(complete_instance(n, 1, n, 1, |_, _| (0, 2, 1)))
}

fn interval(rng: &mut ChaCha8Rng, cap_hi: i64, min_upper: i64) -> (i64, i64) {
    let hi = rng.gen_range(min_upper..=cap_hi);
    let lo = rng.gen_range(0..=hi);
    (lo, hi)
}

/// Seeded random instance on `n` nodes and `m` arcs with source 1, sink `n`.
///
/// A random Hamiltonian s-t path with positive upper capacities is planted
/// first, so every node is covered and `ū` always carries some flow; the
/// remaining arcs join random distinct node pairs. Arc order is shuffled.
pub fn gen_random(
    n: usize,
    m: usize,
    cap_hi: i64,
    cost_hi: i64,
    f: i64,
    seed: u64,
) -> Result<Instance, GenError> {
    if n < 2 {
        return Err(GenError::OutOfRange(format!("need n >= 2, got {n}")));
    }
    if m < n - 1 {
        return Err(GenError::OutOfRange(format!(
            "need m >= n - 1 arcs to connect {n} nodes, got {m}"
        )));
    }
    if cap_hi < 1 || cost_hi < 0 || f < 0 {
        return Err(GenError::OutOfRange(
            "cap_hi must be positive, cost_hi and f nonnegative".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (2..n).collect();
    order.shuffle(&mut rng);
    let mut path = vec![1];
    path.extend(order);
    path.push(n);

    let mut arcs: Vec<ArcSpec> = Vec::with_capacity(m);
    for w in path.windows(2) {
        let (lo, hi) = interval(&mut rng, cap_hi, 1);
        arcs.push((w[0], w[1], lo, hi, rng.gen_range(0..=cost_hi)));
    }
    while arcs.len() < m {
        let tail = rng.gen_range(1..=n);
        let head = rng.gen_range(1..=n);
        if tail == head {
            continue;
        }
        let (lo, hi) = interval(&mut rng, cap_hi, 0);
        arcs.push((tail, head, lo, hi, rng.gen_range(0..=cost_hi)));
    }
    arcs.shuffle(&mut rng);
    Ok(Instance::new(n, 1, n, f, &arcs).expect("random instance is well formed"))
}

/// Seeded random two-terminal series-parallel instance with `m` arcs.
///
/// Grown from a single s-t arc by repeatedly subdividing a random arc
/// (series step) or duplicating it (parallel step). Source 1, sink 2.
pub fn gen_random_sp(m: usize, cap_hi: i64, cost_hi: i64, f: i64, seed: u64) -> Result<Instance, GenError> {
    if m < 1 || cap_hi < 0 || cost_hi < 0 || f < 0 {
        return Err(GenError::OutOfRange("need m >= 1 and nonnegative bounds".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = vec![(1, 2)];
    let mut nodes = 2;
    while edges.len() < m {
        let k = rng.gen_range(0..edges.len());
        let (u, v) = edges[k];
        if rng.gen_bool(0.5) {
            nodes += 1;
            edges[k] = (u, nodes);
            edges.insert(k + 1, (nodes, v));
        } else {
            edges.insert(k + 1, (u, v));
        }
    }
    let arcs: Vec<ArcSpec> = edges
        .into_iter()
        .map(|(u, v)| {
            let (lo, hi) = interval(&mut rng, cap_hi, 0);
            (u, v, lo, hi, rng.gen_range(0..=cost_hi))
        })
        .collect();
    Ok(Instance::new(nodes, 1, 2, f, &arcs).expect("series-parallel instance is well formed"))
}
