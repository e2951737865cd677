//! Reference computations that share no code with the library solvers.
//!
//! Everything here is plain enumeration: all integral flows inside a box,
//! all scenarios, all knapsack subsets. Slow, but small enough to trust.

#![allow(dead_code)]

use iflow::generators::{complete_instance, gen_random, gen_random_sp};
use iflow::model::ArcSpec;
use iflow::{Instance, Scenario};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every integral vector `x` with `0 <= x_e <= caps_e` satisfying flow
/// conservation for the instance's flow amount.
pub fn all_flows(inst: &Instance, caps: &[i64]) -> Vec<Vec<i64>> {
    let m = inst.num_arcs();
    let mut out = Vec::new();
    let mut x = vec![0i64; m];
    loop {
        if balanced(inst, &x) {
            out.push(x.clone());
        }
        let mut k = 0;
        loop {
            if k == m {
                return out;
            }
            if x[k] < caps[k] {
                x[k] += 1;
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

pub fn balanced(inst: &Instance, x: &[i64]) -> bool {
    let mut net = vec![0i64; inst.num_nodes + 1];
    for a in &inst.arcs {
        net[a.tail] += x[a.id];
        net[a.head] -= x[a.id];
    }
    (1..=inst.num_nodes).all(|v| {
        let want = if v == inst.source {
            inst.flow_amount
        } else if v == inst.sink {
            -inst.flow_amount
        } else {
            0
        };
        net[v] == want
    })
}

pub fn cost(inst: &Instance, x: &[i64]) -> i64 {
    inst.arcs.iter().map(|a| a.cost * x[a.id]).sum()
}

/// Minimum cost over all integral flows under `caps`, `None` if there is none.
pub fn min_cost_enum(inst: &Instance, caps: &[i64]) -> Option<i64> {
    all_flows(inst, caps).iter().map(|x| cost(inst, x)).min()
}

/// Every integral scenario in the box, last arc varying fastest.
pub fn all_scenarios(inst: &Instance) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for a in &inst.arcs {
        out = out
            .into_iter()
            .flat_map(|p| {
                (a.capacity.lower..=a.capacity.upper).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// `c_w` by double enumeration: every flow inside `ū` is listed once, then
/// each scenario takes the cheapest flow it dominates.
pub fn worst_enum(inst: &Instance) -> Option<i64> {
    let upper: Vec<i64> = inst.arcs.iter().map(|a| a.capacity.upper).collect();
    let flows: Vec<(Vec<i64>, i64)> = all_flows(inst, &upper)
        .into_iter()
        .map(|x| {
            let c = cost(inst, &x);
            (x, c)
        })
        .collect();
    all_scenarios(inst)
        .iter()
        .filter_map(|u| {
            flows
                .iter()
                .filter(|(x, _)| x.iter().zip(u).all(|(a, b)| a <= b))
                .map(|(_, c)| *c)
                .min()
        })
        .max()
}

/// 0/1 knapsack optimum by subset enumeration.
pub fn knapsack_enum(capacity: i64, weights: &[i64], values: &[i64]) -> i64 {
    let k = weights.len();
    (0u32..1 << k)
        .filter_map(|mask| {
            let (w, v) = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .fold((0, 0), |(w, v), i| (w + weights[i], v + values[i]));
            (w <= capacity).then_some(v)
        })
        .max()
        .unwrap_or(0)
}

/// Componentwise maximum of two scenarios.
pub fn join(a: &Scenario, b: &Scenario) -> Scenario {
    Scenario::new(
        a.capacities
            .iter()
            .zip(&b.capacities)
            .map(|(x, y)| *x.max(y))
            .collect(),
    )
}

/// Redraws every interval as `[lo, hi]` with `1 <= hi <= cap_hi`, `lo <= 1`,
/// keeping the graph and costs. The generators favour narrow intervals; the
/// cross-checks want wide scenario spaces.
pub fn widen(inst: &Instance, cap_hi: i64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs: Vec<ArcSpec> = inst
        .arcs
        .iter()
        .map(|a| {
            let hi = rng.gen_range(1..=cap_hi);
            let lo = rng.gen_range(0..=hi.min(1));
            (a.tail, a.head, lo, hi, a.cost)
        })
        .collect();
    Instance::new(inst.num_nodes, inst.source, inst.sink, inst.flow_amount, &arcs).unwrap()
}

/// The seeded series-parallel pool shared by the cross-validation suites:
/// `count` instances with at most 8 arcs, capacities up to 3, `f` up to 6.
pub fn sp_pool(count: u64) -> Vec<Instance> {
    (0..count)
        .map(|seed| {
            let m = 3 + (seed % 6) as usize;
            let f = 1 + (seed / 8 % 6) as i64;
            let inst = gen_random_sp(m, 3, 9, f, 1000 + seed).unwrap();
            widen(&inst, 3, seed)
        })
        .collect()
}

/// Seeded general random instances: up to 5 nodes, 7 arcs, capacities up
/// to 2.
pub fn general_pool(count: u64) -> Vec<Instance> {
    (0..count)
        .map(|seed| {
            let n = 3 + (seed % 3) as usize;
            let m = n - 1 + (seed / 3 % (9 - n as u64)) as usize;
            let f = 1 + (seed / 7 % 2) as i64;
            let inst = gen_random(n, m, 2, 9, f, 5000 + seed).unwrap();
            widen(&inst, 2, seed)
        })
        .collect()
}

/// Cost matrix with zero diagonal.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, s: usize, t: usize, skewed: bool) -> Vec<Vec<i64>> {
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    if i == j {
                        0
                    } else if skewed && (i == s || j == t) {
                        rng.gen_range(5..=9)
                    } else if skewed {
                        rng.gen_range(0..=3)
                    } else {
                        rng.gen_range(0..=9)
                    }
                })
                .collect()
        })
        .collect()
}

/// Complete digraph with `[0, 1]` on up to `k` random arcs and `[0, 0]`
/// elsewhere, `f = 1`.
pub fn random_box(rng: &mut ChaCha8Rng, n: usize, s: usize, t: usize, c: &[Vec<i64>], k: usize) -> Instance {
    let mut pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    pairs.shuffle(rng);
    let open: Vec<(usize, usize)> = pairs.into_iter().take(k).collect();
    complete_instance(n, s, t, 1, |i, j| {
        (0, i64::from(open.contains(&(i, j))), c[i - 1][j - 1])
    })
}
