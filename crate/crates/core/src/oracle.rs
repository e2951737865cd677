//! Ground truth for the worst optimal value `c_w` by exhaustive enumeration
//! of the integral scenarios in the capacity box.
//!
//! Restricting the search to the integer grid is exact: with integral bounds
//! and flow amount, some integral scenario attains `c_w`.

use rayon::prelude::*;
use thiserror::Error;

use crate::mcf::{max_flow_value, optimal_flow_values};
use crate::model::{flow_cost, Flow, Instance, Scenario};

/// Default cap on the number of scenarios enumerated.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

const CHUNK: u128 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorstResult {
    pub c_w: i64,
    /// Lexicographically smallest scenario attaining `c_w`.
    pub scenario: Scenario,
    /// Optimal flow under `scenario`.
    pub flow: Flow,
    pub feasible_count: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration budget exceeded: {required} scenarios, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("no scenario admits a flow of the requested size")]
    AllInfeasible,
}

/// Enumeration settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForce {
    pub budget: u128,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            budget: DEFAULT_BUDGET,
        }
    }
}

pub fn is_feasible_scenario(instance: &Instance, scenario: &Scenario) -> bool {
    instance.flow_amount <= 0 || max_flow_value(instance, scenario) >= instance.flow_amount
}

/// `c_w` with the default budget. See [`BruteForce::worst_value`].
pub fn worst_value_bruteforce(instance: &Instance) -> Result<WorstResult, OracleError> {
    BruteForce::default().worst_value(instance)
}

#[derive(Clone, Copy)]
struct Best {
    cost: i64,
    index: u128,
    feasible: u128,
}

impl Best {
    fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                let feasible = a.feasible + b.feasible;
                let winner = if b.cost > a.cost || (b.cost == a.cost && b.index < a.index) {
                    b
                } else {
                    a
                };
                Some(Best { feasible, ..winner })
            }
        }
    }
}

impl BruteForce {
    /// Maximizes the minimum flow cost over every integral scenario.
    ///
    /// Scenarios are ranked lexicographically with arc 0 most significant;
    /// the scenario space is split into chunks solved in parallel, and the
    /// combination keeps the maximum cost and, on ties, the smallest rank, so
    /// the result matches a sequential scan exactly.
    pub fn worst_value(&self, instance: &Instance) -> Result<WorstResult, OracleError> {
        let total = instance.scenario_count();
        if total > self.budget {
            return Err(OracleError::BudgetExceeded {
                required: total,
                budget: self.budget,
            });
        }
        let chunks = total.div_ceil(CHUNK);
        let best = (0..chunks as u64)
            .into_par_iter()
            .map(|chunk| {
                let start = chunk as u128 * CHUNK;
                let end = (start + CHUNK).min(total);
                scan(instance, start, end)
            })
            .reduce(|| None, Best::merge);

        let best = match best {
            Some(b) if b.feasible > 0 => b,
            _ => return Err(OracleError::AllInfeasible),
        };
        let scenario = decode(instance, best.index);
        let values =
            optimal_flow_values(instance, &scenario.capacities).expect("winning scenario is feasible");
        let flow = Flow::from_values(instance, values);
        debug_assert_eq!(flow.total_cost, best.cost);
        Ok(WorstResult {
            c_w: best.cost,
            scenario,
            flow,
            feasible_count: best.feasible,
        })
    }
}

/// Scenario with lexicographic rank `index` (arc 0 most significant).
fn decode(instance: &Instance, mut index: u128) -> Scenario {
    let mut caps = vec![0; instance.num_arcs()];
    for a in instance.arcs.iter().rev() {
        let w = a.capacity.width();
        caps[a.id] = a.capacity.lower + (index % w) as i64;
        index /= w;
    }
    Scenario::new(caps)
}

fn scan(instance: &Instance, start: u128, end: u128) -> Option<Best> {
    let mut caps = decode(instance, start).capacities;
    let mut best: Option<Best> = None;
    let mut feasible = 0;
    for index in start..end {
        if let Some(x) = optimal_flow_values(instance, &caps) {
            feasible += 1;
            let cost = flow_cost(instance, &x);
            if best.is_none_or(|b| cost > b.cost) {
                best = Some(Best {
                    cost,
                    index,
                    feasible: 0,
                });
            }
        }
        // odometer step, last arc fastest
        for a in instance.arcs.iter().rev() {
            if caps[a.id] < a.capacity.upper {
                caps[a.id] += 1;
                break;
            }
            caps[a.id] = a.capacity.lower;
        }
    }
    best.map(|b| Best { feasible, ..b })
}
