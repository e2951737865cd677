//! Worst-case analysis of minimum cost flows whose arc capacities vary in
//! intervals.
//!
//! The worst optimal value `c_w` is the largest minimum flow cost over all
//! capacity scenarios that admit the requested flow. It is computed three
//! ways that check each other: exhaustive enumeration ([`oracle`]), a dynamic
//! program on series-parallel networks ([`spdp`]), and a big-M model written
//! for external MILP solvers ([`milp`]).
//!
//! ```
//! use iflow::{generators::gen_paradox_simple, oracle::worst_value_bruteforce};
//!
//! let inst = gen_paradox_simple();
//! assert_eq!(worst_value_bruteforce(&inst).unwrap().c_w, 12);
//! // asking for more flow makes the worst case cheaper
//! let more = inst.with_flow_amount(2);
//! assert_eq!(worst_value_bruteforce(&more).unwrap().c_w, 4);
//! ```

pub mod cli;
pub mod generators;
pub mod instance_io;
pub mod mcf;
pub mod milp;
pub mod model;
pub mod oracle;
pub mod paradox;
pub mod spdp;
pub mod structure;

pub use mcf::{min_cost_flow, McfResult, Potentials};
pub use model::{Arc, Flow, Instance, IntervalCapacity, Scenario, Violation};
pub use oracle::{worst_value_bruteforce, WorstResult};
pub use spdp::worst_value_sp;

// Guide chapters compile and run as doctests so the book cannot drift from
// the code.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/single-scenario.md")]
    mod single_scenario {}
    #[doc = include_str!("../../../book/src/worst-value.md")]
    mod worst_value {}
    #[doc = include_str!("../../../book/src/series-parallel.md")]
    mod series_parallel {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/paradox.md")]
    mod paradox {}
    #[doc = include_str!("../../../book/src/milp.md")]
    mod milp {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
