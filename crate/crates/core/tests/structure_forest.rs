mod common;

use common::{general_pool, sp_pool, widen};
use iflow::generators::{gen_interior_chain, gen_random, gen_random_sp};
use iflow::mcf::{certify_optimality, min_cost_flow, potentials_for};
use iflow::model::validate_flow;
use iflow::oracle::worst_value_bruteforce;
use iflow::structure::{extremalize_to_forest, interior_arcs, minimal_capacities};
use iflow::{Flow, Instance, Scenario};

/// Undirected acyclicity by union-find, independent of the library's DFS.
fn is_forest(inst: &Instance, arcs: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..=inst.num_nodes).collect();
    fn find(p: &mut [usize], v: usize) -> usize {
        if p[v] != v {
            let r = find(p, p[v]);
            p[v] = r;
        }
        p[v]
    }
    for &e in arcs {
        let (a, b) = (
            find(&mut parent, inst.arcs[e].tail),
            find(&mut parent, inst.arcs[e].head),
        );
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

fn check_instance(inst: &Instance) -> usize {
    let Ok(w) = worst_value_bruteforce(inst) else {
        return 0;
    };
    check_scenario(inst, &w.scenario, &w.flow, w.c_w)
}

fn check_scenario(inst: &Instance, scenario: &Scenario, flow: &Flow, c_w: i64) -> usize {
    let out = extremalize_to_forest(inst, scenario, flow).unwrap();
    assert_eq!(out.flow.total_cost, c_w, "{inst:?}");
    assert_eq!(validate_flow(inst, &out.scenario, &out.flow), Ok(()));
    let interior = interior_arcs(inst, &out.scenario);
    assert!(is_forest(inst, &interior.arcs), "{inst:?}");
    assert!(interior.len() < inst.num_nodes);
    assert!(out.iterations <= inst.num_arcs());
    let pi = potentials_for(inst, &out.scenario, &out.flow).expect("output stays optimal");
    certify_optimality(inst, &out.scenario, &out.flow, &pi).unwrap();
    // the output scenario is still worst-case: its optimum equals c_w
    assert_eq!(min_cost_flow(inst, &out.scenario).cost(), Some(c_w));
    out.iterations
}

#[test]
fn forest_on_sp_pool() {
    for inst in sp_pool(120) {
        check_instance(&inst);
    }
}

#[test]
fn forest_on_general_pool() {
    for inst in general_pool(120) {
        check_instance(&inst);
    }
}

#[test]
fn forest_from_every_worst_scenario() {
    // low costs make zero-cost interior cycles common
    let mut canceled = 0;
    for seed in 0..60 {
        let f = 2 + seed as i64 % 2;
        let base = if seed % 2 == 0 {
            gen_random(4, 6, 2, seed as i64 % 3, f, 900 + seed).unwrap()
        } else {
            gen_random_sp(5, 2, seed as i64 % 3, f, 900 + seed).unwrap()
        };
        let inst = widen(&base, 3, seed);
        let Ok(w) = worst_value_bruteforce(&inst) else {
            continue;
        };
        for u in common::all_scenarios(&inst) {
            let scenario = Scenario::new(u);
            if let Some((flow, _)) = min_cost_flow(&inst, &scenario).into_optimal() {
                if flow.total_cost == w.c_w {
                    canceled += check_scenario(&inst, &scenario, &flow, w.c_w);
                }
            }
        }
    }
    assert!(canceled > 0);
}

#[test]
fn interior_chain_is_tight() {
    for n in 6..=7 {
        let inst = gen_interior_chain(n).unwrap();
        let w = worst_value_bruteforce(&inst).unwrap();
        let out = extremalize_to_forest(&inst, &w.scenario, &w.flow).unwrap();
        let interior = interior_arcs(&inst, &out.scenario);
        assert_eq!(interior.len(), n - 1);
        assert!(interior.arcs.iter().all(|&e| out.scenario.capacities[e] == 1));
        assert_eq!(out.flow.total_cost, w.c_w);
        assert!(is_forest(&inst, &interior.arcs));
    }
}

#[test]
fn minimal_capacities_keep_cost() {
    for inst in general_pool(60) {
        let upper = Scenario::upper(&inst);
        let Some((flow, _)) = min_cost_flow(&inst, &upper).into_optimal() else {
            continue;
        };
        let low = minimal_capacities(&inst, &flow);
        assert_eq!(min_cost_flow(&inst, &low).cost(), Some(flow.total_cost));
        assert!(low <= upper || low.capacities.iter().zip(&upper.capacities).all(|(a, b)| a <= b));
    }
}
