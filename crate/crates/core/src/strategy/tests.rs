use serde_json::json;

use super::*;
use crate::eval::{Engine, Environment};
use crate::field::{CapRegistry, Field};
use crate::formula::parse_formula;

fn fig1() -> Field {
    let doc = json!({
        "nodes": ["0", "1", "2", "3"],
        "edges": [["0","2"], ["2","1"], ["2","3"], ["3","1"], ["1","0"]],
        "node_labels": {"i": {"domain": "bool", "values": {"0": true}, "default": false}},
    });
    Field::from_json(&doc, &CapRegistry::builtin()).unwrap()
}

fn odd_even() -> Strategy {
    Strategy::explicit(4, vec![Pattern::all(4), [0, 2, 3].into_iter().collect()]).unwrap()
}

fn truth(rows: &[Vec<Value>]) -> Vec<Vec<bool>> {
    rows.iter().map(|r| r.iter().map(|v| v.as_bool().unwrap()).collect()).collect()
}

const REACH: &str = "mu z. or(i, <out:or> z)";

#[test]
fn node_one_on_odd_steps() {
    let (f, e) = (fig1(), Engine::new());
    let step = e.fixpoint_step(&f, &Environment::new(), &parse_formula(REACH).unwrap()).unwrap();
    let run = run_strategy(&step, &odd_even(), 100).unwrap();
    let t = [true, true, true, true];
    assert_eq!(
        truth(&run.rows),
        vec![vec![false; 4], vec![true, false, false, false], vec![true, false, false, false], vec![true, true, false, false], t.to_vec()]
    );
}

#[test]
fn full_pattern_is_one_iteration() {
    let (f, e) = (fig1(), Engine::new());
    let step = e.fixpoint_step(&f, &Environment::new(), &parse_formula(REACH).unwrap()).unwrap();
    let seed = step.seed().unwrap();
    assert_eq!(apply_pattern(&step, &Pattern::all(4), &seed).unwrap(), step.apply(&seed).unwrap());
    assert_eq!(apply_pattern(&step, &Pattern::default(), &seed).unwrap(), seed);
}

#[test]
fn synchronous_strategy_reproduces_trace() {
    let (f, e) = (fig1(), Engine::new());
    let phi = parse_formula(REACH).unwrap();
    let step = e.fixpoint_step(&f, &Environment::new(), &phi).unwrap();
    let run = run_strategy(&step, &Strategy::synchronous(4), 100).unwrap();
    assert_eq!(run.rows, e.trace(&f, &Environment::new(), &phi).unwrap().rows);
}

#[test]
fn explicit_strategy_must_cover_all_nodes() {
    let err = Strategy::explicit(4, vec![[0, 1, 2].into_iter().collect()]).unwrap_err();
    assert_eq!(err, StrategyError::Unfair(3));
    assert!(Strategy::explicit(2, vec![[0, 5].into_iter().collect()]).is_err());
}

#[test]
fn generators_respect_their_window() {
    for s in [Strategy::round_robin_skip(5), Strategy::random(5, 7, 0.1), Strategy::random(5, 8, 0.9)] {
        let w = s.window();
        let ps: Vec<Pattern> = s.patterns().take(200).collect();
        for block in ps.windows(w) {
            for n in 0..5 {
                assert!(block.iter().any(|p| p.contains(n)), "{s:?}");
            }
        }
    }
}

#[test]
fn failure_free_spec_matches_strategy_run() {
    let (f, e) = (fig1(), Engine::new());
    let step = e.fixpoint_step(&f, &Environment::new(), &parse_formula(REACH).unwrap()).unwrap();
    let a = run_strategy(&step, &Strategy::round_robin_skip(4), 100).unwrap();
    let b = run_failures(&step, &Strategy::round_robin_skip(4), &FailureSpec::default(), 100).unwrap();
    assert_eq!(a, b);
}

#[test]
fn rollback_breaks_the_chain_but_not_the_limit() {
    let (f, e) = (fig1(), Engine::new());
    let step = e.fixpoint_step(&f, &Environment::new(), &parse_formula(REACH).unwrap()).unwrap();
    // Node 1 is inactive at even steps of the cycle below.
    let sigma = Strategy::explicit(4, vec![[0, 1, 2, 3].into_iter().collect(), [0, 2, 3].into_iter().collect()]).unwrap();
    let spec = FailureSpec { rollbacks: vec![Rollback { step: 4, node: 1, to_step: 0 }], safe_after: 5 };
    let run = run_failures(&step, &sigma, &spec, 100).unwrap();
    let (chain, decrease) = shape(&step, &run.rows);
    assert!(!chain && decrease);
    assert_eq!(truth(&run.rows).last().unwrap(), &vec![true; 4]);
}

#[test]
fn malformed_failures_are_rejected() {
    let (f, e) = (fig1(), Engine::new());
    let step = e.fixpoint_step(&f, &Environment::new(), &parse_formula(REACH).unwrap()).unwrap();
    let late = FailureSpec { rollbacks: vec![Rollback { step: 9, node: 1, to_step: 0 }], safe_after: 5 };
    assert!(matches!(run_failures(&step, &odd_even(), &late, 100), Err(StrategyError::BadFailure(_))));
    let forward = FailureSpec { rollbacks: vec![Rollback { step: 2, node: 1, to_step: 2 }], safe_after: 5 };
    assert!(matches!(run_failures(&step, &odd_even(), &forward, 100), Err(StrategyError::BadFailure(_))));
}

#[test]
fn step_budget_is_enforced() {
    let (f, e) = (fig1(), Engine::new());
    let step = e.fixpoint_step(&f, &Environment::new(), &parse_formula(REACH).unwrap()).unwrap();
    assert_eq!(run_strategy(&step, &odd_even(), 2), Err(StrategyError::MaxSteps(2)));
}
