use serde_json::json;

use super::*;
use crate::field::CapRegistry;
use crate::formula::parse_formula;

fn fig1(label: serde_json::Value) -> Field {
    let doc = json!({
        "nodes": ["0", "1", "2", "3"],
        "edges": [["0","2"], ["2","1"], ["2","3"], ["3","1"], ["1","0"]],
        "node_labels": {"i": label},
    });
    Field::from_json(&doc, &CapRegistry::builtin()).unwrap()
}

fn bools(v: &[bool]) -> Vec<Value> {
    v.iter().map(|b| Value::Bool(*b)).collect()
}

#[test]
fn reachability_rows() {
    let f = fig1(json!({"domain": "bool", "values": {"0": true}, "default": false}));
    let t = eval_trace(&f, &Environment::new(), &parse_formula("mu z. or(i, <out:or> z)").unwrap()).unwrap();
    assert_eq!(
        t.rows,
        vec![
            bools(&[false; 4]),
            bools(&[true, false, false, false]),
            bools(&[true, true, false, false]),
            bools(&[true; 4]),
        ]
    );
}

#[test]
fn constant_body_takes_one_step() {
    let f = fig1(json!({"domain": "bool", "values": {"0": true}, "default": false}));
    let t = eval_trace(&f, &Environment::new(), &parse_formula("nu z. i").unwrap()).unwrap();
    assert_eq!(t.rows.len(), 2);
    assert_eq!(t.last(), bools(&[true, false, false, false]).as_slice());
}

#[test]
fn non_fixpoint_is_one_row() {
    let f = fig1(json!({"domain": "bool", "values": {"0": true}, "default": false}));
    let t = eval_trace(&f, &Environment::new(), &parse_formula("<in:or> i").unwrap()).unwrap();
    assert_eq!(t.rows, vec![bools(&[false, false, true, false])]);
}

#[test]
fn free_variable_from_environment() {
    let f = fig1(json!({"domain": "bool", "values": {"0": true}, "default": false}));
    let mut env = Environment::new();
    env.insert("y".into(), Valuation { domain: Domain::Bool, values: bools(&[false, false, false, true]) });
    let v = eval_formula(&f, &env, &parse_formula("or(y, i)").unwrap()).unwrap();
    assert_eq!(v.values, bools(&[true, false, false, true]));
}

#[test]
fn unknown_label_is_reported() {
    let f = fig1(json!({"domain": "bool", "values": {}, "default": false}));
    let err = eval_formula(&f, &Environment::new(), &parse_formula("or(j, i)").unwrap()).unwrap_err();
    assert_eq!(err, EvalError::Formula(FormulaError::UnknownLabel("j".into())));
}

#[test]
fn iteration_cap_rejects_long_chains() {
    let f = fig1(json!({"domain": "bool", "values": {"0": true}, "default": false}));
    let mut e = Engine::new();
    e.options.max_iters = Some(2);
    let err = e.eval(&f, &Environment::new(), &parse_formula("mu z. or(i, <out:or> z)").unwrap()).unwrap_err();
    assert!(matches!(err, EvalError::IterationCap { limit: 2, .. }));
}

#[test]
fn aggregator_must_fold_the_domain() {
    let f = fig1(json!({"domain": "bool", "values": {}, "default": false}));
    assert!(eval_formula(&f, &Environment::new(), &parse_formula("<out:not> i").unwrap()).is_err());
}

#[test]
fn step_matches_synchronous_iteration() {
    let f = fig1(json!({"domain": "bool", "values": {"0": true}, "default": false}));
    let e = Engine::new();
    let phi = parse_formula("mu z. or(i, <out:or> z)").unwrap();
    let step = e.fixpoint_step(&f, &Environment::new(), &phi).unwrap();
    let trace = e.trace(&f, &Environment::new(), &phi).unwrap();
    let mut cur = step.seed().unwrap();
    for row in &trace.rows {
        assert_eq!(&cur, row);
        cur = step.apply(&cur).unwrap();
    }
}

#[test]
fn pointwise_agrees_with_bulk() {
    let f = fig1(json!({"domain": "bool", "values": {"0": true}, "default": false}));
    let e = Engine::new();
    let phi = parse_formula("and(not(i), <in:or> i)").unwrap();
    let t = e.compile(&f, &Environment::new(), &phi, None).unwrap();
    let bulk = e.eval_typed(&f, &Environment::new(), &t).unwrap();
    for n in 0..4 {
        assert_eq!(eval_at(&f, &f, &t, n).unwrap(), bulk[n]);
    }
}
