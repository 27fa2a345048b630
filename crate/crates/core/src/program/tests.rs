use serde_json::json;

use super::*;
use crate::field::CapRegistry;

fn fig1() -> Field {
    let doc = json!({
        "nodes": ["0", "1", "2", "3"],
        "edges": [["0","2"], ["2","1"], ["2","3"], ["3","1"], ["1","0"]],
        "node_labels": {"i": {"domain": "bool", "values": {"0": true}, "default": false}},
    });
    Field::from_json(&doc, &CapRegistry::builtin()).unwrap()
}

fn run_text(text: &str, field: &mut Field) -> Result<usize, ProgramError> {
    run(&Engine::new(), &parse_program(text).unwrap(), field, DEFAULT_FUEL)
}

#[test]
fn assignment_evaluates_the_formula() {
    let mut f = fig1();
    assert_eq!(run_text("j <- mu z. or(i, <out:or> z)", &mut f).unwrap(), 1);
    assert_eq!(f.values("j").unwrap(), vec![Value::Bool(true); 4].as_slice());
}

#[test]
fn until_loop_terminates() {
    let mut f = fig1();
    let steps = run_text("finish <- false; until finish do finish <- true", &mut f).unwrap();
    assert_eq!(steps, 4);
    assert_eq!(f.values("finish").unwrap(), vec![Value::Bool(true); 4].as_slice());
}

#[test]
fn guards_need_every_node() {
    let mut f = fig1();
    run_text("if i then k <- true else k <- false", &mut f).unwrap();
    assert_eq!(f.values("k").unwrap()[0], Value::Bool(false));
    run_text("if or(i, true) then k <- true else k <- false", &mut f).unwrap();
    assert_eq!(f.values("k").unwrap()[0], Value::Bool(true));
}

#[test]
fn guard_must_be_boolean() {
    let mut f = fig1();
    assert!(matches!(run_text("until 3 do skip", &mut f), Err(ProgramError::GuardType { .. })));
}

#[test]
fn sequence_finishes_first_part_first() {
    let mut f = fig1();
    run_text("a <- i; b <- <in:or> a; a <- false", &mut f).unwrap();
    let b: Vec<bool> = f.values("b").unwrap().iter().map(|v| v.as_bool().unwrap()).collect();
    assert_eq!(b, vec![false, false, true, false]);
}

#[test]
fn skip_then_program_steps_the_program() {
    let mut f = fig1();
    let e = Engine::new();
    let p = Program::Seq(Box::new(Program::Skip), Box::new(Program::assign("j", Formula::Bool(true))));
    let (next, kind) = step(&e, p, &mut f).unwrap();
    assert!(next.is_skip());
    assert_eq!(kind, StepKind::Assign("j".into()));
}

#[test]
fn free_removes_labels() {
    let mut f = fig1();
    run_text("j <- i; free(j)", &mut f).unwrap();
    assert!(f.node_label("j").is_none());
    assert!(run_text("k <- j", &mut f).is_err());
}

#[test]
fn fuel_bounds_divergent_loops() {
    let mut f = fig1();
    let err = run(&Engine::new(), &parse_program("until false do skip").unwrap(), &mut f, 50).unwrap_err();
    assert!(matches!(err, ProgramError::FuelExhausted { steps: 50, .. }));
}

#[test]
fn printed_programs_parse_back() {
    let text = "x <- false; until x do { y <- <out:or> i; if y then x <- true else skip }; free(y)";
    let p = parse_program(text).unwrap();
    assert_eq!(parse_program(&p.to_string()).unwrap(), p);
}

#[test]
fn agreement_on_small_field() {
    let mut f = fig1();
    let phi = crate::formula::agreement_formula(&Formula::label("i"));
    run(&Engine::new(), &Program::assign("ok", phi), &mut f, 10).unwrap();
    let ok: Vec<bool> = f.values("ok").unwrap().iter().map(|v| v.as_bool().unwrap()).collect();
    // Node 3 only neighbours 1 and 2, which agree with it.
    assert_eq!(ok, vec![false, false, false, true]);
}
