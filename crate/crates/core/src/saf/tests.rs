use serde_json::json;

use super::*;
use crate::eval::eval_formula;
use crate::field::CapRegistry;
use crate::formula::parse_formula;
use crate::program::{parse_program, DEFAULT_FUEL};

fn fig1() -> Field {
    let doc = json!({
        "nodes": ["0", "1", "2", "3"],
        "edges": [["0","2"], ["2","1"], ["2","3"], ["3","1"], ["1","0"]],
        "node_labels": {"i": {"domain": "bool", "values": {"0": true}, "default": false}},
    });
    Field::from_json(&doc, &CapRegistry::builtin()).unwrap()
}

#[test]
fn elementary_formulas() {
    assert!(is_elementary(&parse_formula("i").unwrap()));
    assert!(is_elementary(&parse_formula("<out a:g> j").unwrap()));
    assert!(is_elementary(&parse_formula("f(i, j)").unwrap()));
    assert!(!is_elementary(&parse_formula("f(i, g(j))").unwrap()));
    assert!(!is_elementary(&parse_formula("mu z. i").unwrap()));
}

#[test]
fn label_needs_no_auxiliary() {
    let e = Engine::new();
    let (p, c) = translate_formula(&e, &fig1(), &Formula::label("i"), "j", 7).unwrap();
    assert_eq!(p, Program::assign("j", Formula::label("i")));
    assert_eq!(c, 7);
}

#[test]
fn fixpoint_loop_computes_the_fixpoint() {
    let (e, f) = (Engine::new(), fig1());
    let phi = parse_formula("mu z. or(i, <out:or> z)").unwrap();
    let (p, _) = translate_formula(&e, &f, &phi, "j", 0).unwrap();
    assert!(is_saf(&p));
    let mut g = f.clone();
    run(&e, &p, &mut g, DEFAULT_FUEL).unwrap();
    let want = eval_formula(&f, &Default::default(), &phi).unwrap();
    assert_eq!(g.values("j").unwrap(), want.values.as_slice());
}

#[test]
fn sequence_has_one_wait() {
    let (e, f) = (Engine::new(), fig1());
    let s = translate_program(&e, &f, &parse_program("a <- i; b <- a").unwrap()).unwrap();
    let mut waits = 0;
    s.visit(&mut |q| {
        if matches!(q, Program::Until { body, .. } if body.is_skip()) {
            waits += 1;
        }
    });
    assert_eq!(waits, 1);
}

#[test]
fn straight_line_matches_direct_run() {
    let (e, f) = (Engine::new(), fig1());
    for text in [
        "skip",
        "j <- i; k <- j",
        "x <- false; until x do { y <- <in:or> i; x <- or(y, true) }; if not(x) then z <- true else z <- false",
        "j <- nu z. and(or(i, true), <out:and> z)",
        "j <- mu z. or(i, <out:or> mu w. or(z, <in:or> w))",
    ] {
        let r = differential_check(&e, &f, &parse_program(text).unwrap(), DEFAULT_FUEL).unwrap();
        assert!(r.equal(), "{text}: {:?}", r.difference);
    }
}

#[test]
fn reserved_namespace_is_rejected() {
    let (e, f) = (Engine::new(), fig1());
    let p = Program::assign("$aux:0", Formula::label("i"));
    assert!(matches!(translate_program(&e, &f, &p), Err(SafError::AuxCollision(_))));
}

#[test]
fn translation_output_parses_back() {
    let (e, f) = (Engine::new(), fig1());
    let s = translate_program(&e, &f, &parse_program("j <- mu z. or(i, <out:or> z)").unwrap()).unwrap();
    assert_eq!(parse_program(&s.to_string()).unwrap(), s);
}
