use super::*;

fn order4() -> Arc<NodeOrder> {
    Arc::new(NodeOrder::from_strs(&["0", "1", "2", "3"]))
}

fn n(v: i64) -> Value {
    Value::num(v)
}

#[test]
fn cost_order_prefers_smaller() {
    let d = Domain::Cost;
    assert!(d.leq(&n(5), &n(3)).unwrap());
    assert_eq!(d.join(&n(4), &n(3)).unwrap(), n(3));
    assert_eq!(d.plus(&[n(3), Value::inf(), n(5)]).unwrap(), n(3));
    assert_eq!(d.times(&n(3), &n(5)).unwrap(), n(8));
    assert_eq!(d.bottom().unwrap(), Value::inf());
}

#[test]
fn fuzzy_times_is_min() {
    let d = Domain::Interval { lo: ExtRat::zero(), hi: ExtRat::int(1) };
    let a = Value::Num(ExtRat::new_ratio(7, 10));
    let b = Value::Num(ExtRat::new_ratio(4, 10));
    assert_eq!(d.times(&a, &b).unwrap(), b);
    assert!(d.leq(&Value::num(2), &a).is_err());
}

#[test]
fn bool_and_its_reverse() {
    assert_eq!(Domain::Bool.join(&Value::Bool(false), &Value::Bool(true)).unwrap(), Value::Bool(true));
    assert_eq!(Domain::Bool.plus(&[Value::Bool(false), Value::Bool(false), Value::Bool(true)]).unwrap(), Value::Bool(true));
    let r = Domain::Bool.reverse();
    assert_eq!(r.bottom().unwrap(), Value::Bool(true));
    assert_eq!(r.top().unwrap(), Value::Bool(false));
    assert_eq!(r.reverse(), Domain::Bool);
}

#[test]
fn set_union_join() {
    let d = Domain::PowerSet { universe: None };
    let a = Value::set([n(1), n(3)]);
    let b = Value::set([n(0), n(1), n(3)]);
    assert_eq!(d.join(&a, &b).unwrap(), b);
    assert!(matches!(d.top(), Err(DomainError::NoTop(_))));
}

#[test]
fn hoare_of_node_cost_pairs() {
    let o = order4();
    let d = Domain::hoare(Domain::product(vec![Domain::Discrete(o), Domain::Cost]));
    let worse = Value::Antichain(vec![Value::pair(Value::node("0"), n(4))]);
    let better = Value::Antichain(vec![Value::pair(Value::node("0"), n(3))]);
    assert!(d.leq(&worse, &better).unwrap());
    assert!(!d.leq(&better, &worse).unwrap());
    assert_eq!(d.join(&worse, &better).unwrap(), better);
    assert_eq!(d.bottom().unwrap(), Value::Antichain(vec![]));
    // Maximal elements: one (node, 0) pair per node.
    match d.top().unwrap() {
        Value::Antichain(items) => assert_eq!(items.len(), 4),
        other => panic!("unexpected top {other}"),
    }
}

#[test]
fn hoare_meet_of_discrete_pairs() {
    let o = order4();
    let d = Domain::hoare(Domain::product(vec![Domain::Discrete(o), Domain::Cost]));
    let a = Value::Antichain(vec![
        Value::pair(Value::node("0"), n(2)),
        Value::pair(Value::node("1"), n(5)),
    ]);
    let b = Value::Antichain(vec![Value::pair(Value::node("0"), n(4))]);
    let m = d.meet(&a, &b).unwrap();
    assert_eq!(m, Value::Antichain(vec![Value::pair(Value::node("0"), n(4))]));
}

#[test]
fn lex_cost_then_node_top() {
    let o = order4();
    let d = Domain::lex(Domain::Cost, Domain::Nodes(o.clone()));
    assert_eq!(d.top().unwrap(), Value::pair(n(0), Value::node("0")));
    assert_eq!(d.bottom().unwrap(), Value::pair(Value::inf(), Value::node("3")));
    let a = Value::pair(n(1), Value::node("2"));
    let b = Value::pair(n(1), Value::node("1"));
    assert_eq!(d.join(&a, &b).unwrap(), b);
    let c = Value::pair(n(0), Value::node("3"));
    assert_eq!(d.join(&a, &c).unwrap(), c);
}

#[test]
fn paths_lexicographic_with_top() {
    let o = order4();
    let d = Domain::Paths(o);
    let p = |xs: &[&str]| Value::Path(PathValue::from_nodes(xs));
    assert!(d.leq(&p(&["1"]), &p(&["1", "0"])).unwrap());
    assert!(d.leq(&p(&["1", "3"]), &p(&["2"])).unwrap());
    assert!(d.leq(&p(&["3", "3", "3"]), &Value::Path(PathValue::Top)).unwrap());
    assert_eq!(d.bottom().unwrap(), p(&[]));
}

#[test]
fn discrete_join_fails_on_distinct() {
    let d = Domain::Discrete(order4());
    assert!(matches!(d.join(&Value::node("0"), &Value::node("1")), Err(DomainError::NoLub { .. })));
    assert!(matches!(d.plus(&[]), Err(DomainError::NotASemiring(_))));
}

#[test]
fn empty_aggregates_are_units() {
    assert_eq!(Domain::Cost.plus(&[]).unwrap(), Value::inf());
    assert_eq!(Domain::Cost.times_all(&[]).unwrap(), n(0));
    assert_eq!(Domain::Bool.times_all(&[]).unwrap(), Value::Bool(true));
}

#[test]
fn mismatch_reported() {
    assert!(matches!(Domain::Bool.leq(&n(1), &Value::Bool(true)), Err(DomainError::TypeMismatch { .. })));
    assert!(Domain::Tropical.leq(&n(-1), &n(2)).is_err());
}

#[test]
fn parses_compact_syntax() {
    let o = order4();
    let d = parse_domain("hoare(lex(cost, rev(path)))", &o).unwrap();
    assert_eq!(
        d,
        Domain::hoare(Domain::lex(Domain::Cost, Domain::Reversed(Box::new(Domain::Paths(o.clone())))))
    );
    assert_eq!(parse_domain(&d.to_string(), &o).unwrap(), d);
    assert_eq!(parse_domain("rev(tropical)", &o).unwrap(), Domain::Cost);
    assert_eq!(parse_domain("interval(0,1)", &o).unwrap(), parse_domain("fuzzy", &o).unwrap());
    assert!(parse_domain("lex(bool)", &o).is_err());
    assert!(parse_domain("bool bool", &o).is_err());
}

#[test]
fn json_domain_forms() {
    let o = order4();
    let d = Domain::product(vec![Domain::Discrete(o.clone()), Domain::Cost]);
    assert_eq!(domain_from_json(&d.to_json(), &o).unwrap(), d);
    let s = parse_domain("powerset(nodes)", &o).unwrap();
    assert_eq!(domain_from_json(&s.to_json(), &o).unwrap(), s);
    let j = serde_json::json!({"kind": "hoare", "of": ["cost"]});
    assert_eq!(domain_from_json(&j, &o).unwrap(), Domain::hoare(Domain::Cost));
}

#[test]
fn law_probes_pass_on_builtin_domains() {
    let order = Arc::new(NodeOrder::from_strs(&["a", "b", "c"]));
    for text in ["bool", "tropical", "cost", "fuzzy", "powerset(nodes)", "nodes", "discrete", "path", "lex(cost,nodes)", "product(bool,cost)", "hoare(product(discrete,cost))", "rev(cost)"] {
        let d = parse_domain(text, &order).unwrap();
        let r = probe_laws(&d, 300, 11).unwrap();
        assert!(r.passed(), "{text}: {:?}", r.violations);
    }
}
