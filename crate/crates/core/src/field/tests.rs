use super::*;
use crate::domains::{ExtRat, PathValue};
use serde_json::json;

fn fig1_doc() -> Json {
    json!({
        "nodes": [{"id": "0"}, {"id": "1"}, {"id": "2"}, {"id": "3"}],
        "edges": [["0","2"], ["2","1"], ["2","3"], ["3","1"], ["1","0"]],
        "node_labels": {
            "i": {"domain": "bool", "values": {"0": true, "1": false, "2": false, "3": false}}
        },
        "edge_labels": {}
    })
}

#[test]
fn loads_small_graph() {
    let f = Field::from_json(&fig1_doc(), &CapRegistry::builtin()).unwrap();
    assert_eq!(f.node_count(), 4);
    assert_eq!(f.edges().len(), 5);
    assert_eq!(f.values("i").unwrap()[0], Value::Bool(true));
    assert_eq!(f.neighbours(2), vec![0, 1, 3]);
}

#[test]
fn empty_field_is_valid() {
    let doc = json!({"nodes": [], "edges": [], "node_labels": {}, "edge_labels": {}});
    let f = Field::from_json(&doc, &CapRegistry::builtin()).unwrap();
    assert_eq!(f.node_count(), 0);
}

#[test]
fn rejects_dangling_edge() {
    let doc = json!({"nodes": [{"id": "0"}], "edges": [["0", "9"]]});
    assert!(matches!(Field::from_json(&doc, &CapRegistry::builtin()), Err(FieldError::DanglingEdge(..))));
}

#[test]
fn rejects_partial_label() {
    let doc = json!({
        "nodes": [{"id": "0"}, {"id": "1"}], "edges": [],
        "node_labels": {"i": {"domain": "bool", "values": {"0": true}}}
    });
    assert!(matches!(Field::from_json(&doc, &CapRegistry::builtin()), Err(FieldError::NonTotal { .. })));
}

#[test]
fn rejects_unknown_capability() {
    let doc = json!({
        "nodes": ["0", "1"], "edges": [["0", "1"]],
        "edge_labels": {"a": {"domain": "cost", "caps": {"0,1": {"cap": "warp", "args": []}}}}
    });
    assert!(matches!(Field::from_json(&doc, &CapRegistry::builtin()), Err(FieldError::UnknownCapability(_))));
}

#[test]
fn document_round_trip() {
    let doc = json!({
        "nodes": [{"id": "0"}, {"id": "1"}],
        "edges": [["0", "1"], ["1", "0"]],
        "node_labels": {"c": {"domain": "cost", "values": {"0": {"num": "0/1"}, "1": {"num": "inf"}}}},
        "edge_labels": {"a": {"domain": "cost", "caps": {
            "0,1": {"cap": "add", "args": ["1"]}, "1,0": {"cap": "add", "args": ["2"]}}}}
    });
    let f = Field::from_json(&doc, &CapRegistry::builtin()).unwrap();
    assert_eq!(f.to_json(), doc);
}

fn ctx_field() -> Field {
    Field::from_names(&["0", "1", "2", "3"], &[("2", "3"), ("0", "1")]).unwrap()
}

#[test]
fn add_capability() {
    let f = ctx_field();
    let reg = CapRegistry::builtin();
    let cap = reg.build(&CapSpec::new("add", &["1"]), &Domain::Cost, f.order()).unwrap();
    let ctx = EdgeCtx { src: 0, dst: 1, order: f.order(), labels: &f };
    assert_eq!(cap.apply(&ctx, &Value::num(0)).unwrap(), Value::num(1));
    let id = reg.build(&CapSpec::new("id", &[]), &Domain::Cost, f.order()).unwrap();
    assert_eq!(id.apply(&ctx, &Value::num(7)).unwrap(), Value::num(7));
}

#[test]
fn prefix_src_one_step() {
    let f = ctx_field();
    let o = f.order().clone();
    let d = Domain::hoare(Domain::lex(Domain::Cost, Domain::Paths(o.clone()).reverse()));
    let cap = CapRegistry::builtin().build(&CapSpec::new("prefix_src", &["1"]), &d, &o).unwrap();
    let ctx = EdgeCtx { src: 2, dst: 3, order: &o, labels: &f };
    let input = Value::Antichain(vec![Value::pair(Value::num(1), Value::Path(PathValue::from_nodes(&["1", "0"])))]);
    let expected =
        Value::Antichain(vec![Value::pair(Value::num(2), Value::Path(PathValue::from_nodes(&["2", "1", "0"])))]);
    assert_eq!(cap.apply(&ctx, &input).unwrap(), expected);
}

#[test]
fn next_hop_sends_unreachable_to_bottom() {
    let f = ctx_field();
    let o = f.order().clone();
    let d = Domain::lex(Domain::Cost, Domain::Nodes(o.clone()));
    let cap = CapRegistry::builtin().build(&CapSpec::new("next_hop", &["3"]), &d, &o).unwrap();
    let ctx = EdgeCtx { src: 2, dst: 3, order: &o, labels: &f };
    assert_eq!(
        cap.apply(&ctx, &Value::pair(Value::num(1), Value::node("1"))).unwrap(),
        Value::pair(Value::num(4), Value::node("3"))
    );
    assert_eq!(cap.apply(&ctx, &Value::pair(Value::inf(), Value::node("0"))).unwrap(), d.bottom().unwrap());
}

#[test]
fn duplicate_registration_fails() {
    let mut reg = CapRegistry::builtin();
    let r = reg.register("id", Arc::new(|_, _, _| Ok(Arc::new(Identity) as Arc<dyn Capability>)));
    assert!(matches!(r, Err(FieldError::DuplicateCapability(_))));
}

#[test]
fn lifted_order() {
    let d = Domain::Cost;
    let bot = bottom_valuation(&d, 2).unwrap();
    let a = vec![Value::num(0), Value::num(5)];
    let b = vec![Value::num(5), Value::num(0)];
    assert!(lift_order(&bot, &a, &d).unwrap());
    assert!(!lift_order(&a, &b, &d).unwrap());
    assert!(!lift_order(&b, &a, &d).unwrap());
    assert!(lift_order(&a, &[Value::num(0)], &d).is_err());
    let _ = ExtRat::zero();
}
