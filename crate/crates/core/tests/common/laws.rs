//! Value generators and law statements for field domains, written against
//! the public order and operations only.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use smuc::domains::{parse_domain, Domain, ExtRat, NodeOrder, PathValue, Value};

pub fn order() -> Arc<NodeOrder> {
    Arc::new(NodeOrder::from_strs(&["a", "b", "c", "d"]))
}

pub fn domain(text: &str) -> Domain {
    parse_domain(text, &order()).unwrap()
}

pub fn number() -> BoxedStrategy<Value> {
    prop_oneof![
        1 => Just(Value::inf()),
        4 => (0i64..30).prop_map(Value::num),
        2 => (0i64..60, 1i64..5).prop_map(|(n, d)| Value::Num(ExtRat::new_ratio(n, d))),
    ]
    .boxed()
}

pub fn node() -> BoxedStrategy<Value> {
    prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(Value::node).boxed()
}

/// Elements of `d` built from its structure alone.
pub fn values(d: &Domain) -> BoxedStrategy<Value> {
    match d {
        Domain::Bool => any::<bool>().prop_map(Value::Bool).boxed(),
        Domain::Tropical | Domain::Cost => number(),
        Domain::Interval { .. } => (0i64..=8).prop_map(|k| Value::Num(ExtRat::new_ratio(k, 8))).boxed(),
        Domain::PowerSet { .. } => {
            let Ok(Value::Set(u)) = d.top() else { panic!("bounded universe expected") };
            let u: Vec<Value> = u.into_iter().collect();
            prop::sample::subsequence(u.clone(), 0..=u.len()).prop_map(Value::set).boxed()
        }
        Domain::Nodes(_) | Domain::Discrete(_) => node(),
        Domain::Paths(_) => prop_oneof![
            1 => Just(Value::Path(PathValue::Top)),
            6 => prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 0..4)
                .prop_map(|w| Value::Path(PathValue::from_nodes(&w))),
        ]
        .boxed(),
        Domain::Product(parts) => {
            let gens: Vec<BoxedStrategy<Value>> = parts.iter().map(values).collect();
            gens.prop_map(Value::Tuple).boxed()
        }
        Domain::Lex(a, b) => (values(a), values(b)).prop_map(|(x, y)| Value::pair(x, y)).boxed(),
        Domain::Hoare(inner) => {
            let inner = (**inner).clone();
            prop::collection::vec(values(&inner), 0..4)
                .prop_map(move |xs| {
                    // Keep the maximal elements: the canonical antichain.
                    let mut keep: Vec<Value> = Vec::new();
                    for x in &xs {
                        let dominated = xs.iter().any(|y| y != x && inner.leq(x, y).unwrap());
                        if !dominated && !keep.contains(x) {
                            keep.push(x.clone());
                        }
                    }
                    keep.sort();
                    Value::Antichain(keep)
                })
                .boxed()
        }
        Domain::Reversed(inner) => values(inner),
    }
}

pub fn same(d: &Domain, a: &Value, b: &Value) -> bool {
    d.leq(a, b).unwrap() && d.leq(b, a).unwrap()
}

pub fn order_and_lattice(d: &Domain, a: &Value, b: &Value, c: &Value) -> Result<(), TestCaseError> {
    let le = |x: &Value, y: &Value| d.leq(x, y).unwrap();
    prop_assert!(le(a, a));
    if le(a, b) && le(b, a) {
        prop_assert_eq!(a, b);
    }
    if le(a, b) && le(b, c) {
        prop_assert!(le(a, c));
    }
    if let Ok(j) = d.join(a, b) {
        prop_assert!(le(a, &j) && le(b, &j), "join {} of {} and {} is no upper bound", j, a, b);
        if le(a, c) && le(b, c) {
            prop_assert!(le(&j, c), "join {} of {} and {} is above the bound {}", j, a, b, c);
        }
    }
    if let Ok(m) = d.meet(a, b) {
        prop_assert!(le(&m, a) && le(&m, b), "meet {} of {} and {} is no lower bound", m, a, b);
        if le(c, a) && le(c, b) {
            prop_assert!(le(c, &m));
        }
    }
    if let Ok(bot) = d.bottom() {
        prop_assert!(le(&bot, a));
    }
    if let Ok(top) = d.top() {
        prop_assert!(le(a, &top));
    }
    Ok(())
}

pub fn semiring(d: &Domain, a: &Value, b: &Value, c: &Value) -> Result<(), TestCaseError> {
    let add = |x: &Value, y: &Value| d.plus(&[x.clone(), y.clone()]).unwrap();
    let mul = |x: &Value, y: &Value| d.times(x, y).unwrap();
    let zero = d.plus(&[]).unwrap();
    let one = d.times_all(&[]).unwrap();
    prop_assert!(same(d, &add(a, b), &add(b, a)));
    prop_assert!(same(d, &add(&add(a, b), c), &add(a, &add(b, c))));
    prop_assert!(same(d, &add(a, a), a));
    prop_assert!(same(d, &mul(a, b), &mul(b, a)));
    prop_assert!(same(d, &mul(&mul(a, b), c), &mul(a, &mul(b, c))));
    prop_assert!(
        same(d, &mul(a, &add(b, c)), &add(&mul(a, b), &mul(a, c))),
        "{} x ({} + {}) does not distribute",
        a,
        b,
        c
    );
    prop_assert!(same(d, &add(a, &zero), a));
    prop_assert!(same(d, &mul(a, &one), a));
    prop_assert!(same(d, &mul(a, &zero), &zero));
    prop_assert!(same(d, &add(a, &one), &one));
    prop_assert_eq!(d.leq(a, b).unwrap(), same(d, &add(a, b), b));
    Ok(())
}

pub fn triples(d: &Domain) -> impl Strategy<Value = (Value, Value, Value)> {
    (values(d), values(d), values(d))
}

