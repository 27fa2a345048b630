//! Random elements of a domain, used by sampling-based probes.

use rand::Rng;

use super::{Domain, ExtRat, PathValue, Value};

impl Domain {
    /// A random element. Unbounded set domains only ever yield the empty set,
    /// since their element type is not known.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Value {
        match self {
            Domain::Bool => Value::Bool(rng.random_bool(0.5)),
            Domain::Tropical | Domain::Cost => {
                if rng.random_bool(0.2) {
                    Value::inf()
                } else {
                    Value::num(rng.random_range(0..6))
                }
            }
            Domain::Interval { lo, hi } => match rng.random_range(0..3) {
                0 => Value::Num(lo.clone()),
                1 => Value::Num(hi.clone()),
                _ if lo.is_finite() && hi.is_finite() => {
                    let k = rng.random_range(1..10);
                    let t = ExtRat::new_ratio(k, 10);
                    let span = &hi.clone() + &neg(lo);
                    Value::Num(&lo.clone() + &span.mul(&t))
                }
                _ => Value::Num(lo.clone()),
            },
            Domain::PowerSet { universe: Some(u) } => {
                Value::Set(u.iter().filter(|_| rng.random_bool(0.4)).cloned().collect())
            }
            Domain::PowerSet { universe: None } => Value::Set(Default::default()),
            Domain::Nodes(o) | Domain::Discrete(o) => {
                if o.is_empty() {
                    return Value::Tuple(vec![]);
                }
                Value::Node(o.names()[rng.random_range(0..o.len())].clone())
            }
            Domain::Paths(o) => {
                if o.is_empty() || rng.random_bool(0.1) {
                    return Value::Path(PathValue::Top);
                }
                let len = rng.random_range(0..4);
                let w = (0..len).map(|_| o.names()[rng.random_range(0..o.len())].clone()).collect();
                Value::Path(PathValue::Word(w))
            }
            Domain::Product(parts) => Value::Tuple(parts.iter().map(|d| d.sample(rng)).collect()),
            Domain::Lex(a, b) => Value::pair(a.sample(rng), b.sample(rng)),
            Domain::Hoare(inner) => {
                let n = rng.random_range(0..4);
                let items: Vec<Value> = (0..n).map(|_| inner.sample(rng)).collect();
                Value::Antichain(inner.canonical_antichain(items).unwrap_or_default())
            }
            Domain::Reversed(inner) => inner.sample(rng),
        }
    }
}

fn neg(q: &ExtRat) -> ExtRat {
    q.mul(&ExtRat::int(-1))
}
