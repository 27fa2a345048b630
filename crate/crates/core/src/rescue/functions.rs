//! Helper functions of the rescue program. They take the labels they consult
//! as explicit arguments, so they stay pointwise.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::domains::{Domain, ExtRat, NodeOrder, PathValue, Value};
use crate::formula::{Arity, CallCtx, Function, FormulaError, FunctionRegistry};

pub fn register_functions(r: &mut FunctionRegistry) {
    r.insert("source", Arc::new(Source));
    r.insert("init", Arc::new(Init));
    r.insert("saved", Arc::new(Saved { at_most: false }));
    r.insert("saved_le", Arc::new(Saved { at_most: true }));
    r.insert("choose", Arc::new(Choose { at_most: false }));
    r.insert("choose_le", Arc::new(Choose { at_most: true }));
}

fn distance_domain(order: &Arc<NodeOrder>) -> Domain {
    Domain::lex(Domain::Cost, Domain::Nodes(order.clone()))
}

fn bad(msg: String) -> FormulaError {
    FormulaError::Runtime(msg)
}

fn truth(v: &Value, what: &str) -> Result<bool, FormulaError> {
    v.as_bool().ok_or_else(|| bad(format!("{what} expects a truth value, got {v}")))
}

fn count(v: &Value, what: &str) -> Result<usize, FormulaError> {
    match v {
        Value::Set(s) => Ok(s.len()),
        Value::Antichain(a) => Ok(a.len()),
        other => Err(bad(format!("{what} expects a set, got {other}"))),
    }
}

fn how_many(v: &Value) -> Result<ExtRat, FormulaError> {
    v.as_num().cloned().ok_or_else(|| bad(format!("expected a rescuer count, got {v}")))
}

fn enough(have: usize, need: &ExtRat, at_most: bool) -> bool {
    let have = ExtRat::int(have as i64);
    if at_most {
        have <= *need
    } else {
        have >= *need
    }
}

/// Order on (cost, path) candidates: cost first, then shorter paths, then
/// lexicographic in the node order.
pub fn candidate_cmp(order: &NodeOrder, a: &(ExtRat, Vec<crate::domains::NodeId>), b: &(ExtRat, Vec<crate::domains::NodeId>)) -> Ordering {
    a.0.cmp(&b.0)
        .then(a.1.len().cmp(&b.1.len()))
        .then_with(|| order.cmp_words(&a.1, &b.1).unwrap_or(Ordering::Equal))
}

/// `source(victim)`: victims point at themselves with cost 0, everyone else
/// with infinite cost.
struct Source;

impl Function for Source {
    fn arity(&self) -> Arity {
        Arity::Exact(1)
    }

    fn arg_hint(&self, _: usize, _: Option<&Domain>, _: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        Some(Domain::Bool)
    }

    fn result(&self, _: &[Domain], _: Option<&Domain>, order: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        Ok(distance_domain(order))
    }

    fn apply(&self, ctx: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        let me = Value::Node(ctx.order.names()[ctx.node].clone());
        let cost = if truth(&args[0], "source")? { Value::num(0) } else { Value::inf() };
        Ok(Value::pair(cost, me))
    }
}

/// `init(rescuer, D)`: an available rescuer with a reachable victim starts
/// with its distance and the empty path.
struct Init;

impl Function for Init {
    fn arity(&self) -> Arity {
        Arity::Exact(2)
    }

    fn arg_hint(&self, k: usize, _: Option<&Domain>, _: &[Option<Domain>], order: &Arc<NodeOrder>) -> Option<Domain> {
        Some(if k == 0 { Domain::Bool } else { distance_domain(order) })
    }

    fn result(&self, _: &[Domain], _: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        Ok(Domain::PowerSet { universe: None })
    }

    fn apply(&self, _: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        let mut out = BTreeSet::new();
        if truth(&args[0], "init")? {
            let d = args[1].as_tuple().filter(|t| t.len() == 2).ok_or_else(|| bad(format!("init: bad distance {}", args[1])))?;
            let cost = d[0].as_num().ok_or_else(|| bad(format!("init: bad distance {}", args[1])))?;
            if cost.is_finite() {
                out.insert(Value::pair(d[0].clone(), Value::Path(PathValue::empty())));
            }
        }
        Ok(Value::Set(out))
    }
}

/// `saved(rescuers, howMany)`: enough candidate rescuers have arrived.
/// `saved_le` keeps the literal at-most comparison.
struct Saved {
    at_most: bool,
}

impl Function for Saved {
    fn arity(&self) -> Arity {
        Arity::Exact(2)
    }

    fn arg_hint(&self, k: usize, _: Option<&Domain>, _: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        (k == 0).then_some(Domain::PowerSet { universe: None })
    }

    fn result(&self, _: &[Domain], _: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        Ok(Domain::Bool)
    }

    fn apply(&self, _: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        Ok(Value::Bool(enough(count(&args[0], "saved")?, &how_many(&args[1])?, self.at_most)))
    }
}

/// `choose(victim, rescuers, howMany)`: a saved victim keeps the paths of
/// its `howMany` best candidates.
struct Choose {
    at_most: bool,
}

impl Function for Choose {
    fn arity(&self) -> Arity {
        Arity::Exact(3)
    }

    fn arg_hint(&self, k: usize, _: Option<&Domain>, _: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        match k {
            0 => Some(Domain::Bool),
            1 => Some(Domain::PowerSet { universe: None }),
            _ => None,
        }
    }

    fn result(&self, _: &[Domain], _: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        Ok(Domain::PowerSet { universe: None })
    }

    fn apply(&self, ctx: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        let need = how_many(&args[2])?;
        if !truth(&args[0], "choose")? || !enough(count(&args[1], "choose")?, &need, self.at_most) {
            return Ok(Value::Set(BTreeSet::new()));
        }
        let Value::Set(items) = &args[1] else { unreachable!("count checked a set") };
        let mut cands = Vec::with_capacity(items.len());
        for e in items {
            let t = e.as_tuple().filter(|t| t.len() == 2).ok_or_else(|| bad(format!("choose: bad candidate {e}")))?;
            match (&t[0], &t[1]) {
                (Value::Num(c), Value::Path(PathValue::Word(w))) => cands.push((c.clone(), w.clone())),
                _ => return Err(bad(format!("choose: bad candidate {e}"))),
            }
        }
        cands.sort_by(|a, b| candidate_cmp(ctx.order, a, b));
        let k = need.as_i64().unwrap_or(i64::MAX).max(0) as usize;
        Ok(Value::Set(cands.into_iter().take(k).map(|(_, w)| Value::Path(PathValue::Word(w))).collect()))
    }
}
