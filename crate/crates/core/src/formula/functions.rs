//! Function and aggregator registry.
//!
//! Every function is n-ary where that makes sense, so the same entry serves as
//! a pointwise operator `f(a, b, ..)` and as the aggregator of a modal
//! operator, folding the multiset of neighbour values. An empty fold yields
//! the function's unit.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::FormulaError;
use crate::domains::{Domain, ExtRat, Mark, NodeOrder, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Exact(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn admits(self, n: usize) -> bool {
        match self {
            Arity::Exact(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

/// Evaluation context of one function call at one node.
pub struct CallCtx<'a> {
    pub node: usize,
    pub order: &'a Arc<NodeOrder>,
    pub result: &'a Domain,
    pub args: &'a [Domain],
}

pub trait Function: Send + Sync {
    fn arity(&self) -> Arity;

    /// Whether the function is monotone in every argument, which allows it
    /// on the path from a fixpoint binder to its variable.
    fn monotone(&self) -> bool {
        false
    }

    /// Whether the function can fold a multiset in a single domain.
    fn aggregates(&self) -> bool {
        false
    }

    /// Domain expected of argument `k`, given the expected result and the
    /// argument domains known so far.
    fn arg_hint(&self, k: usize, result: Option<&Domain>, known: &[Option<Domain>], order: &Arc<NodeOrder>)
        -> Option<Domain>;

    fn result(&self, args: &[Domain], expected: Option<&Domain>, order: &Arc<NodeOrder>)
        -> Result<Domain, FormulaError>;

    fn apply(&self, ctx: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError>;
}

#[derive(Clone, Default)]
pub struct FunctionRegistry {
    map: BTreeMap<String, Arc<dyn Function>>,
}

impl fmt::Debug for FunctionRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.map.keys()).finish()
    }
}

impl FunctionRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Built-in functions plus the rescue helpers.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        for (name, kind) in [
            ("join", Fold::Join),
            ("plus", Fold::Plus),
            ("meet", Fold::Meet),
            ("times", Fold::Times),
            ("min1", Fold::Join),
            ("union", Fold::Union),
            ("inter", Fold::Inter),
            ("cup", Fold::Union),
            ("cap", Fold::Inter),
            ("min", Fold::Min),
            ("max", Fold::Max),
            ("add", Fold::Sum),
            ("eq", Fold::Agree),
        ] {
            r.insert(name, Arc::new(kind));
        }
        r.insert("or", Arc::new(BoolFold(false)));
        r.insert("and", Arc::new(BoolFold(true)));
        r.insert("not", Arc::new(Not));
        r.insert("neq", Arc::new(Compare(false)));
        r.insert("same", Arc::new(Compare(true)));
        r.insert("ite", Arc::new(Ite));
        r.insert("self", Arc::new(SelfNode));
        r.insert("none", Arc::new(MarkConst(Mark::Conflict)));
        r.insert("any", Arc::new(MarkConst(Mark::Any)));
        r.insert("is_empty", Arc::new(IsEmpty));
        r.insert("fst", Arc::new(Project(0)));
        r.insert("snd", Arc::new(Project(1)));
        crate::rescue::register_functions(&mut r);
        r
    }

    pub fn insert(&mut self, name: &str, f: Arc<dyn Function>) {
        self.map.insert(name.to_string(), f);
    }

    pub fn get(&self, name: &str) -> Result<&Arc<dyn Function>, FormulaError> {
        self.map.get(name).ok_or_else(|| FormulaError::UnknownFunction(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.map.keys()
    }
}

fn type_err(msg: impl Into<String>) -> FormulaError {
    FormulaError::Type(msg.into())
}

fn runtime(msg: impl Into<String>) -> FormulaError {
    FormulaError::Runtime(msg.into())
}

/// All arguments and the result share one domain.
fn shared_hint(result: Option<&Domain>, known: &[Option<Domain>]) -> Option<Domain> {
    result.cloned().or_else(|| known.iter().flatten().next().cloned())
}

fn shared_result(name: &str, args: &[Domain], expected: Option<&Domain>) -> Result<Domain, FormulaError> {
    let d = args.first().or(expected).cloned().ok_or_else(|| type_err(format!("cannot infer the domain of {name}")))?;
    if let Some(bad) = args.iter().find(|a| **a != d) {
        return Err(type_err(format!("{name} mixes domains {d} and {bad}")));
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy)]
enum Fold {
    Join,
    Plus,
    Meet,
    Times,
    Union,
    Inter,
    Min,
    Max,
    Sum,
    Agree,
}

impl Fold {
    fn name(self) -> &'static str {
        match self {
            Fold::Join => "join",
            Fold::Plus => "plus",
            Fold::Meet => "meet",
            Fold::Times => "times",
            Fold::Union => "union",
            Fold::Inter => "inter",
            Fold::Min => "min",
            Fold::Max => "max",
            Fold::Sum => "add",
            Fold::Agree => "eq",
        }
    }
}

/// Largest and smallest numbers of a numeric domain.
fn numeric_bounds(d: &Domain) -> Option<(ExtRat, ExtRat)> {
    match d {
        Domain::Tropical | Domain::Cost => Some((ExtRat::zero(), ExtRat::Inf)),
        Domain::Interval { lo, hi } => Some((lo.clone(), hi.clone())),
        Domain::Reversed(inner) => numeric_bounds(inner),
        _ => None,
    }
}

fn num_of<'a>(v: &'a Value, op: &str) -> Result<&'a ExtRat, FormulaError> {
    v.as_num().ok_or_else(|| runtime(format!("{op} expects numbers, got {v}")))
}

/// Combines two agreement candidates: `any` is the unit, `none` absorbs, and
/// distinct values conflict.
pub(crate) fn agree(a: &Value, b: &Value) -> Value {
    match (a, b) {
        (Value::Mark(Mark::Any), x) | (x, Value::Mark(Mark::Any)) => x.clone(),
        (Value::Mark(Mark::Conflict), _) | (_, Value::Mark(Mark::Conflict)) => Value::Mark(Mark::Conflict),
        (x, y) if x == y => x.clone(),
        _ => Value::Mark(Mark::Conflict),
    }
}

impl Function for Fold {
    fn arity(&self) -> Arity {
        Arity::AtLeast(0)
    }

    fn monotone(&self) -> bool {
        !matches!(self, Fold::Agree)
    }

    fn aggregates(&self) -> bool {
        true
    }

    fn arg_hint(&self, _: usize, result: Option<&Domain>, known: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        shared_hint(result, known)
    }

    fn result(&self, args: &[Domain], expected: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        let d = shared_result(self.name(), args, expected)?;
        match self {
            Fold::Min | Fold::Max | Fold::Sum if numeric_bounds(&d).is_none() => {
                Err(type_err(format!("{} needs a numeric domain, not {d}", self.name())))
            }
            Fold::Union | Fold::Inter if !matches!(d, Domain::PowerSet { .. } | Domain::Hoare(_)) => {
                Err(type_err(format!("{} needs a set domain, not {d}", self.name())))
            }
            _ => Ok(d),
        }
    }

    fn apply(&self, ctx: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        let d = ctx.result;
        match self {
            Fold::Join | Fold::Union => {
                if let (Fold::Union, Domain::PowerSet { .. }) = (self, d) {
                    let mut acc = std::collections::BTreeSet::new();
                    for a in args {
                        match a {
                            Value::Set(s) => acc.extend(s.iter().cloned()),
                            other => return Err(runtime(format!("union expects sets, got {other}"))),
                        }
                    }
                    return Ok(Value::Set(acc));
                }
                let mut acc = d.bottom()?;
                for a in args {
                    acc = d.join(&acc, a)?;
                }
                Ok(acc)
            }
            Fold::Plus => Ok(d.plus(args)?),
            Fold::Times => Ok(d.times_all(args)?),
            Fold::Meet | Fold::Inter => {
                let Some((first, rest)) = args.split_first() else { return Ok(d.top()?) };
                let mut acc = first.clone();
                for a in rest {
                    acc = d.meet(&acc, a)?;
                }
                Ok(acc)
            }
            Fold::Min | Fold::Max => {
                let (lo, hi) = numeric_bounds(d).ok_or_else(|| runtime("min/max on a non-numeric domain"))?;
                let mut acc = if matches!(self, Fold::Min) { hi } else { lo };
                for a in args {
                    let q = num_of(a, self.name())?;
                    acc = if matches!(self, Fold::Min) { ExtRat::min_of(&acc, q) } else { ExtRat::max_of(&acc, q) };
                }
                Ok(Value::Num(acc))
            }
            Fold::Sum => {
                let mut acc = ExtRat::zero();
                for a in args {
                    acc = &acc + num_of(a, "add")?;
                }
                Ok(Value::Num(acc))
            }
            Fold::Agree => Ok(args.iter().fold(Value::Mark(Mark::Any), |acc, v| agree(&acc, v))),
        }
    }
}

/// `or` (unit false) and `and` (unit true).
struct BoolFold(bool);

impl Function for BoolFold {
    fn arity(&self) -> Arity {
        Arity::AtLeast(0)
    }

    fn monotone(&self) -> bool {
        true
    }

    fn aggregates(&self) -> bool {
        true
    }

    fn arg_hint(&self, _: usize, _: Option<&Domain>, _: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        Some(Domain::Bool)
    }

    fn result(&self, args: &[Domain], _: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        if let Some(bad) = args.iter().find(|a| **a != Domain::Bool) {
            return Err(type_err(format!("boolean connective applied to {bad}")));
        }
        Ok(Domain::Bool)
    }

    fn apply(&self, _: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        let unit = self.0;
        let mut acc = unit;
        for a in args {
            let b = a.as_bool().ok_or_else(|| runtime(format!("expected a truth value, got {a}")))?;
            acc = if unit { acc && b } else { acc || b };
        }
        Ok(Value::Bool(acc))
    }
}

struct Not;

impl Function for Not {
    fn arity(&self) -> Arity {
        Arity::Exact(1)
    }

    fn arg_hint(&self, _: usize, _: Option<&Domain>, _: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        Some(Domain::Bool)
    }

    fn result(&self, args: &[Domain], _: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        if args[0] != Domain::Bool {
            return Err(type_err(format!("not applied to {}", args[0])));
        }
        Ok(Domain::Bool)
    }

    fn apply(&self, _: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        let b = args[0].as_bool().ok_or_else(|| runtime(format!("expected a truth value, got {}", args[0])))?;
        Ok(Value::Bool(!b))
    }
}

/// `same(a, b)` is pointwise equality, `neq(a, b)` its negation.
struct Compare(bool);

impl Function for Compare {
    fn arity(&self) -> Arity {
        Arity::Exact(2)
    }

    fn arg_hint(&self, k: usize, _: Option<&Domain>, known: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        known.get(1 - k.min(1)).cloned().flatten()
    }

    fn result(&self, _: &[Domain], _: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        Ok(Domain::Bool)
    }

    fn apply(&self, _: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        Ok(Value::Bool((args[0] == args[1]) == self.0))
    }
}

/// `ite(c, a, b)`.
struct Ite;

impl Function for Ite {
    fn arity(&self) -> Arity {
        Arity::Exact(3)
    }

    fn arg_hint(&self, k: usize, result: Option<&Domain>, known: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        if k == 0 {
            Some(Domain::Bool)
        } else {
            result.cloned().or_else(|| known.get(3 - k).cloned().flatten())
        }
    }

    fn result(&self, args: &[Domain], _: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        if args[0] != Domain::Bool || args[1] != args[2] {
            return Err(type_err(format!("ite over {}, {}, {}", args[0], args[1], args[2])));
        }
        Ok(args[1].clone())
    }

    fn apply(&self, _: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        match args[0] {
            Value::Bool(true) => Ok(args[1].clone()),
            Value::Bool(false) => Ok(args[2].clone()),
            ref other => Err(runtime(format!("ite condition {other} is not a truth value"))),
        }
    }
}

/// The evaluating node's identifier.
struct SelfNode;

impl Function for SelfNode {
    fn arity(&self) -> Arity {
        Arity::Exact(0)
    }

    fn arg_hint(&self, _: usize, _: Option<&Domain>, _: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        None
    }

    fn result(&self, _: &[Domain], expected: Option<&Domain>, order: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        match expected {
            Some(d @ (Domain::Nodes(_) | Domain::Discrete(_))) => Ok(d.clone()),
            _ => Ok(Domain::Nodes(order.clone())),
        }
    }

    fn apply(&self, ctx: &CallCtx<'_>, _: &[Value]) -> Result<Value, FormulaError> {
        Ok(Value::Node(ctx.order.names()[ctx.node].clone()))
    }
}

/// `none()` and `any()`, the agreement markers.
struct MarkConst(Mark);

impl Function for MarkConst {
    fn arity(&self) -> Arity {
        Arity::Exact(0)
    }

    fn arg_hint(&self, _: usize, _: Option<&Domain>, _: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        None
    }

    fn result(&self, _: &[Domain], expected: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        Ok(expected.cloned().unwrap_or(Domain::Bool))
    }

    fn apply(&self, _: &CallCtx<'_>, _: &[Value]) -> Result<Value, FormulaError> {
        Ok(Value::Mark(self.0))
    }
}

struct IsEmpty;

impl Function for IsEmpty {
    fn arity(&self) -> Arity {
        Arity::Exact(1)
    }

    fn arg_hint(&self, _: usize, _: Option<&Domain>, _: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        None
    }

    fn result(&self, _: &[Domain], _: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        Ok(Domain::Bool)
    }

    fn apply(&self, _: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        match &args[0] {
            Value::Set(s) => Ok(Value::Bool(s.is_empty())),
            Value::Antichain(a) => Ok(Value::Bool(a.is_empty())),
            other => Err(runtime(format!("is_empty expects a set, got {other}"))),
        }
    }
}

/// Tuple projection.
struct Project(usize);

fn component(d: &Domain, k: usize) -> Option<Domain> {
    match d {
        Domain::Product(parts) => parts.get(k).cloned(),
        Domain::Lex(a, b) => match k {
            0 => Some((**a).clone()),
            1 => Some((**b).clone()),
            _ => None,
        },
        _ => None,
    }
}

impl Function for Project {
    fn arity(&self) -> Arity {
        Arity::Exact(1)
    }

    fn arg_hint(&self, _: usize, _: Option<&Domain>, _: &[Option<Domain>], _: &Arc<NodeOrder>) -> Option<Domain> {
        None
    }

    fn result(&self, args: &[Domain], _: Option<&Domain>, _: &Arc<NodeOrder>) -> Result<Domain, FormulaError> {
        component(&args[0], self.0).ok_or_else(|| type_err(format!("no component {} in {}", self.0, args[0])))
    }

    fn apply(&self, _: &CallCtx<'_>, args: &[Value]) -> Result<Value, FormulaError> {
        args[0]
            .as_tuple()
            .and_then(|t| t.get(self.0))
            .cloned()
            .ok_or_else(|| runtime(format!("cannot project {}", args[0])))
    }
}
