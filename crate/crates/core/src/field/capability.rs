//! Edge capabilities: value transformers attached to edges.
//!
//! A capability sees the edge it is applied on and may read node labels at
//! either endpoint, which the gradient-style capabilities need.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::Value as Json;

use crate::domains::{Domain, ExtRat, NodeOrder, PathValue, Value};

use super::FieldError;

/// Read access to node labels, as seen from wherever a capability runs.
pub trait LabelView: Sync {
    fn label_value(&self, label: &str, node: usize) -> Result<Value, FieldError>;
}

/// The edge a capability is applied on.
pub struct EdgeCtx<'a> {
    pub src: usize,
    pub dst: usize,
    pub order: &'a NodeOrder,
    pub labels: &'a dyn LabelView,
}

pub trait Capability: Send + Sync + fmt::Debug {
    fn apply(&self, ctx: &EdgeCtx<'_>, v: &Value) -> Result<Value, FieldError>;

    /// Node labels read through the context, at either endpoint.
    fn reads(&self) -> Vec<String> {
        Vec::new()
    }
}

/// A capability by name and textual arguments, as written in field documents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CapSpec {
    pub name: String,
    pub args: Vec<String>,
}

impl CapSpec {
    pub fn new(name: &str, args: &[&str]) -> Self {
        CapSpec { name: name.to_string(), args: args.iter().map(|s| s.to_string()).collect() }
    }

    pub fn to_json(&self) -> Json {
        serde_json::json!({ "cap": self.name, "args": self.args })
    }

    pub fn from_json(j: &Json) -> Result<Self, FieldError> {
        let bad = || FieldError::Schema(format!("bad capability {j}"));
        let name = j.get("cap").and_then(Json::as_str).ok_or_else(bad)?;
        let args = match j.get("args") {
            None => Vec::new(),
            Some(Json::Array(items)) => items
                .iter()
                .map(|a| match a {
                    Json::String(s) => Ok(s.clone()),
                    other => Ok(other.to_string()),
                })
                .collect::<Result<_, FieldError>>()?,
            Some(_) => return Err(bad()),
        };
        Ok(CapSpec { name: name.to_string(), args })
    }
}

impl fmt::Display for CapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.args.join(","))
    }
}

pub type CapBuilder =
    Arc<dyn Fn(&[String], &Domain, &Arc<NodeOrder>) -> Result<Arc<dyn Capability>, FieldError> + Send + Sync>;

/// Named capability builders. Builders receive the textual arguments, the
/// edge label's domain and the node order.
#[derive(Clone)]
pub struct CapRegistry {
    builders: BTreeMap<String, CapBuilder>,
}

impl fmt::Debug for CapRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.builders.keys()).finish()
    }
}

impl Default for CapRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

fn num_arg(args: &[String], k: usize, cap: &str) -> Result<ExtRat, FieldError> {
    let text = args.get(k).ok_or_else(|| FieldError::BadCapArgs(format!("{cap} expects an argument")))?;
    text.parse::<ExtRat>().map_err(|e| FieldError::BadCapArgs(format!("{cap}: {e}")))
}

fn opt_num_arg(args: &[String], cap: &str) -> Result<ExtRat, FieldError> {
    if args.is_empty() {
        Ok(ExtRat::zero())
    } else {
        num_arg(args, 0, cap)
    }
}

fn label_arg(args: &[String], cap: &str) -> Result<String, FieldError> {
    args.first().cloned().ok_or_else(|| FieldError::BadCapArgs(format!("{cap} expects a label name")))
}

fn hoare_inner(d: &Domain) -> Option<&Domain> {
    match d {
        Domain::Hoare(inner) => Some(inner),
        _ => None,
    }
}

impl CapRegistry {
    pub fn empty() -> Self {
        CapRegistry { builders: BTreeMap::new() }
    }

    /// All built-in capabilities.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register("id", Arc::new(|_, _, _| Ok(Arc::new(Identity) as Arc<dyn Capability>))).unwrap();
        r.register("add", Arc::new(|a, _, _| Ok(Arc::new(AddConst(num_arg(a, 0, "add")?)) as Arc<dyn Capability>)))
            .unwrap();
        r.register(
            "shift_pairs",
            Arc::new(|a, d, _| {
                Ok(Arc::new(ShiftPairs { c: num_arg(a, 0, "shift_pairs")?, domain: d.clone() }) as Arc<dyn Capability>)
            }),
        )
        .unwrap();
        r.register(
            "prefix_src",
            Arc::new(|a, d, _| {
                Ok(Arc::new(PrefixSrc { c: opt_num_arg(a, "prefix_src")?, domain: d.clone() }) as Arc<dyn Capability>)
            }),
        )
        .unwrap();
        r.register(
            "next_hop",
            Arc::new(|a, d, _| {
                let bottom = d.bottom()?;
                Ok(Arc::new(NextHop { c: num_arg(a, 0, "next_hop")?, bottom }) as Arc<dyn Capability>)
            }),
        )
        .unwrap();
        r.register(
            "const",
            Arc::new(|a, _, _| {
                let text = a.first().ok_or_else(|| FieldError::BadCapArgs("const expects a value".into()))?;
                let j: Json = serde_json::from_str(text).map_err(|e| FieldError::BadCapArgs(format!("const: {e}")))?;
                Ok(Arc::new(Constant(Value::from_json(&j)?)) as Arc<dyn Capability>)
            }),
        )
        .unwrap();
        r.register(
            "dst_gradient",
            Arc::new(|a, _, _| Ok(Arc::new(DstGradient { dist: label_arg(a, "dst_gradient")? }) as Arc<dyn Capability>)),
        )
        .unwrap();
        r.register("cogradient", Arc::new(|_, _, _| Ok(Arc::new(Cogradient) as Arc<dyn Capability>))).unwrap();
        r
    }

    pub fn register(&mut self, name: &str, builder: CapBuilder) -> Result<(), FieldError> {
        if self.builders.contains_key(name) {
            return Err(FieldError::DuplicateCapability(name.to_string()));
        }
        self.builders.insert(name.to_string(), builder);
        Ok(())
    }

    pub fn build(
        &self,
        spec: &CapSpec,
        domain: &Domain,
        order: &Arc<NodeOrder>,
    ) -> Result<Arc<dyn Capability>, FieldError> {
        let b = self.builders.get(&spec.name).ok_or_else(|| FieldError::UnknownCapability(spec.name.clone()))?;
        b(&spec.args, domain, order)
    }
}

#[derive(Debug)]
pub struct Identity;

impl Capability for Identity {
    fn apply(&self, _: &EdgeCtx<'_>, v: &Value) -> Result<Value, FieldError> {
        Ok(v.clone())
    }
}

/// `x + c` on numbers.
#[derive(Debug)]
struct AddConst(ExtRat);

impl Capability for AddConst {
    fn apply(&self, _: &EdgeCtx<'_>, v: &Value) -> Result<Value, FieldError> {
        match v {
            Value::Num(q) => Ok(Value::Num(q + &self.0)),
            other => Err(FieldError::CapType { cap: "add".into(), value: other.to_string() }),
        }
    }
}

fn add_to_first_num(t: &Value, c: &ExtRat) -> Option<Value> {
    let items = t.as_tuple()?;
    let k = items.iter().position(|x| matches!(x, Value::Num(_)))?;
    let mut out = items.to_vec();
    if let Value::Num(q) = &items[k] {
        out[k] = Value::Num(q + c);
    }
    Some(Value::Tuple(out))
}

fn rebuild_collection(orig: &Value, items: Vec<Value>, domain: &Domain) -> Result<Value, FieldError> {
    match orig {
        Value::Set(_) => Ok(Value::Set(items.into_iter().collect())),
        Value::Antichain(_) => match hoare_inner(domain) {
            Some(inner) => Ok(Value::Antichain(inner.canonical_antichain(items)?)),
            None => {
                let mut v = items;
                v.sort();
                v.dedup();
                Ok(Value::Antichain(v))
            }
        },
        _ => unreachable!("caller checked the collection kind"),
    }
}

fn elements(v: &Value) -> Option<Vec<&Value>> {
    match v {
        Value::Set(s) => Some(s.iter().collect()),
        Value::Antichain(a) => Some(a.iter().collect()),
        _ => None,
    }
}

/// Adds `c` to the numeric component of every pair in a set.
#[derive(Debug)]
struct ShiftPairs {
    c: ExtRat,
    domain: Domain,
}

impl Capability for ShiftPairs {
    fn apply(&self, _: &EdgeCtx<'_>, v: &Value) -> Result<Value, FieldError> {
        let bad = || FieldError::CapType { cap: "shift_pairs".into(), value: v.to_string() };
        let elems = elements(v).ok_or_else(bad)?;
        let shifted = elems
            .into_iter()
            .map(|e| add_to_first_num(e, &self.c).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?;
        rebuild_collection(v, shifted, &self.domain)
    }
}

/// Prepends the edge source to the path component of every pair in a set and
/// adds `c` to its numeric component.
#[derive(Debug)]
struct PrefixSrc {
    c: ExtRat,
    domain: Domain,
}

impl Capability for PrefixSrc {
    fn apply(&self, ctx: &EdgeCtx<'_>, v: &Value) -> Result<Value, FieldError> {
        let bad = || FieldError::CapType { cap: "prefix_src".into(), value: v.to_string() };
        let src = ctx.order.names()[ctx.src].clone();
        let elems = elements(v).ok_or_else(bad)?;
        let mut out = Vec::with_capacity(elems.len());
        for e in elems {
            let items = e.as_tuple().ok_or_else(bad)?;
            let moved: Vec<Value> = items
                .iter()
                .map(|x| match x {
                    Value::Path(p) => Value::Path(p.prefixed(&src)),
                    Value::Num(q) => Value::Num(q + &self.c),
                    other => other.clone(),
                })
                .collect();
            out.push(Value::Tuple(moved));
        }
        rebuild_collection(v, out, &self.domain)
    }
}

/// `(c', m) -> (c' + c, dst)` on (cost, node) pairs; an unreachable value
/// maps to the bottom of the label domain.
#[derive(Debug)]
struct NextHop {
    c: ExtRat,
    bottom: Value,
}

impl Capability for NextHop {
    fn apply(&self, ctx: &EdgeCtx<'_>, v: &Value) -> Result<Value, FieldError> {
        let bad = || FieldError::CapType { cap: "next_hop".into(), value: v.to_string() };
        let items = v.as_tuple().filter(|t| t.len() == 2).ok_or_else(bad)?;
        let cost = items[0].as_num().ok_or_else(bad)?;
        if cost.is_inf() {
            return Ok(self.bottom.clone());
        }
        Ok(Value::pair(Value::Num(cost + &self.c), Value::Node(ctx.order.names()[ctx.dst].clone())))
    }
}

#[derive(Debug)]
struct Constant(Value);

impl Capability for Constant {
    fn apply(&self, _: &EdgeCtx<'_>, _: &Value) -> Result<Value, FieldError> {
        Ok(self.0.clone())
    }
}

/// Forwards (cost, path) pairs along an edge only when the edge source's
/// next hop, read from the distance label, is the edge target; forwarded
/// paths get the source prepended.
#[derive(Debug)]
struct DstGradient {
    dist: String,
}

impl Capability for DstGradient {
    fn apply(&self, ctx: &EdgeCtx<'_>, v: &Value) -> Result<Value, FieldError> {
        let bad = |x: &Value| FieldError::CapType { cap: "dst_gradient".into(), value: x.to_string() };
        let d = ctx.labels.label_value(&self.dist, ctx.src)?;
        let next = d.as_tuple().and_then(|t| t.get(1)).and_then(Value::as_node).ok_or_else(|| bad(&d))?;
        let Value::Set(items) = v else { return Err(bad(v)) };
        if ctx.order.position(next) != Some(ctx.dst) {
            return Ok(Value::Set(Default::default()));
        }
        let src = ctx.order.names()[ctx.src].clone();
        let mut out = std::collections::BTreeSet::new();
        for e in items {
            let t = e.as_tuple().filter(|t| t.len() == 2).ok_or_else(|| bad(e))?;
            let Value::Path(p) = &t[1] else { return Err(bad(e)) };
            out.insert(Value::pair(t[0].clone(), Value::Path(p.prefixed(&src))));
        }
        Ok(Value::Set(out))
    }

    fn reads(&self) -> Vec<String> {
        vec![self.dist.clone()]
    }
}

/// Keeps the paths that start at the edge source, with that first step removed.
#[derive(Debug)]
struct Cogradient;

impl Capability for Cogradient {
    fn apply(&self, ctx: &EdgeCtx<'_>, v: &Value) -> Result<Value, FieldError> {
        let bad = |x: &Value| FieldError::CapType { cap: "cogradient".into(), value: x.to_string() };
        let Value::Set(items) = v else { return Err(bad(v)) };
        let src = &ctx.order.names()[ctx.src];
        let mut out = std::collections::BTreeSet::new();
        for e in items {
            match e {
                Value::Path(PathValue::Word(w)) => {
                    if w.first() == Some(src) {
                        out.insert(Value::Path(PathValue::Word(w[1..].to_vec())));
                    }
                }
                other => return Err(bad(other)),
            }
        }
        Ok(Value::Set(out))
    }
}
