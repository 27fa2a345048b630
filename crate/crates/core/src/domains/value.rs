//! Tagged values stored in node labels.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value as Json};

use super::num::ExtRat;
use super::DomainError;

/// A node identifier. Cheap to clone; ordered by its text.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(Arc<str>);

impl NodeId {
    pub fn new(s: &str) -> Self {
        NodeId(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::new(s)
    }
}

/// A finite word over node identifiers, or the top word that dominates all.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathValue {
    Word(Vec<NodeId>),
    Top,
}

impl PathValue {
    pub fn empty() -> Self {
        PathValue::Word(Vec::new())
    }

    pub fn from_nodes<S: AsRef<str>>(ids: &[S]) -> Self {
        PathValue::Word(ids.iter().map(|s| NodeId::new(s.as_ref())).collect())
    }

    /// Prepends `n`; the top word absorbs prefixes.
    pub fn prefixed(&self, n: &NodeId) -> PathValue {
        match self {
            PathValue::Word(w) => {
                let mut out = Vec::with_capacity(w.len() + 1);
                out.push(n.clone());
                out.extend(w.iter().cloned());
                PathValue::Word(out)
            }
            PathValue::Top => PathValue::Top,
        }
    }
}

/// Markers of the agreement combinator: `Any` is its unit, `Conflict` its absorber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    Any,
    Conflict,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Bool(bool),
    Num(ExtRat),
    Node(NodeId),
    Path(PathValue),
    Tuple(Vec<Value>),
    Set(BTreeSet<Value>),
    /// Hoare power domain element: sorted, deduplicated, pairwise incomparable.
    Antichain(Vec<Value>),
    Mark(Mark),
}

impl Value {
    pub fn num(v: i64) -> Value {
        Value::Num(ExtRat::int(v))
    }

    pub fn inf() -> Value {
        Value::Num(ExtRat::Inf)
    }

    pub fn node(s: &str) -> Value {
        Value::Node(NodeId::new(s))
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Tuple(vec![a, b])
    }

    pub fn set<I: IntoIterator<Item = Value>>(items: I) -> Value {
        Value::Set(items.into_iter().collect())
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_num(&self) -> Option<&ExtRat> {
        match self {
            Value::Num(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_node(&self) -> Option<&NodeId> {
        match self {
            Value::Node(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Value]> {
        match self {
            Value::Tuple(t) => Some(t),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Bool(_) => "bool",
            Value::Num(_) => "num",
            Value::Node(_) => "node",
            Value::Path(_) => "path",
            Value::Tuple(_) => "tuple",
            Value::Set(_) => "set",
            Value::Antichain(_) => "antichain",
            Value::Mark(_) => "mark",
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Bool(b) => Json::Bool(*b),
            Value::Num(q) => json!({ "num": q.to_fraction_string() }),
            Value::Node(n) => json!({ "node": n.as_str() }),
            Value::Path(PathValue::Top) => json!({ "path": "top" }),
            Value::Path(PathValue::Word(w)) => {
                json!({ "path": w.iter().map(|n| n.as_str()).collect::<Vec<_>>() })
            }
            Value::Tuple(t) => json!({ "tuple": t.iter().map(Value::to_json).collect::<Vec<_>>() }),
            Value::Set(s) => json!({ "set": s.iter().map(Value::to_json).collect::<Vec<_>>() }),
            Value::Antichain(a) => {
                json!({ "antichain": a.iter().map(Value::to_json).collect::<Vec<_>>() })
            }
            Value::Mark(Mark::Any) => json!({ "mark": "any" }),
            Value::Mark(Mark::Conflict) => json!({ "mark": "none" }),
        }
    }

    /// Decodes the tagged JSON form. Antichains are taken as given; callers that
    /// know the element domain should canonicalize them.
    pub fn from_json(j: &Json) -> Result<Value, DomainError> {
        let bad = || DomainError::Json(j.to_string());
        match j {
            Json::Bool(b) => Ok(Value::Bool(*b)),
            Json::Object(m) if m.len() == 1 => {
                let (tag, body) = m.iter().next().unwrap();
                match tag.as_str() {
                    "num" => {
                        let text = match body {
                            Json::String(s) => s.clone(),
                            Json::Number(n) => n.to_string(),
                            _ => return Err(bad()),
                        };
                        text.parse::<ExtRat>().map(Value::Num).map_err(|_| bad())
                    }
                    "node" => body.as_str().map(Value::node).ok_or_else(bad),
                    "path" => match body {
                        Json::String(s) if s == "top" => Ok(Value::Path(PathValue::Top)),
                        Json::Array(items) => {
                            let ids: Option<Vec<NodeId>> =
                                items.iter().map(|x| x.as_str().map(NodeId::new)).collect();
                            ids.map(|w| Value::Path(PathValue::Word(w))).ok_or_else(bad)
                        }
                        _ => Err(bad()),
                    },
                    "tuple" | "set" | "antichain" => {
                        let items = body.as_array().ok_or_else(bad)?;
                        let vals = items.iter().map(Value::from_json).collect::<Result<Vec<_>, _>>()?;
                        Ok(match tag.as_str() {
                            "tuple" => Value::Tuple(vals),
                            "set" => Value::Set(vals.into_iter().collect()),
                            _ => {
                                let mut v = vals;
                                v.sort();
                                v.dedup();
                                Value::Antichain(v)
                            }
                        })
                    }
                    "mark" => match body.as_str() {
                        Some("any") => Ok(Value::Mark(Mark::Any)),
                        Some("none") => Ok(Value::Mark(Mark::Conflict)),
                        _ => Err(bad()),
                    },
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for PathValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathValue::Top => write!(f, "top"),
            PathValue::Word(w) if w.is_empty() => write!(f, "eps"),
            PathValue::Word(w) => {
                let parts: Vec<&str> = w.iter().map(|n| n.as_str()).collect();
                write!(f, "{}", parts.join("."))
            }
        }
    }
}

fn write_list<'a, I: Iterator<Item = &'a Value>>(f: &mut fmt::Formatter<'_>, items: I) -> fmt::Result {
    for (k, v) in items.enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Num(q) => write!(f, "{q}"),
            Value::Node(n) => write!(f, "{n}"),
            Value::Path(p) => write!(f, "{p}"),
            Value::Tuple(t) => {
                write!(f, "(")?;
                write_list(f, t.iter())?;
                write!(f, ")")
            }
            Value::Set(s) => {
                write!(f, "{{")?;
                write_list(f, s.iter())?;
                write!(f, "}}")
            }
            Value::Antichain(a) => {
                write!(f, "{{")?;
                write_list(f, a.iter())?;
                write!(f, "}}")
            }
            Value::Mark(Mark::Any) => write!(f, "any"),
            Value::Mark(Mark::Conflict) => write!(f, "none"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let v = Value::Antichain(vec![Value::pair(
            Value::Path(PathValue::from_nodes(&["2", "3", "1", "0"])),
            Value::num(3),
        )]);
        let back = Value::from_json(&v.to_json()).unwrap();
        assert_eq!(v, back);
        assert_eq!(Value::num(3).to_json(), json!({"num": "3/1"}));
        assert_eq!(Value::inf().to_json(), json!({"num": "inf"}));
    }

    #[test]
    fn display_forms() {
        let p = Value::Path(PathValue::from_nodes(&["1", "0"]));
        assert_eq!(format!("{}", Value::pair(p, Value::num(1))), "(1.0,1)");
        assert_eq!(format!("{}", Value::set([Value::node("0"), Value::node("2")])), "{0,2}");
    }
}
