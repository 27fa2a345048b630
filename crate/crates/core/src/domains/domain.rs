//! Field domains: carriers with a partial order, bottom, top and, where
//! available, constraint-semiring operations.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value as Json};

use super::num::ExtRat;
use super::value::{NodeId, PathValue, Value};
use super::DomainError;

/// A total order over node identifiers; position 0 is the preferred node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeOrder {
    names: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
}

impl NodeOrder {
    pub fn new(names: Vec<NodeId>) -> Self {
        let index = names.iter().enumerate().map(|(k, n)| (n.clone(), k)).collect();
        NodeOrder { names, index }
    }

    pub fn from_strs<S: AsRef<str>>(names: &[S]) -> Self {
        Self::new(names.iter().map(|s| NodeId::new(s.as_ref())).collect())
    }

    pub fn position(&self, n: &NodeId) -> Option<usize> {
        self.index.get(n).copied()
    }

    pub fn names(&self) -> &[NodeId] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Lexicographic comparison of words over this order; a proper prefix is smaller.
    pub fn cmp_words(&self, a: &[NodeId], b: &[NodeId]) -> Option<Ordering> {
        for (x, y) in a.iter().zip(b.iter()) {
            let (px, py) = (self.position(x)?, self.position(y)?);
            match px.cmp(&py) {
                Ordering::Equal => continue,
                o => return Some(o),
            }
        }
        Some(a.len().cmp(&b.len()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// false ⊑ true.
    Bool,
    /// Non-negative extended rationals under ≤: bottom 0, top +inf; + is max, × is min.
    Tropical,
    /// Non-negative extended rationals under ≥: bottom +inf, top 0; + is min, × is addition.
    Cost,
    /// Rationals in `[lo, hi]` under ≤; + is max, × is min (fuzzy).
    Interval { lo: ExtRat, hi: ExtRat },
    /// Finite sets under inclusion. `None` leaves the carrier unbounded (no top).
    PowerSet { universe: Option<Arc<Vec<Value>>> },
    /// Node identifiers; earlier nodes in the order are higher.
    Nodes(Arc<NodeOrder>),
    /// Node identifiers ordered by equality only.
    Discrete(Arc<NodeOrder>),
    /// Lexicographically ordered words of nodes with the empty word at the bottom
    /// and the top word above everything.
    Paths(Arc<NodeOrder>),
    Product(Vec<Domain>),
    Lex(Box<Domain>, Box<Domain>),
    Hoare(Box<Domain>),
    Reversed(Box<Domain>),
}

fn mismatch(d: &Domain, v: &Value) -> DomainError {
    DomainError::TypeMismatch { domain: d.to_string(), value: v.to_string() }
}

impl Domain {
    pub fn product(parts: Vec<Domain>) -> Domain {
        Domain::Product(parts)
    }

    pub fn lex(a: Domain, b: Domain) -> Domain {
        Domain::Lex(Box::new(a), Box::new(b))
    }

    pub fn hoare(inner: Domain) -> Domain {
        Domain::Hoare(Box::new(inner))
    }

    /// Order reversal. Tropical and cost are each other's reverse, and double
    /// reversal cancels.
    pub fn reverse(self) -> Domain {
        match self {
            Domain::Tropical => Domain::Cost,
            Domain::Cost => Domain::Tropical,
            Domain::Reversed(inner) => *inner,
            d => Domain::Reversed(Box::new(d)),
        }
    }

    fn num<'a>(&self, v: &'a Value) -> Result<&'a ExtRat, DomainError> {
        match (self, v) {
            (Domain::Tropical | Domain::Cost, Value::Num(q)) if !q.is_negative() => Ok(q),
            (Domain::Interval { lo, hi }, Value::Num(q)) if lo <= q && q <= hi => Ok(q),
            _ => Err(mismatch(self, v)),
        }
    }

    fn node_pos(&self, order: &NodeOrder, v: &Value) -> Result<usize, DomainError> {
        match v {
            Value::Node(n) => order.position(n).ok_or_else(|| mismatch(self, v)),
            _ => Err(mismatch(self, v)),
        }
    }

    fn path<'a>(&self, order: &NodeOrder, v: &'a Value) -> Result<&'a PathValue, DomainError> {
        match v {
            Value::Path(p @ PathValue::Top) => Ok(p),
            Value::Path(p @ PathValue::Word(w)) => {
                if w.iter().all(|n| order.position(n).is_some()) {
                    Ok(p)
                } else {
                    Err(mismatch(self, v))
                }
            }
            _ => Err(mismatch(self, v)),
        }
    }

    fn cmp_paths(&self, order: &NodeOrder, a: &Value, b: &Value) -> Result<Ordering, DomainError> {
        let (pa, pb) = (self.path(order, a)?, self.path(order, b)?);
        Ok(match (pa, pb) {
            (PathValue::Top, PathValue::Top) => Ordering::Equal,
            (PathValue::Top, _) => Ordering::Greater,
            (_, PathValue::Top) => Ordering::Less,
            (PathValue::Word(x), PathValue::Word(y)) => order.cmp_words(x, y).expect("checked nodes"),
        })
    }

    fn set<'a>(&self, v: &'a Value) -> Result<&'a BTreeSet<Value>, DomainError> {
        match (self, v) {
            (Domain::PowerSet { universe }, Value::Set(s)) => {
                if let Some(u) = universe {
                    if !s.iter().all(|x| u.contains(x)) {
                        return Err(mismatch(self, v));
                    }
                }
                Ok(s)
            }
            _ => Err(mismatch(self, v)),
        }
    }

    fn tuple<'a>(&self, v: &'a Value, arity: usize) -> Result<&'a [Value], DomainError> {
        match v {
            Value::Tuple(t) if t.len() == arity => Ok(t),
            _ => Err(mismatch(self, v)),
        }
    }

    fn antichain<'a>(&self, v: &'a Value) -> Result<&'a [Value], DomainError> {
        match v {
            Value::Antichain(a) => Ok(a),
            _ => Err(mismatch(self, v)),
        }
    }

    /// Whether `v` belongs to the carrier.
    pub fn contains(&self, v: &Value) -> bool {
        self.leq(v, v).is_ok()
    }

    pub fn leq(&self, a: &Value, b: &Value) -> Result<bool, DomainError> {
        match self {
            Domain::Bool => match (a, b) {
                (Value::Bool(x), Value::Bool(y)) => Ok(!*x || *y),
                (Value::Bool(_), _) => Err(mismatch(self, b)),
                _ => Err(mismatch(self, a)),
            },
            Domain::Tropical | Domain::Interval { .. } => Ok(self.num(a)? <= self.num(b)?),
            Domain::Cost => Ok(self.num(a)? >= self.num(b)?),
            Domain::PowerSet { .. } => Ok(self.set(a)?.is_subset(self.set(b)?)),
            Domain::Nodes(order) => Ok(self.node_pos(order, a)? >= self.node_pos(order, b)?),
            Domain::Discrete(order) => {
                self.node_pos(order, a)?;
                self.node_pos(order, b)?;
                Ok(a == b)
            }
            Domain::Paths(order) => Ok(self.cmp_paths(order, a, b)? != Ordering::Greater),
            Domain::Product(parts) => {
                let (x, y) = (self.tuple(a, parts.len())?, self.tuple(b, parts.len())?);
                let mut all = true;
                for ((d, p), q) in parts.iter().zip(x).zip(y) {
                    all &= d.leq(p, q)?;
                }
                Ok(all)
            }
            Domain::Lex(d1, d2) => {
                let (x, y) = (self.tuple(a, 2)?, self.tuple(b, 2)?);
                let first = d1.leq(&x[0], &y[0])?;
                let second = d2.leq(&x[1], &y[1])?;
                if x[0] == y[0] {
                    Ok(second)
                } else {
                    Ok(first)
                }
            }
            Domain::Hoare(inner) => {
                let (x, y) = (self.antichain(a)?, self.antichain(b)?);
                if y.is_empty() {
                    for e in x {
                        inner.leq(e, e)?;
                    }
                    return Ok(x.is_empty());
                }
                for e in x {
                    let mut covered = false;
                    for f in y {
                        if inner.leq(e, f)? {
                            covered = true;
                            break;
                        }
                    }
                    if !covered {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Domain::Reversed(inner) => inner.leq(b, a),
        }
    }

    pub fn bottom(&self) -> Result<Value, DomainError> {
        Ok(match self {
            Domain::Bool => Value::Bool(false),
            Domain::Tropical => Value::num(0),
            Domain::Cost => Value::inf(),
            Domain::Interval { lo, .. } => Value::Num(lo.clone()),
            Domain::PowerSet { .. } => Value::Set(BTreeSet::new()),
            Domain::Nodes(order) => Value::Node(
                order.names().last().cloned().ok_or_else(|| DomainError::NoBottom(self.to_string()))?,
            ),
            Domain::Discrete(_) => return Err(DomainError::NoBottom(self.to_string())),
            Domain::Paths(_) => Value::Path(PathValue::empty()),
            Domain::Product(parts) => {
                Value::Tuple(parts.iter().map(Domain::bottom).collect::<Result<_, _>>()?)
            }
            Domain::Lex(a, b) => Value::pair(a.bottom()?, b.bottom()?),
            Domain::Hoare(_) => Value::Antichain(Vec::new()),
            Domain::Reversed(inner) => inner.top()?,
        })
    }

    pub fn top(&self) -> Result<Value, DomainError> {
        Ok(match self {
            Domain::Bool => Value::Bool(true),
            Domain::Tropical => Value::inf(),
            Domain::Cost => Value::num(0),
            Domain::Interval { hi, .. } => Value::Num(hi.clone()),
            Domain::PowerSet { universe: Some(u) } => Value::Set(u.iter().cloned().collect()),
            Domain::PowerSet { universe: None } => return Err(DomainError::NoTop(self.to_string())),
            Domain::Nodes(order) => Value::Node(
                order.names().first().cloned().ok_or_else(|| DomainError::NoTop(self.to_string()))?,
            ),
            Domain::Discrete(_) => return Err(DomainError::NoTop(self.to_string())),
            Domain::Paths(_) => Value::Path(PathValue::Top),
            Domain::Product(parts) => Value::Tuple(parts.iter().map(Domain::top).collect::<Result<_, _>>()?),
            Domain::Lex(a, b) => Value::pair(a.top()?, b.top()?),
            Domain::Hoare(inner) => Value::Antichain(inner.canonical_antichain(inner.maximal_elements()?)?),
            Domain::Reversed(inner) => inner.bottom()?,
        })
    }

    /// The maximal elements of the carrier, when there are finitely many.
    pub fn maximal_elements(&self) -> Result<Vec<Value>, DomainError> {
        if let Ok(t) = self.top() {
            return Ok(vec![t]);
        }
        match self {
            Domain::Discrete(order) => Ok(order.names().iter().cloned().map(Value::Node).collect()),
            Domain::Product(parts) => {
                let mut acc: Vec<Vec<Value>> = vec![Vec::new()];
                for d in parts {
                    let maxes = d.maximal_elements()?;
                    let mut next = Vec::with_capacity(acc.len() * maxes.len());
                    for prefix in &acc {
                        for m in &maxes {
                            let mut t = prefix.clone();
                            t.push(m.clone());
                            next.push(t);
                        }
                    }
                    acc = next;
                }
                Ok(acc.into_iter().map(Value::Tuple).collect())
            }
            _ => Err(DomainError::NoTop(self.to_string())),
        }
    }

    /// Keeps the maximal elements of `elems`, sorted and deduplicated.
    pub fn canonical_antichain(&self, mut elems: Vec<Value>) -> Result<Vec<Value>, DomainError> {
        elems.sort();
        elems.dedup();
        let mut keep = vec![true; elems.len()];
        for i in 0..elems.len() {
            for j in 0..elems.len() {
                if i != j && keep[j] && self.leq(&elems[i], &elems[j])? {
                    keep[i] = false;
                    break;
                }
            }
        }
        Ok(elems.into_iter().zip(keep).filter_map(|(e, k)| k.then_some(e)).collect())
    }

    pub fn join(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        match self {
            Domain::Bool | Domain::Tropical | Domain::Interval { .. } | Domain::Cost | Domain::Nodes(_) | Domain::Paths(_) => {
                Ok(if self.leq(a, b)? { b.clone() } else { a.clone() })
            }
            Domain::PowerSet { .. } => Ok(Value::Set(self.set(a)?.union(self.set(b)?).cloned().collect())),
            Domain::Discrete(_) => {
                if self.leq(a, b)? {
                    Ok(a.clone())
                } else {
                    Err(DomainError::NoLub { domain: self.to_string(), a: a.to_string(), b: b.to_string() })
                }
            }
            Domain::Product(parts) => {
                let (x, y) = (self.tuple(a, parts.len())?, self.tuple(b, parts.len())?);
                Ok(Value::Tuple(
                    parts.iter().zip(x).zip(y).map(|((d, p), q)| d.join(p, q)).collect::<Result<_, _>>()?,
                ))
            }
            Domain::Lex(d1, d2) => {
                let (x, y) = (self.tuple(a, 2)?, self.tuple(b, 2)?);
                if self.leq(a, b)? {
                    return Ok(b.clone());
                }
                if self.leq(b, a)? {
                    return Ok(a.clone());
                }
                if x[0] == y[0] {
                    Ok(Value::pair(x[0].clone(), d2.join(&x[1], &y[1])?))
                } else {
                    Ok(Value::pair(d1.join(&x[0], &y[0])?, d2.bottom()?))
                }
            }
            Domain::Hoare(inner) => {
                let (x, y) = (self.antichain(a)?, self.antichain(b)?);
                let mut all: Vec<Value> = x.to_vec();
                all.extend(y.iter().cloned());
                Ok(Value::Antichain(inner.canonical_antichain(all)?))
            }
            Domain::Reversed(inner) => inner.meet(a, b),
        }
    }

    pub fn meet(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        match self {
            Domain::Bool | Domain::Tropical | Domain::Interval { .. } | Domain::Cost | Domain::Nodes(_) | Domain::Paths(_) => {
                Ok(if self.leq(a, b)? { a.clone() } else { b.clone() })
            }
            Domain::PowerSet { .. } => {
                Ok(Value::Set(self.set(a)?.intersection(self.set(b)?).cloned().collect()))
            }
            Domain::Discrete(_) => {
                if self.leq(a, b)? {
                    Ok(a.clone())
                } else {
                    Err(DomainError::NoGlb { domain: self.to_string(), a: a.to_string(), b: b.to_string() })
                }
            }
            Domain::Product(parts) => {
                let (x, y) = (self.tuple(a, parts.len())?, self.tuple(b, parts.len())?);
                Ok(Value::Tuple(
                    parts.iter().zip(x).zip(y).map(|((d, p), q)| d.meet(p, q)).collect::<Result<_, _>>()?,
                ))
            }
            Domain::Lex(d1, d2) => {
                let (x, y) = (self.tuple(a, 2)?, self.tuple(b, 2)?);
                if self.leq(a, b)? {
                    return Ok(a.clone());
                }
                if self.leq(b, a)? {
                    return Ok(b.clone());
                }
                if x[0] == y[0] {
                    Ok(Value::pair(x[0].clone(), d2.meet(&x[1], &y[1])?))
                } else {
                    Ok(Value::pair(d1.meet(&x[0], &y[0])?, d2.top()?))
                }
            }
            Domain::Hoare(inner) => {
                let (x, y) = (self.antichain(a)?, self.antichain(b)?);
                let mut out = Vec::new();
                for e in x {
                    for f in y {
                        if let Some(m) = inner.principal_meet(e, f)? {
                            out.push(m);
                        }
                    }
                }
                Ok(Value::Antichain(inner.canonical_antichain(out)?))
            }
            Domain::Reversed(inner) => inner.join(a, b),
        }
    }

    /// The element whose down-closure is the intersection of the down-closures
    /// of `a` and `b`; `None` when that intersection is empty.
    pub fn principal_meet(&self, a: &Value, b: &Value) -> Result<Option<Value>, DomainError> {
        match self {
            Domain::Discrete(_) => Ok(self.leq(a, b)?.then(|| a.clone())),
            Domain::Product(parts) => {
                let (x, y) = (self.tuple(a, parts.len())?, self.tuple(b, parts.len())?);
                let mut out = Vec::with_capacity(parts.len());
                for ((d, p), q) in parts.iter().zip(x).zip(y) {
                    match d.principal_meet(p, q)? {
                        Some(m) => out.push(m),
                        None => return Ok(None),
                    }
                }
                Ok(Some(Value::Tuple(out)))
            }
            Domain::Lex(..) => {
                if self.leq(a, b)? {
                    Ok(Some(a.clone()))
                } else if self.leq(b, a)? {
                    Ok(Some(b.clone()))
                } else {
                    Err(DomainError::NoGlb { domain: self.to_string(), a: a.to_string(), b: b.to_string() })
                }
            }
            Domain::Hoare(_) => Err(DomainError::NoGlb { domain: self.to_string(), a: a.to_string(), b: b.to_string() }),
            _ => self.meet(a, b).map(Some),
        }
    }

    /// Whether the domain carries constraint-semiring operations.
    pub fn is_semiring(&self) -> bool {
        match self {
            Domain::Discrete(_) => false,
            Domain::Product(parts) => parts.iter().all(Domain::is_semiring),
            Domain::Lex(a, b) => a.is_semiring() && b.is_semiring(),
            Domain::Hoare(inner) => !matches!(**inner, Domain::Hoare(_)),
            Domain::Reversed(inner) => inner.is_semiring(),
            _ => true,
        }
    }

    fn require_semiring(&self) -> Result<(), DomainError> {
        if self.is_semiring() {
            Ok(())
        } else {
            Err(DomainError::NotASemiring(self.to_string()))
        }
    }

    /// Semiring sum of a multiset; the empty sum is bottom.
    pub fn plus(&self, vs: &[Value]) -> Result<Value, DomainError> {
        self.require_semiring()?;
        let mut acc = self.bottom()?;
        for v in vs {
            acc = self.join(&acc, v)?;
        }
        Ok(acc)
    }

    pub fn times(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        self.require_semiring()?;
        match self {
            Domain::Cost => Ok(Value::Num(self.num(a)? + self.num(b)?)),
            Domain::Product(parts) => {
                let (x, y) = (self.tuple(a, parts.len())?, self.tuple(b, parts.len())?);
                Ok(Value::Tuple(
                    parts.iter().zip(x).zip(y).map(|((d, p), q)| d.times(p, q)).collect::<Result<_, _>>()?,
                ))
            }
            Domain::Reversed(inner) => inner.join(a, b),
            _ => self.meet(a, b),
        }
    }

    /// Semiring product of a multiset; the empty product is top.
    pub fn times_all(&self, vs: &[Value]) -> Result<Value, DomainError> {
        self.require_semiring()?;
        let mut acc = self.top()?;
        for v in vs {
            acc = self.times(&acc, v)?;
        }
        Ok(acc)
    }

    /// The node order this domain refers to, if any component uses one.
    pub fn node_order(&self) -> Option<&Arc<NodeOrder>> {
        match self {
            Domain::Nodes(o) | Domain::Discrete(o) | Domain::Paths(o) => Some(o),
            Domain::Product(parts) => parts.iter().find_map(Domain::node_order),
            Domain::Lex(a, b) => a.node_order().or_else(|| b.node_order()),
            Domain::Hoare(d) | Domain::Reversed(d) => d.node_order(),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Domain::Bool => json!({"kind": "bool"}),
            Domain::Tropical => json!({"kind": "tropical"}),
            Domain::Cost => json!({"kind": "tropical-reversed"}),
            Domain::Interval { lo, hi } => {
                json!({"kind": "interval", "lo": lo.to_fraction_string(), "hi": hi.to_fraction_string()})
            }
            Domain::PowerSet { universe: None } => json!({"kind": "set"}),
            Domain::PowerSet { universe: Some(u) } => {
                json!({"kind": "finite-set", "universe": u.iter().map(Value::to_json).collect::<Vec<_>>()})
            }
            Domain::Nodes(_) => json!({"kind": "node-order"}),
            Domain::Discrete(_) => json!({"kind": "discrete"}),
            Domain::Paths(_) => json!({"kind": "path"}),
            Domain::Product(parts) => {
                json!({"kind": "product", "of": parts.iter().map(Domain::to_json).collect::<Vec<_>>()})
            }
            Domain::Lex(a, b) => json!({"kind": "lexproduct", "of": [a.to_json(), b.to_json()]}),
            Domain::Hoare(d) => json!({"kind": "hoare", "of": d.to_json()}),
            Domain::Reversed(d) => json!({"kind": "reverse", "of": d.to_json()}),
        }
    }
}

impl fmt::Display for Domain {
    /// Compact syntax accepted by [`super::parse_domain`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Bool => write!(f, "bool"),
            Domain::Tropical => write!(f, "tropical"),
            Domain::Cost => write!(f, "cost"),
            Domain::Interval { lo, hi } => write!(f, "interval({lo},{hi})"),
            Domain::PowerSet { universe: None } => write!(f, "set"),
            Domain::PowerSet { universe: Some(u) } => {
                let all_nodes = u.iter().all(|v| matches!(v, Value::Node(_)));
                if all_nodes {
                    write!(f, "powerset(nodes)")
                } else {
                    write!(f, "powerset(")?;
                    for (k, v) in u.iter().enumerate() {
                        if k > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", v.to_json())?;
                    }
                    write!(f, ")")
                }
            }
            Domain::Nodes(_) => write!(f, "nodes"),
            Domain::Discrete(_) => write!(f, "discrete"),
            Domain::Paths(_) => write!(f, "path"),
            Domain::Product(parts) => {
                write!(f, "product(")?;
                for (k, d) in parts.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{d}")?;
                }
                write!(f, ")")
            }
            Domain::Lex(a, b) => write!(f, "lex({a},{b})"),
            Domain::Hoare(d) => write!(f, "hoare({d})"),
            Domain::Reversed(d) => write!(f, "rev({d})"),
        }
    }
}
