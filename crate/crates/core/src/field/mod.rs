//! Graph-shaped fields: nodes, directed edges, node labels holding one value
//! per node, and edge labels holding one capability per edge.

mod capability;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Map, Value as Json};

use crate::domains::{domain_from_json, Domain, DomainError, NodeId, NodeOrder, Value};

pub use capability::{CapBuilder, CapRegistry, CapSpec, Capability, EdgeCtx, Identity, LabelView};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("field document: {0}")]
    Schema(String),
    #[error("edge ({0},{1}) refers to an unknown node")]
    DanglingEdge(String, String),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(String, String),
    #[error("duplicate node {0}")]
    DuplicateNode(String),
    #[error("label {label} has no value at node {node}")]
    NonTotal { label: String, node: String },
    #[error("edge label {label} has no capability on edge {edge}")]
    NonTotalEdge { label: String, edge: String },
    #[error("unknown capability {0}")]
    UnknownCapability(String),
    #[error("capability {0} is already registered")]
    DuplicateCapability(String),
    #[error("bad capability arguments: {0}")]
    BadCapArgs(String),
    #[error("capability {cap} cannot transform {value}")]
    CapType { cap: String, value: String },
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("valuations are over different node sets")]
    NodeSetMismatch,
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// A node label: its domain and one value per node, in node order.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeLabel {
    pub domain: Domain,
    pub values: Vec<Value>,
}

/// An edge label: its value domain and one capability per edge.
#[derive(Debug, Clone)]
pub struct EdgeLabel {
    pub domain: Domain,
    pub specs: Vec<CapSpec>,
    pub caps: Vec<Arc<dyn Capability>>,
}

#[derive(Debug, Clone)]
pub struct Field {
    order: Arc<NodeOrder>,
    edges: Vec<(usize, usize)>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    node_labels: BTreeMap<String, NodeLabel>,
    edge_labels: BTreeMap<String, Arc<EdgeLabel>>,
}

impl Field {
    /// A field with no labels. Duplicate edges are rejected.
    pub fn new(order: Arc<NodeOrder>, edges: Vec<(usize, usize)>) -> Result<Self, FieldError> {
        let n = order.len();
        let mut seen = BTreeSet::new();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(FieldError::DanglingEdge(a.to_string(), b.to_string()));
            }
            if !seen.insert((a, b)) {
                let names = order.names();
                return Err(FieldError::DuplicateEdge(names[a].to_string(), names[b].to_string()));
            }
            out_edges[a].push(k);
            in_edges[b].push(k);
        }
        Ok(Field { order, edges, out_edges, in_edges, node_labels: BTreeMap::new(), edge_labels: BTreeMap::new() })
    }

    /// Builds from node names and edges given by name.
    pub fn from_names<S: AsRef<str>>(nodes: &[S], edges: &[(S, S)]) -> Result<Self, FieldError> {
        let order = Arc::new(NodeOrder::from_strs(nodes));
        let mut idx = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let pa = order.position(&NodeId::new(a.as_ref()));
            let pb = order.position(&NodeId::new(b.as_ref()));
            match (pa, pb) {
                (Some(x), Some(y)) => idx.push((x, y)),
                _ => return Err(FieldError::DanglingEdge(a.as_ref().into(), b.as_ref().into())),
            }
        }
        Field::new(order, idx)
    }

    pub fn order(&self) -> &Arc<NodeOrder> {
        &self.order
    }

    pub fn node_count(&self) -> usize {
        self.order.len()
    }

    pub fn node_name(&self, k: usize) -> &NodeId {
        &self.order.names()[k]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.order.position(&NodeId::new(name))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Indices into [`Field::edges`] of the edges leaving `n`.
    pub fn out_edges(&self, n: usize) -> &[usize] {
        &self.out_edges[n]
    }

    pub fn in_edges(&self, n: usize) -> &[usize] {
        &self.in_edges[n]
    }

    /// In- and out-neighbours of `n`, excluding `n`, in node order.
    pub fn neighbours(&self, n: usize) -> Vec<usize> {
        let mut s: BTreeSet<usize> = BTreeSet::new();
        for &e in &self.out_edges[n] {
            s.insert(self.edges[e].1);
        }
        for &e in &self.in_edges[n] {
            s.insert(self.edges[e].0);
        }
        s.remove(&n);
        s.into_iter().collect()
    }

    pub fn node_label(&self, name: &str) -> Option<&NodeLabel> {
        self.node_labels.get(name)
    }

    pub fn node_labels(&self) -> &BTreeMap<String, NodeLabel> {
        &self.node_labels
    }

    pub fn edge_label(&self, name: &str) -> Option<&EdgeLabel> {
        self.edge_labels.get(name).map(|a| a.as_ref())
    }

    pub fn edge_labels(&self) -> impl Iterator<Item = (&String, &EdgeLabel)> {
        self.edge_labels.iter().map(|(k, v)| (k, v.as_ref()))
    }

    /// Installs or replaces a node label, checking totality and membership.
    pub fn set_node_label(&mut self, name: &str, domain: Domain, values: Vec<Value>) -> Result<(), FieldError> {
        if values.len() != self.node_count() {
            let node = self.order.names().get(values.len()).map(|n| n.to_string()).unwrap_or_default();
            return Err(FieldError::NonTotal { label: name.to_string(), node });
        }
        for v in &values {
            if !domain.contains(v) {
                return Err(DomainError::TypeMismatch { domain: domain.to_string(), value: v.to_string() }.into());
            }
        }
        self.node_labels.insert(name.to_string(), NodeLabel { domain, values });
        Ok(())
    }

    /// Stores computed values without membership checks; used by program
    /// assignments, whose results may carry agreement markers.
    pub fn assign(&mut self, name: &str, domain: Domain, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.node_count());
        self.node_labels.insert(name.to_string(), NodeLabel { domain, values });
    }

    /// Removes a node label; missing labels are ignored.
    pub fn free(&mut self, name: &str) {
        self.node_labels.remove(name);
    }

    pub fn set_edge_label(
        &mut self,
        name: &str,
        domain: Domain,
        specs: Vec<CapSpec>,
        registry: &CapRegistry,
    ) -> Result<(), FieldError> {
        if specs.len() != self.edges.len() {
            return Err(FieldError::NonTotalEdge { label: name.to_string(), edge: format!("#{}", specs.len()) });
        }
        let mut cache: BTreeMap<&CapSpec, Arc<dyn Capability>> = BTreeMap::new();
        let mut caps = Vec::with_capacity(specs.len());
        for s in &specs {
            let c = match cache.get(s) {
                Some(c) => c.clone(),
                None => {
                    let c = registry.build(s, &domain, &self.order)?;
                    cache.insert(s, c.clone());
                    c
                }
            };
            caps.push(c);
        }
        drop(cache);
        self.edge_labels.insert(name.to_string(), Arc::new(EdgeLabel { domain, specs, caps }));
        Ok(())
    }

    /// Values of a label in node order.
    pub fn values(&self, label: &str) -> Result<&[Value], FieldError> {
        self.node_labels
            .get(label)
            .map(|l| l.values.as_slice())
            .ok_or_else(|| FieldError::UnknownLabel(label.to_string()))
    }

    pub fn edge_key(&self, e: usize) -> String {
        let (a, b) = self.edges[e];
        format!("{},{}", self.order.names()[a], self.order.names()[b])
    }

    /// Parses a field document.
    pub fn from_json(doc: &Json, registry: &CapRegistry) -> Result<Self, FieldError> {
        let schema = |m: &str| FieldError::Schema(m.to_string());
        let obj = doc.as_object().ok_or_else(|| schema("expected an object"))?;
        let mut names: Vec<String> = Vec::new();
        for n in obj.get("nodes").and_then(Json::as_array).ok_or_else(|| schema("missing nodes"))? {
            let id = match n {
                Json::String(s) => s.clone(),
                Json::Object(o) => o.get("id").and_then(Json::as_str).ok_or_else(|| schema("node without id"))?.into(),
                _ => return Err(schema("bad node entry")),
            };
            if names.contains(&id) {
                return Err(FieldError::DuplicateNode(id));
            }
            names.push(id);
        }
        if let Some(ord) = obj.get("node_order") {
            let ord: Vec<String> = ord
                .as_array()
                .ok_or_else(|| schema("node_order must be a list"))?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| schema("node_order entries are strings")))
                .collect::<Result<_, _>>()?;
            let a: BTreeSet<&String> = names.iter().collect();
            let b: BTreeSet<&String> = ord.iter().collect();
            if a != b || ord.len() != names.len() {
                return Err(schema("node_order must list every node once"));
            }
            names = ord;
        }
        let mut edges: Vec<(String, String)> = Vec::new();
        for e in obj.get("edges").and_then(Json::as_array).ok_or_else(|| schema("missing edges"))? {
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| schema("edge must be a pair"))?;
            let a = pair[0].as_str().ok_or_else(|| schema("edge endpoint"))?;
            let b = pair[1].as_str().ok_or_else(|| schema("edge endpoint"))?;
            edges.push((a.to_string(), b.to_string()));
        }
        let mut field = Field::from_names(&names, &edges)?;
        let order = field.order.clone();

        if let Some(labels) = obj.get("node_labels") {
            let labels = labels.as_object().ok_or_else(|| schema("node_labels must be an object"))?;
            for (name, body) in labels {
                let domain = domain_from_json(body.get("domain").ok_or_else(|| schema("label without domain"))?, &order)?;
                let vals = body.get("values").and_then(Json::as_object).ok_or_else(|| schema("label without values"))?;
                let default = body.get("default").map(Value::from_json).transpose()?;
                for key in vals.keys() {
                    if field.node_index(key).is_none() {
                        return Err(FieldError::UnknownNode(key.clone()));
                    }
                }
                let mut values = Vec::with_capacity(names.len());
                for n in order.names() {
                    let v = match vals.get(n.as_str()) {
                        Some(j) => Value::from_json(j)?,
                        None => default.clone().ok_or_else(|| FieldError::NonTotal {
                            label: name.clone(),
                            node: n.to_string(),
                        })?,
                    };
                    values.push(canonicalize(&domain, v)?);
                }
                field.set_node_label(name, domain, values)?;
            }
        }
        if let Some(labels) = obj.get("edge_labels") {
            let labels = labels.as_object().ok_or_else(|| schema("edge_labels must be an object"))?;
            for (name, body) in labels {
                let domain = domain_from_json(body.get("domain").ok_or_else(|| schema("label without domain"))?, &order)?;
                let caps = body.get("caps").and_then(Json::as_object).cloned().unwrap_or_default();
                let default = body.get("default").map(CapSpec::from_json).transpose()?;
                let keys: BTreeSet<String> = (0..field.edges.len()).map(|e| field.edge_key(e)).collect();
                for key in caps.keys() {
                    if !keys.contains(key) {
                        return Err(FieldError::Schema(format!("edge label {name} names missing edge {key}")));
                    }
                }
                let mut specs = Vec::with_capacity(field.edges.len());
                for e in 0..field.edges.len() {
                    let key = field.edge_key(e);
                    let spec = match caps.get(&key) {
                        Some(j) => CapSpec::from_json(j)?,
                        None => default
                            .clone()
                            .ok_or_else(|| FieldError::NonTotalEdge { label: name.clone(), edge: key.clone() })?,
                    };
                    specs.push(spec);
                }
                field.set_edge_label(name, domain, specs, registry)?;
            }
        }
        Ok(field)
    }

    /// The document form; parsing it back yields an equal field.
    pub fn to_json(&self) -> Json {
        let nodes: Vec<Json> = self.order.names().iter().map(|n| json!({ "id": n.as_str() })).collect();
        let edges: Vec<Json> = self
            .edges
            .iter()
            .map(|&(a, b)| json!([self.order.names()[a].as_str(), self.order.names()[b].as_str()]))
            .collect();
        let mut nl = Map::new();
        for (name, l) in &self.node_labels {
            let mut vals = Map::new();
            for (k, v) in l.values.iter().enumerate() {
                vals.insert(self.order.names()[k].to_string(), v.to_json());
            }
            nl.insert(name.clone(), json!({ "domain": l.domain.to_string(), "values": vals }));
        }
        let mut el = Map::new();
        for (name, l) in &self.edge_labels {
            let mut caps = Map::new();
            for (e, s) in l.specs.iter().enumerate() {
                caps.insert(self.edge_key(e), s.to_json());
            }
            el.insert(name.clone(), json!({ "domain": l.domain.to_string(), "caps": caps }));
        }
        json!({ "nodes": nodes, "edges": edges, "node_labels": nl, "edge_labels": el })
    }

    /// Graphviz rendering with every (or only the listed) label value as a
    /// node annotation.
    pub fn to_dot(&self, title: &str, labels: Option<&[&str]>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", escape(title));
        for (k, n) in self.order.names().iter().enumerate() {
            let mut text = n.to_string();
            for (name, l) in &self.node_labels {
                if labels.is_some_and(|ls| !ls.contains(&name.as_str())) {
                    continue;
                }
                let _ = write!(text, "\\n{}={}", name, l.values[k]);
            }
            let _ = writeln!(s, "  \"{}\" [label=\"{}\"];", escape(n.as_str()), escape(&text).replace("\\\\n", "\\n"));
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\";",
                escape(self.order.names()[a].as_str()),
                escape(self.order.names()[b].as_str())
            );
        }
        s.push_str("}\n");
        s
    }

    /// Field equality on the graph and on node labels, ignoring capabilities'
    /// identity but comparing their specs.
    pub fn same_as(&self, other: &Field) -> bool {
        self.order == other.order
            && self.edges == other.edges
            && self.node_labels == other.node_labels
            && self.edge_labels.len() == other.edge_labels.len()
            && self
                .edge_labels
                .iter()
                .zip(other.edge_labels.iter())
                .all(|((ka, a), (kb, b))| ka == kb && a.domain == b.domain && a.specs == b.specs)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Antichains read from documents are reduced to their maximal elements.
fn canonicalize(domain: &Domain, v: Value) -> Result<Value, FieldError> {
    match (domain, v) {
        (Domain::Hoare(inner), Value::Antichain(items)) => Ok(Value::Antichain(inner.canonical_antichain(items)?)),
        (_, v) => Ok(v),
    }
}

impl LabelView for Field {
    fn label_value(&self, label: &str, node: usize) -> Result<Value, FieldError> {
        Ok(self.values(label)?[node].clone())
    }
}

/// Pointwise order on node valuations.
pub fn lift_order(f1: &[Value], f2: &[Value], d: &Domain) -> Result<bool, FieldError> {
    if f1.len() != f2.len() {
        return Err(FieldError::NodeSetMismatch);
    }
    for (a, b) in f1.iter().zip(f2) {
        if !d.leq(a, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn bottom_valuation(d: &Domain, n: usize) -> Result<Vec<Value>, DomainError> {
    Ok(vec![d.bottom()?; n])
}

pub fn top_valuation(d: &Domain, n: usize) -> Result<Vec<Value>, DomainError> {
    Ok(vec![d.top()?; n])
}

#[cfg(test)]
mod tests;
