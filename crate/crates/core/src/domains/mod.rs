//! Value domains: exact numbers, tagged values, and the ordered carriers that
//! node labels range over.

mod domain;
mod laws;
mod num;
mod sample;
mod value;

use std::sync::Arc;

use serde_json::Value as Json;

pub use domain::{Domain, NodeOrder};
pub use laws::{probe_laws, LawReport};
pub use num::{ExtRat, ParseNumError};
pub use value::{Mark, NodeId, PathValue, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("value {value} is not in domain {domain}")]
    TypeMismatch { domain: String, value: String },
    #[error("no least upper bound of {a} and {b} in {domain}")]
    NoLub { domain: String, a: String, b: String },
    #[error("no greatest lower bound of {a} and {b} in {domain}")]
    NoGlb { domain: String, a: String, b: String },
    #[error("domain {0} has no bottom element")]
    NoBottom(String),
    #[error("domain {0} has no top element")]
    NoTop(String),
    #[error("domain {0} has no semiring structure")]
    NotASemiring(String),
    #[error("malformed value encoding: {0}")]
    Json(String),
    #[error("malformed domain description: {0}")]
    Syntax(String),
}

/// Parses the compact domain syntax, e.g. `hoare(lex(cost,rev(path)))`.
///
/// Kinds: `bool`, `tropical`, `cost` (alias `tropical-reversed`),
/// `interval(lo,hi)`, `fuzzy`, `set`, `powerset(nodes)`, `nodes`, `discrete`,
/// `path`; constructors `product(..)`, `lex(a,b)`, `hoare(a)`, `rev(a)`.
pub fn parse_domain(text: &str, order: &Arc<NodeOrder>) -> Result<Domain, DomainError> {
    let mut p = DomainParser { src: text.as_bytes(), pos: 0, order };
    let d = p.domain()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(d)
}

/// Accepts either a string in the compact syntax or a tagged object
/// `{"kind": .., "of": ..}` as produced by [`Domain::to_json`].
pub fn domain_from_json(j: &Json, order: &Arc<NodeOrder>) -> Result<Domain, DomainError> {
    let bad = || DomainError::Json(j.to_string());
    match j {
        Json::String(s) => parse_domain(s, order),
        Json::Object(m) => {
            let kind = m.get("kind").and_then(Json::as_str).ok_or_else(bad)?;
            let of = m.get("of");
            let one = || -> Result<Domain, DomainError> {
                match of {
                    Some(Json::Array(items)) if items.len() == 1 => domain_from_json(&items[0], order),
                    Some(x) if !x.is_array() => domain_from_json(x, order),
                    _ => Err(bad()),
                }
            };
            let many = || -> Result<Vec<Domain>, DomainError> {
                of.and_then(Json::as_array)
                    .ok_or_else(bad)?
                    .iter()
                    .map(|x| domain_from_json(x, order))
                    .collect()
            };
            match kind {
                "product" => Ok(Domain::Product(many()?)),
                "lexproduct" | "lex" => {
                    let mut parts = many()?;
                    if parts.len() != 2 {
                        return Err(bad());
                    }
                    let b = parts.pop().unwrap();
                    Ok(Domain::lex(parts.pop().unwrap(), b))
                }
                "hoare" | "hoare-power" => Ok(Domain::hoare(one()?)),
                "reverse" | "rev" => Ok(one()?.reverse()),
                "interval" => {
                    let num = |key: &str| -> Result<ExtRat, DomainError> {
                        match m.get(key) {
                            Some(Json::String(s)) => s.parse().map_err(|_| bad()),
                            Some(Json::Number(n)) => n.to_string().parse().map_err(|_| bad()),
                            _ => Err(bad()),
                        }
                    };
                    Ok(Domain::Interval { lo: num("lo")?, hi: num("hi")? })
                }
                "finite-set" => {
                    let universe = m
                        .get("universe")
                        .and_then(Json::as_array)
                        .ok_or_else(bad)?
                        .iter()
                        .map(Value::from_json)
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Domain::PowerSet { universe: Some(Arc::new(universe)) })
                }
                "node-order" => parse_domain("nodes", order),
                other => parse_domain(other, order),
            }
        }
        _ => Err(bad()),
    }
}

struct DomainParser<'a> {
    src: &'a [u8],
    pos: usize,
    order: &'a Arc<NodeOrder>,
}

impl DomainParser<'_> {
    fn error(&self, what: &str) -> DomainError {
        DomainError::Syntax(format!(
            "{what} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<String, DomainError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_alphanumeric() || matches!(c, b'-' | b'_' | b'/' | b'.' | b'+') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected a name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn args(&mut self) -> Result<Vec<Domain>, DomainError> {
        if !self.eat(b'(') {
            return Err(self.error("expected '('"));
        }
        let mut out = vec![self.domain()?];
        while self.eat(b',') {
            out.push(self.domain()?);
        }
        if !self.eat(b')') {
            return Err(self.error("expected ')'"));
        }
        Ok(out)
    }

    fn single(&mut self) -> Result<Domain, DomainError> {
        let mut a = self.args()?;
        if a.len() != 1 {
            return Err(self.error("expected one argument"));
        }
        Ok(a.pop().unwrap())
    }

    fn domain(&mut self) -> Result<Domain, DomainError> {
        let name = self.word()?;
        let order = self.order.clone();
        Ok(match name.as_str() {
            "bool" => Domain::Bool,
            "bool-reversed" => Domain::Bool.reverse(),
            "tropical" => Domain::Tropical,
            "cost" | "tropical-reversed" => Domain::Cost,
            "fuzzy" => Domain::Interval { lo: ExtRat::zero(), hi: ExtRat::int(1) },
            "interval" => {
                if !self.eat(b'(') {
                    return Err(self.error("expected '('"));
                }
                let lo = self.word()?.parse::<ExtRat>().map_err(|_| self.error("bad bound"))?;
                if !self.eat(b',') {
                    return Err(self.error("expected ','"));
                }
                let hi = self.word()?.parse::<ExtRat>().map_err(|_| self.error("bad bound"))?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Domain::Interval { lo, hi }
            }
            "set" => Domain::PowerSet { universe: None },
            "powerset" => {
                if !self.eat(b'(') || self.word()? != "nodes" || !self.eat(b')') {
                    return Err(self.error("expected powerset(nodes)"));
                }
                let u = order.names().iter().cloned().map(Value::Node).collect();
                Domain::PowerSet { universe: Some(Arc::new(u)) }
            }
            "nodes" => Domain::Nodes(order),
            "discrete" => Domain::Discrete(order),
            "path" => Domain::Paths(order),
            "product" => Domain::Product(self.args()?),
            "lex" => {
                let mut a = self.args()?;
                if a.len() != 2 {
                    return Err(self.error("lex takes two arguments"));
                }
                let b = a.pop().unwrap();
                Domain::lex(a.pop().unwrap(), b)
            }
            "hoare" => Domain::hoare(self.single()?),
            "rev" => self.single()?.reverse(),
            _ => return Err(self.error("unknown domain kind")),
        })
    }
}

#[cfg(test)]
mod tests;
