//! Domain inference and compilation of formulas into typed trees.

use std::sync::Arc;

use crate::domains::{parse_domain, Domain, Value};
use crate::field::Field;
use crate::formula::{Dir, FixKind, Formula, FormulaError, Function, FunctionRegistry};

/// Edge label used by a modal operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CapRef {
    Identity,
    Label(String),
}

#[derive(Clone)]
pub enum TKind {
    Label(String),
    /// Index into the variable stack.
    Var(usize),
    Const(Value),
    Apply { name: String, func: Arc<dyn Function>, args: Vec<Typed> },
    Modal { dir: Dir, cap: CapRef, agg_name: String, agg: Arc<dyn Function>, body: Box<Typed> },
    Fix { kind: FixKind, var: String, slot: usize, body: Box<Typed> },
}

/// A formula annotated with the domain of every subterm.
#[derive(Clone)]
pub struct Typed {
    pub domain: Domain,
    pub kind: TKind,
}

impl std::fmt::Debug for Typed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            TKind::Label(l) => write!(f, "{l}:{}", self.domain),
            TKind::Var(k) => write!(f, "#{k}:{}", self.domain),
            TKind::Const(v) => write!(f, "{v}:{}", self.domain),
            TKind::Apply { name, args, .. } => write!(f, "{name}{args:?}:{}", self.domain),
            TKind::Modal { dir, cap, agg_name, body, .. } => {
                write!(f, "<{dir:?} {cap:?}:{agg_name}>{body:?}")
            }
            TKind::Fix { kind, var, body, .. } => write!(f, "{kind:?} {var}. {body:?}"),
        }
    }
}

impl Typed {
    /// Whether the tree contains no fixpoints and no variables.
    pub fn is_closed_flat(&self) -> bool {
        match &self.kind {
            TKind::Label(_) | TKind::Const(_) => true,
            TKind::Var(_) | TKind::Fix { .. } => false,
            TKind::Apply { args, .. } => args.iter().all(Typed::is_closed_flat),
            TKind::Modal { body, .. } => body.is_closed_flat(),
        }
    }

    /// Node labels read, including those read by capabilities.
    pub fn reads(&self, field: &Field, out: &mut Vec<String>) {
        match &self.kind {
            TKind::Label(l) => out.push(l.clone()),
            TKind::Apply { args, .. } => args.iter().for_each(|a| a.reads(field, out)),
            TKind::Modal { cap, body, .. } => {
                if let CapRef::Label(c) = cap {
                    if let Some(el) = field.edge_label(c) {
                        for cap in &el.caps {
                            out.extend(cap.reads());
                        }
                    }
                }
                body.reads(field, out);
            }
            TKind::Fix { body, .. } => body.reads(field, out),
            _ => {}
        }
        out.sort();
        out.dedup();
    }
}

pub(crate) struct Compiler<'a> {
    pub field: &'a Field,
    pub reg: &'a FunctionRegistry,
    pub vars: Vec<(String, Option<Domain>)>,
}

fn type_err(msg: impl Into<String>) -> FormulaError {
    FormulaError::Type(msg.into())
}

impl<'a> Compiler<'a> {
    fn lookup(&self, z: &str) -> Result<(usize, Option<Domain>), FormulaError> {
        self.vars
            .iter()
            .enumerate()
            .rev()
            .find(|(_, (name, _))| name == z)
            .map(|(k, (_, d))| (k, d.clone()))
            .ok_or_else(|| FormulaError::UnboundVar(z.to_string()))
    }

    fn fixed_domain(&self, text: &str) -> Result<Domain, FormulaError> {
        Ok(parse_domain(text, self.field.order())?)
    }

    fn cap_domain(&self, cap: &str) -> Result<Option<Domain>, FormulaError> {
        match self.field.edge_label(cap) {
            Some(l) => Ok(Some(l.domain.clone())),
            None if cap == "id" => Ok(None),
            None => Err(FormulaError::UnknownEdgeLabel(cap.to_string())),
        }
    }

    fn arg_domains(
        &mut self,
        func: &Arc<dyn Function>,
        args: &[Formula],
        expected: Option<&Domain>,
    ) -> Result<Vec<Option<Domain>>, FormulaError> {
        let order = self.field.order().clone();
        let mut known: Vec<Option<Domain>> = vec![None; args.len()];
        for _round in 0..2 {
            for (k, a) in args.iter().enumerate() {
                if known[k].is_some() {
                    continue;
                }
                let hint = func.arg_hint(k, expected, &known, &order);
                known[k] = self.infer(a, hint.as_ref())?;
            }
        }
        for (k, slot) in known.iter_mut().enumerate() {
            if slot.is_none() {
                let snapshot: Vec<Option<Domain>> = Vec::new();
                *slot = func.arg_hint(k, expected, &snapshot, &order);
            }
        }
        Ok(known)
    }

    /// Best-effort domain inference; unknown parts default to `expected`.
    pub fn infer(&mut self, f: &Formula, expected: Option<&Domain>) -> Result<Option<Domain>, FormulaError> {
        Ok(match f {
            Formula::Label(l) if self.lookup(l).is_ok() => self.lookup(l)?.1.or_else(|| expected.cloned()),
            Formula::Label(l) => Some(
                self.field.node_label(l).ok_or_else(|| FormulaError::UnknownLabel(l.clone()))?.domain.clone(),
            ),
            Formula::Var(z) => self.lookup(z)?.1.or_else(|| expected.cloned()),
            Formula::Bool(_) => Some(Domain::Bool),
            Formula::Num(_) => expected.cloned(),
            Formula::Bottom(t) | Formula::Top(t) => Some(self.fixed_domain(t)?),
            Formula::Apply { func, args } => {
                let fun = self.reg.get(func)?.clone();
                if !fun.arity().admits(args.len()) {
                    return Err(FormulaError::Arity { func: func.clone(), got: args.len() });
                }
                let known = self.arg_domains(&fun, args, expected)?;
                if known.iter().all(Option::is_some) {
                    let ds: Vec<Domain> = known.into_iter().flatten().collect();
                    match fun.result(&ds, expected, self.field.order()) {
                        Ok(d) => Some(d),
                        Err(_) => expected.cloned(),
                    }
                } else {
                    expected.cloned()
                }
            }
            Formula::Modal { cap, body, .. } => match self.cap_domain(cap)? {
                Some(d) => Some(d),
                None => self.infer(body, expected)?,
            },
            Formula::Fix { var, body, .. } => match expected {
                Some(d) => Some(d.clone()),
                None => {
                    self.vars.push((var.clone(), None));
                    let d = self.infer(body, None);
                    self.vars.pop();
                    d?
                }
            },
        })
    }

    pub fn compile(&mut self, f: &Formula, expected: Option<&Domain>) -> Result<Typed, FormulaError> {
        match f {
            // Identifiers free in the formula but bound by the environment.
            Formula::Label(l) if self.lookup(l).is_ok() => self.compile(&Formula::Var(l.clone()), expected),
            Formula::Label(l) => {
                let d = self.field.node_label(l).ok_or_else(|| FormulaError::UnknownLabel(l.clone()))?.domain.clone();
                Ok(Typed { domain: d, kind: TKind::Label(l.clone()) })
            }
            Formula::Var(z) => {
                let (slot, d) = self.lookup(z)?;
                let d = d.ok_or_else(|| type_err(format!("cannot infer the domain of {z}")))?;
                Ok(Typed { domain: d, kind: TKind::Var(slot) })
            }
            Formula::Bool(b) => Ok(Typed { domain: Domain::Bool, kind: TKind::Const(Value::Bool(*b)) }),
            Formula::Num(q) => {
                let d = expected.cloned().unwrap_or(Domain::Cost);
                let v = Value::Num(q.clone());
                if !d.contains(&v) {
                    return Err(type_err(format!("number {q} used where {d} is expected")));
                }
                Ok(Typed { domain: d, kind: TKind::Const(v) })
            }
            Formula::Bottom(t) => {
                let d = self.fixed_domain(t)?;
                let v = d.bottom()?;
                Ok(Typed { domain: d, kind: TKind::Const(v) })
            }
            Formula::Top(t) => {
                let d = self.fixed_domain(t)?;
                let v = d.top()?;
                Ok(Typed { domain: d, kind: TKind::Const(v) })
            }
            Formula::Apply { func, args } => {
                let fun = self.reg.get(func)?.clone();
                if !fun.arity().admits(args.len()) {
                    return Err(FormulaError::Arity { func: func.clone(), got: args.len() });
                }
                let known = self.arg_domains(&fun, args, expected)?;
                let mut targs = Vec::with_capacity(args.len());
                for (a, d) in args.iter().zip(&known) {
                    targs.push(self.compile(a, d.as_ref())?);
                }
                let ds: Vec<Domain> = targs.iter().map(|t| t.domain.clone()).collect();
                let domain = fun.result(&ds, expected, self.field.order())?;
                Ok(Typed { domain, kind: TKind::Apply { name: func.clone(), func: fun, args: targs } })
            }
            Formula::Modal { dir, cap, agg, body } => {
                let agg_fn = self.reg.get(agg)?.clone();
                if !agg_fn.aggregates() {
                    return Err(type_err(format!("{agg} cannot aggregate")));
                }
                let (cap_ref, body_t) = match self.cap_domain(cap)? {
                    Some(d) => (CapRef::Label(cap.clone()), self.compile(body, Some(&d))?),
                    None => (CapRef::Identity, self.compile(body, expected)?),
                };
                let d = match &cap_ref {
                    CapRef::Label(c) => self.field.edge_label(c).expect("checked above").domain.clone(),
                    CapRef::Identity => body_t.domain.clone(),
                };
                let r = agg_fn.result(&[d.clone(), d.clone()], Some(&d), self.field.order())?;
                if r != d {
                    return Err(type_err(format!("aggregator {agg} does not fold {d}")));
                }
                Ok(Typed {
                    domain: d,
                    kind: TKind::Modal { dir: *dir, cap: cap_ref, agg_name: agg.clone(), agg: agg_fn, body: Box::new(body_t) },
                })
            }
            Formula::Fix { kind, var, body } => {
                let d = match expected {
                    Some(d) => d.clone(),
                    None => self
                        .infer(f, None)?
                        .ok_or_else(|| type_err(format!("cannot infer the domain of {var}")))?,
                };
                self.vars.push((var.clone(), Some(d.clone())));
                let slot = self.vars.len() - 1;
                let body_t = self.compile(body, Some(&d));
                self.vars.pop();
                let body_t = body_t?;
                if body_t.domain != d {
                    return Err(type_err(format!("body of {var} has domain {} but {var} has {d}", body_t.domain)));
                }
                Ok(Typed { domain: d, kind: TKind::Fix { kind: *kind, var: var.clone(), slot, body: Box::new(body_t) } })
            }
        }
    }
}
