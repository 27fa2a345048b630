//! Bulk-synchronous evaluation of formulas over a field.
//!
//! A formula is first compiled into a [`Typed`] tree, then evaluated one
//! whole valuation (a value per node) at a time. Fixpoints are computed by
//! Kleene iteration from the bottom (least) or top (greatest) valuation until
//! two consecutive valuations coincide.

mod compile;
mod par;

use std::collections::BTreeMap;

pub use compile::{CapRef, TKind, Typed};
pub use par::ExecMode;

use crate::domains::{Domain, Value};
use crate::field::{bottom_valuation, top_valuation, EdgeCtx, Field, FieldError, LabelView};
use crate::formula::{CallCtx, Dir, FixKind, Formula, FormulaError, FunctionRegistry};
use compile::Compiler;

/// Environment variable overriding the per-fixpoint iteration cap.
pub const MAX_ITERS_VAR: &str = "SMUC_MAX_ITERS";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("fixpoint {var} did not stabilise within {limit} iterations (infinite chain?)")]
    IterationCap { var: String, limit: usize },
}

impl From<FieldError> for EvalError {
    fn from(e: FieldError) -> Self {
        EvalError::Formula(e.into())
    }
}

impl From<crate::domains::DomainError> for EvalError {
    fn from(e: crate::domains::DomainError) -> Self {
        EvalError::Formula(e.into())
    }
}

/// A value for every node, tagged with its domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    pub domain: Domain,
    pub values: Vec<Value>,
}

/// Values of free variables.
pub type Environment = BTreeMap<String, Valuation>;

/// The successive approximants of a top-level fixpoint, ending with the
/// fixpoint itself. A formula that is not a fixpoint yields one row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub domain: Domain,
    pub rows: Vec<Vec<Value>>,
}

impl Trace {
    pub fn last(&self) -> &[Value] {
        self.rows.last().expect("a trace is never empty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub mode: ExecMode,
    /// Per-fixpoint cap; `None` uses `10 * 64 * |N|` or `SMUC_MAX_ITERS`.
    pub max_iters: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { mode: ExecMode::default(), max_iters: None }
    }
}

/// Function registry plus evaluation options.
pub struct Engine {
    pub registry: FunctionRegistry,
    pub options: EvalOptions,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine { registry: FunctionRegistry::standard(), options: EvalOptions::default() }
    }

    pub fn with_mode(mode: ExecMode) -> Self {
        let mut e = Engine::new();
        e.options.mode = mode;
        e
    }

    pub fn iteration_cap(&self, nodes: usize) -> usize {
        if let Some(k) = self.options.max_iters {
            return k;
        }
        if let Some(k) = std::env::var(MAX_ITERS_VAR).ok().and_then(|s| s.trim().parse().ok()) {
            return k;
        }
        10 * 64 * nodes.max(1)
    }

    /// Compiles `f` with the variables of `env` in scope (in key order).
    pub fn compile(
        &self,
        field: &Field,
        env: &Environment,
        f: &Formula,
        expected: Option<&Domain>,
    ) -> Result<Typed, FormulaError> {
        let mut c = Compiler {
            field,
            reg: &self.registry,
            vars: env.iter().map(|(k, v)| (k.clone(), Some(v.domain.clone()))).collect(),
        };
        c.compile(f, expected)
    }

    pub fn eval(&self, field: &Field, env: &Environment, f: &Formula) -> Result<Valuation, EvalError> {
        let t = self.compile(field, env, f, None)?;
        let mut stack = env_stack(env);
        let values = self.run(field, &t, &mut stack, None)?;
        Ok(Valuation { domain: t.domain, values })
    }

    pub fn eval_typed(&self, field: &Field, env: &Environment, t: &Typed) -> Result<Vec<Value>, EvalError> {
        self.run(field, t, &mut env_stack(env), None)
    }

    /// Evaluates `f`, recording the approximants of its outermost fixpoint.
    pub fn trace(&self, field: &Field, env: &Environment, f: &Formula) -> Result<Trace, EvalError> {
        let t = self.compile(field, env, f, None)?;
        let mut stack = env_stack(env);
        let mut rows = Vec::new();
        let last = self.run(field, &t, &mut stack, Some(&mut rows))?;
        if rows.is_empty() {
            rows.push(last);
        }
        Ok(Trace { domain: t.domain, rows })
    }

    /// Prepares the body of a top-level fixpoint for step-wise application.
    pub fn fixpoint_step<'f>(
        &'f self,
        field: &'f Field,
        env: &Environment,
        f: &Formula,
    ) -> Result<FixpointStep<'f>, EvalError> {
        let t = self.compile(field, env, f, None)?;
        let TKind::Fix { kind, var, body, .. } = t.kind else {
            return Err(FormulaError::Type(format!("{f} is not a fixpoint")).into());
        };
        Ok(FixpointStep { engine: self, field, env: env_stack(env), kind, var, domain: t.domain, body: *body })
    }

    fn run(
        &self,
        field: &Field,
        t: &Typed,
        stack: &mut Vec<Vec<Value>>,
        mut record: Option<&mut Vec<Vec<Value>>>,
    ) -> Result<Vec<Value>, EvalError> {
        let n = field.node_count();
        let mode = self.options.mode;
        match &t.kind {
            TKind::Label(l) => Ok(field.values(l)?.to_vec()),
            TKind::Var(k) => Ok(stack[*k].clone()),
            TKind::Const(v) => Ok(vec![v.clone(); n]),
            TKind::Apply { func, args, .. } => {
                let vals = args
                    .iter()
                    .map(|a| self.run(field, a, stack, None))
                    .collect::<Result<Vec<_>, _>>()?;
                let arg_domains: Vec<Domain> = args.iter().map(|a| a.domain.clone()).collect();
                Ok(par::map_nodes(mode, n, |node| {
                    let row: Vec<Value> = vals.iter().map(|v| v[node].clone()).collect();
                    let ctx = CallCtx { node, order: field.order(), result: &t.domain, args: &arg_domains };
                    func.apply(&ctx, &row)
                })?)
            }
            TKind::Modal { dir, cap, agg, body, .. } => {
                let inner = self.run(field, body, stack, None)?;
                let fold_args = vec![t.domain.clone(); 2];
                Ok(par::map_nodes(mode, n, |node| {
                    let gathered = gather(field, *dir, cap, node, |m| Ok(inner[m].clone()))?;
                    let ctx = CallCtx { node, order: field.order(), result: &t.domain, args: &fold_args };
                    agg.apply(&ctx, &gathered)
                })?)
            }
            TKind::Fix { kind, var, body, slot } => {
                debug_assert_eq!(*slot, stack.len());
                let mut cur = seed(*kind, &t.domain, n)?;
                let cap = self.iteration_cap(n);
                let mut iters = 0;
                loop {
                    if let Some(rows) = record.as_deref_mut() {
                        rows.push(cur.clone());
                    }
                    iters += 1;
                    if iters > cap {
                        return Err(EvalError::IterationCap { var: var.clone(), limit: cap });
                    }
                    stack.push(cur);
                    let next = self.run(field, body, stack, None);
                    cur = stack.pop().expect("pushed above");
                    let next = next?;
                    if next == cur {
                        return Ok(cur);
                    }
                    cur = next;
                }
            }
        }
    }
}

fn env_stack(env: &Environment) -> Vec<Vec<Value>> {
    env.values().map(|v| v.values.clone()).collect()
}

fn seed(kind: FixKind, d: &Domain, n: usize) -> Result<Vec<Value>, EvalError> {
    Ok(match kind {
        FixKind::Mu => bottom_valuation(d, n)?,
        FixKind::Nu => top_valuation(d, n)?,
    })
}

/// Neighbour values along `dir` edges of `node`, transformed by `cap`.
fn gather(
    field: &Field,
    dir: Dir,
    cap: &CapRef,
    node: usize,
    mut value_at: impl FnMut(usize) -> Result<Value, FormulaError>,
) -> Result<Vec<Value>, FormulaError> {
    let edges = match dir {
        Dir::Out => field.out_edges(node),
        Dir::In => field.in_edges(node),
    };
    let caps = match cap {
        CapRef::Identity => None,
        CapRef::Label(c) => Some(
            &field.edge_label(c).ok_or_else(|| FormulaError::UnknownEdgeLabel(c.clone()))?.caps,
        ),
    };
    let mut out = Vec::with_capacity(edges.len());
    for &e in edges {
        let (src, dst) = field.edges()[e];
        let other = if dir == Dir::Out { dst } else { src };
        let v = value_at(other)?;
        out.push(match caps {
            None => v,
            Some(caps) => {
                let ctx = EdgeCtx { src, dst, order: field.order(), labels: field };
                caps[e].apply(&ctx, &v)?
            }
        });
    }
    Ok(out)
}

/// Evaluates a fixpoint-free, variable-free formula at one node, reading
/// labels through `view`. Only the node and, under modalities, its
/// neighbours are consulted.
pub fn eval_at(field: &Field, view: &dyn LabelView, t: &Typed, node: usize) -> Result<Value, FormulaError> {
    match &t.kind {
        TKind::Label(l) => Ok(view.label_value(l, node)?),
        TKind::Const(v) => Ok(v.clone()),
        TKind::Apply { func, args, .. } => {
            let row = args.iter().map(|a| eval_at(field, view, a, node)).collect::<Result<Vec<_>, _>>()?;
            let arg_domains: Vec<Domain> = args.iter().map(|a| a.domain.clone()).collect();
            let ctx = CallCtx { node, order: field.order(), result: &t.domain, args: &arg_domains };
            func.apply(&ctx, &row)
        }
        TKind::Modal { dir, cap, agg, body, .. } => {
            let edges = match dir {
                Dir::Out => field.out_edges(node),
                Dir::In => field.in_edges(node),
            };
            let caps = match cap {
                CapRef::Identity => None,
                CapRef::Label(c) => Some(
                    &field.edge_label(c).ok_or_else(|| FormulaError::UnknownEdgeLabel(c.clone()))?.caps,
                ),
            };
            let mut gathered = Vec::with_capacity(edges.len());
            for &e in edges {
                let (src, dst) = field.edges()[e];
                let other = if *dir == Dir::Out { dst } else { src };
                let v = eval_at(field, view, body, other)?;
                gathered.push(match caps {
                    None => v,
                    Some(caps) => caps[e].apply(&EdgeCtx { src, dst, order: field.order(), labels: view }, &v)?,
                });
            }
            let fold_args = vec![t.domain.clone(); 2];
            let ctx = CallCtx { node, order: field.order(), result: &t.domain, args: &fold_args };
            agg.apply(&ctx, &gathered)
        }
        TKind::Var(_) | TKind::Fix { .. } => {
            Err(FormulaError::Type("pointwise evaluation needs a fixpoint-free closed formula".into()))
        }
    }
}

/// The body of a top-level fixpoint as a function on valuations.
pub struct FixpointStep<'f> {
    engine: &'f Engine,
    field: &'f Field,
    env: Vec<Vec<Value>>,
    pub kind: FixKind,
    pub var: String,
    pub domain: Domain,
    body: Typed,
}

impl FixpointStep<'_> {
    /// The iteration seed: bottom for least, top for greatest fixpoints.
    pub fn seed(&self) -> Result<Vec<Value>, EvalError> {
        seed(self.kind, &self.domain, self.field.node_count())
    }

    /// One application of the body to the whole valuation `f`.
    pub fn apply(&self, f: &[Value]) -> Result<Vec<Value>, EvalError> {
        let mut stack = self.env.clone();
        stack.push(f.to_vec());
        self.engine.run(self.field, &self.body, &mut stack, None)
    }

    pub fn field(&self) -> &Field {
        self.field
    }

    pub fn body(&self) -> &Typed {
        &self.body
    }
}

/// Evaluates `f` with the standard registry and default options.
pub fn eval_formula(field: &Field, env: &Environment, f: &Formula) -> Result<Valuation, EvalError> {
    Engine::new().eval(field, env, f)
}

/// Like [`eval_formula`] but returns the approximants of the outer fixpoint.
pub fn eval_trace(field: &Field, env: &Environment, f: &Formula) -> Result<Trace, EvalError> {
    Engine::new().trace(field, env, f)
}

#[cfg(test)]
mod tests;
