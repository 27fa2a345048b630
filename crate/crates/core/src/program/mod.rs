//! The imperative host language: assignments of formulas to node labels,
//! sequencing, conditionals and `until` loops, run by a deterministic
//! small-step interpreter over a field.

mod parse;

use std::fmt;

pub use parse::parse_program;

use crate::domains::{Domain, Value};
use crate::eval::{Engine, Environment, EvalError, Typed};
use crate::field::Field;
use crate::formula::{Formula, FormulaError};

/// Default step budget of [`run`].
pub const DEFAULT_FUEL: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Program {
    Skip,
    Assign { label: String, formula: Formula },
    Seq(Box<Program>, Box<Program>),
    If { guard: Formula, then: Box<Program>, els: Box<Program> },
    Until { guard: Formula, body: Box<Program> },
    /// Removes labels from the field.
    Free(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("guard {guard} has domain {domain}, not bool")]
    GuardType { guard: String, domain: String },
    #[error("out of fuel after {steps} steps; remaining program: {residual}")]
    FuelExhausted { steps: usize, residual: String },
    #[error("cannot step a terminated program")]
    Terminated,
}

impl From<FormulaError> for ProgramError {
    fn from(e: FormulaError) -> Self {
        ProgramError::Eval(e.into())
    }
}

impl Program {
    pub fn assign(label: &str, formula: Formula) -> Program {
        Program::Assign { label: label.to_string(), formula }
    }

    /// Right-nested sequence of `items`, flattening nested sequences;
    /// `skip` when empty.
    pub fn seq(items: Vec<Program>) -> Program {
        let mut flat = Vec::with_capacity(items.len());
        for p in items {
            p.flatten_into(&mut flat);
        }
        let mut it = flat.into_iter().rev();
        let Some(mut acc) = it.next() else { return Program::Skip };
        for p in it {
            acc = Program::Seq(Box::new(p), Box::new(acc));
        }
        acc
    }

    fn flatten_into(self, out: &mut Vec<Program>) {
        match self {
            Program::Seq(p, q) => {
                p.flatten_into(out);
                q.flatten_into(out);
            }
            other => out.push(other),
        }
    }

    pub fn if_(guard: Formula, then: Program, els: Program) -> Program {
        Program::If { guard, then: Box::new(then), els: Box::new(els) }
    }

    pub fn until(guard: Formula, body: Program) -> Program {
        Program::Until { guard, body: Box::new(body) }
    }

    pub fn is_skip(&self) -> bool {
        matches!(self, Program::Skip)
    }

    /// Every formula in the program, guards included.
    pub fn formulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_formulas(&mut out);
        out
    }

    fn collect_formulas<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Program::Assign { formula, .. } => out.push(formula),
            Program::Seq(p, q) => {
                p.collect_formulas(out);
                q.collect_formulas(out);
            }
            Program::If { guard, then, els } => {
                out.push(guard);
                then.collect_formulas(out);
                els.collect_formulas(out);
            }
            Program::Until { guard, body } => {
                out.push(guard);
                body.collect_formulas(out);
            }
            Program::Skip | Program::Free(_) => {}
        }
    }

    /// Labels written by assignments.
    pub fn assigned(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |p| {
            if let Program::Assign { label, .. } = p {
                out.push(label.clone());
            }
        });
        out.sort();
        out.dedup();
        out
    }

    pub fn visit(&self, f: &mut dyn FnMut(&Program)) {
        f(self);
        match self {
            Program::Seq(p, q) => {
                p.visit(f);
                q.visit(f);
            }
            Program::If { then, els, .. } => {
                then.visit(f);
                els.visit(f);
            }
            Program::Until { body, .. } => body.visit(f),
            _ => {}
        }
    }

    fn write_indented(&self, out: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        match self {
            Program::Skip => write!(out, "{pad}skip"),
            Program::Assign { label, formula } => write!(out, "{pad}{label} <- {formula}"),
            Program::Seq(p, q) => {
                p.write_indented(out, depth)?;
                writeln!(out, ";")?;
                q.write_indented(out, depth)
            }
            Program::If { guard, then, els } => {
                writeln!(out, "{pad}if {guard} then {{")?;
                then.write_indented(out, depth + 1)?;
                writeln!(out, "\n{pad}}} else {{")?;
                els.write_indented(out, depth + 1)?;
                write!(out, "\n{pad}}}")
            }
            Program::Until { guard, body } => {
                writeln!(out, "{pad}until {guard} do {{")?;
                body.write_indented(out, depth + 1)?;
                write!(out, "\n{pad}}}")
            }
            Program::Free(labels) => write!(out, "{pad}free({})", labels.join(", ")),
        }
    }
}

/// Concrete syntax accepted by [`parse_program`].
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

/// What a step did, for observers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    Assign(String),
    Guard { until: bool, holds: bool },
    Free(Vec<String>),
}

/// Compiles `formula` for assignment to `label`. An existing label's domain
/// is tried first as the expected domain.
pub(crate) fn compile_for(engine: &Engine, field: &Field, label: &str, formula: &Formula) -> Result<Typed, FormulaError> {
    let env = Environment::new();
    match field.node_label(label).map(|l| l.domain.clone()) {
        Some(d) => engine.compile(field, &env, formula, Some(&d)).or_else(|_| engine.compile(field, &env, formula, None)),
        None => engine.compile(field, &env, formula, None),
    }
}

pub(crate) fn eval_for(engine: &Engine, field: &Field, label: &str, formula: &Formula) -> Result<(Domain, Vec<Value>), EvalError> {
    let t = compile_for(engine, field, label, formula)?;
    let values = engine.eval_typed(field, &Environment::new(), &t)?;
    Ok((t.domain, values))
}

/// Whether the guard holds at every node.
pub(crate) fn guard_holds(engine: &Engine, field: &Field, guard: &Formula) -> Result<bool, ProgramError> {
    let v = engine.eval(field, &Environment::new(), guard)?;
    if v.domain != Domain::Bool {
        return Err(ProgramError::GuardType { guard: guard.to_string(), domain: v.domain.to_string() });
    }
    Ok(v.values.iter().all(|x| *x == Value::Bool(true)))
}

/// One transition. The field is updated in place.
pub fn step(engine: &Engine, p: Program, field: &mut Field) -> Result<(Program, StepKind), ProgramError> {
    match p {
        Program::Skip => Err(ProgramError::Terminated),
        Program::Assign { label, formula } => {
            let (d, values) = eval_for(engine, field, &label, &formula)?;
            field.assign(&label, d, values);
            Ok((Program::Skip, StepKind::Assign(label)))
        }
        Program::Seq(first, rest) => {
            if first.is_skip() {
                return step(engine, *rest, field);
            }
            let (next, kind) = step(engine, *first, field)?;
            Ok((if next.is_skip() { *rest } else { Program::Seq(Box::new(next), rest) }, kind))
        }
        Program::If { guard, then, els } => {
            let holds = guard_holds(engine, field, &guard)?;
            Ok((if holds { *then } else { *els }, StepKind::Guard { until: false, holds }))
        }
        Program::Until { guard, body } => {
            let holds = guard_holds(engine, field, &guard)?;
            let next = if holds {
                Program::Skip
            } else {
                let again = Program::Until { guard, body: body.clone() };
                Program::Seq(body, Box::new(again))
            };
            Ok((next, StepKind::Guard { until: true, holds }))
        }
        Program::Free(labels) => {
            for l in &labels {
                field.free(l);
            }
            Ok((Program::Skip, StepKind::Free(labels)))
        }
    }
}

/// Runs to termination; returns the number of steps taken.
pub fn run(engine: &Engine, p: &Program, field: &mut Field, fuel: usize) -> Result<usize, ProgramError> {
    run_with_observer(engine, p, field, fuel, &mut |_, _, _| {})
}

/// Like [`run`], calling `observe` after every step with the step kind, the
/// remaining program and the new field.
pub fn run_with_observer(
    engine: &Engine,
    p: &Program,
    field: &mut Field,
    fuel: usize,
    observe: &mut dyn FnMut(&StepKind, &Program, &Field),
) -> Result<usize, ProgramError> {
    let mut cur = p.clone();
    let mut steps = 0;
    while !cur.is_skip() {
        if steps == fuel {
            return Err(ProgramError::FuelExhausted { steps, residual: cur.to_string() });
        }
        let (next, kind) = step(engine, cur, field)?;
        steps += 1;
        observe(&kind, &next, field);
        cur = next;
    }
    Ok(steps)
}

#[cfg(test)]
mod tests;
