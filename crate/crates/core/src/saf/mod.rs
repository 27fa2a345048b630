//! Simple assignment form: programs whose assignments have elementary right
//! sides and whose guards are labels. Fixpoints become explicit loops over
//! auxiliary labels named `$aux:N`.
//!
//! Translation needs the field because fixpoint loops are seeded with the
//! bottom (or top) of the fixpoint's domain, which is found by typing the
//! formula against the labels present at that point of the program.

use crate::domains::{Mark, Value};
use crate::eval::{CapRef, Engine, TKind, Typed};
use crate::field::Field;
use crate::formula::{FixKind, Formula, FormulaError};
use crate::program::{compile_for, run, Program, ProgramError};

/// Prefix reserved for auxiliary labels.
pub const AUX_PREFIX: &str = "$aux:";

pub fn aux(c: usize) -> String {
    format!("{AUX_PREFIX}{c}")
}

pub fn is_aux(label: &str) -> bool {
    label.starts_with(AUX_PREFIX)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SafError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error("label {0} lies in the reserved auxiliary namespace")]
    AuxCollision(String),
    #[error("guard {0} is not boolean")]
    GuardType(String),
    #[error("auxiliary counter overflow")]
    CounterOverflow,
}

/// Labels, function applications to labels, and modalities over a label.
/// Constants count as nullary applications.
pub fn is_elementary(f: &Formula) -> bool {
    let atomic = |g: &Formula| {
        matches!(g, Formula::Label(_) | Formula::Bool(_) | Formula::Num(_) | Formula::Bottom(_) | Formula::Top(_))
    };
    match f {
        Formula::Apply { args, .. } => args.iter().all(|a| matches!(a, Formula::Label(_))),
        Formula::Modal { body, .. } => matches!(body.as_ref(), Formula::Label(_)),
        other => atomic(other),
    }
}

/// Whether every assignment is elementary and every guard a label.
pub fn is_saf(p: &Program) -> bool {
    let mut ok = true;
    p.visit(&mut |q| match q {
        Program::Assign { formula, .. } => ok &= is_elementary(formula),
        Program::If { guard, .. } | Program::Until { guard, .. } => ok &= matches!(guard, Formula::Label(_)),
        _ => {}
    });
    ok
}

/// `x <- true; until x do skip`: a global barrier once distributed.
pub fn wait(x: &str) -> Program {
    Program::seq(vec![
        Program::assign(x, Formula::Bool(true)),
        Program::until(Formula::label(x), Program::Skip),
    ])
}

/// Translates programs against a shadow field that tracks the domain of every
/// label as assignments are passed.
pub struct Translator<'a> {
    engine: &'a Engine,
    shadow: Field,
}

impl<'a> Translator<'a> {
    pub fn new(engine: &'a Engine, field: &Field) -> Self {
        Translator { engine, shadow: field.clone() }
    }

    fn note(&mut self, label: &str, t: &Typed) {
        let n = self.shadow.node_count();
        self.shadow.assign(label, t.domain.clone(), vec![Value::Mark(Mark::Any); n]);
    }

    fn check_label(label: &str) -> Result<(), SafError> {
        if is_aux(label) {
            return Err(SafError::AuxCollision(label.to_string()));
        }
        Ok(())
    }

    /// Translation of a program, allocating auxiliaries from `c`; returns
    /// the next free counter.
    pub fn program(&mut self, p: &Program, c: usize) -> Result<(Program, usize), SafError> {
        Ok(match p {
            Program::Skip => (Program::Skip, c),
            Program::Assign { label, formula } => {
                Self::check_label(label)?;
                let t = compile_for(self.engine, &self.shadow, label, formula)?;
                let (s, c2) = self.formula(&t, label, c, &mut Vec::new())?;
                self.note(label, &t);
                let frees: Vec<String> = (c..c2).map(aux).collect();
                let s = if frees.is_empty() { s } else { Program::seq(vec![s, Program::Free(frees)]) };
                (s, c2)
            }
            Program::Seq(first, rest) => {
                let (s, c1) = self.program(first, c)?;
                let (r, c2) = self.program(rest, c1)?;
                (Program::seq(vec![s, wait(&aux(c2)), r]), bump(c2)?)
            }
            Program::If { guard, then, els } => {
                let (r, c1) = self.guard(guard, c)?;
                let (s1, c2) = self.program(then, c1)?;
                let (s2, c3) = self.program(els, c2)?;
                (Program::seq(vec![r, Program::if_(Formula::label(&aux(c)), s1, s2)]), c3)
            }
            Program::Until { guard, body } => {
                let (r, c1) = self.guard(guard, c)?;
                let (s, c2) = self.program(body, c1)?;
                let loop_body = Program::seq(vec![s, wait(&aux(c2)), r.clone()]);
                (Program::seq(vec![r, Program::until(Formula::label(&aux(c)), loop_body)]), bump(c2)?)
            }
            Program::Free(labels) => {
                for l in labels {
                    Self::check_label(l)?;
                    self.shadow.free(l);
                }
                (Program::Free(labels.clone()), c)
            }
        })
    }

    /// Evaluates `guard` into `$aux:c`.
    fn guard(&mut self, guard: &Formula, c: usize) -> Result<(Program, usize), SafError> {
        let t = self.engine.compile(&self.shadow, &Default::default(), guard, None)?;
        if t.domain != crate::domains::Domain::Bool {
            return Err(SafError::GuardType(guard.to_string()));
        }
        let r = self.formula(&t, &aux(c), c + 1, &mut Vec::new())?;
        self.note(&aux(c), &t);
        Ok(r)
    }

    /// Program storing the value of `t` in label `j`. `vars` maps the
    /// enclosing fixpoint variables to the labels holding their current
    /// approximant.
    pub fn formula(&mut self, t: &Typed, j: &str, c: usize, vars: &mut Vec<String>) -> Result<(Program, usize), SafError> {
        Ok(match &t.kind {
            TKind::Label(l) => (Program::assign(j, Formula::label(l)), c),
            TKind::Var(slot) => (Program::assign(j, Formula::label(&vars[*slot])), c),
            TKind::Const(v) => (Program::assign(j, constant(t, v)), c),
            TKind::Apply { name, args, .. } => {
                let mut parts = Vec::new();
                let mut holders = Vec::new();
                let mut k = c;
                for a in args {
                    let x = aux(k);
                    let (s, next) = self.formula(a, &x, bump(k)?, vars)?;
                    self.note(&x, a);
                    parts.push(s);
                    holders.push(Formula::label(&x));
                    k = next;
                }
                parts.push(Program::assign(j, Formula::apply(name, holders)));
                (Program::seq(parts), k)
            }
            TKind::Modal { dir, cap, agg_name, body, .. } => {
                let x = aux(c);
                let (s, c1) = self.formula(body, &x, bump(c)?, vars)?;
                self.note(&x, body);
                let cap = match cap {
                    CapRef::Identity => "id".to_string(),
                    CapRef::Label(l) => l.clone(),
                };
                let m = Formula::modal(*dir, &cap, agg_name, Formula::label(&x));
                (Program::seq(vec![s, Program::assign(j, m)]), c1)
            }
            TKind::Fix { kind, body, .. } => {
                let (prev, cur) = (aux(c), aux(bump(c)?));
                vars.push(prev.clone());
                self.note(&prev, t);
                self.note(&cur, t);
                let inner = self.formula(body, &cur, bump(bump(c)?)?, vars);
                vars.pop();
                let (s, c1) = inner?;
                let done = aux(c1);
                let d = t.domain.to_string();
                let seed = match kind {
                    FixKind::Mu => Formula::Bottom(d),
                    FixKind::Nu => Formula::Top(d),
                };
                let prog = Program::seq(vec![
                    Program::assign(&prev, seed.clone()),
                    Program::assign(&cur, seed),
                    Program::assign(&done, Formula::Bool(false)),
                    Program::until(
                        Formula::label(&done),
                        Program::seq(vec![
                            Program::assign(&prev, Formula::label(&cur)),
                            s,
                            Program::assign(&done, Formula::apply("same", vec![Formula::label(&prev), Formula::label(&cur)])),
                        ]),
                    ),
                    Program::assign(j, Formula::label(&cur)),
                ]);
                (prog, bump(c1)?)
            }
        })
    }
}

fn bump(c: usize) -> Result<usize, SafError> {
    c.checked_add(1).ok_or(SafError::CounterOverflow)
}

fn constant(t: &Typed, v: &Value) -> Formula {
    match v {
        Value::Bool(b) => Formula::Bool(*b),
        Value::Num(q) => Formula::Num(q.clone()),
        _ if t.domain.bottom().as_ref() == Ok(v) => Formula::Bottom(t.domain.to_string()),
        _ => Formula::Top(t.domain.to_string()),
    }
}

/// Translation of `p` from counter 0.
pub fn translate_program(engine: &Engine, field: &Field, p: &Program) -> Result<Program, SafError> {
    Ok(Translator::new(engine, field).program(p, 0)?.0)
}

/// Program storing the value of the closed formula `f` in `target`.
pub fn translate_formula(engine: &Engine, field: &Field, f: &Formula, target: &str, c: usize) -> Result<(Program, usize), SafError> {
    let mut tr = Translator::new(engine, field);
    let t = compile_for(engine, field, target, f)?;
    tr.formula(&t, target, c, &mut Vec::new())
}

/// Removes every auxiliary label from `field`.
pub fn erase_aux(field: &mut Field) {
    let aux: Vec<String> = field.node_labels().keys().filter(|l| is_aux(l)).cloned().collect();
    for l in aux {
        field.free(&l);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Difference {
    pub label: String,
    pub node: Option<String>,
    pub direct: String,
    pub saf: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    pub direct_steps: usize,
    pub saf_steps: usize,
    pub difference: Option<Difference>,
}

impl DiffReport {
    pub fn equal(&self) -> bool {
        self.difference.is_none()
    }
}

/// Runs `p` and its translation on copies of `field` and compares the final
/// fields with auxiliaries erased.
pub fn differential_check(engine: &Engine, field: &Field, p: &Program, fuel: usize) -> Result<DiffReport, SafError> {
    let s = translate_program(engine, field, p)?;
    let mut direct = field.clone();
    let direct_steps = run(engine, p, &mut direct, fuel)?;
    let mut saf = field.clone();
    let saf_steps = run(engine, &s, &mut saf, fuel)?;
    erase_aux(&mut saf);
    Ok(DiffReport { direct_steps, saf_steps, difference: first_difference(&direct, &saf) })
}

pub fn first_difference(a: &Field, b: &Field) -> Option<Difference> {
    let (la, lb) = (a.node_labels(), b.node_labels());
    for name in la.keys().chain(lb.keys()) {
        match (la.get(name), lb.get(name)) {
            (Some(x), Some(y)) => {
                if x.domain != y.domain {
                    return Some(Difference {
                        label: name.clone(),
                        node: None,
                        direct: x.domain.to_string(),
                        saf: y.domain.to_string(),
                    });
                }
                if let Some(k) = (0..x.values.len()).find(|&k| x.values[k] != y.values[k]) {
                    return Some(Difference {
                        label: name.clone(),
                        node: Some(a.node_name(k).to_string()),
                        direct: x.values[k].to_string(),
                        saf: y.values[k].to_string(),
                    });
                }
            }
            (x, y) => {
                let show = |l: Option<&crate::field::NodeLabel>| l.map_or("absent".to_string(), |l| l.domain.to_string());
                return Some(Difference { label: name.clone(), node: None, direct: show(x), saf: show(y) });
            }
        }
    }
    None
}

/// Number of distinct auxiliary labels assigned in `p`.
pub fn aux_count(p: &Program) -> usize {
    let mut seen = std::collections::BTreeSet::new();
    p.visit(&mut |q| {
        if let Program::Assign { label, .. } = q {
            if is_aux(label) {
                seen.insert(label.clone());
            }
        }
    });
    seen.len()
}

#[cfg(test)]
mod tests;
