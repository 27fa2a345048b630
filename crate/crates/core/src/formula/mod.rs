//! Fixpoint formulas over fields: syntax tree, concrete syntax, function
//! registry and the monotonicity check applied beneath binders.

mod check;
mod functions;
pub(crate) mod lex;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use crate::domains::{DomainError, ExtRat};
use crate::field::FieldError;

pub use check::{check_monotone, MonotoneReport, Offense};
pub use functions::{Arity, CallCtx, Function, FunctionRegistry};
pub use parse::parse_formula;
pub(crate) use parse::FormulaParser;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown function {0}")]
    UnknownFunction(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("unknown edge label {0}")]
    UnknownEdgeLabel(String),
    #[error("unbound variable {0}")]
    UnboundVar(String),
    #[error("{func} does not take {got} arguments")]
    Arity { func: String, got: usize },
    #[error("type error: {0}")]
    Type(String),
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Out,
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixKind {
    Mu,
    Nu,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Label(String),
    Var(String),
    Bool(bool),
    Num(ExtRat),
    /// Bottom or top of a domain written in the compact domain syntax.
    Bottom(String),
    Top(String),
    Apply { func: String, args: Vec<Formula> },
    /// Aggregates, with `agg`, the values of `body` at the neighbours along
    /// `dir` edges after transforming them with edge label `cap`.
    Modal { dir: Dir, cap: String, agg: String, body: Box<Formula> },
    Fix { kind: FixKind, var: String, body: Box<Formula> },
}

impl Formula {
    pub fn label(s: &str) -> Formula {
        Formula::Label(s.to_string())
    }

    pub fn var(s: &str) -> Formula {
        Formula::Var(s.to_string())
    }

    pub fn apply(func: &str, args: Vec<Formula>) -> Formula {
        Formula::Apply { func: func.to_string(), args }
    }

    pub fn modal(dir: Dir, cap: &str, agg: &str, body: Formula) -> Formula {
        Formula::Modal { dir, cap: cap.to_string(), agg: agg.to_string(), body: Box::new(body) }
    }

    pub fn mu(var: &str, body: Formula) -> Formula {
        Formula::Fix { kind: FixKind::Mu, var: var.to_string(), body: Box::new(body) }
    }

    pub fn nu(var: &str, body: Formula) -> Formula {
        Formula::Fix { kind: FixKind::Nu, var: var.to_string(), body: Box::new(body) }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(z) => {
                if !bound.contains(z) {
                    out.insert(z.clone());
                }
            }
            Formula::Apply { args, .. } => args.iter().for_each(|a| a.collect_free(bound, out)),
            Formula::Modal { body, .. } => body.collect_free(bound, out),
            Formula::Fix { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            _ => {}
        }
    }

    /// Whether every free variable is in `env`.
    pub fn closed_under<'a, I: IntoIterator<Item = &'a String>>(&self, env: I) -> bool {
        let dom: BTreeSet<&String> = env.into_iter().collect();
        self.free_vars().iter().all(|z| dom.contains(z))
    }

    /// Node labels read by the formula.
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Label(l) = f {
                out.insert(l.clone());
            }
        });
        out
    }

    pub fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Apply { args, .. } => args.iter().for_each(|a| a.visit(f)),
            Formula::Modal { body, .. } | Formula::Fix { body, .. } => body.visit(f),
            _ => {}
        }
    }

    pub fn mentions_var(&self, z: &str) -> bool {
        self.free_vars().contains(z)
    }

    /// Substitutes `with` for free occurrences of variable `z`.
    pub fn subst_var(&self, z: &str, with: &Formula) -> Formula {
        match self {
            Formula::Var(v) if v == z => with.clone(),
            Formula::Apply { func, args } => {
                Formula::Apply { func: func.clone(), args: args.iter().map(|a| a.subst_var(z, with)).collect() }
            }
            Formula::Modal { dir, cap, agg, body } => {
                Formula::Modal { dir: *dir, cap: cap.clone(), agg: agg.clone(), body: Box::new(body.subst_var(z, with)) }
            }
            Formula::Fix { kind, var, body } if var != z => {
                Formula::Fix { kind: *kind, var: var.clone(), body: Box::new(body.subst_var(z, with)) }
            }
            other => other.clone(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Label(s) | Formula::Var(s) => write!(f, "{s}"),
            Formula::Bool(b) => write!(f, "{b}"),
            Formula::Num(q) => write!(f, "{q}"),
            Formula::Bottom(d) => write!(f, "bot[{d}]"),
            Formula::Top(d) => write!(f, "top[{d}]"),
            Formula::Apply { func, args } => {
                write!(f, "{func}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Modal { dir, cap, agg, body } => {
                let d = match dir {
                    Dir::Out => "out",
                    Dir::In => "in",
                };
                write!(f, "<{d} {cap}:{agg}> {body}")
            }
            Formula::Fix { kind, var, body } => {
                let k = match kind {
                    FixKind::Mu => "mu",
                    FixKind::Nu => "nu",
                };
                write!(f, "{k} {var}. {body}")
            }
        }
    }
}

/// `neq(eq(psi, <out id:eq> psi, <in id:eq> psi), none())`: true where `psi`
/// agrees with every in- and out-neighbour.
pub fn agreement_formula(psi: &Formula) -> Formula {
    Formula::apply(
        "neq",
        vec![
            Formula::apply(
                "eq",
                vec![
                    psi.clone(),
                    Formula::modal(Dir::Out, "id", "eq", psi.clone()),
                    Formula::modal(Dir::In, "id", "eq", psi.clone()),
                ],
            ),
            Formula::apply("none", vec![]),
        ],
    )
}
