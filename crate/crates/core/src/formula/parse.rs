//! Recursive-descent parser for formulas.
//!
//! ```text
//! formula ::= ("mu" | "nu") var "." formula
//!           | "<" ("out" | "in") [cap] [":" agg] ">" [agg] formula
//!           | name "(" [formula ("," formula)*] ")"
//!           | name | number | "inf" | "true" | "false"
//!           | ("bot" | "top") "[" domain "]"
//!           | "(" formula ")"
//! ```
//!
//! Shadowing binders are renamed apart, so every binder in a parsed formula is
//! distinct.

use std::collections::BTreeSet;

use super::lex::{Cursor, Tok};
use super::{Dir, FixKind, Formula, FormulaError};
use crate::domains::ExtRat;

pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut cur = Cursor::new(text)?;
    let mut p = FormulaParser::new(&cur);
    let f = p.formula(&mut cur)?;
    if !cur.at_eof() {
        return Err(cur.error("unexpected input after formula"));
    }
    Ok(f)
}

pub(crate) struct FormulaParser {
    taken: BTreeSet<String>,
    scope: Vec<(String, String)>,
}

const RESERVED: &[&str] = &["mu", "nu", "true", "false", "inf", "bot", "top"];

impl FormulaParser {
    pub fn new(cur: &Cursor<'_>) -> Self {
        let taken = cur
            .toks
            .iter()
            .filter_map(|t| match &t.tok {
                Tok::Ident(s) => Some(s.clone()),
                _ => None,
            })
            .collect();
        FormulaParser { taken, scope: Vec::new() }
    }

    fn fresh_binder(&mut self, name: &str) -> String {
        let clash = self.scope.iter().any(|(orig, _)| orig == name);
        let used_as_binder = self.taken.contains(&format!("{name}\u{0}"));
        let out = if clash || used_as_binder {
            let mut k = 1;
            loop {
                let cand = format!("{name}_{k}");
                if !self.taken.contains(&cand) {
                    break cand;
                }
                k += 1;
            }
        } else {
            name.to_string()
        };
        self.taken.insert(out.clone());
        self.taken.insert(format!("{out}\u{0}"));
        out
    }

    fn starts_formula(tok: &Tok) -> bool {
        matches!(tok, Tok::Ident(_) | Tok::Num(_) | Tok::Sym("<") | Tok::Sym("("))
    }

    pub fn formula(&mut self, cur: &mut Cursor<'_>) -> Result<Formula, FormulaError> {
        if cur.is_kw("mu") || cur.is_kw("nu") {
            let kind = if cur.eat_kw("mu") {
                FixKind::Mu
            } else {
                cur.bump();
                FixKind::Nu
            };
            let name = cur.ident()?;
            cur.expect_sym(".")?;
            let var = self.fresh_binder(&name);
            self.scope.push((name, var.clone()));
            let body = self.formula(cur);
            self.scope.pop();
            return Ok(Formula::Fix { kind, var, body: Box::new(body?) });
        }
        if cur.is_sym("<") {
            cur.bump();
            let dir = if cur.eat_kw("out") {
                Dir::Out
            } else if cur.eat_kw("in") {
                Dir::In
            } else {
                return Err(cur.error("expected 'out' or 'in'"));
            };
            let cap = match cur.peek() {
                Tok::Ident(_) => cur.ident()?,
                _ => "id".to_string(),
            };
            let mut agg = if cur.eat_sym(":") { Some(cur.ident()?) } else { None };
            cur.expect_sym(">")?;
            if agg.is_none() {
                let named_agg = matches!(cur.peek(), Tok::Ident(s) if !RESERVED.contains(&s.as_str()))
                    && Self::starts_formula(cur.peek_at(1))
                    && !matches!(cur.peek_at(1), Tok::Sym("("));
                if !named_agg {
                    return Err(cur.error("modal operator needs an aggregator, as in <out a:g>"));
                }
                agg = Some(cur.ident()?);
            }
            let body = self.formula(cur)?;
            return Ok(Formula::Modal { dir, cap, agg: agg.unwrap(), body: Box::new(body) });
        }
        self.atom(cur)
    }

    fn atom(&mut self, cur: &mut Cursor<'_>) -> Result<Formula, FormulaError> {
        match cur.peek().clone() {
            Tok::Num(text) => {
                cur.bump();
                let q = text.parse::<ExtRat>().map_err(|e| cur.error(e.to_string()))?;
                Ok(Formula::Num(q))
            }
            Tok::Sym("(") => {
                cur.bump();
                let f = self.formula(cur)?;
                cur.expect_sym(")")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                cur.bump();
                match name.as_str() {
                    "true" => return Ok(Formula::Bool(true)),
                    "false" => return Ok(Formula::Bool(false)),
                    "inf" => return Ok(Formula::Num(ExtRat::Inf)),
                    "bot" | "top" if cur.is_sym("[") => {
                        cur.bump();
                        let d = cur.bracketed_text()?;
                        return Ok(if name == "bot" { Formula::Bottom(d) } else { Formula::Top(d) });
                    }
                    _ => {}
                }
                if cur.eat_sym("(") {
                    let mut args = Vec::new();
                    if !cur.eat_sym(")") {
                        loop {
                            args.push(self.formula(cur)?);
                            if cur.eat_sym(")") {
                                break;
                            }
                            cur.expect_sym(",")?;
                        }
                    }
                    return Ok(Formula::Apply { func: name, args });
                }
                match self.scope.iter().rev().find(|(orig, _)| *orig == name) {
                    Some((_, renamed)) => Ok(Formula::Var(renamed.clone())),
                    None => Ok(Formula::Label(name)),
                }
            }
            _ => Err(cur.error("expected a formula")),
        }
    }
}
