//! Program syntax:
//!
//! ```text
//! prog  ::= stmt (';' stmt)* [';']
//! stmt  ::= 'skip' | label '<-' formula | 'free' '(' label (',' label)* ')'
//!         | 'if' formula 'then' body ['else' body]
//!         | 'until' formula 'do' body
//!         | '{' prog '}'
//! body  ::= stmt
//! ```

use super::Program;
use crate::formula::lex::{Cursor, Tok};
use crate::formula::{FormulaError, FormulaParser};

pub fn parse_program(text: &str) -> Result<Program, FormulaError> {
    let mut cur = Cursor::new(text)?;
    let p = sequence(&mut cur)?;
    if !cur.at_eof() {
        return Err(cur.error("unexpected input after program"));
    }
    Ok(p)
}

fn sequence(cur: &mut Cursor<'_>) -> Result<Program, FormulaError> {
    let mut items = Vec::new();
    loop {
        if cur.at_eof() || cur.is_sym("}") {
            break;
        }
        items.push(statement(cur)?);
        if !cur.eat_sym(";") {
            break;
        }
    }
    Ok(Program::seq(items))
}

fn formula(cur: &mut Cursor<'_>) -> Result<crate::formula::Formula, FormulaError> {
    FormulaParser::new(cur).formula(cur)
}

fn statement(cur: &mut Cursor<'_>) -> Result<Program, FormulaError> {
    if cur.eat_sym("{") {
        let p = sequence(cur)?;
        cur.expect_sym("}")?;
        return Ok(p);
    }
    if cur.eat_kw("skip") {
        return Ok(Program::Skip);
    }
    if cur.eat_kw("if") {
        let guard = formula(cur)?;
        cur.expect_kw("then")?;
        let then = statement(cur)?;
        let els = if cur.eat_kw("else") { statement(cur)? } else { Program::Skip };
        return Ok(Program::if_(guard, then, els));
    }
    if cur.eat_kw("until") {
        let guard = formula(cur)?;
        cur.expect_kw("do")?;
        return Ok(Program::until(guard, statement(cur)?));
    }
    if cur.is_kw("free") && matches!(cur.peek_at(1), Tok::Sym("(")) {
        cur.bump();
        cur.expect_sym("(")?;
        let mut labels = vec![cur.ident()?];
        while cur.eat_sym(",") {
            labels.push(cur.ident()?);
        }
        cur.expect_sym(")")?;
        return Ok(Program::Free(labels));
    }
    let label = cur.ident()?;
    cur.expect_sym("<-")?;
    Ok(Program::Assign { label, formula: formula(cur)? })
}
