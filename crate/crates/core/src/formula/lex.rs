//! Tokenizer shared by the formula and program syntaxes.

use super::FormulaError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub start: usize,
    pub line: usize,
    pub col: usize,
}

const SYMBOLS: &[&str] = &["<-", "==", "<", ">", ":", "(", ")", ",", ".", "[", "]", ";", "{", "}"];

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, FormulaError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut pos, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |pos: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for &b in &bytes[*pos..*pos + n] {
            if b == b'\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        }
        *pos += n;
    };
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            advance(&mut pos, &mut line, &mut col, 1);
            continue;
        }
        if c == b'#' || (c == b'/' && bytes.get(pos + 1) == Some(&b'/')) {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                advance(&mut pos, &mut line, &mut col, 1);
            }
            continue;
        }
        let (start, sl, sc) = (pos, line, col);
        let tok = if c.is_ascii_alphabetic() || c == b'_' || c == b'$' {
            let mut end = pos + 1;
            while end < bytes.len() {
                let d = bytes[end];
                let ok = d.is_ascii_alphanumeric() || d == b'_' || d == b'\'' || (c == b'$' && d == b':');
                if !ok {
                    break;
                }
                end += 1;
            }
            let text = &src[pos..end];
            advance(&mut pos, &mut line, &mut col, end - start);
            Tok::Ident(text.to_string())
        } else if c.is_ascii_digit() {
            let mut end = pos + 1;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if end + 1 < bytes.len() && (bytes[end] == b'/' || bytes[end] == b'.') && bytes[end + 1].is_ascii_digit() {
                end += 1;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
            }
            let text = &src[pos..end];
            advance(&mut pos, &mut line, &mut col, end - start);
            Tok::Num(text.to_string())
        } else if let Some(s) = SYMBOLS.iter().find(|s| src[pos..].starts_with(**s)) {
            advance(&mut pos, &mut line, &mut col, s.len());
            Tok::Sym(s)
        } else {
            let ch = src[pos..].chars().next().unwrap_or('?');
            return Err(FormulaError::Parse { line, col, msg: format!("unexpected character {ch:?}") });
        };
        out.push(Token { tok, start, line: sl, col: sc });
    }
    out.push(Token { tok: Tok::Eof, start: pos, line, col });
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor<'a> {
    pub src: &'a str,
    pub toks: Vec<Token>,
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Result<Self, FormulaError> {
        Ok(Cursor { src, toks: tokenize(src)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, msg: impl Into<String>) -> FormulaError {
        let t = &self.toks[self.pos];
        FormulaError::Parse { line: t.line, col: t.col, msg: msg.into() }
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    pub fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_kw(&mut self, k: &str) -> bool {
        if self.is_kw(k) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), FormulaError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{s}'")))
        }
    }

    pub fn expect_kw(&mut self, k: &str) -> Result<(), FormulaError> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{k}'")))
        }
    }

    pub fn ident(&mut self) -> Result<String, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("expected a name")),
        }
    }

    /// Raw source text up to the bracket closing an already consumed `[`.
    pub fn bracketed_text(&mut self) -> Result<String, FormulaError> {
        let start = self.toks[self.pos].start;
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return Err(self.error("unclosed '['")),
                Tok::Sym("[") => depth += 1,
                Tok::Sym("]") if depth == 0 => {
                    let end = self.toks[self.pos].start;
                    self.bump();
                    return Ok(self.src[start..end].trim().to_string());
                }
                Tok::Sym("]") => depth -= 1,
                _ => {}
            }
            self.bump();
        }
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }
}
