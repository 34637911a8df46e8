//! Text parser for group presentations.

use super::{Presentation, PresentationError, Word};
use thiserror::Error;

/// Parse failures, with 1-based line/column positions.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: undeclared generator `{name}`")]
    UndeclaredGenerator { name: String, line: usize, col: usize },
    #[error("presentation declares no generators")]
    EmptyGenerators,
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
}

/// Parse a presentation from its text form.
///
/// Grammar (whitespace insignificant, UTF-8):
///
/// ```text
/// presentation := '<' names '|' relators '>'
/// names        := ident (',' ident)*
/// relators     := chain (',' chain)*
/// chain        := expr ('=' expr)*          -- r = s = 1 folds to r*s^-1, s
/// expr         := term ('*' term)*
/// term         := atom ('^' int)?
/// atom         := ident | '(' expr ')' | '1'
/// ```
///
/// Generator names are alphabetic tokens; `1` denotes the empty word.
/// Chained equations fold pairwise: `r = s` contributes the relator
/// `r*s^-1`, so `r = s = 1` contributes `r*s^-1` and `s`.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let pres = p.presentation()?;
    p.expect_end()?;
    Ok(pres)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lt,
    Gt,
    Pipe,
    Comma,
    Eq,
    Caret,
    Star,
    Minus,
    LParen,
    RParen,
    Int(i64),
    Ident(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '<' => {
                bump(&mut chars);
                Tok::Lt
            }
            '>' => {
                bump(&mut chars);
                Tok::Gt
            }
            '|' => {
                bump(&mut chars);
                Tok::Pipe
            }
            ',' => {
                bump(&mut chars);
                Tok::Comma
            }
            '=' => {
                bump(&mut chars);
                Tok::Eq
            }
            '^' => {
                bump(&mut chars);
                Tok::Caret
            }
            '*' => {
                bump(&mut chars);
                Tok::Star
            }
            '-' => {
                bump(&mut chars);
                Tok::Minus
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            '0'..='9' => {
                let mut n: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        bump(&mut chars);
                        n = n.saturating_mul(10).saturating_add(v as i64);
                    } else {
                        break;
                    }
                }
                Tok::Int(n)
            }
            c if c.is_alphabetic() => {
                let mut s = String::new();
                while let Some(&a) = chars.peek() {
                    if a.is_alphabetic() {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            other => {
                return Err(ParseError::Syntax {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Spanned { tok, line: tl, col: tc });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        match self.tokens.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => self
                .tokens
                .last()
                .map(|s| (s.line, s.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax { line, col, msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(s) if s.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.syntax(format!("expected {what}"))),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.syntax("trailing input after `>`"))
        }
    }

    fn presentation(&mut self) -> Result<Presentation, ParseError> {
        self.expect(Tok::Lt, "`<`")?;
        let names = self.names()?;
        self.expect(Tok::Pipe, "`|`")?;
        let mut relators = Vec::new();
        loop {
            self.chain(&names, &mut relators)?;
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Comma) => {
                    self.pos += 1;
                }
                Some(Tok::Gt) => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.syntax("expected `,` or `>` after relator")),
            }
        }
        Presentation::new(names, relators).map_err(|e| match e {
            PresentationError::EmptyGenerators => ParseError::EmptyGenerators,
            PresentationError::DuplicateGenerator(n) => ParseError::DuplicateGenerator(n),
            // relator letters come from resolved names, so this cannot happen
            PresentationError::LetterOutOfRange { .. } => unreachable!(),
        })
    }

    fn names(&mut self) -> Result<Vec<String>, ParseError> {
        let mut names = Vec::new();
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Pipe)) {
            return Err(ParseError::EmptyGenerators);
        }
        loop {
            match self.next() {
                Some(Spanned { tok: Tok::Ident(s), .. }) => names.push(s),
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return Err(self.syntax("expected generator name"));
                }
            }
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Comma) => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(names)
    }

    /// One relator chain `expr (= expr)*`, folding equations pairwise.
    fn chain(&mut self, names: &[String], out: &mut Vec<Word>) -> Result<(), ParseError> {
        let mut exprs = vec![self.expr(names)?];
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::Eq)) {
            self.pos += 1;
            exprs.push(self.expr(names)?);
        }
        if exprs.len() == 1 {
            let w = exprs.pop().unwrap();
            if !w.is_identity() {
                out.push(w);
            }
            return Ok(());
        }
        for pair in exprs.windows(2) {
            let w = pair[0].multiply(&pair[1].inverse());
            if !w.is_identity() {
                out.push(w);
            }
        }
        Ok(())
    }

    fn expr(&mut self, names: &[String]) -> Result<Word, ParseError> {
        let mut w = self.term(names)?;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::Star)) {
            self.pos += 1;
            w = w.multiply(&self.term(names)?);
        }
        Ok(w)
    }

    fn term(&mut self, names: &[String]) -> Result<Word, ParseError> {
        let atom = self.atom(names)?;
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Caret)) {
            self.pos += 1;
            let exp = self.exponent()?;
            return Ok(atom.pow(exp));
        }
        Ok(atom)
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let neg = if matches!(self.peek().map(|s| &s.tok), Some(Tok::Minus)) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Spanned { tok: Tok::Int(n), .. }) if n <= 10_000 => {
                Ok(if neg { -(n as i32) } else { n as i32 })
            }
            Some(Spanned { tok: Tok::Int(_), line, col }) => Err(ParseError::Syntax {
                line,
                col,
                msg: "exponent too large (limit 10000)".into(),
            }),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.syntax("expected integer exponent after `^`"))
            }
        }
    }

    fn atom(&mut self, names: &[String]) -> Result<Word, ParseError> {
        match self.next() {
            Some(Spanned { tok: Tok::Ident(s), line, col }) => {
                match names.iter().position(|n| *n == s) {
                    Some(i) => Ok(Word::generator(i as i32 + 1)),
                    None => Err(ParseError::UndeclaredGenerator { name: s, line, col }),
                }
            }
            Some(Spanned { tok: Tok::Int(1), .. }) => Ok(Word::identity()),
            Some(Spanned { tok: Tok::LParen, .. }) => {
                let w = self.expr(names)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(w)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.syntax("expected generator, `(`, or `1`"))
            }
        }
    }
}
