//! S-expression reader and printer with source positions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::symbolic::Rational;

use super::SceneError;

/// A 1-based source position. Positions do not take part in structural
/// equality, so a reprinted scene compares equal to the original.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    Symbol(String),
    Keyword(String),
    Number(Rational),
    Str(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Atom(Atom),
    List(Vec<Node>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub pos: Pos,
}

impl Node {
    pub fn symbol(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Atom(Atom::Symbol(s)) => Some(s),
            _ => None,
        }
    }

    pub fn keyword(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Atom(Atom::Keyword(s)) => Some(s),
            _ => None,
        }
    }

    pub fn number(&self) -> Option<&Rational> {
        match &self.kind {
            NodeKind::Atom(Atom::Number(q)) => Some(q),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[Node]> {
        match &self.kind {
            NodeKind::List(items) => Some(items),
            _ => None,
        }
    }

    /// A nonnegative integer literal.
    pub fn natural(&self) -> Option<usize> {
        let q = self.number()?;
        if !q.is_integer() || q < &Rational::zero() {
            return None;
        }
        q.to_integer().try_into().ok()
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NodeKind::Atom(a) => write!(f, "{a}"),
            NodeKind::List(items) => {
                f.write_str("(")?;
                for (k, n) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{n}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Symbol(s) => f.write_str(s),
            Atom::Keyword(k) => write!(f, ":{k}"),
            Atom::Number(q) => write!(f, "{q}"),
            Atom::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

fn syntax(pos: Pos, expected: impl Into<String>) -> SceneError {
    SceneError::Syntax {
        line: pos.line,
        col: pos.col,
        expected: expected.into(),
    }
}

fn delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';')
}

impl<'a> Reader<'a> {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn node(&mut self) -> Result<Node, SceneError> {
        self.skip_blank();
        let pos = self.pos();
        match self.chars.peek().copied() {
            None => Err(syntax(pos, "expression")),
            Some(')') => Err(syntax(pos, "expression")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.chars.peek() {
                        None => return Err(syntax(self.pos(), "`)`")),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.node()?),
                    }
                }
                Ok(Node {
                    kind: NodeKind::List(items),
                    pos,
                })
            }
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(syntax(self.pos(), "closing `\"`")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return Err(syntax(self.pos(), "escape `\\\"`, `\\\\` or `\\n`")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Ok(Node {
                    kind: NodeKind::Atom(Atom::Str(s)),
                    pos,
                })
            }
            Some(_) => {
                let mut text = String::new();
                while let Some(&c) = self.chars.peek() {
                    if delimiter(c) {
                        break;
                    }
                    text.push(c);
                    self.bump();
                }
                Ok(Node {
                    kind: NodeKind::Atom(classify(&text, pos)?),
                    pos,
                })
            }
        }
    }
}

fn digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn classify(text: &str, pos: Pos) -> Result<Atom, SceneError> {
    if let Some(k) = text.strip_prefix(':') {
        if k.is_empty() {
            return Err(syntax(pos, "keyword name after `:`"));
        }
        return Ok(Atom::Keyword(k.to_string()));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let int = |s: &str| s.parse::<BigInt>().expect("digits");
    let value = if let Some((n, d)) = body.split_once('/') {
        if !digits(n) || !digits(d) {
            return symbol_or_number(text, pos);
        }
        let d = int(d);
        if d.is_zero() {
            return Err(syntax(pos, "nonzero denominator"));
        }
        Rational::new(int(n), d)
    } else if let Some((w, f)) = body.split_once('.') {
        if !digits(w) || !digits(f) {
            return symbol_or_number(text, pos);
        }
        let scale = num_traits::pow(BigInt::one() * 10, f.len());
        Rational::new(int(w) * &scale + int(f), scale)
    } else if digits(body) {
        Rational::from_integer(int(body))
    } else {
        return symbol_or_number(text, pos);
    };
    Ok(Atom::Number(if neg { -value } else { value }))
}

fn symbol_or_number(text: &str, pos: Pos) -> Result<Atom, SceneError> {
    let first = text.chars().next().expect("nonempty atom");
    if first.is_ascii_digit() || (text.len() > 1 && matches!(first, '-' | '+' | '.') && text[1..].starts_with(|c: char| c.is_ascii_digit())) {
        return Err(syntax(pos, "number (integer, ratio `p/q` or decimal)"));
    }
    Ok(Atom::Symbol(text.to_string()))
}

/// Reads every top-level expression.
pub fn read_all(text: &str) -> Result<Vec<Node>, SceneError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        r.skip_blank();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        if r.chars.peek() == Some(&')') {
            return Err(syntax(r.pos(), "`(` starting a declaration"));
        }
        out.push(r.node()?);
    }
}
