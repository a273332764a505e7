use thiserror::Error;

use super::{Expr, RelOp, Relation};
use crate::interval::{BinaryOp, UnaryOp};

/// Syntax error with the byte offset where it was detected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at offset {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Var(usize),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Rel(RelOp),
    Eof,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(v) => format!("number {v}"),
        Tok::Var(k) => format!("variable {{{k}}}"),
        Tok::Ident(s) => format!("name '{s}'"),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Rel(op) => format!("'{op}'"),
        Tok::Eof => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b',' => out.push((start, Tok::Comma)),
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'=' => out.push((start, Tok::Rel(RelOp::Eq))),
            b'<' | b'>' => {
                let or_equal = bytes.get(i + 1) == Some(&b'=');
                let op = match (c, or_equal) {
                    (b'<', false) => RelOp::Lt,
                    (b'<', true) => RelOp::Le,
                    (_, false) => RelOp::Gt,
                    (_, true) => RelOp::Ge,
                };
                if or_equal {
                    i += 1;
                }
                out.push((start, Tok::Rel(op)));
            }
            b'{' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &src[digits_start..i];
                while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                if digits.is_empty() || bytes.get(i) != Some(&b'}') {
                    return Err(ParseError::new(start, "malformed variable reference"));
                }
                let k = digits
                    .parse::<usize>()
                    .map_err(|_| ParseError::new(start, "variable index too large"))?;
                out.push((start, Tok::Var(k)));
            }
            b'0'..=b'9' | b'.' => {
                i = lex_number(src, i)?;
                let text = &src[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| ParseError::new(start, format!("malformed number '{text}'")))?;
                if !v.is_finite() {
                    return Err(ParseError::new(
                        start,
                        format!("number '{text}' out of range"),
                    ));
                }
                out.push((start, Tok::Num(v)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::new(
                    start,
                    format!("unexpected character '{ch}'"),
                ));
            }
        }
        i += 1;
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

/// Scans `digits [. digits] [e [+-] digits]` and returns the end offset.
fn lex_number(src: &str, mut i: usize) -> Result<usize, ParseError> {
    let bytes = src.as_bytes();
    let start = i;
    let mut mantissa_digits = 0;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
        mantissa_digits += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
            mantissa_digits += 1;
        }
    }
    if mantissa_digits == 0 {
        return Err(ParseError::new(start, "malformed number"));
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        i += 1;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return Err(ParseError::new(
                start,
                format!("malformed number '{}'", &src[start..i]),
            ));
        }
    }
    if i < bytes.len() && (bytes[i] == b'.' || bytes[i].is_ascii_alphabetic()) {
        return Err(ParseError::new(
            start,
            format!("malformed number '{}'", &src[start..=i]),
        ));
    }
    Ok(i)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    arity: usize,
    depth: usize,
}

/// Nesting limit, keeps recursion bounded on adversarial input.
const MAX_DEPTH: usize = 256;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Tok::RParen => ParseError::new(self.offset(), "unbalanced parentheses: unexpected ')'"),
            Tok::Rel(_) => {
                ParseError::new(self.offset(), "relational operator inside an expression")
            }
            t => ParseError::new(self.offset(), format!("unexpected {}", describe(t))),
        }
    }

    fn relation(&mut self) -> Result<Relation, ParseError> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Rel(op) => *op,
            Tok::Eof => {
                return Err(ParseError::new(
                    self.offset(),
                    "missing relational operator (one of = < > <= >=)",
                ))
            }
            _ => return Err(self.unexpected()),
        };
        self.bump();
        let rhs = self.expr()?;
        match self.peek() {
            Tok::Eof => Ok(Relation { lhs, op, rhs }),
            Tok::Rel(_) => Err(ParseError::new(
                self.offset(),
                "more than one relational operator",
            )),
            _ => Err(self.unexpected()),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            let at = self.offset();
            self.bump();
            self.enter(at)?;
            let arg = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::unary(UnaryOp::Neg, arg));
        }
        self.primary()
    }

    fn enter(&mut self, at: usize) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(at, "expression nested too deeply"));
        }
        Ok(())
    }

    fn close_paren(&mut self, open_at: usize) -> Result<(), ParseError> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Err(ParseError::new(
                open_at,
                "unbalanced parentheses: '(' is never closed",
            )),
            _ => Err(self.unexpected()),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::Var(k) => {
                if k >= self.arity {
                    Err(ParseError::new(
                        at,
                        format!("variable {{{k}}} out of range (arity {})", self.arity),
                    ))
                } else {
                    Ok(Expr::Var(k))
                }
            }
            Tok::LParen => {
                self.enter(at)?;
                let e = self.expr()?;
                self.close_paren(at)?;
                self.depth -= 1;
                Ok(e)
            }
            Tok::Ident(name) => self.call(at, &name),
            Tok::Eof => Err(ParseError::new(at, "unexpected end of input")),
            _ => {
                self.pos -= 1;
                Err(self.unexpected())
            }
        }
    }

    fn call(&mut self, at: usize, name: &str) -> Result<Expr, ParseError> {
        let unary = UnaryOp::from_name(name);
        let binary = BinaryOp::from_name(name);
        if unary.is_none() && binary.is_none() {
            return Err(ParseError::new(at, format!("unknown function '{name}'")));
        }
        let open_at = self.offset();
        if *self.peek() != Tok::LParen {
            return Err(ParseError::new(
                open_at,
                format!("expected '(' after '{name}'"),
            ));
        }
        self.bump();
        self.enter(at)?;
        let mut args = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.expr()?);
        }
        self.close_paren(open_at)?;
        self.depth -= 1;
        match (unary, binary, args.len()) {
            (Some(op), _, 1) => Ok(Expr::unary(op, args.pop().unwrap())),
            (_, Some(op), 2) => {
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                Ok(Expr::binary(op, a, b))
            }
            (_, _, n) => {
                let want = if unary.is_some() { 1 } else { 2 };
                Err(ParseError::new(
                    at,
                    format!("'{name}' takes {want} argument(s), got {n}"),
                ))
            }
        }
    }
}

/// Parses one relation against the given variable arity.
pub fn parse(source: &str, arity: usize) -> Result<Relation, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        pos: 0,
        arity,
        depth: 0,
    };
    if *p.peek() == Tok::Eof {
        return Err(ParseError::new(0, "empty constraint"));
    }
    p.relation()
}
