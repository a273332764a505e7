//! The string constraint language.
//!
//! A constraint is `expr REL expr` where `REL` is one of `= < > <= >=`.
//! Variables are written by index in braces (`{0}`, `{1}`, ...), so the
//! constraint `({0}+{1}+{2})/3={3}` states that the fourth variable is the mean
//! of the first three.
//!
//! Precedence, tightest first: prefix `-`, then `*` `/`, then `+` `-`; binary
//! operators associate to the left. Named functions take one argument except
//! `min`, `max`, `pow` and `atan2`, which take two. There is no `^`.
//! Numeric literals denote the nearest double.

mod eval;
mod parser;

use std::fmt;

pub use parser::{parse, ParseError};

use crate::interval::{BinaryOp, Interval, UnaryOp};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn unary(op: UnaryOp, arg: Expr) -> Expr {
        Expr::Unary(op, Box::new(arg))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Natural interval extension over `domains` (indexed by variable).
    pub fn evaluate(&self, domains: &[Interval]) -> Interval {
        eval::evaluate(self, domains)
    }

    /// Like [`Expr::evaluate`], also reporting whether every operator was
    /// applied inside its natural domain (so the expression is defined at
    /// every point of `domains`).
    pub fn evaluate_total(&self, domains: &[Interval]) -> (Interval, bool) {
        eval::evaluate_total(self, domains)
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(k) => Some(*k),
            Expr::Unary(_, a) => a.max_var(),
            Expr::Binary(_, a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, a) => 1 + a.depth(),
            Expr::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, a) => 1 + a.size(),
            Expr::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesised, so printing and re-parsing is structure
    /// preserving.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var(k) => write!(f, "{{{k}}}"),
            Expr::Unary(op, a) => match op.name() {
                Some(name) => write!(f, "{name}({a})"),
                None => write!(f, "(-{a})"),
            },
            Expr::Binary(op, a, b) => match op.symbol() {
                Some(sym) => write!(f, "({a}{sym}{b})"),
                None => write!(f, "{}({a},{b})", op.name().unwrap_or("?")),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelOp {
    Eq,
    Lt,
    Gt,
    Le,
    Ge,
}

impl RelOp {
    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Eq => "=",
            RelOp::Lt => "<",
            RelOp::Gt => ">",
            RelOp::Le => "<=",
            RelOp::Ge => ">=",
        }
    }

    /// Logical negation of an inequality; equalities have none.
    pub fn negated(self) -> Option<RelOp> {
        match self {
            RelOp::Eq => None,
            RelOp::Lt => Some(RelOp::Ge),
            RelOp::Gt => Some(RelOp::Le),
            RelOp::Le => Some(RelOp::Gt),
            RelOp::Ge => Some(RelOp::Lt),
        }
    }

    pub fn is_inequality(self) -> bool {
        self != RelOp::Eq
    }

    /// Pointwise truth of `lhs op rhs`; NaN compares false.
    pub fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            RelOp::Eq => lhs == rhs,
            RelOp::Lt => lhs < rhs,
            RelOp::Gt => lhs > rhs,
            RelOp::Le => lhs <= rhs,
            RelOp::Ge => lhs >= rhs,
        }
    }
}

impl fmt::Display for RelOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `lhs op rhs`
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub lhs: Expr,
    pub op: RelOp,
    pub rhs: Expr,
}

impl Relation {
    pub fn new(lhs: Expr, op: RelOp, rhs: Expr) -> Relation {
        Relation { lhs, op, rhs }
    }

    /// Parses `source`; every `{k}` must satisfy `k < arity`.
    pub fn parse(source: &str, arity: usize) -> Result<Relation, ParseError> {
        parse(source, arity)
    }

    /// Smallest arity this relation can be evaluated against.
    pub fn min_arity(&self) -> usize {
        self.lhs
            .max_var()
            .max(self.rhs.max_var())
            .map_or(0, |k| k + 1)
    }

    /// The relation with its operator negated (`<=` becomes `>` and so on).
    pub fn negated(&self) -> Option<Relation> {
        self.op.negated().map(|op| Relation {
            lhs: self.lhs.clone(),
            op,
            rhs: self.rhs.clone(),
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.lhs, self.op, self.rhs)
    }
}
