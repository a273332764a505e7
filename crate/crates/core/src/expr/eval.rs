use super::Expr;
use crate::interval::forward::{binary_total, unary_total};
use crate::interval::Interval;

pub(crate) fn evaluate(e: &Expr, domains: &[Interval]) -> Interval {
    match e {
        Expr::Const(c) => Interval::point(*c),
        Expr::Var(k) => domains[*k],
        Expr::Unary(op, a) => evaluate(a, domains).unary(*op),
        Expr::Binary(op, a, b) => evaluate(a, domains).binary(*op, evaluate(b, domains)),
    }
}

pub(crate) fn evaluate_total(e: &Expr, domains: &[Interval]) -> (Interval, bool) {
    match e {
        Expr::Const(c) => (Interval::point(*c), true),
        Expr::Var(k) => (domains[*k], true),
        Expr::Unary(op, a) => {
            let (x, ok) = evaluate_total(a, domains);
            (x.unary(*op), ok && unary_total(*op, x))
        }
        Expr::Binary(op, a, b) => {
            let (x, ok_a) = evaluate_total(a, domains);
            let (y, ok_b) = evaluate_total(b, domains);
            (x.binary(*op, y), ok_a && ok_b && binary_total(*op, x, y))
        }
    }
}
