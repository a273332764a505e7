use crate::expr::{Expr, RelOp, Relation};
use crate::interval::{binary_inverse, unary_inverse, BinaryOp, Interval, UnaryOp};

#[derive(Clone, Copy, Debug)]
enum Node {
    Const(Interval),
    Var(usize),
    Unary(UnaryOp, usize),
    Binary(BinaryOp, usize, usize),
}

/// A relation flattened into post-order, so the forward pass walks the nodes
/// front to back and the backward pass back to front.
#[derive(Clone, Debug)]
pub(crate) struct Tape {
    nodes: Vec<Node>,
    lhs: usize,
    rhs: usize,
    op: RelOp,
}

impl Tape {
    pub(crate) fn compile(r: &Relation) -> Tape {
        let mut nodes = Vec::with_capacity(r.lhs.size() + r.rhs.size());
        let lhs = push(&mut nodes, &r.lhs);
        let rhs = push(&mut nodes, &r.rhs);
        Tape {
            nodes,
            lhs,
            rhs,
            op: r.op,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }

    /// One forward/backward sweep. Returns false when the box is proven
    /// empty; `domains` may then be partially narrowed.
    pub(crate) fn revise(&self, domains: &mut [Interval], values: &mut Vec<Interval>) -> bool {
        values.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Const(c) => c,
                Node::Var(k) => domains[k],
                Node::Unary(op, a) => values[a].unary(op),
                Node::Binary(op, a, b) => values[a].binary(op, values[b]),
            };
            if v.is_empty() {
                return false;
            }
            values.push(v);
        }

        let (l, r) = (values[self.lhs], values[self.rhs]);
        let (l, r) = match self.op {
            RelOp::Eq => {
                let m = l.intersect(r);
                (m, m)
            }
            RelOp::Le | RelOp::Lt => (
                l.intersect(Interval::at_most(r.hi())),
                r.intersect(Interval::at_least(l.lo())),
            ),
            RelOp::Ge | RelOp::Gt => (
                l.intersect(Interval::at_least(r.lo())),
                r.intersect(Interval::at_most(l.hi())),
            ),
        };
        if l.is_empty() || r.is_empty() {
            return false;
        }
        values[self.lhs] = l;
        values[self.rhs] = r;

        for i in (0..self.nodes.len()).rev() {
            let z = values[i];
            match self.nodes[i] {
                Node::Const(_) => {}
                Node::Var(k) => {
                    let d = domains[k].intersect(z);
                    if d.is_empty() {
                        return false;
                    }
                    domains[k] = d;
                }
                Node::Unary(op, a) => {
                    let x = unary_inverse(op, z, values[a]);
                    if x.is_empty() {
                        return false;
                    }
                    values[a] = x;
                }
                Node::Binary(op, a, b) => {
                    let (x, y) = binary_inverse(op, z, values[a], values[b]);
                    if x.is_empty() || y.is_empty() {
                        return false;
                    }
                    values[a] = x;
                    values[b] = y;
                }
            }
        }
        true
    }
}

fn push(nodes: &mut Vec<Node>, e: &Expr) -> usize {
    let node = match e {
        Expr::Const(c) => Node::Const(Interval::point(*c)),
        Expr::Var(k) => Node::Var(*k),
        Expr::Unary(op, a) => {
            let a = push(nodes, a);
            Node::Unary(*op, a)
        }
        Expr::Binary(op, a, b) => {
            let a = push(nodes, a);
            let b = push(nodes, b);
            Node::Binary(*op, a, b)
        }
    };
    nodes.push(node);
    nodes.len() - 1
}

/// Outcome of testing a relation over a box by forward evaluation alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Verdict {
    /// Every point of the box satisfies the relation.
    Holds,
    /// No point of the box satisfies it.
    Violated,
    Unknown,
}

pub(crate) fn judge(r: &Relation, domains: &[Interval]) -> Verdict {
    let (l, l_total) = r.lhs.evaluate_total(domains);
    let (rv, r_total) = r.rhs.evaluate_total(domains);
    if l.is_empty() || rv.is_empty() {
        return Verdict::Violated;
    }
    let total = l_total && r_total;
    // Non-total evaluation still encloses every defined point, so the
    // violation tests below need no totality.
    let (holds, violated) = match r.op {
        RelOp::Le => (l.hi() <= rv.lo(), l.lo() > rv.hi()),
        RelOp::Lt => (l.hi() < rv.lo(), l.lo() >= rv.hi()),
        RelOp::Ge => (l.lo() >= rv.hi(), l.hi() < rv.lo()),
        RelOp::Gt => (l.lo() > rv.hi(), l.hi() <= rv.lo()),
        RelOp::Eq => (
            (l.is_point() && l == rv) || r.lhs == r.rhs,
            l.intersect(rv).is_empty(),
        ),
    };
    if violated {
        Verdict::Violated
    } else if holds && total {
        Verdict::Holds
    } else {
        Verdict::Unknown
    }
}
