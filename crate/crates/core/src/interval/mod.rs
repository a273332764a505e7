//! Outward-rounded interval arithmetic.
//!
//! Every operator of the constraint language has a forward enclosure
//! ([`Interval::unary`], [`Interval::binary`]) and a backward projection
//! ([`inverse::unary_inverse`], [`inverse::binary_inverse`]) used by HC4.

pub(crate) mod forward;
pub mod inverse;
pub mod rounding;

use std::fmt;

pub use inverse::{binary_inverse, unary_inverse};

/// Closed interval `[lo, hi]` over the extended reals.
///
/// The empty set is the single sentinel `(+inf, -inf)`, so it survives a trip
/// through a flat bounds array. Bounds are never NaN and `-0.0` is stored as
/// `+0.0`.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const EMPTY: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
    };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Builds `[lo, hi]`, returning [`Interval::EMPTY`] when `lo > hi` or a
    /// bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Interval {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Interval::EMPTY;
        }
        Interval {
            lo: lo + 0.0,
            hi: hi + 0.0,
        }
    }

    /// Like [`Interval::new`] but rejects malformed pairs instead of mapping
    /// them to EMPTY.
    pub fn try_new(lo: f64, hi: f64) -> Option<Interval> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            None
        } else {
            Some(Interval::new(lo, hi))
        }
    }

    pub fn point(x: f64) -> Interval {
        Interval::new(x, x)
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn is_empty(self) -> bool {
        self.lo > self.hi
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(self) -> bool {
        !self.is_empty() && self.lo.is_finite() && self.hi.is_finite()
    }

    /// `hi - lo` rounded up; 0 for EMPTY.
    pub fn width(self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            rounding::sub_up(self.hi, self.lo)
        }
    }

    /// A representable point inside the interval (0 for ENTIRE, NaN for EMPTY).
    pub fn mid(self) -> f64 {
        if self.is_empty() {
            return f64::NAN;
        }
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => {
                let m = self.lo + (self.hi - self.lo) / 2.0;
                if m.is_finite() {
                    m.clamp(self.lo, self.hi)
                } else {
                    self.lo / 2.0 + self.hi / 2.0
                }
            }
            (false, false) => 0.0,
            (false, true) => {
                if self.hi > 0.0 {
                    0.0
                } else {
                    f64::MIN / 2.0 + self.hi / 2.0
                }
            }
            (true, false) => {
                if self.lo < 0.0 {
                    0.0
                } else {
                    self.lo / 2.0 + f64::MAX / 2.0
                }
            }
        }
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊆ other`. EMPTY is a subset of everything.
    pub fn is_subset(self, other: Interval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    pub fn intersect(self, other: Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn hull(self, other: Interval) -> Interval {
        if self.is_empty() {
            return other;
        }
        if other.is_empty() {
            return self;
        }
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// `(-inf, hi]`
    pub fn at_most(hi: f64) -> Interval {
        Interval::new(f64::NEG_INFINITY, hi)
    }

    /// `[lo, +inf)`
    pub fn at_least(lo: f64) -> Interval {
        Interval::new(lo, f64::INFINITY)
    }

    pub fn unary(self, op: UnaryOp) -> Interval {
        forward::unary(op, self)
    }

    pub fn binary(self, op: BinaryOp, rhs: Interval) -> Interval {
        forward::binary(op, self, rhs)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[empty]")
        } else {
            write!(f, "[{:?}, {:?}]", self.lo, self.hi)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl std::ops::$trait for Interval {
            type Output = Interval;
            fn $method(self, rhs: Interval) -> Interval {
                forward::binary($op, self, rhs)
            }
        }
    };
}

impl_binop!(Add, add, BinaryOp::Add);
impl_binop!(Sub, sub, BinaryOp::Sub);
impl_binop!(Mul, mul, BinaryOp::Mul);
impl_binop!(Div, div, BinaryOp::Div);

impl std::ops::Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        forward::unary(UnaryOp::Neg, self)
    }
}

/// Unary operators of the constraint language (plus negation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sign,
    Abs,
    Sqr,
    Sqrt,
    Exp,
    Log,
    Cos,
    Sin,
    Tan,
    Acos,
    Asin,
    Atan,
    Cosh,
    Sinh,
    Tanh,
    Acosh,
    Asinh,
    Atanh,
}

impl UnaryOp {
    pub const ALL: [UnaryOp; 19] = [
        UnaryOp::Neg,
        UnaryOp::Sign,
        UnaryOp::Abs,
        UnaryOp::Sqr,
        UnaryOp::Sqrt,
        UnaryOp::Exp,
        UnaryOp::Log,
        UnaryOp::Cos,
        UnaryOp::Sin,
        UnaryOp::Tan,
        UnaryOp::Acos,
        UnaryOp::Asin,
        UnaryOp::Atan,
        UnaryOp::Cosh,
        UnaryOp::Sinh,
        UnaryOp::Tanh,
        UnaryOp::Acosh,
        UnaryOp::Asinh,
        UnaryOp::Atanh,
    ];

    /// Function name in the constraint language; `None` for prefix minus.
    pub fn name(self) -> Option<&'static str> {
        Some(match self {
            UnaryOp::Neg => return None,
            UnaryOp::Sign => "sign",
            UnaryOp::Abs => "abs",
            UnaryOp::Sqr => "sqr",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Cos => "cos",
            UnaryOp::Sin => "sin",
            UnaryOp::Tan => "tan",
            UnaryOp::Acos => "acos",
            UnaryOp::Asin => "asin",
            UnaryOp::Atan => "atan",
            UnaryOp::Cosh => "cosh",
            UnaryOp::Sinh => "sinh",
            UnaryOp::Tanh => "tanh",
            UnaryOp::Acosh => "acosh",
            UnaryOp::Asinh => "asinh",
            UnaryOp::Atanh => "atanh",
        })
    }

    pub fn from_name(name: &str) -> Option<UnaryOp> {
        UnaryOp::ALL
            .iter()
            .copied()
            .find(|op| op.name() == Some(name))
    }
}

/// Binary operators of the constraint language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
    Pow,
    Atan2,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 8] = [
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Min,
        BinaryOp::Max,
        BinaryOp::Pow,
        BinaryOp::Atan2,
    ];

    /// Infix symbol for the four arithmetic operators.
    pub fn symbol(self) -> Option<char> {
        match self {
            BinaryOp::Add => Some('+'),
            BinaryOp::Sub => Some('-'),
            BinaryOp::Mul => Some('*'),
            BinaryOp::Div => Some('/'),
            _ => None,
        }
    }

    /// Function name for the operators written `name(a, b)`.
    pub fn name(self) -> Option<&'static str> {
        match self {
            BinaryOp::Min => Some("min"),
            BinaryOp::Max => Some("max"),
            BinaryOp::Pow => Some("pow"),
            BinaryOp::Atan2 => Some("atan2"),
            _ => None,
        }
    }

    pub fn from_name(name: &str) -> Option<BinaryOp> {
        BinaryOp::ALL
            .iter()
            .copied()
            .find(|op| op.name() == Some(name))
    }
}

/// Cartesian product of intervals, one per variable index.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalBox(Vec<Interval>);

impl IntervalBox {
    pub fn new(components: Vec<Interval>) -> IntervalBox {
        IntervalBox(components)
    }

    /// Reads `(x1-, x1+, x2-, x2+, ...)`. Returns `None` on odd length or a
    /// NaN / reversed pair.
    pub fn from_bounds(bounds: &[f64]) -> Option<IntervalBox> {
        if !bounds.len().is_multiple_of(2) {
            return None;
        }
        bounds
            .chunks_exact(2)
            .map(|p| Interval::try_new(p[0], p[1]))
            .collect::<Option<Vec<_>>>()
            .map(IntervalBox)
    }

    /// Writes the box back into a flat bounds slice of length `2 * len`.
    pub fn write_bounds(&self, bounds: &mut [f64]) {
        assert_eq!(bounds.len(), 2 * self.0.len());
        for (pair, iv) in bounds.chunks_exact_mut(2).zip(&self.0) {
            pair[0] = iv.lo();
            pair[1] = iv.hi();
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().any(|iv| iv.is_empty())
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Interval] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<Interval> {
        self.0
    }

    /// Componentwise `self ⊆ other`.
    pub fn is_subset(&self, other: &IntervalBox) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.is_subset(*b))
    }

    pub fn contains_point(&self, point: &[f64]) -> bool {
        self.0.len() == point.len() && self.0.iter().zip(point).all(|(iv, &x)| iv.contains(x))
    }
}

impl std::ops::Index<usize> for IntervalBox {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for IntervalBox {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.0[i]
    }
}

impl From<Vec<Interval>> for IntervalBox {
    fn from(v: Vec<Interval>) -> Self {
        IntervalBox(v)
    }
}
