//! Backward projections: given the admissible image of an operator, narrow its
//! operands. Every projection is sound: no operand value that can reach the
//! image together with some value of the other operand is removed.

use std::f64::consts::FRAC_PI_2;

use super::forward::{self, half_pi_interval, integer_exponent, pi_interval, HALF_PI_UP, PI_UP};
use super::rounding::{sqrt_down, sqrt_up, widen_down, widen_up};
use super::{BinaryOp, Interval, UnaryOp};

const TRIG_LIMIT: f64 = 1.0e15;

/// Narrows `x` to the values whose image under `op` meets `result`.
pub fn unary_inverse(op: UnaryOp, result: Interval, x: Interval) -> Interval {
    if result.is_empty() || x.is_empty() {
        return Interval::EMPTY;
    }
    let z = result;
    match op {
        UnaryOp::Neg => x.intersect(-z),
        UnaryOp::Sign => {
            let mut allowed = Interval::EMPTY;
            if z.contains(-1.0) {
                allowed = allowed.hull(Interval::at_most(0.0));
            }
            if z.contains(0.0) {
                allowed = allowed.hull(Interval::ZERO);
            }
            if z.contains(1.0) {
                allowed = allowed.hull(Interval::at_least(0.0));
            }
            x.intersect(allowed)
        }
        UnaryOp::Abs => symmetric(x, z.intersect(Interval::at_least(0.0))),
        UnaryOp::Sqr => {
            let zz = z.intersect(Interval::at_least(0.0));
            if zz.is_empty() {
                return Interval::EMPTY;
            }
            symmetric(x, Interval::new(sqrt_down(zz.lo()), sqrt_up(zz.hi())))
        }
        UnaryOp::Sqrt => {
            let zz = z.intersect(Interval::at_least(0.0));
            x.intersect(zz.unary(UnaryOp::Sqr))
                .intersect(Interval::at_least(0.0))
        }
        UnaryOp::Exp => {
            let zz = z.intersect(Interval::at_least(0.0));
            x.intersect(zz.unary(UnaryOp::Log))
        }
        UnaryOp::Log => x.intersect(z.unary(UnaryOp::Exp)),
        UnaryOp::Cos | UnaryOp::Sin | UnaryOp::Tan => periodic_inverse(op, z, x),
        UnaryOp::Acos => {
            let zz = z.intersect(Interval::new(0.0, PI_UP));
            x.intersect(zz.unary(UnaryOp::Cos))
                .intersect(Interval::new(-1.0, 1.0))
        }
        UnaryOp::Asin => {
            let zz = z.intersect(Interval::new(-HALF_PI_UP, HALF_PI_UP));
            x.intersect(zz.unary(UnaryOp::Sin))
                .intersect(Interval::new(-1.0, 1.0))
        }
        UnaryOp::Atan => {
            let zz = z.intersect(Interval::new(-HALF_PI_UP, HALF_PI_UP));
            x.intersect(zz.unary(UnaryOp::Tan))
        }
        UnaryOp::Cosh => {
            let zz = z.intersect(Interval::at_least(1.0));
            symmetric(x, zz.unary(UnaryOp::Acosh))
        }
        UnaryOp::Sinh => x.intersect(z.unary(UnaryOp::Asinh)),
        UnaryOp::Tanh => x.intersect(z.unary(UnaryOp::Atanh)),
        UnaryOp::Acosh => {
            let zz = z.intersect(Interval::at_least(0.0));
            x.intersect(zz.unary(UnaryOp::Cosh))
                .intersect(Interval::at_least(1.0))
        }
        UnaryOp::Asinh => x.intersect(z.unary(UnaryOp::Sinh)),
        UnaryOp::Atanh => x
            .intersect(z.unary(UnaryOp::Tanh))
            .intersect(Interval::new(-1.0, 1.0)),
    }
}

/// Narrows `(a, b)` to the pairs whose image under `op` meets `result`.
pub fn binary_inverse(
    op: BinaryOp,
    result: Interval,
    a: Interval,
    b: Interval,
) -> (Interval, Interval) {
    if result.is_empty() || a.is_empty() || b.is_empty() {
        return (Interval::EMPTY, Interval::EMPTY);
    }
    let z = result;
    let (a2, b2) = match op {
        BinaryOp::Add => {
            let a2 = a.intersect(z - b);
            (a2, b.intersect(z - a2))
        }
        BinaryOp::Sub => {
            let a2 = a.intersect(z + b);
            (a2, b.intersect(a2 - z))
        }
        BinaryOp::Mul => {
            let a2 = a.intersect(factor(z, b));
            (a2, b.intersect(factor(z, a2)))
        }
        BinaryOp::Div => {
            let a2 = a.intersect(z * b);
            (a2, b.intersect(factor(a2, z)))
        }
        BinaryOp::Min => {
            let mut a2 = a.intersect(Interval::at_least(z.lo()));
            let mut b2 = b.intersect(Interval::at_least(z.lo()));
            if b2.lo() > z.hi() {
                a2 = a2.intersect(z);
            }
            if a2.lo() > z.hi() {
                b2 = b2.intersect(z);
            }
            (a2, b2)
        }
        BinaryOp::Max => {
            let mut a2 = a.intersect(Interval::at_most(z.hi()));
            let mut b2 = b.intersect(Interval::at_most(z.hi()));
            if b2.hi() < z.lo() {
                a2 = a2.intersect(z);
            }
            if a2.hi() < z.lo() {
                b2 = b2.intersect(z);
            }
            (a2, b2)
        }
        BinaryOp::Pow => pow_inverse(z, a, b),
        BinaryOp::Atan2 => atan2_inverse(z, a, b),
    };
    if a2.is_empty() || b2.is_empty() {
        (Interval::EMPTY, Interval::EMPTY)
    } else {
        (a2, b2)
    }
}

/// Values of `x` with `x * other ∈ product` for some `other` value.
fn factor(product: Interval, other: Interval) -> Interval {
    if product.contains_zero() && other.contains_zero() {
        Interval::ENTIRE
    } else {
        forward::div(product, other)
    }
}

/// `x ∩ (r ∪ -r)`, hulled.
fn symmetric(x: Interval, r: Interval) -> Interval {
    if r.is_empty() {
        return Interval::EMPTY;
    }
    x.intersect(r).hull(x.intersect(-r))
}

fn pow_inverse(z: Interval, a: Interval, b: Interval) -> (Interval, Interval) {
    let z = z.intersect(if integer_exponent(b).is_some() {
        Interval::ENTIRE
    } else {
        Interval::at_least(0.0)
    });
    if z.is_empty() {
        return (Interval::EMPTY, Interval::EMPTY);
    }
    match integer_exponent(b) {
        Some(0.0) => {
            if z.contains(1.0) {
                (a, b)
            } else {
                (Interval::EMPTY, Interval::EMPTY)
            }
        }
        Some(n) => {
            let (target, m) = if n > 0.0 {
                (z, n)
            } else {
                (Interval::ONE / z, -n)
            };
            (root_preimage(a, target, m), b)
        }
        None => {
            let a1 = a.intersect(Interval::at_least(0.0));
            if a1.is_empty() {
                return (Interval::EMPTY, Interval::EMPTY);
            }
            if a1.lo() > 0.0 && z.lo() > 0.0 {
                let log_a = a1.unary(UnaryOp::Log);
                let w = z.unary(UnaryOp::Log).intersect(b * log_a);
                if w.is_empty() {
                    return (Interval::EMPTY, Interval::EMPTY);
                }
                let (b2, log_a2) = binary_inverse(BinaryOp::Mul, w, b, log_a);
                (a1.intersect(log_a2.unary(UnaryOp::Exp)), b2)
            } else {
                (a1, b)
            }
        }
    }
}

/// Narrows `x` to the values with x^n ∈ target for a positive integer n.
fn root_preimage(x: Interval, target: Interval, n: f64) -> Interval {
    if target.is_empty() {
        return Interval::EMPTY;
    }
    if n == 1.0 {
        return x.intersect(target);
    }
    if n.rem_euclid(2.0) == 0.0 {
        let t = target.intersect(Interval::at_least(0.0));
        if t.is_empty() {
            return Interval::EMPTY;
        }
        symmetric(x, Interval::new(root_down(t.lo(), n), root_up(t.hi(), n)))
    } else {
        let lo = if target.lo() >= 0.0 {
            root_down(target.lo(), n)
        } else {
            -root_up(-target.lo(), n)
        };
        let hi = if target.hi() >= 0.0 {
            root_up(target.hi(), n)
        } else {
            -root_down(-target.hi(), n)
        };
        x.intersect(Interval::new(lo, hi))
    }
}

/// Largest float certified to satisfy `r^n <= v` (v >= 0).
fn root_down(v: f64, n: f64) -> f64 {
    if v == 0.0 || v == f64::INFINITY {
        return v;
    }
    if n == 2.0 {
        return sqrt_down(v);
    }
    let mut r = widen_down(v.powf(1.0 / n)).max(0.0);
    let mut step = r * f64::EPSILON;
    for _ in 0..80 {
        if widen_up(r.powf(n)) <= v {
            return r;
        }
        r = (r - step).max(0.0);
        step *= 2.0;
    }
    0.0
}

/// Smallest float certified to satisfy `r^n >= v` (v >= 0).
fn root_up(v: f64, n: f64) -> f64 {
    if v == 0.0 || v == f64::INFINITY {
        return v;
    }
    if n == 2.0 {
        return sqrt_up(v);
    }
    let mut r = widen_up(v.powf(1.0 / n));
    let mut step = r * f64::EPSILON;
    for _ in 0..80 {
        if widen_down(r.powf(n)) >= v {
            return r;
        }
        r += step;
        step *= 2.0;
    }
    f64::INFINITY
}

fn atan2_inverse(z: Interval, y: Interval, x: Interval) -> (Interval, Interval) {
    let z = z.intersect(Interval::new(-PI_UP, PI_UP));
    if z.is_empty() {
        return (Interval::EMPTY, Interval::EMPTY);
    }
    let mut y2 = y;
    let mut x2 = x;
    if z.lo() >= 0.0 {
        y2 = y2.intersect(Interval::at_least(0.0));
    }
    if z.hi() <= 0.0 {
        y2 = y2.intersect(Interval::at_most(0.0));
    }
    if z.lo() >= -FRAC_PI_2 && z.hi() <= FRAC_PI_2 {
        x2 = x2.intersect(Interval::at_least(0.0));
    }
    if z.lo() >= HALF_PI_UP || z.hi() <= -HALF_PI_UP {
        x2 = x2.intersect(Interval::at_most(0.0));
    }
    (y2, x2)
}

/// Projection for cos / sin / tan: when `x` lies inside one monotone branch
/// the principal inverse shifted onto that branch is exact; otherwise only the
/// range check applies.
fn periodic_inverse(op: UnaryOp, z: Interval, x: Interval) -> Interval {
    let z = match op {
        UnaryOp::Tan => z,
        _ => z.intersect(Interval::new(-1.0, 1.0)),
    };
    if z.is_empty() {
        return Interval::EMPTY;
    }
    if !x.is_bounded() || x.lo().abs() > TRIG_LIMIT || x.hi().abs() > TRIG_LIMIT {
        return x;
    }
    let pi = pi_interval();
    let half_pi = half_pi_interval();
    let (m, start, end) = match op {
        // branch [m pi, (m+1) pi]
        UnaryOp::Cos => {
            let m = (x.lo() / std::f64::consts::PI).floor();
            let start = Interval::point(m) * pi;
            (m, start, Interval::point(m + 1.0) * pi)
        }
        // branch [m pi - pi/2, m pi + pi/2]
        _ => {
            let m = (x.lo() / std::f64::consts::PI + 0.5).floor();
            let centre = Interval::point(m) * pi;
            (m, centre - half_pi, centre + half_pi)
        }
    };
    if !(x.lo() >= start.hi() && x.hi() <= end.lo()) {
        return x;
    }
    let odd = m.rem_euclid(2.0) == 1.0;
    let candidates = match op {
        UnaryOp::Cos => {
            let s = if odd { -z } else { z };
            start + s.unary(UnaryOp::Acos)
        }
        UnaryOp::Sin => {
            let t = z.unary(UnaryOp::Asin);
            Interval::point(m) * pi + if odd { -t } else { t }
        }
        _ => Interval::point(m) * pi + z.unary(UnaryOp::Atan),
    };
    x.intersect(candidates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi)
    }

    fn ulps_apart(a: f64, b: f64) -> u64 {
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
    }

    #[test]
    fn add_projection() {
        let (a, b) = binary_inverse(BinaryOp::Add, iv(10.0, 10.0), iv(0.0, 10.0), iv(0.0, 3.0));
        assert_eq!(a, iv(7.0, 10.0));
        assert_eq!(b, iv(0.0, 3.0));
    }

    #[test]
    fn sqr_projection() {
        let a = unary_inverse(UnaryOp::Sqr, iv(4.0, 4.0), iv(0.0, 10.0));
        assert!(ulps_apart(a.lo(), 2.0) <= 1 && ulps_apart(a.hi(), 2.0) <= 1);
        let a = unary_inverse(UnaryOp::Sqr, iv(4.0, 9.0), iv(-10.0, 10.0));
        assert_eq!(a, iv(-3.0, 3.0));
        let a = unary_inverse(UnaryOp::Sqr, iv(4.0, 9.0), iv(-10.0, 0.0));
        assert_eq!(a, iv(-3.0, -2.0));
    }

    #[test]
    fn mul_projection() {
        let (a, b) = binary_inverse(BinaryOp::Mul, iv(12.0, 12.0), iv(1.0, 4.0), iv(2.0, 5.0));
        assert!(ulps_apart(a.lo(), 2.4) <= 1 && a.hi() == 4.0);
        assert!(b.lo() == 3.0 && ulps_apart(b.hi(), 5.0) <= 1);
        // zero in both the product and the other factor: no information
        let (a, _) = binary_inverse(BinaryOp::Mul, iv(-1.0, 1.0), iv(-5.0, 5.0), iv(-1.0, 1.0));
        assert_eq!(a, iv(-5.0, 5.0));
    }

    #[test]
    fn min_max_projection() {
        let (a, b) = binary_inverse(BinaryOp::Min, iv(3.0, 4.0), iv(0.0, 10.0), iv(5.0, 9.0));
        assert_eq!(a, iv(3.0, 4.0));
        assert_eq!(b, iv(5.0, 9.0));
        let (a, b) = binary_inverse(BinaryOp::Max, iv(3.0, 4.0), iv(0.0, 10.0), iv(0.0, 2.0));
        assert_eq!(a, iv(3.0, 4.0));
        assert_eq!(b, iv(0.0, 2.0));
    }

    #[test]
    fn sign_projection() {
        assert_eq!(
            unary_inverse(UnaryOp::Sign, iv(1.0, 1.0), iv(-5.0, 5.0)),
            iv(0.0, 5.0)
        );
        assert_eq!(
            unary_inverse(UnaryOp::Sign, iv(0.0, 0.0), iv(-5.0, 5.0)),
            Interval::ZERO
        );
        assert!(unary_inverse(UnaryOp::Sign, iv(0.2, 0.8), iv(-5.0, 5.0)).is_empty());
    }

    #[test]
    fn trig_branch_projection() {
        // cos x = 0.5 on [0, 3] -> x = pi/3
        let x = unary_inverse(UnaryOp::Cos, iv(0.5, 0.5), iv(0.0, 3.0));
        let target = std::f64::consts::FRAC_PI_3;
        assert!(x.contains(target) && x.width() < 1e-12);
        // sin x = 0.5 on [2, 4] (decreasing branch) -> x = 5pi/6
        let x = unary_inverse(UnaryOp::Sin, iv(0.5, 0.5), iv(2.0, 4.0));
        assert!(x.contains(5.0 * std::f64::consts::PI / 6.0) && x.width() < 1e-12);
        // tan x = 1 on [3, 4.5] -> x = 5pi/4
        let x = unary_inverse(UnaryOp::Tan, iv(1.0, 1.0), iv(3.0, 4.5));
        assert!(x.contains(5.0 * std::f64::consts::FRAC_PI_4) && x.width() < 1e-12);
        // spans several branches: only range check
        assert_eq!(
            unary_inverse(UnaryOp::Cos, iv(0.5, 0.5), iv(0.0, 10.0)),
            iv(0.0, 10.0)
        );
        assert!(unary_inverse(UnaryOp::Cos, iv(2.0, 3.0), iv(0.0, 10.0)).is_empty());
    }

    #[test]
    fn pow_projection() {
        let (a, _) = binary_inverse(
            BinaryOp::Pow,
            iv(8.0, 27.0),
            iv(-10.0, 10.0),
            Interval::point(3.0),
        );
        assert!(a.lo() <= 2.0 && a.lo() > 1.999 && a.hi() >= 3.0 && a.hi() < 3.001);
        let (a, _) = binary_inverse(
            BinaryOp::Pow,
            iv(16.0, 16.0),
            iv(-10.0, 1.0),
            Interval::point(4.0),
        );
        assert!(a.lo() <= -2.0 && a.lo() > -2.001 && a.hi() <= -1.999);
        let (a, _) = binary_inverse(
            BinaryOp::Pow,
            iv(0.25, 0.25),
            iv(0.0, 10.0),
            Interval::point(-2.0),
        );
        assert!(a.contains(2.0) && a.width() < 1e-9);
        let (a, b) = binary_inverse(BinaryOp::Pow, iv(2.0, 2.0), iv(3.0, 5.0), iv(0.0, 1.0));
        assert!(a.lo() >= 3.0 && b.contains(2f64.ln() / 3f64.ln()) && b.lo() > 0.4);
    }

    #[test]
    fn atan2_projection() {
        let (y, x) = binary_inverse(BinaryOp::Atan2, iv(0.1, 0.2), iv(-5.0, 5.0), iv(-5.0, 5.0));
        assert_eq!(y, iv(0.0, 5.0));
        assert_eq!(x, iv(0.0, 5.0));
    }
}
