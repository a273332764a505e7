use std::f64::consts::{FRAC_PI_2, PI};

use super::rounding::{
    add_down, add_up, div_down, div_up, mul_down, mul_up, sqrt_down, sqrt_up, sub_down, sub_up,
    widen_down, widen_up,
};
use super::{BinaryOp, Interval, UnaryOp};

/// Upper bound of pi (the f64 constant sits just below the true value).
pub(crate) const PI_UP: f64 = 3.1415926535897936;
/// Upper bound of pi/2.
pub(crate) const HALF_PI_UP: f64 = 1.5707963267948968;

/// Beyond this magnitude trigonometric range analysis gives up.
const TRIG_LIMIT: f64 = 1.0e15;

pub(crate) fn pi_interval() -> Interval {
    Interval::new(PI, PI_UP)
}

pub(crate) fn half_pi_interval() -> Interval {
    Interval::new(FRAC_PI_2, HALF_PI_UP)
}

pub(crate) fn unary(op: UnaryOp, x: Interval) -> Interval {
    if x.is_empty() {
        return Interval::EMPTY;
    }
    match op {
        UnaryOp::Neg => Interval::new(-x.hi(), -x.lo()),
        UnaryOp::Sign => sign(x),
        UnaryOp::Abs => abs(x),
        UnaryOp::Sqr => sqr(x),
        UnaryOp::Sqrt => {
            let d = x.intersect(Interval::at_least(0.0));
            if d.is_empty() {
                return Interval::EMPTY;
            }
            Interval::new(sqrt_down(d.lo()), sqrt_up(d.hi()))
        }
        UnaryOp::Exp => increasing(x, f64::exp).intersect(Interval::at_least(0.0)),
        UnaryOp::Log => {
            let d = x.intersect(Interval::at_least(0.0));
            if d.is_empty() || d.hi() == 0.0 {
                return Interval::EMPTY;
            }
            increasing(d, f64::ln)
        }
        UnaryOp::Cos => cos(x),
        UnaryOp::Sin => sin(x),
        UnaryOp::Tan => tan(x),
        UnaryOp::Acos => {
            let d = x.intersect(Interval::new(-1.0, 1.0));
            if d.is_empty() {
                return Interval::EMPTY;
            }
            Interval::new(
                widen_down(d.hi().acos()).max(0.0),
                widen_up(d.lo().acos()).min(PI_UP),
            )
        }
        UnaryOp::Asin => {
            let d = x.intersect(Interval::new(-1.0, 1.0));
            if d.is_empty() {
                return Interval::EMPTY;
            }
            increasing(d, f64::asin).intersect(Interval::new(-HALF_PI_UP, HALF_PI_UP))
        }
        UnaryOp::Atan => increasing(x, f64::atan).intersect(Interval::new(-HALF_PI_UP, HALF_PI_UP)),
        UnaryOp::Cosh => {
            let m = abs(x);
            Interval::new(widen_down(m.lo().cosh()).max(1.0), widen_up(m.hi().cosh()))
        }
        UnaryOp::Sinh => increasing(x, f64::sinh),
        UnaryOp::Tanh => increasing(x, f64::tanh).intersect(Interval::new(-1.0, 1.0)),
        UnaryOp::Acosh => {
            let d = x.intersect(Interval::at_least(1.0));
            if d.is_empty() {
                return Interval::EMPTY;
            }
            increasing(d, f64::acosh).intersect(Interval::at_least(0.0))
        }
        UnaryOp::Asinh => increasing(x, f64::asinh),
        UnaryOp::Atanh => {
            let d = x.intersect(Interval::new(-1.0, 1.0));
            if d.is_empty() || d.lo() == 1.0 || d.hi() == -1.0 {
                return Interval::EMPTY;
            }
            increasing(d, atanh)
        }
    }
}

pub(crate) fn binary(op: BinaryOp, a: Interval, b: Interval) -> Interval {
    if a.is_empty() || b.is_empty() {
        return Interval::EMPTY;
    }
    match op {
        BinaryOp::Add => Interval::new(add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi())),
        BinaryOp::Sub => Interval::new(sub_down(a.lo(), b.hi()), sub_up(a.hi(), b.lo())),
        BinaryOp::Mul => mul(a, b),
        BinaryOp::Div => div(a, b),
        BinaryOp::Min => Interval::new(a.lo().min(b.lo()), a.hi().min(b.hi())),
        BinaryOp::Max => Interval::new(a.lo().max(b.lo()), a.hi().max(b.hi())),
        BinaryOp::Pow => pow(a, b),
        BinaryOp::Atan2 => atan2(a, b),
    }
}

/// Image of a monotonically increasing libm function, widened outward.
fn increasing(x: Interval, f: fn(f64) -> f64) -> Interval {
    Interval::new(widen_down(f(x.lo())), widen_up(f(x.hi())))
}

/// `f64::atanh` loses accuracy for arguments near -1; the function is odd,
/// so evaluate it on `|x|`.
fn atanh(x: f64) -> f64 {
    x.abs().atanh().copysign(x)
}

fn sign(x: Interval) -> Interval {
    let lo = if x.lo() > 0.0 {
        1.0
    } else if x.lo() == 0.0 {
        0.0
    } else {
        -1.0
    };
    let hi = if x.hi() < 0.0 {
        -1.0
    } else if x.hi() == 0.0 {
        0.0
    } else {
        1.0
    };
    Interval::new(lo, hi)
}

fn abs(x: Interval) -> Interval {
    if x.lo() >= 0.0 {
        x
    } else if x.hi() <= 0.0 {
        Interval::new(-x.hi(), -x.lo())
    } else {
        Interval::new(0.0, (-x.lo()).max(x.hi()))
    }
}

fn sqr(x: Interval) -> Interval {
    let m = abs(x);
    Interval::new(mul_down(m.lo(), m.lo()), mul_up(m.hi(), m.hi()))
}

fn mul(a: Interval, b: Interval) -> Interval {
    let (al, ah, bl, bh) = (a.lo(), a.hi(), b.lo(), b.hi());
    let lo = mul_down(al, bl)
        .min(mul_down(al, bh))
        .min(mul_down(ah, bl))
        .min(mul_down(ah, bh));
    let hi = mul_up(al, bl)
        .max(mul_up(al, bh))
        .max(mul_up(ah, bl))
        .max(mul_up(ah, bh));
    Interval::new(lo, hi)
}

/// Division; a divisor straddling zero yields the hull of the extended
/// quotient (possibly the whole line), `[0,0]` as divisor yields EMPTY.
pub(crate) fn div(a: Interval, b: Interval) -> Interval {
    let (al, ah, bl, bh) = (a.lo(), a.hi(), b.lo(), b.hi());
    if bl > 0.0 {
        if al >= 0.0 {
            Interval::new(div_down(al, bh), div_up(ah, bl))
        } else if ah <= 0.0 {
            Interval::new(div_down(al, bl), div_up(ah, bh))
        } else {
            Interval::new(div_down(al, bl), div_up(ah, bl))
        }
    } else if bh < 0.0 {
        if al >= 0.0 {
            Interval::new(div_down(ah, bh), div_up(al, bl))
        } else if ah <= 0.0 {
            Interval::new(div_down(ah, bl), div_up(al, bh))
        } else {
            Interval::new(div_down(ah, bh), div_up(al, bh))
        }
    } else if bl == 0.0 && bh == 0.0 {
        Interval::EMPTY
    } else if al == 0.0 && ah == 0.0 {
        Interval::ZERO
    } else if a.contains_zero() || (bl < 0.0 && bh > 0.0) {
        Interval::ENTIRE
    } else if bl == 0.0 {
        // b = [0, bh], bh > 0
        if al > 0.0 {
            Interval::at_least(div_down(al, bh))
        } else {
            Interval::at_most(div_up(ah, bh))
        }
    } else {
        // b = [bl, 0], bl < 0
        if al > 0.0 {
            Interval::at_most(div_up(al, bl))
        } else {
            Interval::at_least(div_down(ah, bl))
        }
    }
}

/// Point exponent that is an exactly representable integer.
pub(crate) fn integer_exponent(b: Interval) -> Option<f64> {
    let n = b.lo();
    if b.is_point() && n.is_finite() && n.fract() == 0.0 && n.abs() <= 9.0e15 {
        Some(n)
    } else {
        None
    }
}

fn is_odd(n: f64) -> bool {
    n.rem_euclid(2.0) == 1.0
}

fn pow(a: Interval, b: Interval) -> Interval {
    match integer_exponent(b) {
        Some(n) => pow_int(a, n),
        None => pow_real(a, b),
    }
}

fn pow_int(a: Interval, n: f64) -> Interval {
    if n == 0.0 {
        return Interval::ONE;
    }
    if n == 1.0 {
        return a;
    }
    if n == 2.0 {
        return sqr(a);
    }
    let p = |x: f64| x.powf(n);
    if n > 0.0 {
        if is_odd(n) {
            Interval::new(widen_down(p(a.lo())), widen_up(p(a.hi())))
        } else {
            let m = abs(a);
            Interval::new(widen_down(p(m.lo())).max(0.0), widen_up(p(m.hi())))
        }
    } else if !a.contains_zero() {
        if is_odd(n) {
            Interval::new(widen_down(p(a.hi())), widen_up(p(a.lo())))
        } else {
            let m = abs(a);
            Interval::new(widen_down(p(m.hi())).max(0.0), widen_up(p(m.lo())))
        }
    } else if a.lo() == 0.0 && a.hi() == 0.0 {
        Interval::EMPTY
    } else if !is_odd(n) {
        let m = abs(a);
        Interval::at_least(widen_down(p(m.hi())).max(0.0))
    } else if a.lo() == 0.0 {
        Interval::at_least(widen_down(p(a.hi())))
    } else if a.hi() == 0.0 {
        Interval::at_most(widen_up(p(a.lo())))
    } else {
        Interval::ENTIRE
    }
}

/// `x^y = exp(y log x)` restricted to `x >= 0`. For fixed sign of `y` the
/// function is monotone in each argument, so the corners carry the extremes.
fn pow_real(a: Interval, b: Interval) -> Interval {
    let x = a.intersect(Interval::at_least(0.0));
    if x.is_empty() {
        return Interval::EMPTY;
    }
    let corners = [
        x.lo().powf(b.lo()),
        x.lo().powf(b.hi()),
        x.hi().powf(b.lo()),
        x.hi().powf(b.hi()),
    ];
    let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Interval::new(widen_down(lo).max(0.0), widen_up(hi))
}

fn atan2(y: Interval, x: Interval) -> Interval {
    let full = Interval::new(-PI_UP, PI_UP);
    if y.contains_zero() && x.contains_zero() {
        return full;
    }
    // the box crosses the branch cut on the negative x axis
    if x.lo() < 0.0 && y.lo() < 0.0 && y.hi() >= 0.0 {
        return full;
    }
    let corners = [
        y.lo().atan2(x.lo()),
        y.lo().atan2(x.hi()),
        y.hi().atan2(x.lo()),
        y.hi().atan2(x.hi()),
    ];
    let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Interval::new(widen_down(lo), widen_up(hi)).intersect(full)
}

/// Integers `k` such that `k == x/pi - shift` for some x in the interval,
/// overestimated by a relative tolerance. Returns `None` if no integer fits.
fn critical_indices(x: Interval, shift: f64) -> Option<(f64, f64)> {
    let t_lo = x.lo() / PI - shift;
    let t_hi = x.hi() / PI - shift;
    let tol = |t: f64| 8.0 * f64::EPSILON * (1.0 + t.abs());
    let k_min = (t_lo - tol(t_lo)).ceil();
    let k_max = (t_hi + tol(t_hi)).floor();
    (k_min <= k_max).then_some((k_min, k_max))
}

/// Whether the index range contains (even, odd) integers.
fn parities(range: Option<(f64, f64)>) -> (bool, bool) {
    match range {
        None => (false, false),
        Some((a, b)) if b > a => (true, true),
        Some((a, _)) => (!is_odd(a), is_odd(a)),
    }
}

/// Shared body of cos and sin: maxima sit at `(2k + shift) pi`, minima at
/// `(2k + 1 + shift) pi`.
fn periodic(x: Interval, shift: f64, f: fn(f64) -> f64) -> Interval {
    let unit = Interval::new(-1.0, 1.0);
    if !x.is_bounded() || x.lo().abs() > TRIG_LIMIT || x.hi().abs() > TRIG_LIMIT {
        return unit;
    }
    let (has_max, has_min) = parities(critical_indices(x, shift));
    let (fa, fb) = (f(x.lo()), f(x.hi()));
    let hi = if has_max { 1.0 } else { widen_up(fa.max(fb)) };
    let lo = if has_min {
        -1.0
    } else {
        widen_down(fa.min(fb))
    };
    Interval::new(lo, hi).intersect(unit)
}

fn cos(x: Interval) -> Interval {
    periodic(x, 0.0, f64::cos)
}

fn sin(x: Interval) -> Interval {
    periodic(x, 0.5, f64::sin)
}

fn tan(x: Interval) -> Interval {
    if !x.is_bounded() || x.lo().abs() > TRIG_LIMIT || x.hi().abs() > TRIG_LIMIT {
        return Interval::ENTIRE;
    }
    if critical_indices(x, 0.5).is_some() {
        return Interval::ENTIRE;
    }
    Interval::new(widen_down(x.lo().tan()), widen_up(x.hi().tan()))
}

/// Whether the forward image of `op` over `x` is evaluated on points that
/// all lie in the operator's natural domain.
pub(crate) fn unary_total(op: UnaryOp, x: Interval) -> bool {
    match op {
        UnaryOp::Sqrt => x.lo() >= 0.0,
        UnaryOp::Log => x.lo() > 0.0,
        UnaryOp::Acos | UnaryOp::Asin => x.lo() >= -1.0 && x.hi() <= 1.0,
        UnaryOp::Acosh => x.lo() >= 1.0,
        UnaryOp::Atanh => x.lo() > -1.0 && x.hi() < 1.0,
        UnaryOp::Tan => tan(x).is_bounded(),
        _ => true,
    }
}

pub(crate) fn binary_total(op: BinaryOp, a: Interval, b: Interval) -> bool {
    match op {
        BinaryOp::Div => !b.contains_zero(),
        BinaryOp::Pow => match integer_exponent(b) {
            Some(n) => n >= 0.0 || !a.contains_zero(),
            None => a.lo() > 0.0 || (a.lo() >= 0.0 && b.lo() > 0.0),
        },
        BinaryOp::Atan2 => !(a.contains_zero() && b.contains_zero()),
        _ => true,
    }
}
