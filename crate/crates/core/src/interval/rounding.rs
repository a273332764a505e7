//! Directed rounding for the correctly rounded IEEE operations.
//!
//! The hardware rounds to nearest. For `+ - * / sqrt` the exact rounding error
//! can be recovered with TwoSum or an FMA, and its sign tells whether the
//! nearest result sits above or below the true value. Stepping one ulp in the
//! right direction then yields the exact round-down / round-up result, so exact
//! operations (integer sums, products of small integers) stay exact.
//!
//! When the error term itself is not exact (gradual underflow) we step
//! unconditionally, which is still sound.

/// Below this magnitude FMA residuals may be flushed by underflow.
const TINY: f64 = 1.0e-290;

/// Elementary functions are not correctly rounded; results are widened by
/// this many ulps on each side.
pub const LIBM_ULPS: u32 = 2;

#[inline]
fn down_from(approx: f64, err_sign: f64) -> f64 {
    if err_sign < 0.0 {
        approx.next_down()
    } else {
        approx
    }
}

#[inline]
fn up_from(approx: f64, err_sign: f64) -> f64 {
    if err_sign > 0.0 {
        approx.next_up()
    } else {
        approx
    }
}

/// Result of `op(a, b)` overflowed while both inputs were finite.
#[inline]
fn overflowed(r: f64, a: f64, b: f64) -> bool {
    r.is_infinite() && a.is_finite() && b.is_finite()
}

#[inline]
fn clamp_overflow_down(r: f64) -> f64 {
    if r == f64::INFINITY {
        f64::MAX
    } else {
        r
    }
}

#[inline]
fn clamp_overflow_up(r: f64) -> f64 {
    if r == f64::NEG_INFINITY {
        f64::MIN
    } else {
        r
    }
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if overflowed(s, a, b) {
        return clamp_overflow_down(s);
    }
    if !s.is_finite() {
        return s;
    }
    down_from(s, two_sum_err(a, b, s))
}

pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if overflowed(s, a, b) {
        return clamp_overflow_up(s);
    }
    if !s.is_finite() {
        return s;
    }
    up_from(s, two_sum_err(a, b, s))
}

pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// Product with `0 * inf = 0`, the interval-arithmetic convention.
#[inline]
fn raw_mul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = raw_mul(a, b);
    if p == 0.0 && (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    if overflowed(p, a, b) {
        return clamp_overflow_down(p);
    }
    if !p.is_finite() {
        return p;
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    down_from(p, a.mul_add(b, -p))
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = raw_mul(a, b);
    if p == 0.0 && (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    if overflowed(p, a, b) {
        return clamp_overflow_up(p);
    }
    if !p.is_finite() {
        return p;
    }
    if p.abs() < TINY {
        return p.next_up();
    }
    up_from(p, a.mul_add(b, -p))
}

/// Sign of `a/b - q` where `q` is the rounded quotient, or `None` when the
/// residual cannot be trusted.
#[inline]
fn div_err_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if q == 0.0 || q.abs() < TINY || a.abs() < TINY {
        return None;
    }
    // a - q*b, exact when nothing underflows
    let r = -(q.mul_add(b, -a));
    Some(if b > 0.0 { r } else { -r })
}

pub fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if overflowed(q, a, b) {
        return clamp_overflow_down(q);
    }
    if !q.is_finite() {
        return q;
    }
    if b.is_infinite() {
        // finite / inf is an exact (signed) zero
        return q;
    }
    match div_err_sign(a, b, q) {
        Some(e) => down_from(q, e),
        None => q.next_down(),
    }
}

pub fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if overflowed(q, a, b) {
        return clamp_overflow_up(q);
    }
    if !q.is_finite() {
        return q;
    }
    if b.is_infinite() {
        return q;
    }
    match div_err_sign(a, b, q) {
        Some(e) => up_from(q, e),
        None => q.next_up(),
    }
}

pub fn sqrt_down(x: f64) -> f64 {
    let s = x.sqrt();
    if !s.is_finite() || s == 0.0 {
        return s;
    }
    if x < TINY {
        return s.next_down().max(0.0);
    }
    down_from(s, -(s.mul_add(s, -x)))
}

pub fn sqrt_up(x: f64) -> f64 {
    let s = x.sqrt();
    if !s.is_finite() {
        return s;
    }
    if x < TINY {
        return s.next_up();
    }
    up_from(s, -(s.mul_add(s, -x)))
}

/// Widen a libm result downwards by [`LIBM_ULPS`].
#[inline]
pub fn widen_down(x: f64) -> f64 {
    let mut r = x;
    for _ in 0..LIBM_ULPS {
        r = r.next_down();
    }
    r
}

/// Widen a libm result upwards by [`LIBM_ULPS`].
#[inline]
pub fn widen_up(x: f64) -> f64 {
    let mut r = x;
    for _ in 0..LIBM_ULPS {
        r = r.next_up();
    }
    r
}
