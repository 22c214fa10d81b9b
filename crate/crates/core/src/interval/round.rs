//! Directed rounding on top of round-to-nearest.
//!
//! Each primitive computes the nearest result and recovers the exact rounding
//! error with an error-free transformation (TwoSum, or a fused multiply-add
//! residual). The sign of that error decides whether the nearest result has
//! to be moved one ulp to get the correctly rounded downward/upward value.
//! Results are therefore identical to hardware directed rounding, without
//! touching the FPU control word.

/// Below this magnitude the fma residual may itself be inexact, so we nudge
/// unconditionally.
const TINY: f64 = 1e-290;

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// `0 * inf` is taken as zero: interval products treat a zero bound as exact.
#[inline]
fn raw_mul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = raw_mul(a, b);
    if p == 0.0 && (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    if !p.is_finite() {
        return p;
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = raw_mul(a, b);
    if p == 0.0 && (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    if !p.is_finite() {
        return p;
    }
    if p.abs() < TINY {
        return p.next_up();
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Sign of `a/b - q` recovered from the residual `a - q*b`.
#[inline]
fn div_err_sign(a: f64, b: f64, q: f64) -> f64 {
    let r = (-q).mul_add(b, a);
    if b > 0.0 {
        r
    } else {
        -r
    }
}

#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() || b.is_infinite() {
        return q;
    }
    if q != 0.0 && q.abs() < TINY {
        return q.next_down();
    }
    if q == 0.0 && a != 0.0 {
        return q.next_down();
    }
    if div_err_sign(a, b, q) < 0.0 {
        q.next_down()
    } else {
        q
    }
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() || b.is_infinite() {
        return q;
    }
    if q != 0.0 && q.abs() < TINY {
        return q.next_up();
    }
    if q == 0.0 && a != 0.0 {
        return q.next_up();
    }
    if div_err_sign(a, b, q) > 0.0 {
        q.next_up()
    } else {
        q
    }
}

#[inline]
pub fn sqrt_down(x: f64) -> f64 {
    let s = x.sqrt();
    if !s.is_finite() || s == 0.0 {
        return s;
    }
    if (-s).mul_add(s, x) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn sqrt_up(x: f64) -> f64 {
    let s = x.sqrt();
    if !s.is_finite() || s == 0.0 {
        return s;
    }
    if (-s).mul_add(s, x) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Upper bound of `Σ aᵢ bᵢ`.
pub fn dot_up(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |acc, (&x, &y)| add_up(acc, mul_up(x, y)))
}

/// Lower bound of `Σ aᵢ bᵢ`.
pub fn dot_down(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |acc, (&x, &y)| add_down(acc, mul_down(x, y)))
}

/// Upper bound of the 1-norm.
pub fn norm1_up(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |acc, &x| add_up(acc, x.abs()))
}

/// Upper bound of the Euclidean norm.
pub fn norm2_up(a: &[f64]) -> f64 {
    sqrt_up(a.iter().fold(0.0, |acc, &x| add_up(acc, mul_up(x, x))))
}
