//! Closed real intervals with outward-rounded arithmetic.

mod matrix;
pub mod round;
mod vector;

pub use matrix::IntervalMatrix;
pub use vector::IntervalVector;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use round::*;

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Caller guarantees `lo <= hi`.
    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "[{lo}, {hi}]");
        Interval { lo, hi }
    }

    #[inline]
    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// `[c - r, c + r]`, rounded outward.
    pub fn mid_rad(c: f64, r: f64) -> Result<Self> {
        if r < 0.0 || r.is_nan() || c.is_nan() {
            return Err(Error::InvalidInterval {
                lo: c - r,
                hi: c + r,
            });
        }
        Ok(Interval::raw(sub_down(c, r), add_up(c, r)))
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Nearest-rounded radius.
    pub fn rad(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    /// Radius about `mid()` rounded up, so `mid ± rad_up` encloses `self`.
    pub fn rad_up(&self) -> f64 {
        let m = self.mid();
        sub_up(self.hi, m).max(sub_up(m, self.lo))
    }

    /// Radius about `mid()` rounded down, so `mid ± rad_down` lies inside `self`.
    pub fn rad_down(&self) -> f64 {
        let m = self.mid();
        sub_down(self.hi, m).min(sub_down(m, self.lo)).max(0.0)
    }

    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    pub fn mig(&self) -> f64 {
        if self.lo <= 0.0 && 0.0 <= self.hi {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn abs(&self) -> Interval {
        Interval::raw(self.mig(), self.mag())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `None` is the empty interval.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::raw(lo, hi))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Adds `[-r, r]`.
    pub fn inflate(&self, r: f64) -> Interval {
        Interval::raw(sub_down(self.lo, r), add_up(self.hi, r))
    }

    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval::raw(self.lo, m), Interval::raw(m, self.hi))
    }

    pub fn sqr(&self) -> Interval {
        let m = self.mig();
        let big = self.mag();
        Interval::raw(mul_down(m, m), mul_up(big, big))
    }

    /// Square root of the nonnegative part.
    pub fn sqrt(&self) -> Result<Interval> {
        if self.hi < 0.0 {
            return Err(Error::InvalidInterval {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(Interval::raw(sqrt_down(self.lo.max(0.0)), sqrt_up(self.hi)))
    }

    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval::raw(div_down(1.0, self.hi), div_up(1.0, self.lo)))
    }

    pub fn checked_div(&self, rhs: &Interval) -> Option<Interval> {
        if rhs.contains_zero() {
            return None;
        }
        let c = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = c
            .iter()
            .map(|&(a, b)| div_down(a, b))
            .fold(f64::INFINITY, f64::min);
        let hi = c
            .iter()
            .map(|&(a, b)| div_up(a, b))
            .fold(f64::NEG_INFINITY, f64::max);
        Some(Interval::raw(lo, hi))
    }

    pub fn scale(&self, k: f64) -> Interval {
        *self * Interval::point(k)
    }

    pub fn sin(&self) -> Interval {
        periodic(
            self,
            f64::sin,
            std::f64::consts::FRAC_PI_2,
            -std::f64::consts::FRAC_PI_2,
        )
    }

    pub fn cos(&self) -> Interval {
        periodic(self, f64::cos, 0.0, std::f64::consts::PI)
    }
}

/// Enclosure of a 2π-periodic function with maxima at `peak + 2kπ` and minima
/// at `trough + 2kπ`. Endpoint values get a one-ulp widening; extrema checks
/// are conservative (a nearby extremum is included when in doubt).
fn periodic(x: &Interval, f: fn(f64) -> f64, peak: f64, trough: f64) -> Interval {
    use std::f64::consts::TAU;
    if !x.lo.is_finite() || !x.hi.is_finite() || x.hi - x.lo >= TAU {
        return Interval::raw(-1.0, 1.0);
    }
    let a = f(x.lo);
    let b = f(x.hi);
    let mut lo = a.min(b).next_down().max(-1.0);
    let mut hi = a.max(b).next_up().min(1.0);
    // Slack covers the rounding of x - peak and of the division by 2π.
    let slack = 4.0 * f64::EPSILON * (1.0 + x.lo.abs().max(x.hi.abs()));
    let hits = |e: f64| {
        let k = ((x.lo - e - slack) / TAU).ceil();
        e + k * TAU <= x.hi + slack
    };
    if hits(peak) {
        hi = 1.0;
    }
    if hits(trough) {
        lo = -1.0;
    }
    Interval::raw(lo, hi)
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval::raw(sub_down(self.lo, rhs.hi), sub_up(self.hi, rhs.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval::raw(mul_down(a, c), mul_up(b, d));
        }
        let lo = mul_down(a, c)
            .min(mul_down(a, d))
            .min(mul_down(b, c))
            .min(mul_down(b, d));
        let hi = mul_up(a, c)
            .max(mul_up(a, d))
            .max(mul_up(b, c))
            .max(mul_up(b, d));
        Interval::raw(lo, hi)
    }
}

/// Panics when the divisor contains zero; use [`Interval::checked_div`] otherwise.
impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(&rhs)
            .expect("interval division by an interval containing zero")
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            #[inline]
            fn $f(self, rhs: f64) -> Interval {
                $tr::$f(self, Interval::point(rhs))
            }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            #[inline]
            fn $f(self, rhs: Interval) -> Interval {
                $tr::$f(Interval::point(self), rhs)
            }
        }
    )*};
}
scalar_ops!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[f64; 2]>::deserialize(d)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}
