//! Outward-rounded interval arithmetic and certified range enclosure.
//!
//! Every operation widens its result by one ulp per endpoint after the
//! double-precision computation, so the result interval always contains the
//! exact real result for any point inputs drawn from the operand intervals.
//! Rounded double-precision evaluations of the same expression (in the same
//! association order) are contained as well, which is what the containment
//! property tests exercise.

mod region;
mod sign;

pub use region::{Region, Segment};
pub use sign::{
    certify_sign, certify_sign_multi, enclose, modulus_lower_bound, Component, Direction,
    SignCertificate, SignLeaf,
};

use crate::Error;

/// Closed real interval `[lo, hi]` with finite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// `2π` is irrational and `TAU` rounds down, so `TAU` is the nearest f64
/// below the true value and is a valid lower bound.
const TWO_PI_LO: f64 = std::f64::consts::TAU;

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, Error> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidInterval(lo, hi))
        }
    }

    /// Degenerate interval `[x, x]`, exact.
    pub fn point(x: f64) -> Self {
        debug_assert!(x.is_finite());
        Self { lo: x, hi: x }
    }

    /// `x` widened by one ulp on each side.
    pub fn widened(x: f64) -> Self {
        Self { lo: x.next_down(), hi: x.next_up() }
    }

    pub const fn lo(&self) -> f64 {
        self.lo
    }

    pub const fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * (self.lo + self.hi);
        m.clamp(self.lo, self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Mignitude: a lower bound for `|x|` over the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Magnitude: an upper bound for `|x|` over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    fn out(self) -> Self {
        Self { lo: self.lo.next_down(), hi: self.hi.next_up() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { lo: self.lo + o.lo, hi: self.hi + o.hi }.out()
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { lo: self.lo - o.hi, hi: self.hi - o.lo }.out()
    }

    pub fn neg(&self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let mut lo = p[0];
        let mut hi = p[0];
        for &v in &p[1..] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Self { lo, hi }.out()
    }

    /// Multiply by an exact scalar.
    pub fn scale(&self, s: f64) -> Self {
        self.mul(&Self::point(s))
    }

    /// Tight outward enclosure of `{cos t : t ∈ self}`.
    ///
    /// Saturates to ±1 whenever the interval may contain a critical point of
    /// cos (a multiple of π); otherwise cos is monotone on the interval and
    /// the endpoint values bound the range. The critical-point test is
    /// conservative (it uses an interval enclosure of `kπ`), so it can only
    /// widen the result, never unsoundly narrow it.
    pub fn range_cos(&self) -> Self {
        range_trig(self, 0.0)
    }

    /// Tight outward enclosure of `{sin t : t ∈ self}`.
    pub fn range_sin(&self) -> Self {
        // sin attains its extrema at (k + 1/2)π with sin((k+1/2)π) = (−1)^k.
        range_trig(self, 0.5)
    }
}

/// Shared range computation for cos/sin.
///
/// Critical points of cos sit at `kπ`, those of sin at `(k + 1/2)π`
/// (`phase_halves = 0.5`). In both cases the value at the critical point with
/// index `k` is `(−1)^k`.
fn range_trig(x: &Interval, phase_halves: f64) -> Interval {
    // Extremely large arguments: give up and return the trivial enclosure.
    if x.lo.abs() > 1e12 || x.hi.abs() > 1e12 || x.width() >= TWO_PI_LO {
        return Interval { lo: -1.0, hi: 1.0 };
    }
    // π enclosure: nearest f64 below π, widened upward.
    let pi_enc = Interval { lo: std::f64::consts::PI, hi: std::f64::consts::PI.next_up() };

    let f = |t: f64| if phase_halves == 0.0 { t.cos() } else { t.sin() };

    let mut hi_sat = false;
    let mut lo_sat = false;
    // Candidate critical points (k + phase_halves)·π for k around the interval.
    let k_min = (x.lo / std::f64::consts::PI).floor() - 2.0;
    let k_max = (x.hi / std::f64::consts::PI).ceil() + 2.0;
    let mut k = k_min;
    while k <= k_max {
        let crit = Interval::point(k + phase_halves).mul(&pi_enc);
        if crit.intersects(x) {
            if k.rem_euclid(2.0) == 0.0 {
                hi_sat = true;
            } else {
                lo_sat = true;
            }
        }
        k += 1.0;
    }

    let (a, b) = (f(x.lo), f(x.hi));
    // libm cos/sin are within 1 ulp on this platform; widen by 2 to be safe.
    let lo = if lo_sat { -1.0 } else { a.min(b).next_down().next_down() };
    let hi = if hi_sat { 1.0 } else { a.max(b).next_up().next_up() };
    Interval { lo: lo.max(-1.0), hi: hi.min(1.0) }
}

/// Axis-aligned rectangle `{a + bi : a ∈ re, b ∈ im}` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, z: num_complex::Complex64) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    /// Certified lower bound for `|z|` over the box (0 if the box contains 0).
    pub fn abs_lower(&self) -> f64 {
        let r = self.re.mig();
        let i = self.im.mig();
        if r == 0.0 && i == 0.0 {
            0.0
        } else {
            r.hypot(i).next_down().next_down().max(0.0)
        }
    }

    /// Upper bound for `|z|` over the box.
    pub fn abs_upper(&self) -> f64 {
        self.re.mag().hypot(self.im.mag()).next_up().next_up()
    }
}

/// Closed axis-aligned rectangle in `R²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box2 {
    pub x: Interval,
    pub y: Interval,
}

impl Box2 {
    pub fn new(xlo: f64, xhi: f64, ylo: f64, yhi: f64) -> Result<Self, Error> {
        Ok(Self { x: Interval::new(xlo, xhi)?, y: Interval::new(ylo, yhi)? })
    }

    pub fn diameter(&self) -> f64 {
        self.x.width().hypot(self.y.width())
    }

    pub fn center(&self) -> [f64; 2] {
        [self.x.mid(), self.y.mid()]
    }

    pub fn contains_point(&self, p: [f64; 2]) -> bool {
        self.x.contains(p[0]) && self.y.contains(p[1])
    }

    pub fn subset_of(&self, other: &Self) -> bool {
        self.x.subset_of(&other.x) && self.y.subset_of(&other.y)
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self { x: self.x.hull(&other.x), y: self.y.hull(&other.y) }
    }

    /// Boxes that share a face or a corner (closed sets intersect).
    pub fn touches(&self, other: &Self) -> bool {
        self.x.intersects(&other.x) && self.y.intersects(&other.y)
    }

    /// Split the longest axis at its midpoint; ties split x.
    pub fn split(&self) -> (Self, Self) {
        if self.x.width() >= self.y.width() {
            let m = self.x.mid();
            (
                Self { x: Interval { lo: self.x.lo, hi: m }, y: self.y },
                Self { x: Interval { lo: m, hi: self.x.hi }, y: self.y },
            )
        } else {
            let m = self.y.mid();
            (
                Self { x: self.x, y: Interval { lo: self.y.lo, hi: m } },
                Self { x: self.x, y: Interval { lo: m, hi: self.y.hi } },
            )
        }
    }
}
