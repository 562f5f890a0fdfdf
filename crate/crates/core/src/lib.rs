//! Validated-numerics certificates for zeros of trigonometric polynomials.
//!
//! Finite discrete distributions on `R^d` have characteristic functions that
//! are trigonometric polynomials `t ↦ Σ wⱼ·e^{i⟨t,aⱼ⟩}`. This crate evaluates
//! them exactly, encloses their ranges over boxes and segments with outward
//! rounded interval arithmetic, and emits machine-checkable certificates:
//!
//! * [`interval::certify_sign`] — a component of the polynomial satisfies a
//!   strict directed inequality everywhere on a box or segment;
//! * [`miranda::certify_miranda`] — sign conditions on the four edges of an
//!   affine-mapped square prove that every continuous function within a
//!   sup-distance margin of the polynomial has a zero inside the square
//!   (robust zero via the Poincaré–Miranda theorem);
//! * [`winding::winding_number`] — rigorous winding number of the polynomial
//!   along a closed polyline, with a certified modulus floor;
//! * [`winding::zero_search`] — branch-and-prune isolation of zero regions
//!   with sound exclusion.
//!
//! Certificates serialize to a text format with hexadecimal floats and can be
//! re-checked leaf by leaf without re-running the subdivision search
//! ([`cert::recheck`]).

pub mod cert;
pub mod charfn;
pub mod interval;
pub mod miranda;
pub mod winding;

mod error;

pub use error::Error;

/// Outcome of a certification attempt. `Inconclusive` is a value, not an
/// error: the search exhausted its depth budget without proving the claim,
/// which says nothing about whether the claim is true.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<T> {
    Certified(T),
    Inconclusive,
}

impl<T> Verdict<T> {
    pub fn certified(self) -> Option<T> {
        match self {
            Verdict::Certified(t) => Some(t),
            Verdict::Inconclusive => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }
}
