//! Non-negative extended reals with explicit conventions.
//!
//! A dedicated two-state value (finite or `+∞`) rather than a bare
//! floating `inf`, so that the conventions
//!
//! | expression | value |
//! |------------|-------|
//! | `0 · ∞`    | `0`   |
//! | `x / 0`, `x > 0` | `+∞` |
//! | `0 / 0`    | `0`   |
//!
//! are enforced by construction instead of inherited from IEEE-754
//! (where `0 · ∞` is NaN). Values are never NaN and never negative.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Inf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Wraps a finite value. Panics on NaN or genuinely negative input;
    /// tiny negative rounding noise (above `-1e-9`) is clamped to zero.
    pub fn finite(x: f64) -> Self {
        assert!(!x.is_nan(), "ExtReal cannot hold NaN");
        assert!(x > -1e-9, "ExtReal must be non-negative, got {x}");
        ExtReal::Finite(x.max(0.0))
    }

    /// Converts from `f64`, mapping `+∞` to the infinite state.
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtReal::Inf
        } else {
            ExtReal::finite(x)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Inf)
    }

    /// Collapses to `f64`, mapping the infinite state to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(x) => x,
            ExtReal::Inf => f64::INFINITY,
        }
    }

    /// `c · self` for `c ≥ 0`, with `0 · ∞ = 0`.
    pub fn scale(self, c: f64) -> Self {
        assert!(c >= 0.0, "scale factor must be non-negative, got {c}");
        match self {
            ExtReal::Finite(x) => ExtReal::finite(c * x),
            ExtReal::Inf if c == 0.0 => ExtReal::ZERO,
            ExtReal::Inf => ExtReal::Inf,
        }
    }

    /// `e^{-self}`; the infinite state maps to 0.
    pub fn neg_exp(self) -> f64 {
        match self {
            ExtReal::Finite(x) => (-x).exp(),
            ExtReal::Inf => 0.0,
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::finite(a + b),
            _ => ExtReal::Inf,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &ExtReal) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::Finite(_), ExtReal::Inf) => Some(Ordering::Less),
            (ExtReal::Inf, ExtReal::Finite(_)) => Some(Ordering::Greater),
            (ExtReal::Inf, ExtReal::Inf) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::Inf => write!(f, "inf"),
        }
    }
}
