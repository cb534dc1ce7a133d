//! Scalar lower bounds between Bernoulli parameters, solved for `p`.
//!
//! Each bound turns a divergence value between `Ber(p)` and `Ber(q)`
//! into an upper bound on `p` (equivalently, a lower bound on the
//! divergence needed to separate `p` from `q`):
//!
//! - classic:      `p ≤ (kl + ln 2) / ln(1/q)`
//! - refined:      `p ≤ (kl + ln(2−q)) / ln(1/q)`
//! - affine:       `p ≤ 0.21 + 0.79 q + kl / ln(1/q)`
//! - square-root:  `p ≤ q + √(kl / max{ln(1/q), 2})`
//! - χ²:           `p ≤ q + √(q · χ²)`
//! - Le Cam (h²):  `p ≤ q + √(h²(1 − h²/4))`, plus a sharper variant
//! - refined Pinsker: `kl(p,q) ≥ φ(q)(p−q)²` with the optimal `φ`
//! - Bretagnolle–Huber: `q ≥ p − 1 + e^{−1/e} e^{−kl}`
//!
//! plus the generalized inverse of `kl` in its first argument,
//! `sup{p : kl(p,q) ≤ y}`, computed by bisection.

use crate::divergences::kl_bernoulli;
use crate::extreal::ExtReal;
use std::f64::consts::LN_2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KlBoundsError {
    #[error("q must lie strictly inside (0,1), got {0}")]
    DegenerateQ(f64),
    #[error("squared Hellinger value must lie in [0,2], got {0}")]
    OutOfRange(f64),
}

/// Which inequality produced a solved bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundFamily {
    Classic,
    Refined,
    Affine,
    KlSqrt,
    Chi2,
    HellingerSimple,
    HellingerSharp,
}

impl BoundFamily {
    pub fn name(self) -> &'static str {
        match self {
            BoundFamily::Classic => "classic",
            BoundFamily::Refined => "refined",
            BoundFamily::Affine => "affine",
            BoundFamily::KlSqrt => "kl_sqrt",
            BoundFamily::Chi2 => "chi2",
            BoundFamily::HellingerSimple => "hellinger",
            BoundFamily::HellingerSharp => "hellinger_sharp",
        }
    }
}

/// An upper bound on `p`, clipped into `[0,1]`, tagged with the
/// inequality that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolvedBound {
    pub bound_on_p: f64,
    pub family: BoundFamily,
}

fn solved(x: f64, family: BoundFamily) -> SolvedBound {
    SolvedBound {
        bound_on_p: x.clamp(0.0, 1.0),
        family,
    }
}

fn check_q(q: f64) -> Result<(), KlBoundsError> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(KlBoundsError::DegenerateQ(q))
    }
}

// The additive constant is injectable so the verification harness can
// demonstrate that its grid check catches a corrupted bound.
pub(crate) fn lb_classic_with_constant(
    kl_val: ExtReal,
    q: f64,
    constant: f64,
) -> Result<SolvedBound, KlBoundsError> {
    check_q(q)?;
    let v = match kl_val {
        ExtReal::Finite(k) => (k + constant) / (1.0 / q).ln(),
        ExtReal::Inf => f64::INFINITY,
    };
    Ok(solved(v, BoundFamily::Classic))
}

/// `p ≤ (kl + ln 2) / ln(1/q)`.
pub fn lb_classic(kl_val: ExtReal, q: f64) -> Result<SolvedBound, KlBoundsError> {
    lb_classic_with_constant(kl_val, q, LN_2)
}

/// `p ≤ (kl + ln(2−q)) / ln(1/q)`; always at most [`lb_classic`].
pub fn lb_refined(kl_val: ExtReal, q: f64) -> Result<SolvedBound, KlBoundsError> {
    check_q(q)?;
    let v = match kl_val {
        ExtReal::Finite(k) => (k + (2.0 - q).ln()) / (1.0 / q).ln(),
        ExtReal::Inf => f64::INFINITY,
    };
    Ok(solved(v, BoundFamily::Refined))
}

/// `p ≤ 0.21 + 0.79 q + kl / ln(1/q)`.
pub fn lb_affine(kl_val: ExtReal, q: f64) -> Result<SolvedBound, KlBoundsError> {
    check_q(q)?;
    let v = match kl_val {
        ExtReal::Finite(k) => 0.21 + 0.79 * q + k / (1.0 / q).ln(),
        ExtReal::Inf => f64::INFINITY,
    };
    Ok(solved(v, BoundFamily::Affine))
}

/// The optimal coefficient `φ(q) = ln((1−q)/q) / (1−2q)` in the
/// quadratic lower bound `kl(p,q) ≥ φ(q)(p−q)²`, extended by continuity
/// as `φ(1/2) = 2` and `φ(0) = φ(1) = +∞`. Satisfies
/// `φ(q) ≥ max{2, ln(1/q)}` on `(0,1]`.
pub fn pinsker_factor(q: f64) -> ExtReal {
    assert!((0.0..=1.0).contains(&q), "q must lie in [0,1], got {q}");
    if q == 0.0 || q == 1.0 {
        return ExtReal::Inf;
    }
    let t = 1.0 - 2.0 * q;
    if t.abs() < 1e-5 {
        // φ((1−t)/2) = 2 atanh(t)/t = 2(1 + t²/3 + O(t⁴))
        return ExtReal::finite(2.0 * (1.0 + t * t / 3.0));
    }
    ExtReal::finite(((1.0 - q) / q).ln() / t)
}

/// `p ≤ q + √(kl / max{ln(1/q), 2})`. The `max` in the denominator is
/// always at least as tight as the plain `ln(1/q)` and remains sound;
/// the plain-denominator variant is [`crate::fano::fano_kl_sqrt`] with
/// `use_max_denominator = false`.
pub fn lb_pinsker_fano(kl_val: ExtReal, q: f64) -> Result<SolvedBound, KlBoundsError> {
    check_q(q)?;
    let v = match kl_val {
        ExtReal::Finite(k) => q + (k / (1.0 / q).ln().max(2.0)).sqrt(),
        ExtReal::Inf => f64::INFINITY,
    };
    Ok(solved(v, BoundFamily::KlSqrt))
}

/// `max{0, p − 1 + e^{−1/e} e^{−kl}}`, a lower bound on `q`. The
/// constant `e^{−1/e} ≈ 0.6922` improves on the classical `1/2`; it is
/// computed at run time to keep full precision.
pub fn bretagnolle_huber_q_lower(p_val: f64, kl_val: ExtReal) -> f64 {
    assert!((0.0..=1.0).contains(&p_val), "p must lie in [0,1]");
    let c = (-1.0 / std::f64::consts::E).exp();
    (p_val - 1.0 + c * kl_val.neg_exp()).max(0.0)
}

/// Le Cam-type bound from the squared Hellinger distance.
/// `sharp = false`: `p ≤ q + √(h²(1 − h²/4))`.
/// `sharp = true`: `p ≤ q + (1−2q) h²(1 − h²/4)
///                       + 2√(q(1−q)) (1 − h²/2) √(h²(1 − h²/4))`,
/// always at most the simple form.
pub fn lecam_hellinger(h2_val: f64, q: f64, sharp: bool) -> Result<SolvedBound, KlBoundsError> {
    if !(0.0..=2.0).contains(&h2_val) {
        return Err(KlBoundsError::OutOfRange(h2_val));
    }
    assert!((0.0..=1.0).contains(&q), "q must lie in [0,1]");
    let g = (h2_val * (1.0 - h2_val / 4.0)).max(0.0);
    if sharp {
        let v = q
            + (1.0 - 2.0 * q) * g
            + 2.0 * (q * (1.0 - q)).sqrt() * (1.0 - h2_val / 2.0) * g.sqrt();
        Ok(solved(v, BoundFamily::HellingerSharp))
    } else {
        Ok(solved(q + g.sqrt(), BoundFamily::HellingerSimple))
    }
}

/// `p ≤ q + √(q · χ²)`, with `0 · ∞ = 0` when `q = 0`.
pub fn chi2_solved(chi2_val: ExtReal, q: f64) -> SolvedBound {
    assert!((0.0..=1.0).contains(&q), "q must lie in [0,1]");
    let v = match chi2_val.scale(q) {
        ExtReal::Finite(x) => q + x.sqrt(),
        ExtReal::Inf => f64::INFINITY,
    };
    solved(v, BoundFamily::Chi2)
}

/// Generalized inverse of `kl` in its first argument:
/// `sup{p ∈ [0,1] : kl(p,q) ≤ y}`. Equals 1 when `y ≥ ln(1/q)`;
/// otherwise located by bisection on `[q,1]` to absolute tolerance
/// 1e-12 (hard cap of 200 iterations).
pub fn kl_inverse(q: f64, y: ExtReal) -> Result<f64, KlBoundsError> {
    check_q(q)?;
    let y = match y {
        ExtReal::Finite(v) => v,
        ExtReal::Inf => return Ok(1.0),
    };
    if y >= (1.0 / q).ln() {
        return Ok(1.0);
    }
    // kl(·,q) is increasing on [q,1]; keep lo feasible, hi infeasible.
    let mut lo = q;
    let mut hi = 1.0;
    for _ in 0..200 {
        if hi - lo <= 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if kl_bernoulli(mid, q).to_f64() <= y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Binary entropy `−(p ln p + (1−p) ln(1−p))` with `0 ln 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "p must lie in [0,1]");
    let term = |a: f64| if a == 0.0 { 0.0 } else { -a * a.ln() };
    term(p) + term(1.0 - p)
}
