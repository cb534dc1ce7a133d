//! Bernoulli reductions of weighted families and the Fano-type
//! inequalities assembled from them.
//!
//! A weighted family of hypotheses contributes, per member, a weight
//! `α_i`, the expectations `p_i = E_{P_i}[Z_i]` and `q_i = E_{Q_i}[Z_i]`
//! of a `[0,1]`-valued statistic, and a divergence `Div_f(P_i,Q_i)`.
//! The reduction averages these into `(p̄, q̄, D̄)`; the chain
//! `div(p̄,q̄) ≤ Σ α_i div(p_i,q_i) ≤ D̄` then turns any scalar solved
//! bound into a bound on `p̄`. Continuous parameter spaces are
//! represented by caller-supplied finite weights; this module never
//! integrates.

use crate::divergences::{divergence_finite, DivergenceError, FiniteDist, Generator};
use crate::extreal::ExtReal;
use crate::kl_bounds::{lb_affine, lb_classic, lb_refined, lecam_hellinger, BoundFamily};
use std::f64::consts::LN_2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FanoError {
    #[error("family weights must be non-negative and sum to 1 within 1e-12 (sum = {0})")]
    BadWeights(f64),
    #[error("family must be non-empty")]
    EmptyFamily,
    #[error("expectation {0} outside [0,1]")]
    BadExpectation(f64),
    #[error("averaged alternative mass q_bar = {0} is degenerate; need 0 < q_bar < 1")]
    DegenerateQBar(f64),
    #[error("averaged squared Hellinger distance {0} exceeds 2")]
    OutOfRange(f64),
    #[error("minimal averaged loss equals 1; no nontrivial bound exists")]
    DegenerateLoss,
    #[error("prior weight {0} must be positive")]
    ZeroWeight(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Divergence(#[from] DivergenceError),
}

/// One member of a weighted family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyEntry {
    pub weight: f64,
    pub p_exp: f64,
    pub q_exp: f64,
    pub div: ExtReal,
}

/// The averaged triple `(p̄, q̄, D̄)` produced by a reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedPair {
    pub p_bar: f64,
    pub q_bar: f64,
    pub d_bar: ExtReal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    UpperOnP,
    LowerOnQ,
}

/// A reduced pair together with the bound applied to it.
/// `vacuous` is set when the clipped value reaches 1 and therefore
/// carries no information.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FanoReport {
    pub reduced: ReducedPair,
    pub family: BoundFamily,
    pub value: f64,
    pub direction: Direction,
    pub vacuous: bool,
}

fn report(reduced: ReducedPair, family: BoundFamily, value: f64) -> FanoReport {
    let value = value.clamp(0.0, 1.0);
    FanoReport {
        reduced,
        family,
        value,
        direction: Direction::UpperOnP,
        vacuous: value >= 1.0,
    }
}

/// Weight-averages a family into `(p̄, q̄, D̄)`.
pub fn reduce(entries: &[FamilyEntry]) -> Result<ReducedPair, FanoError> {
    if entries.is_empty() {
        return Err(FanoError::EmptyFamily);
    }
    let mut sum = 0.0;
    for e in entries {
        if !(e.weight >= 0.0) {
            return Err(FanoError::BadWeights(e.weight));
        }
        for x in [e.p_exp, e.q_exp] {
            if !(0.0..=1.0).contains(&x) {
                return Err(FanoError::BadExpectation(x));
            }
        }
        sum += e.weight;
    }
    if (sum - 1.0).abs() > 1e-12 {
        return Err(FanoError::BadWeights(sum));
    }
    let mut p_bar = 0.0;
    let mut q_bar = 0.0;
    let mut d_bar = ExtReal::ZERO;
    for e in entries {
        p_bar += e.weight * e.p_exp;
        q_bar += e.weight * e.q_exp;
        d_bar = d_bar + e.div.scale(e.weight);
    }
    Ok(ReducedPair {
        p_bar: p_bar.clamp(0.0, 1.0),
        q_bar: q_bar.clamp(0.0, 1.0),
        d_bar,
    })
}

fn check_q_bar(reduced: &ReducedPair) -> Result<(), FanoError> {
    if reduced.q_bar > 0.0 && reduced.q_bar < 1.0 {
        Ok(())
    } else {
        Err(FanoError::DegenerateQBar(reduced.q_bar))
    }
}

/// Which solved form [`fano_kl`] applies to `(D̄, q̄)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KlVariant {
    Classic,
    Refined,
    Affine,
}

/// Upper bound on `p̄` from the averaged KL divergence. With a uniform
/// partition family under a constant alternative (`q̄ = 1/N`), the
/// classic variant reads `(K̄ + ln 2)/ln N`.
pub fn fano_kl(reduced: &ReducedPair, variant: KlVariant) -> Result<FanoReport, FanoError> {
    check_q_bar(reduced)?;
    let solved = match variant {
        KlVariant::Classic => lb_classic(reduced.d_bar, reduced.q_bar),
        KlVariant::Refined => lb_refined(reduced.d_bar, reduced.q_bar),
        KlVariant::Affine => lb_affine(reduced.d_bar, reduced.q_bar),
    }
    .expect("q_bar already validated");
    Ok(report(*reduced, solved.family, solved.bound_on_p))
}

/// `p̄ ≤ q̄ + √(D̄ / den)` with `den = −ln q̄`, or
/// `den = max{−ln q̄, 2}` when `use_max_denominator` is set (always at
/// least as tight, still sound). With `q̄ = 1/N` the plain form reads
/// `1/N + √(K̄ / ln N)`.
pub fn fano_kl_sqrt(reduced: &ReducedPair, use_max_denominator: bool) -> Result<FanoReport, FanoError> {
    check_q_bar(reduced)?;
    let mut den = -reduced.q_bar.ln();
    if use_max_denominator {
        den = den.max(2.0);
    }
    let v = match reduced.d_bar {
        ExtReal::Finite(d) => reduced.q_bar + (d / den).sqrt(),
        ExtReal::Inf => f64::INFINITY,
    };
    Ok(report(*reduced, BoundFamily::KlSqrt, v))
}

/// `p̄ ≤ q̄ + √(q̄ · D̄)` from the averaged χ² divergence; the uniform
/// partition case reads `1/N + √(D̄/N)`.
pub fn fano_chi2(reduced: &ReducedPair) -> Result<FanoReport, FanoError> {
    check_q_bar(reduced)?;
    let v = match reduced.d_bar.scale(reduced.q_bar) {
        ExtReal::Finite(x) => reduced.q_bar + x.sqrt(),
        ExtReal::Inf => f64::INFINITY,
    };
    Ok(report(*reduced, BoundFamily::Chi2, v))
}

/// `p̄ ≤ q̄ + √(D̄) √(1 − D̄/4)` from the averaged squared Hellinger
/// distance (which must lie in `[0,2]`).
pub fn fano_hellinger(reduced: &ReducedPair) -> Result<FanoReport, FanoError> {
    check_q_bar(reduced)?;
    let d = match reduced.d_bar {
        ExtReal::Finite(d) => d,
        ExtReal::Inf => return Err(FanoError::OutOfRange(f64::INFINITY)),
    };
    if d > 2.0 {
        return Err(FanoError::OutOfRange(d));
    }
    let solved = lecam_hellinger(d, reduced.q_bar, false).expect("d in [0,2]");
    Ok(report(*reduced, solved.family, solved.bound_on_p))
}

/// Lower bound on `E_Q[Z]`: `exp(−(KL + ln 2)/E_P[Z])`, with the
/// conventions `E_P[Z] = 0 → 0` and `KL = +∞ → 0`, so it holds even in
/// the degenerate cases.
pub fn haroutunian_q_lower(p_exp: f64, kl_val: ExtReal) -> f64 {
    assert!((0.0..=1.0).contains(&p_exp), "p_exp must lie in [0,1]");
    if p_exp == 0.0 {
        return 0.0;
    }
    match kl_val {
        ExtReal::Finite(k) => (-(k + LN_2) / p_exp).exp(),
        ExtReal::Inf => 0.0,
    }
}

/// Outcome of [`bayes_risk_lower`]. `zero_loss` marks the vacuous case
/// where some action has zero averaged loss, forcing the bound to 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BayesRiskBound {
    pub bound: f64,
    pub inf_avg_loss: f64,
    pub zero_loss: bool,
}

/// Generalized Fano bound on the Bayes risk for a `[0,1]`-valued loss:
/// `R ≥ 1 + (Σ ν_θ KL_θ + ln(1 + ℓ*)) / ln(1 − ℓ*)`, where
/// `ℓ* = inf_a Σ_θ ν_θ L(θ,a)` and `KL_θ` is the divergence from `P_θ`
/// to the ν-mixture (which attains the infimum over common
/// alternatives for KL). With a 0-1 loss and no two hypotheses sharing
/// an optimal action, `−ln(1−ℓ*)` is the infinite-order Rényi entropy
/// of the prior.
pub fn bayes_risk_lower(
    prior: &FiniteDist,
    loss: &[Vec<f64>],
    kl_to_mixture: &[ExtReal],
) -> Result<BayesRiskBound, FanoError> {
    let n = prior.len();
    if loss.len() != n || kl_to_mixture.len() != n {
        return Err(FanoError::Shape(format!(
            "prior has {n} atoms, loss has {} rows, kl list has {}",
            loss.len(),
            kl_to_mixture.len()
        )));
    }
    let n_actions = loss[0].len();
    if n_actions == 0 || loss.iter().any(|row| row.len() != n_actions) {
        return Err(FanoError::Shape("ragged or empty loss matrix".into()));
    }
    for row in loss {
        for &l in row {
            if !(0.0..=1.0).contains(&l) {
                return Err(FanoError::BadExpectation(l));
            }
        }
    }
    let nu = prior.weights();
    let ell_star = (0..n_actions)
        .map(|a| (0..n).map(|t| nu[t] * loss[t][a]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    if ell_star >= 1.0 {
        return Err(FanoError::DegenerateLoss);
    }
    if ell_star <= 0.0 {
        return Ok(BayesRiskBound {
            bound: 0.0,
            inf_avg_loss: 0.0,
            zero_loss: true,
        });
    }
    let mut avg_kl = ExtReal::ZERO;
    for (t, &k) in kl_to_mixture.iter().enumerate() {
        avg_kl = avg_kl + k.scale(nu[t]);
    }
    let bound = match avg_kl {
        ExtReal::Finite(k) => 1.0 + (k + (1.0 + ell_star).ln()) / (1.0 - ell_star).ln(),
        ExtReal::Inf => 0.0,
    };
    Ok(BayesRiskBound {
        bound: bound.clamp(0.0, 1.0),
        inf_avg_loss: ell_star,
        zero_loss: false,
    })
}

/// The mixture alternative `P̄_α = Σ α_i P_i`, the averaged divergence
/// to it, and the closed-form cap `B_f(α) = max_j Div_f(δ_j, α)`
/// (`ln(1/min α)` for KL, `1/min α − 1` for χ², evaluated atom by atom
/// for Hellinger). The averaged divergence never exceeds the cap.
pub fn best_constant_alternative(
    f: Generator,
    dists: &[FiniteDist],
    alpha: &FiniteDist,
) -> Result<(FiniteDist, ExtReal, ExtReal), FanoError> {
    if dists.is_empty() || alpha.len() != dists.len() {
        return Err(FanoError::Shape(format!(
            "{} distributions vs {} weights",
            dists.len(),
            alpha.len()
        )));
    }
    let k = dists[0].len();
    if dists.iter().any(|d| d.len() != k) {
        return Err(FanoError::Shape("distributions on different supports".into()));
    }
    for (i, &a) in alpha.weights().iter().enumerate() {
        if a <= 0.0 {
            return Err(FanoError::ZeroWeight(i));
        }
    }
    let mut mix = vec![0.0; k];
    for (d, &a) in dists.iter().zip(alpha.weights()) {
        for (m, &w) in mix.iter_mut().zip(d.weights()) {
            *m += a * w;
        }
    }
    let mixture = FiniteDist::normalized(mix)?;
    let mut avg = ExtReal::ZERO;
    for (d, &a) in dists.iter().zip(alpha.weights()) {
        avg = avg + divergence_finite(f, d, &mixture)?.scale(a);
    }
    let min_alpha = alpha.weights().iter().cloned().fold(f64::INFINITY, f64::min);
    let cap = match f {
        Generator::Kl => ExtReal::finite((1.0 / min_alpha).ln()),
        Generator::Chi2 => ExtReal::finite(1.0 / min_alpha - 1.0),
        Generator::Hellinger => {
            let n = alpha.len();
            let mut worst = ExtReal::ZERO;
            for j in 0..n {
                let d = divergence_finite(f, &FiniteDist::point_mass(n, j), alpha)?;
                if d > worst {
                    worst = d;
                }
            }
            worst
        }
    };
    Ok((mixture, avg, cap))
}

/// Infinite-order Rényi entropy `−ln(max_θ ν_θ)` of a prior.
pub fn renyi_infty(prior: &FiniteDist) -> f64 {
    let max = prior.weights().iter().cloned().fold(0.0, f64::max);
    -(max.ln())
}
