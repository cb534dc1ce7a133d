//! Exact divergences between finite discrete distributions and between
//! Bernoulli parameters.
//!
//! For a convex generator `f` with `f(1) = 0` and maximal slope
//! `M_f = lim_{t→∞} f(t)/t`, the divergence between finite-support
//! distributions splits `P` into the part absolutely continuous with
//! respect to `Q` and the singular rest:
//!
//! `Div_f(P,Q) = Σ_{q_i>0} q_i f(p_i/q_i) + (Σ_{q_i=0} p_i) · M_f`.
//!
//! Three generators are shipped, with certified `M_f` and `f(0)`:
//!
//! | generator | f(x)      | f(0) | M_f  |
//! |-----------|-----------|------|------|
//! | KL        | x ln x    | 0    | +∞   |
//! | χ²        | x² − 1    | −1   | +∞   |
//! | Hellinger | (√x − 1)² | 1    | 1    |
//!
//! A generic `f` hook is deliberately omitted.

use crate::extreal::ExtReal;
use thiserror::Error;

/// Normalization tolerance for distribution construction.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum DivergenceError {
    #[error("distributions have different atom counts ({0} vs {1})")]
    MismatchedSupport(usize, usize),
    #[error("weight must be non-negative, got {0}")]
    NegativeWeight(f64),
    #[error("weights sum to {0}, more than 1e-12 away from 1")]
    NotNormalized(f64),
    #[error("a distribution needs at least one atom")]
    Empty,
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
}

/// One of the three shipped convex generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Kl,
    Chi2,
    Hellinger,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::Kl, Generator::Chi2, Generator::Hellinger];

    /// Maximal slope `M_f`, the weight given to the part of `P` singular
    /// with respect to `Q`.
    pub fn max_slope(self) -> ExtReal {
        match self {
            Generator::Kl | Generator::Chi2 => ExtReal::Inf,
            Generator::Hellinger => ExtReal::finite(1.0),
        }
    }

    /// `f(0)`, with `0 ln 0 = 0` for KL.
    pub fn f_at_zero(self) -> f64 {
        match self {
            Generator::Kl => 0.0,
            Generator::Chi2 => -1.0,
            Generator::Hellinger => 1.0,
        }
    }

    /// Evaluates `f` at `x ≥ 0`.
    pub fn eval(self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        match self {
            Generator::Kl => {
                if x == 0.0 {
                    0.0
                } else {
                    x * x.ln()
                }
            }
            Generator::Chi2 => x * x - 1.0,
            Generator::Hellinger => {
                let s = x.sqrt() - 1.0;
                s * s
            }
        }
    }
}

/// A probability vector over `k ≥ 1` indexed atoms; the only
/// distribution representation used for exact divergence computation.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDist {
    weights: Vec<f64>,
}

impl FiniteDist {
    /// Validates non-negativity and normalization within 1e-12, then
    /// renormalizes exactly. Rejects anything further from 1.
    pub fn new(weights: Vec<f64>) -> Result<Self, DivergenceError> {
        if weights.is_empty() {
            return Err(DivergenceError::Empty);
        }
        for &w in &weights {
            if !(w >= 0.0) {
                return Err(DivergenceError::NegativeWeight(w));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(DivergenceError::NotNormalized(sum));
        }
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(FiniteDist { weights })
    }

    /// Builds from arbitrary non-negative weights with positive total
    /// mass by dividing through.
    pub fn normalized(weights: Vec<f64>) -> Result<Self, DivergenceError> {
        if weights.is_empty() {
            return Err(DivergenceError::Empty);
        }
        for &w in &weights {
            if !(w >= 0.0) {
                return Err(DivergenceError::NegativeWeight(w));
            }
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(DivergenceError::NotNormalized(sum));
        }
        Ok(FiniteDist {
            weights: weights.into_iter().map(|w| w / sum).collect(),
        })
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k >= 1);
        FiniteDist {
            weights: vec![1.0 / k as f64; k],
        }
    }

    pub fn point_mass(k: usize, atom: usize) -> Self {
        assert!(atom < k);
        let mut weights = vec![0.0; k];
        weights[atom] = 1.0;
        FiniteDist { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Pushforward under a deterministic map of atoms: `map[i]` is the
    /// image of atom `i` in `{0, ..., m-1}`; image weights are sums of
    /// preimage weights.
    pub fn push_forward(&self, map: &[usize], m: usize) -> Self {
        assert_eq!(map.len(), self.weights.len());
        let mut weights = vec![0.0; m];
        for (i, &w) in self.weights.iter().enumerate() {
            assert!(map[i] < m);
            weights[map[i]] += w;
        }
        FiniteDist { weights }
    }

    /// Convex combination `(1−λ)·self + λ·other`.
    pub fn mix(&self, other: &FiniteDist, lambda: f64) -> Self {
        assert_eq!(self.len(), other.len());
        assert!((0.0..=1.0).contains(&lambda));
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(&a, &b)| (1.0 - lambda) * a + lambda * b)
            .collect();
        FiniteDist { weights }
    }
}

fn check_unit(x: f64, name: &str) {
    assert!(
        (0.0..=1.0).contains(&x),
        "{name} must lie in [0,1], got {x}"
    );
}

/// `kl(p,q) = p ln(p/q) + (1−p) ln((1−p)/(1−q))` between Bernoulli
/// parameters, with boundary conventions: `+∞` iff (`q=0`, `p>0`) or
/// (`q=1`, `p<1`). Boundary cases are decided before any logarithm is
/// taken, so NaN never propagates.
pub fn kl_bernoulli(p: f64, q: f64) -> ExtReal {
    check_unit(p, "p");
    check_unit(q, "q");
    if p == q {
        return ExtReal::ZERO;
    }
    if q == 0.0 || q == 1.0 {
        return ExtReal::Inf;
    }
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    ExtReal::finite(term(p, q) + term(1.0 - p, 1.0 - q))
}

/// `χ²(Ber(p), Ber(q)) = (p−q)² / (q(1−q))`, `+∞` when `q ∈ {0,1}`
/// and `p ≠ q`.
pub fn chi2_bernoulli(p: f64, q: f64) -> ExtReal {
    check_unit(p, "p");
    check_unit(q, "q");
    if p == q {
        return ExtReal::ZERO;
    }
    if q == 0.0 || q == 1.0 {
        return ExtReal::Inf;
    }
    let d = p - q;
    ExtReal::finite(d * d / (q * (1.0 - q)))
}

/// Squared Hellinger distance
/// `h²(p,q) = 2(1 − (√(pq) + √((1−p)(1−q))))`, always in `[0,2]` and
/// symmetric in its arguments.
pub fn hellinger2_bernoulli(p: f64, q: f64) -> f64 {
    check_unit(p, "p");
    check_unit(q, "q");
    (2.0 * (1.0 - ((p * q).sqrt() + ((1.0 - p) * (1.0 - q)).sqrt()))).clamp(0.0, 2.0)
}

/// `Div_f(P,Q)` over a common finite support:
/// `Σ_{q_i>0} q_i f(p_i/q_i) + (Σ_{q_i=0} p_i) · M_f`.
pub fn divergence_finite(
    f: Generator,
    p: &FiniteDist,
    q: &FiniteDist,
) -> Result<ExtReal, DivergenceError> {
    if p.len() != q.len() {
        return Err(DivergenceError::MismatchedSupport(p.len(), q.len()));
    }
    let mut ac = 0.0;
    let mut singular = 0.0;
    for (&pi, &qi) in p.weights().iter().zip(q.weights()) {
        if qi > 0.0 {
            if pi == 0.0 {
                ac += qi * f.f_at_zero();
            } else {
                ac += qi * f.eval(pi / qi);
            }
        } else {
            singular += pi;
        }
    }
    if singular > 0.0 {
        match f.max_slope() {
            ExtReal::Inf => return Ok(ExtReal::Inf),
            ExtReal::Finite(m) => ac += singular * m,
        }
    }
    Ok(ExtReal::finite(ac.max(0.0)))
}

/// `n · base_kl`: the KL divergence between `n`-fold products of
/// identical factors.
pub fn kl_product_scale(base_kl: ExtReal, n: u64) -> ExtReal {
    assert!(n >= 1, "n must be positive");
    base_kl.scale(n as f64)
}

/// KL between `n`-sample isotropic Gaussians at squared parameter
/// distance `delta_sq`: `n · delta_sq / (2σ²)`.
pub fn kl_gaussian_iso(delta_sq: f64, sigma: f64, n: u64) -> Result<f64, DivergenceError> {
    assert!(delta_sq >= 0.0, "squared distance must be non-negative");
    assert!(n >= 1, "n must be positive");
    if sigma <= 0.0 {
        return Err(DivergenceError::NonPositiveSigma(sigma));
    }
    Ok(n as f64 * delta_sq / (2.0 * sigma * sigma))
}
