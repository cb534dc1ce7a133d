//! Birgé-type constants and the bounds built from them.
//!
//! Bounds of the form `min_i P_i(A_i) ≤ max{constant(N), K̄ / ln N}`
//! come with three interchangeable constants:
//!
//! - `c_N`: the unique `c ∈ (0,1)` with
//!   `h(c)/c + ln(1−c) = ln((N−1)/N)` (`h` = binary entropy);
//! - `d_N`: the largest `b ∈ [0,1)` with
//!   `r_N(b) = kl(b, (1−b)/(N−1)) − b ln N ≤ 0`;
//! - the N-free Massart constant `(2e−1)/(2e) ≈ 0.8161`.
//!
//! Both sequences decrease to the common limit `≈ 0.63987` and satisfy
//! `d_N ≤ c_N < (2e−1)/(2e)`.

use crate::divergences::kl_bernoulli;
use crate::extreal::ExtReal;
use crate::kl_bounds::binary_entropy;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BirgeError {
    #[error("need at least 2 hypotheses, got {0}")]
    BadN(u64),
}

/// Which constant [`birge_bound`] compares against `K̄ / ln N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BirgeVariant {
    Cn,
    Dn,
    Massart,
}

/// One row of the comparison table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BirgeConstants {
    pub n_hypotheses: u64,
    pub c_n: f64,
    pub d_n: f64,
    pub massart: f64,
}

/// `(2e−1)/(2e)`, the N-free constant.
pub fn massart_constant() -> f64 {
    1.0 - 0.5 / std::f64::consts::E
}

fn check_n(n: u64) -> Result<(), BirgeError> {
    if n >= 2 {
        Ok(())
    } else {
        Err(BirgeError::BadN(n))
    }
}

/// Solves `h(c)/c + ln(1−c) = ln((N−1)/N)` for `c ∈ (0,1)` by
/// bisection to 1e-10. The left side is continuous and strictly
/// decreasing, diverging to `+∞` at 0 and `−∞` at 1, so the root
/// exists and is unique.
pub fn birge_c(n: u64) -> Result<f64, BirgeError> {
    check_n(n)?;
    let target = (-1.0 / n as f64).ln_1p();
    let g = |c: f64| binary_entropy(c) / c + (-c).ln_1p();
    let mut lo = 1e-12;
    let mut hi = 1.0 - 1e-12;
    debug_assert!(g(lo) > target && g(hi) < target);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `r_N(b) = kl(b, (1−b)/(N−1)) − b ln N`.
pub fn birge_r(n: u64, b: f64) -> Result<f64, BirgeError> {
    check_n(n)?;
    let alt = (1.0 - b) / (n as f64 - 1.0);
    Ok(kl_bernoulli(b, alt.clamp(0.0, 1.0)).to_f64() - b * (n as f64).ln())
}

/// `d_N = max{b ∈ [0,1) : r_N(b) ≤ 0}`, located by a descending scan
/// from `1 − 1e-9` on a 1e-4 grid to bracket the sign change, then
/// bisection to 1e-10.
pub fn birge_d(n: u64) -> Result<f64, BirgeError> {
    check_n(n)?;
    let r = |b: f64| birge_r(n, b).expect("n checked");
    let mut hi = 1.0 - 1e-9;
    let mut b = hi;
    while b > 0.0 && r(b) > 0.0 {
        hi = b;
        b -= 1e-4;
    }
    let mut lo = b.max(0.0);
    // r(lo) ≤ 0 < r(hi): bisect to the crossing
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if r(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `max{constant(variant, N), K̄ / ln N}`, clipped to `[0,1]`.
pub fn birge_bound(n: u64, k_bar: ExtReal, variant: BirgeVariant) -> Result<f64, BirgeError> {
    check_n(n)?;
    let constant = match variant {
        BirgeVariant::Cn => birge_c(n)?,
        BirgeVariant::Dn => birge_d(n)?,
        BirgeVariant::Massart => massart_constant(),
    };
    let ratio = match k_bar {
        ExtReal::Finite(k) => k / (n as f64).ln(),
        ExtReal::Inf => f64::INFINITY,
    };
    Ok(constant.max(ratio).clamp(0.0, 1.0))
}

/// One comparison row per requested `N`.
pub fn comparison_table(n_values: &[u64]) -> Result<Vec<BirgeConstants>, BirgeError> {
    n_values
        .iter()
        .map(|&n| {
            Ok(BirgeConstants {
                n_hypotheses: n,
                c_n: birge_c(n)?,
                d_n: birge_d(n)?,
                massart: massart_constant(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn c_n_reference_values() {
        assert_abs_diff_eq!(birge_c(2).unwrap(), 0.7587, epsilon = 5e-4);
        assert_abs_diff_eq!(birge_c(3).unwrap(), 0.7127, epsilon = 5e-4);
        assert_abs_diff_eq!(birge_c(1_000_000).unwrap(), 0.63987, epsilon = 1e-4);
        assert_eq!(birge_c(1), Err(BirgeError::BadN(1)));
    }

    #[test]
    fn d_n_reference_values() {
        assert_abs_diff_eq!(birge_d(2).unwrap(), 0.7428, epsilon = 5e-4);
        assert_abs_diff_eq!(birge_d(3).unwrap(), 0.7009, epsilon = 5e-4);
        assert_abs_diff_eq!(birge_d(1_000_000).unwrap(), 0.63987, epsilon = 1e-4);
    }

    #[test]
    fn defining_equation_residuals() {
        for n in [2, 3, 7, 100] {
            let c = birge_c(n).unwrap();
            let g = binary_entropy(c) / c + (-c).ln_1p();
            assert_abs_diff_eq!(g, (-1.0 / n as f64).ln_1p(), epsilon = 1e-9);

            let d = birge_d(n).unwrap();
            assert!(birge_r(n, d).unwrap() <= 1e-9);
            assert!(birge_r(n, d + 1e-6).unwrap() > 0.0);
        }
    }

    #[test]
    fn monotone_and_ordered() {
        let massart = massart_constant();
        assert_abs_diff_eq!(massart, 0.8160602794142788, epsilon = 1e-15);
        let mut prev_c = 1.0;
        let mut prev_d = 1.0;
        for n in 2..=100 {
            let c = birge_c(n).unwrap();
            let d = birge_d(n).unwrap();
            assert!(c < prev_c && d < prev_d, "not decreasing at n={n}");
            assert!(d <= c && c < massart);
            assert!(c >= 0.5);
            assert!(c >= 0.63987 - 1e-4 && d >= 0.63987 - 1e-4);
            prev_c = c;
            prev_d = d;
        }
    }

    #[test]
    fn bound_assembly() {
        let c2 = birge_c(2).unwrap();
        assert_eq!(
            birge_bound(2, ExtReal::ZERO, BirgeVariant::Cn).unwrap(),
            c2
        );
        assert_eq!(
            birge_bound(5, ExtReal::Inf, BirgeVariant::Massart).unwrap(),
            1.0
        );
        assert_abs_diff_eq!(
            birge_bound(2, ExtReal::ZERO, BirgeVariant::Massart).unwrap(),
            massart_constant(),
            epsilon = 1e-15
        );
        // ratio branch dominates for large K̄
        let b = birge_bound(4, ExtReal::finite(1.3), BirgeVariant::Cn).unwrap();
        assert_abs_diff_eq!(b, 1.3 / 4.0f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn table_is_consistent() {
        let rows = comparison_table(&[2, 3, 7]).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].c_n, birge_c(2).unwrap());
        assert_eq!(rows[0].d_n, birge_d(2).unwrap());
        assert!(rows[2].c_n < 0.67);
        assert!(rows[2].d_n < 2.0 / 3.0);
        assert!(comparison_table(&[2, 1]).is_err());
    }
}
