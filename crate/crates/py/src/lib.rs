//! Python bindings: thin wrappers over `fano-core` exposing the scalar
//! divergences, the solved lower bounds, the reduction front end, the
//! constant tables, the application bounds, and the verification suite.
//! Extended-real values cross the boundary as `float`, with the
//! infinite state mapped to `float('inf')`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fano_core::applications as apps;
use fano_core::birge;
use fano_core::divergences as dv;
use fano_core::fano;
use fano_core::kl_bounds as kb;
use fano_core::verify;
use fano_core::ExtReal;

fn val_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Validating conversion into the extended reals (`inf` allowed).
fn ext_in(x: f64, name: &str) -> PyResult<ExtReal> {
    if x.is_nan() || x < 0.0 {
        return Err(PyValueError::new_err(format!(
            "{name} must be a non-negative number, got {x}"
        )));
    }
    Ok(ExtReal::from_f64(x))
}

fn unit_in(x: f64, name: &str) -> PyResult<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(PyValueError::new_err(format!(
            "{name} must lie in [0, 1], got {x}"
        )));
    }
    Ok(x)
}

fn generator_in(f: &str) -> PyResult<dv::Generator> {
    match f {
        "kl" => Ok(dv::Generator::Kl),
        "chi2" => Ok(dv::Generator::Chi2),
        "hellinger" => Ok(dv::Generator::Hellinger),
        other => Err(PyValueError::new_err(format!(
            "unknown generator {other:?}; expected 'kl', 'chi2', or 'hellinger'"
        ))),
    }
}

// ---------------------------------------------------------------------------
// divergences

/// KL divergence between Bernoulli(p) and Bernoulli(q).
#[pyfunction]
fn kl_bernoulli(p: f64, q: f64) -> PyResult<f64> {
    Ok(dv::kl_bernoulli(unit_in(p, "p")?, unit_in(q, "q")?).to_f64())
}

/// Chi-squared divergence between Bernoulli(p) and Bernoulli(q).
#[pyfunction]
fn chi2_bernoulli(p: f64, q: f64) -> PyResult<f64> {
    Ok(dv::chi2_bernoulli(unit_in(p, "p")?, unit_in(q, "q")?).to_f64())
}

/// Squared Hellinger distance between Bernoulli(p) and Bernoulli(q).
#[pyfunction]
fn hellinger2_bernoulli(p: f64, q: f64) -> PyResult<f64> {
    Ok(dv::hellinger2_bernoulli(unit_in(p, "p")?, unit_in(q, "q")?))
}

/// f-divergence between two finite distributions given as weight lists
/// over a common support; `f` is 'kl', 'chi2', or 'hellinger'.
#[pyfunction]
fn divergence(f: &str, p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
    let g = generator_in(f)?;
    let p = dv::FiniteDist::new(p).map_err(val_err)?;
    let q = dv::FiniteDist::new(q).map_err(val_err)?;
    Ok(dv::divergence_finite(g, &p, &q).map_err(val_err)?.to_f64())
}

// ---------------------------------------------------------------------------
// solved scalar bounds

/// Upper bound on p: (kl + ln 2) / ln(1/q).
#[pyfunction]
fn lb_classic(kl: f64, q: f64) -> PyResult<f64> {
    Ok(kb::lb_classic(ext_in(kl, "kl")?, q).map_err(val_err)?.bound_on_p)
}

/// Upper bound on p: (kl + ln(2 - q)) / ln(1/q).
#[pyfunction]
fn lb_refined(kl: f64, q: f64) -> PyResult<f64> {
    Ok(kb::lb_refined(ext_in(kl, "kl")?, q).map_err(val_err)?.bound_on_p)
}

/// Upper bound on p: 0.21 + 0.79 q + kl / ln(1/q).
#[pyfunction]
fn lb_affine(kl: f64, q: f64) -> PyResult<f64> {
    Ok(kb::lb_affine(ext_in(kl, "kl")?, q).map_err(val_err)?.bound_on_p)
}

/// Upper bound on p: q + sqrt(kl / max(ln(1/q), 2)).
#[pyfunction]
fn lb_kl_sqrt(kl: f64, q: f64) -> PyResult<f64> {
    Ok(kb::lb_pinsker_fano(ext_in(kl, "kl")?, q)
        .map_err(val_err)?
        .bound_on_p)
}

/// Upper bound on p: q + sqrt(q * chi2).
#[pyfunction]
fn lb_chi2(chi2: f64, q: f64) -> PyResult<f64> {
    unit_in(q, "q")?;
    Ok(kb::chi2_solved(ext_in(chi2, "chi2")?, q).bound_on_p)
}

/// Le Cam-type Hellinger bound on p; `sharp` selects the tighter form.
#[pyfunction]
#[pyo3(signature = (h2, q, sharp=false))]
fn lb_hellinger(h2: f64, q: f64, sharp: bool) -> PyResult<f64> {
    unit_in(q, "q")?;
    Ok(kb::lecam_hellinger(h2, q, sharp).map_err(val_err)?.bound_on_p)
}

/// Lower bound on q: max(0, p - 1 + e^{-1/e} e^{-kl}).
#[pyfunction]
fn bretagnolle_huber_q_lower(p: f64, kl: f64) -> PyResult<f64> {
    Ok(kb::bretagnolle_huber_q_lower(
        unit_in(p, "p")?,
        ext_in(kl, "kl")?,
    ))
}

/// The optimal quadratic coefficient ln((1-q)/q) / (1-2q).
#[pyfunction]
fn pinsker_factor(q: f64) -> PyResult<f64> {
    Ok(kb::pinsker_factor(unit_in(q, "q")?).to_f64())
}

/// Generalized inverse sup{p : kl(p, q) <= y}.
#[pyfunction]
fn kl_inverse(q: f64, y: f64) -> PyResult<f64> {
    kb::kl_inverse(q, ext_in(y, "y")?).map_err(val_err)
}

/// Binary entropy in nats.
#[pyfunction]
fn binary_entropy(p: f64) -> PyResult<f64> {
    Ok(kb::binary_entropy(unit_in(p, "p")?))
}

// ---------------------------------------------------------------------------
// reduction front end

/// Reduces a family of `(weight, p_exp, q_exp, div)` tuples and returns
/// a dict with `p_bar`, `q_bar`, `d_bar`, and every applicable solved
/// bound (`classic`, `refined`, `affine`, `kl_sqrt`, `kl_sqrt_max`,
/// `chi2`, and `hellinger` when the averaged divergence is at most 2).
#[pyfunction]
fn fano_bounds(py: Python<'_>, entries: Vec<(f64, f64, f64, f64)>) -> PyResult<Py<PyDict>> {
    let family: Vec<fano::FamilyEntry> = entries
        .into_iter()
        .map(|(weight, p_exp, q_exp, div)| {
            Ok(fano::FamilyEntry {
                weight,
                p_exp,
                q_exp,
                div: ext_in(div, "div")?,
            })
        })
        .collect::<PyResult<_>>()?;
    let reduced = fano::reduce(&family).map_err(val_err)?;
    let out = PyDict::new_bound(py);
    out.set_item("p_bar", reduced.p_bar)?;
    out.set_item("q_bar", reduced.q_bar)?;
    out.set_item("d_bar", reduced.d_bar.to_f64())?;
    for (name, variant) in [
        ("classic", fano::KlVariant::Classic),
        ("refined", fano::KlVariant::Refined),
        ("affine", fano::KlVariant::Affine),
    ] {
        out.set_item(name, fano::fano_kl(&reduced, variant).map_err(val_err)?.value)?;
    }
    out.set_item(
        "kl_sqrt",
        fano::fano_kl_sqrt(&reduced, false).map_err(val_err)?.value,
    )?;
    out.set_item(
        "kl_sqrt_max",
        fano::fano_kl_sqrt(&reduced, true).map_err(val_err)?.value,
    )?;
    out.set_item("chi2", fano::fano_chi2(&reduced).map_err(val_err)?.value)?;
    if reduced.d_bar <= ExtReal::finite(2.0) {
        out.set_item(
            "hellinger",
            fano::fano_hellinger(&reduced).map_err(val_err)?.value,
        )?;
    }
    Ok(out.into())
}

/// Lower bound on E_Q[Z] from E_P[Z] and KL(P, Q).
#[pyfunction]
fn haroutunian_q_lower(p_exp: f64, kl: f64) -> PyResult<f64> {
    Ok(fano::haroutunian_q_lower(
        unit_in(p_exp, "p_exp")?,
        ext_in(kl, "kl")?,
    ))
}

// ---------------------------------------------------------------------------
// constant tables

/// The constant c_N (N >= 2).
#[pyfunction]
fn birge_c(n: u64) -> PyResult<f64> {
    birge::birge_c(n).map_err(val_err)
}

/// The companion constant d_N (N >= 2).
#[pyfunction]
fn birge_d(n: u64) -> PyResult<f64> {
    birge::birge_d(n).map_err(val_err)
}

/// The limiting constant (2e - 1) / (2e).
#[pyfunction]
fn massart_constant() -> f64 {
    birge::massart_constant()
}

// ---------------------------------------------------------------------------
// applications

/// Posterior-concentration constant: returns `(c_d, rho_star)`.
#[pyfunction]
fn posterior_constant(d: u64) -> PyResult<(f64, f64)> {
    apps::posterior_constant(d).map_err(val_err)
}

/// Distribution-dependent posterior floor `2^{-c} e^{-c n psi}`.
#[pyfunction]
fn posterior_dd_bound(psi: f64, n: u64, c: f64) -> PyResult<f64> {
    apps::posterior_dd_bound(ext_in(psi, "psi")?, n, c).map_err(val_err)
}

/// Gaussian KL modulus `2 eps^2 / sigma^2`.
#[pyfunction]
fn psi_gaussian(epsilon: f64, sigma: f64) -> PyResult<f64> {
    Ok(apps::psi_gaussian(epsilon, sigma).map_err(val_err)?.to_f64())
}

/// Sparse-loss regret floor: dict with `bound`, `epsilon_used`,
/// `regime`.
#[pyfunction]
fn sparse_regret_bound(py: Python<'_>, n_arms: u64, s: u64, t: u64) -> PyResult<Py<PyDict>> {
    if n_arms < 2 || s > n_arms || t < 1 {
        return Err(PyValueError::new_err(format!(
            "need N >= 2, s <= N, T >= 1, got N={n_arms}, s={s}, T={t}"
        )));
    }
    let r = apps::sparse_regret_bound(n_arms, s, t);
    let out = PyDict::new_bound(py);
    out.set_item("bound", r.bound)?;
    out.set_item("epsilon_used", r.epsilon_used)?;
    out.set_item(
        "regime",
        match r.regime {
            apps::Regime::ZeroSparsity => "zero_sparsity",
            apps::Regime::SmallHorizon => "small_horizon",
            apps::Regime::LargeHorizon => "large_horizon",
        },
    )?;
    Ok(out.into())
}

/// Exact binomial tail rate: returns `(empirical_rate, limit_rate)`.
#[pyfunction]
fn cramer_rate(theta: f64, x: f64, n: u64) -> PyResult<(f64, f64)> {
    let r = apps::cramer_rate(theta, x, n).map_err(val_err)?;
    Ok((r.empirical_rate, r.limit_rate))
}

/// Monte Carlo regret experiment against the sparse environments.
/// `strategy` is 'uniform', 'hedge' (tuned rate), or 'hedge:<eta>'.
#[pyfunction]
#[pyo3(signature = (n_arms, s, t, epsilon, strategy="hedge", trials=100, seed=0))]
#[allow(clippy::too_many_arguments)]
fn mc_regret(
    py: Python<'_>,
    n_arms: usize,
    s: usize,
    t: u64,
    epsilon: f64,
    strategy: &str,
    trials: u64,
    seed: u64,
) -> PyResult<Py<PyDict>> {
    let strat = if strategy == "uniform" {
        apps::Strategy::Uniform
    } else if strategy == "hedge" {
        apps::Strategy::hedge_tuned(n_arms, t)
    } else if let Some(eta) = strategy.strip_prefix("hedge:") {
        apps::Strategy::Hedge {
            eta: eta.parse().map_err(val_err)?,
        }
    } else {
        return Err(PyValueError::new_err(format!(
            "unknown strategy {strategy:?}"
        )));
    };
    let r = apps::mc_regret_experiment(n_arms, s, t, epsilon, strat, trials, seed)
        .map_err(val_err)?;
    let out = PyDict::new_bound(py);
    out.set_item("avg_mixture_regret", r.avg_mixture_regret)?;
    out.set_item("std_error", r.std_error)?;
    out.set_item("theoretical_floor", r.theoretical_floor)?;
    out.set_item("samples", r.samples)?;
    Ok(out.into())
}

// ---------------------------------------------------------------------------
// verification

/// Runs the inequality verification suite; returns one dict per check.
#[pyfunction]
#[pyo3(signature = (seed=0, budget="quick"))]
fn run_verify(py: Python<'_>, seed: u64, budget: &str) -> PyResult<Vec<Py<PyDict>>> {
    let budget = match budget {
        "quick" => verify::Budget::Quick,
        "full" => verify::Budget::Full,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown budget {other:?}; expected 'quick' or 'full'"
            )))
        }
    };
    verify::run_suite(seed, budget)
        .into_iter()
        .map(|r| {
            let d = PyDict::new_bound(py);
            d.set_item("check_name", r.check_name)?;
            d.set_item("cases_run", r.cases_run)?;
            d.set_item("max_violation", r.max_violation)?;
            d.set_item("passed", r.passed)?;
            d.set_item("seed", r.seed)?;
            Ok(d.into())
        })
        .collect()
}

#[pymodule]
fn fano_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(kl_bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(chi2_bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(hellinger2_bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(divergence, m)?)?;
    m.add_function(wrap_pyfunction!(lb_classic, m)?)?;
    m.add_function(wrap_pyfunction!(lb_refined, m)?)?;
    m.add_function(wrap_pyfunction!(lb_affine, m)?)?;
    m.add_function(wrap_pyfunction!(lb_kl_sqrt, m)?)?;
    m.add_function(wrap_pyfunction!(lb_chi2, m)?)?;
    m.add_function(wrap_pyfunction!(lb_hellinger, m)?)?;
    m.add_function(wrap_pyfunction!(bretagnolle_huber_q_lower, m)?)?;
    m.add_function(wrap_pyfunction!(pinsker_factor, m)?)?;
    m.add_function(wrap_pyfunction!(kl_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(binary_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(fano_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(haroutunian_q_lower, m)?)?;
    m.add_function(wrap_pyfunction!(birge_c, m)?)?;
    m.add_function(wrap_pyfunction!(birge_d, m)?)?;
    m.add_function(wrap_pyfunction!(massart_constant, m)?)?;
    m.add_function(wrap_pyfunction!(posterior_constant, m)?)?;
    m.add_function(wrap_pyfunction!(posterior_dd_bound, m)?)?;
    m.add_function(wrap_pyfunction!(psi_gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(sparse_regret_bound, m)?)?;
    m.add_function(wrap_pyfunction!(cramer_rate, m)?)?;
    m.add_function(wrap_pyfunction!(mc_regret, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
