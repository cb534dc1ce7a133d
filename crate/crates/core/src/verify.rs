//! Brute-force certification of every inequality shipped by the crate.
//!
//! Each named check draws randomized cases and/or dense grids, measures
//! the worst observed violation of its inequality, and reports it
//! against a fixed tolerance: 1e-12 for exact-arithmetic identities and
//! closed-form agreements, 1e-10 for solved-bound grids, looser
//! problem-specific margins for asymptotic claims. Failures are data
//! (`passed = false`), never panics.
//!
//! Every check is reproducible from `(check_name, seed)`: the per-check
//! generator is derived by hashing the name into the suite seed, so
//! checks are independent of execution order.

use crate::applications::{
    build_sparse_env, cramer_rate, kl_quadratic_check, posterior_constant, posterior_dd_bound,
};
use crate::birge::{birge_c, birge_d, birge_r, massart_constant};
use crate::divergences::{
    chi2_bernoulli, divergence_finite, hellinger2_bernoulli, kl_bernoulli, FiniteDist, Generator,
};
use crate::extreal::ExtReal;
use crate::fano::{
    bayes_risk_lower, best_constant_alternative, fano_chi2, fano_hellinger, fano_kl, fano_kl_sqrt,
    haroutunian_q_lower, reduce, FamilyEntry, KlVariant,
};
use crate::kl_bounds::{
    binary_entropy, bretagnolle_huber_q_lower, chi2_solved, kl_inverse, lb_affine, lb_classic,
    lb_classic_with_constant, lb_pinsker_fano, lb_refined, lecam_hellinger, pinsker_factor,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::f64::consts::LN_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    Quick,
    Full,
}

impl Budget {
    /// Number of random cases for sampling-based checks.
    fn cases(self) -> u64 {
        match self {
            Budget::Quick => 1_000,
            Budget::Full => 100_000,
        }
    }

    /// Side length for grid-based checks.
    fn grid(self) -> usize {
        match self {
            Budget::Quick => 100,
            Budget::Full => 1_000,
        }
    }
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub check_name: String,
    pub cases_run: u64,
    pub max_violation: f64,
    pub passed: bool,
    pub seed: u64,
}

type CheckFn = fn(&mut ChaCha20Rng, Budget) -> (u64, f64);

pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    run: CheckFn,
}

fn name_seed(name: &str, seed: u64) -> u64 {
    // FNV-1a over the name, folded into the suite seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h ^ seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs a single check at the given suite seed.
pub fn run_check(check: &Check, seed: u64, budget: Budget) -> CheckReport {
    let mut rng = ChaCha20Rng::seed_from_u64(name_seed(check.name, seed));
    let (cases_run, max_violation) = (check.run)(&mut rng, budget);
    CheckReport {
        check_name: check.name.to_string(),
        cases_run,
        max_violation,
        passed: max_violation <= check.tolerance,
        seed,
    }
}

/// Runs the whole registry, in registry order.
pub fn run_suite(seed: u64, budget: Budget) -> Vec<CheckReport> {
    registry()
        .iter()
        .map(|c| run_check(c, seed, budget))
        .collect()
}

/// Mutation canary: the classic solved bound with its additive
/// constant corrupted from `ln 2` to `ln 1.9`. The resulting report
/// must fail, demonstrating that the grid check has teeth.
pub fn corrupted_classic_report(seed: u64, budget: Budget) -> CheckReport {
    let check = Check {
        name: "lb_classic_grid[ln 1.9]",
        tolerance: 1e-10,
        run: |rng, budget| classic_grid_with_constant(rng, budget, 1.9f64.ln()),
    };
    run_check(&check, seed, budget)
}

/// Uniform-simplex sample via exponential spacings; with probability
/// 0.2 a random proper subset of atoms is zeroed and the rest
/// renormalized, to exercise singular parts and maximal-slope handling.
pub fn random_dist(k: usize, rng: &mut ChaCha20Rng) -> FiniteDist {
    assert!(k >= 1);
    let mut w: Vec<f64> = (0..k).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    if k > 1 && rng.gen::<f64>() < 0.2 {
        let keep = rng.gen_range(0..k);
        for (i, wi) in w.iter_mut().enumerate() {
            if i != keep && rng.gen::<f64>() < 0.5 {
                *wi = 0.0;
            }
        }
    }
    FiniteDist::normalized(w).expect("positive mass by construction")
}

fn scalar_div(g: Generator, p: f64, q: f64) -> ExtReal {
    match g {
        Generator::Kl => kl_bernoulli(p, q),
        Generator::Chi2 => chi2_bernoulli(p, q),
        Generator::Hellinger => ExtReal::finite(hellinger2_bernoulli(p, q)),
    }
}

/// `lhs − rhs` as a violation measure for `lhs ≤ rhs` over extended
/// reals: infinite rhs can never be violated.
fn excess(lhs: ExtReal, rhs: ExtReal) -> f64 {
    match (lhs, rhs) {
        (_, ExtReal::Inf) => 0.0,
        (ExtReal::Inf, ExtReal::Finite(_)) => f64::INFINITY,
        (ExtReal::Finite(a), ExtReal::Finite(b)) => a - b,
    }
}

fn grid_01(n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |i| i as f64 / (n + 1) as f64)
}

// ---------------------------------------------------------------------------
// divergence checks

fn check_nonnegativity(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for _ in 0..budget.cases() {
        let k = rng.gen_range(1..=8);
        let p = random_dist(k, rng);
        let q = random_dist(k, rng);
        for g in Generator::ALL {
            let d = divergence_finite(g, &p, &q).unwrap();
            worst = worst.max(match d {
                ExtReal::Finite(x) => -x,
                ExtReal::Inf => f64::NEG_INFINITY,
            });
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_data_processing(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for _ in 0..budget.cases() {
        let k = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=4.min(k));
        let p = random_dist(k, rng);
        let q = random_dist(k, rng);
        let map: Vec<usize> = (0..k).map(|_| rng.gen_range(0..m)).collect();
        let (pp, pq) = (p.push_forward(&map, m), q.push_forward(&map, m));
        for g in Generator::ALL {
            let coarse = divergence_finite(g, &pp, &pq).unwrap();
            let fine = divergence_finite(g, &p, &q).unwrap();
            worst = worst.max(excess(coarse, fine));
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_random_variable_dpi(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    // div(E_P[Z], E_Q[Z]) <= Div_f(P,Q) for [0,1]-valued Z
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for _ in 0..budget.cases() {
        let k = rng.gen_range(1..=8);
        let p = random_dist(k, rng);
        let q = random_dist(k, rng);
        let z: Vec<f64> = (0..k).map(|_| rng.gen()).collect();
        let ep: f64 = p.weights().iter().zip(&z).map(|(&w, &v)| w * v).sum();
        let eq: f64 = q.weights().iter().zip(&z).map(|(&w, &v)| w * v).sum();
        for g in Generator::ALL {
            let full = divergence_finite(g, &p, &q).unwrap();
            worst = worst.max(excess(scalar_div(g, ep.min(1.0), eq.min(1.0)), full));
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_joint_convexity(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for _ in 0..budget.cases() {
        let k = rng.gen_range(1..=8);
        let (p1, q1) = (random_dist(k, rng), random_dist(k, rng));
        let (p2, q2) = (random_dist(k, rng), random_dist(k, rng));
        let lambda = rng.gen::<f64>();
        let pm = p1.mix(&p2, lambda);
        let qm = q1.mix(&q2, lambda);
        for g in Generator::ALL {
            let mixed = divergence_finite(g, &pm, &qm).unwrap();
            let split = divergence_finite(g, &p1, &q1).unwrap().scale(1.0 - lambda)
                + divergence_finite(g, &p2, &q2).unwrap().scale(lambda);
            worst = worst.max(excess(mixed, split));
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_bernoulli_agreement(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let n = budget.grid();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in grid_01(n) {
        for q in grid_01(n) {
            let pd = FiniteDist::new(vec![p, 1.0 - p]).unwrap();
            let qd = FiniteDist::new(vec![q, 1.0 - q]).unwrap();
            for g in Generator::ALL {
                let fine = divergence_finite(g, &pd, &qd).unwrap();
                let closed = scalar_div(g, p, q);
                worst = worst.max((fine.to_f64() - closed.to_f64()).abs());
                cases += 1;
            }
        }
    }
    (cases, worst)
}

fn check_kl_upper_bound(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    // kl(p,q) <= p ln(1/q) for p >= q > 0
    let n = budget.grid();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in grid_01(n) {
        for q in grid_01(n) {
            if p >= q {
                worst = worst.max(kl_bernoulli(p, q).to_f64() - p * (1.0 / q).ln());
                cases += 1;
            }
        }
    }
    (cases, worst)
}

// ---------------------------------------------------------------------------
// scalar solved-bound grids

fn classic_grid_with_constant(
    _rng: &mut ChaCha20Rng,
    budget: Budget,
    constant: f64,
) -> (u64, f64) {
    let n = budget.grid();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in grid_01(n) {
        for q in grid_01(n) {
            let kl = kl_bernoulli(p, q);
            let b = lb_classic_with_constant(kl, q, constant).unwrap();
            worst = worst.max(p - b.bound_on_p);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_lb_classic(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    classic_grid_with_constant(rng, budget, LN_2)
}

fn check_lb_refined(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let n = budget.grid();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in grid_01(n) {
        for q in grid_01(n) {
            let kl = kl_bernoulli(p, q);
            let refined = lb_refined(kl, q).unwrap().bound_on_p;
            let classic = lb_classic(kl, q).unwrap().bound_on_p;
            worst = worst.max(p - refined).max(refined - classic);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_lb_affine(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let n = budget.grid();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in grid_01(n) {
        for q in grid_01(n) {
            let b = lb_affine(kl_bernoulli(p, q), q).unwrap();
            worst = worst.max(p - b.bound_on_p);
            // the affine form dominates the refined numerator constant
            worst = worst.max((2.0 - q).ln() / (1.0 / q).ln() - (0.21 + 0.79 * q));
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_lb_kl_sqrt(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let n = budget.grid();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in grid_01(n) {
        for q in grid_01(n) {
            let kl = kl_bernoulli(p, q).to_f64();
            let tight = lb_pinsker_fano(kl_bernoulli(p, q), q).unwrap().bound_on_p;
            let plain = (q + (kl / -q.ln()).sqrt()).clamp(0.0, 1.0);
            worst = worst.max(p - tight).max(p - plain).max(tight - plain);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_chi2_solved(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let n = budget.grid();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in grid_01(n) {
        for q in grid_01(n) {
            let b = chi2_solved(chi2_bernoulli(p, q), q);
            worst = worst.max(p - b.bound_on_p);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_lecam(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let n = budget.grid();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in grid_01(n) {
        for q in grid_01(n) {
            let h2 = hellinger2_bernoulli(p, q);
            let simple = lecam_hellinger(h2, q, false).unwrap().bound_on_p;
            let sharp = lecam_hellinger(h2, q, true).unwrap().bound_on_p;
            worst = worst.max(p - simple).max(p - sharp).max(sharp - simple);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_pinsker_refined(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let n = budget.grid();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for q in grid_01(n) {
        let phi = pinsker_factor(q).to_f64();
        // phi dominates both 2 and ln(1/q)
        worst = worst.max(2.0 - phi).max((1.0 / q).ln() - phi);
        for p in grid_01(n) {
            let d = p - q;
            worst = worst.max(phi * d * d - kl_bernoulli(p, q).to_f64());
            cases += 1;
        }
        // optimality witness, away from the removable point q = 1/2
        if (1.0 - 2.0 * q).abs() > 0.1 {
            let t = 1.0 - 2.0 * q;
            let witness = kl_bernoulli(1.0 - q, q).to_f64() / (t * t);
            worst = worst.max((witness - phi).abs());
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_bretagnolle_huber(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    // 1 - |p-q| >= e^{-1/e} e^{-kl}, i.e. the solved q-lower bound
    // never exceeds q
    let n = budget.grid();
    let c = (-1.0 / std::f64::consts::E).exp();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in grid_01(n) {
        for q in grid_01(n) {
            let kl = kl_bernoulli(p, q);
            worst = worst.max(c * kl.neg_exp() - (1.0 - (p - q).abs()));
            worst = worst.max(bretagnolle_huber_q_lower(p, kl) - q);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_kl_inverse_roundtrip(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let steps = match budget {
        Budget::Quick => 32,
        Budget::Full => 100,
    };
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for i in 0..steps {
        // q log-spaced in [1e-6, ~0.63]
        let q = (1e-6f64).powf(1.0 - i as f64 / steps as f64) * 0.63f64.powf(i as f64 / steps as f64);
        for j in 0..steps {
            let y = 1e-8 * (1e9f64).powf(j as f64 / steps as f64);
            let p = kl_inverse(q, ExtReal::finite(y)).unwrap();
            let target = y.min((1.0 / q).ln());
            worst = worst.max((kl_bernoulli(p, q).to_f64() - target).abs());
            cases += 1;
        }
    }
    (cases, worst)
}

// ---------------------------------------------------------------------------
// family reductions and assembled bounds

struct RandomFamily {
    entries: Vec<FamilyEntry>,
    scalar_sum: ExtReal,
}

/// Draws a weighted family of distribution pairs with a random [0,1]
/// statistic each; `div` carries the full divergence, `scalar_sum` the
/// weighted Bernoulli divergence of the induced expectations.
fn random_family(g: Generator, rng: &mut ChaCha20Rng) -> RandomFamily {
    let members = rng.gen_range(2..=6);
    let alpha = random_dist(members, rng);
    let mut entries = Vec::with_capacity(members);
    let mut scalar_sum = ExtReal::ZERO;
    for m in 0..members {
        let k = rng.gen_range(1..=6);
        let p = random_dist(k, rng);
        let q = random_dist(k, rng);
        let z: Vec<f64> = (0..k).map(|_| rng.gen()).collect();
        let ep: f64 = p.weights().iter().zip(&z).map(|(&w, &v)| w * v).sum();
        let eq: f64 = q.weights().iter().zip(&z).map(|(&w, &v)| w * v).sum();
        let (ep, eq) = (ep.min(1.0), eq.min(1.0));
        let weight = alpha.weights()[m];
        scalar_sum = scalar_sum + scalar_div(g, ep, eq).scale(weight);
        entries.push(FamilyEntry {
            weight,
            p_exp: ep,
            q_exp: eq,
            div: divergence_finite(g, &p, &q).unwrap(),
        });
    }
    RandomFamily {
        entries,
        scalar_sum,
    }
}

fn check_reduction_chain(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    // div(p̄,q̄) <= Σ α_i div(p_i,q_i) <= Σ α_i Div_f(P_i,Q_i)
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for _ in 0..budget.cases() {
        for g in Generator::ALL {
            let fam = random_family(g, rng);
            let reduced = reduce(&fam.entries).unwrap();
            let left = scalar_div(g, reduced.p_bar, reduced.q_bar);
            worst = worst.max(excess(left, fam.scalar_sum));
            worst = worst.max(excess(fam.scalar_sum, reduced.d_bar));
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_fano_report_soundness(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for _ in 0..budget.cases() / 4 {
        let fam = random_family(Generator::Kl, rng);
        let reduced = reduce(&fam.entries).unwrap();
        if reduced.q_bar <= 0.0 || reduced.q_bar >= 1.0 {
            continue;
        }
        for variant in [KlVariant::Classic, KlVariant::Refined, KlVariant::Affine] {
            worst = worst.max(reduced.p_bar - fano_kl(&reduced, variant).unwrap().value);
            cases += 1;
        }
        for max_den in [false, true] {
            worst = worst.max(reduced.p_bar - fano_kl_sqrt(&reduced, max_den).unwrap().value);
            cases += 1;
        }

        let fam = random_family(Generator::Chi2, rng);
        let reduced = reduce(&fam.entries).unwrap();
        if reduced.q_bar > 0.0 && reduced.q_bar < 1.0 {
            worst = worst.max(reduced.p_bar - fano_chi2(&reduced).unwrap().value);
            cases += 1;
        }

        let fam = random_family(Generator::Hellinger, rng);
        let reduced = reduce(&fam.entries).unwrap();
        if reduced.q_bar > 0.0 && reduced.q_bar < 1.0 {
            worst = worst.max(reduced.p_bar - fano_hellinger(&reduced).unwrap().value);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_compensation_equality(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    // the mixture alternative minimizes the weighted KL over challengers
    let rounds = budget.cases() / 20;
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for _ in 0..rounds {
        let members = rng.gen_range(2..=5);
        let k = rng.gen_range(2..=6);
        let dists: Vec<FiniteDist> = (0..members).map(|_| random_dist(k, rng)).collect();
        let alpha = FiniteDist::uniform(members);
        let Ok((_, at_mixture, cap)) = best_constant_alternative(Generator::Kl, &dists, &alpha)
        else {
            continue;
        };
        worst = worst.max(excess(at_mixture, cap));
        for _ in 0..20 {
            let challenger = random_dist(k, rng);
            let mut at_challenger = ExtReal::ZERO;
            for (d, &a) in dists.iter().zip(alpha.weights()) {
                at_challenger =
                    at_challenger + divergence_finite(Generator::Kl, d, &challenger).unwrap().scale(a);
            }
            worst = worst.max(excess(at_mixture, at_challenger));
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_best_constant_cap(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for _ in 0..budget.cases() / 10 {
        let members = rng.gen_range(2..=5);
        let k = rng.gen_range(2..=6);
        let dists: Vec<FiniteDist> = (0..members).map(|_| random_dist(k, rng)).collect();
        let mut alpha = random_dist(members, rng);
        if alpha.weights().iter().any(|&a| a <= 0.0) {
            alpha = FiniteDist::uniform(members);
        }
        for g in Generator::ALL {
            let (_, avg, cap) = best_constant_alternative(g, &dists, &alpha).unwrap();
            worst = worst.max(excess(avg, cap));
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_partition_ordering(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    // refined numerator ln(2 - 1/N) never exceeds ln 2, so the refined
    // partition bound sits between the averaged posterior mass and the
    // classic bound
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    let steps = budget.grid();
    for n in 2..=64u64 {
        let q = 1.0 / n as f64;
        for i in 0..steps {
            let k_bar = 3.0 * i as f64 / steps as f64;
            let refined = lb_refined(ExtReal::finite(k_bar), q).unwrap().bound_on_p;
            let classic = lb_classic(ExtReal::finite(k_bar), q).unwrap().bound_on_p;
            worst = worst.max(refined - classic);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_haroutunian(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    // E_Q[Z] >= exp(-(KL + ln 2)/E_P[Z]) on random pairs and statistics
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for _ in 0..budget.cases() {
        let k = rng.gen_range(1..=8);
        let p = random_dist(k, rng);
        let q = random_dist(k, rng);
        let z: Vec<f64> = (0..k).map(|_| rng.gen()).collect();
        let ep: f64 = p.weights().iter().zip(&z).map(|(&w, &v)| w * v).sum();
        let eq: f64 = q.weights().iter().zip(&z).map(|(&w, &v)| w * v).sum();
        let kl = divergence_finite(Generator::Kl, &p, &q).unwrap();
        worst = worst.max(haroutunian_q_lower(ep.min(1.0), kl) - eq);
        cases += 1;
    }
    (cases, worst)
}

fn check_bayes_risk(rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    // the generalized Fano bound never exceeds the exact Bayes risk of
    // the best decision rule, computed by per-outcome minimization
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for _ in 0..budget.cases() / 10 {
        let n_theta = rng.gen_range(2..=5);
        let n_act = rng.gen_range(2..=4);
        let k = rng.gen_range(2..=6);
        let prior = random_dist(n_theta, rng);
        let models: Vec<FiniteDist> = (0..n_theta).map(|_| random_dist(k, rng)).collect();
        let loss: Vec<Vec<f64>> = (0..n_theta)
            .map(|_| (0..n_act).map(|_| rng.gen()).collect())
            .collect();
        let mut mix = vec![0.0; k];
        for (m, &nu) in models.iter().zip(prior.weights()) {
            for (acc, &w) in mix.iter_mut().zip(m.weights()) {
                *acc += nu * w;
            }
        }
        let mixture = FiniteDist::normalized(mix).unwrap();
        let kls: Vec<ExtReal> = models
            .iter()
            .map(|m| divergence_finite(Generator::Kl, m, &mixture).unwrap())
            .collect();
        let Ok(bound) = bayes_risk_lower(&prior, &loss, &kls) else {
            continue;
        };
        let mut exact = 0.0;
        for omega in 0..k {
            exact += (0..n_act)
                .map(|a| {
                    (0..n_theta)
                        .map(|t| prior.weights()[t] * models[t].weights()[omega] * loss[t][a])
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min);
        }
        worst = worst.max(bound.bound - exact);
        cases += 1;
    }
    (cases, worst)
}

// ---------------------------------------------------------------------------
// constants and applications

fn check_birge_residuals(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let max_n = match budget {
        Budget::Quick => 40,
        Budget::Full => 100,
    };
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    let massart = massart_constant();
    let mut prev_c = 1.0;
    let mut prev_d = 1.0;
    for n in 2..=max_n {
        let c = birge_c(n).unwrap();
        let g = binary_entropy(c) / c + (-c).ln_1p();
        worst = worst.max((g - (-1.0 / n as f64).ln_1p()).abs());
        let d = birge_d(n).unwrap();
        worst = worst.max(birge_r(n, d).unwrap());
        worst = worst.max(-birge_r(n, d + 1e-6).unwrap()); // must be > 0
        // ordering and monotonicity
        worst = worst.max(d - c).max(c - massart).max(0.5 - c);
        worst = worst.max(c - prev_c).max(d - prev_d);
        prev_c = c;
        prev_d = d;
        cases += 1;
    }
    (cases, worst)
}

fn check_sparse_env_chain(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let configs: &[(usize, usize)] = match budget {
        Budget::Quick => &[(4, 2), (6, 3), (8, 2)],
        Budget::Full => &[(4, 2), (6, 3), (8, 2), (8, 4), (10, 5), (12, 3)],
    };
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for &(n, s) in configs {
        for frac in [0.2, 0.5, 0.8] {
            let eps = frac * s as f64 / (2.0 * n as f64);
            let env = build_sparse_env(n, s, eps).unwrap();
            let theta = 0.5 - eps * n as f64 / s as f64;
            let per_arm = s as f64 / n as f64 * kl_bernoulli(theta, 0.5).to_f64();
            for i in 0..n {
                let kl = divergence_finite(Generator::Kl, &env.envs[i], &env.base)
                    .unwrap()
                    .to_f64();
                // the two-step averaging is exact here
                worst = worst.max((kl - per_arm).abs());
                cases += 1;
            }
            // quadratic cap on the planted Bernoulli gap
            let cap = 4.0 * (n * n) as f64 * eps * eps / (s * s) as f64;
            worst = worst.max(kl_bernoulli(theta, 0.5).to_f64() - cap);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_chernoff_sandwich(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let ns: &[u64] = match budget {
        Budget::Quick => &[100, 1_000, 10_000],
        Budget::Full => &[100, 1_000, 10_000, 100_000],
    };
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for &(theta, x) in &[(0.5, 0.75), (0.3, 0.5), (0.1, 0.4)] {
        for &n in ns {
            let r = cramer_rate(theta, x, n).unwrap();
            worst = worst.max(r.empirical_rate - r.limit_rate);
            let gap = r.limit_rate - r.empirical_rate;
            worst = worst.max(gap - 10.0 * (n as f64).ln() / n as f64);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_posterior_constants(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let max_d = match budget {
        Budget::Quick => 20,
        Budget::Full => 50,
    };
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    let floor = 1.0f64.exp().sqrt() / 8.0 - 1e-6;
    let mut prev = f64::INFINITY;
    for d in 1..=max_d {
        let (c_d, _) = posterior_constant(d).unwrap();
        worst = worst.max(c_d - prev).max(floor - c_d);
        prev = c_d;
        cases += 1;
    }
    (cases, worst)
}

fn check_kl_quadratic(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let n = budget.grid();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in grid_01(n) {
        for eps in grid_01(n) {
            let eps = eps * p;
            if eps <= 0.0 || eps >= p {
                continue;
            }
            let (lhs, rhs) = kl_quadratic_check(p, eps).unwrap();
            worst = worst.max(lhs - rhs);
            cases += 1;
        }
    }
    (cases, worst)
}

fn check_dd_bound_monotone(_rng: &mut ChaCha20Rng, budget: Budget) -> (u64, f64) {
    let steps = budget.grid() / 10;
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for i in 0..steps {
        let psi = i as f64 / steps as f64;
        let next_psi = psi + 1.0 / steps as f64;
        for &n in &[1u64, 2, 5, 10] {
            for &c in &[1.5, 2.0, 4.0] {
                let here = posterior_dd_bound(ExtReal::finite(psi), n, c).unwrap();
                worst = worst
                    .max(posterior_dd_bound(ExtReal::finite(next_psi), n, c).unwrap() - here)
                    .max(posterior_dd_bound(ExtReal::finite(psi), n + 1, c).unwrap() - here)
                    .max(posterior_dd_bound(ExtReal::finite(psi), n, c + 0.1).unwrap() - here);
                worst = worst.max(here - 0.5); // always below 1/2
                cases += 1;
            }
        }
    }
    (cases, worst)
}

/// The fixed check registry, in report order.
pub fn registry() -> Vec<Check> {
    fn check(name: &'static str, tolerance: f64, run: CheckFn) -> Check {
        Check {
            name,
            tolerance,
            run,
        }
    }
    vec![
        check("divergence_nonnegative", 1e-12, check_nonnegativity),
        check("data_processing", 1e-12, check_data_processing),
        check("random_variable_dpi", 1e-12, check_random_variable_dpi),
        check("joint_convexity", 1e-12, check_joint_convexity),
        check("bernoulli_agreement", 1e-12, check_bernoulli_agreement),
        check("kl_upper_p_ln_inv_q", 1e-12, check_kl_upper_bound),
        check("lb_classic_grid", 1e-10, check_lb_classic),
        check("lb_refined_grid", 1e-10, check_lb_refined),
        check("lb_affine_grid", 1e-10, check_lb_affine),
        check("lb_kl_sqrt_grid", 1e-10, check_lb_kl_sqrt),
        check("chi2_solved_grid", 1e-10, check_chi2_solved),
        check("lecam_hellinger_grid", 1e-10, check_lecam),
        check("pinsker_refined", 1e-12, check_pinsker_refined),
        check("bretagnolle_huber_grid", 1e-10, check_bretagnolle_huber),
        check("kl_inverse_roundtrip", 1e-9, check_kl_inverse_roundtrip),
        check("reduction_chain", 1e-12, check_reduction_chain),
        check("fano_report_soundness", 1e-10, check_fano_report_soundness),
        check("compensation_equality", 1e-12, check_compensation_equality),
        check("best_constant_cap", 1e-12, check_best_constant_cap),
        check("partition_ordering", 1e-12, check_partition_ordering),
        check("haroutunian_lower", 1e-12, check_haroutunian),
        check("bayes_risk_lower", 1e-10, check_bayes_risk),
        check("birge_residuals", 1e-9, check_birge_residuals),
        check("sparse_env_chain", 1e-10, check_sparse_env_chain),
        check("chernoff_sandwich", 0.0, check_chernoff_sandwich),
        check("posterior_constants", 1e-9, check_posterior_constants),
        check("kl_quadratic", 1e-12, check_kl_quadratic),
        check("dd_bound_monotone", 1e-12, check_dd_bound_monotone),
    ]
}
