//! Property-based tests: randomized invariants that complement the
//! fixed-value unit tests in each module.

use proptest::prelude::*;

use fano_core::divergences::{chi2_bernoulli, hellinger2_bernoulli, kl_bernoulli};
use fano_core::fano::{fano_kl, fano_kl_sqrt, reduce, FamilyEntry, KlVariant};
use fano_core::kl_bounds::{
    binary_entropy, bretagnolle_huber_q_lower, chi2_solved, kl_inverse, lb_affine, lb_classic,
    lb_pinsker_fano, lb_refined, lecam_hellinger, pinsker_factor,
};
use fano_core::ExtReal;

fn interior() -> impl Strategy<Value = f64> {
    0.001f64..0.999
}

proptest! {
    #[test]
    fn scalar_divergences_nonnegative(p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        prop_assert!(kl_bernoulli(p, q) >= ExtReal::ZERO);
        prop_assert!(chi2_bernoulli(p, q) >= ExtReal::ZERO);
        prop_assert!(hellinger2_bernoulli(p, q) >= 0.0);
    }

    #[test]
    fn scalar_divergences_vanish_on_diagonal(p in 0.0f64..=1.0) {
        prop_assert_eq!(kl_bernoulli(p, p), ExtReal::ZERO);
        prop_assert_eq!(chi2_bernoulli(p, p), ExtReal::ZERO);
        prop_assert_eq!(hellinger2_bernoulli(p, p), 0.0);
    }

    #[test]
    fn hellinger_symmetric_and_bounded(p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        let h = hellinger2_bernoulli(p, q);
        prop_assert!((0.0..=2.0).contains(&h));
        prop_assert!((h - hellinger2_bernoulli(q, p)).abs() <= 1e-15);
    }

    #[test]
    fn ordering_kl_dominates_hellinger(p in interior(), q in interior()) {
        // h^2 <= kl and h^2 <= chi^2 on the interior
        let kl = kl_bernoulli(p, q).to_f64();
        let chi2 = chi2_bernoulli(p, q).to_f64();
        let h2 = hellinger2_bernoulli(p, q);
        prop_assert!(h2 <= kl + 1e-12);
        prop_assert!(kl <= chi2 + 1e-12);
    }

    #[test]
    fn solved_bounds_dominate_p(p in interior(), q in interior()) {
        let kl = kl_bernoulli(p, q);
        let chi2 = chi2_bernoulli(p, q);
        let h2 = hellinger2_bernoulli(p, q);
        let tol = 1e-10;
        prop_assert!(lb_classic(kl, q).unwrap().bound_on_p >= p - tol);
        prop_assert!(lb_refined(kl, q).unwrap().bound_on_p >= p - tol);
        prop_assert!(lb_affine(kl, q).unwrap().bound_on_p >= p - tol);
        prop_assert!(lb_pinsker_fano(kl, q).unwrap().bound_on_p >= p - tol);
        prop_assert!(chi2_solved(chi2, q).bound_on_p >= p - tol);
        prop_assert!(lecam_hellinger(h2, q, false).unwrap().bound_on_p >= p - tol);
        prop_assert!(lecam_hellinger(h2, q, true).unwrap().bound_on_p >= p - tol);
        // the generalized inverse is the sharpest of the solved forms
        prop_assert!(kl_inverse(q, kl).unwrap() >= p - 1e-9);
    }

    #[test]
    fn refined_never_looser_than_classic(p in interior(), q in interior()) {
        let kl = kl_bernoulli(p, q);
        prop_assert!(
            lb_refined(kl, q).unwrap().bound_on_p
                <= lb_classic(kl, q).unwrap().bound_on_p + 1e-15
        );
    }

    #[test]
    fn sharp_hellinger_never_looser_than_simple(p in interior(), q in interior()) {
        let h2 = hellinger2_bernoulli(p, q);
        prop_assert!(
            lecam_hellinger(h2, q, true).unwrap().bound_on_p
                <= lecam_hellinger(h2, q, false).unwrap().bound_on_p + 1e-12
        );
    }

    #[test]
    fn refined_pinsker_quadratic(p in interior(), q in interior()) {
        let kl = kl_bernoulli(p, q).to_f64();
        let quad = pinsker_factor(q).to_f64() * (p - q) * (p - q);
        prop_assert!(quad <= kl + 1e-12);
        // the factor dominates the classical Pinsker constant 2
        prop_assert!(pinsker_factor(q).to_f64() >= 2.0 - 1e-12);
    }

    #[test]
    fn bretagnolle_huber_sound(p in interior(), q in interior()) {
        prop_assert!(bretagnolle_huber_q_lower(p, kl_bernoulli(p, q)) <= q + 1e-12);
    }

    #[test]
    fn kl_inverse_monotone_and_feasible(
        q in interior(),
        y1 in 0.0f64..3.0,
        y2 in 0.0f64..3.0,
    ) {
        let (lo, hi) = if y1 <= y2 { (y1, y2) } else { (y2, y1) };
        let p_lo = kl_inverse(q, ExtReal::finite(lo)).unwrap();
        let p_hi = kl_inverse(q, ExtReal::finite(hi)).unwrap();
        prop_assert!(p_lo >= q);
        prop_assert!(p_lo <= p_hi + 1e-12);
        // feasibility: kl at the returned point does not exceed y
        prop_assert!(kl_bernoulli(p_lo, q).to_f64() <= lo + 1e-9);
    }

    #[test]
    fn binary_entropy_bounded_and_symmetric(p in 0.0f64..=1.0) {
        let h = binary_entropy(p);
        prop_assert!((0.0..=std::f64::consts::LN_2 + 1e-15).contains(&h));
        prop_assert!((h - binary_entropy(1.0 - p)).abs() <= 1e-12);
    }

    #[test]
    fn extreal_scale_and_order(x in 0.0f64..1e6, c in 0.0f64..1e3) {
        let fx = ExtReal::finite(x);
        prop_assert!((fx.scale(c).to_f64() - c * x).abs() <= 1e-9 * (1.0 + c * x));
        prop_assert!(fx < ExtReal::Inf);
        prop_assert_eq!(ExtReal::Inf.scale(0.0), ExtReal::ZERO);
        prop_assert_eq!(fx + ExtReal::Inf, ExtReal::Inf);
    }

    #[test]
    fn fano_reports_sound_for_bernoulli_families(
        ps in proptest::collection::vec(interior(), 2..6),
        qs in proptest::collection::vec(interior(), 2..6),
    ) {
        // a family carrying exactly the scalar kl of its expectations
        // is always admissible, so every report must dominate p_bar
        let m = ps.len().min(qs.len());
        let w = 1.0 / m as f64;
        let entries: Vec<FamilyEntry> = ps
            .iter()
            .zip(&qs)
            .take(m)
            .map(|(&p, &q)| FamilyEntry {
                weight: w,
                p_exp: p,
                q_exp: q,
                div: kl_bernoulli(p, q),
            })
            .collect();
        let reduced = reduce(&entries).unwrap();
        prop_assume!(reduced.q_bar > 0.0 && reduced.q_bar < 1.0);
        for variant in [KlVariant::Classic, KlVariant::Refined, KlVariant::Affine] {
            let r = fano_kl(&reduced, variant).unwrap();
            prop_assert!(r.value >= reduced.p_bar - 1e-10);
        }
        for max_den in [false, true] {
            let r = fano_kl_sqrt(&reduced, max_den).unwrap();
            prop_assert!(r.value >= reduced.p_bar - 1e-10);
        }
    }
}
