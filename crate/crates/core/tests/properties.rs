mod common;

use bernoulli_stopping::chain::Decomposition;
use bernoulli_stopping::cli::ProblemFile;
use bernoulli_stopping::oracle::{dp_solve, rule_value, simulate, threshold_sweep};
use bernoulli_stopping::profiles::{odds, truncate_geometric, ConditionStatus};
use bernoulli_stopping::sequences::{
    candidate_levels, is_unimodal_by_levels, sign_changes_shifted,
};
use bernoulli_stopping::solver::last_success_problem;
use bernoulli_stopping::totalpos::binomial;
use bernoulli_stopping::*;
use proptest::prelude::*;

fn probs(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001f64..0.95, 1..=max_n)
}

fn problem(max_n: usize) -> impl Strategy<Value = StoppingProblem> {
    probs(max_n).prop_flat_map(|p| {
        let n = p.len();
        (Just(p), prop::collection::vec(0.0f64..1.0, n), 0.0f64..1.0).prop_map(|(p, f, f_inf)| {
            StoppingProblem::from_trial_payoffs(SuccessProfile::finite(p).unwrap(), &f, f_inf)
                .unwrap()
        })
    })
}

// payoff rising to a random mode and falling after it, f_0 = 0
fn unimodal_problem(max_n: usize) -> impl Strategy<Value = StoppingProblem> {
    probs(max_n).prop_flat_map(|p| {
        let n = p.len();
        (Just(p), prop::collection::vec(0.0f64..1.0, n + 1), 0..=n).prop_map(|(p, steps, mode)| {
            let mut f = Vec::with_capacity(p.len() + 1);
            let mut x = 0.0;
            for (k, s) in steps.iter().enumerate() {
                x = if k < mode { x + s } else { (x - s).max(0.0) };
                f.push(x);
            }
            let f_inf = f.pop().unwrap();
            StoppingProblem::from_trial_payoffs(SuccessProfile::finite(p).unwrap(), &f, f_inf)
                .unwrap()
        })
    })
}

// small integers give exact ties and plateaus
fn grid_sequence() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0i32..6).prop_map(f64::from), 1..12)
}

fn upward_closed(set: &[usize], n: usize) -> bool {
    set.first().is_none_or(|&t| set.len() == n + 1 - t)
}

fn positive_matrix_from_pattern(diag_left: &[f64], diag_right: &[f64]) -> Matrix {
    let o = Decomposition::expected_pattern(diag_left.len());
    Matrix::diagonal(diag_left)
        .mul(&o)
        .unwrap()
        .mul(&Matrix::diagonal(diag_right))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn level_counts_match_bracketing_candidate(u in grid_sequence(), lambda in -1.0f64..7.0) {
        prop_assume!(u.iter().all(|x| (x - lambda).abs() > 1e-9));
        let mut distinct = u.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        let bracket = distinct.iter().filter(|&&x| x < lambda).count();
        let level = candidate_levels(&u)[bracket];
        let direct = sign_changes(&u.iter().map(|x| x - lambda).collect::<Vec<_>>());
        prop_assert_eq!(direct, sign_changes_shifted(&u, level));
        prop_assert!(direct <= lambda_profile(&u).max_changes);
    }

    #[test]
    fn unimodality_matches_level_characterisation(u in grid_sequence()) {
        prop_assert_eq!(is_unimodal(&u), is_unimodal_by_levels(&u));
    }

    #[test]
    fn unimodality_invariant_under_affine_maps(
        u in grid_sequence(),
        scale in 0.1f64..10.0,
        shift in -10.0f64..10.0,
    ) {
        let v: Vec<f64> = u.iter().map(|x| scale * x + shift).collect();
        prop_assert_eq!(is_unimodal(&u), is_unimodal(&v));
    }

    #[test]
    fn monotone_sequences_are_unimodal(mut u in prop::collection::vec(-5.0f64..5.0, 1..20)) {
        u.sort_by(f64::total_cmp);
        prop_assert!(is_unimodal(&u));
        u.reverse();
        prop_assert!(is_unimodal(&u));
    }

    #[test]
    fn odds_invert_probabilities(p in probs(40)) {
        let profile = SuccessProfile::finite(p.clone()).unwrap();
        let r = odds(&profile).unwrap();
        for (&pk, &rk) in p.iter().zip(r.as_slice()) {
            let back = rk / (1.0 + rk);
            prop_assert!((back - pk).abs() <= 1e-14 * pk);
        }
    }

    #[test]
    fn geometric_truncation_bounds(c in 0.05f64..1.0, q in 0.05f64..0.95, eps in 1e-9f64..1e-2) {
        let p = truncate_geometric(c, q, eps).unwrap();
        let tail = p.tail_bound().unwrap();
        prop_assert!(tail <= eps);
        let total: f64 = p.probs().iter().sum();
        prop_assert!(total + tail >= c * q / (1.0 - q) - 1e-15);
    }

    #[test]
    fn probability_condition_needs_tail_bound(pb in problem(20)) {
        let untailed = SuccessProfile::new(pb.profile().probs().to_vec(), None).unwrap();
        let pb = StoppingProblem::new(untailed, pb.payoff().clone()).unwrap();
        prop_assert_ne!(existence_check(&pb).summable_probs, ConditionStatus::Certified);
    }

    #[test]
    fn rows_sum_to_one_exactly(p in probs(60)) {
        let m = transition_matrix(&SuccessProfile::finite(p).unwrap()).unwrap();
        for i in 0..m.dim() {
            prop_assert_eq!(m.row(i).iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn continuation_decreases_exactly_where_stopping_pays(pb in problem(30)) {
        let g = continuation_backward(&pb);
        for k in 1..=pb.horizon() {
            let (f, gk) = (pb.f(k), g.get(k));
            prop_assume!((f - gk).abs() > 1e-9 * f.abs().max(gk.abs()));
            prop_assert_eq!(g.get(k - 1) >= g.get(k), f >= gk);
        }
    }

    #[test]
    fn tp_closed_under_products(
        dims in 2usize..6,
        seeds in prop::collection::vec(0.1f64..3.0, 20),
    ) {
        let take = |o: usize| seeds[o..o + dims].to_vec();
        let a = positive_matrix_from_pattern(&take(0), &take(5));
        let b = positive_matrix_from_pattern(&take(10), &take(14));
        let r = dims.min(3);
        let (ta, _) = is_tp(&a, r, 1e-10).unwrap();
        let (tb, _) = is_tp(&b, r, 1e-10).unwrap();
        prop_assert!(ta && tb);
        prop_assert!(is_tp(&a.mul(&b).unwrap(), r, 1e-10).unwrap().0);
    }

    #[test]
    fn tp_is_monotone_in_order(rows in prop::collection::vec(prop::collection::vec(0.0f64..5.0, 4), 4)) {
        let m = Matrix::from_rows(&rows).unwrap();
        for r in 2..=4 {
            if is_tp(&m, r, 1e-10).unwrap().0 {
                prop_assert!(is_tp(&m, r - 1, 1e-10).unwrap().0);
            }
        }
    }

    #[test]
    fn exhaustive_minor_counts(d in 1usize..7) {
        let m = Matrix::identity(d);
        let (_, report) = is_tp(&m, d.min(4), 1e-10).unwrap();
        for stats in &report.per_order {
            prop_assert!(!stats.sampled);
            prop_assert_eq!(stats.checked, binomial(d, stats.order).pow(2));
        }
    }

    #[test]
    fn coarse_symmetric_function_bound(p in probs(25), m in 1usize..5) {
        let t = esp_table(&SuccessProfile::finite(p).unwrap(), m).unwrap();
        let e1 = t.e(1, 1);
        prop_assert!(t.e(m, 1) <= e1.powi(m as i32) * (1.0 + 1e-12));
    }

    #[test]
    fn myopic_optimal_under_unimodality(pb in prop_oneof![problem(30), unimodal_problem(30)]) {
        let sol = myopic_stop_set(&pb);
        let c = sol.certificates;
        prop_assume!(c.f_unimodal || c.g_unimodal);
        let dp = dp_solve(&pb);
        prop_assert!((sol.value - dp.value).abs() <= 1e-10);
        // the stop sets agree away from near-ties with the optimal continuation
        for k in 1..=pb.horizon() {
            let (f, ck) = (pb.f(k), dp.continuation[k]);
            if (f - ck).abs() > 1e-9 * f.abs().max(ck.abs()) {
                prop_assert_eq!(sol.stops_at(k), dp.stop_set.contains(&k));
            }
        }
    }

    #[test]
    fn unimodal_continuation_gives_threshold_at_its_mode(pb in unimodal_problem(30)) {
        let sol = myopic_stop_set(&pb);
        prop_assume!(sol.certificates.g_unimodal);
        prop_assert!(upward_closed(&sol.stop_set, pb.horizon()));
        if let Some(t) = sol.threshold {
            let max_g = sol.g.finite().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert_eq!(sol.value, sol.g.get(t - 1));
            prop_assert!((sol.value - max_g).abs() <= 1e-12 * max_g.abs().max(1e-300));
        }
    }

    #[test]
    fn decreasing_difference_gives_threshold_rule(pb in problem(30)) {
        let sol = myopic_stop_set(&pb);
        if sol.certificates.ferguson_diff {
            prop_assert!(sol.certificates.monotone_stop_set);
        }
    }

    #[test]
    fn classical_odds_rule(p in probs(40)) {
        let profile = SuccessProfile::finite(p).unwrap();
        let r = odds(&profile).unwrap();
        let r = r.as_slice();
        let n = r.len();
        // classical rule: start at the last k whose remaining odds sum to at least 1
        let tail = |k: usize| r[k - 1..].iter().sum::<f64>();
        prop_assume!((1..=n).all(|k| (tail(k) - 1.0).abs() > 1e-9));
        let start = (1..=n).rev().find(|&k| tail(k) >= 1.0).unwrap_or(1);

        let sol = solve_mth_last(&profile, 1).unwrap();
        prop_assert_eq!(sol.threshold, Some(start));
        let sweep = threshold_sweep(&last_success_problem(&profile, 1, 1).unwrap());
        prop_assert!(sweep.argmax.contains(&start));
    }

    #[test]
    fn one_to_one_range_is_mth_last(p in probs(25), m in 1usize..4) {
        let profile = SuccessProfile::finite(p).unwrap();
        prop_assert_eq!(solve_l_to_m(&profile, m, m).unwrap(), solve_mth_last(&profile, m).unwrap());
    }

    #[test]
    fn canonical_problem_file_round_trips(p in probs(20), ell in 1usize..3, extra in 0usize..2) {
        let file = ProblemFile::parse(&format!(
            r#"{{"profile": {{"probs": {p:?}}}, "objective": {{"kind": "l_to_m", "l": {ell}, "m": {}}}}}"#,
            ell + extra
        )).unwrap();
        let rp = file.resolve().unwrap();
        let again = ProblemFile::parse(&rp.canonical().to_json()).unwrap().resolve().unwrap();
        prop_assert_eq!(again.problem, rp.problem);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_value_ordering(pb in problem(15), seed in any::<u64>()) {
        let dp = dp_solve(&pb);
        let sweep = threshold_sweep(&pb);
        prop_assert!(dp.value >= sweep.best_value - 1e-12);
        let n = pb.horizon();
        let t = 1 + (seed as usize) % (n + 1);
        let rule: Vec<usize> = (t..=n).collect();
        let est = simulate(&pb, &rule, 4000, seed);
        prop_assert!(sweep.best_value >= est.mean - 4.0 * est.std_error - 1e-12);
        prop_assert!((rule_value(&pb, &rule) - est.mean).abs() <= 5.0 * est.std_error + 1e-12);
    }

    #[test]
    fn simulation_reproducible(pb in problem(15), seed in any::<u64>()) {
        let rule: Vec<usize> = (1..=pb.horizon()).collect();
        prop_assert_eq!(simulate(&pb, &rule, 20_000, seed), simulate(&pb, &rule, 20_000, seed));
    }
}
