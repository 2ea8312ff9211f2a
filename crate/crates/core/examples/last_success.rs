//! Stopping on the m-th last success, and on any of the l-th to m-th last.

use bernoulli_stopping::oracle::dp_solve;
use bernoulli_stopping::solver::last_success_problem;
use bernoulli_stopping::{solve_l_to_m, solve_mth_last, SuccessProfile};

fn main() {
    let secretary = SuccessProfile::secretary(10).unwrap();
    let sol = solve_mth_last(&secretary, 1).unwrap();
    let cf = sol.closed_form.as_ref().unwrap();
    println!("secretary, N = 10");
    println!(
        "  stop from trial {:?}, win probability {:.6}",
        sol.threshold, sol.value
    );
    println!(
        "  closed-form index {} implies threshold {}",
        cf.index, cf.implied_threshold
    );

    let profile = SuccessProfile::finite(vec![
        0.9, 0.2, 0.35, 0.6, 0.15, 0.5, 0.25, 0.4, 0.3, 0.45, 0.1, 0.2,
    ])
    .unwrap();
    println!();
    println!(" l  m  threshold  value     oracle");
    for m in 1..=3 {
        for ell in 1..=m {
            let sol = solve_l_to_m(&profile, ell, m).unwrap();
            let dp = dp_solve(&last_success_problem(&profile, ell, m).unwrap());
            println!(
                "{ell:>2} {m:>2}  {:>9}  {:.6}  {:.6}",
                sol.threshold.unwrap(),
                sol.value,
                dp.value
            );
        }
    }
}
