//! Exact backward induction, all threshold rules, and a seeded simulation.

use bernoulli_stopping::oracle::{dp_solve, simulate, threshold_sweep};
use bernoulli_stopping::solver::last_success_problem;
use bernoulli_stopping::SuccessProfile;

fn main() {
    let problem = last_success_problem(&SuccessProfile::secretary(10).unwrap(), 1, 1).unwrap();
    let dp = dp_solve(&problem);
    println!("optimal value {:.9}, stop set {:?}", dp.value, dp.stop_set);

    let sweep = threshold_sweep(&problem);
    for (t, v) in &sweep.values {
        println!("  threshold {t:>2}: {v:.6}");
    }

    let est = simulate(&problem, &dp.stop_set, 1_000_000, 42);
    let z = (est.mean - dp.value) / est.std_error;
    println!(
        "simulated {:.6} ± {:.6} over {} runs (z = {z:.2})",
        est.mean, est.std_error, est.replicates
    );
}
