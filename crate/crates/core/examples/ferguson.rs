//! When is one-step look-ahead optimal? Unimodality and Ferguson's
//! conditions, and a bimodal payoff where it is not.

use bernoulli_stopping::oracle::dp_solve;
use bernoulli_stopping::{ferguson_check, myopic_stop_set, StoppingProblem, SuccessProfile};

fn report(name: &str, problem: &StoppingProblem) {
    let sol = myopic_stop_set(problem);
    let fg = ferguson_check(&sol.f, &sol.g, None).unwrap();
    let dp = dp_solve(problem);
    println!("{name}");
    println!("  certificates {:?}", sol.certificates);
    println!(
        "  g - f nonincreasing: {}, g / f nonincreasing: {}",
        fg.diff_nonincreasing, fg.ratio_nonincreasing
    );
    println!(
        "  myopic stop set {:?}, value {:.6}",
        sol.stop_set, sol.value
    );
    println!(
        "  optimal stop set {:?}, value {:.6}",
        dp.stop_set, dp.value
    );
}

fn main() {
    let p = SuccessProfile::finite(vec![0.3, 0.5, 0.4, 0.6, 0.5]).unwrap();
    let rising = StoppingProblem::from_trial_payoffs(p, &[0.1, 0.3, 0.5, 0.8, 1.0], 0.0).unwrap();
    report("rising payoff", &rising);

    let p = SuccessProfile::finite(vec![0.3, 0.9, 0.5, 0.4, 0.8]).unwrap();
    let f = [0.1, 0.8, 0.2, 1.0, 1.0];
    let bimodal = StoppingProblem::from_trial_payoffs(p, &f, 0.0).unwrap();
    println!();
    report("bimodal payoff", &bimodal);
}
