//! Building success profiles and checking that an optimal rule exists.

use bernoulli_stopping::profiles::{odds, truncate_geometric};
use bernoulli_stopping::{existence_check, StoppingProblem, SuccessProfile};

fn main() {
    let geo = truncate_geometric(0.5, 0.5, 1e-6).unwrap();
    println!(
        "geometric c = 0.5, q = 0.5: {} trials, tail bound {:.3e}",
        geo.len(),
        geo.tail_bound().unwrap()
    );
    let r = odds(&geo).unwrap();
    println!("first odds {:?}", &r.as_slice()[..4]);

    let f: Vec<f64> = (1..=geo.len()).map(|k| 1.0 / k as f64).collect();
    let problem = StoppingProblem::from_trial_payoffs(geo, &f, 0.0).unwrap();
    let report = existence_check(&problem);
    println!(
        "sum of p = {:.6}, sum of f p = {:.6}",
        report.sum_p, report.sum_fp
    );
    println!("payoff summable:  {}", report.summable_payoff.label());
    println!("probs summable:   {}", report.summable_probs.label());
    println!("weighted:         {}", report.summable_weighted.label());
    println!("verdict:          {}", report.verdict());

    let secretary = SuccessProfile::secretary(5).unwrap();
    println!();
    println!("secretary profile {:?}", secretary.probs());
    println!("odds: {:?}", odds(&secretary));
}
