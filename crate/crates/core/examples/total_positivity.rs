//! Minor-by-minor total positivity checks of a success chain.

use bernoulli_stopping::totalpos::MinorSign;
use bernoulli_stopping::{sign_signature, transition_matrix, SuccessProfile};

fn main() {
    let profile = SuccessProfile::finite(vec![0.31, 0.74, 0.12, 0.5, 0.88, 0.05]).unwrap();
    let p = transition_matrix(&profile).unwrap();
    let report = sign_signature(p.as_matrix(), 4, 1e-10).unwrap();

    println!("order  sign  minors  sampled  min normalized");
    for (stats, sign) in report.per_order.iter().zip(&report.sign_signature) {
        let sign = match sign {
            MinorSign::Positive => "+",
            MinorSign::Negative => "-",
            MinorSign::Indeterminate => "?",
        };
        println!(
            "{:>5}  {:>4}  {:>6}  {:>7}  {:.3e}",
            stats.order, sign, stats.checked, stats.sampled, stats.min_normalized
        );
    }
    println!("TP4: {}", report.tp_through(4));
}
