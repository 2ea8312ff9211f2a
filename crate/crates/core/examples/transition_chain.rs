//! The embedded chain of success epochs: transition matrix, repeated
//! application, the continuation recursion and the diagonal factorisation.

use bernoulli_stopping::{
    apply, continuation_backward, decompose, transition_matrix, ExtendedSequence, StoppingProblem,
    SuccessProfile,
};

fn main() {
    let profile = SuccessProfile::finite(vec![0.5, 0.4, 0.3, 0.2]).unwrap();
    let p = transition_matrix(&profile).unwrap();
    println!("transition matrix on states 0..4, inf");
    print!("{}", p.to_text());

    // last-success payoff for this profile
    let f: Vec<f64> = (1..=4)
        .map(|k| (k + 1..=4).map(|j| profile.q(j)).product())
        .collect();
    let problem = StoppingProblem::from_trial_payoffs(profile.clone(), &f, 0.0).unwrap();
    let g = continuation_backward(&problem);
    let pf = apply(&p, problem.payoff(), 1).unwrap();
    println!();
    println!("f    = {:?}", problem.payoff().states());
    println!("g    = {:?}", g.states());
    println!("P f  = {:?}", pf.states());

    let ones = ExtendedSequence::constant(4, 1.0);
    println!("P^3 1 = {:?}", apply(&p, &ones, 3).unwrap().states());

    let d = decompose(&p, &profile).unwrap();
    println!();
    println!("row scaling    {:?}", d.d1);
    println!("column scaling {:?}", d.d2);
    println!("pattern deviation {:.1e}", d.max_pattern_deviation());
}
