//! Sign changes, level shifts and unimodality, including a TP2 matrix that
//! breaks unimodality.

use bernoulli_stopping::sequences::{mode_interval, sign_pattern};
use bernoulli_stopping::{is_tp, is_unimodal, lambda_profile, sign_changes, Matrix};

fn main() {
    let u = [3.0, -1.0, 0.0, 2.0, 5.0, 4.0];
    println!("u = {u:?}");
    println!(
        "  sign pattern {:?}, {} changes",
        sign_pattern(&u),
        sign_changes(&u)
    );

    let lp = lambda_profile(&u);
    println!("  at most {} changes after any level shift", lp.max_changes);
    for (level, pattern) in &lp.maximizers {
        println!("    level {level:>5}: {pattern:?}");
    }

    let a = Matrix::from_rows(&[
        vec![10.0, 5.0, 0.0],
        vec![8.0, 4.0, 3.0],
        vec![4.0, 3.0, 8.0],
    ])
    .unwrap();
    let v = [3.0, 3.5, 3.15];
    let av = a.mul_vec(&v).unwrap();
    let tp2 = is_tp(&a, 2, 1e-10).unwrap().0;
    let tp3 = is_tp(&a, 3, 1e-10).unwrap().0;
    println!();
    println!("A is TP2: {tp2}, TP3: {tp3}");
    println!(
        "v  = {v:?}  unimodal: {}  modes {:?}",
        is_unimodal(&v),
        mode_interval(&v)
    );
    println!("Av = {av:?}  unimodal: {}", is_unimodal(&av));
}
