//! Optimal stopping on independent Bernoulli trials.
//!
//! A player watches trials `1..=N` with success probabilities `p_k` and may
//! stop only on a success, collecting `f_k`; never stopping pays `f_∞`. The
//! crate builds the embedded chain of success epochs, certifies its total
//! positivity, computes myopic thresholds for last-success objectives and
//! checks every answer against exact backward induction and simulation.
//!
//! ```
//! use bernoulli_stopping::{solve_mth_last, SuccessProfile};
//!
//! let secretary = SuccessProfile::secretary(10).unwrap();
//! let sol = solve_mth_last(&secretary, 1).unwrap();
//! assert_eq!(sol.threshold, Some(4));
//! assert!((sol.value - 0.398690).abs() < 1e-6);
//! ```

pub mod chain;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod profiles;
pub mod sequences;
pub mod solver;
pub mod symfun;
pub mod totalpos;

pub use chain::{apply, continuation_backward, decompose, transition_matrix, TransitionMatrix};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use oracle::{dp_solve, simulate, threshold_sweep};
pub use profiles::{existence_check, StoppingProblem, SuccessProfile};
pub use sequences::{is_unimodal, lambda_profile, sign_changes, ExtendedSequence};
pub use solver::{ferguson_check, myopic_stop_set, solve_l_to_m, solve_mth_last, Solution};
pub use symfun::{esp_table, CountTable, SuccessCounts};
pub use totalpos::{is_tp, sign_signature, MinorReport};
