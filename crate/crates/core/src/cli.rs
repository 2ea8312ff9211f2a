//! Command-line front end for the `bstop` binary.
//!
//! Problem files are JSON:
//!
//! ```json
//! {
//!   "profile": {"probs": [1.0, 0.5, 0.333], "tail_bound": 0.0},
//!   "objective": {"kind": "mth_last", "m": 1},
//!   "seed": 42,
//!   "replicates": 100000
//! }
//! ```
//!
//! The profile may instead be `{"family": "geometric", "c": .., "q": ..,
//! "eps": ..}`. Objectives are `mth_last {m}`, `l_to_m {l, m}` and
//! `custom_f {f, f_inf}` where `f` lists `f_1..f_N`. Unknown keys are
//! rejected.
//!
//! Exit codes: 0 success, 2 input error, 3 internal inconsistency,
//! 4 total-positivity check that relied on sampling.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::chain::transition_matrix;
use crate::error::Error;
use crate::matrix::Matrix;
use crate::oracle::{dp_solve, simulate, threshold_sweep};
use crate::profiles::{
    existence_check, make_profile, truncate_geometric, StoppingProblem, SuccessProfile,
};
use crate::sequences::{is_unimodal, lambda_profile, mode_interval, sign_changes};
use crate::solver::{last_success_problem, myopic_stop_set, solve_l_to_m, Solution};
use crate::totalpos::{is_tp, MinorSign};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
pub const EXIT_UNCERTIFIED: i32 = 4;

pub const DEFAULT_REPLICATES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Objective {
    MthLast { m: usize },
    LToM { l: usize, m: usize },
    CustomF { f: Vec<f64>, f_inf: f64 },
}

impl Objective {
    fn describe(&self) -> String {
        match self {
            Objective::MthLast { m } => format!("mth_last m={m}"),
            Objective::LToM { l, m } => format!("l_to_m l={l} m={m}"),
            Objective::CustomF { .. } => "custom_f".into(),
        }
    }

    fn closed_form_label(&self) -> Option<&'static str> {
        match self {
            Objective::MthLast { .. } => Some("k*"),
            Objective::LToM { .. } => Some("l*"),
            Objective::CustomF { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub profile: ProfileSpec,
    pub objective: Objective,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<u64>,
}

/// A problem file with its profile materialized and payoffs built.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedProblem {
    pub objective: Objective,
    pub problem: StoppingProblem,
    pub seed: Option<u64>,
    pub replicates: Option<u64>,
}

impl ResolvedProblem {
    pub fn profile(&self) -> &SuccessProfile {
        self.problem.profile()
    }

    pub fn solve(&self) -> crate::Result<Solution> {
        match self.objective {
            Objective::MthLast { m } => solve_l_to_m(self.profile(), m, m),
            Objective::LToM { l, m } => solve_l_to_m(self.profile(), l, m),
            Objective::CustomF { .. } => Ok(myopic_stop_set(&self.problem)),
        }
    }

    /// Problem file with the profile written out as explicit probabilities.
    pub fn canonical(&self) -> ProblemFile {
        let profile = self.profile();
        ProblemFile {
            profile: ProfileSpec {
                probs: Some(profile.probs().to_vec()),
                tail_bound: profile.tail_bound(),
                family: None,
                c: None,
                q: None,
                eps: None,
            },
            objective: self.objective.clone(),
            seed: self.seed,
            replicates: self.replicates,
        }
    }
}

impl ProblemFile {
    /// Parses JSON; errors carry serde's line/column and key diagnostics.
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn build_profile(&self) -> crate::Result<SuccessProfile> {
        let p = &self.profile;
        match (&p.probs, p.family.as_deref()) {
            (Some(probs), None) if p.c.is_none() && p.q.is_none() && p.eps.is_none() => {
                make_profile(probs.clone(), p.tail_bound)
            }
            (None, Some("geometric")) if p.tail_bound.is_none() => {
                let need = |v: Option<f64>, name: &str| {
                    v.ok_or_else(|| Error::Parse(format!("profile: geometric family needs `{name}`")))
                };
                truncate_geometric(need(p.c, "c")?, need(p.q, "q")?, need(p.eps, "eps")?)
            }
            (None, Some(other)) if other != "geometric" => Err(Error::Parse(format!(
                "profile: unknown family `{other}`"
            ))),
            _ => Err(Error::Parse(
                "profile: give either `probs` (with optional `tail_bound`) or `family` with `c`, `q`, `eps`"
                    .into(),
            )),
        }
    }

    pub fn resolve(&self) -> crate::Result<ResolvedProblem> {
        let profile = self.build_profile()?;
        let problem = match &self.objective {
            Objective::MthLast { m } => last_success_problem(&profile, *m, *m)?,
            Objective::LToM { l, m } => last_success_problem(&profile, *l, *m)?,
            Objective::CustomF { f, f_inf } => {
                StoppingProblem::from_trial_payoffs(profile, f, *f_inf)?
            }
        };
        Ok(ResolvedProblem {
            objective: self.objective.clone(),
            problem,
            seed: self.seed,
            replicates: self.replicates,
        })
    }
}

/// Formats like C's `%.12g`.
pub fn format_number(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join_indices(ks: &[usize]) -> String {
    if ks.is_empty() {
        "none".into()
    } else {
        ks.iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bstop",
    version,
    about = "Optimal stopping on Bernoulli trials"
)]
pub struct Cli {
    /// Print the problem file in canonical form and exit.
    #[arg(long, global = true)]
    pub emit_canonical: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Myopic threshold, value, certificates and the f/g table.
    Solve { file: PathBuf },
    /// Exact backward induction and every threshold rule's value.
    Oracle { file: PathBuf },
    /// Monte Carlo check of the myopic rule.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replicates: Option<u64>,
    },
    /// Sign changes, unimodality and modes of a sequence read from stdin.
    Analyze,
    /// Total-positivity check of a matrix file or a problem's chain.
    Tpcheck {
        file: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_TP_TOL)]
        tol: f64,
    },
}

enum Failure {
    Input(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalInconsistency(_) => Failure::Inconsistent(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs one command; returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut report = String::new();
    let outcome = dispatch(&cli, stdin, &mut report);
    let _ = out.write_all(report.as_bytes());
    match outcome {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Inconsistent(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INCONSISTENT
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_problem(path: &PathBuf) -> Result<ResolvedProblem, Failure> {
    let text = read_file(path)?;
    let file = ProblemFile::parse(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(file.resolve()?)
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, out: &mut String) -> Outcome {
    if cli.emit_canonical {
        let path = match &cli.command {
            Command::Solve { file }
            | Command::Oracle { file }
            | Command::Simulate { file, .. }
            | Command::Tpcheck { file, .. } => file,
            Command::Analyze => {
                return Err(Failure::Input(
                    "--emit-canonical needs a problem file".into(),
                ))
            }
        };
        let resolved = load_problem(path)?;
        writeln!(out, "{}", resolved.canonical().to_json()).unwrap();
        return Ok(EXIT_OK);
    }
    match &cli.command {
        Command::Solve { file } => cmd_solve(&load_problem(file)?, out),
        Command::Oracle { file } => cmd_oracle(&load_problem(file)?, out),
        Command::Simulate {
            file,
            seed,
            replicates,
        } => cmd_simulate(&load_problem(file)?, *seed, *replicates, out),
        Command::Analyze => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            cmd_analyze(&text, out)
        }
        Command::Tpcheck { file, order, tol } => cmd_tpcheck(file, *order, *tol, out),
    }
}

fn cmd_solve(rp: &ResolvedProblem, out: &mut String) -> Outcome {
    let sol = rp.solve()?;
    let n = rp.problem.horizon();
    let oracle = dp_solve(&rp.problem);
    let c = &sol.certificates;
    writeln!(out, "objective\t{}", rp.objective.describe()).unwrap();
    writeln!(out, "trials\t{n}").unwrap();
    if let Some(t) = rp.profile().tail_bound() {
        writeln!(out, "tail_bound\t{}", format_number(t)).unwrap();
    }
    match sol.threshold {
        Some(t) => writeln!(out, "threshold\t{t}").unwrap(),
        None => writeln!(out, "threshold\tnever").unwrap(),
    }
    writeln!(out, "stop_set\t{}", join_indices(&sol.stop_set)).unwrap();
    writeln!(out, "value\t{}", format_number(sol.value)).unwrap();
    writeln!(out, "oracle_value\t{}", format_number(oracle.value)).unwrap();
    writeln!(out, "f_unimodal\t{}", yes_no(c.f_unimodal)).unwrap();
    writeln!(out, "g_unimodal\t{}", yes_no(c.g_unimodal)).unwrap();
    writeln!(out, "ferguson_diff\t{}", yes_no(c.ferguson_diff)).unwrap();
    writeln!(out, "ferguson_ratio\t{}", yes_no(c.ferguson_ratio)).unwrap();
    writeln!(out, "monotone_stop_set\t{}", yes_no(c.monotone_stop_set)).unwrap();
    if let (Some(cf), Some(label)) = (&sol.closed_form, rp.objective.closed_form_label()) {
        writeln!(out, "closed_form_{label}\t{}", cf.index).unwrap();
        writeln!(out, "closed_form_threshold\t{}", cf.implied_threshold).unwrap();
        writeln!(out, "closed_form_value\t{}", format_number(cf.value)).unwrap();
        writeln!(
            out,
            "closed_form_basis\t{}",
            if cf.uses_odds { "odds" } else { "product" }
        )
        .unwrap();
    }
    let ex = existence_check(&rp.problem);
    writeln!(
        out,
        "existence_summable_payoff\t{}",
        ex.summable_payoff.label()
    )
    .unwrap();
    writeln!(
        out,
        "existence_summable_probs\t{}",
        ex.summable_probs.label()
    )
    .unwrap();
    writeln!(
        out,
        "existence_summable_weighted\t{}",
        ex.summable_weighted.label()
    )
    .unwrap();
    writeln!(out).unwrap();
    writeln!(out, "k\tf_k\tg_k\tstop").unwrap();
    for k in 1..=n {
        writeln!(
            out,
            "{k}\t{}\t{}\t{}",
            format_number(sol.f.get(k)),
            format_number(sol.g.get(k)),
            yes_no(sol.stops_at(k))
        )
        .unwrap();
    }
    Ok(EXIT_OK)
}

fn cmd_oracle(rp: &ResolvedProblem, out: &mut String) -> Outcome {
    let dp = dp_solve(&rp.problem);
    let sweep = threshold_sweep(&rp.problem);
    writeln!(out, "value\t{}", format_number(dp.value)).unwrap();
    writeln!(out, "stop_set\t{}", join_indices(&dp.stop_set)).unwrap();
    writeln!(
        out,
        "best_threshold_value\t{}",
        format_number(sweep.best_value)
    )
    .unwrap();
    writeln!(out, "best_thresholds\t{}", join_indices(&sweep.argmax)).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "t\tthreshold_value\tc_t").unwrap();
    for &(t, v) in &sweep.values {
        let c = dp.continuation.get(t).copied();
        let c = c.map_or_else(|| "-".to_string(), format_number);
        writeln!(out, "{t}\t{}\t{c}", format_number(v)).unwrap();
    }
    Ok(EXIT_OK)
}

fn cmd_simulate(
    rp: &ResolvedProblem,
    seed: Option<u64>,
    replicates: Option<u64>,
    out: &mut String,
) -> Outcome {
    let seed = seed.or(rp.seed).unwrap_or(DEFAULT_SEED);
    let replicates = replicates.or(rp.replicates).unwrap_or(DEFAULT_REPLICATES);
    if replicates == 0 {
        return Err(Failure::Input("replicates must be at least 1".into()));
    }
    let sol = rp.solve()?;
    let est = simulate(&rp.problem, &sol.stop_set, replicates, seed);
    let n = rp.problem.horizon();
    writeln!(out, "stop_set\t{}", join_indices(&sol.stop_set)).unwrap();
    writeln!(out, "analytic_value\t{}", format_number(sol.value)).unwrap();
    writeln!(out, "estimate\t{}", format_number(est.mean)).unwrap();
    if replicates > 1 {
        writeln!(out, "std_error\t{}", format_number(est.std_error)).unwrap();
    } else {
        writeln!(out, "std_error\tn/a").unwrap();
    }
    let diff = est.mean - sol.value;
    let z = if est.std_error > 0.0 {
        format_number(diff / est.std_error)
    } else if diff == 0.0 {
        "0".into()
    } else {
        "n/a".into()
    };
    writeln!(out, "z\t{z}").unwrap();
    writeln!(out, "replicates\t{replicates}").unwrap();
    writeln!(out, "seed\t{seed}").unwrap();
    writeln!(out).unwrap();
    writeln!(out, "k\tstops").unwrap();
    for k in 1..=n {
        writeln!(out, "{k}\t{}", est.stop_counts[k]).unwrap();
    }
    writeln!(out, "inf\t{}", est.stop_counts[n + 1]).unwrap();
    Ok(EXIT_OK)
}

/// Parses one number per line; blank lines are skipped.
pub fn parse_sequence(text: &str) -> Result<Vec<f64>, String> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ => return Err(format!("line {}: cannot parse `{line}` as a number", i + 1)),
        }
    }
    if values.is_empty() {
        return Err("no values on standard input".into());
    }
    Ok(values)
}

fn cmd_analyze(text: &str, out: &mut String) -> Outcome {
    let u = parse_sequence(text).map_err(Failure::Input)?;
    let lp = lambda_profile(&u);
    writeln!(out, "length\t{}", u.len()).unwrap();
    writeln!(out, "sign_changes\t{}", sign_changes(&u)).unwrap();
    writeln!(out, "unimodal\t{}", yes_no(is_unimodal(&u))).unwrap();
    match mode_interval(&u) {
        Some(mi) => writeln!(out, "modes\t[{},{}]", mi.lo, mi.hi).unwrap(),
        None => writeln!(out, "modes\tnone").unwrap(),
    }
    writeln!(out, "lambda_max_changes\t{}", lp.max_changes).unwrap();
    Ok(EXIT_OK)
}

fn load_matrix(path: &PathBuf) -> Result<Matrix, Failure> {
    let text = read_file(path)?;
    if text.trim_start().starts_with("N=") {
        return Ok(Matrix::parse_text(&text)?);
    }
    let file = ProblemFile::parse(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let profile = file.build_profile()?;
    Ok(transition_matrix(&profile)?.as_matrix().clone())
}

fn cmd_tpcheck(path: &PathBuf, order: usize, tol: f64, out: &mut String) -> Outcome {
    if order == 0 {
        return Err(Failure::Input("--order must be at least 1".into()));
    }
    let m = load_matrix(path)?;
    let (tp, report) = is_tp(&m, order, tol)?;
    writeln!(out, "dim\t{}x{}", m.rows(), m.cols()).unwrap();
    writeln!(out, "tol\t{}", format_number(tol)).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "order\tTP\tsign\tminors\tsampled\tmin_normalized").unwrap();
    for (k, stats) in report.per_order.iter().enumerate() {
        let sign = match report.sign_signature[k] {
            MinorSign::Positive => "+",
            MinorSign::Negative => "-",
            MinorSign::Indeterminate => "mixed",
        };
        writeln!(
            out,
            "{}\t{}\t{sign}\t{}\t{}\t{}",
            stats.order,
            yes_no(report.tp_through(stats.order)),
            stats.checked,
            yes_no(stats.sampled),
            format_number(stats.min_normalized)
        )
        .unwrap();
    }
    writeln!(out).unwrap();
    let summary: Vec<String> = (1..=order)
        .map(|k| format!("TP{k}: {}", yes_no(report.tp_through(k))))
        .collect();
    writeln!(out, "{}", summary.join(", ")).unwrap();
    if tp && report.sampled() {
        writeln!(
            out,
            "note\tsome orders were sampled; TP{order} is not certified"
        )
        .unwrap();
        return Ok(EXIT_UNCERTIFIED);
    }
    Ok(EXIT_OK)
}
