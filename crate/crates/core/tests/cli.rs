use std::path::PathBuf;

use bernoulli_stopping::cli::{run, EXIT_INPUT, EXIT_OK, EXIT_UNCERTIFIED};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn bstop(args: &[&str], stdin: &str) -> Output {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("bstop").chain(args.iter().copied());
    let code = run(argv, &mut input, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name);
    p.to_str().unwrap().to_string()
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("bstop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn field<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('\t')))
        .unwrap_or_else(|| panic!("no `{key}` in\n{report}"))
}

#[test]
fn solve_secretary() {
    let o = bstop(&["solve", &data("secretary10.json")], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(field(&o.stdout, "threshold"), "4");
    let value: f64 = field(&o.stdout, "value").parse().unwrap();
    assert!((value - 0.398690).abs() < 1e-6);
    assert_eq!(field(&o.stdout, "closed_form_k*"), "5");
    assert!(o.stdout.contains("k\tf_k\tg_k\tstop\n"));
    assert!(o.stdout.contains("\n4\t0.4\t0.398253968254\tyes\n"));
}

#[test]
fn solve_rejects_unknown_key() {
    let bad = temp_file(
        "bad.json",
        r#"{"profile": {"probss": [0.5]}, "objective": {"kind": "mth_last", "m": 1}}"#,
    );
    let o = bstop(&["solve", &bad], "");
    assert_eq!(o.code, EXIT_INPUT);
    assert!(
        o.stderr.contains("probss") && o.stderr.contains("line 1"),
        "{}",
        o.stderr
    );
}

#[test]
fn solve_geometric_reports_tail() {
    let o = bstop(&["solve", &data("geometric.json")], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.contains("tail_bound\t"));
    assert_eq!(field(&o.stdout, "existence_summable_probs"), "certified");
    assert_eq!(field(&o.stdout, "trials"), "19");
}

#[test]
fn simulate_secretary_agrees_with_value() {
    let o = bstop(&["simulate", &data("secretary10.json")], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(field(&o.stdout, "replicates"), "1000000");
    assert_eq!(field(&o.stdout, "seed"), "42");
    let z: f64 = field(&o.stdout, "z").parse().unwrap();
    assert!(z.abs() < 4.0);
    assert_eq!(
        o.stdout,
        bstop(&["simulate", &data("secretary10.json")], "").stdout
    );
}

#[test]
fn simulate_flags_override_file() {
    let o = bstop(
        &[
            "simulate",
            &data("secretary10.json"),
            "--replicates",
            "1",
            "--seed",
            "9",
        ],
        "",
    );
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(field(&o.stdout, "std_error"), "n/a");
    assert_eq!(field(&o.stdout, "seed"), "9");
}

#[test]
fn simulate_never_stopping_pays_terminal() {
    let file = temp_file(
        "zero.json",
        r#"{"profile": {"probs": [0.3, 0.6, 0.2]},
            "objective": {"kind": "custom_f", "f": [0, 0, 0], "f_inf": 0.25}}"#,
    );
    let o = bstop(&["simulate", &file, "--replicates", "5000"], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(field(&o.stdout, "stop_set"), "none");
    assert_eq!(field(&o.stdout, "estimate"), "0.25");
    assert_eq!(field(&o.stdout, "inf"), "5000");
}

#[test]
fn oracle_lists_threshold_values() {
    let o = bstop(&["oracle", &data("secretary10.json")], "");
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(field(&o.stdout, "best_thresholds"), "4");
    assert_eq!(field(&o.stdout, "11"), "0\t-");
}

#[test]
fn analyze_sequences() {
    let o = bstop(&["analyze"], "1\n2\n1\n");
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(field(&o.stdout, "unimodal"), "yes");
    assert_eq!(field(&o.stdout, "modes"), "[1,1]");

    let o = bstop(&["analyze"], "47.5\n47.45\n47.7\n");
    assert_eq!(field(&o.stdout, "unimodal"), "no");
    assert_eq!(field(&o.stdout, "lambda_max_changes"), "2");

    assert_eq!(bstop(&["analyze"], "").code, EXIT_INPUT);
    let o = bstop(&["analyze"], "1\nx\n");
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("line 2"));
}

#[test]
fn tpcheck_tp2_counterexample() {
    let o = bstop(
        &["tpcheck", &data("tp2_counterexample.txt"), "--order", "3"],
        "",
    );
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("TP1: yes, TP2: yes, TP3: no"));
}

#[test]
fn tpcheck_identity() {
    let file = temp_file(
        "identity.txt",
        "N=4\n1\t0\t0\t0\n0\t1\t0\t0\n0\t0\t1\t0\n0\t0\t0\t1\n",
    );
    let o = bstop(&["tpcheck", &file, "--order", "4"], "");
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("TP1: yes, TP2: yes, TP3: yes, TP4: yes"));
}

#[test]
fn tpcheck_problem_chain() {
    let file = temp_file(
        "six.json",
        r#"{"profile": {"probs": [0.31, 0.74, 0.12, 0.5, 0.88, 0.05]},
            "objective": {"kind": "mth_last", "m": 1}}"#,
    );
    let o = bstop(&["tpcheck", &file, "--order", "3"], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(field(&o.stdout, "dim"), "8x8");
    assert!(o.stdout.contains("TP1: yes, TP2: yes, TP3: yes"));
}

#[test]
fn tpcheck_flags_sampling() {
    let dim = 40;
    let mut text = format!("N={dim}\n");
    for i in 0..dim {
        let row: Vec<&str> = (0..dim).map(|j| if i == j { "1" } else { "0" }).collect();
        text.push_str(&row.join("\t"));
        text.push('\n');
    }
    let file = temp_file("big.txt", &text);
    let o = bstop(&["tpcheck", &file, "--order", "4"], "");
    assert_eq!(o.code, EXIT_UNCERTIFIED);
    assert!(o.stdout.contains("not certified"));
}

#[test]
fn tpcheck_input_errors() {
    let file = temp_file("ragged.txt", "N=2\n1\t0\n0\n");
    assert_eq!(
        bstop(&["tpcheck", &file, "--order", "1"], "").code,
        EXIT_INPUT
    );
    assert_eq!(
        bstop(
            &["tpcheck", &data("tp2_counterexample.txt"), "--order", "0"],
            ""
        )
        .code,
        EXIT_INPUT
    );
    assert_eq!(
        bstop(
            &["tpcheck", &data("tp2_counterexample.txt"), "--order", "4"],
            ""
        )
        .code,
        EXIT_INPUT
    );
}

#[test]
fn canonical_form_round_trips() {
    let first = bstop(&["--emit-canonical", "solve", &data("geometric.json")], "");
    assert_eq!(first.code, EXIT_OK);
    assert!(first.stdout.contains("\"probs\""));
    assert!(!first.stdout.contains("family"));
    let file = temp_file("canonical.json", &first.stdout);
    let second = bstop(&["--emit-canonical", "solve", &file], "");
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(
        bstop(&["solve", &file], "").stdout,
        bstop(&["solve", &data("geometric.json")], "").stdout
    );
}

#[test]
fn usage_errors() {
    assert_eq!(bstop(&[], "").code, EXIT_INPUT);
    assert_eq!(bstop(&["solve"], "").code, EXIT_INPUT);
    assert_eq!(
        bstop(&["solve", "/nonexistent/problem.json"], "").code,
        EXIT_INPUT
    );
    let help = bstop(&["--help"], "");
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("tpcheck"));
}

#[test]
fn objective_errors_are_input_errors() {
    let file = temp_file(
        "range.json",
        r#"{"profile": {"probs": [0.5, 0.5]}, "objective": {"kind": "l_to_m", "l": 3, "m": 2}}"#,
    );
    assert_eq!(bstop(&["solve", &file], "").code, EXIT_INPUT);
    let file = temp_file(
        "short.json",
        r#"{"profile": {"probs": [0.5, 0.5]}, "objective": {"kind": "custom_f", "f": [1], "f_inf": 0}}"#,
    );
    assert_eq!(bstop(&["solve", &file], "").code, EXIT_INPUT);
}
