use ipv_cli::{exit_code, run_with_env, EXIT_FAIL, EXIT_PASS, EXIT_UNDECIDED, EXIT_USAGE};
use ipv_core::report::{CheckReport, Item, Verdict};
use serde_json::Value;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ipv_env(args: &[&str], env: Option<&str>) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with_env(std::iter::once("ipv").chain(args.iter().copied()), env, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn ipv(args: &[&str]) -> Outcome {
    ipv_env(args, None)
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("invalid JSON ({e}): {}", o.stdout))
}

/// The report with every timing field zeroed.
fn untimed(mut v: Value) -> Value {
    match &mut v {
        Value::Array(items) => items.iter_mut().for_each(|r| r["timing"] = Value::from(0)),
        obj => obj["timing"] = Value::from(0),
    }
    v
}

fn fixture(verdicts: &[Verdict]) -> CheckReport {
    let mut r = CheckReport::new("fixture");
    for (i, v) in verdicts.iter().enumerate() {
        r.push(Item::new(format!("item {i}"), *v));
    }
    r
}

#[test]
fn exit_code_contract_on_fixtures() {
    use Verdict::*;
    assert_eq!(exit_code(&[fixture(&[Pass, Pass])]), EXIT_PASS);
    assert_eq!(exit_code(&[fixture(&[Pass, Fail, Undecided])]), EXIT_FAIL);
    assert_eq!(exit_code(&[fixture(&[Pass, Undecided])]), EXIT_UNDECIDED);
    assert_eq!(exit_code(&[fixture(&[Pass]), fixture(&[Undecided]), fixture(&[Fail])]), EXIT_FAIL);
    assert_eq!(exit_code(&[fixture(&[Pass]), fixture(&[Undecided])]), EXIT_UNDECIDED);
    assert_eq!(exit_code(&[]), EXIT_PASS);
}

#[test]
fn passing_check_exits_zero() {
    let o = ipv(&["verify", "lemma", "3.2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["check_id"], "lemma-3.2");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["versions"]["schema"], "1");
}

#[test]
fn refuted_check_exits_one() {
    let o = ipv(&["verify", "lemma", "3.2", "--n", "100"]);
    assert_eq!(o.code, 1);
    assert_eq!(json(&o)["status"], "fail");
}

#[test]
fn usage_errors_exit_three() {
    for args in [
        &["frobnicate"][..],
        &["verify", "lemma", "9.9"],
        &["verify", "theorem", "3.3", "--n", "5", "--from", "3", "--to", "9"],
        &["verify", "theorem", "4.1", "--from", "3"],
        &["bracket", "--s", "1", "--r", "2"],
        &["bracket", "--s", "x", "--r", "2"],
        &["scan", "--k", "0", "--from", "3", "--to", "10"],
        &["decompose", "--n", "0"],
        &["verify", "lemma", "3.1", "--part", "4", "--n", "3"],
        &["verify", "all", "--jobs", "0"],
        &["verify", "all", "--precision", "8"],
    ] {
        let o = ipv(args);
        assert_eq!(o.code, EXIT_USAGE, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_go_to_stdout() {
    let o = ipv(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("verify"));
    let o = ipv(&["--version"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let args = ["verify", "theorem", "4.2", "--from", "3", "--to", "3000"];
    let a = untimed(json(&ipv(&args)));
    let b = untimed(json(&ipv(&args)));
    assert_eq!(a, b);
    let c = untimed(json(&ipv(&[
        "verify", "theorem", "4.2", "--from", "3", "--to", "3000", "--jobs", "1",
    ])));
    assert_eq!(a, c, "output must not depend on the worker count");
}

#[test]
fn tail_certificate_is_deterministic() {
    let a = untimed(json(&ipv(&["verify", "theorem", "3.3", "--n", "6818"])));
    let b = untimed(json(&ipv(&["verify", "theorem", "3.3", "--n", "6818", "--jobs", "2"])));
    assert_eq!(a, b);
}

#[test]
fn scan_csv_has_one_row_per_n() {
    let o = ipv(&["scan", "--k", "4", "--from", "3", "--to", "6817", "--format", "csv"]);
    assert_eq!(o.code, 0);
    let mut rows = csv::Reader::from_reader(o.stdout.as_bytes());
    let header: Vec<String> = rows.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["check_id", "instance", "verdict", "witness", "margin_lo", "margin_hi", "millis"]
    );
    let records: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 6815);
    assert!(records.iter().all(|r| &r[2] == "pass"));
    assert_eq!(&records[0][1], "n=3");
    assert_eq!(&records[0][3], "13");
}

#[test]
fn csv_margins_are_exact_rationals() {
    let o = ipv(&["verify", "lemma", "3.2", "--format", "csv"]);
    let mut rows = csv::Reader::from_reader(o.stdout.as_bytes());
    let first = rows.records().next().unwrap().unwrap();
    assert!(first[4].contains('/') && first[5].contains('/'), "{first:?}");
}

#[test]
fn verify_all_returns_the_full_suite() {
    let o = ipv(&["verify", "all"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["check_id"].as_str().unwrap()).collect();
    assert_eq!(
        ids,
        [
            "theorem-3.3-base",
            "theorem-3.3-tail",
            "lemma-3.1.1",
            "lemma-3.1.2",
            "lemma-3.1.3",
            "lemma-3.1.4",
            "lemma-3.2",
            "theorem-4.1",
            "theorem-4.2",
            "theorem-4.3",
            "theorem-4.4"
        ]
    );
    assert_eq!(o.stderr.lines().count(), ids.len());
}

#[test]
fn json_output_round_trips_through_the_report_type() {
    let o = ipv(&["verify", "lemma", "3.1", "--part", "1"]);
    let report: CheckReport = serde_json::from_str(&o.stdout).unwrap();
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again, o.stdout);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = ipv(&["decompose", "--n", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["items"][2]["witness"], "41 43 47");
}

#[test]
fn precision_flag_beats_environment() {
    let from_env = json(&ipv_env(&["verify", "lemma", "3.2"], Some("128")));
    assert_eq!(from_env["params"]["precision"], "128");
    let from_flag = json(&ipv_env(&["verify", "lemma", "3.2", "--precision", "256"], Some("128")));
    assert_eq!(from_flag["params"]["precision"], "256");
    let default = json(&ipv_env(&["verify", "lemma", "3.2"], None));
    assert_eq!(default["params"]["precision"], "512");
    assert_eq!(ipv_env(&["verify", "lemma", "3.2"], Some("lots")).code, EXIT_USAGE);
}

#[test]
fn bracket_reports_documented_examples() {
    for (s, r, value, delta) in [("5", "4", "5", "1"), ("5/2", "3/2", "2", "1"), ("7/2", "7/4", "6", "2")] {
        let v = json(&ipv(&["bracket", "--s", s, "--r", r]));
        assert_eq!(v["status"], "pass");
        assert_eq!(v["items"][0]["witness"], value, "{s} {r}");
        assert_eq!(v["items"][1]["witness"], delta, "{s} {r}");
    }
}

#[test]
fn count_bound_below_the_threshold_is_informational() {
    let o = ipv(&["count-bound", "--n", "5000"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn count_threshold_command_reports_the_first_n() {
    let v = json(&ipv(&["verify", "theorem", "4.5", "--m", "1"]));
    assert_eq!(v["status"], "pass");
    assert_eq!(v["items"][0]["witness"], "7653");
}

#[test]
fn stirling_bracket_and_grid_checks_pass_by_default() {
    assert_eq!(ipv(&["verify", "lemma", "2.1"]).code, 0);
    assert_eq!(ipv(&["verify", "lemma", "2.2"]).code, 0);
    assert_eq!(ipv(&["verify", "lemma", "2.3", "--part", "1"]).code, 0);
}
