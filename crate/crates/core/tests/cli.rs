use std::path::{Path, PathBuf};
use std::process::Command;

use concordia::agreement::{cohen_kappa_confusion, fleiss_kappa, krippendorff_alpha, MeasurementLevel};
use concordia::annotation::io::read_long_csv;
use concordia::annotation::{ConfusionTable2x2, Label};
use concordia::bootstrap::{bootstrap_ci, BootstrapConfig, DEFAULT_SEED};
use concordia::cli::{run_cli_with_seed_env, CliOutput};
use concordia::power::{required_sample_size, Effect, PowerSpec, Tails};
use concordia::significance::{mcnemar, Metric, TruthAxis};
use serde_json::Value;

const COUNTS: &str = r#"{"tt": 64, "tf": 23, "ft": 988, "ff": 6720}"#;

// Synthetic three-rater table with one missing cell.
const TABLE: &str = "unit_id,rater_id,label
u1,r1,yes
u1,r2,yes
u1,r3,no
u2,r1,no
u2,r2,no
u2,r3,no
u3,r1,yes
u3,r2,no
u4,r1,yes
u4,r2,yes
u4,r3,yes
";

struct Fixture {
    dir: tempfile::TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("counts.json"), COUNTS).unwrap();
        std::fs::write(dir.path().join("table.csv"), TABLE).unwrap();
        let complete: String = TABLE.lines().filter(|l| !l.starts_with("u3")).map(|l| format!("{l}\n")).collect();
        std::fs::write(dir.path().join("complete.csv"), complete).unwrap();
        Fixture { dir }
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_owned()
    }

    fn write(&self, name: &str, contents: &str) -> String {
        std::fs::write(self.dir.path().join(name), contents).unwrap();
        self.path(name)
    }
}

fn run(args: &[&str]) -> CliOutput {
    run_cli_with_seed_env(std::iter::once("concordia").chain(args.iter().copied()), None)
}

fn json(out: &CliOutput) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn bits(v: &Value) -> u64 {
    v.as_f64().unwrap().to_bits()
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_concordia"))
}

#[test]
fn cohen_text_shows_case_study_kappa() {
    let f = Fixture::new();
    let out = run(&["agree", "cohen", "--confusion", &f.path("counts.json")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("0.0937"));
    assert!(out.stdout.contains("Subjects  Raters  Kappa"));
}

#[test]
fn mcnemar_text_matches_reporting_style() {
    let f = Fixture::new();
    let out = run(&["test", "mcnemar", "--confusion", &f.path("counts.json")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("919.18"));
    assert!(out.stdout.contains("p < .001"));
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2_without_stdout() {
    let f = Fixture::new();
    let counts = f.path("counts.json");
    let table = f.path("table.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["agree"],
        vec!["agree", "cohen"],
        vec!["agree", "cohen", "--confusion", "/no/such/file.json"],
        vec!["agree", "cohen", "--confusion", &counts, "--input", &table],
        vec!["agree", "cohen", "--input", &table],
        vec!["agree", "kripp", "--input", &table, "--level", "ordinal"],
        vec!["agree", "kripp", "--input", &table, "--order", "no,yes"],
        vec!["agree", "fleiss", "--input", &table, "--format", "xml"],
        vec!["test", "mcnemar", "--confusion", &counts, "--positive", "yes"],
        vec!["test", "bootstrap", "--confusion", &counts, "--replicates", "many"],
        vec!["soft", "jsd", "--p", "a=0.5,b", "--q", "a=1,b=0"],
        vec!["power", "size", "--p1", "0.5"],
        vec!["power", "size", "--p1", "0.5", "--p2", "0.6", "--d", "0.3"],
        vec!["power", "density", "--scores", &counts, "--format", "text"],
        vec!["power", "converge", "--input", &table],
        vec!["report", "casestudy", "--fixture", "/no/such/fixture.json"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.code, 2, "{args:?}: {}", out.stderr);
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn usage_errors_name_the_flag() {
    let out = run(&["agree", "cohen", "--confusion", "/no/such/file.json"]);
    assert!(out.stderr.contains("--confusion"));
    let out = run(&["power", "size", "--p1", "0.5", "--p2", "0.6", "--tails", "3"]);
    assert!(out.stderr.contains("--tails"), "{}", out.stderr);
}

#[test]
fn computation_errors_exit_1() {
    let f = Fixture::new();
    let no_discordant = f.write("agree.json", r#"{"tt": 5, "tf": 0, "ft": 0, "ff": 5}"#);
    let bad_json = f.write("bad.json", r#"{"tt": 5}"#);
    let incomplete = f.path("table.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["test", "mcnemar", "--confusion", &no_discordant],
        vec!["agree", "cohen", "--confusion", &bad_json],
        vec!["agree", "fleiss", "--input", &incomplete],
        vec!["power", "size", "--p1", "0.5", "--p2", "0.5"],
        vec!["soft", "xent", "--p", "a=0.5,b=0.5", "--q", "a=1,b=0"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.code, 1, "{args:?}: {}", out.stderr);
        assert!(out.stdout.is_empty());
        assert!(out.stderr.starts_with("error:"));
    }
}

#[test]
fn json_numbers_equal_library_bit_for_bit() {
    let f = Fixture::new();
    let counts = ConfusionTable2x2::from_json_str(COUNTS).unwrap();

    let v = json(&run(&["agree", "cohen", "--confusion", &f.path("counts.json"), "--format", "json"]));
    let lib = cohen_kappa_confusion(&counts).unwrap();
    assert_eq!(bits(&v["value"]), lib.value.to_bits());
    assert_eq!(v["n_subjects"], 7795);
    assert_eq!(v["statistic"], "cohen_kappa");

    for (flag, continuity) in [(None, true), (Some("--no-continuity"), false)] {
        let mut args = vec!["test", "mcnemar", "--confusion", &f.path("counts.json"), "--format", "json"]
            .into_iter()
            .map(str::to_owned)
            .collect::<Vec<_>>();
        args.extend(flag.map(str::to_owned));
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let v = json(&run(&refs));
        let lib = mcnemar(&counts, continuity).unwrap();
        assert_eq!(v["test"], "mcnemar");
        assert_eq!(bits(&v["chi_square"]), lib.chi_square.to_bits());
        assert_eq!(bits(&v["p_value"]), lib.p_value.to_bits());
        assert_eq!(v["df"], 1);
        assert_eq!(v["n"], 7795);
        assert_eq!(v["continuity"], continuity);
        // Full precision in JSON, threshold only in text.
        assert!(lib.p_value > 0.0 && lib.p_value < 1e-100);
    }

    let table = read_long_csv(TABLE.as_bytes(), None).unwrap();
    let v = json(&run(&["agree", "kripp", "--input", &f.path("table.csv"), "--format", "json"]));
    let lib = krippendorff_alpha(&table, &MeasurementLevel::Nominal).unwrap();
    assert_eq!(bits(&v["value"]), lib.value.to_bits());

    let complete = read_long_csv(std::fs::read(f.path("complete.csv")).unwrap().as_slice(), None).unwrap();
    let v = json(&run(&["agree", "fleiss", "--input", &f.path("complete.csv"), "--format", "json"]));
    assert_eq!(bits(&v["value"]), fleiss_kappa(&complete).unwrap().value.to_bits());

    let v = json(&run(&["power", "size", "--p1", "0.5", "--p2", "0.6", "--format", "json"]));
    let spec = PowerSpec { alpha: 0.05, power: 0.8, effect: Effect::Proportions { p1: 0.5, p2: 0.6 }, tails: Tails::Two };
    let lib = required_sample_size(&spec).unwrap();
    assert_eq!(v["per_group"], 385);
    assert_eq!(bits(&v["exact"]), lib.exact.to_bits());
}

#[test]
fn bootstrap_json_matches_library_with_seed_precedence() {
    let f = Fixture::new();
    let counts = ConfusionTable2x2::from_json_str(COUNTS).unwrap();
    let (t, fl) = (Label::new("T").unwrap(), Label::new("F").unwrap());
    let paired = counts.to_paired(&t, &fl).unwrap();
    let lib = |seed| {
        let config = BootstrapConfig { replicates: 200, level: 0.95, seed };
        bootstrap_ci(Metric::Accuracy, &paired, &t, TruthAxis::A, &config).unwrap()
    };
    let path = f.path("counts.json");
    let base = ["test", "bootstrap", "--confusion", path.as_str(), "--metric", "accuracy", "--replicates", "200", "--format", "json"];
    let argv = |extra: &[&'static str]| std::iter::once("concordia").chain(base).chain(extra.iter().copied()).collect::<Vec<_>>();

    let v = json(&run_cli_with_seed_env(argv(&[]), None));
    assert_eq!(v["seed"], DEFAULT_SEED);
    assert_eq!(bits(&v["lower"]), lib(DEFAULT_SEED).lower.to_bits());

    let v = json(&run_cli_with_seed_env(argv(&[]), Some("77")));
    assert_eq!(v["seed"], 77);
    assert_eq!(bits(&v["upper"]), lib(77).upper.to_bits());

    let v = json(&run_cli_with_seed_env(argv(&["--seed", "5"]), Some("77")));
    assert_eq!(v["seed"], 5);
    assert_eq!(bits(&v["lower"]), lib(5).lower.to_bits());
    assert_eq!(bits(&v["estimate"]), lib(5).estimate.to_bits());

    let out = run_cli_with_seed_env(argv(&[]), Some("not-a-seed"));
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn every_subcommand_accepts_every_format() {
    let f = Fixture::new();
    let (counts, table, complete) = (f.path("counts.json"), f.path("table.csv"), f.path("complete.csv"));
    let scores = f.write("scores.txt", "score\n1\n1.2\n1.4\n2\n2.6\n3\n1.1\n1.3\n");
    let model = f.write(
        "model.csv",
        "unit_id,rater_id,label\nu4,s1,yes\nu4,s2,no\nu3,s1,yes\nu3,s2,yes\nu2,s1,no\nu2,s2,yes\nu1,s1,no\nu1,s2,no\n",
    );
    let commands: Vec<Vec<&str>> = vec![
        vec!["agree", "cohen", "--confusion", &counts],
        vec!["agree", "cohen", "--input", &table, "--rater-a", "r1", "--rater-b", "r2"],
        vec!["agree", "fleiss", "--input", &complete],
        vec!["agree", "kripp", "--input", &table, "--level", "ordinal", "--order", "no,yes"],
        vec!["agree", "kripp", "--input", &table, "--level", "interval", "--scale", "no=0,yes=1"],
        vec!["test", "mcnemar", "--confusion", &counts],
        vec!["test", "mcnemar", "--input", &table, "--rater-a", "r1", "--rater-b", "r2", "--positive", "yes"],
        vec!["test", "metrics", "--confusion", &counts, "--truth", "b"],
        vec!["test", "bootstrap", "--confusion", &counts, "--replicates", "50"],
        vec!["soft", "jsd", "--p", "a=0.5,b=0.5", "--q", "a=0.9,b=0.1"],
        vec!["soft", "xent", "--p", "a=0.5,b=0.5", "--q", "a=1,b=0", "--epsilon", "0.01", "--base", "e"],
        vec!["soft", "entropy", "--input", &table, "--normalized"],
        vec!["soft", "esim", "--human", &table, "--model", &model],
        vec!["soft", "ecorr", "--human", &model, "--model", &table],
        vec!["power", "size", "--d", "0.5", "--tails", "1"],
        vec!["power", "converge", "--scores", &scores, "--sizes", "4,8", "--reps", "3"],
        vec!["report", "casestudy"],
    ];
    for args in commands {
        for format in ["text", "json", "csv"] {
            let mut full = args.clone();
            full.extend(["--format", format]);
            let out = run(&full);
            assert_eq!(out.code, 0, "{full:?}: {}", out.stderr);
            assert!(out.stdout.ends_with('\n'), "{full:?}");
            if format == "json" {
                serde_json::from_str::<Value>(&out.stdout).unwrap();
            }
            // Byte-identical on a second run.
            assert_eq!(run(&full), out, "{full:?}");
        }
    }
    for format in ["json", "csv"] {
        let out = run(&["power", "density", "--scores", &scores, "--format", format]);
        assert_eq!(out.code, 0, "{}", out.stderr);
    }
}

#[test]
fn entropy_csv_layout() {
    let f = Fixture::new();
    let out = run(&["soft", "entropy", "--input", &f.path("table.csv"), "--format", "csv"]);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("unit_id,entropy"));
    let units: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(units, ["u1", "u2", "u3", "u4"]);
}

#[test]
fn convergence_and_density_csv_headers() {
    let f = Fixture::new();
    let scores = f.write("scores.txt", "1\n1.5\n2\n2.5\n3\n1.2\n");
    let out = run(&["power", "converge", "--scores", &scores, "--sizes", "3,6", "--reps", "4", "--format", "csv"]);
    assert!(out.stdout.starts_with("size,mean_jsd,rep_count\n"));
    assert!(out.stdout.contains("\n6,0,4\n"), "{}", out.stdout);
    let out = run(&["power", "density", "--scores", &scores, "--grid-points", "16", "--format", "csv"]);
    assert!(out.stdout.starts_with("x,density\n"));
    assert_eq!(out.stdout.lines().count(), 17);
}

#[test]
fn casestudy_report_gates() {
    let f = Fixture::new();
    let out = run(&["report", "casestudy"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("overall: PASS"));
    assert!(out.stdout.contains("988") && out.stdout.contains("23"));
    assert!(out.stdout.contains("not checked"));

    let tampered = f.write("tampered.json", r#"{"tt": 64, "tf": 23, "ft": 988, "ff": 6820}"#);
    let out = run(&["report", "casestudy", "--fixture", &tampered]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("overall: FAIL"));

    let swapped = f.write("swapped.json", r#"{"tt": 64, "tf": 988, "ft": 23, "ff": 6720}"#);
    let v = json(&run(&["report", "casestudy", "--fixture", &swapped, "--format", "json"]));
    assert_eq!(v["overall"], true);
    assert_eq!(v["direction_matches_reference"], false);
}

#[test]
fn binary_exit_codes_and_env_seed() {
    let f = Fixture::new();
    let status = Command::new(binary()).args(["report", "casestudy"]).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert!(String::from_utf8(status.stdout).unwrap().contains("overall: PASS"));

    let status = Command::new(binary()).arg("bogus").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(status.stdout.is_empty());

    let no_discordant = f.write("agree.json", r#"{"tt": 5, "tf": 0, "ft": 0, "ff": 5}"#);
    let status = Command::new(binary()).args(["test", "mcnemar", "--confusion", &no_discordant]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));

    let args = ["test", "bootstrap", "--confusion", &f.path("counts.json"), "--replicates", "40", "--format", "json"];
    let seeded = Command::new(binary()).args(args).env("CONCORDIA_SEED", "31").output().unwrap();
    let v: Value = serde_json::from_slice(&seeded.stdout).unwrap();
    assert_eq!(v["seed"], 31);
    let unseeded = Command::new(binary()).args(args).env_remove("CONCORDIA_SEED").output().unwrap();
    let v: Value = serde_json::from_slice(&unseeded.stdout).unwrap();
    assert_eq!(v["seed"], DEFAULT_SEED);
}

#[test]
fn help_is_not_an_error() {
    let out = run(&["--help"]);
    assert_eq!(out.code, 0);
    for sub in ["agree", "test", "soft", "power", "report"] {
        assert!(out.stdout.contains(sub));
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_concordia")).exists());
}
