use std::path::Path;
use std::process::{Command, Output};

use bribery::crosscheck::Checker;
use bribery::format::{parse_file, parse_witness};
use bribery::oracle::{oracle_bribery, verify_witness, OracleBudget};
use bribery::{BriberyQuery, Outcome};
use bribery_cli::{check, CheckArgs};
use num_bigint::BigInt;
use tempfile::TempDir;

fn bribery(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bribery")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// `key: value` pairs of a report.
fn report(o: &Output) -> Vec<(String, String)> {
    stdout(o)
        .lines()
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn field(o: &Output, key: &str) -> String {
    report(o).into_iter().find(|(k, _)| k == key).map(|(_, v)| v).unwrap_or_else(|| panic!("no {key} in {}", stdout(o)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn oracle_says(path: &Path) -> bool {
    let f = parse_file::<BigInt>(&std::fs::read_to_string(path).unwrap()).unwrap();
    oracle_bribery(&f.query().unwrap(), &OracleBudget::default()).unwrap().is_feasible()
}

const BASIC: &str = "candidates: a b p\nrule: plurality\nvoter: mult=3 order=a>b>p\nvoter: order=b>a>p\n";

#[test]
fn bribe_reports_a_witness_when_feasible() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "basic.txt", BASIC);
    let o = bribery(&["bribe", "--file", &f, "--target", "p", "--budget", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let keys: Vec<String> = report(&o).into_iter().map(|(k, _)| k).collect();
    assert_eq!(keys, ["query", "feasible", "witness", "cost", "solver", "time_ms"]);
    assert_eq!(field(&o, "feasible"), "true");
    assert_eq!(field(&o, "cost"), "2");
    assert_eq!(field(&o, "solver"), "plurality-greedy");
    assert!(field(&o, "witness").starts_with("block=0 count=2 order=p>"));
}

#[test]
fn bribe_exits_one_when_infeasible() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "basic.txt", BASIC);
    let o = bribery(&["bribe", "--file", &f, "--target", "p", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(field(&o, "feasible"), "false");
    assert_eq!(field(&o, "witness"), "-");
    assert_eq!(field(&o, "cost"), "-");
}

#[test]
fn every_solver_family_agrees_with_the_oracle_on_a_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "w.txt", "candidates: a b p\nrule: plurality\nvoter: weight=3 price=2 order=a>b>p\nvoter: weight=2 price=1 order=b>a>p\nvoter: weight=1 price=1 order=p>a>b\n");
    for budget in ["0", "1", "2", "3"] {
        let oracle = bribery(&["bribe", "--file", &f, "--target", "p", "--budget", budget, "--priced", "--weighted", "--solver", "oracle"]);
        for solver in ["auto", "dp-prices", "dp-weights"] {
            let o = bribery(&["bribe", "--file", &f, "--target", "p", "--budget", budget, "--priced", "--weighted", "--solver", solver]);
            assert_eq!(o.status.code(), oracle.status.code(), "{solver} at budget {budget}");
        }
    }
}

#[test]
fn bribe_input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "basic.txt", BASIC);
    let unknown = bribery(&["bribe", "--file", &f, "--target", "z", "--budget", "1"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown candidate"));
    assert_eq!(bribery(&["bribe", "--file", &f, "--target", "p"]).status.code(), Some(2));
    let bad = write(&dir, "bad.txt", "candidates: a b\nvoter: order=a>a\n");
    assert_eq!(bribery(&["bribe", "--file", &bad, "--target", "a", "--budget", "0"]).status.code(), Some(2));
    assert_eq!(bribery(&["bribe", "--file", "/nonexistent", "--target", "a", "--budget", "0"]).status.code(), Some(2));
    assert_eq!(bribery(&["bribe", "--file", &f, "--target", "p", "--budget", "1", "--solver", "sweep"]).status.code(), Some(2));
    assert_eq!(bribery(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn large_numbers_stay_exact() {
    let dir = TempDir::new().unwrap();
    let big = "123456789012345678901234567890";
    let f = write(&dir, "big.txt", &format!("candidates: a p\nrule: plurality\nvoter: mult={big} order=a>p\nvoter: mult={big} order=p>a\n"));
    let o = bribery(&["bribe", "--file", &f, "--target", "p", "--budget", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bribery(&["bribe", "--file", &f, "--target", "p", "--budget", "0", "--unique"]);
    assert_eq!(o.status.code(), Some(1));
    let o = bribery(&["bribe", "--file", &f, "--target", "p", "--budget", "1", "--unique"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&o, "cost"), "1");
}

/// Generates into a temp dir and returns the instance path.
fn generate(dir: &TempDir, name: &str, args: &[&str]) -> std::path::PathBuf {
    let out = dir.path().join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let o = bribery(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn witness_verifies(path: &Path) -> bool {
    let f = parse_file::<BigInt>(&std::fs::read_to_string(path).unwrap()).unwrap();
    let mut side = path.as_os_str().to_owned();
    side.push(".witness");
    let w = parse_witness(&f.election, &std::fs::read_to_string(side).unwrap()).unwrap();
    verify_witness(&f.query().unwrap(), &w).unwrap()
}

#[test]
fn gen_partition_instances() {
    let dir = TempDir::new().unwrap();
    for r in ["plurality-wd", "plurality-wd-unique", "negative", "approval-flip"] {
        let yes = generate(&dir, &format!("{r}-yes.txt"), &["partition", "1", "1", "--reduction", r, "--certificate", "0"]);
        assert!(oracle_says(&yes), "{r}");
        assert!(witness_verifies(&yes), "{r}");
        let no = generate(&dir, &format!("{r}-no.txt"), &["partition", "1", "1", "4", "--reduction", r]);
        assert!(!oracle_says(&no), "{r}");
        let prime = generate(&dir, &format!("{r}-prime.txt"), &["partition-prime", "1", "1", "--reduction", r, "--certificate", "1"]);
        assert!(oracle_says(&prime), "{r}");
        assert!(witness_verifies(&prime), "{r}");
    }
}

#[test]
fn gen_odd_sum_emits_the_fixed_no_instance() {
    let o = bribery(&["gen", "partition", "1", "1", "1", "--reduction", "plurality-wd"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let text = stdout(&o);
    assert!(text.starts_with("# expected: infeasible\n"));
    let q = parse_file::<BigInt>(&text).unwrap().query().unwrap();
    assert!(!oracle_bribery(&q, &OracleBudget::default()).unwrap().is_feasible());
}

#[test]
fn gen_rejects_a_wrong_certificate() {
    let o = bribery(&["gen", "partition", "1", "1", "2", "--reduction", "negative", "--certificate", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_x3c_instances() {
    let dir = TempDir::new().unwrap();
    let single = generate(&dir, "one.txt", &["x3c", "--ground", "3", "--set", "1,2,3", "--certificate", "0"]);
    assert!(oracle_says(&single));
    assert!(witness_verifies(&single));
    let twice = generate(&dir, "two.txt", &["x3c", "--ground", "3", "--set", "1,2,3", "--set", "1,2,3"]);
    assert!(oracle_says(&twice));
    let overlap = generate(&dir, "no.txt", &["x3c", "--ground", "6", "--set", "1,2,3", "--set", "1,2,4"]);
    assert!(!oracle_says(&overlap));
    let o = bribery(&["gen", "x3c", "--ground", "3", "--set", "1,1,2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn gen_embedded_manipulation() {
    let dir = TempDir::new().unwrap();
    let base = write(&dir, "borda.txt", "candidates: a b p\nrule: scoring 2 1 0\nvoter: order=a>p>b\nvoter: order=b>a>p\n");
    let dollar = generate(&dir, "dollar.txt", &["embed-manip", "--file", &base, "--target", "p", "--manipulators", "1", "--reduction", "dollar", "--ballot", "p>b>a"]);
    assert!(oracle_says(&dollar));
    assert!(witness_verifies(&dollar));
    let prime = generate(&dir, "prime.txt", &["embed-manip", "--file", &base, "--target", "p", "--manipulators", "2", "--reduction", "prime", "--ballot", "p>b>a"]);
    assert!(oracle_says(&prime));
    assert!(witness_verifies(&prime));
    let light = bribery(&["embed-manip", "--file", &base, "--target", "p", "--manipulators", "1", "--reduction", "prime"]);
    assert_ne!(light.status.code(), Some(0));
    let light = bribery(&["gen", "embed-manip", "--file", &base, "--target", "p", "--manipulators", "1", "--reduction", "prime"]);
    assert!(String::from_utf8_lossy(&light.stderr).contains("warning"));
}

#[test]
fn check_passes_on_seed_one() {
    let dir = TempDir::new().unwrap();
    let dump = dir.path().join("dump");
    let o = bribery(&["check", "--seed", "1", "--instances", "100", "--dump", dump.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(field(&o, "instances"), "100");
    assert_eq!(field(&o, "mismatches"), "0");
    assert!(field(&o, "comparisons").parse::<usize>().unwrap() > 0);
    assert!(!dump.exists());
}

#[test]
fn check_with_no_instances_is_empty() {
    let o = bribery(&["check", "--instances", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&o, "instances"), "0");
    assert_eq!(field(&o, "comparisons"), "0");
    assert!(!stdout(&o).contains("solver "));
}

struct AlwaysYes;

impl Checker for AlwaysYes {
    fn name(&self) -> String {
        "always-yes".into()
    }

    fn applies(&self, _: &BriberyQuery<i64>) -> bool {
        true
    }

    fn run(&self, _: &BriberyQuery<i64>) -> bribery::Result<Outcome<i64>> {
        Ok(Outcome::Feasible(bribery::BriberyWitness::empty()))
    }
}

#[test]
fn check_catches_an_injected_bug_and_dumps_replayable_files() {
    let dir = TempDir::new().unwrap();
    let dump = dir.path().join("dump");
    let args = CheckArgs { seed: 7, instances: 20, max_candidates: 3, max_voters: 6, dump: dump.clone() };
    let (summary, code) = check(&args, &[&AlwaysYes]).unwrap();
    assert_ne!(code, 0);
    let files: Vec<_> = std::fs::read_dir(&dump).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!files.is_empty());
    assert!(summary.contains(&format!("mismatches: {}", files.len())));
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        assert!(text.starts_with("# solver: always-yes\n"));
        // Replaying the file shows the claimed empty bribery is wrong.
        let q = parse_file::<BigInt>(&text).unwrap().query().unwrap();
        assert!(!verify_witness(&q, &bribery::BriberyWitness::empty()).unwrap());
        assert_eq!(text.contains("# oracle: feasible"), oracle_says(&f));
    }
}
