use std::path::Path;
use std::process::{Command, Output};

use plasticoding::experiment::{repetition_dir, GENERATIONS_CSV, ROBOTS_CSV};
use plasticoding::manifest::RunManifest;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plasticoding")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn small_run(out: &Path, encoding: &str, reps: &str) {
    let o = cli(&[
        "run", "--encoding", encoding, "--seed", "3", "--repetitions", reps, "--generations", "2", "--pop", "6",
        "--out", path(out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn develop_lists_lsystem_iterations() {
    let o = cli(&["develop", &format!("{FIXTURES}/didactic.lsystem")]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "iteration 0: X\niteration 1: X Y\niteration 2: X Y Z a\niteration 3: X Y Z a X Z a\n"
    );
}

#[test]
fn develop_reports_plasticity_and_writes_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let witness = format!("{FIXTURES}/witness.geno");
    let flat = stdout(&cli(&["develop", &witness, "--env", "flat"]));
    let tilted = stdout(&cli(&["develop", &witness, "--env", "tilted"]));
    assert!(flat.contains("size: 6"), "{flat}");
    assert!(tilted.contains("size: 2"), "{tilted}");

    let svg = tmp.path().join("w.svg");
    let trace = tmp.path().join("w.csv");
    let o = cli(&["develop", &witness, "--svg", path(&svg), "--trace", path(&trace)]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(csv.lines().next(), Some("step,x,roll,pitch"));
    assert_eq!(csv.lines().count(), 1 + 501);
}

#[test]
fn baseline_develop_output_ignores_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let geno = tmp.path().join("b.geno");
    assert!(cli(&["sample", "--encoding", "baseline", "--seed", "8", "--out", path(&geno)]).status.success());
    let flat = cli(&["develop", path(&geno), "--env", "flat"]);
    let tilted = cli(&["develop", path(&geno), "--env", "tilted"]);
    assert!(flat.status.success());
    assert_eq!(flat.stdout, tilted.stdout);
}

#[test]
fn exit_codes_separate_configuration_from_runtime_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("x");
    assert_eq!(cli(&["run", "--encoding", "xyz", "--out", path(&out)]).status.code(), Some(2));
    assert_eq!(cli(&["run", "--pop", "0", "--out", path(&out)]).status.code(), Some(2));
    let bad = tmp.path().join("bad.cfg");
    std::fs::write(&bad, "mutation_probability = 2\n").unwrap();
    assert_eq!(cli(&["run", "--config", path(&bad), "--out", path(&out)]).status.code(), Some(2));
    std::fs::write(&bad, "no_such_key = 1\n").unwrap();
    assert_eq!(cli(&["run", "--config", path(&bad), "--out", path(&out)]).status.code(), Some(2));
    assert_eq!(cli(&["develop", path(&tmp.path().join("missing.geno"))]).status.code(), Some(1));
}

#[test]
fn smoke_run_writes_the_expected_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    small_run(&out, "plasticoding", "1");
    let rep = out.join(repetition_dir(0));
    let generations = std::fs::read_to_string(rep.join(GENERATIONS_CSV)).unwrap();
    assert_eq!(generations.lines().count(), 3);
    let robots = std::fs::read_to_string(rep.join(ROBOTS_CSV)).unwrap();
    assert_eq!(robots.lines().count(), 7);
    assert_eq!(robots.lines().skip(1).filter(|l| l.split(',').nth(1) == Some("1")).count(), 1);
    assert_eq!(std::fs::read_dir(rep.join("final_population")).unwrap().count(), 6);
    for f in ["genotype.geno", "flat.svg", "tilted.svg"] {
        assert!(rep.join("best").join(f).is_file(), "{f}");
    }
    let manifest = RunManifest::read(&out).unwrap();
    assert_eq!(manifest.config.mu, 6);
    assert_eq!(manifest.config.lambda, 6);
    assert_eq!(manifest.seeds(), vec![3]);
}

#[test]
fn manifest_replays_byte_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    small_run(&first, "plasticoding", "2");
    let second = tmp.path().join("second");
    let manifest = first.join(plasticoding::manifest::FILE_NAME);
    let o = cli(&["run", "--config", path(&manifest), "--out", path(&second)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for r in 0..2 {
        for f in [GENERATIONS_CSV, ROBOTS_CSV] {
            let a = std::fs::read(first.join(repetition_dir(r)).join(f)).unwrap();
            let b = std::fs::read(second.join(repetition_dir(r)).join(f)).unwrap();
            assert_eq!(a, b, "rep {r} {f}");
        }
    }
}

#[test]
fn report_over_identical_runs_finds_no_difference() {
    let tmp = tempfile::tempdir().unwrap();
    let base = tmp.path().join("base");
    let plast = tmp.path().join("plast");
    small_run(&base, "baseline", "3");
    small_run(&plast, "plasticoding", "3");
    let out = tmp.path().join("report");
    let o = cli(&["report", "--baseline", path(&base), "--plasticoding", path(&plast), "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_dir(out.join("plots")).unwrap().count(), 12);
    let table = std::fs::read_to_string(out.join("comparison.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 2 + 12);

    // the same directories on both sides
    let same = tmp.path().join("same");
    let r = plasticoding::report::build_report(
        &plasticoding::report::RunSet::load(plasticoding_core::Encoding::Baseline, std::slice::from_ref(&base)).unwrap(),
        &plasticoding::report::RunSet::load(plasticoding_core::Encoding::Baseline, std::slice::from_ref(&base)).unwrap(),
        &same,
    )
    .unwrap();
    assert!(r.comparison.iter().all(|row| row.p_value == 1.0));

    // swapped encodings are rejected
    let o = cli(&["report", "--baseline", path(&plast), "--plasticoding", path(&base), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
}
