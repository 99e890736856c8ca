//! End-to-end checks of the installed binary: flag handling, exit codes,
//! and file outputs.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_icfs-wearsim"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .env_remove("ICFS_WEARSIM_OUT")
        .output()
        .expect("spawn icfs-wearsim")
}

#[test]
fn run_writes_the_four_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["run", "--seed", "7", "--out", "o"]);
    assert!(out.status.success(), "{out:?}");
    for name in [
        "summary.csv",
        "wear.csv",
        "detector_timeline.csv",
        "buffer_timeline.csv",
    ] {
        assert!(dir.path().join("o").join(name).is_file(), "{name} missing");
    }
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("completed"), "{stdout}");
}

#[test]
fn missing_pfr_key_exits_2_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"cf": 10, "policy": "bl", "seed": 1}"#,
    )
    .unwrap();
    let out = run_in(dir.path(), &["run", "--config", "cfg.json"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("pfr"), "{stderr}");
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"pfr": 0.2, "cf": 10, "policy": "bl", "seed": 1, "sram": 1}"#,
    )
    .unwrap();
    let out = run_in(dir.path(), &["run", "--config", "cfg.json"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("sram"), "{stderr}");
}

#[test]
fn record_then_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "run",
            "--seed",
            "42",
            "--out",
            "a",
            "--record-trace",
            "trace.txt",
            "--event-log",
        ],
    );
    assert!(out.status.success(), "{out:?}");
    let out = run_in(
        dir.path(),
        &[
            "run",
            "--out",
            "b",
            "--replay",
            "trace.txt",
            "--event-log",
        ],
    );
    assert!(out.status.success(), "{out:?}");
    for name in [
        "summary.csv",
        "wear.csv",
        "detector_timeline.csv",
        "buffer_timeline.csv",
        "events.csv",
    ] {
        let a = std::fs::read(dir.path().join("a").join(name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs after replay");
    }
}

#[test]
fn env_var_sets_the_default_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--seed", "1"])
        .current_dir(dir.path())
        .env("ICFS_WEARSIM_OUT", "envout")
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    assert!(dir.path().join("envout/summary.csv").is_file());
}

#[test]
fn sweep_then_report_produces_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "sweep",
            "--pfr",
            "0.2",
            "--cf",
            "5",
            "--policy",
            "bl,bf",
            "--replicates",
            "2",
            "--out",
            "s",
        ],
    );
    assert!(out.status.success(), "{out:?}");
    assert!(dir.path().join("s/sweep_runs.csv").is_file());
    assert!(dir.path().join("s/sweep_aggregate.csv").is_file());

    let out = run_in(dir.path(), &["report", "s"]);
    assert!(out.status.success(), "{out:?}");
    assert!(dir.path().join("s/plot_policy_comparison.csv").is_file());
}

#[test]
fn report_on_empty_dir_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("empty")).unwrap();
    let out = run_in(dir.path(), &["report", "empty"]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("wear"), "{stderr}");
}

#[test]
fn replay_of_a_malformed_trace_exits_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.txt"),
        "icfs-trace v1 pfr=0.2 seed=1\nSSQ\n",
    )
    .unwrap();
    let out = run_in(dir.path(), &["run", "--replay", "bad.txt"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn observation_one_style_distribution_shows_hot_blocks() {
    // heavy failure rate over a longer workload: the per-block write counts
    // in the distribution export reach desk-scale extremes
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "run", "--seed", "3", "--pfr", "0.6", "--cf", "10", "--out", "o",
        ],
    );
    assert!(out.status.success(), "{out:?}");
    let wear = std::fs::read_to_string(dir.path().join("o/wear.csv")).unwrap();
    let max: u64 = wear
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<u64>().unwrap())
        .max()
        .unwrap();
    assert!(max > 10_000, "max write count {max}");
    let out = run_in(dir.path(), &["report", "o"]);
    assert!(out.status.success(), "{out:?}");
    let dist =
        std::fs::read_to_string(dir.path().join("o/plot_write_distribution.csv")).unwrap();
    assert_eq!(dist.lines().count(), 201);
}
