use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ccifc::region::{region_dominates, Frontier};
use serde_json::Value;
use tempfile::TempDir;

fn ccifc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccifc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn frontier(path: &Path) -> Frontier {
    Frontier::from_csv(&fs::read_to_string(path).unwrap()).unwrap()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn region_writes_frontier_and_manifest() {
    let tmp = TempDir::new().unwrap();
    let o = ccifc(
        tmp.path(),
        &[
            "region",
            "--preset",
            "fig6",
            "--h21",
            "4",
            "--strategy",
            "lookahead",
            "--grid",
            "4",
            "--out",
            "run",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let run = tmp.path().join("run");
    let f = frontier(&run.join("frontier.csv"));
    assert!(!f.points.is_empty());
    assert_eq!(f.meta.label, "lookahead");
    let m = manifest(&run);
    for key in [
        "command",
        "scenario",
        "strategies",
        "grid",
        "dpc",
        "masks",
        "outputs",
        "seed",
        "tool_version",
        "wall_clock",
    ] {
        assert!(m.get(key).is_some(), "manifest lacks {key}");
    }
    assert_eq!(m["command"], "region");
    assert_eq!(m["scenario"]["parameters"]["h21"], 4.0);
    assert_eq!(m["outputs"], serde_json::json!(["frontier.csv"]));
}

#[test]
fn masking_a_field_only_shrinks_the_region() {
    let tmp = TempDir::new().unwrap();
    let base = ["region", "--preset", "fig6", "--strategy", "classical", "--grid", "4"];
    let full = ccifc(tmp.path(), &[&base[..], &["--out", "full"]].concat());
    let cut = ccifc(
        tmp.path(),
        &[&base[..], &["--mask", "gamma3=0", "--out", "cut"]].concat(),
    );
    assert_eq!((code(&full), code(&cut)), (0, 0));
    let full = frontier(&tmp.path().join("full/frontier.csv"));
    let cut = frontier(&tmp.path().join("cut/frontier.csv"));
    assert!(region_dominates(&full, &cut, 1e-9));
    assert_eq!(
        manifest(&tmp.path().join("cut"))["masks"],
        serde_json::json!(["gamma3=0"])
    );
}

#[test]
fn repeated_runs_are_byte_identical_apart_from_the_clock() {
    let tmp = TempDir::new().unwrap();
    let args = |out: &'static str| {
        vec![
            "region",
            "--preset",
            "fig7",
            "--strategy",
            "nodelay",
            "--grid",
            "4",
            "--dpc",
            "manual:0.2,0.1",
            "--out",
            out,
        ]
    };
    assert_eq!(code(&ccifc(tmp.path(), &args("a"))), 0);
    assert_eq!(code(&ccifc(tmp.path(), &args("b"))), 0);
    let read = |d: &str, f: &str| fs::read_to_string(tmp.path().join(d).join(f)).unwrap();
    assert_eq!(read("a", "frontier.csv"), read("b", "frontier.csv"));
    let strip = |d: &str| {
        let mut m = manifest(&tmp.path().join(d));
        m.as_object_mut().unwrap().remove("wall_clock");
        m
    };
    assert_eq!(strip("a"), strip("b"));
}

#[test]
fn default_run_directory_depends_only_on_inputs() {
    let tmp = TempDir::new().unwrap();
    let args = ["region", "--preset", "fig6", "--strategy", "hk", "--grid", "3"];
    let a = ccifc(tmp.path(), &args);
    let b = ccifc(tmp.path(), &args);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("ccifc-runs/region-"));
}

#[test]
fn config_file_sits_between_flags_and_preset() {
    let tmp = TempDir::new().unwrap();
    fs::write(
        tmp.path().join("cfg.json"),
        r#"{"preset": "fig6", "strategy": "hk", "h21": 4, "grid": 3, "out": "from-file"}"#,
    )
    .unwrap();
    let o = ccifc(
        tmp.path(),
        &["region", "--config", "cfg.json", "--strategy", "classical"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m = manifest(&tmp.path().join("from-file"));
    assert_eq!(m["strategies"], serde_json::json!(["classical"]));
    assert_eq!(m["scenario"]["parameters"]["h21"], 4.0);
    assert_eq!(m["grid"], "points=3;beta_points=3;h_points=3");

    fs::write(tmp.path().join("bad.json"), r#"{"presett": "fig6"}"#).unwrap();
    assert_eq!(code(&ccifc(tmp.path(), &["region", "--config", "bad.json"])), 2);
}

#[test]
fn scenario_files_and_the_empty_region() {
    let tmp = TempDir::new().unwrap();
    let scen = |p: f64| {
        format!(
            r#"{{"P1": {p}, "P2": {p}, "h21": 1, "h31": 1, "h32": 0.7, "h41": 0.7, "h42": 1, "N2": 1, "N3": 1, "N4": 1}}"#
        )
    };
    fs::write(tmp.path().join("ok.json"), scen(2.0)).unwrap();
    fs::write(tmp.path().join("zero.json"), scen(0.0)).unwrap();
    let ok = ccifc(
        tmp.path(),
        &["region", "--scenario", "ok.json", "--grid", "3", "--out", "ok"],
    );
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
    let zero = ccifc(
        tmp.path(),
        &[
            "region",
            "--scenario",
            "zero.json",
            "--strategy",
            "lookahead",
            "--grid",
            "3",
        ],
    );
    assert_eq!(code(&zero), 3);
    assert!(stderr(&zero).contains("no valid allocation"));
}

#[test]
fn invalid_configuration_exits_2() {
    let tmp = TempDir::new().unwrap();
    for args in [
        vec!["region", "--preset", "fig11"],
        vec!["region"],
        vec!["region", "--preset", "fig6", "--strategy", "greedy"],
        vec!["region", "--preset", "fig6", "--mask", "gamma3=2"],
        vec!["region", "--preset", "fig6", "--mask", "delta=0"],
        vec!["region", "--preset", "fig6", "--dpc", "manual:1"],
        vec!["region", "--preset", "fig6", "--grid", "1"],
        vec!["region", "--preset", "fig6", "--strategy", "hk", "--mask", "g3=0"],
        vec!["region", "--preset", "fig6", "--n2", "-1"],
        vec!["region", "--scenario", "missing.json"],
        vec!["figure", "fig11"],
        vec!["oracle", "--trials", "0"],
        vec!["dmc"],
        vec!["dmc", "--fixture", "nope"],
        vec!["dmc", "--fixture", "xor", "--capacity", "optimal"],
        vec!["bogus"],
    ] {
        let o = ccifc(tmp.path(), &args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn outer_bound_contains_the_strategies() {
    let tmp = TempDir::new().unwrap();
    for (s, out) in [("outer", "o"), ("lookahead", "l"), ("hk", "h")] {
        let o = ccifc(
            tmp.path(),
            &[
                "region",
                "--preset",
                "fig7",
                "--strategy",
                s,
                "--grid",
                "4",
                "--out",
                out,
            ],
        );
        assert_eq!(code(&o), 0);
    }
    let outer = frontier(&tmp.path().join("o/frontier.csv"));
    assert_eq!(outer.meta.bound_type.as_deref(), Some("outer_sum_power_relaxation"));
    for inner in ["l", "h"] {
        assert!(region_dominates(
            &outer,
            &frontier(&tmp.path().join(inner).join("frontier.csv")),
            1e-6
        ));
    }
}

#[test]
fn figure_bundle_and_report() {
    let tmp = TempDir::new().unwrap();
    let o = ccifc(tmp.path(), &["figure", "fig7", "--grid", "4", "--out", "fig"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dir = tmp.path().join("fig");
    let csvs: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "csv"))
        .collect();
    // Three strategies, HK and the outer bound, for each h21.
    assert_eq!(csvs.len(), 10);
    let report = fs::read_to_string(dir.join("report.txt")).unwrap();
    assert!(report.starts_with("figure fig7: 10 curves"), "{report}");
    assert!(report.contains("outer-h21-4.csv contains lookahead-h21-4.csv"));
    assert!(report.lines().skip(1).all(|l| l.starts_with("PASS")));
    assert!(dir.join("plot.py").exists());
    assert_eq!(manifest(&dir)["outputs"].as_array().unwrap().len(), 12);
}

#[test]
fn figure_n2_sweep_claims() {
    let tmp = TempDir::new().unwrap();
    let o = ccifc(tmp.path(), &["figure", "fig10", "--grid", "4", "--out", "fig"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report = fs::read_to_string(tmp.path().join("fig/report.txt")).unwrap();
    assert!(report.contains("PASS lookahead-n2-0.csv contains lookahead-n2-0.1.csv"));
    assert!(report.contains("PASS hk-n2-100.csv identical to hk-n2-10.csv"));
}

#[test]
fn oracle_agrees_and_catches_a_planted_error() {
    let tmp = TempDir::new().unwrap();
    let o = ccifc(tmp.path(), &["oracle", "--trials", "40", "--seed", "7", "--out", "ok"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("ok/oracle.json")).unwrap()).unwrap();
    assert_eq!(summary["verdict"], "PASS");
    assert_eq!(manifest(&tmp.path().join("ok"))["seed"], 7);

    let bad = ccifc(
        tmp.path(),
        &[
            "oracle",
            "--trials",
            "40",
            "--seed",
            "7",
            "--corrupt-family",
            "3",
            "--out",
            "bad",
        ],
    );
    assert_eq!(code(&bad), 5);
    let dump = String::from_utf8_lossy(&bad.stdout);
    let terms: Value = serde_json::from_str(dump.lines().last().unwrap()).unwrap();
    assert_eq!(terms["i"].as_array().unwrap().len(), 21);
}

#[test]
fn dmc_capacity_refusal_and_check_only() {
    let tmp = TempDir::new().unwrap();
    let o = ccifc(
        tmp.path(),
        &[
            "dmc",
            "--fixture",
            "degraded_noisy",
            "--capacity",
            "degraded",
            "--t-max",
            "2",
            "--out",
            "cap",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let f = frontier(&tmp.path().join("cap/frontier.csv"));
    assert_eq!(f.meta.label, "degraded");
    assert!(f.max_r1() > 0.0 && f.max_r2() > 0.0);

    // The copied channel file reproduces the fixture run.
    let o = ccifc(
        tmp.path(),
        &[
            "dmc",
            "--channel",
            "cap/channel.json",
            "--capacity",
            "degraded",
            "--t-max",
            "2",
            "--out",
            "again",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(tmp.path().join("cap/frontier.csv")).unwrap(),
        fs::read_to_string(tmp.path().join("again/frontier.csv")).unwrap()
    );

    let refused = ccifc(
        tmp.path(),
        &["dmc", "--fixture", "rx1_violation", "--capacity", "degraded"],
    );
    assert_eq!(code(&refused), 6);
    assert!(stderr(&refused).contains("strong_rx1"));

    let check = ccifc(
        tmp.path(),
        &["dmc", "--fixture", "rx1_violation", "--check-only", "--out", "chk"],
    );
    assert_eq!(code(&check), 0);
    let report: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("chk/conditions.json")).unwrap()).unwrap();
    assert_eq!(report["strong_rx1"]["holds"], false);
    assert_eq!(report["degraded"], true);
}

#[test]
fn dmc_rejects_malformed_and_non_degraded_channels() {
    let tmp = TempDir::new().unwrap();
    fs::write(
        tmp.path().join("short.json"),
        r#"{"sizes": [2, 2, 2, 2, 2], "transition": [1.0]}"#,
    )
    .unwrap();
    fs::write(tmp.path().join("junk.json"), "not json").unwrap();
    for f in ["short.json", "junk.json"] {
        assert_eq!(code(&ccifc(tmp.path(), &["dmc", "--channel", f])), 2);
    }
    // Y3 copies X1 directly, so it is not a degraded version of Y2.
    let mut t = Vec::new();
    for x1 in 0..2 {
        for _x2 in 0..2 {
            for y2 in 0..2 {
                for y3 in 0..2 {
                    for _y4 in 0..2 {
                        let p2 = if y2 == x1 { 0.9 } else { 0.1 };
                        let p3 = if y3 == x1 { 1.0 } else { 0.0 };
                        t.push(p2 * p3 * 0.5);
                    }
                }
            }
        }
    }
    let ch = serde_json::json!({ "sizes": [2, 2, 2, 2, 2], "transition": t });
    fs::write(tmp.path().join("nd.json"), ch.to_string()).unwrap();
    let o = ccifc(tmp.path(), &["dmc", "--channel", "nd.json", "--capacity", "degraded"]);
    assert_eq!(code(&o), 6);
    assert!(stderr(&o).contains("condition degraded"));
}
