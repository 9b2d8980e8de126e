//! End-to-end behavior of the command layer: config precedence, output
//! schemas and their closed-form content, manifest round-trips, analysis on
//! synthetic traces, sweep determinism, and the binary's exit-code contract
//! (0 ok, 2 config/precondition, 3 numerical, 4 analysis).

use std::path::Path;
use std::process::Command;

use pme_core::barenblatt::{focusing_pair_pressure, BarenblattField};
use pme_core::gas::density_from_pressure;
use pme_core::graveleau;
use pme_core::trace::InterfaceSample;
use pme_focus::commands;
use pme_focus::config::{build, Mode};
use pme_focus::manifest::RunManifest;
use pme_focus::writers::{g17, interface_csv};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pme-focus"))
}

fn sets(pairs: &[String]) -> Vec<String> {
    pairs.to_vec()
}

fn s(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|p| p.to_string()).collect()
}

#[test]
fn test_binary_exit_code_contract() {
    let dir = tempfile::tempdir().unwrap();
    let out_arg = dir.path().join("run");
    let out = |args: &[&str]| {
        bin()
            .args(args)
            .arg("--out")
            .arg(&out_arg)
            .output()
            .expect("binary must spawn")
    };

    // 0: a small oracle run succeeds
    let ok = out(&["oracle", "--set", "grid.n=16"]);
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&ok.stderr));

    // 2: violated physics precondition, message names it
    let bad = out(&["oracle", "--set", "physics.m=1"]);
    assert_eq!(bad.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&bad.stderr);
    assert!(msg.contains("m > 1"), "precondition must be named: {msg}");

    // 2: unknown --set key
    let bad = out(&["simulate", "--set", "grid.cells=100"]);
    assert_eq!(bad.status.code(), Some(2));

    // 3: the outer interface outgrows a too-small box mid-run
    let bad = out(&["simulate", "--set", "grid.n=64", "--set", "grid.rmax=1.5"]);
    assert_eq!(
        bad.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&bad.stderr)
    );

    // 4: analyzable trace but no focus time anywhere
    let adir = dir.path().join("analysis");
    std::fs::create_dir_all(&adir).unwrap();
    std::fs::write(adir.join("interface.csv"), "t,a,b\n-0.5,0.2,1.8\n-0.4,0.15,1.85\n").unwrap();
    let bad = bin().args(["analyze", "--out"]).arg(&adir).output().unwrap();
    assert_eq!(
        bad.status.code(),
        Some(4),
        "stderr: {}",
        String::from_utf8_lossy(&bad.stderr)
    );
}

#[test]
fn test_oracle_profiles_reproduce_the_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = build(
        Mode::Oracle,
        None,
        &sets(&s(&["grid.n=64", "oracle.times=-0.5"])),
        Some(dir.path()),
    )
    .unwrap();
    let manifest = commands::oracle(&cfg).unwrap();
    assert_eq!(
        manifest.outputs,
        vec!["barenblatt_0.csv", "graveleau_0.csv", "pair_0.csv"]
    );

    let field = BarenblattField::focusing(2.0, 1.0, -1.0).unwrap();
    let check = |name: &str, v_of_r: &dyn Fn(f64) -> f64| {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("r,U,V"), "{name} header");
        let mut rows = 0;
        for line in lines {
            let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            let (r, u, v) = (cols[0], cols[1], cols[2]);
            assert_eq!(v, v_of_r(r), "{name}: V at r = {r}");
            assert_eq!(u, density_from_pressure(v, 2.0).unwrap(), "{name}: U at r = {r}");
            rows += 1;
        }
        assert_eq!(rows, 64, "{name} has one row per cell");
    };
    check("barenblatt_0.csv", &|r| field.pressure(r, -0.5).unwrap());
    check("pair_0.csv", &|r| focusing_pair_pressure(r, -0.5, 1.0, -1.0, 2.0).unwrap());
    check("graveleau_0.csv", &|r| graveleau::pressure(r, -0.5, 1.0 / 3.0));
}

#[test]
fn test_oracle_with_no_times_writes_manifest_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = build(Mode::Oracle, None, &sets(&s(&["oracle.times="])), Some(dir.path())).unwrap();
    let manifest = commands::oracle(&cfg).unwrap();
    assert!(manifest.outputs.is_empty());
    let entries: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(entries, vec!["manifest.json"]);
    assert!(manifest.derived.mass > 0.0, "constants still reported");
}

#[test]
fn test_simulate_smoke_run_warns_and_round_trips_its_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = build(
        Mode::Simulate,
        None,
        &sets(&s(&["grid.n=16", "simulate.sample_every=10"])),
        Some(dir.path()),
    )
    .unwrap();
    let manifest = commands::simulate(&cfg).unwrap();
    assert!(
        manifest.warnings.iter().any(|w| w.contains("coarse")),
        "n = 16 must be flagged: {:?}",
        manifest.warnings
    );
    assert!(manifest.results.steps.unwrap() > 0);
    assert!(dir.path().join("interface.csv").exists());

    let back = RunManifest::read(&dir.path().join("manifest.json")).unwrap();
    assert_eq!(back.config, cfg, "manifest echo must parse back to the input config");
    assert_eq!(back.results, manifest.results);
}

#[test]
fn test_simulate_records_requested_snapshots_as_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = build(
        Mode::Simulate,
        None,
        &sets(&s(&[
            "grid.n=200",
            "simulate.snapshot_times=-0.5,-0.25",
            "simulate.sample_every=25",
        ])),
        Some(dir.path()),
    )
    .unwrap();
    let manifest = commands::simulate(&cfg).unwrap();
    assert!(dir.path().join("prof_0.csv").exists());
    assert!(dir.path().join("prof_1.csv").exists());
    assert_eq!(manifest.results.snapshot_times.len(), 2);
    assert!(
        manifest.results.snapshot_times[0] >= -0.5,
        "first snapshot lands at the first instant past the request: {:?}",
        manifest.results.snapshot_times
    );
}

#[test]
fn test_analyze_recovers_the_slope_of_an_exact_line_trace() {
    let dir = tempfile::tempdir().unwrap();
    let samples: Vec<InterfaceSample> = (0..900)
        .map(|k| {
            let t = -0.9 + 1e-3 * k as f64;
            InterfaceSample { t, a: 0.25 * (-t), b: 2.0 - 0.25 * t }
        })
        .collect();
    std::fs::write(dir.path().join("interface.csv"), interface_csv(&samples)).unwrap();

    let cfg = build(
        Mode::Analyze,
        None,
        &sets(&s(&["analyze.focus_time=0"])),
        Some(dir.path()),
    )
    .unwrap();
    let analysis = commands::analyze(&cfg).unwrap();
    assert!(
        (analysis.c_hat - 0.25).abs() <= 1e-12,
        "exact line must fit exactly, got {}",
        analysis.c_hat
    );
    assert!(analysis.stderr < 1e-12);

    let text = std::fs::read_to_string(dir.path().join("cstar.json")).unwrap();
    let back: commands::Analysis = serde_json::from_str(&text).unwrap();
    assert_eq!(back, analysis, "cstar.json must round-trip the in-memory analysis");
    assert!(dir.path().join("taylor_remainder.csv").exists());
    assert!(dir.path().join("profile_error.csv").exists());
}

#[test]
fn test_analyze_rejects_a_trace_with_too_few_window_samples() {
    let dir = tempfile::tempdir().unwrap();
    let samples: Vec<InterfaceSample> = (1..=5)
        .map(|k| {
            let t = -0.02 * k as f64;
            InterfaceSample { t, a: 0.25 * (-t), b: 2.0 }
        })
        .collect();
    std::fs::write(dir.path().join("interface.csv"), interface_csv(&samples)).unwrap();
    let cfg = build(
        Mode::Analyze,
        None,
        &sets(&s(&["analyze.focus_time=0"])),
        Some(dir.path()),
    )
    .unwrap();
    let err = commands::analyze(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 4, "insufficient samples is an analysis failure: {err}");
}

#[test]
fn test_analyze_prefers_the_manifest_focus_time_when_not_overridden() {
    // simulate a coarse run, then analyze the same directory with no
    // explicit focus time: it must come from the manifest
    let dir = tempfile::tempdir().unwrap();
    let sim_cfg = build(
        Mode::Simulate,
        None,
        &sets(&s(&["grid.n=300", "simulate.sample_every=10"])),
        Some(dir.path()),
    )
    .unwrap();
    let sim = commands::simulate(&sim_cfg).unwrap();
    assert!(sim.results.focus_time.is_some(), "n = 300 run must focus");

    let cfg = build(Mode::Analyze, None, &[], Some(dir.path())).unwrap();
    let analysis = commands::analyze(&cfg).unwrap();
    assert!(
        analysis.rel_err < 0.5,
        "coarse-run speed fit should still be in the right ballpark, got rel err {}",
        analysis.rel_err
    );
}

#[test]
fn test_sweep_with_empty_list_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = build(Mode::Sweep, None, &sets(&s(&["sweep.m="])), Some(dir.path())).unwrap();
    commands::sweep(&cfg, Some(1)).unwrap();
    let text = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(text, "m,xi,tau,p,beta,c_star_exact,c_hat,rel_err\n");
}

#[test]
fn test_sweep_tags_invalid_members_and_keeps_the_rest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = build(
        Mode::Sweep,
        None,
        &sets(&s(&["sweep.m=0.5,2", "grid.n=300", "simulate.sample_every=10"])),
        Some(dir.path()),
    )
    .unwrap();
    let err = commands::sweep(&cfg, Some(1)).unwrap_err();
    assert_eq!(err.exit_code(), 2, "first failing row is a precondition failure");

    let text = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3, "header plus one row per member");
    assert!(rows[1].contains("error:config"), "bad member tagged: {}", rows[1]);
    assert!(rows[1].ends_with("nan"), "no rel_err for a failed row: {}", rows[1]);
    assert!(!rows[2].contains("error:"), "good member untouched: {}", rows[2]);
    assert!(rows[2].contains(&g17(1.0 / 3.0)), "m = 2 row carries c* = 1/3: {}", rows[2]);

    let manifest = RunManifest::read(&dir.path().join("manifest.json")).unwrap();
    assert!(manifest.warnings.iter().any(|w| w.contains("1 of 2")), "{:?}", manifest.warnings);
}

#[test]
fn test_sweep_bytes_do_not_depend_on_worker_count() {
    let run = |dir: &Path, jobs: usize| {
        let cfg = build(
            Mode::Sweep,
            None,
            &sets(&s(&["sweep.m=1.5,2", "grid.n=250", "simulate.sample_every=10"])),
            Some(dir),
        )
        .unwrap();
        // rows may legitimately fail at this resolution; bytes must still match
        let _ = commands::sweep(&cfg, Some(jobs));
        std::fs::read(dir.join("sweep.csv")).unwrap()
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let serial = run(d1.path(), 1);
    let parallel = run(d2.path(), 2);
    assert_eq!(serial, parallel, "sweep.csv must be byte-identical across worker counts");
}
