use std::path::Path;
use std::process::Command;

use rmhd_cli::output::{read_grid, read_trace};
use rmhd_cli::run::{DIVERGENCE_TRACE, ENTROPY_TRACE, FAILURE, MANIFEST};
use rmhd_cli::*;
use rmhd_core::problems::ProblemId;
use rmhd_core::solver::SchemeConfig;

fn rmhd(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rmhd")).args(args).env("RUST_LOG", "warn").output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn manifest(dir: &Path) -> Manifest {
    serde_json::from_str(&std::fs::read_to_string(dir.join(MANIFEST)).unwrap()).unwrap()
}

#[test]
fn schema_defaults_match_the_parser() {
    let schema: serde_json::Value = serde_json::from_str(include_str!("../schema/run_config.schema.json")).unwrap();
    let props = &schema["properties"];
    let scheme = &schema["$defs"]["scheme"]["properties"];
    let cfg = RunConfig::from_json(r#"{"problem": "alfven", "resolutions": [8], "scheme": {"k": 1}}"#).unwrap();
    let s = cfg.scheme().unwrap();

    assert_eq!(scheme["cfl"]["default"], s.cfl);
    assert_eq!(scheme["dissipation"]["default"], serde_json::to_value(s.dissipation).unwrap());
    assert_eq!(scheme["wave_speed"]["default"], serde_json::to_value(s.wave_speed).unwrap());
    assert_eq!(scheme["interface_matrix"]["default"], serde_json::to_value(s.interface_matrix).unwrap());
    assert_eq!(props["max_halvings"]["default"], cfg.max_halvings);
    assert_eq!(props["output"]["default"], cfg.output.to_string_lossy().as_ref());
    assert_eq!(props["error_variable"]["default"], cfg.error_variable.name());
    assert_eq!(props["csv_slices"]["default"], cfg.csv_slices);
    let diag = &props["diagnostics"]["properties"];
    assert_eq!(diag["entropy"]["default"], cfg.diagnostics.entropy);
    assert_eq!(diag["divergence"]["default"], cfg.diagnostics.divergence);
    assert_eq!(diag["entropy_budget"]["default"], cfg.diagnostics.entropy_budget);
    assert_eq!(cfg.problem_spec().gamma, 5.0 / 3.0);

    let names: Vec<&str> = props["problem"]["enum"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(names, ProblemId::ALL.iter().map(|p| p.name()).collect::<Vec<_>>());
    for preset in props["scheme"]["oneOf"][0]["enum"].as_array().unwrap() {
        SchemeConfig::preset(preset.as_str().unwrap()).unwrap();
    }
}

#[test]
fn alfven_run_writes_artifacts_and_reproduces_bitwise() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let config = write_config(
        tmp.path(),
        r#"{"problem": "alfven", "resolutions": [16], "scheme": "ec4",
            "cadence": {"every_time": 0.25}, "diagnostics": {"entropy_budget": true}}"#,
    );
    let res = rmhd(&["run", &config, "--output", out.to_str().unwrap(), "--threads", "2"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    let dir = out.join("alfven_EC4_16");
    let m = manifest(&dir);
    assert_eq!(m.status, "completed");
    assert_eq!(m.final_time, 0.5);
    assert_eq!(m.threads, 2);
    // initial, t = 0.25 and final
    assert_eq!(m.snapshots, ["field_00000.csv", "field_00001.csv", "field_00002.csv"]);
    let csv = std::fs::read_to_string(dir.join("field_00002.csv")).unwrap();
    assert_eq!(csv.lines().count(), 17);
    assert_eq!(csv.lines().next().unwrap().split(',').count(), 17);
    assert!(!dir.join(DIVERGENCE_TRACE).exists());

    let residuals = read_trace(&dir.join(run::BUDGET_TRACE)).unwrap();
    assert_eq!(residuals.len(), 3);
    assert!(residuals.iter().all(|r| r.1.abs() <= 1e-11));

    let report = rmhd(&["report", dir.to_str().unwrap()]);
    assert!(report.status.success());
    let verdict: EntropyReport =
        serde_json::from_str(&std::fs::read_to_string(dir.join(report::REPORT)).unwrap()).unwrap();
    assert_eq!(verdict.samples, m.steps + 1);
    assert!(verdict.monotone);
    assert!(verdict.relative_drift.abs() <= 1e-6);

    // the manifest alone re-executes the run
    let again = tmp.path().join("again");
    std::fs::write(tmp.path().join("echo.json"), serde_json::to_string(&m.config).unwrap()).unwrap();
    let res = rmhd(&["run", tmp.path().join("echo.json").to_str().unwrap(), "--output", again.to_str().unwrap()]);
    assert!(res.status.success());
    let first = std::fs::read(dir.join("field_00002.csv")).unwrap();
    let second = std::fs::read(again.join("alfven_EC4_16/field_00002.csv")).unwrap();
    assert_eq!(first, second);
    assert_eq!(
        std::fs::read(dir.join(ENTROPY_TRACE)).unwrap(),
        std::fs::read(again.join("alfven_EC4_16").join(ENTROPY_TRACE)).unwrap()
    );
}

#[test]
fn invalid_configs_exit_with_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), r#"{"problem": "alfven", "resolutions": [16], "scheme": {"k": 7}}"#);
    let res = rmhd(&["run", &config]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("k = 7"));
    assert!(!rmhd(&["run", tmp.path().join("missing.json").to_str().unwrap()]).status.success());
    assert!(!rmhd(&["frobnicate"]).status.success());
}

#[test]
fn two_dimensional_snapshots_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(ProblemId::Blast, vec![Resolution::Grid([24, 20])], SchemeSpec::Preset("es5".into()));
    cfg.t_final = Some(0.1);
    cfg.csv_slices = true;
    cfg.output = tmp.path().to_path_buf();
    let m = run(&cfg).unwrap().remove(0);
    let dir = tmp.path().join("blast_ES5_24x20");
    assert_eq!(m.final_time, 0.1);
    assert!(dir.join("field_00001_slice.csv").exists());
    assert_eq!(read_trace(&dir.join(DIVERGENCE_TRACE)).unwrap().len(), m.steps + 1);

    let (header, data) = read_grid(&dir.join("field_00000.json")).unwrap();
    assert_eq!(header.shape, [20, 24, 16]);
    assert_eq!(header.time, 0.0);
    let spec = ProblemId::Blast.spec();
    let mesh = spec.mesh(24, 20, SchemeConfig::es5().ghost_width()).unwrap();
    let field = spec.initial_field(mesh).unwrap();
    for (n, (i, j)) in field.mesh.interior().enumerate() {
        assert_eq!(&data[16 * n..16 * n + 8], field.cons_at(i, j).as_slice());
        assert_eq!(data[16 * n + 8..16 * n + 16], field.prim_at(i, j).to_array());
    }
}

#[test]
fn blast_run_reaches_the_final_time() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let config = write_config(tmp.path(), r#"{"problem": "blast", "resolutions": [40], "scheme": "es5"}"#);
    let res = rmhd(&["run", &config, "--output", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let dir = out.join("blast_ES5_40x40");
    let m = manifest(&dir);
    assert_eq!(m.final_time, 4.0);
    let (header, _) = read_grid(&dir.join(m.snapshots.last().unwrap())).unwrap();
    assert_eq!(header.time, 4.0);
    assert!(entropy_trace_report(&dir).unwrap().monotone);
}

#[test]
fn aborted_runs_leave_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(ProblemId::Riemann2, vec![Resolution::Square(50)], SchemeSpec::Preset("ec4".into()));
    cfg.output = tmp.path().to_path_buf();
    cfg.max_halvings = 0;
    // central fluxes do not survive the jump
    let err = run(&cfg).unwrap_err();
    assert!(format!("{err:#}").contains("aborted"));
    let dir = tmp.path().join("riemann2_EC4_50");
    let failure: run::Failure = serde_json::from_str(&std::fs::read_to_string(dir.join(FAILURE)).unwrap()).unwrap();
    assert!(dir.join(&failure.last_snapshot[0]).exists());
    assert!(!dir.join(MANIFEST).exists());
}

#[test]
fn convergence_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), r#"{"problem": "alfven", "resolutions": [8, 16, 32], "scheme": "ec4"}"#);
    let res = rmhd(&["converge", &config, "--output", tmp.path().to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let report: ConvergenceReport =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("convergence_alfven_EC4.json")).unwrap())
            .unwrap();
    assert_eq!(report.rows.len(), 3);
    assert!(report.rows[0].l1_order.is_none());
    let last = report.rows[2].l1_order.unwrap();
    assert!((last - 4.0).abs() < 0.3, "{last}");
    assert!(String::from_utf8_lossy(&res.stdout).contains("# N l1 l1_order l2 l2_order"));

    // first-order dissipation, one doubling
    let spec = ProblemId::Alfven.spec();
    let r = convergence_study(&spec, &SchemeConfig::es1(), &[64, 128], Variable::V2, 0).unwrap();
    let order = r.rows[1].l1_order.unwrap();
    assert!((order - 1.0).abs() < 0.2, "{order}");

    let no_exact = RunConfig::from_json(r#"{"problem": "blast", "resolutions": [8], "scheme": "es5"}"#).unwrap();
    assert!(converge::converge(&no_exact).is_err());
}

#[test]
fn report_rejects_empty_traces() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join(ENTROPY_TRACE), "# time entropy\n").unwrap();
    assert!(entropy_trace_report(tmp.path()).is_err());
    assert!(!rmhd(&["report", tmp.path().to_str().unwrap()]).status.success());
    assert!(!rmhd(&["report", tmp.path().join("nowhere").to_str().unwrap()]).status.success());
}
