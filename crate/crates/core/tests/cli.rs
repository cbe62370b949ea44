use std::fs;
use std::process::{Command, Output};

use gpoly::cli::{sha256_hex, RunRecord};
use serde_json::Value;

fn gpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpoly")).args(args).env_remove("GPOLY_WORKERS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn sample_is_deterministic_csv() {
    let a = gpoly(&["sample", "--d", "3", "--n", "10", "--seed", "7"]);
    let b = gpoly(&["sample", "--d", "3", "--n", "10", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,x3");
    assert_eq!(lines.len(), 11);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 3));
    let c = gpoly(&["sample", "--d", "3", "--n", "10", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(gpoly(&["sample", "--d", "0", "--n", "4"]).status.code(), Some(2));
    assert_eq!(gpoly(&["sample", "--d", "x"]).status.code(), Some(2));
    assert_eq!(gpoly(&["nonsense"]).status.code(), Some(2));
    assert_eq!(gpoly(&["constants", "kfacet", "--alpha", "1.0", "--r", "0"]).status.code(), Some(2));
    assert_eq!(gpoly(&["estranged", "mc", "--d", "9", "--trials", "10"]).status.code(), Some(2));
    assert_eq!(
        gpoly(&["kfacets", "mc", "--d", "10", "--n", "40", "--k", "0", "--trials", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(gpoly(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(gpoly(&["kfacets", "exact", "--d", "1", "--n", "3"]).status.code(), Some(2));
    assert_eq!(gpoly(&["--help"]).status.code(), Some(0));
}

#[test]
fn profile_round_trip_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("points.csv");
    let facets = dir.path().join("facets.csv");
    let s = gpoly(&["sample", "--d", "3", "--n", "9", "--seed", "4"]);
    fs::write(&pts, &s.stdout).unwrap();
    let p = gpoly(&["profile", "--input", pts.to_str().unwrap(), "--facets-out", facets.to_str().unwrap()]);
    assert!(p.status.success(), "{}", String::from_utf8_lossy(&p.stderr));

    let ps = gpoly::sampling::gaussian_point_set(&mut gpoly::sampling::stream(4, 0), 9, 3).unwrap();
    let mut want = Vec::new();
    gpoly::geometry::kfacet_profile(&ps).unwrap().write_csv(&mut want).unwrap();
    assert_eq!(p.stdout, want);

    let facet_text = fs::read_to_string(&facets).unwrap();
    assert!(facet_text.starts_with("v1,v2,v3\n"));
    let e0: usize = stdout(&p).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(facet_text.lines().count() - 1, e0);
}

#[test]
fn kfacets_exact_anchor() {
    let o = gpoly(&["kfacets", "exact", "--d", "1", "--n", "3", "--k", "0"]);
    let r = &json_lines(&o)[0];
    assert!((r["value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    let o = gpoly(&["kfacets", "exact", "--d", "2", "--n", "5", "--all-k"]);
    let v = json_lines(&o)[0]["values"].as_array().unwrap().clone();
    assert_eq!(v.len(), 4);
}

#[test]
fn kfacets_mc_all_k_is_symmetric() {
    let o = gpoly(&["kfacets", "mc", "--d", "2", "--n", "5", "--all-k", "--trials", "20000", "--seed", "1"]);
    assert!(o.status.success());
    let r = &json_lines(&o)[0];
    let est = r["estimates"].as_array().unwrap();
    for k in 0..4 {
        assert_eq!(est[k]["mean"], est[3 - k]["mean"]);
    }
}

#[test]
fn kfacets_reduced_overlaps_exact() {
    let o = gpoly(&["kfacets", "reduced", "--d", "4", "--n", "8", "--k", "2", "--trials", "1000000", "--seed", "5"]);
    let r = &json_lines(&o)[0];
    let ci = r["estimate"]["ci95"].as_array().unwrap();
    let exact = r["exact"].as_f64().unwrap();
    let se = r["estimate"]["se"].as_f64().unwrap();
    let mean = r["estimate"]["mean"].as_f64().unwrap();
    assert!(ci[0].as_f64().unwrap() < mean && mean < ci[1].as_f64().unwrap());
    assert!((mean - exact).abs() <= 3.0 * se, "{mean} vs {exact}");
}

#[test]
fn constants_output() {
    let o = gpoly(&["constants", "kfacet", "--alpha", "2", "--r", "0.5"]);
    let r = &json_lines(&o)[0];
    assert!((r["growth_base"].as_f64().unwrap() - 4.0).abs() < 1e-9);

    let o = gpoly(&["constants", "estranged"]);
    let recs = json_lines(&o);
    assert_eq!(recs.len(), 6);
    let value = |name: &str| recs.iter().find(|r| r["name"] == name).unwrap()["value"].as_f64().unwrap();
    assert!((value("estranged_constant(-,-)") - 0.4424).abs() < 5e-4);
    assert!((value("estranged_constant(+,-)") - 0.355).abs() < 1e-3);
    assert!((value("estranged_constant(+,+)") - 0.25).abs() < 1e-9);
    assert!((1.7670..=1.7722).contains(&value("four_c")));
}

#[test]
fn estranged_modes() {
    let o = gpoly(&["estranged", "pairprob", "--d", "1", "--trials", "1000"]);
    let r = &json_lines(&o)[0];
    assert_eq!(r["estimate"]["mean"].as_f64(), Some(1.0));
    let o = gpoly(&["estranged", "mc", "--d", "2", "--trials", "5000", "--seed", "3"]);
    let m = json_lines(&o)[0]["estimate"]["mean"].as_f64().unwrap();
    assert!(m > 0.0 && m <= 3.0);
}

#[test]
fn worker_count_does_not_change_output() {
    let cmds: [&[&str]; 3] = [
        &["kfacets", "mc", "--d", "2", "--n", "6", "--all-k", "--trials", "6000", "--seed", "9"],
        &["estranged", "mc", "--d", "2", "--trials", "9000", "--seed", "9"],
        &["growth", "--alpha", "2", "--d-min", "2", "--d-max", "3", "--trials", "500", "--seed", "9"],
    ];
    for cmd in cmds {
        let one = gpoly(&[cmd, &["--workers", "1"]].concat());
        let eight = gpoly(&[cmd, &["--workers", "8"]].concat());
        assert!(one.status.success());
        assert_eq!(one.stdout, eight.stdout, "{cmd:?}");
    }
    let env = Command::new(env!("CARGO_BIN_EXE_gpoly"))
        .args(["estranged", "mc", "--d", "2", "--trials", "9000", "--seed", "9"])
        .env("GPOLY_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, gpoly(&["estranged", "mc", "--d", "2", "--trials", "9000", "--seed", "9"]).stdout);
    assert_eq!(gpoly(&["estranged", "mc", "--d", "2", "--workers", "0"]).status.code(), Some(2));
}

#[test]
fn verify_lp_suite() {
    let o = gpoly(&["verify", "--suite", "lp"]);
    assert!(o.status.success());
    let r = &json_lines(&o)[0];
    assert_eq!(r["status"], "pass");
    let values = r["details"]["values"].as_array().unwrap();
    assert_eq!(values.len(), 3);
    let last = values[2]["value"].as_f64().unwrap();
    assert!((last - 0.398_942_280_4).abs() < 0.01);
    assert!(String::from_utf8_lossy(&o.stderr).contains("lp_limit"));
}

#[test]
fn verify_simplex_is_reproducible() {
    let a = gpoly(&["verify", "--suite", "simplex", "--seed", "11"]);
    let b = gpoly(&["verify", "--suite", "simplex", "--seed", "11", "--workers", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let recs = json_lines(&a);
    assert_eq!(recs.len(), 6);
    assert!(recs.iter().all(|r| r["status"] == "pass" && r["z"].is_number()));
}

#[test]
fn out_dir_records_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = gpoly(&["kfacets", "exact", "--d", "1", "--n", "3", "--k", "1", "--out-dir", out]);
    assert!(o.status.success());
    let o2 = gpoly(&["sample", "--d", "2", "--n", "5", "--seed", "3", "--out-dir", out]);
    assert!(o2.status.success());

    let log = fs::read_to_string(dir.path().join("runs.jsonl")).unwrap();
    let records: Vec<RunRecord> = log.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 2);
    for (r, stdout) in records.iter().zip([&o.stdout, &o2.stdout]) {
        let bytes = fs::read(dir.path().join(&r.output_file)).unwrap();
        assert_eq!(&bytes, stdout);
        assert_eq!(sha256_hex(&bytes), r.output_sha256);
        assert!(r.finished_unix_ms >= r.started_unix_ms);
        assert_eq!(r.version, env!("CARGO_PKG_VERSION"));
    }
    assert_eq!(records[1].master_seed, Some(3));
    assert_eq!(records[1].params["command"]["command"], "sample");
    assert_eq!(records[1].params["command"]["seed"], 3);
    assert_eq!(records[0].output_file, "kfacets.jsonl");
}

#[test]
fn params_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("run.params");
    fs::write(&params, "d = 3\nn = 10\nseed = 7\n").unwrap();
    let a = gpoly(&["sample", "--params", params.to_str().unwrap()]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, gpoly(&["sample", "--d", "3", "--n", "10", "--seed", "7"]).stdout);
    let b = gpoly(&["sample", "--seed", "8", "--params", params.to_str().unwrap()]);
    assert_eq!(b.stdout, gpoly(&["sample", "--d", "3", "--n", "10", "--seed", "8"]).stdout);
}
