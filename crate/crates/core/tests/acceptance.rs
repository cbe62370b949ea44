//! Acceptance gate. Each criterion is one test that writes a single
//! `criterion N: PASS|FAIL` line to stderr (uncaptured) and then asserts.
//! Criteria run one at a time so the wall-clock budgets are measured alone.

use std::io::Write;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use gpoly::experiments::{
    estranged_expectation_mc, pair_facet_probability_mc, verify_blaschke, verify_kfacet_triangulation, verify_lp_limit,
    verify_simplex_volume, verify_truncated_bound, BlaschkeDistribution, RunConfig,
};
use gpoly::geometry::kfacet_profile;
use gpoly::mathcore::binomial;
use gpoly::sampling::{gaussian_point_set, stream};
use gpoly::theory::{growth_base_kfacet, kfacet_expectation_exact, KFacetFormulaInputs};
use serde_json::Value;

static SERIAL: Mutex<()> = Mutex::new(());

const SEED: u64 = 20_240_601;
const Z: f64 = 3.0;

fn workers() -> usize {
    gpoly::experiments::default_workers()
}

fn report(n: u32, title: &str, ok: bool, budget: Duration, elapsed: Duration, detail: &str) {
    let in_time = elapsed <= budget;
    let line = format!(
        "criterion {n:2}: {} {title} [{detail}] ({:.2}s of {}s)\n",
        if ok && in_time { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(in_time, "criterion {n} exceeded its {}s budget", budget.as_secs());
}

fn gpoly(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gpoly")).args(args).env_remove("GPOLY_WORKERS").output().unwrap()
}

#[test]
fn criterion_01_estranged_constants() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let out = gpoly(&["constants", "estranged"]);
    let elapsed = start.elapsed();
    let recs: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let value =
        |name: &str| recs.iter().find(|r| r["name"] == name).and_then(|r| r["value"].as_f64()).unwrap_or(f64::NAN);
    let mm = value("estranged_constant(-,-)");
    let pm = value("estranged_constant(+,-)");
    let mp = value("estranged_constant(-,+)");
    let pp = value("estranged_constant(+,+)");
    let four_c = value("four_c");
    let ok = out.status.success()
        && (mm - 0.4424).abs() <= 5e-4
        && (pm - 0.355).abs() <= 1e-3
        && (mp - 0.355).abs() <= 1e-3
        && (pp - 0.25).abs() <= 1e-9
        && (1.7670..=1.7722).contains(&four_c);
    let detail = format!("C(-,-)={mm:.6} C(+,-)={pm:.6} C(-,+)={mp:.6} C(+,+)={pp:.10} 4C={four_c:.5}");
    report(1, "estranged constants", ok, Duration::from_secs(10), elapsed, &detail);
}

#[test]
fn criterion_02_exact_kfacet_anchors() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let e0 = kfacet_expectation_exact(KFacetFormulaInputs::new(3, 1, 0).unwrap()).unwrap();
    let e1 = kfacet_expectation_exact(KFacetFormulaInputs::new(3, 1, 1).unwrap()).unwrap();
    let elapsed = start.elapsed();
    let ok = (e0 - 2.0).abs() <= 1e-9 && (e1 - 1.0).abs() <= 1e-9;
    let detail = format!("E e0={e0:.12} E e1={e1:.12}");
    report(2, "exact k-facet anchors", ok, Duration::from_secs(1), elapsed, &detail);
}

#[test]
fn criterion_03_kfacet_triangulation() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, (d, n, k)) in [(2usize, 5usize, 0usize), (2, 5, 1), (3, 6, 0), (4, 8, 2)].into_iter().enumerate() {
        let full = RunConfig::new(100_000, SEED + 10 * i as u64, workers());
        let reduced = RunConfig::new(1_000_000, SEED + 10 * i as u64 + 1, workers());
        let r = verify_kfacet_triangulation(d, n, k, &full, &reduced).unwrap();
        let zs = ["z_full_exact", "z_reduced_exact", "z_full_reduced"].map(|key| r.details[key].as_f64().unwrap());
        ok &= zs.iter().all(|z| z.abs() <= Z);
        parts.push(format!("({d},{n},{k}) z={:.2}/{:.2}/{:.2}", zs[0], zs[1], zs[2]));
    }
    report(3, "k-facet triangulation", ok, Duration::from_secs(120), start.elapsed(), &parts.join(" "));
}

#[test]
fn criterion_04_growth_base_identity() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let g = growth_base_kfacet(2.0, 0.5).unwrap();
    let ok = (g - 4.0).abs() <= 1e-9;
    report(4, "growth base identity", ok, Duration::from_secs(1), start.elapsed(), &format!("base={g:.12}"));
}

#[test]
fn criterion_05_combinatorial_identities() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let (mut instances, mut odd, mut ok) = (0, 0, true);
    for i in 0..250u64 {
        let d = 1 + (i % 5) as usize;
        let n = d + 1 + ((i / 5) as usize % (12 - d));
        let ps = gaussian_point_set(&mut stream(SEED + 500, i), n, d).unwrap();
        let p = kfacet_profile(&ps).unwrap();
        let m = n - d;
        ok &= (0..=m).all(|k| p.e[k] == p.e[m - k]);
        if m % 2 == 1 {
            odd += 1;
            ok &= p.total() == 2 * binomial(n as u64, d as u64).unwrap();
        }
        instances += 1;
    }
    let detail = format!("{instances} instances, {odd} with n-d odd");
    report(5, "combinatorial identities", ok && instances >= 200, Duration::from_secs(30), start.elapsed(), &detail);
}

#[test]
fn criterion_06_blaschke_and_simplex_volume() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 1..=5usize {
        let b = verify_blaschke(
            d,
            BlaschkeDistribution::Gaussian,
            &RunConfig::new(100_000, SEED + 600 + d as u64, workers()),
        )
        .unwrap();
        let v = verify_simplex_volume(d, &RunConfig::new(100_000, SEED + 700 + d as u64, workers())).unwrap();
        for r in [&b, &v] {
            let rel = r.relative_error().unwrap();
            let z = r.z.unwrap();
            ok &= z.abs() <= Z && rel <= 0.02;
            parts.push(format!("{}{d}: z={z:.2} rel={:.2}%", &r.name[..1], 100.0 * rel));
        }
    }
    report(6, "Blaschke and simplex volume", ok, Duration::from_secs(60), start.elapsed(), &parts.join(", "));
}

#[test]
fn criterion_07_truncated_lower_bound() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for d in 3..=8usize {
        for (j, t) in [0.0, 0.5, 2.0].into_iter().enumerate() {
            let cfg = RunConfig::new(20_000, SEED + 800 + 10 * d as u64 + j as u64, workers());
            let r = verify_truncated_bound(d, t, &cfg).unwrap();
            let e = r.estimate.unwrap();
            worst = worst.min((e.mean + Z * e.std_error) / r.theory);
            ok &= r.passed;
        }
    }
    let detail = format!("18 cases, smallest (mean + 3 se) / bound = {worst:.3}");
    report(7, "truncated lower bound", ok, Duration::from_secs(120), start.elapsed(), &detail);
}

#[test]
fn criterion_08_estranged_estimator_consistency() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [2usize, 3] {
        let count = estranged_expectation_mc(d, &RunConfig::new(200_000, SEED + 900 + d as u64, workers())).unwrap();
        let pair = pair_facet_probability_mc(d, &RunConfig::new(200_000, SEED + 950 + d as u64, workers())).unwrap();
        let half = binomial(2 * d as u64, d as u64).unwrap() as f64 / 2.0;
        let z = count.z_between(&pair.scaled(half));
        ok &= z.abs() <= Z;
        parts.push(format!("d={d}: E N={:.5} half-binomial*P={:.5} z={z:.2}", count.mean, half * pair.mean));
    }
    report(8, "estranged estimator consistency", ok, Duration::from_secs(120), start.elapsed(), &parts.join(", "));
}

#[test]
fn criterion_09_lp_limit() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let r = verify_lp_limit(&[10.0, 100.0, 1000.0]).unwrap();
    let values: Vec<f64> =
        r.details["values"].as_array().unwrap().iter().map(|v| v["value"].as_f64().unwrap()).collect();
    let limit = (2.0 * std::f64::consts::PI).sqrt().recip();
    let ok = r.passed && (values[2] - limit).abs() <= 0.01 && values.windows(2).all(|w| w[0] < w[1]);
    let detail = format!("values {:.6} {:.6} {:.6}, limit {limit:.6}", values[0], values[1], values[2]);
    report(9, "L^p limit", ok, Duration::from_secs(1), start.elapsed(), &detail);
}

#[test]
fn criterion_10_determinism() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let commands: [&[&str]; 7] = [
        &["kfacets", "mc", "--d", "2", "--n", "6", "--all-k", "--trials", "20000", "--seed", "3"],
        &["kfacets", "mc", "--d", "3", "--n", "7", "--k", "1", "--trials", "20000", "--seed", "3"],
        &["kfacets", "reduced", "--d", "4", "--n", "8", "--k", "2", "--trials", "200000", "--seed", "3"],
        &["estranged", "mc", "--d", "3", "--trials", "20000", "--seed", "3"],
        &["estranged", "pairprob", "--d", "4", "--trials", "20000", "--seed", "3"],
        &["growth", "--alpha", "2", "--d-min", "2", "--d-max", "4", "--trials", "2000", "--seed", "3"],
        &["verify", "--suite", "simplex", "--seed", "3"],
    ];
    let mut ok = true;
    let mut mismatched = Vec::new();
    for cmd in commands {
        let one = gpoly(&[cmd, &["--workers", "1"]].concat());
        let eight = gpoly(&[cmd, &["--workers", "8"]].concat());
        let again = gpoly(&[cmd, &["--workers", "8"]].concat());
        let same = one.status.success()
            && !one.stdout.is_empty()
            && one.stdout == eight.stdout
            && eight.stdout == again.stdout;
        if !same {
            mismatched.push(cmd[..2].join(" "));
        }
        ok &= same;
    }
    let detail = if mismatched.is_empty() {
        format!("{} commands byte-identical across workers 1/8 and reruns", commands.len())
    } else {
        format!("mismatch: {}", mismatched.join("; "))
    };
    report(10, "determinism", ok, Duration::from_secs(60), start.elapsed(), &detail);
}
