//! The ten acceptance criteria, each reported as one PASS/FAIL line.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use spinfloquet::selfcheck::{self, SuiteResult, DEFAULT_SEED};
use spinfloquet::sweep::read_csv;
use spinfloquet::units::{ev_to_rad_per_s, reference_decay_rate};
use spinfloquet::SweepRow;

const BIN: &str = env!("CARGO_BIN_EXE_spinfloquet");

struct Outcome {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn repo_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn from_suite(id: u32, name: &'static str, budget_s: Option<f64>, suite: SuiteResult) -> Outcome {
    let in_time = budget_s.map_or(true, |b| suite.seconds < b);
    let budget = budget_s.map_or(String::new(), |b| format!(", budget {b} s"));
    Outcome {
        id,
        name,
        passed: suite.passed && in_time,
        detail: format!(
            "worst {:.3e} vs tol {:.0e}; {}; {:.2} s{}",
            suite.worst, suite.tolerance, suite.detail, suite.seconds, budget
        ),
    }
}

fn decay_constant_value() -> Outcome {
    let fixture: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(repo_file("crates/core/tests/fixtures/gamma_ref_1ev.json")).unwrap(),
    )
    .unwrap();
    let hand = fixture["gamma_ref_per_s"].as_f64().unwrap();
    let g = reference_decay_rate(ev_to_rad_per_s(1.0)).unwrap();
    let rel = (g / hand - 1.0).abs();
    Outcome {
        id: 7,
        name: "decay constant at 1 eV",
        passed: rel < 1e-3 && (g - 7.08).abs() < 0.01,
        detail: format!("γ_ref = {g:.9} 1/s, hand fixture {hand:.9}, rel {rel:.1e}"),
    }
}

fn sweep_csv(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let status = Command::new(BIN)
        .args(["sweep", "--config"])
        .arg(repo_file("configs/anisotropy_map.json"))
        .arg("--output")
        .arg(&out)
        .arg("--quiet")
        .args(extra)
        .env_remove("SPINFLOQUET_THREADS")
        .status()
        .unwrap();
    assert!(status.success());
    out
}

fn rows_by_h0(rows: &[SweepRow]) -> Vec<Vec<SweepRow>> {
    let mut groups: Vec<Vec<SweepRow>> = Vec::new();
    for r in rows {
        match groups.last_mut() {
            Some(g) if g[0].H0 == r.H0 => g.push(*r),
            _ => groups.push(vec![*r]),
        }
    }
    groups
}

/// `(ω0/Ω)(1 − e^{−Γτ0})` from the columns of one row.
fn envelope(r: &SweepRow) -> f64 {
    (-(-r.Gamma * r.tau0).exp_m1()) / r.x.hypot(1.0)
}

fn rabi_sq(r: &SweepRow) -> f64 {
    let ratio = r.x / r.x.hypot(1.0);
    ratio * ratio
}

fn anisotropy_map(dir: &Path) -> Outcome {
    let rows = read_csv(&sweep_csv(dir, "anisotropy_map.csv", &[])).unwrap();
    let groups = rows_by_h0(&rows);
    let mut notes = Vec::new();

    // (a) fringes: in the femtosecond block ΔW/envelope = 1 − R² sin²(Ωτ0/2);
    // consecutive minima sit one period 2π/Ω apart
    let mut fringes_ok = true;
    let mut checked = 0;
    let mut worst_period = 0.0f64;
    for g in groups.iter().filter(|g| g[0].x > 0.2) {
        let fine: Vec<&SweepRow> = g.iter().filter(|r| r.tau0 < 1e-9).collect();
        let step = fine[1].tau0 - fine[0].tau0;
        let f: Vec<f64> = fine.iter().map(|r| r.Delta_W / envelope(r)).collect();
        let minima: Vec<usize> = (1..f.len() - 1).filter(|&i| f[i] < f[i - 1] && f[i] <= f[i + 1]).collect();
        let period = std::f64::consts::TAU / fine[0].Omega;
        if minima.len() < 3 {
            fringes_ok = false;
        }
        for w in minima.windows(2) {
            let spacing = fine[w[1]].tau0 - fine[w[0]].tau0;
            worst_period = worst_period.max((spacing - period).abs() / period);
            fringes_ok &= (spacing - period).abs() <= 2.0 * step;
        }
        for &i in &minima {
            fringes_ok &= (f[i] - (1.0 - rabi_sq(fine[i]))).abs() < 1e-2 * rabi_sq(fine[i]) + 1e-12;
        }
        checked += 1;
    }
    fringes_ok &= checked > 0;
    notes.push(format!("(a) {checked} H0 rows, minima spacing within {worst_period:.1e} of 2π/Ω"));

    // (b) every point lies between (1 − R²)·envelope and the envelope, and the
    // strongest-field row saturates at ω0/Ω
    let mut bounded = true;
    for r in &rows {
        let env = envelope(r);
        bounded &= r.Delta_W <= env * (1.0 + 1e-12) && r.Delta_W >= (1.0 - rabi_sq(r)) * env * (1.0 - 1e-12);
    }
    let top = groups.last().unwrap();
    let last = top.last().unwrap();
    let ceiling = 1.0 / last.x.hypot(1.0);
    let saturated = envelope(last) > 0.99 * ceiling
        && last.Delta_W >= (1.0 - rabi_sq(last)) * 0.99 * ceiling
        && top.iter().any(|r| r.Gamma * r.tau0 < 1e-3);
    notes.push(format!(
        "(b) bounded by envelope: {bounded}; Γτ0 = {:.1} at the top row, envelope/(ω0/Ω) = {:.4}",
        last.Gamma * last.tau0,
        envelope(last) / ceiling
    ));

    // (c) zero-field row vanishes, and the peak anisotropy shrinks toward it
    let zero_row = groups[0].iter().all(|r| r.H0 == 0.0 && r.Delta_W == 0.0);
    let peaks: Vec<f64> = groups
        .iter()
        .filter(|g| g[0].x <= 0.3)
        .map(|g| g.iter().map(|r| r.Delta_W).fold(0.0, f64::max))
        .collect();
    let shrinking = peaks.len() >= 3 && peaks.windows(2).all(|w| w[0] < w[1]) && peaks[0] == 0.0;
    notes.push(format!("(c) zero row {zero_row}, peaks over {} low-field rows increase from 0", peaks.len()));

    Outcome {
        id: 9,
        name: "anisotropy map structure",
        passed: fringes_ok && bounded && saturated && zero_row && shrinking,
        detail: notes.join("; "),
    }
}

fn determinism(dir: &Path) -> Outcome {
    let mut files = Vec::new();
    for format in ["csv", "json"] {
        for threads in ["1", "2", "8"] {
            let path = sweep_csv(dir, &format!("t{threads}.{format}"), &["--threads", threads, "--format", format]);
            files.push((format, threads, std::fs::read(path).unwrap()));
        }
    }
    // the environment default takes the same path
    let env_out = dir.join("env.csv");
    let status = Command::new(BIN)
        .args(["sweep", "--quiet", "--config"])
        .arg(repo_file("configs/anisotropy_map.json"))
        .arg("--output")
        .arg(&env_out)
        .env("SPINFLOQUET_THREADS", "3")
        .status()
        .unwrap();
    assert!(status.success());
    let env_bytes = std::fs::read(env_out).unwrap();
    let csv_same = files.iter().filter(|f| f.0 == "csv").all(|f| f.2 == files[0].2) && env_bytes == files[0].2;
    let json_same = files.iter().filter(|f| f.0 == "json").all(|f| f.2 == files[3].2);
    Outcome {
        id: 10,
        name: "byte-identical output at 1/2/8 threads",
        passed: csv_same && json_same,
        detail: format!("csv identical: {csv_same}, json identical: {json_same} ({} bytes csv)", files[0].2.len()),
    }
}

#[test]
fn acceptance_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let seed = DEFAULT_SEED;
    let started = Instant::now();
    let outcomes = vec![
        from_suite(1, "Floquet exactness", Some(1.0), selfcheck::floquet_residual(seed)),
        from_suite(2, "quasienergy oracle", Some(10.0), selfcheck::quasienergy_oracle()),
        from_suite(3, "Rabi equivalence", Some(30.0), selfcheck::rabi_equivalence(seed)),
        from_suite(4, "scenario identity", Some(5.0), selfcheck::scenario_identity(seed)),
        from_suite(5, "anisotropy identities", None, selfcheck::anisotropy_identities(seed)),
        from_suite(6, "Weisskopf-Wigner validation", Some(60.0), selfcheck::weisskopf_wigner()),
        decay_constant_value(),
        from_suite(8, "Monte Carlo consistency", Some(30.0), selfcheck::monte_carlo_consistency(seed)),
        anisotropy_map(dir.path()),
        determinism(dir.path()),
    ];
    for o in &outcomes {
        println!("{} criterion {:>2} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.name, o.detail);
    }
    println!("acceptance suite finished in {:.1} s", started.elapsed().as_secs_f64());
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
