//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Built with `harness = false` so the lines reach the terminal under a plain
//! `cargo test`. Exits non-zero when any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use hodge_core::hodge::{dual_hodge_curvature, hodge_curvature, Bundle};
use hodge_core::oracle::{finite_difference_curvature, relative_error};
use hodge_core::runner::rank_locus_report;
use hodge_core::sampling::{derive_seed, random_siegel_point, stream_rng};
use hodge_core::segre::{
    check_pointwise_identity, check_positivity_and_vanishing, check_quadrature_route, check_remark_equality,
    check_route_agreement,
};
use hodge_core::slice::slice_suite;
use hodge_core::symmap::theorem25_suite;
use hodge_core::{SiegelPoint, VerificationReport};

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn listed(bad: &[String]) -> String {
    if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join("; ")) }
}

fn points(g: usize, count: usize, label: &str) -> Vec<SiegelPoint> {
    let mut rng = stream_rng(derive_seed(SEED, label), g as u64);
    (0..count).map(|_| random_siegel_point(g, &mut rng)).collect()
}

fn failures(report: &VerificationReport) -> Vec<String> {
    report.failures().map(|c| format!("{} = {:e}", c.name, c.measured)).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for g in 1..=3 {
        for tau in points(g, 20, "identity") {
            let report = check_pointwise_identity(&tau, 1e-9);
            worst = worst.max(report.max_measured("c*s=1"));
            bad.extend(failures(&report));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && worst < 1e-9 && secs < 30.0,
        format!("c*s = 1 on 60 points, g = 1..3: max deviation {worst:.2e}, {secs:.2} s{}", listed(&bad)),
    )
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for g in 1..=3 {
        for tau in points(g, 20, "identity") {
            let report = check_route_agreement(&tau, 1e-10);
            worst = worst.max(report.max_measured("route"));
            bad.extend(failures(&report));
        }
    }
    let mut max_sigmas = 0.0f64;
    for (t, tau) in points(2, 2, "quadrature").iter().enumerate() {
        match check_quadrature_route(tau, 3, 100_000, derive_seed(SEED, &format!("quadrature-{t}")), 3.0) {
            Ok(report) => {
                max_sigmas = max_sigmas.max(report.max_measured("quadrature"));
                bad.extend(failures(&report));
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    outcome(
        bad.is_empty() && worst < 1e-10 && max_sigmas <= 3.0,
        format!("moment vs inverse route max {worst:.2e}; quadrature g = 2, k <= 3, 1e5 samples: max {max_sigmas:.2} sigmas{}", listed(&bad)),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for g in 1..=3 {
        for tau in points(g, 20, "curvature") {
            for (bundle, exact) in [(Bundle::HodgeDual, dual_hodge_curvature(&tau)), (Bundle::Hodge, hodge_curvature(&tau))] {
                let approx = finite_difference_curvature(&tau, bundle, 1e-5);
                worst = worst.max(relative_error(&approx, &exact));
            }
        }
    }
    outcome(
        worst < 1e-6,
        format!(
            "curvature of E and E* vs finite differences at step 1e-5, 20 points per g <= 3: max relative error {worst:.2e}, {:.1} s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut reported = Vec::new();
    let mut bad = Vec::new();
    for g in 1..=3 {
        for tau in points(g, 20, "remark") {
            for k in 1..=g {
                match check_remark_equality(&tau, k, 1e-9) {
                    Ok(report) => {
                        let diff = report.max_measured("c_");
                        if k <= 2 {
                            worst = worst.max(diff);
                            bad.extend(failures(&report));
                        } else {
                            reported.push(diff);
                        }
                    }
                    Err(e) => bad.push(e.to_string()),
                }
            }
        }
    }
    let k3 = reported.iter().copied().fold(0.0, f64::max);
    outcome(
        bad.is_empty() && worst < 1e-9,
        format!("c_k(E) = s_k(E*) for k <= 2: max difference {worst:.2e}; k = 3 (reported only): max {k3:.2e}{}", listed(&bad)),
    )
}

fn criterion_5() -> Outcome {
    let mut min_lambda = f64::INFINITY;
    let mut bad = Vec::new();
    for g in 1..=3 {
        for (t, tau) in points(g, 5, "positivity").iter().enumerate() {
            for k in 1..=g {
                match check_positivity_and_vanishing(tau, k, 1000, derive_seed(SEED, &format!("pos-{g}-{k}-{t}")), 1e-10) {
                    Ok(report) => {
                        let m = report.min_measured("min restriction on random planes");
                        min_lambda = min_lambda.min(m);
                        if m < -1e-10 {
                            bad.push(format!("g={g}, k={k}: {m:e}"));
                        }
                    }
                    Err(e) => bad.push(e.to_string()),
                }
            }
        }
    }
    outcome(
        bad.is_empty() && min_lambda >= -1e-10,
        format!("s_k restricted to 1000 random k-planes, k <= g <= 3, 5 points: min {min_lambda:.3e}{}", listed(&bad)),
    )
}

fn criterion_6() -> Outcome {
    let mut max_abs = 0.0f64;
    let mut max_rank_ok = true;
    let mut bad = Vec::new();
    for g in [3, 4] {
        for (t, tau) in points(g, 2, "vanishing").iter().enumerate() {
            match check_positivity_and_vanishing(tau, 3, 200, derive_seed(SEED, &format!("van-{g}-{t}")), 1e-10) {
                Ok(report) => {
                    let m = report.max_measured("max |restriction| inside W-perp");
                    let held = report.find("rank(e_v|W-perp) <= i-1 on exact samples").is_some_and(|c| c.passed);
                    let dim_ok = report.find("dim W-perp vs i(i-1)/2").is_some_and(|c| c.passed);
                    max_abs = max_abs.max(m);
                    max_rank_ok &= held && dim_ok;
                    if !(m < 1e-10 && held && dim_ok) {
                        bad.push(format!("g={g}, point {t}: |lambda| {m:e}, rank bound {held}, dim {dim_ok}"));
                    }
                }
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    outcome(
        bad.is_empty() && max_rank_ok,
        format!("i = 3, g in {{3, 4}}: max |s_3 on 3-planes in W-perp| {max_abs:.2e}, rank(e_v|W-perp) <= 2 on 100 exact v{}", listed(&bad)),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checks = 0;
    for (g, i) in [(3, 3), (4, 3), (5, 3), (4, 4)] {
        match theorem25_suite(g, i, 50, derive_seed(SEED, &format!("thm-{g}-{i}"))) {
            Ok(report) => {
                checks += report.checks.len();
                bad.extend(failures(&report).into_iter().map(|f| format!("(g={g}, i={i}) {f}")));
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && secs < 60.0,
        format!("(g, i) in (3,3), (4,3), (5,3), (4,4), 50 trials each: {checks} checks, {secs:.2} s{}", listed(&bad)),
    )
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    let mut pairs = 0;
    for g in 2..=4 {
        match rank_locus_report(g, 100, derive_seed(SEED, "rank-locus")) {
            Ok(report) => {
                pairs += 100 * (g - 1);
                bad.extend(failures(&report).into_iter().map(|f| format!("g={g}: {f}")));
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    outcome(
        bad.is_empty(),
        format!("tangent predicate vs minor derivatives on {pairs} exact pairs, g <= 4, 1 <= k < g{}", listed(&bad)),
    )
}

fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    let (mut diff, mut dist, mut j2, mut symp) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for g in 1..=4 {
        match slice_suite(g, 25, 4, derive_seed(SEED, &format!("slice-{g}"))) {
            Ok(report) => {
                diff = diff.max(report.max_measured("member differences outside W-perp"));
                dist = dist.max(report.max_measured("distance f_M(W)"));
                j2 = j2.max(report.max_measured("J^2 + I"));
                symp = symp.max(report.max_measured("J^T Omega J - Omega"));
                bad.extend(failures(&report).into_iter().map(|f| format!("g={g}: {f}")));
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    outcome(
        bad.is_empty() && diff <= 1e-12 && dist < 1e-10 && j2 < 1e-10 && symp < 1e-10,
        format!(
            "100 slices, g <= 4: W-perp residual {diff:.1e}, f_M(W) distance {dist:.1e}, |J^2+I| {j2:.1e}, symplectic {symp:.1e}{}", listed(&bad)
        ),
    )
}

/// The report with every `wall_time_ms` line removed, byte for byte otherwise.
fn without_wall_time(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("\"wall_time_ms\"")).collect::<Vec<_>>().join("\n")
}

fn criterion_10() -> Outcome {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return outcome(false, format!("tempdir: {e}")),
    };
    let config = dir.path().join("config.json");
    let body = serde_json::json!({
        "genus_list": [2, 3],
        "suites": ["forms-identity", "average-wedge", "rank-locus", "slice-61", "symmap-thm25"],
        "seed": 7,
        "n_samples": 2000,
        "trials": 5
    });
    if let Err(e) = std::fs::write(&config, body.to_string()) {
        return outcome(false, format!("write config: {e}"));
    }
    // the output path is part of the recorded config, so both runs share it
    let out = dir.path().join("report.json");
    let mut reports = Vec::new();
    for run in 0..2 {
        let status = Command::new(env!("CARGO_BIN_EXE_hodge-verify"))
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .env_remove("VERIFY_SEED")
            .stderr(std::process::Stdio::null())
            .status();
        match status {
            Ok(s) if s.success() => {}
            Ok(s) => return outcome(false, format!("run {run} exited with {s}")),
            Err(e) => return outcome(false, format!("spawn: {e}")),
        }
        let text = match std::fs::read_to_string(&out) {
            Ok(t) => t,
            Err(e) => return outcome(false, format!("read report: {e}")),
        };
        reports.push(without_wall_time(&text));
    }
    let same = reports[0] == reports[1];
    outcome(same, format!("two CLI runs, same config and seed: reports identical without wall_time_ms = {same}"))
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut all = true;
    for (n, criterion) in criteria.iter().enumerate() {
        let o = criterion();
        all &= o.passed;
        println!("{} criterion {:>2}: {}", if o.passed { "PASS" } else { "FAIL" }, n + 1, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
