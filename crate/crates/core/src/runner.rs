//! Suite execution for the `hodge-verify` command-line tool.
//!
//! A run resolves a [`RunConfig`], executes each requested suite for each
//! requested genus, and assembles one JSON document whose suites are sorted
//! by name, so the output does not depend on scheduling.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::hodge::{dual_hodge_curvature, hodge_curvature, Bundle};
use crate::oracle::{finite_difference_curvature, relative_error};
use crate::report::{CheckRecord, VerificationReport};
use crate::sampling::{derive_seed, random_siegel_point, stream_rng};
use crate::segre::{
    check_average_wedge_powers, check_pointwise_identity, check_positivity_and_vanishing,
    check_quadrature_route, check_remark_equality, check_route_agreement, MIN_SAMPLES,
};
use crate::slice::slice_suite;
use crate::symmap::{random_rank_locus_pair, rank_locus_tangent_check, theorem25_suite};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "VERIFY_SEED";

pub const SUITES: [&str; 8] = [
    "average-wedge",
    "curvature-fd",
    "forms-identity",
    "positivity-vanishing",
    "rank-locus",
    "remark",
    "slice-61",
    "symmap-thm25",
];

/// Tolerance names and default values.
pub const TOLERANCES: [(&str, f64); 7] = [
    ("identity", 1e-9),
    ("routes", 1e-10),
    ("sigmas", 3.0),
    ("curvature", 1e-6),
    ("fd_step", 1e-5),
    ("remark", 1e-9),
    ("positivity", 1e-10),
];

fn default_genus_list() -> Vec<usize> {
    vec![2]
}

fn default_samples() -> usize {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_genus_list")]
    pub genus_list: Vec<usize>,
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output_path: Option<String>,
    /// The index `i` for positivity-vanishing and symmap-thm25.
    #[serde(default)]
    pub index: Option<usize>,
    /// Overrides every suite's trial count.
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            genus_list: default_genus_list(),
            suites: Vec::new(),
            seed: None,
            n_samples: default_samples(),
            tolerances: BTreeMap::new(),
            output_path: None,
            index: None,
            trials: None,
            parallel: false,
        }
    }
}

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::ConfigInvalid { field: field.to_string(), message: message.into() }
}

impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            invalid(if path == "." { "config" } else { &path }, e.inner().to_string())
        })
    }

    /// Schema checks beyond what deserialization enforces.
    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(invalid("suites", "at least one suite is required"));
        }
        if let Some(bad) = self.suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(Error::SuiteUnknown(bad.clone()));
        }
        if self.genus_list.is_empty() {
            return Err(invalid("genus_list", "at least one genus is required"));
        }
        if let Some(&g) = self.genus_list.iter().find(|&&g| g == 0 || g > crate::extform::MAX_GENUS) {
            return Err(invalid("genus_list", format!("genus {g} outside 1..={}", crate::extform::MAX_GENUS)));
        }
        if self.n_samples < MIN_SAMPLES {
            return Err(invalid("n_samples", format!("{} < {MIN_SAMPLES}", self.n_samples)));
        }
        for (name, &value) in &self.tolerances {
            if !TOLERANCES.iter().any(|(known, _)| known == name) {
                return Err(invalid(&format!("tolerances.{name}"), "unknown tolerance"));
            }
            if !(value.is_finite() && value > 0.0) {
                return Err(invalid(&format!("tolerances.{name}"), format!("must be positive, got {value}")));
            }
        }
        if self.index == Some(0) {
            return Err(invalid("index", "must be at least 1"));
        }
        if self.trials == Some(0) {
            return Err(invalid("trials", "must be at least 1"));
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            TOLERANCES.iter().find(|(k, _)| *k == name).map(|(_, v)| *v).expect("known tolerance name")
        })
    }

    /// Configured seed, else `VERIFY_SEED`, else [`DEFAULT_SEED`].
    pub fn effective_seed(&self) -> Result<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(text) => text.trim().parse().map_err(|_| invalid("seed", format!("{SEED_ENV}={text} is not a u64"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }

    fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub seed: u64,
    pub config: RunConfig,
    pub passed: bool,
    pub suites: Vec<VerificationReport>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn random_points(g: usize, count: usize, seed: u64) -> Vec<crate::linalg::SiegelPoint> {
    let mut rng = stream_rng(seed, g as u64);
    (0..count).map(|_| random_siegel_point(g, &mut rng)).collect()
}

fn prefixed(into: &mut VerificationReport, g: usize, sub: VerificationReport) {
    into.absorb(&format!("g={g}: "), sub);
}

fn skip(report: &mut VerificationReport, g: usize, why: &str) {
    report.push(CheckRecord::report_only(&format!("g={g}: skipped"), "unsupported genus", g as f64).with_notes(why));
}

fn forms_identity(cfg: &RunConfig, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("forms-identity", json!({}));
    for &g in &cfg.genus_list {
        if g > 3 {
            skip(&mut report, g, "full-degree forms are limited to g <= 3");
            continue;
        }
        let mut acc = VerificationReport::new("forms-identity", json!({}));
        for tau in random_points(g, cfg.trials_or(20), seed) {
            acc.fold_worst(check_pointwise_identity(&tau, cfg.tolerance("identity")));
            acc.fold_worst(check_route_agreement(&tau, cfg.tolerance("routes")));
        }
        let tau = &random_points(g, 1, derive_seed(seed, "quadrature"))[0];
        acc.fold_worst(check_quadrature_route(tau, 3, cfg.n_samples, seed, cfg.tolerance("sigmas"))?);
        prefixed(&mut report, g, acc);
    }
    Ok(report)
}

fn remark(cfg: &RunConfig, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("remark", json!({}));
    for &g in &cfg.genus_list {
        if g > 3 {
            skip(&mut report, g, "full-degree forms are limited to g <= 3");
            continue;
        }
        let mut acc = VerificationReport::new("remark", json!({}));
        for tau in random_points(g, cfg.trials_or(20), seed) {
            for k in 1..=g.min(3) {
                acc.fold_worst(check_remark_equality(&tau, k, cfg.tolerance("remark"))?);
            }
        }
        prefixed(&mut report, g, acc);
    }
    Ok(report)
}

fn positivity(cfg: &RunConfig, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("positivity-vanishing", json!({}));
    for &g in &cfg.genus_list {
        if g > 5 {
            skip(&mut report, g, "limited to g <= 5");
            continue;
        }
        let indices: Vec<usize> = match cfg.index {
            Some(i) if i <= g => vec![i],
            Some(_) => {
                skip(&mut report, g, "index exceeds genus");
                continue;
            }
            None => (1..=g.min(3)).collect(),
        };
        let mut acc = VerificationReport::new("positivity-vanishing", json!({}));
        for (t, tau) in random_points(g, 5, seed).iter().enumerate() {
            for &i in &indices {
                let sub = check_positivity_and_vanishing(
                    tau,
                    i,
                    cfg.trials_or(1000),
                    derive_seed(seed, &format!("g{g}-i{i}-t{t}")),
                    cfg.tolerance("positivity"),
                )?;
                acc.absorb(&format!("i={i}: "), sub);
            }
        }
        let mut folded = VerificationReport::new("positivity-vanishing", json!({}));
        folded.fold_worst(acc);
        prefixed(&mut report, g, folded);
    }
    Ok(report)
}

fn average_wedge(cfg: &RunConfig, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("average-wedge", json!({}));
    for &g in &cfg.genus_list {
        if g > 3 {
            skip(&mut report, g, "full-degree forms are limited to g <= 3");
            continue;
        }
        let tau = &random_points(g, 1, seed)[0];
        for k in 1..=g {
            let sub = check_average_wedge_powers(
                tau,
                k,
                cfg.n_samples,
                derive_seed(seed, &format!("g{g}-k{k}")),
                cfg.tolerance("sigmas"),
            )?;
            report.absorb(&format!("g={g}, k={k}: "), sub);
        }
    }
    Ok(report)
}

fn curvature_fd(cfg: &RunConfig, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("curvature-fd", json!({}));
    let step = cfg.tolerance("fd_step");
    for &g in &cfg.genus_list {
        let mut worst = [0.0f64; 2];
        for tau in random_points(g, cfg.trials_or(20), seed) {
            for (slot, (bundle, exact)) in
                [(Bundle::HodgeDual, dual_hodge_curvature(&tau)), (Bundle::Hodge, hodge_curvature(&tau))]
                    .into_iter()
                    .enumerate()
            {
                let approx = finite_difference_curvature(&tau, bundle, step);
                worst[slot] = worst[slot].max(relative_error(&approx, &exact));
            }
        }
        for (label, err) in [("E*", worst[0]), ("E", worst[1])] {
            report.push(CheckRecord::at_most(
                &format!("g={g}: curvature of {label} vs finite differences"),
                "curvature of the tautological metric in closed form",
                err,
                cfg.tolerance("curvature"),
            ));
        }
    }
    Ok(report)
}

fn thm25(cfg: &RunConfig, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("symmap-thm25", json!({}));
    for &g in &cfg.genus_list {
        let i = cfg.index.unwrap_or(3);
        if !(3 <= i && i <= g && g <= 5) {
            skip(&mut report, g, "needs 3 <= i <= g <= 5");
            continue;
        }
        let sub = theorem25_suite(g, i, cfg.trials_or(50), derive_seed(seed, &format!("g{g}-i{i}")))?;
        report.absorb(&format!("g={g}, i={i}: "), sub);
    }
    Ok(report)
}

/// Tangent-test agreement on random `(M, N)`, half of them tangent by construction.
pub fn rank_locus_report(g: usize, trials: usize, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("rank-locus", json!({ "genus": g, "trials": trials }));
    for k in 1..g {
        let mut rng = stream_rng(derive_seed(seed, &format!("rank-locus-{k}")), g as u64);
        let (mut disagree, mut tangent_ok, mut tangent_total, mut generic_out) = (0, 0, 0, 0);
        for t in 0..trials {
            let tangent = t % 2 == 0;
            let (m, n) = random_rank_locus_pair(g, k, tangent, &mut rng);
            let verdict = rank_locus_tangent_check(&m, &n, k)?;
            disagree += usize::from(!verdict.agree());
            if tangent {
                tangent_total += 1;
                tangent_ok += usize::from(verdict.predicate);
            } else {
                generic_out += usize::from(!verdict.predicate);
            }
        }
        let anchor = "tangent space of the rank locus is {N : N(ker M) in im M}";
        report.push(CheckRecord::at_most(&format!("k={k}: disagreements"), anchor, disagree as f64, 0.0));
        report.push(CheckRecord::at_least(
            &format!("k={k}: constructed tangents accepted"),
            anchor,
            tangent_ok as f64,
            tangent_total as f64,
        ));
        report.push(CheckRecord::report_only(&format!("k={k}: generic directions rejected"), anchor, generic_out as f64));
    }
    Ok(report)
}

fn rank_locus(cfg: &RunConfig, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("rank-locus", json!({}));
    for &g in &cfg.genus_list {
        if g < 2 {
            skip(&mut report, g, "needs g >= 2");
            continue;
        }
        prefixed(&mut report, g, rank_locus_report(g, cfg.trials_or(100), seed)?);
    }
    Ok(report)
}

fn slice61(cfg: &RunConfig, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("slice-61", json!({}));
    for &g in &cfg.genus_list {
        let sub = slice_suite(g, cfg.trials_or(25), 4, derive_seed(seed, &format!("g{g}")))?;
        prefixed(&mut report, g, sub);
    }
    Ok(report)
}

/// Runs one named suite over every configured genus.
pub fn run_suite(name: &str, cfg: &RunConfig, seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let seed = derive_seed(seed, name);
    let mut report = match name {
        "average-wedge" => average_wedge(cfg, seed),
        "curvature-fd" => curvature_fd(cfg, seed),
        "forms-identity" => forms_identity(cfg, seed),
        "positivity-vanishing" => positivity(cfg, seed),
        "rank-locus" => rank_locus(cfg, seed),
        "remark" => remark(cfg, seed),
        "slice-61" => slice61(cfg, seed),
        "symmap-thm25" => thm25(cfg, seed),
        other => Err(Error::SuiteUnknown(other.to_string())),
    }?;
    report.params = json!({
        "genus_list": cfg.genus_list,
        "n_samples": cfg.n_samples,
        "index": cfg.index,
        "trials": cfg.trials,
    });
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Validates the config and runs every requested suite.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let seed = cfg.effective_seed()?;
    let mut names: Vec<&str> = cfg.suites.iter().map(String::as_str).collect();
    names.sort_unstable();
    names.dedup();
    let reports: Vec<Result<VerificationReport>> = if cfg.parallel {
        names.par_iter().map(|n| run_suite(n, cfg, seed)).collect()
    } else {
        names.iter().map(|n| run_suite(n, cfg, seed)).collect()
    };
    let suites = reports.into_iter().collect::<Result<Vec<_>>>()?;
    let passed = suites.iter().all(VerificationReport::passed);
    let mut config = cfg.clone();
    config.seed = Some(seed);
    Ok(RunReport { schema_version: SCHEMA_VERSION, seed, config, passed, suites })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suites: &[&str], genus: &[usize]) -> RunConfig {
        RunConfig {
            suites: suites.iter().map(|s| s.to_string()).collect(),
            genus_list: genus.to_vec(),
            seed: Some(7),
            ..RunConfig::default()
        }
    }

    #[test]
    fn parses_and_rejects() {
        let c = RunConfig::from_json_str(r#"{"suites": ["remark"], "genus_list": [1, 2], "seed": 5}"#).unwrap();
        assert_eq!(c.seed, Some(5));
        assert_eq!(c.n_samples, default_samples());
        match RunConfig::from_json_str(r#"{"suites": [], "bogus": 1}"#) {
            Err(Error::ConfigInvalid { message, .. }) => assert!(message.contains("bogus")),
            other => panic!("{other:?}"),
        }
        match RunConfig::from_json_str(r#"{"n_samples": "many"}"#) {
            Err(Error::ConfigInvalid { field, .. }) => assert_eq!(field, "n_samples"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation() {
        assert!(cfg(&["remark"], &[2]).validate().is_ok());
        assert!(matches!(cfg(&["nope"], &[2]).validate(), Err(Error::SuiteUnknown(s)) if s == "nope"));
        assert!(matches!(cfg(&[], &[2]).validate(), Err(Error::ConfigInvalid { field, .. }) if field == "suites"));
        assert!(matches!(cfg(&["remark"], &[0]).validate(), Err(Error::ConfigInvalid { .. })));
        let mut c = cfg(&["remark"], &[2]);
        c.n_samples = 99;
        assert!(matches!(c.validate(), Err(Error::ConfigInvalid { field, .. }) if field == "n_samples"));
        let mut c = cfg(&["remark"], &[2]);
        c.tolerances.insert("weird".into(), 1.0);
        assert!(matches!(c.validate(), Err(Error::ConfigInvalid { field, .. }) if field == "tolerances.weird"));
        let mut c = cfg(&["remark"], &[2]);
        c.tolerances.insert("remark".into(), -1.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn small_run_is_deterministic_and_sorted() {
        let mut c = cfg(&["remark", "curvature-fd"], &[1, 2]);
        c.trials = Some(3);
        let a = run(&c).unwrap();
        assert!(a.passed, "{}", a.to_json());
        assert_eq!(a.suites[0].suite, "curvature-fd");
        c.parallel = true;
        let mut b = run(&c).unwrap();
        let mut a2 = a.clone();
        for r in a2.suites.iter_mut().chain(b.suites.iter_mut()) {
            r.wall_time_ms = 0;
        }
        b.config.parallel = false;
        assert_eq!(a2.to_json(), b.to_json());
    }
}
