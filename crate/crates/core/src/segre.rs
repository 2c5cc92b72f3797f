//! Chern and Segre forms of `(E*, h)` and `(E, Im τ)` at a point.
//!
//! Segre forms of `E*` come from three independent routes:
//! - the inverse of the total Chern form `det(I − G)`;
//! - the power-sum formula `s_k = Σ_{λ ⊢ k} p_λ / z_λ`, with `p_m = tr(G^m)`;
//! - Monte Carlo averaging of `binom(g+k−1, k) · ⟨Gv, v⟩^k` over the unit
//!   sphere of the fiber (normalized measure, so `s_0 = 1`).
//!
//! The entries of `G` are (1,1)-forms and therefore commute, which is what
//! makes the power-sum route valid.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::extform::{ExtForm, FormMatrix, GeneratorIndex};
use crate::hodge::{herm_form_l, Bundle, CurvaturePackage};
use crate::linalg::{complexify, rank_with_kernel, Ambient, CMat, LinSubspace, SiegelPoint, C64};
use crate::report::{CheckRecord, VerificationReport};
use crate::sampling::{
    derive_seed, random_complex_vector, random_rational_vector, random_unit_vector, stream_rng,
    StreamRng,
};
use crate::symmap::{hypothesis_check_exact, wperp_exact, EvalOperator};

/// Samples per deterministic work unit of the Monte Carlo routes.
pub const QUADRATURE_CHUNK: usize = 1024;
pub const MIN_SAMPLES: usize = 100;

const ANCHOR_IDENTITY: &str = "Segre form of (E*, h) equals the inverse of its total Chern form pointwise";
const ANCHOR_ROUTES: &str = "power-sum formula for the fiber average agrees with the inverse Chern form";
const ANCHOR_QUADRATURE: &str = "Segre form as normalized average of <Gv,v>^k over the fiber";
const ANCHOR_PRODUCT: &str = "c(E) c(E*) = 1, measured at form level only";
const ANCHOR_REMARK: &str = "c_k(E, Im tau) = s_k(E*, h) at form level";
const ANCHOR_AVERAGE: &str = "Segre form is a positive multiple of the line average of k-th powers of the <,>_L forms";
const ANCHOR_POSITIVITY: &str = "s_i(E*) is non-negative on complex i-planes";
const ANCHOR_VANISHING: &str = "s_i(E*) vanishes on i-planes where every evaluation map fails to be injective";
const ANCHOR_INJECTIVE: &str = "s_i(E*) is positive on i-planes admitting an injective evaluation map";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegreRoute {
    InverseSeries,
    MomentFormula,
    Quadrature,
}

/// Graded pieces `c_0..c_g` of both bundles and `s_0..s_K` of `E*`.
#[derive(Debug, Clone)]
pub struct CharacteristicForms {
    pub chern_estar: Vec<ExtForm>,
    pub chern_e: Vec<ExtForm>,
    pub segre_estar: Vec<ExtForm>,
    pub route: SegreRoute,
}

impl CharacteristicForms {
    pub fn chern_total_estar(&self) -> ExtForm {
        sum_forms(&self.chern_estar)
    }

    pub fn chern_total_e(&self) -> ExtForm {
        sum_forms(&self.chern_e)
    }

    pub fn segre_total(&self) -> ExtForm {
        sum_forms(&self.segre_estar)
    }

    /// `s_k`, zero past the computed range.
    pub fn segre(&self, k: usize) -> ExtForm {
        self.segre_estar.get(k).cloned().unwrap_or_else(|| ExtForm::zero(self.genus()))
    }

    pub fn genus(&self) -> usize {
        self.chern_estar[0].genus()
    }
}

fn sum_forms(forms: &[ExtForm]) -> ExtForm {
    let mut out = ExtForm::zero(forms[0].genus()).with_max_degree(forms[0].max_degree());
    for f in forms {
        out = &out + f;
    }
    out
}

/// Degree-`2k` components for `k = 0..=k_max`.
pub fn graded(f: &ExtForm, k_max: usize) -> Vec<ExtForm> {
    (0..=k_max).map(|k| f.degree_component(2 * k)).collect()
}

/// `binom(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Total Chern form `det(I − G)` of the chosen bundle.
pub fn chern_total(pkg: &CurvaturePackage, bundle: Bundle) -> ExtForm {
    let g = pkg.genus();
    FormMatrix::identity(g, g)
        .with_max_degree(pkg.max_degree())
        .sub(&pkg.normalized_curvature(bundle))
        .determinant()
}

/// Number of Segre components kept: at least `2g`, and everything the degree cap allows.
fn segre_len(pkg: &CurvaturePackage) -> usize {
    (2 * pkg.genus()).max(pkg.max_degree() / 2)
}

fn chern_parts(pkg: &CurvaturePackage) -> (Vec<ExtForm>, Vec<ExtForm>) {
    let g = pkg.genus();
    (graded(&chern_total(pkg, Bundle::HodgeDual), g), graded(&chern_total(pkg, Bundle::Hodge), g))
}

pub fn segre_by_inverse(pkg: &CurvaturePackage) -> CharacteristicForms {
    let c = chern_total(pkg, Bundle::HodgeDual);
    let s = c.inverse_even().expect("det(I - G) has scalar part 1 and even degree");
    CharacteristicForms {
        chern_estar: graded(&c, pkg.genus()),
        chern_e: graded(&chern_total(pkg, Bundle::Hodge), pkg.genus()),
        segre_estar: graded(&s, segre_len(pkg)),
        route: SegreRoute::InverseSeries,
    }
}

/// `p_m = tr(G^m)` for `m = 0..=m_max` (`p_0 = g`).
pub fn power_sums(pkg: &CurvaturePackage, m_max: usize) -> Vec<ExtForm> {
    let g = pkg.genus();
    let gm = pkg.g_normalized();
    let mut out = vec![ExtForm::scalar(g, C64::new(g as f64, 0.0)).with_max_degree(pkg.max_degree())];
    let mut power = FormMatrix::identity(g, g).with_max_degree(pkg.max_degree());
    for m in 1..=m_max {
        if 2 * m > pkg.max_degree() {
            out.push(ExtForm::zero(g).with_max_degree(pkg.max_degree()));
            continue;
        }
        power = power.mul(gm).expect("same genus");
        out.push(power.trace());
    }
    out
}

/// Partitions of `k` as non-increasing part lists.
pub fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// `z_λ = Π_i i^{m_i} m_i!`, the centralizer order of cycle type `λ`.
pub fn z_lambda(lambda: &[usize]) -> f64 {
    let mut counts = BTreeMap::new();
    for &p in lambda {
        *counts.entry(p).or_insert(0usize) += 1;
    }
    counts
        .iter()
        .map(|(&i, &m)| (i as f64).powi(m as i32) * (1..=m).map(|j| j as f64).product::<f64>())
        .product()
}

/// `s_k = Σ_{λ ⊢ k} p_λ / z_λ`.
pub fn segre_from_power_sums(p: &[ExtForm], k: usize) -> ExtForm {
    let g = p[0].genus();
    let cap = p[0].max_degree();
    let mut out = ExtForm::zero(g).with_max_degree(cap);
    for lambda in partitions(k) {
        let mut term = ExtForm::one(g).with_max_degree(cap);
        for &part in &lambda {
            term = term.wedge(&p[part]).expect("same genus");
        }
        out = &out + &term.scale_real(1.0 / z_lambda(&lambda));
    }
    out
}

pub fn segre_by_moments(pkg: &CurvaturePackage, k_max: usize) -> CharacteristicForms {
    let p = power_sums(pkg, k_max);
    let (chern_estar, chern_e) = chern_parts(pkg);
    CharacteristicForms {
        chern_estar,
        chern_e,
        segre_estar: (0..=k_max).map(|k| segre_from_power_sums(&p, k)).collect(),
        route: SegreRoute::MomentFormula,
    }
}

/// `s_k(E*)` alone, through the power-sum route.
pub fn segre_component(pkg: &CurvaturePackage, k: usize) -> ExtForm {
    segre_from_power_sums(&power_sums(pkg, k), k)
}

/// Coefficientwise sample mean of a random form, with standard errors.
#[derive(Debug, Clone)]
pub struct FormAverage {
    pub mean: ExtForm,
    pub stderr: BTreeMap<u64, f64>,
    pub n_samples: usize,
}

impl FormAverage {
    pub fn stderr_of(&self, key: u64) -> f64 {
        self.stderr.get(&key).copied().unwrap_or(0.0)
    }

    pub fn max_stderr(&self) -> f64 {
        self.stderr.values().copied().fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> FormAverage {
        FormAverage {
            mean: self.mean.scale_real(s),
            stderr: self.stderr.iter().map(|(&k, &e)| (k, e * s.abs())).collect(),
            n_samples: self.n_samples,
        }
    }

    /// Largest `|mean − exact| / max(stderr, floor)` over the coefficients of either form.
    pub fn max_z(&self, exact: &ExtForm, floor: f64) -> f64 {
        let keys: std::collections::BTreeSet<u64> =
            self.mean.raw_terms().chain(exact.raw_terms()).map(|(k, _)| k).collect();
        keys.into_iter()
            .map(|k| {
                let diff = (self.mean.coefficient_of(k) - exact.coefficient_of(k)).norm();
                diff / self.stderr_of(k).max(floor)
            })
            .fold(0.0, f64::max)
    }
}

/// Averages `sample` over `n_samples` draws. Draws come in chunks of
/// [`QUADRATURE_CHUNK`], chunk `c` using stream `c` of `seed`, and chunk sums
/// are reduced in chunk order, so the result does not depend on the thread count.
pub fn monte_carlo_average<F>(g: usize, n_samples: usize, seed: u64, sample: F) -> Result<FormAverage>
where
    F: Fn(&mut StreamRng) -> ExtForm + Sync,
{
    if n_samples < MIN_SAMPLES {
        return Err(Error::BadSampleCount { got: n_samples, min: MIN_SAMPLES });
    }
    // accumulate deviations from a pilot draw to keep the variance well conditioned
    let shift: BTreeMap<u64, C64> = sample(&mut stream_rng(seed, u64::MAX)).raw_terms().collect();
    let chunks = n_samples.div_ceil(QUADRATURE_CHUNK);
    let partial: Vec<(BTreeMap<u64, C64>, BTreeMap<u64, f64>)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, chunk as u64);
            let count = QUADRATURE_CHUNK.min(n_samples - chunk * QUADRATURE_CHUNK);
            let mut sum = BTreeMap::new();
            let mut sq = BTreeMap::new();
            for _ in 0..count {
                let x = sample(&mut rng);
                let mut record = |key: u64, d: C64| {
                    *sum.entry(key).or_insert(C64::new(0.0, 0.0)) += d;
                    *sq.entry(key).or_insert(0.0) += d.norm_sqr();
                };
                for (&key, &s) in &shift {
                    record(key, x.coefficient_of(key) - s);
                }
                for (key, z) in x.raw_terms() {
                    if !shift.contains_key(&key) {
                        record(key, z);
                    }
                }
            }
            (sum, sq)
        })
        .collect();
    let mut sum: BTreeMap<u64, C64> = BTreeMap::new();
    let mut sq: BTreeMap<u64, f64> = BTreeMap::new();
    for (s, q) in partial {
        for (k, z) in s {
            *sum.entry(k).or_insert(C64::new(0.0, 0.0)) += z;
        }
        for (k, z) in q {
            *sq.entry(k).or_insert(0.0) += z;
        }
    }
    let n = n_samples as f64;
    let mut stderr = BTreeMap::new();
    let mut mean_terms = Vec::with_capacity(sum.len());
    for (&k, &s) in &sum {
        let m = s / n;
        let var = (sq[&k] / n - m.norm_sqr()).max(0.0);
        stderr.insert(k, (var / n).sqrt());
        mean_terms.push((k, m + shift.get(&k).copied().unwrap_or(C64::new(0.0, 0.0))));
    }
    Ok(FormAverage { mean: ExtForm::from_raw_terms(g, mean_terms), stderr, n_samples })
}

fn cholesky_factor(tau: &SiegelPoint) -> CMat {
    complexify(&tau.imag().clone().cholesky().expect("Im tau positive definite").l())
}

/// `s_k` as `binom(g+k−1, k) · E[⟨Gv,v⟩^k]` over the unit sphere of `(fiber, h)`.
/// With `Y = L Lᵀ`, `v = L u` has `⟨v,v⟩_h = |u|²`, so `u` uniform on the
/// standard sphere gives the unitarily invariant measure for `h`.
pub fn segre_by_quadrature(
    pkg: &CurvaturePackage,
    k: usize,
    n_samples: usize,
    seed: u64,
) -> Result<FormAverage> {
    let g = pkg.genus();
    if n_samples < MIN_SAMPLES {
        return Err(Error::BadSampleCount { got: n_samples, min: MIN_SAMPLES });
    }
    if k == 0 {
        return Ok(FormAverage { mean: ExtForm::one(g), stderr: BTreeMap::new(), n_samples });
    }
    let hg = pkg.metric_curvature();
    let l = cholesky_factor(pkg.tau());
    let avg = monte_carlo_average(g, n_samples, seed, |rng| {
        let v = &l * random_unit_vector(g, rng);
        hg.sesquilinear(&v).pow(k)
    })?;
    Ok(avg.scaled(binomial(g + k - 1, k)))
}

/// Expected constant between `s_k` and the line average of `form(⟨,⟩_L)^k`.
pub fn average_wedge_constant(g: usize, k: usize) -> f64 {
    binomial(g + k - 1, k) * (4.0 * PI).powi(-(k as i32))
}

fn line_form_sampler(tau: &SiegelPoint, k: usize) -> impl Fn(&mut StreamRng) -> ExtForm + Sync + '_ {
    let g = tau.genus();
    // w = L^{-T} u has ⟨w,w⟩_E = |u|²
    let l_inv_t = cholesky_factor(tau).try_inverse().expect("triangular factor invertible").transpose();
    move |rng: &mut StreamRng| {
        let w = &l_inv_t * random_unit_vector(g, rng);
        let hl = herm_form_l(tau, &w).expect("unit vector is nonzero");
        ExtForm::from_hermitian(g, &hl).pow(k)
    }
}

/// Average of `form(⟨,⟩_L)^k` over lines `L` uniform for the metric `Im τ` on `E`.
pub fn average_line_form_power(
    tau: &SiegelPoint,
    k: usize,
    n_samples: usize,
    seed: u64,
) -> Result<FormAverage> {
    monte_carlo_average(tau.genus(), n_samples, seed, line_form_sampler(tau, k))
}

fn pkg_params(tau: &SiegelPoint) -> serde_json::Value {
    json!({ "genus": tau.genus() })
}

/// `c(E*) ∧ s(E*) = 1` along the two exact routes, plus the form-level
/// product `c(E) ∧ c(E*)` as a report-only measurement.
pub fn check_pointwise_identity(tau: &SiegelPoint, tol: f64) -> VerificationReport {
    let pkg = CurvaturePackage::new(tau);
    let mut report = VerificationReport::new("forms-identity", pkg_params(tau));
    let inverse = segre_by_inverse(&pkg);
    let moments = segre_by_moments(&pkg, segre_len(&pkg));
    let one = ExtForm::one(tau.genus());
    let c = inverse.chern_total_estar();
    for (label, forms) in [("inverse series", &inverse), ("moment formula", &moments)] {
        let dev = (&c.wedge(&forms.segre_total()).expect("same genus") - &one).max_abs_coeff();
        report.push(CheckRecord::at_most(&format!("c*s=1 ({label})"), ANCHOR_IDENTITY, dev, tol));
    }
    let product = inverse.chern_total_e().wedge(&c).expect("same genus");
    report.push(CheckRecord::report_only(
        "c(E)*c(E*)-1 at form level",
        ANCHOR_PRODUCT,
        (&product - &one).max_abs_coeff(),
    ));
    report
}

/// Coefficientwise agreement of the power-sum and inverse-series routes.
pub fn check_route_agreement(tau: &SiegelPoint, tol: f64) -> VerificationReport {
    let pkg = CurvaturePackage::new(tau);
    let mut report = VerificationReport::new("forms-identity", pkg_params(tau));
    let inverse = segre_by_inverse(&pkg);
    let moments = segre_by_moments(&pkg, segre_len(&pkg));
    let dev = (0..=segre_len(&pkg))
        .map(|k| moments.segre(k).max_abs_diff(&inverse.segre(k)))
        .fold(0.0, f64::max);
    report.push(CheckRecord::at_most("moment vs inverse route", ANCHOR_ROUTES, dev, tol));
    report
}

/// Quadrature `s_k` against the inverse route, `k = 0..=k_max`, measured in
/// standard errors.
pub fn check_quadrature_route(
    tau: &SiegelPoint,
    k_max: usize,
    n_samples: usize,
    seed: u64,
    sigmas: f64,
) -> Result<VerificationReport> {
    let pkg = CurvaturePackage::new(tau);
    let mut report = VerificationReport::new(
        "forms-identity",
        json!({ "genus": tau.genus(), "k_max": k_max, "n_samples": n_samples }),
    );
    let g = tau.genus();
    let inverse = segre_by_inverse(&pkg);
    let s1 = inverse.segre(1).max_abs_coeff();
    for k in 0..=k_max {
        let est = segre_by_quadrature(&pkg, k, n_samples, derive_seed(seed, &format!("quadrature-{k}")))?;
        let exact = inverse.segre(k);
        // s_k vanishes for k > g, so the rounding floor is scaled by s_1^k rather than s_k
        let floor = 1e-12 * exact.max_abs_coeff().max(binomial(g + k - 1, k) * s1.powi(k as i32)).max(1e-300);
        report.push(
            CheckRecord::at_most(&format!("quadrature s_{k} (sigmas)"), ANCHOR_QUADRATURE, est.max_z(&exact, floor), sigmas)
                .with_notes(format!("max stderr {:.3e}", est.max_stderr())),
        );
    }
    Ok(report)
}

/// `c_k(E)` against `s_k(E*)`; asserted for `k ≤ 2`, recorded only beyond.
pub fn check_remark_equality(tau: &SiegelPoint, k: usize, tol: f64) -> Result<VerificationReport> {
    let g = tau.genus();
    if k == 0 || k > g {
        return Err(Error::BadParameters(format!("need 1 <= k <= g, got k={k}, g={g}")));
    }
    let pkg = CurvaturePackage::with_max_degree(tau, 2 * k);
    let c_e = chern_total(&pkg, Bundle::Hodge).degree_component(2 * k);
    let s = segre_component(&pkg, k);
    let diff = c_e.max_abs_diff(&s);
    let mut report = VerificationReport::new("remark", json!({ "genus": g, "k": k }));
    let name = format!("c_{k}(E) - s_{k}(E*)");
    report.push(if k <= 2 {
        CheckRecord::at_most(&name, ANCHOR_REMARK, diff, tol)
    } else {
        CheckRecord::report_only(&name, ANCHOR_REMARK, diff)
            .with_notes(format!("scale {:.3e}", s.max_abs_coeff()))
    });
    Ok(report)
}

/// Fits `s_k ≈ r · avg(form(⟨,⟩_L)^k)` and compares `r` with
/// [`average_wedge_constant`].
pub fn check_average_wedge_powers(
    tau: &SiegelPoint,
    k: usize,
    n_samples: usize,
    seed: u64,
    sigmas: f64,
) -> Result<VerificationReport> {
    let g = tau.genus();
    if k > g {
        return Err(Error::BadParameters(format!("need k <= g, got k={k}, g={g}")));
    }
    let mut report =
        VerificationReport::new("average-wedge", json!({ "genus": g, "k": k, "n_samples": n_samples }));
    if k == 0 {
        if n_samples < MIN_SAMPLES {
            return Err(Error::BadSampleCount { got: n_samples, min: MIN_SAMPLES });
        }
        report.push(CheckRecord::holds("k=0 both sides 1", ANCHOR_AVERAGE, true));
        return Ok(report);
    }
    let pkg = CurvaturePackage::with_max_degree(tau, 2 * k);
    let exact = segre_component(&pkg, k);
    // each sample also carries its projection onto s_k in the (otherwise empty)
    // scalar slot, so ρ in avg ≈ ρ·s_k gets a standard error that accounts for
    // the correlation between coefficients
    let keys: Vec<u64> = exact.raw_terms().map(|(k, _)| k).collect();
    let den: f64 = keys.iter().map(|&key| exact.coefficient_of(key).norm_sqr()).sum();
    let sampler = line_form_sampler(tau, k);
    let joint = monte_carlo_average(g, n_samples, seed, |rng| {
        let f = sampler(rng);
        let proj = keys.iter().map(|&key| exact.coefficient_of(key).conj() * f.coefficient_of(key)).sum::<C64>();
        &f + &ExtForm::scalar(g, proj / den)
    })?;
    let rho = joint.mean.scalar_part();
    let rho_se = joint.stderr_of(0);
    let avg = FormAverage {
        mean: joint.mean.degree_component(2 * k),
        stderr: joint.stderr.iter().filter(|(&key, _)| key != 0).map(|(&k, &e)| (k, e)).collect(),
        n_samples,
    };
    let r = C64::new(1.0, 0.0) / rho;
    let r_se = r.norm() * rho_se / rho.norm();
    let predicted = average_wedge_constant(g, k);
    let floor = 1e-12 * avg.mean.max_abs_coeff().max(1e-300);

    report.push(
        CheckRecord::above("fitted constant (real part)", ANCHOR_AVERAGE, r.re, 0.0)
            .with_notes(format!("fit {:.6e}{:+.2e}i, predicted {predicted:.6e}, stderr {r_se:.2e}", r.re, r.im)),
    );
    report.push(CheckRecord::at_most(
        "fitted constant imaginary part (sigmas)",
        ANCHOR_AVERAGE,
        rho.im.abs() / rho_se.max(1e-12 * rho.norm()),
        sigmas,
    ));
    report.push(CheckRecord::at_most(
        "fitted constant vs predicted (sigmas)",
        ANCHOR_AVERAGE,
        (r.re - predicted).abs() / r_se.max(1e-12 * predicted),
        sigmas,
    ));
    // m complex coefficients: P(max |z| > t) ≤ m·exp(−t²), matched to one coefficient at `sigmas`
    let m = keys.len().max(1) as f64;
    let family = (sigmas * sigmas + m.ln()).sqrt();
    let fit = avg.scaled(predicted).max_z(&exact, floor * predicted);
    report.push(
        CheckRecord::at_most("coefficientwise fit at predicted constant (sigmas)", ANCHOR_AVERAGE, fit, family)
            .with_notes(format!("{} coefficients, family-wise threshold", keys.len())),
    );
    report.push(CheckRecord::report_only(
        "fitted / predicted - 1",
        ANCHOR_AVERAGE,
        r.re / predicted - 1.0,
    ));
    Ok(report)
}

fn random_plane(n: usize, dim: usize, rng: &mut StreamRng) -> LinSubspace {
    let vs: Vec<_> = (0..dim).map(|_| random_complex_vector(n, rng)).collect();
    LinSubspace::from_vectors(&vs, Ambient::SymMaps, 1e-12).expect("dim >= 1")
}

/// Random `dim`-plane inside `x`.
fn random_subplane(x: &LinSubspace, dim: usize, rng: &mut StreamRng) -> LinSubspace {
    let vs: Vec<_> = (0..dim)
        .map(|_| {
            let coeffs: Vec<C64> = random_complex_vector(x.dim(), rng).iter().copied().collect();
            x.combine(&coeffs)
        })
        .collect();
    LinSubspace::from_vectors(&vs, Ambient::SymMaps, 1e-12).expect("dim >= 1")
}

/// Sign and vanishing behavior of `s_i(E*)` on `i`-planes of `S_g`:
/// non-negative on random planes, zero on planes inside `W⊥` for a rational
/// `W` of dimension `g−i+1`, and positive where some `e_v` is injective.
pub fn check_positivity_and_vanishing(
    tau: &SiegelPoint,
    i: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let g = tau.genus();
    if i == 0 || i > g {
        return Err(Error::BadParameters(format!("need 1 <= i <= g, got i={i}, g={g}")));
    }
    let n = GeneratorIndex::count(g);
    let pkg = CurvaturePackage::with_max_degree(tau, 2 * i);
    let s = segre_component(&pkg, i);
    let mut report =
        VerificationReport::new("positivity-vanishing", json!({ "genus": g, "i": i, "trials": trials }));

    let mut rng = stream_rng(derive_seed(seed, "positivity"), 0);
    let (mut min_re, mut max_im_rel) = (f64::INFINITY, 0.0f64);
    for _ in 0..trials {
        let lam = s.restrict_to_plane(&random_plane(n, i, &mut rng))?;
        min_re = min_re.min(lam.re);
        max_im_rel = max_im_rel.max(lam.im.abs() / lam.norm().max(1e-300));
    }
    report.push(CheckRecord::at_least("min restriction on random planes", ANCHOR_POSITIVITY, min_re, -tol));
    report.push(CheckRecord::report_only("max relative imaginary part", ANCHOR_POSITIVITY, max_im_rel));

    // vanishing on W⊥
    let mut rng = stream_rng(derive_seed(seed, "vanishing"), 0);
    let w_rows: Vec<Vec<_>> = (0..g - i + 1).map(|_| random_rational_vector(g, 1000, &mut rng)).collect();
    let x_exact = wperp_exact(&crate::rational::QMatrix::from_rows(&w_rows)?)?;
    let x = x_exact.to_subspace();
    report.push(CheckRecord::at_most(
        "dim W-perp vs i(i-1)/2",
        ANCHOR_VANISHING,
        (x.dim() as f64 - (i * (i - 1) / 2) as f64).abs(),
        0.0,
    ));
    if x.dim() >= i {
        let mut max_abs = 0.0f64;
        for _ in 0..trials.clamp(1, 50) {
            let y = random_subplane(&x, i, &mut rng);
            max_abs = max_abs.max(s.restrict_to_plane(&y)?.norm());
        }
        report.push(CheckRecord::at_most("max |restriction| inside W-perp", ANCHOR_VANISHING, max_abs, tol));
        let outcome = hypothesis_check_exact(&x_exact, i, 100, derive_seed(seed, "vanishing-rank"))?;
        report.push(
            CheckRecord::holds("rank(e_v|W-perp) <= i-1 on exact samples", ANCHOR_VANISHING, outcome.holds)
                .with_notes(format!(
                    "{} samples, max rank {}, miss probability <= {:.1e}",
                    outcome.samples_tested, outcome.max_rank, outcome.failure_bound
                )),
        );
    } else {
        report.push(
            CheckRecord::report_only("W-perp dimension below i", ANCHOR_VANISHING, x.dim() as f64)
                .with_notes("no i-planes inside W-perp"),
        );
    }

    // positivity where e_v is injective
    let mut rng = stream_rng(derive_seed(seed, "injective"), 0);
    let mut min_pos = f64::INFINITY;
    let mut found = 0usize;
    for _ in 0..trials.clamp(1, 50) {
        let y = random_plane(n, i, &mut rng);
        let v = random_complex_vector(g, &mut rng);
        let op = EvalOperator::new(&y.sym_maps(g), &v);
        if rank_with_kernel(op.matrix(), 1e-10).rank == i {
            found += 1;
            min_pos = min_pos.min(s.restrict_to_plane(&y)?.re);
        }
    }
    report.push(
        CheckRecord::above("min restriction where e_v injective", ANCHOR_INJECTIVE, min_pos, tol)
            .with_notes(format!("{found} planes with an injective e_v")),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, RMat};
    use crate::sampling::random_siegel_point;

    fn point_1(y: f64) -> SiegelPoint {
        SiegelPoint::new(&RMat::zeros(1, 1), &RMat::from_element(1, 1, y)).unwrap()
    }

    #[test]
    fn partition_counts_and_weights() {
        let counts: Vec<usize> = (0..=8).map(|k| partitions(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        // Σ 1/z_λ = 1 for every k
        for k in 0..=8 {
            let s: f64 = partitions(k).iter().map(|l| 1.0 / z_lambda(l)).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
        assert_eq!(z_lambda(&[1, 1]), 2.0);
        assert_eq!(z_lambda(&[2]), 2.0);
        assert_eq!(z_lambda(&[2, 1, 1]), 4.0);
        assert_eq!(z_lambda(&[2, 2]), 8.0);
    }

    #[test]
    fn genus_one_chern_and_segre() {
        let pkg = CurvaturePackage::new(&point_1(1.0));
        let forms = segre_by_inverse(&pkg);
        assert_eq!(forms.chern_estar[0], ExtForm::one(1));
        assert_eq!(forms.segre_estar[0], ExtForm::one(1));
        let g11 = pkg.g_normalized().get(0, 0).clone();
        assert!(forms.chern_estar[1].max_abs_diff(&-&g11) < 1e-16);
        assert!(forms.segre_estar[1].max_abs_diff(&g11) < 1e-16);
        // s_1 is a positive multiple of (i/2) dτ∧dτ̄
        let key = g11.raw_terms().next().unwrap().0;
        let coeff = forms.segre_estar[1].coefficient_of(key) / c(0.0, 0.5);
        assert!(coeff.re > 0.0 && coeff.im.abs() < 1e-16);
    }

    #[test]
    fn low_degree_segre_identities() {
        let mut rng = stream_rng(41, 0);
        let tau = random_siegel_point(2, &mut rng);
        let pkg = CurvaturePackage::new(&tau);
        let f = segre_by_inverse(&pkg);
        let c1 = &f.chern_estar[1];
        assert!(f.segre_estar[1].max_abs_diff(&-c1) < 1e-14);
        let s2 = &c1.wedge(c1).unwrap() - &f.chern_estar[2];
        assert!(f.segre_estar[2].max_abs_diff(&s2) < 1e-14);
        let p = power_sums(&pkg, 2);
        assert!(f.segre_estar[1].max_abs_diff(&p[1]) < 1e-14);
        let s2m = (&p[1].wedge(&p[1]).unwrap() + &p[2]).scale_real(0.5);
        assert!(f.segre_estar[2].max_abs_diff(&s2m) < 1e-14);
    }

    #[test]
    fn components_have_expected_bidegree() {
        let mut rng = stream_rng(42, 0);
        for g in 1..=3 {
            let pkg = CurvaturePackage::new(&random_siegel_point(g, &mut rng));
            let f = segre_by_moments(&pkg, 2 * g);
            for (k, s) in f.segre_estar.iter().enumerate() {
                assert!(s.is_zero() || s.bidegree() == Some((k, k)));
            }
            for (k, c) in f.chern_estar.iter().chain(&f.chern_e).enumerate() {
                let k = k % (g + 1);
                assert!(c.is_zero() || c.bidegree() == Some((k, k)));
            }
        }
    }

    #[test]
    fn even_power_sums_vanish() {
        let mut rng = stream_rng(43, 0);
        let pkg = CurvaturePackage::new(&random_siegel_point(3, &mut rng));
        let p = power_sums(&pkg, 6);
        let scale = p[1].max_abs_coeff().powi(2);
        for m in [2, 4, 6] {
            assert!(p[m].max_abs_coeff() < 1e-12 * scale.max(1.0), "p_{m}");
        }
    }

    #[test]
    fn newton_recursion_matches_partition_sum() {
        // k h_k = Σ_{i=1}^k p_i h_{k−i}
        let mut rng = stream_rng(44, 0);
        let pkg = CurvaturePackage::new(&random_siegel_point(2, &mut rng));
        let p = power_sums(&pkg, 3);
        let mut h = vec![ExtForm::one(2)];
        for k in 1..=3 {
            let mut acc = ExtForm::zero(2);
            for i in 1..=k {
                acc = &acc + &p[i].wedge(&h[k - i]).unwrap();
            }
            h.push(acc.scale_real(1.0 / k as f64));
        }
        for k in 0..=3 {
            assert!(h[k].max_abs_diff(&segre_from_power_sums(&p, k)) < 1e-15);
        }
    }

    #[test]
    fn quadrature_examples() {
        let pkg = CurvaturePackage::new(&point_1(1.7));
        let est = segre_by_quadrature(&pkg, 1, 200, 5).unwrap();
        assert!(est.mean.max_abs_diff(pkg.g_normalized().get(0, 0)) < 1e-15);
        let one = segre_by_quadrature(&pkg, 0, 100, 5).unwrap();
        assert_eq!(one.mean, ExtForm::one(1));
        assert!(matches!(segre_by_quadrature(&pkg, 1, 99, 5), Err(Error::BadSampleCount { .. })));
    }

    #[test]
    fn quadrature_is_deterministic() {
        let pkg = CurvaturePackage::new(&SiegelPoint::identity_imaginary(2));
        let a = segre_by_quadrature(&pkg, 2, 3000, 9).unwrap();
        let b = segre_by_quadrature(&pkg, 2, 3000, 9).unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.stderr, b.stderr);
    }

    #[test]
    fn pointwise_identity_small_cases() {
        let rep = check_pointwise_identity(&point_1(0.8), 1e-12);
        assert!(rep.passed(), "{rep:?}");
        let rep = check_pointwise_identity(&SiegelPoint::identity_imaginary(3), 1e-9);
        assert!(rep.passed(), "{rep:?}");
        let rep = check_route_agreement(&SiegelPoint::identity_imaginary(3), 1e-10);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn remark_k_three_is_report_only() {
        let rep = check_remark_equality(&SiegelPoint::identity_imaginary(3), 3, 1e-9).unwrap();
        assert!(rep.checks.iter().all(|c| !c.asserting));
        assert!(check_remark_equality(&SiegelPoint::identity_imaginary(2), 3, 1e-9).is_err());
    }

    #[test]
    fn average_wedge_matches_prediction() {
        let mut rng = stream_rng(45, 0);
        let tau = random_siegel_point(2, &mut rng);
        let rep = check_average_wedge_powers(&tau, 1, 20_000, 3, 3.0).unwrap();
        assert!(rep.passed(), "{rep:#?}");
    }

    #[test]
    fn positivity_and_vanishing_genus_three() {
        let tau = SiegelPoint::identity_imaginary(3);
        let rep = check_positivity_and_vanishing(&tau, 3, 50, 7, 1e-10).unwrap();
        assert!(rep.passed(), "{rep:#?}");
        let rep = check_positivity_and_vanishing(&tau, 1, 50, 7, 1e-10).unwrap();
        assert!(rep.passed(), "{rep:#?}");
    }

    #[test]
    fn segre_forms_vanish_above_genus() {
        // ⟨Gv,v⟩ has rank at most g as a form in the dτ, so its (g+1)-st power is zero
        let mut rng = stream_rng(44, 0);
        for g in 1..=3 {
            let tau = random_siegel_point(g, &mut rng);
            let pkg = CurvaturePackage::new(&tau);
            let forms = segre_by_inverse(&pkg);
            let s1 = forms.segre(1).max_abs_coeff();
            for k in g + 1..=2 * g {
                let sk = forms.segre(k).max_abs_coeff();
                assert!(sk <= 1e-12 * s1.powi(k as i32), "g={g} k={k}: {sk:e}");
            }
        }
    }
}
