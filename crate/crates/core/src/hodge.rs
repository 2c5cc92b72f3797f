//! Metric and curvature of the Hodge bundle `E` and its dual `E*` at a point
//! `τ` of Siegel space.
//!
//! Conventions, with `Y = Im τ`:
//! - the metric on `E*` is `h = Y⁻¹`, the metric on `E` is `Y`;
//! - `⟨x, y⟩_{E*} = xᵀ h ȳ` and `⟨w, w⟩_E = w̄ᵀ Y w`;
//! - curvature of `(E*, h)`: `Ω = −¼ (∂τ) Y⁻¹ (∂τ̄) Y⁻¹`;
//! - curvature of `(E, Y)`: `Ω_E = −¼ Y⁻¹ (∂τ̄) Y⁻¹ (∂τ)`;
//! - normalized curvature `G = Ω / (2πi)`, total Chern form `det(I − G)`.
//!
//! Matrix-of-forms products evaluate left to right with wedge on entries;
//! scalar matrices commute past forms.

use std::f64::consts::PI;

use num::Zero;

use crate::error::{Error, Result};
use crate::extform::{ExtForm, FormMatrix, GeneratorIndex};
use crate::linalg::{c, complexify, CMat, CVec, SiegelPoint, SymMap, C64};

/// Which Hermitian bundle a computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Bundle {
    /// `E`, with metric `Im τ`.
    Hodge,
    /// `E*`, with metric `(Im τ)⁻¹`.
    HodgeDual,
}

/// `1 / (2πi)`.
pub fn chern_normalization() -> C64 {
    c(0.0, 2.0 * PI).inv()
}

/// Curvature of `(E*, (Im τ)⁻¹)`.
pub fn dual_hodge_curvature(tau: &SiegelPoint) -> FormMatrix {
    let g = tau.genus();
    let y_inv = complexify(tau.imag_inv());
    FormMatrix::hol_differential(g)
        .scalar_mul_right(&y_inv)
        .mul(&FormMatrix::anti_differential(g))
        .expect("same genus")
        .scalar_mul_right(&y_inv)
        .scale(c(-0.25, 0.0))
}

/// Curvature of `(E, Im τ)`, computed from its own metric rather than by duality.
pub fn hodge_curvature(tau: &SiegelPoint) -> FormMatrix {
    let g = tau.genus();
    let y_inv = complexify(tau.imag_inv());
    FormMatrix::anti_differential(g)
        .scalar_mul_left(&y_inv)
        .scalar_mul_right(&y_inv)
        .mul(&FormMatrix::hol_differential(g))
        .expect("same genus")
        .scale(c(-0.25, 0.0))
}

/// Metric and curvature data of `E*` at a point.
#[derive(Debug, Clone)]
pub struct CurvaturePackage {
    tau: SiegelPoint,
    h: CMat,
    omega: FormMatrix,
    g_normalized: FormMatrix,
    max_degree: usize,
}

impl CurvaturePackage {
    pub fn new(tau: &SiegelPoint) -> Self {
        let n = GeneratorIndex::count(tau.genus());
        Self::with_max_degree(tau, 2 * n)
    }

    /// Forms derived from this package drop components above total degree `d`.
    pub fn with_max_degree(tau: &SiegelPoint, d: usize) -> Self {
        let omega = dual_hodge_curvature(tau).with_max_degree(d);
        let g_normalized = omega.scale(chern_normalization());
        CurvaturePackage {
            tau: tau.clone(),
            h: complexify(tau.imag_inv()),
            omega,
            g_normalized,
            max_degree: d,
        }
    }

    pub fn genus(&self) -> usize {
        self.tau.genus()
    }

    pub fn tau(&self) -> &SiegelPoint {
        &self.tau
    }

    /// `h = (Im τ)⁻¹`.
    pub fn h(&self) -> &CMat {
        &self.h
    }

    pub fn omega(&self) -> &FormMatrix {
        &self.omega
    }

    /// `G = Ω / (2πi)`.
    pub fn g_normalized(&self) -> &FormMatrix {
        &self.g_normalized
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn curvature(&self, bundle: Bundle) -> FormMatrix {
        match bundle {
            Bundle::HodgeDual => self.omega.clone(),
            Bundle::Hodge => hodge_curvature(&self.tau).with_max_degree(self.max_degree),
        }
    }

    pub fn normalized_curvature(&self, bundle: Bundle) -> FormMatrix {
        match bundle {
            Bundle::HodgeDual => self.g_normalized.clone(),
            Bundle::Hodge => self.curvature(Bundle::Hodge).scale(chern_normalization()),
        }
    }

    /// `h·G`, the matrix whose sesquilinear form is `⟨Gv, v⟩`.
    pub fn metric_curvature(&self) -> FormMatrix {
        self.g_normalized.scalar_mul_left(&self.h)
    }
}

/// The scalar (1,1)-form `⟨Gv, v⟩ = v̄ᵀ h G v` on `E*`.
pub fn gv_form(pkg: &CurvaturePackage, v: &CVec) -> Result<ExtForm> {
    if v.len() != pkg.genus() {
        return Err(Error::DimensionMismatch(format!("vector of length {}", v.len())));
    }
    if v.iter().all(|z| z.is_zero()) {
        return Err(Error::ZeroVector);
    }
    Ok(pkg.metric_curvature().sesquilinear(v))
}

/// `⟨v, v⟩` for the metric `h` on `E*`.
pub fn dual_norm_sqr(tau: &SiegelPoint, v: &CVec) -> f64 {
    let h = complexify(tau.imag_inv());
    (v.adjoint() * h * v)[(0, 0)].re
}

/// The Hermitian form `⟨a, b⟩_L = ⟨a·w, b·w⟩_{E*} / ⟨w, w⟩_E` on `S_g`, as an
/// `n×n` matrix in the basis dual to the generators (`H_kl = ⟨E_k, E_l⟩_L`).
pub fn herm_form_l(tau: &SiegelPoint, w: &CVec) -> Result<CMat> {
    let g = tau.genus();
    if w.len() != g {
        return Err(Error::DimensionMismatch(format!("vector of length {}", w.len())));
    }
    if w.iter().all(|z| z.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let h = complexify(tau.imag_inv());
    let y = complexify(tau.imag());
    let ww = (w.adjoint() * &y * w)[(0, 0)].re;
    let images: Vec<CVec> =
        GeneratorIndex::all(g).map(|idx| SymMap::elementary(g, idx).apply(w)).collect();
    let n = images.len();
    Ok(CMat::from_fn(n, n, |k, l| {
        (images[k].transpose() * &h * images[l].map(|z| z.conj()))[(0, 0)] / ww
    }))
}

/// `⟨Gv, v⟩` straight from the closed form
/// `(i/8π) v̄ᵀ Y⁻¹ (∂τ) Y⁻¹ (∂τ̄) Y⁻¹ v`, written through the vector of
/// 1-forms `x = (∂τ) Y⁻¹ v̄` as `(i/8π) Σ x_a ∧ (Y⁻¹)_ab x̄_b`.
pub fn gv_form_closed(tau: &SiegelPoint, v: &CVec) -> ExtForm {
    let g = tau.genus();
    let y_inv = complexify(tau.imag_inv());
    let w = &y_inv * v.map(|z| z.conj());
    let x: Vec<ExtForm> = (0..g)
        .map(|a| {
            (0..g).fold(ExtForm::zero(g), |acc, b| {
                &acc + &ExtForm::hol(g, GeneratorIndex::new(a, b)).scale(w[b])
            })
        })
        .collect();
    let mut out = ExtForm::zero(g);
    for a in 0..g {
        for b in 0..g {
            let term = x[a].wedge(&x[b].conjugate()).expect("same genus").scale(y_inv[(a, b)]);
            out = &out + &term;
        }
    }
    out.scale(c(0.0, 1.0 / (8.0 * PI)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{LinSubspace, RMat};
    use crate::sampling::{random_complex_vector, random_siegel_point, random_unit_vector, stream_rng};

    fn e(g: usize, a: usize, b: usize) -> ExtForm {
        ExtForm::hol(g, GeneratorIndex::new(a, b))
    }

    fn eb(g: usize, a: usize, b: usize) -> ExtForm {
        ExtForm::anti(g, GeneratorIndex::new(a, b))
    }

    fn point_1(y: f64) -> SiegelPoint {
        SiegelPoint::new(&RMat::zeros(1, 1), &RMat::from_element(1, 1, y)).unwrap()
    }

    #[test]
    fn genus_one_curvature_by_substitution() {
        for y in [0.5, 1.0, 2.0, 3.7] {
            let pkg = CurvaturePackage::new(&point_1(y));
            let want = e(1, 0, 0).wedge(&eb(1, 0, 0)).unwrap().scale_real(-1.0 / (4.0 * y * y));
            assert!(pkg.omega().get(0, 0).max_abs_diff(&want) < 1e-15);
        }
        let pkg = CurvaturePackage::new(&point_1(2.0));
        assert_eq!(pkg.h()[(0, 0)], c(0.5, 0.0));
        let want = e(1, 0, 0).wedge(&eb(1, 0, 0)).unwrap().scale_real(-1.0 / 16.0);
        assert!(pkg.omega().get(0, 0).max_abs_diff(&want) < 1e-16);
    }

    #[test]
    fn curvature_entries_are_one_one_forms() {
        let mut rng = stream_rng(21, 0);
        for g in 1..=3 {
            let pkg = CurvaturePackage::new(&random_siegel_point(g, &mut rng));
            for entry in pkg.omega().entries() {
                assert_eq!(entry.bidegree(), Some((1, 1)));
            }
            let prod = pkg.h() * complexify(pkg.tau().imag());
            assert!((prod - CMat::identity(g, g)).camax() < 1e-12);
        }
    }

    #[test]
    fn dual_curvatures_are_negative_transposes() {
        let mut rng = stream_rng(22, 0);
        let tau = random_siegel_point(3, &mut rng);
        let a = dual_hodge_curvature(&tau);
        let b = hodge_curvature(&tau);
        assert!(b.max_abs_diff(&a.transpose().scale(c(-1.0, 0.0))) < 1e-14);
    }

    #[test]
    fn gv_form_examples() {
        let pkg = CurvaturePackage::new(&point_1(1.0));
        let v = CVec::from_element(1, c(1.0, 0.0));
        let got = gv_form(&pkg, &v).unwrap();
        let want = e(1, 0, 0).wedge(&eb(1, 0, 0)).unwrap().scale(c(0.0, 1.0 / (8.0 * PI)));
        assert!(got.max_abs_diff(&want) < 1e-16);

        let pkg2 = CurvaturePackage::new(&SiegelPoint::identity_imaginary(2));
        let e1 = CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let got = gv_form(&pkg2, &e1).unwrap();
        assert!(got.max_abs_diff(pkg2.g_normalized().get(0, 0)) < 1e-16);

        assert!(matches!(gv_form(&pkg2, &CVec::zeros(2)), Err(Error::ZeroVector)));
    }

    #[test]
    fn gv_form_is_sesquilinear_and_matches_closed_form() {
        let mut rng = stream_rng(23, 0);
        for g in 1..=3 {
            let tau = random_siegel_point(g, &mut rng);
            let pkg = CurvaturePackage::new(&tau);
            let v = random_complex_vector(g, &mut rng);
            let base = gv_form(&pkg, &v).unwrap();
            assert!(base.max_abs_diff(&gv_form_closed(&tau, &v)) < 1e-12);
            let s = c(0.7, -1.3);
            let scaled = gv_form(&pkg, &v.map(|z| z * s)).unwrap();
            assert!(scaled.max_abs_diff(&base.scale_real(s.norm_sqr())) < 1e-12);
        }
    }

    #[test]
    fn gv_form_is_real_and_nonnegative_on_lines() {
        let mut rng = stream_rng(24, 0);
        for trial in 0..100 {
            let g = 1 + trial % 3;
            let tau = random_siegel_point(g, &mut rng);
            let pkg = CurvaturePackage::new(&tau);
            let v = random_complex_vector(g, &mut rng);
            let f = gv_form(&pkg, &v).unwrap();
            assert!(f.conjugate().max_abs_diff(&f) < 1e-12);
            let n = GeneratorIndex::count(g);
            let line = LinSubspace::from_vectors(
                &[random_complex_vector(n, &mut rng)],
                crate::linalg::Ambient::SymMaps,
                1e-12,
            )
            .unwrap();
            let lam = f.restrict_to_plane(&line).unwrap();
            assert!(lam.re >= -1e-12 && lam.im.abs() < 1e-12, "{lam}");
        }
    }

    #[test]
    fn herm_form_examples() {
        let tau = point_1(1.0);
        let hl = herm_form_l(&tau, &CVec::from_element(1, c(1.0, 0.0))).unwrap();
        assert!(hl[(0, 0)].re > 0.0 && hl[(0, 0)].im == 0.0);

        let mut rng = stream_rng(25, 0);
        for g in 1..=4 {
            let tau = random_siegel_point(g, &mut rng);
            let w = random_complex_vector(g, &mut rng);
            let hl = herm_form_l(&tau, &w).unwrap();
            let rank = crate::linalg::rank_with_kernel(&hl, 1e-10).rank;
            assert!(rank <= g);
            assert!((&hl - hl.adjoint()).camax() < 1e-12);
            assert!(crate::linalg::hermitian_min_eigenvalue(&hl) > -1e-12);
            let hl2 = herm_form_l(&tau, &w.map(|z| z * 2.0)).unwrap();
            assert!((hl2 - &hl).camax() < 1e-12);
        }
        assert!(matches!(herm_form_l(&tau, &CVec::zeros(1)), Err(Error::ZeroVector)));
    }

    #[test]
    fn curvature_pairing_matches_line_forms() {
        // ⟨Gv,v⟩/⟨v,v⟩ = (1/4π)·form(⟨,⟩_L) with w = Y⁻¹ v̄
        let mut rng = stream_rng(26, 0);
        for g in 1..=3 {
            let tau = random_siegel_point(g, &mut rng);
            let pkg = CurvaturePackage::new(&tau);
            let v = random_unit_vector(g, &mut rng);
            let lhs = gv_form(&pkg, &v).unwrap().scale_real(1.0 / dual_norm_sqr(&tau, &v));
            let w = complexify(tau.imag_inv()) * v.map(|z| z.conj());
            let rhs = ExtForm::from_hermitian(g, &herm_form_l(&tau, &w).unwrap())
                .scale_real(1.0 / (4.0 * PI));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }
}
