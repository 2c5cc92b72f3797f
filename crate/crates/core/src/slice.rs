//! Affine slices of Siegel space and the real symplectic picture.
//!
//! The slice through `τ0` along `W ⊆ V` is the set of `M ∈ ℋ_g` with
//! `M|_W = τ0|_W`; it is an open subset of the affine space `τ0 + W⊥`.
//!
//! `ℂ^g` is identified with `ℝ^{2g}` through `f_M(x) = (Re x, −Re(Mx))`,
//! and `ℝ^{2g}` carries the symplectic form `(u, v) = uᵀ Ω v` with
//! `Ω = [[0, I], [−I, 0]]` on (first `g`, last `g`) coordinates. In the
//! basis `e_1..e_g, ie_1..ie_g` the map `f_M` has matrix
//! `F = [[I, 0], [−X, Y]]` for `M = X + iY`.

use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{
    c, complexify, min_eigenvalue, real_orthonormal_rows, subspace_distance, Ambient, CMat, CVec,
    LinSubspace, RMat, SiegelPoint, SymMap, C64,
};
use crate::report::{CheckRecord, VerificationReport};
use crate::sampling::{derive_seed, random_complex_vector, random_siegel_point, stream_rng, StreamRng};
use crate::symmap::wperp;
use nalgebra::DVector;
use rand::Rng;

/// Smallest step tried by [`AffineSlice::sample_member`].
pub const STEP_FLOOR: f64 = 1e-6;

const WPERP_TOL: f64 = 1e-10;

const ANCHOR_AFFINE: &str = "members agree with the base point on W and differ by elements of W-perp";
const ANCHOR_IMAGE: &str = "the real image of W does not depend on the slice member";
const ANCHOR_NONDEGENERATE: &str = "the real image of W is a symplectic subspace";
const ANCHOR_COMPATIBLE: &str = "each point induces a compatible complex structure";

/// Result of stepping from the base point.
#[derive(Debug, Clone, PartialEq)]
pub enum SliceMember {
    Member(SiegelPoint),
    OutOfDomain,
}

#[derive(Debug, Clone)]
pub struct AffineSlice {
    tau0: SiegelPoint,
    w: LinSubspace,
    wperp: LinSubspace,
}

impl AffineSlice {
    pub fn new(tau0: SiegelPoint, w: LinSubspace) -> Result<Self> {
        if w.ambient_dim() != tau0.genus() {
            return Err(Error::DimensionMismatch(format!(
                "W lives in C^{}, base point has genus {}",
                w.ambient_dim(),
                tau0.genus()
            )));
        }
        let wperp = wperp(&w);
        Ok(AffineSlice { tau0, w, wperp })
    }

    pub fn genus(&self) -> usize {
        self.tau0.genus()
    }

    pub fn tau0(&self) -> &SiegelPoint {
        &self.tau0
    }

    pub fn w(&self) -> &LinSubspace {
        &self.w
    }

    pub fn wperp(&self) -> &LinSubspace {
        &self.wperp
    }

    /// Complex dimension of the slice.
    pub fn dim(&self) -> usize {
        self.wperp.dim()
    }

    /// Largest `|n w|` over the orthonormal basis of `W`, relative to `max(1, ‖n‖)`.
    pub fn wperp_residual(&self, n: &CMat) -> f64 {
        let scale = n.norm().max(1.0);
        self.w
            .basis_vectors()
            .iter()
            .map(|w| (n * w).norm() / scale)
            .fold(0.0, f64::max)
    }

    /// `τ0 + n`, or [`SliceMember::OutOfDomain`] if its imaginary part is not positive definite.
    pub fn member(&self, n: &SymMap) -> Result<SliceMember> {
        if n.genus() != self.genus() {
            return Err(Error::GenusMismatch { left: self.genus(), right: n.genus() });
        }
        let residual = self.wperp_residual(n.matrix());
        if residual > WPERP_TOL {
            return Err(Error::NotInWperp(residual));
        }
        match SiegelPoint::from_complex(&(self.tau0.tau() + n.matrix())) {
            Ok(p) => Ok(SliceMember::Member(p)),
            Err(Error::NotPositiveDefinite { .. }) => Ok(SliceMember::OutOfDomain),
            Err(e) => Err(e),
        }
    }

    /// Random direction in `W⊥` of Frobenius norm `step`, halved until the
    /// member's imaginary part has smallest eigenvalue at least half that of
    /// `τ0`; `None` once the step drops below [`STEP_FLOOR`].
    pub fn sample_member(&self, rng: &mut StreamRng, step: f64) -> Option<(SymMap, SiegelPoint)> {
        let g = self.genus();
        if self.dim() == 0 {
            return Some((SymMap::zero(g), self.tau0.clone()));
        }
        let coeffs = random_complex_vector(self.dim(), rng);
        let dir = self.wperp.combine(coeffs.as_slice());
        let dir = &dir / C64::from(dir.norm());
        // staying away from the boundary keeps J_M well conditioned
        let margin = 0.5 * min_eigenvalue(self.tau0.imag());
        let mut h = step;
        while h >= STEP_FLOOR {
            let n = SymMap::from_coords(g, (&dir * C64::from(h)).as_slice());
            if let Ok(SliceMember::Member(p)) = self.member(&n) {
                if min_eigenvalue(p.imag()) >= margin {
                    return Some((n, p));
                }
            }
            h /= 2.0;
        }
        None
    }
}

/// `f_M(x) = (Re x, −Re(Mx))`.
pub fn f_embed(m: &SiegelPoint, x: &CVec) -> DVector<f64> {
    let g = m.genus();
    let mx = m.tau() * x;
    DVector::from_fn(2 * g, |k, _| if k < g { x[k].re } else { -mx[k - g].re })
}

/// Matrix of `f_M` on the real basis `e_1..e_g, ie_1..ie_g`.
pub fn f_matrix(m: &SiegelPoint) -> RMat {
    let g = m.genus();
    let x = m.real_part();
    let y = m.imag();
    let mut f = RMat::zeros(2 * g, 2 * g);
    f.view_mut((0, 0), (g, g)).fill_with_identity();
    f.view_mut((g, 0), (g, g)).copy_from(&(-x));
    f.view_mut((g, g), (g, g)).copy_from(y);
    f
}

/// `Ω = [[0, I], [−I, 0]]`.
pub fn standard_symplectic(g: usize) -> RMat {
    let mut o = RMat::zeros(2 * g, 2 * g);
    for k in 0..g {
        o[(k, g + k)] = 1.0;
        o[(g + k, k)] = -1.0;
    }
    o
}

/// Orthonormal rows spanning the real subspace `f_M(W)`.
pub fn image_rows(m: &SiegelPoint, w: &LinSubspace) -> RMat {
    let g = m.genus();
    let ws = w.basis_vectors();
    let mut rows = RMat::zeros(2 * ws.len(), 2 * g);
    for (j, v) in ws.iter().enumerate() {
        rows.row_mut(2 * j).copy_from(&f_embed(m, v).transpose());
        rows.row_mut(2 * j + 1).copy_from(&f_embed(m, &(v * c(0.0, 1.0))).transpose());
    }
    real_orthonormal_rows(&rows, 1e-12)
}

/// `f_M(W)` as a real subspace of `ℝ^{2g}`.
pub fn image_subspace(m: &SiegelPoint, w: &LinSubspace) -> LinSubspace {
    let rows = image_rows(m, w);
    if rows.nrows() == 0 {
        return LinSubspace::zero(rows.ncols(), Ambient::Real);
    }
    LinSubspace::from_spanning_rows(&complexify(&rows), Ambient::Real, 1e-12)
}

/// The complex structure `J_M = F J₀ F⁻¹` induced by `M`, with the standard symplectic form.
/// In blocks, `J_M = [[−Y⁻¹X, −Y⁻¹], [Y + XY⁻¹X, XY⁻¹]]`.
#[derive(Debug, Clone)]
pub struct RealSymplecticFrame {
    g: usize,
    omega: RMat,
    j_m: RMat,
}

impl RealSymplecticFrame {
    pub fn new(m: &SiegelPoint) -> Self {
        let g = m.genus();
        let x = m.real_part();
        let y = m.imag();
        let y_inv = y.clone().cholesky().expect("Y positive definite").inverse();
        let y_inv = (&y_inv + y_inv.transpose()) * 0.5;
        let y_inv_x = &y_inv * &x;
        let lower = y + x.transpose() * &y_inv_x;
        let mut j_m = RMat::zeros(2 * g, 2 * g);
        j_m.view_mut((0, 0), (g, g)).copy_from(&(-&y_inv_x));
        j_m.view_mut((0, g), (g, g)).copy_from(&(-&y_inv));
        j_m.view_mut((g, 0), (g, g)).copy_from(&((&lower + lower.transpose()) * 0.5));
        j_m.view_mut((g, g), (g, g)).copy_from(&y_inv_x.transpose());
        RealSymplecticFrame { g, omega: standard_symplectic(g), j_m }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn omega(&self) -> &RMat {
        &self.omega
    }

    pub fn j_m(&self) -> &RMat {
        &self.j_m
    }

    /// `(u, v) = uᵀ Ω v`.
    pub fn pairing(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        (u.transpose() * &self.omega * v)[(0, 0)]
    }

    /// `max |J² + I|`.
    pub fn square_defect(&self) -> f64 {
        (&self.j_m * &self.j_m + RMat::identity(2 * self.g, 2 * self.g)).amax()
    }

    /// `max |Jᵀ Ω J − Ω|`.
    pub fn symplectic_defect(&self) -> f64 {
        (self.j_m.transpose() * &self.omega * &self.j_m - &self.omega).amax()
    }

    /// Smallest eigenvalue of the symmetric part of `Ω J`, so `(u, Ju) ≥ λ |u|²`.
    pub fn tameness(&self) -> f64 {
        let oj = &self.omega * &self.j_m;
        min_eigenvalue(&((&oj + oj.transpose()) * 0.5))
    }

    /// Smallest `(u, Ju) / |u|²` over `n` Gaussian vectors.
    pub fn sampled_tameness<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> f64 {
        (0..n)
            .map(|_| {
                let u = DVector::from_fn(2 * self.g, |_, _| crate::sampling::normal(rng));
                self.pairing(&u, &(&self.j_m * &u)) / u.norm_squared()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Checks, for members sampled around `slice.tau0()`, that they agree with
/// the base point on `W`, that `f_M(W)` and `J_M` restricted to it do not
/// depend on the member, and that every `J_M` is a compatible complex structure.
pub fn check_lemma61(slice: &AffineSlice, n_members: usize, seed: u64) -> VerificationReport {
    let g = slice.genus();
    let mut report = VerificationReport::new(
        "slice-61",
        json!({ "genus": g, "dim_w": slice.w().dim(), "members": n_members }),
    );
    let codim = g - slice.w().dim();
    report.push(CheckRecord::at_most(
        "slice dimension - c(c+1)/2",
        ANCHOR_AFFINE,
        (slice.dim() as f64 - (codim * (codim + 1) / 2) as f64).abs(),
        0.0,
    ));

    let tau0 = slice.tau0();
    let base_rows = image_rows(tau0, slice.w());
    let base_image = image_subspace(tau0, slice.w());
    let restricted = &base_rows * standard_symplectic(g) * base_rows.transpose();
    let min_sv = if restricted.nrows() == 0 {
        f64::INFINITY
    } else {
        restricted.singular_values().min()
    };
    report.push(CheckRecord::above(
        "min singular value of the form on f(W)",
        ANCHOR_NONDEGENERATE,
        if min_sv.is_finite() { min_sv } else { 1.0 },
        1e-10,
    ));
    let j_base = &base_rows * RealSymplecticFrame::new(tau0).j_m() * base_rows.transpose();

    let mut members: Vec<SiegelPoint> = Vec::new();
    for k in 0..n_members {
        let mut rng = stream_rng(seed, k as u64);
        if let Some((_, m)) = slice.sample_member(&mut rng, 1.0) {
            members.push(m);
        }
    }
    report.push(CheckRecord::at_least("members sampled", ANCHOR_AFFINE, members.len() as f64, n_members as f64));

    let ws = slice.w().basis_vectors();
    let mut agree = 0.0f64;
    let mut diff_res = 0.0f64;
    let mut dist = 0.0f64;
    let mut j_diff = 0.0f64;
    let mut sq = 0.0f64;
    let mut symp = 0.0f64;
    let mut tame = f64::INFINITY;
    let mut tame_sampled = f64::INFINITY;
    let mut rng = stream_rng(derive_seed(seed, "tameness"), 0);
    for (k, m) in members.iter().enumerate() {
        for w in &ws {
            agree = agree.max(((m.tau() - tau0.tau()) * w).norm());
        }
        if k > 0 {
            diff_res = diff_res.max(slice.wperp_residual(&(m.tau() - members[k - 1].tau())));
        }
        dist = dist.max(subspace_distance(&image_subspace(m, slice.w()), &base_image).unwrap_or(f64::INFINITY));
        let frame = RealSymplecticFrame::new(m);
        j_diff = j_diff.max((&base_rows * frame.j_m() * base_rows.transpose() - &j_base).amax());
        sq = sq.max(frame.square_defect());
        symp = symp.max(frame.symplectic_defect());
        tame = tame.min(frame.tameness());
        tame_sampled = tame_sampled.min(frame.sampled_tameness(20, &mut rng));
    }
    report.push(CheckRecord::at_most("max |(M - tau0) w|", ANCHOR_AFFINE, agree, 1e-12));
    report.push(CheckRecord::at_most("member differences outside W-perp", ANCHOR_AFFINE, diff_res, 1e-12));
    report.push(CheckRecord::at_most("distance f_M(W) to f_tau0(W)", ANCHOR_IMAGE, dist, 1e-10));
    report.push(CheckRecord::at_most("J_M on f(W) minus J_tau0 on f(W)", ANCHOR_IMAGE, j_diff, 1e-10));
    report.push(CheckRecord::at_most("max |J^2 + I|", ANCHOR_COMPATIBLE, sq, 1e-10));
    report.push(CheckRecord::at_most("max |J^T Omega J - Omega|", ANCHOR_COMPATIBLE, symp, 1e-10));
    report.push(CheckRecord::above("min eigenvalue of (u, Ju)", ANCHOR_COMPATIBLE, finite_or_zero(tame), 0.0));
    report.push(CheckRecord::above("min sampled (u, Ju)/|u|^2", ANCHOR_COMPATIBLE, finite_or_zero(tame_sampled), 0.0));
    report
}

fn finite_or_zero(x: f64) -> f64 {
    if x.is_finite() { x } else { 0.0 }
}

/// Random `W` of dimension `dim` in `ℂ^g`.
pub fn random_w(g: usize, dim: usize, rng: &mut StreamRng) -> LinSubspace {
    if dim == 0 {
        return LinSubspace::zero(g, Ambient::Vector);
    }
    let vs: Vec<CVec> = (0..dim).map(|_| random_complex_vector(g, rng)).collect();
    LinSubspace::from_vectors(&vs, Ambient::Vector, 1e-12).expect("nonempty")
}

/// `trials` random slices `(W, τ0)` of genus `g`, each checked with
/// `n_members` members; checks keep their worst value over all slices.
pub fn slice_suite(g: usize, trials: usize, n_members: usize, seed: u64) -> Result<VerificationReport> {
    if g == 0 {
        return Err(Error::BadParameters("genus must be at least 1".into()));
    }
    let mut report =
        VerificationReport::new("slice-61", json!({ "genus": g, "trials": trials, "members": n_members }));
    for t in 0..trials {
        let mut rng = stream_rng(derive_seed(seed, "slice-setup"), t as u64);
        let tau0 = random_siegel_point(g, &mut rng);
        let dim_w = rng.random_range(1..=g);
        let slice = AffineSlice::new(tau0, random_w(g, dim_w, &mut rng))?;
        let mut sub = check_lemma61(&slice, n_members, derive_seed(seed, &format!("slice-{t}")));
        sub.params = json!(null);
        report.fold_worst(sub);
    }
    Ok(report)
}
