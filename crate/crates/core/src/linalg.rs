//! Dense complex linear algebra: Siegel points, symmetric maps, orthonormal
//! subspaces, numerical rank and subspace distances.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num::complex::Complex64;
use num::Zero;

use crate::error::{Error, Result};
use crate::extform::GeneratorIndex;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;

/// Inputs whose asymmetry is below this are symmetrized, anything larger is rejected.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn max_asymmetry<T, F>(m: &DMatrix<T>, dist: F) -> f64
where
    T: nalgebra::Scalar,
    F: Fn(&T, &T) -> f64,
{
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max(dist(&m[(i, j)], &m[(j, i)]));
        }
    }
    worst
}

fn check_square<T: nalgebra::Scalar>(m: &DMatrix<T>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(())
}

fn symmetrize_complex(m: &CMat) -> Result<CMat> {
    check_square(m)?;
    let dev = max_asymmetry(m, |a, b| (a - b).norm());
    if dev >= SYMMETRY_TOL {
        return Err(Error::NotSymmetric { deviation: dev });
    }
    Ok((m + m.transpose()).unscale(2.0))
}

fn symmetrize_real(m: &RMat) -> Result<RMat> {
    check_square(m)?;
    let dev = max_asymmetry(m, |a, b| (a - b).abs());
    if dev >= SYMMETRY_TOL {
        return Err(Error::NotSymmetric { deviation: dev });
    }
    Ok((m + m.transpose()) * 0.5)
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_eigenvalue(m: &RMat) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Smallest eigenvalue of a complex Hermitian matrix (via its real 2n×2n form).
pub fn hermitian_min_eigenvalue(m: &CMat) -> f64 {
    min_eigenvalue(&realify_hermitian(m))
}

/// Embeds a Hermitian `n×n` matrix `A + iB` as the real symmetric `[[A, -B], [B, A]]`.
pub fn realify_hermitian(m: &CMat) -> RMat {
    let n = m.nrows();
    let mut out = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i + n, j + n)] = z.re;
            out[(i, j + n)] = -z.im;
            out[(i + n, j)] = z.im;
        }
    }
    out
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn complexify(m: &RMat) -> CMat {
    m.map(|x| c(x, 0.0))
}

/// A point of Siegel upper half space: complex symmetric with positive-definite imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    tau: CMat,
    imag: RMat,
    imag_inv: RMat,
}

impl SiegelPoint {
    /// Builds `x_re + i·y_im` after symmetrizing both halves.
    pub fn new(x_re: &RMat, y_im: &RMat) -> Result<Self> {
        if x_re.shape() != y_im.shape() {
            return Err(Error::ShapeMismatch {
                expected: format!("{:?}", x_re.shape()),
                got: format!("{:?}", y_im.shape()),
            });
        }
        let x = symmetrize_real(x_re)?;
        let y = symmetrize_real(y_im)?;
        let min_eig = min_eigenvalue(&y);
        if !(min_eig > 0.0) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min_eig });
        }
        let imag_inv = y
            .clone()
            .try_inverse()
            .ok_or(Error::NotPositiveDefinite { min_eigenvalue: min_eig })?;
        let imag_inv = (&imag_inv + imag_inv.transpose()) * 0.5;
        let tau = CMat::from_fn(x.nrows(), x.ncols(), |i, j| c(x[(i, j)], y[(i, j)]));
        Ok(SiegelPoint { tau, imag: y, imag_inv })
    }

    pub fn from_complex(tau: &CMat) -> Result<Self> {
        let sym = symmetrize_complex(tau)?;
        Self::new(&sym.map(|z| z.re), &sym.map(|z| z.im))
    }

    /// `i·I` in genus `g`.
    pub fn identity_imaginary(g: usize) -> Self {
        Self::new(&RMat::zeros(g, g), &RMat::identity(g, g)).expect("iI is a Siegel point")
    }

    pub fn genus(&self) -> usize {
        self.tau.nrows()
    }

    pub fn tau(&self) -> &CMat {
        &self.tau
    }

    pub fn real_part(&self) -> RMat {
        self.tau.map(|z| z.re)
    }

    /// `Im τ`, the metric on the Hodge bundle.
    pub fn imag(&self) -> &RMat {
        &self.imag
    }

    /// `(Im τ)⁻¹`, the metric on the dual Hodge bundle.
    pub fn imag_inv(&self) -> &RMat {
        &self.imag_inv
    }

    pub fn symmetry_deviation(&self) -> f64 {
        max_asymmetry(&self.tau, |a, b| (a - b).norm())
    }

    pub fn min_imag_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.imag)
    }
}

/// A complex symmetric `g×g` matrix, read as a symmetric map `V → V*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMap {
    m: CMat,
}

impl SymMap {
    pub fn new(m: &CMat) -> Result<Self> {
        Ok(SymMap { m: symmetrize_complex(m)? })
    }

    pub fn from_real(m: &RMat) -> Result<Self> {
        Ok(SymMap { m: complexify(&symmetrize_real(m)?) })
    }

    pub fn zero(g: usize) -> Self {
        SymMap { m: CMat::zeros(g, g) }
    }

    /// `u ⊗ u` (i.e. `u uᵀ`), rank one for nonzero `u`.
    pub fn rank_one(u: &CVec) -> Self {
        SymMap { m: u * u.transpose() }
    }

    /// `(u wᵀ + w uᵀ) / 2`.
    pub fn sym_outer(u: &CVec, w: &CVec) -> Self {
        SymMap { m: (u * w.transpose() + w * u.transpose()).unscale(2.0) }
    }

    /// The coordinate map dual to generator `(a,b)`: ones at `(a,b)` and `(b,a)`.
    pub fn elementary(g: usize, idx: GeneratorIndex) -> Self {
        let mut m = CMat::zeros(g, g);
        m[(idx.a, idx.b)] = c(1.0, 0.0);
        m[(idx.b, idx.a)] = c(1.0, 0.0);
        SymMap { m }
    }

    pub fn genus(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn get(&self, a: usize, b: usize) -> C64 {
        self.m[(a, b)]
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        &self.m * v
    }

    pub fn scale(&self, s: C64) -> Self {
        SymMap { m: self.m.scale_c(s) }
    }

    pub fn add(&self, other: &SymMap) -> Self {
        SymMap { m: &self.m + &other.m }
    }

    /// Frobenius-isometric coordinates: diagonal entries as-is, off-diagonal `(a<b)` times √2.
    pub fn to_coords(&self) -> CVec {
        let g = self.genus();
        let n = GeneratorIndex::count(g);
        CVec::from_fn(n, |k, _| {
            let idx = GeneratorIndex::from_linear(g, k);
            let z = self.m[(idx.a, idx.b)];
            if idx.a == idx.b {
                z
            } else {
                z * std::f64::consts::SQRT_2
            }
        })
    }

    /// Inverse of [`SymMap::to_coords`].
    pub fn from_coords(g: usize, coords: &[C64]) -> Self {
        let mut m = CMat::zeros(g, g);
        for (k, &z) in coords.iter().enumerate() {
            let idx = GeneratorIndex::from_linear(g, k);
            if idx.a == idx.b {
                m[(idx.a, idx.a)] = z;
            } else {
                let v = z / std::f64::consts::SQRT_2;
                m[(idx.a, idx.b)] = v;
                m[(idx.b, idx.a)] = v;
            }
        }
        SymMap { m }
    }

    pub fn rank(&self, tol: f64) -> usize {
        rank_with_kernel(&self.m, tol).rank
    }
}

trait ScaleC {
    fn scale_c(&self, s: C64) -> CMat;
}

impl ScaleC for CMat {
    fn scale_c(&self, s: C64) -> CMat {
        self.map(|z| z * s)
    }
}

/// What the coordinates of a [`LinSubspace`] mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Ambient {
    /// Plain coordinate space (V, V*, or any `C^n`).
    Vector,
    /// Symmetric maps in Frobenius-isometric coordinates (see [`SymMap::to_coords`]).
    SymMaps,
    /// A real space `R^n` embedded as real vectors of `C^n`.
    Real,
}

/// A subspace stored as a `d×n` matrix with orthonormal rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LinSubspace {
    basis: CMat,
    ambient: Ambient,
}

impl LinSubspace {
    /// Orthonormalizes the span of the given rows. Rows may be dependent;
    /// directions with relative singular value below `tol` are dropped.
    pub fn from_spanning_rows(rows: &CMat, ambient: Ambient, tol: f64) -> Self {
        let n = rows.ncols();
        let dec = rank_with_kernel(&rows.transpose(), tol);
        // the image of rowsᵀ is the span of the rows, stored as rows
        let basis = if dec.image.dim() == 0 { CMat::zeros(0, n) } else { dec.image.basis };
        LinSubspace { basis, ambient }
    }

    pub fn from_vectors(vectors: &[CVec], ambient: Ambient, tol: f64) -> Result<Self> {
        let n = vectors.first().map(|v| v.len()).ok_or_else(|| {
            Error::BadDimension("need at least one vector to infer ambient dimension".into())
        })?;
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch("vectors of different lengths".into()));
        }
        let rows = CMat::from_fn(vectors.len(), n, |i, j| vectors[i][j]);
        Ok(Self::from_spanning_rows(&rows, ambient, tol))
    }

    pub fn from_sym_maps(maps: &[SymMap], tol: f64) -> Result<Self> {
        let coords: Vec<CVec> = maps.iter().map(SymMap::to_coords).collect();
        Self::from_vectors(&coords, Ambient::SymMaps, tol)
    }

    pub fn zero(n: usize, ambient: Ambient) -> Self {
        LinSubspace { basis: CMat::zeros(0, n), ambient }
    }

    pub fn full(n: usize, ambient: Ambient) -> Self {
        LinSubspace { basis: CMat::identity(n, n), ambient }
    }

    /// Same basis, reinterpreted in another ambient space of equal dimension.
    pub fn with_ambient(mut self, ambient: Ambient) -> Self {
        self.ambient = ambient;
        self
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<CVec> {
        (0..self.dim()).map(|i| self.basis.row(i).transpose()).collect()
    }

    /// Basis rows reinterpreted as symmetric maps of genus `g`.
    pub fn sym_maps(&self, g: usize) -> Vec<SymMap> {
        (0..self.dim())
            .map(|i| {
                let row: Vec<C64> = self.basis.row(i).iter().copied().collect();
                SymMap::from_coords(g, &row)
            })
            .collect()
    }

    /// Orthogonal projector onto the subspace, acting on column vectors.
    pub fn projector(&self) -> CMat {
        // rows r_iᵀ orthonormal: P = Σ r_i r_iᴴ
        self.basis.transpose() * self.basis.map(|z| z.conj())
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn residual(&self, v: &CVec) -> f64 {
        (v - self.projector() * v).norm()
    }

    /// Largest deviation of `B B^H` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = &self.basis * self.basis.adjoint();
        (gram - CMat::identity(self.dim(), self.dim())).camax()
    }

    /// Combination `Σ coeffs_i · row_i` as a column vector.
    pub fn combine(&self, coeffs: &[C64]) -> CVec {
        let mut out = CVec::zeros(self.ambient_dim());
        for (i, &z) in coeffs.iter().enumerate() {
            out += self.basis.row(i).transpose() * z;
        }
        out
    }
}

/// Numerical rank together with orthonormal kernel and image.
#[derive(Debug, Clone)]
pub struct RankDecomposition {
    pub rank: usize,
    pub kernel: LinSubspace,
    pub image: LinSubspace,
    pub singular_values: Vec<f64>,
}

/// Rank counts singular values above `tol · σ_max`.
pub fn rank_with_kernel(m: &CMat, tol: f64) -> RankDecomposition {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 || m.iter().all(|z| z.is_zero()) {
        return RankDecomposition {
            rank: 0,
            kernel: LinSubspace::full(cols, Ambient::Vector),
            image: LinSubspace::zero(rows, Ambient::Vector),
            singular_values: vec![0.0; rows.min(cols)],
        };
    }
    // pad to at least square so that V is the full unitary and the kernel is complete
    let padded = if rows < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = sigma[0];
    let rank = sigma.iter().filter(|&&s| s > tol * smax).count();

    // right singular vectors are conj(rows of V^H); kernel vectors are those past the rank
    let kernel_rows: Vec<usize> = order[rank..].to_vec();
    let kernel = CMat::from_fn(kernel_rows.len(), cols, |i, j| v_t[(kernel_rows[i], j)].conj());
    let image = CMat::from_fn(rank, rows, |i, j| u[(j, order[i])]);
    RankDecomposition {
        rank,
        kernel: LinSubspace { basis: kernel, ambient: Ambient::Vector },
        image: LinSubspace { basis: image, ambient: Ambient::Vector },
        singular_values: sigma[..rows.min(cols)].to_vec(),
    }
}

/// Gap distance `‖P_a − P_b‖₂`: the sine of the largest principal angle for
/// equal dimensions, 1 when the dimensions differ.
pub fn subspace_distance(a: &LinSubspace, b: &LinSubspace) -> Result<f64> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    let diff = a.projector() - b.projector();
    Ok(singular_values(&diff).first().copied().unwrap_or(0.0))
}

/// Orthonormal rows spanning the row space of a real matrix.
pub fn real_orthonormal_rows(rows: &RMat, tol: f64) -> RMat {
    if rows.nrows() == 0 {
        return RMat::zeros(0, rows.ncols());
    }
    let n = rows.ncols();
    let svd = rows.transpose().svd(true, false);
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let smax = svd.singular_values[order[0]];
    let keep: Vec<usize> =
        order.into_iter().filter(|&i| svd.singular_values[i] > tol * smax).collect();
    RMat::from_fn(keep.len(), n, |i, j| u[(j, keep[i])])
}
