//! Symmetric maps `V → V*`, evaluation maps and rank loci.
//!
//! `V*` is identified with coordinate vectors through the standard basis, so
//! a symmetric map is a symmetric matrix `M` and the evaluation map at `v`
//! sends `M` to `M·v`. For `X` a space of symmetric maps, the hypothesis
//! "`e_v: Y → V*` fails to be injective for every `v` and every `i`-plane
//! `Y ⊆ X`" is equivalent to `rank(e_v|X) ≤ i − 1` for every `v`.
//!
//! Decisions about rank are made exactly over `BigRational` where it
//! matters; the floating path mirrors it for speed and for complex inputs.

use num::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::extform::GeneratorIndex;
use crate::linalg::{
    c, rank_with_kernel, subspace_distance, Ambient, CMat, CVec, LinSubspace, SymMap, C64,
    DEFAULT_RANK_TOL,
};
use crate::rational::{q, QMatrix, Q};
use crate::report::{CheckRecord, VerificationReport};
use crate::sampling::{derive_seed, random_complex_vector, random_rational, random_rational_vector, stream_rng, StreamRng};

/// Integer range `[-B, B]` of exact random samples.
pub const SAMPLE_BOUND: i64 = 1000;

const ANCHOR_WPERP: &str = "maps whose kernel contains W form a space of dimension c(c+1)/2";
const ANCHOR_HYPOTHESIS: &str = "on W-perp every evaluation map has rank at most i-1";
const ANCHOR_MAXIMAL: &str = "no other sampled space satisfies the non-injectivity hypothesis";
const ANCHOR_SMALL_I: &str = "for i = 1, 2 the non-injectivity hypothesis is never met";

/// Genus `g` with `g(g+1)/2 = n`.
pub fn genus_from_count(n: usize) -> Option<usize> {
    (0..=n).find(|&g| GeneratorIndex::count(g) == n)
}

/// A symmetric matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSymMap {
    m: QMatrix,
}

impl RationalSymMap {
    pub fn new(m: QMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if !m.is_symmetric() {
            let dev = (0..m.nrows())
                .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
                .map(|(i, j)| (&m[(i, j)] - &m[(j, i)]).abs().to_f64().unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max);
            return Err(Error::NotSymmetric { deviation: dev });
        }
        Ok(RationalSymMap { m })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(QMatrix::from_i64(rows)?)
    }

    pub fn zero(g: usize) -> Self {
        RationalSymMap { m: QMatrix::zeros(g, g) }
    }

    /// `u uᵀ`.
    pub fn rank_one(u: &[Q]) -> Self {
        Self::sym_outer(u, u)
    }

    /// `(u wᵀ + w uᵀ) / 2`.
    pub fn sym_outer(u: &[Q], w: &[Q]) -> Self {
        let half = Q::new(1.into(), 2.into());
        let g = u.len();
        RationalSymMap { m: QMatrix::from_fn(g, g, |i, j| (&u[i] * &w[j] + &w[i] * &u[j]) * &half) }
    }

    /// Random entries in `[-bound, bound]`.
    pub fn random(g: usize, bound: i64, rng: &mut StreamRng) -> Self {
        let mut m = QMatrix::zeros(g, g);
        for i in 0..g {
            for j in i..g {
                let x = random_rational(bound, rng);
                m[(i, j)] = x.clone();
                m[(j, i)] = x;
            }
        }
        RationalSymMap { m }
    }

    pub fn genus(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.m
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.m.mul_vec(v).expect("length g")
    }

    pub fn rank(&self) -> usize {
        self.m.rank()
    }

    pub fn add(&self, other: &RationalSymMap) -> Self {
        RationalSymMap { m: self.m.add(&other.m).expect("same genus") }
    }

    pub fn scale(&self, s: &Q) -> Self {
        RationalSymMap { m: self.m.scale(s) }
    }

    /// Upper-triangle entries in generator order.
    pub fn upper_coords(&self) -> Vec<Q> {
        let g = self.genus();
        GeneratorIndex::all(g).map(|idx| self.m[(idx.a, idx.b)].clone()).collect()
    }

    /// Floating-point shadow.
    pub fn to_sym_map(&self) -> SymMap {
        SymMap::new(&self.m.to_complex()).expect("exactly symmetric")
    }
}

/// A finite list of linearly independent rational symmetric maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSpan {
    g: usize,
    maps: Vec<RationalSymMap>,
}

impl RationalSpan {
    /// Keeps the given maps as the basis; fails if they are dependent.
    pub fn new(g: usize, maps: Vec<RationalSymMap>) -> Result<Self> {
        if let Some(bad) = maps.iter().find(|m| m.genus() != g) {
            return Err(Error::GenusMismatch { left: g, right: bad.genus() });
        }
        let span = RationalSpan { g, maps };
        if span.coord_matrix().rank() < span.maps.len() {
            return Err(Error::NotIndependent);
        }
        Ok(span)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[RationalSymMap] {
        &self.maps
    }

    /// Rows are [`RationalSymMap::upper_coords`] of the basis.
    pub fn coord_matrix(&self) -> QMatrix {
        let n = GeneratorIndex::count(self.g);
        let rows: Vec<Vec<Q>> = self.maps.iter().map(RationalSymMap::upper_coords).collect();
        if rows.is_empty() {
            return QMatrix::zeros(0, n);
        }
        QMatrix::from_rows(&rows).expect("equal lengths")
    }

    pub fn contains(&self, m: &RationalSymMap) -> bool {
        let base = self.coord_matrix();
        let extended = QMatrix::from_rows(
            &(0..base.nrows()).map(|i| base.row(i).to_vec()).chain([m.upper_coords()]).collect::<Vec<_>>(),
        )
        .expect("equal lengths");
        extended.rank() == base.rank()
    }

    /// Floating-point subspace in Frobenius-isometric coordinates.
    pub fn to_subspace(&self) -> LinSubspace {
        let n = GeneratorIndex::count(self.g);
        if self.maps.is_empty() {
            return LinSubspace::zero(n, Ambient::SymMaps);
        }
        let coords: Vec<CVec> = self.maps.iter().map(|m| m.to_sym_map().to_coords()).collect();
        LinSubspace::from_vectors(&coords, Ambient::SymMaps, 1e-12).expect("nonempty")
    }

    /// `dim × g` matrix with row `j` equal to `(x_j v)ᵀ`.
    pub fn eval_matrix(&self, v: &[Q]) -> QMatrix {
        QMatrix::from_rows(&self.maps.iter().map(|m| m.apply(v)).collect::<Vec<_>>())
            .unwrap_or_else(|_| QMatrix::zeros(0, self.g))
    }
}

/// The evaluation map `e_v` restricted to `span(x_basis)`.
#[derive(Debug, Clone)]
pub struct EvalOperator {
    x_basis: Vec<SymMap>,
    v: CVec,
    matrix: CMat,
}

impl EvalOperator {
    pub fn new(x_basis: &[SymMap], v: &CVec) -> Self {
        let g = v.len();
        let matrix = CMat::from_fn(x_basis.len(), g, |j, a| x_basis[j].apply(v)[a]);
        EvalOperator { x_basis: x_basis.to_vec(), v: v.clone(), matrix }
    }

    pub fn x_basis(&self) -> &[SymMap] {
        &self.x_basis
    }

    pub fn v(&self) -> &CVec {
        &self.v
    }

    /// Row `j` is `x_j · v`.
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn rank(&self, tol: f64) -> usize {
        rank_with_kernel(&self.matrix, tol).rank
    }

    /// Indices of a maximal set of independent rows, chosen greedily.
    pub fn independent_rows(&self, tol: f64) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        for j in 0..self.matrix.nrows() {
            let mut trial = chosen.clone();
            trial.push(j);
            let sub = CMat::from_fn(trial.len(), self.matrix.ncols(), |r, col| self.matrix[(trial[r], col)]);
            if rank_with_kernel(&sub, tol).rank == trial.len() {
                chosen = trial;
            }
        }
        chosen
    }
}

/// Orthonormal basis of `{M symmetric : M w = 0 for all w ∈ W}`.
pub fn wperp(w: &LinSubspace) -> LinSubspace {
    let g = w.ambient_dim();
    let n = GeneratorIndex::count(g);
    let gens: Vec<SymMap> = GeneratorIndex::all(g)
        .map(|idx| {
            let mut coords = vec![c(0.0, 0.0); n];
            coords[idx.linear(g)] = c(1.0, 0.0);
            SymMap::from_coords(g, &coords)
        })
        .collect();
    // equation (j, a): Σ_k x_k (B_k w_j)_a = 0
    let ws = w.basis_vectors();
    let constraints = CMat::from_fn(ws.len() * g, n, |row, k| gens[k].apply(&ws[row / g])[row % g]);
    if constraints.nrows() == 0 {
        return LinSubspace::full(n, Ambient::SymMaps);
    }
    rank_with_kernel(&constraints, DEFAULT_RANK_TOL).kernel.with_ambient(Ambient::SymMaps)
}

/// Exact `W⊥` for `W` spanned by the rows of `w_rows`: with `a_1..a_c` a
/// basis of `{a : a·w = 0}`, the maps `sym(a_i ⊗ a_j)`, `i ≤ j`.
pub fn wperp_exact(w_rows: &QMatrix) -> Result<RationalSpan> {
    let g = w_rows.ncols();
    let ann = w_rows.nullspace();
    let mut maps = Vec::new();
    for i in 0..ann.len() {
        for j in i..ann.len() {
            maps.push(RationalSymMap::sym_outer(&ann[i], &ann[j]));
        }
    }
    RationalSpan::new(g, maps)
}

/// Outcome of sampling `rank(e_v|X)` over random `v`.
#[derive(Debug, Clone)]
pub struct HypothesisOutcome<W> {
    pub holds: bool,
    pub samples_tested: usize,
    pub max_rank: usize,
    /// Upper bound on the probability that the hypothesis fails but no sample showed it.
    pub failure_bound: f64,
    pub witness: Option<W>,
}

/// `v` with `e_v` injective on the `i`-plane `y`.
#[derive(Debug, Clone)]
pub struct Witness {
    pub v: CVec,
    pub y: LinSubspace,
}

#[derive(Debug, Clone)]
pub struct ExactWitness {
    pub v: Vec<Q>,
    pub y: RationalSpan,
}

/// Exact check with integer samples in `[-1000, 1000]`. Failure of the
/// hypothesis means some `i×i` minor of the evaluation matrix is a nonzero
/// polynomial of degree `i` in `v`, which a uniform sample misses with
/// probability at most `i / 2001`.
pub fn hypothesis_check_exact(
    x: &RationalSpan,
    i: usize,
    n_v_samples: usize,
    seed: u64,
) -> Result<HypothesisOutcome<ExactWitness>> {
    if x.dim() < i {
        return Err(Error::BadDimension(format!("dim X = {} < i = {i}", x.dim())));
    }
    let mut rng = stream_rng(seed, 0);
    let mut max_rank = 0;
    for s in 0..n_v_samples {
        let v = random_rational_vector(x.genus(), SAMPLE_BOUND, &mut rng);
        let e = x.eval_matrix(&v);
        // pivot columns of eᵀ are independent rows of e
        let (_, pivots) = e.transpose().rref();
        max_rank = max_rank.max(pivots.len());
        if pivots.len() >= i {
            let maps = pivots[..i].iter().map(|&j| x.maps()[j].clone()).collect();
            let y = RationalSpan::new(x.genus(), maps)?;
            return Ok(HypothesisOutcome {
                holds: false,
                samples_tested: s + 1,
                max_rank,
                failure_bound: 0.0,
                witness: Some(ExactWitness { v, y }),
            });
        }
    }
    Ok(HypothesisOutcome {
        holds: true,
        samples_tested: n_v_samples,
        max_rank,
        failure_bound: (i as f64 / (2 * SAMPLE_BOUND + 1) as f64).powi(n_v_samples as i32),
        witness: None,
    })
}

/// Floating-point check with complex Gaussian `v` and relative rank tolerance `tol`.
pub fn hypothesis_check(
    x: &LinSubspace,
    i: usize,
    n_v_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<HypothesisOutcome<Witness>> {
    if x.ambient() != Ambient::SymMaps {
        return Err(Error::DimensionMismatch("X must be a space of symmetric maps".into()));
    }
    if x.dim() < i {
        return Err(Error::BadDimension(format!("dim X = {} < i = {i}", x.dim())));
    }
    let g = genus_from_count(x.ambient_dim())
        .ok_or_else(|| Error::BadDimension(format!("{} is not g(g+1)/2", x.ambient_dim())))?;
    let basis = x.sym_maps(g);
    let mut rng = stream_rng(seed, 0);
    let mut max_rank = 0;
    for s in 0..n_v_samples {
        let v = random_complex_vector(g, &mut rng);
        let op = EvalOperator::new(&basis, &v);
        let rank = op.rank(tol);
        max_rank = max_rank.max(rank);
        if rank >= i {
            let rows = op.independent_rows(tol);
            let coords: Vec<CVec> = rows[..i].iter().map(|&j| basis[j].to_coords()).collect();
            let y = LinSubspace::from_vectors(&coords, Ambient::SymMaps, 1e-12)?;
            return Ok(HypothesisOutcome {
                holds: false,
                samples_tested: s + 1,
                max_rank,
                failure_bound: 0.0,
                witness: Some(Witness { v, y }),
            });
        }
    }
    Ok(HypothesisOutcome { holds: true, samples_tested: n_v_samples, max_rank, failure_bound: 0.0, witness: None })
}

/// The two membership tests for `N ∈ T_M R_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVerdict {
    /// `N(ker M) ⊆ im M`.
    pub predicate: bool,
    /// Every `(k+1)`-minor has zero derivative at `M` in direction `N`.
    pub minor_test: bool,
    /// Largest absolute minor derivative.
    pub derivative_norm: f64,
}

impl TangentVerdict {
    pub fn agree(&self) -> bool {
        self.predicate == self.minor_test
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in start..n {
            prefix.push(i);
            go(i + 1, n, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exact tangent test at a point `m` of rank exactly `k`.
pub fn rank_locus_tangent_check(m: &RationalSymMap, n: &RationalSymMap, k: usize) -> Result<TangentVerdict> {
    let g = m.genus();
    if n.genus() != g {
        return Err(Error::GenusMismatch { left: g, right: n.genus() });
    }
    let found = m.rank();
    if found != k {
        return Err(Error::RankMismatch { expected: k, found });
    }
    let kernel = m.matrix().nullspace();
    let predicate = if kernel.is_empty() {
        true
    } else {
        let images: Vec<Vec<Q>> = kernel.iter().map(|z| n.apply(z)).collect();
        let nk = QMatrix::from_rows(&images)?.transpose();
        m.matrix().hstack(&nk)?.rank() == k
    };

    let mut max_deriv = Q::zero();
    if k < g {
        let sets = combinations(g, k + 1);
        for rows in &sets {
            for cols in &sets {
                let a = m.matrix().select(rows, cols);
                let b = n.matrix().select(rows, cols);
                let mut deriv = Q::zero();
                for j in 0..=k {
                    let mut replaced = a.clone();
                    for r in 0..=k {
                        replaced[(r, j)] = b[(r, j)].clone();
                    }
                    deriv += replaced.determinant()?;
                }
                if deriv.abs() > max_deriv {
                    max_deriv = deriv.abs();
                }
            }
        }
    }
    Ok(TangentVerdict {
        predicate,
        minor_test: max_deriv.is_zero(),
        derivative_norm: max_deriv.to_f64().unwrap_or(f64::INFINITY),
    })
}

fn random_full_rank(rows: usize, cols: usize, bound: i64, rng: &mut StreamRng) -> QMatrix {
    loop {
        let m = QMatrix::from_fn(rows, cols, |_, _| random_rational(bound, rng));
        if m.rank() == rows.min(cols) {
            return m;
        }
    }
}

/// `M = U C Uᵀ` of rank exactly `k`, and a direction `N` that is tangent
/// (`N = X Uᵀ + U Xᵀ + U B Uᵀ`) when `tangent` is set and generic otherwise.
pub fn random_rank_locus_pair(
    g: usize,
    k: usize,
    tangent: bool,
    rng: &mut StreamRng,
) -> (RationalSymMap, RationalSymMap) {
    let u = random_full_rank(g, k, 3, rng);
    let c_mat = loop {
        let c_mat = RationalSymMap::random(k, 3, rng);
        if c_mat.rank() == k {
            break c_mat;
        }
    };
    let m = u.mul(c_mat.matrix()).and_then(|uc| uc.mul(&u.transpose())).expect("shapes");
    let n = if tangent {
        let x = QMatrix::from_fn(g, k, |_, _| random_rational(3, rng));
        let b = RationalSymMap::random(k, 3, rng);
        let xu = x.mul(&u.transpose()).expect("shapes");
        let ubu = u.mul(b.matrix()).and_then(|ub| ub.mul(&u.transpose())).expect("shapes");
        xu.add(&xu.transpose()).and_then(|s| s.add(&ubu)).expect("shapes")
    } else {
        RationalSymMap::random(g, 3, rng).matrix().clone()
    };
    (RationalSymMap::new(m).expect("symmetric"), RationalSymMap::new(n).expect("symmetric"))
}

/// Ranks seen along the pencil `aM + bN`.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilProfile {
    pub max_rank: usize,
    pub rank_two_found: bool,
    pub samples: usize,
}

/// `(a, b) = (cos θ, e^{iφ} sin θ)` on an `n_grid × n_grid` grid.
pub fn pencil_rank_profile(m: &SymMap, n: &SymMap, n_grid: usize) -> Result<PencilProfile> {
    for map in [m, n] {
        let r = map.rank(DEFAULT_RANK_TOL);
        if r != 1 {
            return Err(Error::InputNotRankOne(r));
        }
    }
    if LinSubspace::from_sym_maps(&[m.clone(), n.clone()], DEFAULT_RANK_TOL)?.dim() < 2 {
        return Err(Error::NotIndependent);
    }
    let mut max_rank = 0;
    let mut samples = 0;
    for jt in 0..n_grid.max(1) {
        let theta = std::f64::consts::PI * (jt as f64 + 0.5) / n_grid.max(1) as f64;
        for jp in 0..n_grid.max(1) {
            let phi = 2.0 * std::f64::consts::PI * jp as f64 / n_grid.max(1) as f64;
            let b = C64::from_polar(theta.sin(), phi);
            let r = m.scale(c(theta.cos(), 0.0)).add(&n.scale(b)).rank(DEFAULT_RANK_TOL);
            max_rank = max_rank.max(r);
            samples += 1;
        }
    }
    Ok(PencilProfile { max_rank, rank_two_found: max_rank >= 2, samples })
}

/// `X ∩ v⊥`, the maps in `X` that vanish on `v`.
pub fn intersect_vperp(x: &LinSubspace, v: &CVec) -> Result<LinSubspace> {
    let g = v.len();
    if x.ambient_dim() != GeneratorIndex::count(g) {
        return Err(Error::DimensionMismatch(format!("X lives in S_{}", genus_from_count(x.ambient_dim()).unwrap_or(0))));
    }
    if x.dim() == 0 {
        return Ok(x.clone());
    }
    let basis = x.sym_maps(g);
    let a = CMat::from_fn(g, basis.len(), |row, j| basis[j].apply(v)[row]);
    let kernel = rank_with_kernel(&a, DEFAULT_RANK_TOL).kernel;
    if kernel.dim() == 0 {
        return Ok(LinSubspace::zero(x.ambient_dim(), Ambient::SymMaps));
    }
    let vectors: Vec<CVec> = kernel
        .basis_vectors()
        .iter()
        .map(|coeffs| x.combine(coeffs.as_slice()))
        .collect();
    LinSubspace::from_vectors(&vectors, Ambient::SymMaps, 1e-12)
}

#[derive(Debug, Clone)]
pub struct RankOneSearch {
    pub intersection: LinSubspace,
    pub rank_ones: Vec<SymMap>,
    /// False when the intersection has dimension ≥ 3 and no search was made.
    pub searched: bool,
}

const RANK_ONE_TOL: f64 = 1e-8;

fn is_rank_one(m: &SymMap) -> bool {
    m.rank(RANK_ONE_TOL) == 1
}

/// Roots of `q0 + q1 t + q2 t²` (all of them when the polynomial is nonzero).
fn quadratic_roots(q0: C64, q1: C64, q2: C64) -> Vec<C64> {
    let scale = q0.norm().max(q1.norm()).max(q2.norm());
    if q2.norm() > 1e-12 * scale {
        let disc = (q1 * q1 - q0 * q2 * 4.0).sqrt();
        vec![(-q1 + disc) / (q2 * 2.0), (-q1 - disc) / (q2 * 2.0)]
    } else if q1.norm() > 1e-12 * scale {
        vec![-q0 / q1]
    } else {
        Vec::new()
    }
}

/// Rank-one maps in `X ∩ v⊥`, searched when the intersection has dimension at most 2.
pub fn find_rank_ones(x: &LinSubspace, v: &CVec) -> Result<RankOneSearch> {
    let g = v.len();
    let inter = intersect_vperp(x, v)?;
    let maps = inter.sym_maps(g);
    let rank_ones = match maps.len() {
        0 => Vec::new(),
        1 => maps.into_iter().filter(is_rank_one).collect(),
        2 => {
            let (a, b) = (&maps[0], &maps[1]);
            // 2×2 minors of a + t b as quadratics in t; keep the largest one
            let mut best: Option<(f64, [C64; 3])> = None;
            for rows in combinations(g, 2) {
                for cols in combinations(g, 2) {
                    let e = |m: &SymMap, i: usize, j: usize| m.get(rows[i], cols[j]);
                    let q0 = e(a, 0, 0) * e(a, 1, 1) - e(a, 0, 1) * e(a, 1, 0);
                    let q1 = e(a, 0, 0) * e(b, 1, 1) + e(b, 0, 0) * e(a, 1, 1)
                        - e(a, 0, 1) * e(b, 1, 0)
                        - e(b, 0, 1) * e(a, 1, 0);
                    let q2 = e(b, 0, 0) * e(b, 1, 1) - e(b, 0, 1) * e(b, 1, 0);
                    let size = q0.norm() + q1.norm() + q2.norm();
                    if best.as_ref().is_none_or(|(s, _)| size > *s) {
                        best = Some((size, [q0, q1, q2]));
                    }
                }
            }
            let mut out = Vec::new();
            match best {
                Some((size, _)) if size < 1e-12 => {
                    out.extend(maps.iter().filter(|m| is_rank_one(m)).cloned());
                }
                Some((_, [q0, q1, q2])) => {
                    for t in quadratic_roots(q0, q1, q2) {
                        let m = a.add(&b.scale(t));
                        if is_rank_one(&m) {
                            out.push(m);
                        }
                    }
                    if is_rank_one(b) {
                        out.push(b.clone());
                    }
                }
                None => {}
            }
            out
        }
        _ => {
            return Ok(RankOneSearch { intersection: inter, rank_ones: Vec::new(), searched: false });
        }
    };
    Ok(RankOneSearch { intersection: inter, rank_ones, searched: true })
}

fn random_w_rows(g: usize, dim: usize, rng: &mut StreamRng) -> QMatrix {
    random_full_rank(dim, g, SAMPLE_BOUND, rng)
}

fn random_span(g: usize, dim: usize, rng: &mut StreamRng) -> RationalSpan {
    loop {
        let maps = (0..dim).map(|_| RationalSymMap::random(g, SAMPLE_BOUND, rng)).collect();
        if let Ok(span) = RationalSpan::new(g, maps) {
            return span;
        }
    }
}

fn format_vector(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Counts how many of `trials` sampled spaces yield a witness.
fn count_witnesses<F>(trials: usize, seed: u64, label: &str, i: usize, mut make: F) -> Result<(usize, String)>
where
    F: FnMut(&mut StreamRng) -> RationalSpan,
{
    let mut found = 0;
    let mut first = String::new();
    for t in 0..trials {
        let mut rng = stream_rng(derive_seed(seed, label), t as u64);
        let x = make(&mut rng);
        let outcome = hypothesis_check_exact(&x, i, 100, derive_seed(seed, &format!("{label}-v-{t}")))?;
        if let Some(w) = outcome.witness {
            found += 1;
            if first.is_empty() {
                first = format!("first witness v = {}", format_vector(&w.v));
            }
        }
    }
    Ok((found, first))
}

/// Randomized verification, for `3 ≤ i ≤ g ≤ 5`, that `W⊥` (with
/// `dim W = g − i + 1`) has dimension `i(i−1)/2` and satisfies the
/// non-injectivity hypothesis, while perturbed and generic spaces do not, and
/// that no space satisfies it when `i ∈ {1, 2}`.
pub fn theorem25_suite(g: usize, i: usize, trials: usize, seed: u64) -> Result<VerificationReport> {
    if !(3 <= i && i <= g && g <= 5) {
        return Err(Error::BadParameters(format!("need 3 <= i <= g <= 5, got g={g}, i={i}")));
    }
    let mut report = VerificationReport::new("symmap-thm25", json!({ "genus": g, "i": i, "trials": trials }));
    let target = i * (i - 1) / 2;

    // (a) W⊥ itself
    let mut rng = stream_rng(derive_seed(seed, "thm25-w"), 0);
    let w_rows = random_w_rows(g, g - i + 1, &mut rng);
    let x = wperp_exact(&w_rows)?;
    report.push(CheckRecord::at_most(
        "dim W-perp - i(i-1)/2",
        ANCHOR_WPERP,
        (x.dim() as f64 - target as f64).abs(),
        0.0,
    ));
    let exact = hypothesis_check_exact(&x, i, 100, derive_seed(seed, "thm25-exact"))?;
    report.push(
        CheckRecord::holds("W-perp passes (exact)", ANCHOR_HYPOTHESIS, exact.holds).with_notes(format!(
            "{} samples, max rank {}, miss probability <= {:.1e}",
            exact.samples_tested, exact.max_rank, exact.failure_bound
        )),
    );
    let x_float = x.to_subspace();
    let float = hypothesis_check(&x_float, i, 100, derive_seed(seed, "thm25-float"), DEFAULT_RANK_TOL)?;
    report.push(CheckRecord::holds("W-perp passes (floating)", ANCHOR_HYPOTHESIS, float.holds));
    let w_float = LinSubspace::from_spanning_rows(&w_rows.to_complex(), Ambient::Vector, 1e-12);
    report.push(CheckRecord::at_most(
        "exact vs floating W-perp distance",
        ANCHOR_WPERP,
        subspace_distance(&wperp(&w_float), &x_float)?,
        1e-10,
    ));

    // (b) perturbations of one basis element by ε·R with R outside W⊥
    let (found, first) = count_witnesses(trials, seed, "thm25-perturbed", i, |rng| {
        let eps = if rng.random_bool(0.5) { q(1) } else { Q::new(1.into(), 1000.into()) };
        loop {
            let r = RationalSymMap::random(g, SAMPLE_BOUND, rng);
            if x.contains(&r) {
                continue;
            }
            let slot = rng.random_range(0..x.dim());
            let mut maps = x.maps().to_vec();
            maps[slot] = maps[slot].add(&r.scale(&eps));
            if let Ok(span) = RationalSpan::new(g, maps) {
                return span;
            }
        }
    })?;
    report.push(
        CheckRecord::at_least("perturbed spaces with witness", ANCHOR_MAXIMAL, found as f64, trials as f64)
            .with_notes(first),
    );

    // (c) generic spaces of the same dimension and one larger
    for (label, dim) in [("generic", target), ("generic+1", target + 1)] {
        let (found, first) = count_witnesses(trials, seed, &format!("thm25-{label}"), i, |rng| random_span(g, dim, rng))?;
        report.push(
            CheckRecord::at_least(&format!("{label} spaces with witness"), ANCHOR_MAXIMAL, found as f64, trials as f64)
                .with_notes(first),
        );
    }

    // (d) i ∈ {1, 2}: generic spaces, W⊥ of codimension i, and spans of rank-one maps
    for small in [1usize, 2] {
        let dim = small.max(small * (small - 1) / 2);
        let kinds: [(&str, Box<dyn Fn(&mut StreamRng) -> RationalSpan>); 3] = [
            ("generic", Box::new(move |rng| random_span(g, dim, rng))),
            (
                "w-perp",
                Box::new(move |rng| wperp_exact(&random_w_rows(g, g - small, rng)).expect("independent")),
            ),
            (
                "rank-one",
                Box::new(move |rng| loop {
                    let maps = (0..dim)
                        .map(|_| RationalSymMap::rank_one(&random_rational_vector(g, SAMPLE_BOUND, rng)))
                        .collect();
                    if let Ok(span) = RationalSpan::new(g, maps) {
                        break span;
                    }
                }),
            ),
        ];
        for (kind, make) in kinds {
            let label = format!("thm25-small-{small}-{kind}");
            let (found, first) = count_witnesses(trials, seed, &label, small, |rng| make(rng))?;
            report.push(
                CheckRecord::at_least(&format!("i={small} {kind} spaces with witness"), ANCHOR_SMALL_I, found as f64, trials as f64)
                    .with_notes(first),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_sym_map;
    use num::One;

    fn e(g: usize, i: usize) -> Vec<Q> {
        (0..g).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
    }

    fn fe(g: usize, i: usize) -> CVec {
        CVec::from_fn(g, |j, _| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn wperp_dimensions() {
        let w = QMatrix::from_rows(&[e(3, 0)]).unwrap();
        assert_eq!(wperp_exact(&w).unwrap().dim(), 3);
        let full = QMatrix::identity(3);
        assert_eq!(wperp_exact(&full).unwrap().dim(), 0);
        assert_eq!(wperp_exact(&QMatrix::zeros(0, 3)).unwrap().dim(), 6);

        let wf = LinSubspace::from_vectors(&[fe(3, 0)], Ambient::Vector, 1e-12).unwrap();
        assert_eq!(wperp(&wf).dim(), 3);
        assert_eq!(wperp(&LinSubspace::full(3, Ambient::Vector)).dim(), 0);
        assert_eq!(wperp(&LinSubspace::zero(3, Ambient::Vector)).dim(), 6);
    }

    #[test]
    fn wperp_members_kill_w() {
        let mut rng = stream_rng(51, 0);
        for g in 2..=5 {
            for dim_w in 0..=g {
                let ws: Vec<CVec> = (0..dim_w).map(|_| random_complex_vector(g, &mut rng)).collect();
                let w = if dim_w == 0 {
                    LinSubspace::zero(g, Ambient::Vector)
                } else {
                    LinSubspace::from_vectors(&ws, Ambient::Vector, 1e-12).unwrap()
                };
                let x = wperp(&w);
                let codim = g - dim_w;
                assert_eq!(x.dim(), codim * (codim + 1) / 2);
                for m in x.sym_maps(g) {
                    for wv in &ws {
                        assert!(m.apply(wv).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn evaluation_is_symmetric() {
        let mut rng = stream_rng(52, 0);
        for _ in 0..20 {
            let m = random_sym_map(4, &mut rng);
            let u = random_complex_vector(4, &mut rng);
            let v = random_complex_vector(4, &mut rng);
            let lhs = (u.transpose() * m.apply(&v))[(0, 0)];
            let rhs = (v.transpose() * m.apply(&u))[(0, 0)];
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn hypothesis_examples() {
        let w = QMatrix::from_rows(&[e(3, 0)]).unwrap();
        let x = wperp_exact(&w).unwrap();
        let out = hypothesis_check_exact(&x, 3, 100, 1).unwrap();
        assert!(out.holds && out.witness.is_none() && out.max_rank == 2);
        assert!(out.failure_bound < 1e-200);

        let mut rng = stream_rng(53, 0);
        let generic = random_span(3, 3, &mut rng);
        let out = hypothesis_check_exact(&generic, 3, 100, 2).unwrap();
        let wit = out.witness.expect("generic space has a witness");
        assert_eq!(wit.y.dim(), 3);
        assert_eq!(wit.y.eval_matrix(&wit.v).rank(), 3);

        let one = RationalSpan::new(3, vec![RationalSymMap::random(3, 5, &mut rng)]).unwrap();
        assert!(!hypothesis_check_exact(&one, 1, 10, 3).unwrap().holds);
        assert!(matches!(hypothesis_check_exact(&one, 2, 10, 3), Err(Error::BadDimension(_))));

        let out = hypothesis_check(&x.to_subspace(), 3, 100, 4, DEFAULT_RANK_TOL).unwrap();
        assert!(out.holds);
        let out = hypothesis_check(&generic.to_subspace(), 3, 100, 4, DEFAULT_RANK_TOL).unwrap();
        assert!(!out.holds);
    }

    #[test]
    fn tangent_examples() {
        let m = RationalSymMap::rank_one(&e(2, 0));
        let n = RationalSymMap::rank_one(&e(2, 1));
        let v = rank_locus_tangent_check(&m, &n, 1).unwrap();
        assert!(!v.predicate && !v.minor_test && v.derivative_norm > 0.0);

        let n = RationalSymMap::sym_outer(&e(2, 0), &e(2, 1)).scale(&q(2));
        let v = rank_locus_tangent_check(&m, &n, 1).unwrap();
        assert!(v.predicate && v.minor_test && v.derivative_norm == 0.0);

        let full = RationalSymMap::from_i64(&[&[2, 1], &[1, 3]]).unwrap();
        let v = rank_locus_tangent_check(&full, &n, 2).unwrap();
        assert!(v.predicate && v.minor_test);

        assert!(matches!(
            rank_locus_tangent_check(&m, &n, 2),
            Err(Error::RankMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn tangent_tests_agree_on_random_pairs() {
        let mut rng = stream_rng(54, 0);
        for g in 2..=3 {
            for k in 1..g {
                for t in 0..10 {
                    let (m, n) = random_rank_locus_pair(g, k, t % 2 == 0, &mut rng);
                    let v = rank_locus_tangent_check(&m, &n, k).unwrap();
                    assert!(v.agree(), "g={g} k={k}: {v:?}");
                    if t % 2 == 0 {
                        assert!(v.predicate);
                    }
                }
            }
        }
    }

    #[test]
    fn pencil_examples() {
        let m = SymMap::rank_one(&fe(3, 0));
        let n = SymMap::rank_one(&fe(3, 1));
        let p = pencil_rank_profile(&m, &n, 8).unwrap();
        assert_eq!(p.max_rank, 2);
        assert!(p.rank_two_found);
        assert!(matches!(pencil_rank_profile(&m, &m.scale(c(2.0, 0.0)), 4), Err(Error::NotIndependent)));
        let two = m.add(&n);
        assert!(matches!(pencil_rank_profile(&two, &n, 4), Err(Error::InputNotRankOne(2))));
    }

    #[test]
    fn rank_one_search_examples() {
        let w = LinSubspace::from_vectors(&[fe(3, 0)], Ambient::Vector, 1e-12).unwrap();
        let x = wperp(&w);
        let found = find_rank_ones(&x, &fe(3, 1)).unwrap();
        assert_eq!(found.intersection.dim(), 1);
        assert_eq!(found.rank_ones.len(), 1);
        let r = &found.rank_ones[0];
        assert!(r.get(2, 2).norm() > 0.5 && r.get(0, 0).norm() < 1e-12 && r.get(1, 1).norm() < 1e-12);

        // v ∈ W: the whole of W⊥ kills v
        let inter = intersect_vperp(&x, &fe(3, 0)).unwrap();
        assert!(subspace_distance(&inter, &x).unwrap() < 1e-12);
        assert!(!find_rank_ones(&x, &fe(3, 0)).unwrap().searched);

        let id = LinSubspace::from_sym_maps(&[SymMap::from_real(&crate::linalg::RMat::identity(3, 3)).unwrap()], 1e-12).unwrap();
        let mut rng = stream_rng(55, 0);
        let none = find_rank_ones(&id, &random_complex_vector(3, &mut rng)).unwrap();
        assert!(none.rank_ones.is_empty());
    }

    #[test]
    fn pencil_rank_one_roots() {
        // span(e1e1ᵀ + e2e2ᵀ, e1e1ᵀ − e2e2ᵀ) in g = 3 with v = e3 contains e1e1ᵀ and e2e2ᵀ
        let a = SymMap::rank_one(&fe(3, 0)).add(&SymMap::rank_one(&fe(3, 1)));
        let b = SymMap::rank_one(&fe(3, 0)).add(&SymMap::rank_one(&fe(3, 1)).scale(c(-1.0, 0.0)));
        let x = LinSubspace::from_sym_maps(&[a, b], 1e-12).unwrap();
        let found = find_rank_ones(&x, &fe(3, 2)).unwrap();
        assert_eq!(found.intersection.dim(), 2);
        assert_eq!(found.rank_ones.len(), 2);
    }

    #[test]
    fn suite_small_run() {
        let rep = theorem25_suite(3, 3, 5, 11).unwrap();
        assert!(rep.passed(), "{rep:#?}");
        assert!(matches!(theorem25_suite(3, 2, 5, 11), Err(Error::BadParameters(_))));
    }
}
