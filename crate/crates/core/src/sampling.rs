//! Seeded random streams and samplers for Siegel points, vectors and maps.
//!
//! Every stream is derived from a master seed and a stream index, so a
//! sample's randomness does not depend on how work is scheduled.

use nalgebra::DVector;
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, CMat, CVec, RMat, SiegelPoint, SymMap};

pub type StreamRng = ChaCha8Rng;

/// Independent stream `stream` of the master `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes a label into a seed so that different checks draw from unrelated streams.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, folded into the seed with a splitmix finalizer
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard complex Gaussian entries (`E|z|² = 1`).
pub fn random_complex_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DVector::from_fn(n, |_, _| c(s * normal(rng), s * normal(rng)))
}

pub fn random_complex_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(rows, cols, |_, _| c(s * normal(rng), s * normal(rng)))
}

/// Uniform point on the unit sphere of `C^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    loop {
        let v = random_complex_vector(n, rng);
        let norm = v.norm();
        if norm > 1e-12 {
            return v.unscale(norm);
        }
    }
}

pub fn random_real_symmetric<R: Rng + ?Sized>(g: usize, rng: &mut R) -> RMat {
    let a = RMat::from_fn(g, g, |_, _| normal(rng));
    (&a + a.transpose()) * 0.5
}

pub fn random_sym_map<R: Rng + ?Sized>(g: usize, rng: &mut R) -> SymMap {
    let a = random_complex_matrix(g, g, rng);
    SymMap::new(&(&a + a.transpose()).unscale(2.0)).expect("symmetric by construction")
}

/// A moderately conditioned point: real part Gaussian, imaginary part `AAᵀ/g + I/2`.
pub fn random_siegel_point<R: Rng + ?Sized>(g: usize, rng: &mut R) -> SiegelPoint {
    let x = random_real_symmetric(g, rng);
    let a = RMat::from_fn(g, g, |_, _| normal(rng));
    let y = &a * a.transpose() / g as f64 + RMat::identity(g, g) * 0.5;
    SiegelPoint::new(&x, &y).expect("positive definite by construction")
}

/// Integer in `[-bound, bound]` as an exact rational.
pub fn random_rational<R: Rng + ?Sized>(bound: i64, rng: &mut R) -> BigRational {
    BigRational::from_integer(rng.random_range(-bound..=bound).into())
}

pub fn random_rational_vector<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Vec<BigRational> {
    (0..n).map(|_| random_rational(bound, rng)).collect()
}
