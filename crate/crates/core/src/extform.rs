//! Exterior algebra at a point of Siegel space.
//!
//! The cotangent space is spanned by the holomorphic generators `dτ_ab`
//! (one per unordered pair `a ≤ b`, since `τ` is symmetric) and their
//! conjugates. A form is a sparse sum of monomials `c · dτ_S ∧ dτ̄_T`, with
//! `S` and `T` stored as bitmasks and the canonical order "holomorphic
//! generators ascending, then antiholomorphic ascending". Internally both
//! sets share one `u64`: holomorphic generator `k` is bit `k`, its conjugate
//! is bit `n + k` where `n = g(g+1)/2`. With that layout the canonical order
//! is just ascending bit order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::Zero;

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, LinSubspace, SymMap, C64};

/// Largest genus whose generators fit the `u64` bitmask layout.
pub const MAX_GENUS: usize = 7;

/// Coordinate `τ_ab` with `a ≤ b`, linearized row by row over the upper triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorIndex {
    pub a: usize,
    pub b: usize,
}

impl GeneratorIndex {
    /// `(a,b)` and `(b,a)` name the same generator.
    pub fn new(a: usize, b: usize) -> Self {
        GeneratorIndex { a: a.min(b), b: a.max(b) }
    }

    pub fn count(g: usize) -> usize {
        g * (g + 1) / 2
    }

    pub fn linear(&self, g: usize) -> usize {
        debug_assert!(self.a <= self.b && self.b < g);
        self.a * g - self.a * self.a.saturating_sub(1) / 2 + (self.b - self.a)
    }

    pub fn from_linear(g: usize, k: usize) -> Self {
        let mut rest = k;
        for a in 0..g {
            let row = g - a;
            if rest < row {
                return GeneratorIndex { a, b: a + rest };
            }
            rest -= row;
        }
        panic!("generator index {k} out of range for genus {g}");
    }

    pub fn all(g: usize) -> impl Iterator<Item = GeneratorIndex> {
        (0..g).flat_map(move |a| (a..g).map(move |b| GeneratorIndex { a, b }))
    }
}

fn generator_count(g: usize) -> usize {
    GeneratorIndex::count(g)
}

/// Sign of `e_A ∧ e_B` relative to the canonical order of `A ∪ B`;
/// `None` when the sets overlap.
fn merge_sign(a: u64, b: u64) -> Option<f64> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        inversions += a.checked_shr(y + 1).unwrap_or(0).count_ones();
        rest &= rest - 1;
    }
    Some(if inversions.is_multiple_of(2) { 1.0 } else { -1.0 })
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// An element of the exterior algebra of the complexified cotangent space.
#[derive(Clone, PartialEq)]
pub struct ExtForm {
    g: usize,
    max_degree: usize,
    terms: BTreeMap<u64, C64>,
}

impl fmt::Debug for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = generator_count(self.g);
        let mut list = f.debug_list();
        for (&key, z) in &self.terms {
            let hol: Vec<usize> = bits(key & self.hol_mask()).collect();
            let anti: Vec<usize> = bits(key >> n).collect();
            list.entry(&(hol, anti, z));
        }
        list.finish()
    }
}

impl ExtForm {
    pub fn zero(g: usize) -> Self {
        assert!((1..=MAX_GENUS).contains(&g), "genus {g} outside 1..={MAX_GENUS}");
        ExtForm { g, max_degree: 2 * generator_count(g), terms: BTreeMap::new() }
    }

    pub fn scalar(g: usize, z: C64) -> Self {
        let mut f = Self::zero(g);
        f.insert(0, z);
        f
    }

    pub fn one(g: usize) -> Self {
        Self::scalar(g, c(1.0, 0.0))
    }

    /// `dτ_k`.
    pub fn hol(g: usize, idx: GeneratorIndex) -> Self {
        let mut f = Self::zero(g);
        f.insert(1u64 << idx.linear(g), c(1.0, 0.0));
        f
    }

    /// `dτ̄_k`.
    pub fn anti(g: usize, idx: GeneratorIndex) -> Self {
        let n = generator_count(g);
        let mut f = Self::zero(g);
        f.insert(1u64 << (n + idx.linear(g)), c(1.0, 0.0));
        f
    }

    /// `z · dτ_S ∧ dτ̄_T` for generator lists given in ascending linear order.
    pub fn monomial(g: usize, hol: &[usize], anti: &[usize], z: C64) -> Self {
        let n = generator_count(g);
        let mut key = 0u64;
        let mut prev = None;
        for &k in hol.iter().chain(anti.iter().map(|k| k + n).collect::<Vec<_>>().iter()) {
            assert!(prev.is_none_or(|p| p < k), "generators must be ascending and distinct");
            prev = Some(k);
            key |= 1u64 << k;
        }
        let mut f = Self::zero(g);
        f.insert(key, z);
        f
    }

    /// The (1,1)-form `(i/2) Σ_kl H_kl dτ_k ∧ dτ̄_l` attached to a Hermitian
    /// matrix written in the generator basis.
    pub fn from_hermitian(g: usize, h: &CMat) -> Self {
        let n = generator_count(g);
        assert_eq!(h.shape(), (n, n));
        let mut f = Self::zero(g);
        for k in 0..n {
            for l in 0..n {
                f.insert((1u64 << k) | (1u64 << (n + l)), c(0.0, 0.5) * h[(k, l)]);
            }
        }
        f
    }

    /// Sum of `(bitmask, coefficient)` terms in the internal layout (see [`ExtForm::raw_terms`]).
    pub fn from_raw_terms<I: IntoIterator<Item = (u64, C64)>>(g: usize, terms: I) -> Self {
        let mut f = Self::zero(g);
        let limit = 2 * generator_count(g);
        for (key, z) in terms {
            assert!(limit == 64 || key >> limit == 0, "bitmask {key:#x} outside genus {g}");
            f.insert(key, z);
        }
        f
    }

    /// Drops every component of total degree above `d` (and keeps doing so in products).
    pub fn with_max_degree(mut self, d: usize) -> Self {
        self.max_degree = d.min(2 * generator_count(self.g));
        self.terms.retain(|k, _| k.count_ones() as usize <= d);
        self
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn generator_count(&self) -> usize {
        generator_count(self.g)
    }

    fn hol_mask(&self) -> u64 {
        (1u64 << generator_count(self.g)) - 1
    }

    fn insert(&mut self, key: u64, z: C64) {
        if key.count_ones() as usize > self.max_degree {
            return;
        }
        let entry = self.terms.entry(key).or_insert(C64::zero());
        *entry += z;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(holomorphic generators, antiholomorphic generators, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, C64)> + '_ {
        let n = generator_count(self.g);
        let hm = self.hol_mask();
        self.terms.iter().map(move |(&k, &z)| (bits(k & hm).collect(), bits(k >> n).collect(), z))
    }

    /// Raw `(bitmask, coefficient)` pairs in canonical order.
    pub fn raw_terms(&self) -> impl Iterator<Item = (u64, C64)> + '_ {
        self.terms.iter().map(|(&k, &z)| (k, z))
    }

    pub fn coefficient_of(&self, key: u64) -> C64 {
        self.terms.get(&key).copied().unwrap_or_else(C64::zero)
    }

    pub fn scalar_part(&self) -> C64 {
        self.coefficient_of(0)
    }

    fn bidegree_of(&self, key: u64) -> (usize, usize) {
        let n = generator_count(self.g);
        ((key & self.hol_mask()).count_ones() as usize, (key >> n).count_ones() as usize)
    }

    /// The `(p,q)` component.
    pub fn component(&self, p: usize, q: usize) -> ExtForm {
        self.filtered(|k| self.bidegree_of(k) == (p, q))
    }

    /// The component of total degree `d`.
    pub fn degree_component(&self, d: usize) -> ExtForm {
        self.filtered(|k| k.count_ones() as usize == d)
    }

    fn filtered<F: Fn(u64) -> bool>(&self, keep: F) -> ExtForm {
        ExtForm {
            g: self.g,
            max_degree: self.max_degree,
            terms: self.terms.iter().filter(|(&k, _)| keep(k)).map(|(&k, &z)| (k, z)).collect(),
        }
    }

    /// `Some((p,q))` if every term has bidegree `(p,q)`; the zero form reports `None`.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(|&k| self.bidegree_of(k));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn has_odd_component(&self) -> bool {
        self.terms.keys().any(|k| k.count_ones() % 2 == 1)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficientwise difference, max over the union of supports.
    pub fn max_abs_diff(&self, other: &ExtForm) -> f64 {
        (self - other).max_abs_coeff()
    }

    pub fn scale(&self, s: C64) -> ExtForm {
        let mut out = ExtForm::zero(self.g).with_max_degree(self.max_degree);
        for (&k, &z) in &self.terms {
            out.insert(k, z * s);
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> ExtForm {
        self.scale(c(s, 0.0))
    }

    /// Removes coefficients with modulus below `tol`.
    pub fn pruned(&self, tol: f64) -> ExtForm {
        self.filtered(|k| self.terms[&k].norm() >= tol)
    }

    fn check_genus(&self, other: &ExtForm) -> Result<()> {
        if self.g != other.g {
            return Err(Error::GenusMismatch { left: self.g, right: other.g });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &ExtForm) -> Result<ExtForm> {
        self.check_genus(other)?;
        Ok(self + other)
    }

    /// Exterior product.
    pub fn wedge(&self, other: &ExtForm) -> Result<ExtForm> {
        self.check_genus(other)?;
        Ok(self.wedge_same(other))
    }

    pub(crate) fn wedge_same(&self, other: &ExtForm) -> ExtForm {
        debug_assert_eq!(self.g, other.g);
        let cap = self.max_degree.min(other.max_degree);
        let mut out = ExtForm::zero(self.g).with_max_degree(cap);
        for (&ka, &za) in &self.terms {
            let da = ka.count_ones() as usize;
            for (&kb, &zb) in &other.terms {
                if da + kb.count_ones() as usize > cap {
                    continue;
                }
                if let Some(sign) = merge_sign(ka, kb) {
                    out.insert(ka | kb, za * zb * sign);
                }
            }
        }
        out
    }

    /// `self ∧ self ∧ … ` (`k` factors); `pow(0)` is 1.
    pub fn pow(&self, k: usize) -> ExtForm {
        let mut out = ExtForm::one(self.g).with_max_degree(self.max_degree);
        for _ in 0..k {
            out = out.wedge_same(self);
        }
        out
    }

    /// Inverse of an even form with unit scalar part: `1 − u + u∧u − …` with
    /// `u = a − 1`; the series terminates because `u` is nilpotent.
    pub fn inverse_even(&self) -> Result<ExtForm> {
        let s = self.scalar_part();
        if s != c(1.0, 0.0) {
            return Err(Error::NotUnitScalar(format!("{s}")));
        }
        if self.has_odd_component() {
            return Err(Error::OddComponent);
        }
        let one = ExtForm::one(self.g).with_max_degree(self.max_degree);
        let u = self - &one;
        let neg_u = -&u;
        let mut out = one.clone();
        let mut power = one;
        loop {
            power = power.wedge_same(&neg_u);
            if power.is_zero() {
                break;
            }
            out = &out + &power;
        }
        Ok(out)
    }

    /// Complex conjugation: swaps holomorphic and antiholomorphic generators.
    pub fn conjugate(&self) -> ExtForm {
        let n = generator_count(self.g);
        let hm = self.hol_mask();
        let mut out = ExtForm::zero(self.g).with_max_degree(self.max_degree);
        for (&k, &z) in &self.terms {
            let hol = k & hm;
            let anti = k >> n;
            // conj(dτ_S ∧ dτ̄_T) = dτ̄_S ∧ dτ_T = (−1)^{|S||T|} dτ_T ∧ dτ̄_S
            let sign = if (hol.count_ones() * anti.count_ones()).is_multiple_of(2) { 1.0 } else { -1.0 };
            out.insert(anti | (hol << n), z.conj() * sign);
        }
        out
    }

    /// Evaluates the form on holomorphic tangent vectors `hol` and conjugated
    /// tangent vectors `anti`. The generator `dτ_ab` pairs with `M` to `M_ab`;
    /// `dτ̄_ab` pairs with `N` to `conj(N_ab)`. Components whose bidegree does
    /// not match `(hol.len(), anti.len())` contribute zero.
    pub fn contract(&self, hol: &[SymMap], anti: &[SymMap]) -> C64 {
        let g = self.g;
        let n = generator_count(g);
        let (p, q) = (hol.len(), anti.len());
        let hol_pair = pairing_matrix(g, hol, false);
        let anti_pair = pairing_matrix(g, anti, true);
        let mut hol_minors: HashMap<u64, C64> = HashMap::new();
        let mut anti_minors: HashMap<u64, C64> = HashMap::new();
        let mut total = C64::zero();
        for (&key, &z) in &self.terms {
            if self.bidegree_of(key) != (p, q) {
                continue;
            }
            let hm = key & self.hol_mask();
            let am = key >> n;
            let dh = *hol_minors.entry(hm).or_insert_with(|| subset_det(&hol_pair, hm));
            if dh.is_zero() {
                continue;
            }
            let da = *anti_minors.entry(am).or_insert_with(|| subset_det(&anti_pair, am));
            total += z * dh * da;
        }
        total
    }

    /// Value of a `(k,k)`-form on a complex `k`-plane `y ⊂ S_g`, as a multiple
    /// of the plane's volume form `∏ (i/2) dz_j ∧ dz̄_j` (coordinates orthonormal
    /// for the Frobenius metric). The sign does not depend on the basis of `y`.
    pub fn restrict_to_plane(&self, y: &LinSubspace) -> Result<C64> {
        let k = y.dim();
        if y.ambient_dim() != generator_count(self.g) {
            return Err(Error::DimensionMismatch(format!(
                "plane lives in C^{}, forms of genus {} need C^{}",
                y.ambient_dim(),
                self.g,
                generator_count(self.g)
            )));
        }
        if let Some((p, q)) = self.bidegree() {
            if p != k || q != k {
                return Err(Error::DimensionMismatch(format!(
                    "({p},{q})-form restricted to a {k}-plane"
                )));
            }
        }
        let maps = y.sym_maps(self.g);
        let raw = self.contract(&maps, &maps);
        Ok(raw / volume_contraction(k))
    }
}

/// Contraction of `∏_j (i/2) dz_j ∧ dz̄_j` against an orthonormal frame, in the
/// canonical (holomorphic-first) order: `(i/2)^k (−1)^{k(k−1)/2}`.
pub fn volume_contraction(k: usize) -> C64 {
    let sign = if (k * k.saturating_sub(1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    c(0.0, 0.5).powu(k as u32) * sign
}

/// `n × p` matrix of generator values on the given tangent vectors.
fn pairing_matrix(g: usize, vectors: &[SymMap], conjugate: bool) -> CMat {
    let n = generator_count(g);
    CMat::from_fn(n, vectors.len(), |k, j| {
        let idx = GeneratorIndex::from_linear(g, k);
        let z = vectors[j].get(idx.a, idx.b);
        if conjugate {
            z.conj()
        } else {
            z
        }
    })
}

fn subset_det(pairing: &CMat, mask: u64) -> C64 {
    let rows: Vec<usize> = bits(mask).collect();
    if rows.is_empty() {
        return c(1.0, 0.0);
    }
    let sub = CMat::from_fn(rows.len(), pairing.ncols(), |i, j| pairing[(rows[i], j)]);
    sub.determinant()
}

impl Add for &ExtForm {
    type Output = ExtForm;
    fn add(self, rhs: &ExtForm) -> ExtForm {
        assert_eq!(self.g, rhs.g, "genus mismatch");
        let mut out = self.clone().with_max_degree(self.max_degree.min(rhs.max_degree));
        for (&k, &z) in &rhs.terms {
            out.insert(k, z);
        }
        out
    }
}

impl Sub for &ExtForm {
    type Output = ExtForm;
    fn sub(self, rhs: &ExtForm) -> ExtForm {
        self + &(-rhs)
    }
}

impl Neg for &ExtForm {
    type Output = ExtForm;
    fn neg(self) -> ExtForm {
        self.scale(c(-1.0, 0.0))
    }
}

/// A square matrix of forms (curvature matrices, matrices of 1-forms).
#[derive(Debug, Clone, PartialEq)]
pub struct FormMatrix {
    g: usize,
    size: usize,
    entries: Vec<ExtForm>,
}

impl FormMatrix {
    pub fn zeros(g: usize, size: usize) -> Self {
        FormMatrix { g, size, entries: vec![ExtForm::zero(g); size * size] }
    }

    pub fn identity(g: usize, size: usize) -> Self {
        let mut m = Self::zeros(g, size);
        for i in 0..size {
            m.entries[i * size + i] = ExtForm::one(g);
        }
        m
    }

    /// `∂τ`: the generator `dτ_ab` at both `(a,b)` and `(b,a)`.
    pub fn hol_differential(g: usize) -> Self {
        Self::from_fn(g, g, |a, b| ExtForm::hol(g, GeneratorIndex::new(a, b)))
    }

    /// `∂τ̄`.
    pub fn anti_differential(g: usize) -> Self {
        Self::from_fn(g, g, |a, b| ExtForm::anti(g, GeneratorIndex::new(a, b)))
    }

    pub fn from_fn<F: FnMut(usize, usize) -> ExtForm>(g: usize, size: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                let e = f(a, b);
                assert_eq!(e.genus(), g, "entry genus mismatch");
                entries.push(e);
            }
        }
        FormMatrix { g, size, entries }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, a: usize, b: usize) -> &ExtForm {
        &self.entries[a * self.size + b]
    }

    pub fn entries(&self) -> &[ExtForm] {
        &self.entries
    }

    pub fn with_max_degree(&self, d: usize) -> Self {
        FormMatrix {
            g: self.g,
            size: self.size,
            entries: self.entries.iter().map(|e| e.clone().with_max_degree(d)).collect(),
        }
    }

    /// Matrix product; entries multiply by wedge, left factor first.
    pub fn mul(&self, rhs: &FormMatrix) -> Result<FormMatrix> {
        if self.g != rhs.g {
            return Err(Error::GenusMismatch { left: self.g, right: rhs.g });
        }
        if self.size != rhs.size {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.size, rhs.size)));
        }
        let s = self.size;
        Ok(Self::from_fn(self.g, s, |a, b| {
            let mut acc = ExtForm::zero(self.g);
            for k in 0..s {
                acc = &acc + &self.get(a, k).wedge_same(rhs.get(k, b));
            }
            acc
        }))
    }

    /// `S · self` for a scalar matrix `S`.
    pub fn scalar_mul_left(&self, s: &CMat) -> FormMatrix {
        assert_eq!(s.shape(), (self.size, self.size));
        Self::from_fn(self.g, self.size, |a, b| {
            let mut acc = ExtForm::zero(self.g);
            for k in 0..self.size {
                if !s[(a, k)].is_zero() {
                    acc = &acc + &self.get(k, b).scale(s[(a, k)]);
                }
            }
            acc
        })
    }

    /// `self · S` for a scalar matrix `S`.
    pub fn scalar_mul_right(&self, s: &CMat) -> FormMatrix {
        assert_eq!(s.shape(), (self.size, self.size));
        Self::from_fn(self.g, self.size, |a, b| {
            let mut acc = ExtForm::zero(self.g);
            for k in 0..self.size {
                if !s[(k, b)].is_zero() {
                    acc = &acc + &self.get(a, k).scale(s[(k, b)]);
                }
            }
            acc
        })
    }

    pub fn scale(&self, z: C64) -> FormMatrix {
        Self::from_fn(self.g, self.size, |a, b| self.get(a, b).scale(z))
    }

    pub fn add(&self, rhs: &FormMatrix) -> FormMatrix {
        Self::from_fn(self.g, self.size, |a, b| self.get(a, b) + rhs.get(a, b))
    }

    pub fn sub(&self, rhs: &FormMatrix) -> FormMatrix {
        Self::from_fn(self.g, self.size, |a, b| self.get(a, b) - rhs.get(a, b))
    }

    pub fn transpose(&self) -> FormMatrix {
        Self::from_fn(self.g, self.size, |a, b| self.get(b, a).clone())
    }

    pub fn conjugate(&self) -> FormMatrix {
        Self::from_fn(self.g, self.size, |a, b| self.get(a, b).conjugate())
    }

    pub fn trace(&self) -> ExtForm {
        (0..self.size).fold(ExtForm::zero(self.g), |acc, i| &acc + self.get(i, i))
    }

    /// `v̄ᵀ · self · v` as a single form.
    pub fn sesquilinear(&self, v: &crate::linalg::CVec) -> ExtForm {
        let mut acc = ExtForm::zero(self.g).with_max_degree(self.entries[0].max_degree());
        for a in 0..self.size {
            for b in 0..self.size {
                let w = v[a].conj() * v[b];
                if !w.is_zero() {
                    acc = &acc + &self.get(a, b).scale(w);
                }
            }
        }
        acc
    }

    /// `self^m` by repeated wedge-multiplication.
    pub fn pow(&self, m: usize) -> FormMatrix {
        let cap = self.entries.first().map(|e| e.max_degree()).unwrap_or(0);
        let mut out = FormMatrix::identity(self.g, self.size).with_max_degree(cap);
        for _ in 0..m {
            out = out.mul(self).expect("same shape");
        }
        out
    }

    /// Row-ordered Laplace expansion: each product is `A_{0,σ0} ∧ A_{1,σ1} ∧ …`.
    pub fn determinant(&self) -> ExtForm {
        let mut memo: HashMap<u64, ExtForm> = HashMap::new();
        self.det_rows(0, (1u64 << self.size) - 1, &mut memo)
    }

    fn det_rows(&self, row: usize, cols: u64, memo: &mut HashMap<u64, ExtForm>) -> ExtForm {
        if row == self.size {
            let cap = self.entries.first().map(|e| e.max_degree()).unwrap_or(0);
            return ExtForm::one(self.g).with_max_degree(cap);
        }
        if let Some(f) = memo.get(&cols) {
            return f.clone();
        }
        let mut acc = ExtForm::zero(self.g);
        for (pos, col) in bits(cols).enumerate() {
            let entry = self.get(row, col);
            if entry.is_zero() {
                continue;
            }
            let minor = self.det_rows(row + 1, cols & !(1u64 << col), memo);
            let term = entry.wedge_same(&minor);
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        memo.insert(cols, acc.clone());
        acc
    }

    pub fn max_abs_diff(&self, other: &FormMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.entries.iter().map(ExtForm::max_abs_coeff).fold(0.0, f64::max)
    }
}
