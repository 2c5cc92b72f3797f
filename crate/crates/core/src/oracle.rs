//! Finite-difference curvature, independent of the closed-form curvature in
//! [`crate::hodge`]: it only evaluates the metric matrix at perturbed points
//! and differentiates `∂̄(h⁻¹ ∂h)` numerically.
//!
//! Coordinates are the `n = g(g+1)/2` entries `τ_ab`, `a ≤ b`; moving an
//! off-diagonal coordinate moves both `(a,b)` and `(b,a)`. Wirtinger
//! derivatives are `∂ = ½(∂_x − i∂_y)` and `∂̄ = ½(∂_x + i∂_y)`, each
//! approximated by central differences.
//!
//! The point, the step and every metric value are exact rationals, so the
//! nested difference quotients carry truncation error only; in floating
//! point the second differences would lose about `ε/step²` to rounding.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num::{BigRational, ToPrimitive};

use crate::extform::{ExtForm, FormMatrix, GeneratorIndex};
use crate::hodge::Bundle;
use crate::linalg::{c, CMat, SiegelPoint, C64};
use crate::rational::{q, QMatrix};

/// Metric matrix of the bundle at `τ` (only `Im τ` enters).
pub fn metric_at(bundle: Bundle, tau: &CMat) -> CMat {
    let y = tau.map(|z| c(z.im, 0.0));
    match bundle {
        Bundle::Hodge => y,
        Bundle::HodgeDual => y.try_inverse().expect("Im τ invertible near a Siegel point"),
    }
}

/// Complex matrix `re + i·im` over the rationals.
#[derive(Debug, Clone)]
struct QComplex {
    re: QMatrix,
    im: QMatrix,
}

impl QComplex {
    fn real(re: QMatrix) -> Self {
        let im = QMatrix::zeros(re.nrows(), re.ncols());
        QComplex { re, im }
    }

    fn sub(&self, o: &QComplex) -> QComplex {
        QComplex { re: self.re.sub(&o.re).expect("shape"), im: self.im.sub(&o.im).expect("shape") }
    }

    fn scale(&self, s: &BigRational) -> QComplex {
        QComplex { re: self.re.scale(s), im: self.im.scale(s) }
    }

    fn mul(&self, o: &QComplex) -> QComplex {
        let rr = self.re.mul(&o.re).expect("shape");
        let ii = self.im.mul(&o.im).expect("shape");
        let ri = self.re.mul(&o.im).expect("shape");
        let ir = self.im.mul(&o.re).expect("shape");
        QComplex { re: rr.sub(&ii).expect("shape"), im: ri.add(&ir).expect("shape") }
    }

    /// Inverse through the real form `[[A, −B], [B, A]]`.
    fn inverse(&self) -> Option<QComplex> {
        if self.im.is_zero() {
            return self.re.inverse().map(QComplex::real);
        }
        let n = self.re.nrows();
        let real = QMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => self.re[(i, j)].clone(),
            (true, false) => -self.im[(i, j - n)].clone(),
            (false, true) => self.im[(i - n, j)].clone(),
            (false, false) => self.re[(i - n, j - n)].clone(),
        });
        let inv = real.inverse()?;
        Some(QComplex {
            re: QMatrix::from_fn(n, n, |i, j| inv[(i, j)].clone()),
            im: QMatrix::from_fn(n, n, |i, j| inv[(n + i, j)].clone()),
        })
    }

    fn entry(&self, a: usize, b: usize) -> C64 {
        c(self.re[(a, b)].to_f64().unwrap_or(f64::NAN), self.im[(a, b)].to_f64().unwrap_or(f64::NAN))
    }
}

/// `τ = X + iY` with exact entries.
#[derive(Debug, Clone)]
struct QPoint {
    x: QMatrix,
    y: QMatrix,
}

impl QPoint {
    fn shifted(&self, idx: GeneratorIndex, dx: &BigRational, dy: &BigRational) -> QPoint {
        let mut p = self.clone();
        p.x[(idx.a, idx.b)] += dx;
        p.y[(idx.a, idx.b)] += dy;
        if idx.a != idx.b {
            p.x[(idx.b, idx.a)] += dx;
            p.y[(idx.b, idx.a)] += dy;
        }
        p
    }
}

/// Metric and connection values memoized by `Im τ`, the only input the metric reads.
struct Evaluator {
    bundle: Bundle,
    g: usize,
    step: BigRational,
    metrics: RefCell<HashMap<QMatrix, QComplex>>,
    connections: RefCell<HashMap<QMatrix, Rc<Vec<QComplex>>>>,
}

impl Evaluator {
    fn metric(&self, p: &QPoint) -> QComplex {
        if let Some(h) = self.metrics.borrow().get(&p.y) {
            return h.clone();
        }
        let h = match self.bundle {
            Bundle::Hodge => QComplex::real(p.y.clone()),
            Bundle::HodgeDual => QComplex::real(p.y.inverse().expect("Im τ invertible near a Siegel point")),
        };
        self.metrics.borrow_mut().insert(p.y.clone(), h.clone());
        h
    }

    /// Central-difference Wirtinger derivative of the metric along coordinate `k`.
    fn d_metric(&self, p: &QPoint, k: usize) -> QComplex {
        let idx = GeneratorIndex::from_linear(self.g, k);
        let step = &self.step;
        let zero = q(0);
        let inv = (step * q(2)).recip();
        let f = |t: &QPoint| self.metric(t);
        let dx = f(&p.shifted(idx, step, &zero)).sub(&f(&p.shifted(idx, &-step.clone(), &zero))).scale(&inv);
        let dy = f(&p.shifted(idx, &zero, step)).sub(&f(&p.shifted(idx, &zero, &-step.clone()))).scale(&inv);
        // ½(dx − i·dy)
        let i_dy = QComplex { re: dy.im.scale(&q(-1)), im: dy.re };
        dx.sub(&i_dy).scale(&BigRational::new(1.into(), 2.into()))
    }

    /// `h⁻¹ ∂_k h` at `p` for every coordinate `k`.
    fn connection(&self, p: &QPoint) -> Rc<Vec<QComplex>> {
        if let Some(theta) = self.connections.borrow().get(&p.y) {
            return theta.clone();
        }
        let h_inv = self.metric(p).inverse().expect("metric invertible");
        let theta: Rc<Vec<QComplex>> =
            Rc::new((0..GeneratorIndex::count(self.g)).map(|k| h_inv.mul(&self.d_metric(p, k))).collect());
        self.connections.borrow_mut().insert(p.y.clone(), theta.clone());
        theta
    }
}

/// Numerical curvature `∂̄(h⁻¹∂h)`: the coefficient of `dτ_k ∧ dτ̄_l` in entry
/// `(a,b)` is `−∂̄_l (h⁻¹ ∂_k h)_ab`.
pub fn finite_difference_curvature(tau: &SiegelPoint, bundle: Bundle, step: f64) -> FormMatrix {
    let g = tau.genus();
    let n = GeneratorIndex::count(g);
    let p = QPoint { x: QMatrix::from_f64(&tau.real_part()), y: QMatrix::from_f64(tau.imag()) };
    let step = BigRational::from_float(step).expect("finite step");
    let ev = Evaluator {
        bundle,
        g,
        step: step.clone(),
        metrics: RefCell::new(HashMap::new()),
        connections: RefCell::new(HashMap::new()),
    };
    // coeffs[l][k] = ∂̄_l θ_k, computed for all k from the same four shifted points
    let zero = q(0);
    let inv = (&step * q(2)).recip();
    let half = BigRational::new(1.into(), 2.into());
    let coeffs: Vec<Vec<QComplex>> = (0..n)
        .map(|l| {
            let idx = GeneratorIndex::from_linear(g, l);
            let at = |dx: &BigRational, dy: &BigRational| ev.connection(&p.shifted(idx, dx, dy));
            let (xp, xm) = (at(&step, &zero), at(&-step.clone(), &zero));
            let (yp, ym) = (at(&zero, &step), at(&zero, &-step.clone()));
            (0..n)
                .map(|k| {
                    let dx = xp[k].sub(&xm[k]).scale(&inv);
                    let dy = yp[k].sub(&ym[k]).scale(&inv);
                    // ½(dx + i·dy)
                    QComplex { re: dx.re.sub(&dy.im).expect("shape"), im: dx.im.add(&dy.re).expect("shape") }
                        .scale(&half)
                })
                .collect()
        })
        .collect();
    FormMatrix::from_fn(g, g, |a, b| {
        let mut entry = ExtForm::zero(g);
        for k in 0..n {
            for (l, row) in coeffs.iter().enumerate() {
                entry = &entry + &ExtForm::monomial(g, &[k], &[l], -row[k].entry(a, b));
            }
        }
        entry
    })
}

/// Same quotients in plain floating point, kept to show the rounding floor.
pub fn finite_difference_curvature_f64(tau: &SiegelPoint, bundle: Bundle, step: f64) -> FormMatrix {
    let g = tau.genus();
    let n = GeneratorIndex::count(g);
    let shifted = |t: &CMat, k: usize, z: C64| {
        let idx = GeneratorIndex::from_linear(g, k);
        let mut out = t.clone();
        out[(idx.a, idx.b)] += z;
        if idx.a != idx.b {
            out[(idx.b, idx.a)] += z;
        }
        out
    };
    let wirt = |f: &dyn Fn(&CMat) -> CMat, t: &CMat, k: usize, hol: bool| {
        let dx = (f(&shifted(t, k, c(step, 0.0))) - f(&shifted(t, k, c(-step, 0.0)))).unscale(2.0 * step);
        let dy = (f(&shifted(t, k, c(0.0, step))) - f(&shifted(t, k, c(0.0, -step)))).unscale(2.0 * step);
        (dx + dy * c(0.0, if hol { -1.0 } else { 1.0 })).unscale(2.0)
    };
    let t0 = tau.tau().clone();
    let metric = |t: &CMat| metric_at(bundle, t);
    FormMatrix::from_fn(g, g, |a, b| {
        let mut entry = ExtForm::zero(g);
        for k in 0..n {
            let theta = |t: &CMat| metric(t).try_inverse().expect("metric invertible") * wirt(&metric, t, k, true);
            for l in 0..n {
                let d = wirt(&theta, &t0, l, false);
                entry = &entry + &ExtForm::monomial(g, &[k], &[l], -d[(a, b)]);
            }
        }
        entry
    })
}

/// `max |a − b| / max |b|` over all coefficients of all entries.
pub fn relative_error(approx: &FormMatrix, exact: &FormMatrix) -> f64 {
    approx.max_abs_diff(exact) / exact.max_abs_coeff()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::{dual_hodge_curvature, hodge_curvature};
    use crate::sampling::{random_siegel_point, stream_rng};

    #[test]
    fn matches_closed_form_at_identity() {
        let tau = SiegelPoint::identity_imaginary(2);
        let fd = finite_difference_curvature(&tau, Bundle::HodgeDual, 1e-5);
        let err = relative_error(&fd, &dual_hodge_curvature(&tau));
        assert!(err < 1e-6, "relative error {err:e}");
    }

    #[test]
    fn matches_closed_form_for_both_bundles() {
        let mut rng = stream_rng(31, 0);
        for g in 1..=3 {
            let tau = random_siegel_point(g, &mut rng);
            let e_star = relative_error(
                &finite_difference_curvature(&tau, Bundle::HodgeDual, 1e-5),
                &dual_hodge_curvature(&tau),
            );
            let e = relative_error(
                &finite_difference_curvature(&tau, Bundle::Hodge, 1e-5),
                &hodge_curvature(&tau),
            );
            assert!(e_star < 1e-6 && e < 1e-6, "g={g}: {e_star:e} {e:e}");
        }
    }

    #[test]
    fn floating_quotients_agree_up_to_rounding() {
        let mut rng = stream_rng(32, 0);
        let tau = random_siegel_point(2, &mut rng);
        let exact = finite_difference_curvature(&tau, Bundle::HodgeDual, 1e-5);
        let float = finite_difference_curvature_f64(&tau, Bundle::HodgeDual, 1e-5);
        assert!(relative_error(&float, &exact) < 1e-4);
    }
}
