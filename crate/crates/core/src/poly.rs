//! Univariate complex polynomials and a simultaneous root finder.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Relative threshold below which trailing coefficients are dropped.
pub const TRIM_TOL: f64 = 1e-14;

const MAX_ITER: usize = 500;
const STEP_TOL: f64 = 1e-13;

/// Polynomial `Σ_k coeffs[k] z^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnivariatePoly {
    coeffs: Vec<Complex64>,
}

impl UnivariatePoly {
    /// Builds a polynomial, trimming trailing coefficients whose modulus is
    /// below `1e-14 · max|coeff|`. An empty input becomes the zero polynomial.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = TRIM_TOL * scale;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        UnivariatePoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `leading · Π (z - r)`.
    pub fn from_roots(roots: &[Complex64], leading: Complex64) -> Self {
        let mut c = vec![leading];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        UnivariatePoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `Σ_k |a_k| |z|^k`, the scale of rounding errors in `eval(z)`.
    pub fn eval_abs(&self, z: Complex64) -> f64 {
        let m = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * m + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return UnivariatePoly::new(vec![Complex64::new(0.0, 0.0)]);
        }
        UnivariatePoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }
}

/// Roots of a polynomial with their residuals `|p(root)|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl RootSet {
    pub fn min_modulus(&self) -> Option<(usize, f64)> {
        self.roots
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Horner evaluation of `p` and `p'` for a coefficient slice.
#[inline]
fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = c[c.len() - 1];
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c[..c.len() - 1].iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All roots of `p` by Aberth-Ehrlich iteration.
///
/// Exact zero roots are split off first. The remaining roots start on a
/// circle of radius given by the Cauchy bound and are iterated in place
/// until every step is below `1e-13 · max(1, |z|)` or the root passes a
/// backward-error test (needed for multiple roots, where steps stall).
pub fn poly_roots(p: &UnivariatePoly) -> Result<RootSet> {
    let deg = p.degree();
    if deg == 0 {
        return invalid("poly_roots needs degree >= 1");
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut c: Vec<Complex64> = p.coeffs().to_vec();
    let mut roots = Vec::with_capacity(deg);
    while c[0] == zero && c.len() > 1 {
        roots.push(zero);
        c.remove(0);
    }
    let mut iterations = 0;
    let m = c.len() - 1;
    if m == 1 {
        roots.push(-c[0] / c[1]);
    } else if m > 1 {
        let lead = c[m];
        let monic: Vec<Complex64> = c.iter().map(|&a| a / lead).collect();
        let abs_coeffs: Vec<f64> = monic.iter().map(|a| a.norm()).collect();
        let bound = 1.0 + abs_coeffs[..m].iter().copied().fold(0.0, f64::max);
        let radius = bound;
        let mut z: Vec<Complex64> = (0..m)
            .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4))
            .collect();
        let mut done = vec![false; m];
        let mut max_step = f64::INFINITY;
        while iterations < MAX_ITER && done.iter().any(|d| !d) {
            iterations += 1;
            max_step = 0.0f64;
            for i in 0..m {
                if done[i] {
                    continue;
                }
                let (pv, dpv) = eval_with_derivative(&monic, z[i]);
                let scale = abs_coeffs.iter().rev().fold(0.0, |acc, a| acc * z[i].norm() + a);
                if pv.norm() <= 16.0 * f64::EPSILON * scale {
                    done[i] = true;
                    continue;
                }
                let ratio = pv / dpv;
                let mut s = zero;
                for j in 0..m {
                    if j != i {
                        s += 1.0 / (z[i] - z[j]);
                    }
                }
                let w = ratio / (1.0 - ratio * s);
                if !w.re.is_finite() || !w.im.is_finite() {
                    // Collision or vanishing derivative; nudge deterministically.
                    let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                    z[i] += bump;
                    max_step = f64::INFINITY;
                    continue;
                }
                z[i] -= w;
                let step = w.norm();
                max_step = max_step.max(step);
                if step < STEP_TOL * z[i].norm().max(1.0) {
                    done[i] = true;
                }
            }
        }
        if done.iter().any(|d| !d) {
            return Err(Error::NonConvergence { iterations, max_step });
        }
        refine_clusters(&monic, &mut z);
        roots.extend(z);
    }
    roots.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
    let residuals = roots.iter().map(|&r| p.eval(r).norm()).collect();
    Ok(RootSet {
        roots,
        residuals,
        converged: true,
        iterations,
    })
}

/// Polishes tight clusters (numerically multiple roots). A cluster of `k`
/// approximations to a `k`-fold root scatters by `O(ε^{1/k})`; the root is a
/// simple zero of `p^{(k-1)}`, so Newton on that derivative started from the
/// cluster mean recovers it to near machine precision. The polished value
/// is kept only when it passes the backward-error test of `p` itself.
fn refine_clusters(c: &[Complex64], z: &mut [Complex64]) {
    let m = z.len();
    let mut assigned = vec![false; m];
    for i in 0..m {
        if assigned[i] {
            continue;
        }
        // Multiple roots come out of the iteration spread by about ε^{1/k};
        // try wide windows first and accept a merge only when it passes the
        // derivative test below.
        for factor in [1e-2, 1e-3, 1e-4] {
            let tol = factor * z[i].norm().max(1.0);
            let members: Vec<usize> = (i..m).filter(|&j| !assigned[j] && (z[j] - z[i]).norm() < tol).collect();
            let k = members.len();
            if k < 2 {
                break;
            }
            let mean = members.iter().map(|&j| z[j]).sum::<Complex64>() / k as f64;
            if let Some(w) = polish_multiple(c, k, mean, tol) {
                for &j in &members {
                    z[j] = w;
                    assigned[j] = true;
                }
                break;
            }
        }
    }
}

/// Newton on `p^{(k-1)}` from `start`; the result is kept when it stays
/// within `tol` of the start and `p, p', …, p^{(k-1)}` all vanish there to
/// backward-error accuracy.
fn polish_multiple(c: &[Complex64], k: usize, start: Complex64, tol: f64) -> Option<Complex64> {
    let mut derivs = vec![c.to_vec()];
    for _ in 1..k {
        let last = derivs.last().expect("nonempty");
        derivs.push(last.iter().enumerate().skip(1).map(|(j, &a)| a * j as f64).collect());
    }
    let d = &derivs[k - 1];
    let mut w = start;
    for _ in 0..50 {
        let (q, dq) = eval_with_derivative(d, w);
        if dq.norm() == 0.0 {
            break;
        }
        let step = q / dq;
        w -= step;
        if step.norm() <= 1e-15 * w.norm().max(1.0) {
            break;
        }
    }
    if !((w - start).norm() < tol) {
        return None;
    }
    let r = w.norm();
    for dj in &derivs {
        let val = eval_with_derivative(dj, w).0.norm();
        let scale = dj.iter().rev().fold(0.0, |acc, a| acc * r + a.norm());
        if val > 64.0 * f64::EPSILON * scale {
            return None;
        }
    }
    Some(w)
}
