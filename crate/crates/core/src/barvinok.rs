//! Taylor interpolation of `ln f` for zero-free polynomials, X-basis
//! amplitude estimation from low-weight amplitudes, and a classical
//! emulation of Grover-Rudolph state preparation built on it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::tensor::{bits_to_index, bits_to_string, index_to_bits, StateTensor};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Derivatives of `f` and of `g = ln f` at the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorLog {
    /// `f^{(0..=p)}(0)`.
    pub f_derivs: Vec<Complex64>,
    /// `g^{(1..=p)}(0)`.
    pub g_derivs: Vec<Complex64>,
    pub order: usize,
}

impl TaylorLog {
    pub fn new(f_derivs: Vec<Complex64>) -> Result<Self> {
        let g_derivs = log_derivs(&f_derivs)?;
        let order = g_derivs.len();
        Ok(TaylorLog {
            f_derivs,
            g_derivs,
            order,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeEstimate {
    pub value: Complex64,
    /// `n / ((p+1) r^p (r-1))`, or zero for exact fallbacks.
    pub relative_error_bound: f64,
    pub order: usize,
    pub radius: f64,
    /// Amplitudes of the input tensor that were read.
    pub reads: usize,
    /// The required order exceeded the degree and the value was computed exactly.
    pub exact_fallback: bool,
}

fn check_origin(f0: Complex64) -> Result<()> {
    if f0.norm() == 0.0 || !f0.is_finite() {
        return Err(Error::ZeroAtOrigin(format!("f(0) = {f0}")));
    }
    Ok(())
}

/// Solves `f^{(m)} = Σ_{j<m} C(m-1, j) f^{(j)} g^{(m-j)}` for `g^{(1..=p)}`.
pub fn log_derivs(f_derivs: &[Complex64]) -> Result<Vec<Complex64>> {
    let Some(&f0) = f_derivs.first() else {
        return invalid("log_derivs needs at least f(0)");
    };
    check_origin(f0)?;
    let p = f_derivs.len() - 1;
    // g[k] = g^{(k)}, g[0] unused.
    let mut g = vec![ZERO; p + 1];
    for m in 1..=p {
        let mut acc = f_derivs[m];
        let mut binom = 1.0;
        for j in 1..m {
            binom *= (m - j) as f64 / j as f64;
            acc -= f_derivs[j] * g[m - j] * binom;
        }
        g[m] = acc / f0;
    }
    g.remove(0);
    Ok(g)
}

/// Taylor coefficients `b_k = g^{(k)}/k!` of `ln f` from coefficients
/// `a_m = f^{(m)}/m!`, via `m a_m = Σ_{k=1}^{m} k b_k a_{m-k}`. Same
/// recursion as [`log_derivs`] without factorial growth.
fn log_coeffs(a: &[Complex64], p: usize) -> Vec<Complex64> {
    let mut b = vec![ZERO; p + 1];
    for m in 1..=p {
        let mut acc = a.get(m).copied().unwrap_or(ZERO) * m as f64;
        for k in 1..m {
            acc -= b[k] * a.get(m - k).copied().unwrap_or(ZERO) * k as f64;
        }
        b[m] = acc / (a[0] * m as f64);
    }
    b
}

/// Barvinok's bound `n / ((p+1) r^p (r-1))` on `|ln f(1) − T_p(1)|` for a
/// degree-`n` polynomial without zeros in `|z| < r`.
pub fn taylor_bound(n: usize, p: usize, r: f64) -> f64 {
    n as f64 / ((p as f64 + 1.0) * r.powi(p as i32) * (r - 1.0))
}

/// Smallest `p` with `taylor_bound(n, p, r) <= epsilon / 2`.
///
/// For `|w| <= ε/2 <= 1/2` one has `|e^w − 1| <= |w| e^{|w|} <= ε`, so the
/// exponentiated estimate has relative error at most `ε`.
pub fn required_order(n: usize, r: f64, epsilon: f64) -> Result<usize> {
    check_radius(r)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return invalid(format!("epsilon must lie in (0, 1], got {epsilon}"));
    }
    let mut p = 0;
    while taylor_bound(n, p, r) > 0.5 * epsilon {
        p += 1;
    }
    Ok(p)
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 1.0) || !r.is_finite() {
        return invalid(format!("interpolation needs a finite radius r > 1, got {r}"));
    }
    Ok(())
}

/// `exp(ln f(0) + Σ_{k=1}^{p} g^{(k)}(0)/k!)` with the principal branch
/// for `ln f(0)`.
pub fn interpolate_estimate(f_derivs: &[Complex64], p: usize, n: usize, r: f64) -> Result<AmplitudeEstimate> {
    check_radius(r)?;
    if f_derivs.len() < p + 1 {
        return Err(Error::DimensionMismatch {
            expected: p + 1,
            actual: f_derivs.len(),
        });
    }
    check_origin(f_derivs[0])?;
    let mut fact = 1.0;
    let a: Vec<Complex64> = f_derivs[..=p]
        .iter()
        .enumerate()
        .map(|(m, &d)| {
            if m > 0 {
                fact *= m as f64;
            }
            d / fact
        })
        .collect();
    Ok(estimate_from_coeffs(&a, p, n, r, p + 1))
}

fn estimate_from_coeffs(a: &[Complex64], p: usize, n: usize, r: f64, reads: usize) -> AmplitudeEstimate {
    let b = log_coeffs(a, p);
    let t = a[0].ln() + b[1..].iter().sum::<Complex64>();
    AmplitudeEstimate {
        value: t.exp(),
        relative_error_bound: taylor_bound(n, p, r),
        order: p,
        radius: r,
        reads,
        exact_fallback: false,
    }
}

/// Iterates over `x` in `0..2^n` with exactly `j` set bits, in increasing order.
fn weight_class(n: usize, j: usize) -> impl Iterator<Item = usize> {
    let limit = 1usize << n;
    let mut next = if j == 0 {
        Some(0)
    } else if j <= n {
        Some((1usize << j) - 1)
    } else {
        None
    };
    std::iter::from_fn(move || {
        let x = next?;
        next = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            let y = (((r ^ x) >> 2) / c) | r;
            (y < limit).then_some(y)
        };
        Some(x)
    })
}

/// First `p+1` coefficients of `F_y(z) = 2^{-n/2} Σ_x ψ_x (-1)^{x·y} z^{|x|}`
/// and the number of amplitudes read; only weights `<= p` are touched.
pub fn xbasis_coeffs(psi: &StateTensor, y: &[u8], p: usize) -> Result<(Vec<Complex64>, usize)> {
    let n = psi.n_indices();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: y.len(),
        });
    }
    if p > n {
        return invalid(format!("order {p} exceeds the degree {n}"));
    }
    let ymask = bits_to_index(y);
    let norm = 0.5f64.powf(n as f64 / 2.0);
    let mut reads = 0;
    let coeffs = (0..=p)
        .map(|j| {
            let mut c = ZERO;
            for x in weight_class(n, j) {
                reads += 1;
                let a = psi.get(x);
                if (x & ymask).count_ones().is_multiple_of(2) {
                    c += a;
                } else {
                    c -= a;
                }
            }
            c * norm
        })
        .collect();
    Ok((coeffs, reads))
}

/// Estimate of `<y|H^{⊗n}|ψ> = F_y(1)` with a fixed interpolation order.
pub fn estimate_fixed_order(psi: &StateTensor, y: &[u8], p: usize, r: f64) -> Result<AmplitudeEstimate> {
    check_radius(r)?;
    let n = psi.n_indices();
    let (a, reads) = xbasis_coeffs(psi, y, p)?;
    check_origin(a[0])?;
    Ok(estimate_from_coeffs(&a, p, n, r, reads))
}

/// `ε`-relative estimate of `<y|H^{⊗n}|ψ>` for `ψ ∈ LY(r)`, `r > 1`.
///
/// Uses the smallest order with bound `<= ε/2`. When that order exceeds the
/// degree `n`, the amplitude is computed exactly from all coefficients and
/// flagged as a fallback with a zero bound.
pub fn estimate_x_amplitude(psi: &StateTensor, y: &[u8], epsilon: f64, r: f64) -> Result<AmplitudeEstimate> {
    let n = psi.n_indices();
    let p = required_order(n, r, epsilon)?;
    if p <= n {
        return estimate_fixed_order(psi, y, p, r);
    }
    let (a, reads) = xbasis_coeffs(psi, y, n)?;
    Ok(AmplitudeEstimate {
        value: a.iter().sum(),
        relative_error_bound: 0.0,
        order: n,
        radius: r,
        reads,
        exact_fallback: true,
    })
}

/// One marginal or phase query of the preparation pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceEntry {
    /// `marginal` or `phase`.
    pub stage: String,
    /// Number of qubits fixed by the prefix.
    pub level: usize,
    pub prefix: String,
    /// Order demanded by the error target.
    pub p_required: usize,
    /// Order actually used, `min(p_required, degree)`.
    pub p_used: usize,
    pub reads: usize,
    pub exact_fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroverRudolphResult {
    pub state: StateTensor,
    /// `‖ψ' − ψ‖`.
    pub distance: f64,
    pub epsilon: f64,
    pub radius: f64,
    /// Bits used to quantize each phase.
    pub phase_bits: u32,
    pub log: Vec<ResourceEntry>,
}

/// Relative accuracy demanded of each marginal.
pub fn marginal_accuracy(n: usize, epsilon: f64) -> f64 {
    epsilon * epsilon / (8.0 * n as f64)
}

/// `⌈log₂(1/ε)⌉ + 4`: the quantization step `2π/2^b` stays below `ε/2`.
pub fn phase_bits(epsilon: f64) -> u32 {
    (1.0 / epsilon).log2().ceil().max(0.0) as u32 + 4
}

/// Rounds `θ` to the nearest multiple of `2π/2^bits`.
pub fn quantize_phase(theta: f64, bits: u32) -> f64 {
    let step = std::f64::consts::TAU / (1u64 << bits) as f64;
    (theta / step).round() * step
}

/// `‖ψ̂ ∘ e^{iΔ} − ψ̂‖` for amplitude moduli `√p_y` and phase errors `Δ_y`:
/// `(Σ_y p_y |1 − e^{iΔ_y}|²)^{1/2} = (Σ_y p_y (2 − 2 cos Δ_y))^{1/2}`.
pub fn phase_error_distance(probs: &[f64], deltas: &[f64]) -> f64 {
    probs
        .iter()
        .zip(deltas)
        .map(|(&p, &d)| p * (2.0 - 2.0 * d.cos()))
        .sum::<f64>()
        .sqrt()
}

/// Vectorized reduced density matrix of the first `k` qubits:
/// `ρ_k[a][b] = Σ_z ψ_{az} ψ*_{bz}` as a `2k`-index tensor.
fn reduced_density(psi: &StateTensor, k: usize) -> Result<StateTensor> {
    let n = psi.n_indices();
    let (dk, dz) = (1usize << k, 1usize << (n - k));
    let amps = psi.amplitudes();
    let mut rho = vec![ZERO; dk * dk];
    for a in 0..dk {
        for b in 0..dk {
            rho[a * dk + b] = (0..dz).map(|z| amps[a * dz + z] * amps[b * dz + z].conj()).sum();
        }
    }
    StateTensor::new(2 * k, rho)
}

/// Classical emulation of Grover-Rudolph preparation for `ψ ∈ LY(r)`.
///
/// Prepares the X-basis amplitudes `ψ̂_y = <y|H^{⊗n}|ψ>`: moduli from the
/// chain rule over marginals `p_k(y_{1..k}) = <y y|H^{⊗2k}|vec ρ_k>`, each
/// estimated to relative accuracy `ε²/(8n)`, then phases from
/// `ε/8`-relative estimates of `ψ̂_y`, quantized to [`phase_bits`] bits.
/// The output is `H^{⊗n}` applied to the assembled vector. The prefix tree
/// is walked depth first with the 0 branch first.
pub fn grover_rudolph_emulate(psi: &StateTensor, epsilon: f64, r: f64) -> Result<GroverRudolphResult> {
    check_radius(r)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    let n = psi.n_indices();
    if n == 0 {
        return invalid("state preparation needs at least one qubit");
    }
    let delta = marginal_accuracy(n, epsilon);
    let floor = epsilon * epsilon / n as f64 * 0.5f64.powi(n as i32);
    let bits = phase_bits(epsilon);
    let rhos: Vec<StateTensor> = (1..=n).map(|k| reduced_density(psi, k)).collect::<Result<_>>()?;
    let mut log = Vec::new();
    let mut probs = vec![0.0; 1 << n];

    // Stack of (level, prefix, probability of the prefix).
    let mut stack = vec![(0usize, 0usize, 1.0f64)];
    while let Some((level, prefix, mass)) = stack.pop() {
        if level == n {
            probs[prefix] = mass;
            continue;
        }
        let k = level + 1;
        let mut child = [0.0f64; 2];
        for (bit, slot) in child.iter_mut().enumerate() {
            let y = index_to_bits((prefix << 1) | bit, k);
            let yy: Vec<u8> = y.iter().chain(y.iter()).copied().collect();
            let est = estimate_x_amplitude(&rhos[k - 1], &yy, delta, r)?;
            log.push(ResourceEntry {
                stage: "marginal".into(),
                level: k,
                prefix: bits_to_string(&y),
                p_required: required_order(2 * k, r, delta)?,
                p_used: est.order,
                reads: est.reads,
                exact_fallback: est.exact_fallback,
            });
            let v = est.value.re;
            *slot = if v < floor {
                if v < -floor {
                    return Err(Error::NegativeMarginal {
                        level: k,
                        prefix: bits_to_string(&y),
                        value: v,
                    });
                }
                log::warn!("marginal {v:e} at prefix {} clamped to {floor:e}", bits_to_string(&y));
                floor
            } else {
                v
            };
        }
        let total = child[0] + child[1];
        // Push the 1 branch first so the 0 branch is visited first.
        for bit in [1usize, 0] {
            stack.push((k, (prefix << 1) | bit, mass * child[bit] / total));
        }
    }

    let mut hat = vec![ZERO; 1 << n];
    for y in 0..1usize << n {
        let bits_y = index_to_bits(y, n);
        let est = estimate_x_amplitude(psi, &bits_y, epsilon / 8.0, r)?;
        log.push(ResourceEntry {
            stage: "phase".into(),
            level: n,
            prefix: bits_to_string(&bits_y),
            p_required: required_order(n, r, epsilon / 8.0)?,
            p_used: est.order,
            reads: est.reads,
            exact_fallback: est.exact_fallback,
        });
        let theta = quantize_phase(est.value.arg(), bits);
        hat[y] = Complex64::from_polar(probs[y].sqrt(), theta);
    }
    let state = StateTensor::new(n, hat)?.hadamard_all();
    let distance = state.distance(psi)?;
    Ok(GroverRudolphResult {
        state,
        distance,
        epsilon,
        radius: r,
        phase_bits: bits,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn derivs_of(coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut fact = 1.0;
        coeffs
            .iter()
            .enumerate()
            .map(|(m, &a)| {
                if m > 0 {
                    fact *= m as f64;
                }
                a * fact
            })
            .collect()
    }

    fn pad(a: &[Complex64], len: usize) -> Vec<Complex64> {
        let mut v = a.to_vec();
        v.resize(len, c(0.0));
        v
    }

    #[test]
    fn log_derivs_examples() {
        let g = log_derivs(&[c(2.0), c(0.0), c(0.0)]).unwrap();
        assert!(g.iter().all(|v| v.norm() == 0.0));
        let g = log_derivs(&[c(1.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        assert_eq!(g, vec![c(1.0), c(-1.0), c(2.0)]);
        assert!(matches!(log_derivs(&[c(0.0), c(1.0)]), Err(Error::ZeroAtOrigin(_))));
    }

    #[test]
    fn log_derivs_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut a: Vec<Complex64> = (0..7).map(|_| c(rng.gen_range(-0.5..0.5))).collect();
        a[0] = c(1.0);
        let g = log_derivs(&derivs_of(&a)).unwrap();
        let p = crate::poly::UnivariatePoly::new(a);
        let lnf = |x: f64| p.eval(c(x)).ln();
        let h = 1e-3;
        let d1 = (lnf(h) - lnf(-h)) / (2.0 * h);
        let d2 = (lnf(h) - lnf(0.0) * 2.0 + lnf(-h)) / (h * h);
        assert!((d1 - g[0]).norm() < 1e-6);
        assert!((d2 - g[1]).norm() < 1e-5);
    }

    #[test]
    fn interpolation_examples() {
        // 1 + z/4 has its root at -4.
        let e = interpolate_estimate(&derivs_of(&pad(&[c(1.0), c(0.25)], 7)), 6, 1, 4.0).unwrap();
        let exact = 1.25;
        assert!(((e.value.re - exact) / exact).abs() <= e.relative_error_bound);
        assert_eq!(e.relative_error_bound, 1.0 / (7.0 * 4f64.powi(6) * 3.0));
        // 1 + z has a root at -1 and violates the bound for r = 4.
        let e = interpolate_estimate(&derivs_of(&pad(&[c(1.0), c(1.0)], 7)), 6, 1, 4.0).unwrap();
        assert!(((e.value.re - 2.0) / 2.0).abs() > e.relative_error_bound);
        let e = interpolate_estimate(&[c(3.5), c(0.0), c(0.0)], 2, 2, 2.0).unwrap();
        assert!((e.value - c(3.5)).norm() < 1e-15);
        assert!(interpolate_estimate(&[c(1.0)], 0, 1, 1.0).is_err());
    }

    #[test]
    fn gosper_enumerates_weight_classes() {
        for n in 0..8 {
            for j in 0..=n + 1 {
                let got: Vec<usize> = weight_class(n, j).collect();
                let want: Vec<usize> = (0..1usize << n).filter(|x| x.count_ones() as usize == j).collect();
                assert_eq!(got, want, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn xbasis_coeff_examples() {
        let z = StateTensor::basis(3, 0).unwrap();
        let (a, _) = xbasis_coeffs(&z, &[1, 1, 0], 3).unwrap();
        assert!((a[0] - c(0.5f64.powf(1.5))).norm() < 1e-15);
        assert!(a[1..].iter().all(|v| v.norm() == 0.0));
        let s = 0.4;
        let t = StateTensor::from_real(2, &[1.0, 0.0, 0.0, s]).unwrap();
        let (a, reads) = xbasis_coeffs(&t, &[1, 1], 2).unwrap();
        assert_eq!(a, vec![c(0.5), c(0.0), c(s / 2.0)]);
        assert_eq!(reads, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let amps: Vec<Complex64> = (0..32).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
        let psi = StateTensor::new(5, amps).unwrap();
        let y = [0, 1, 1, 0, 1];
        let (a, reads) = xbasis_coeffs(&psi, &y, 3).unwrap();
        assert_eq!(reads, 1 + 5 + 10 + 10);
        let q = crate::ly::equatorial_poly(&psi, &y).unwrap();
        for j in 0..4 {
            assert!((a[j] - q.coeffs()[j]).norm() < 1e-14);
        }
        assert!(xbasis_coeffs(&psi, &y, 6).is_err());
    }

    #[test]
    fn estimate_examples() {
        let z = StateTensor::basis(4, 0).unwrap();
        let e = estimate_x_amplitude(&z, &[1, 0, 1, 1], 1e-3, 2.0).unwrap();
        assert!((e.value - c(0.25)).norm() < 1e-15);
        // Order 40 is needed at r = 1.1 for n = 4, beyond the degree.
        let psi = StateTensor::from_real(2, &[1.0, 0.1, 0.1, 0.01]).unwrap();
        let e = estimate_x_amplitude(&psi, &[1, 0], 1e-6, 1.1).unwrap();
        assert!(e.exact_fallback && e.relative_error_bound == 0.0);
        assert!((e.value - c(0.5 * (1.0 + 0.1 - 0.1 - 0.01))).norm() < 1e-15);
    }

    #[test]
    fn required_order_is_minimal() {
        for &(n, r, eps) in &[(4, 2.0, 1e-3), (8, 1.5, 1e-2), (10, 3.0, 1e-6)] {
            let p = required_order(n, r, eps).unwrap();
            assert!(taylor_bound(n, p, r) <= eps / 2.0);
            assert!(p == 0 || taylor_bound(n, p - 1, r) > eps / 2.0);
        }
        assert!(required_order(3, 1.0, 0.1).is_err());
    }

    #[test]
    fn phase_quantization() {
        let b = phase_bits(0.01);
        assert_eq!(b, 11);
        for k in 0..100 {
            let t = -3.1 + 0.0621 * k as f64;
            assert!((quantize_phase(t, b) - t).abs() <= std::f64::consts::PI / (1u64 << b) as f64 + 1e-15);
        }
    }

    #[test]
    fn phase_stage_error_analysis() {
        // ‖ψ̂ e^{iΔ} − ψ̂‖² = Σ p_y (2 − 2cos Δ_y) <= max Δ².
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let raw: Vec<f64> = (0..16).map(|_| rng.gen::<f64>()).collect();
            let tot: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|v| v / tot).collect();
            let deltas: Vec<f64> = (0..16).map(|_| rng.gen_range(-0.05..0.05)).collect();
            let direct: f64 = probs
                .iter()
                .zip(&deltas)
                .map(|(&p, &d)| (Complex64::from_polar(p.sqrt(), d) - c(p.sqrt())).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let formula = phase_error_distance(&probs, &deltas);
            assert!((direct - formula).abs() < 1e-14);
            let max = deltas.iter().fold(0.0f64, |m, d| m.max(d.abs()));
            assert!(formula <= max + 1e-15);
        }
    }

    #[test]
    fn grover_rudolph_examples() {
        let z = StateTensor::basis(3, 0).unwrap();
        let out = grover_rudolph_emulate(&z, 0.01, 2.0).unwrap();
        assert!(out.distance < 1e-14);
        assert_eq!(out.log.len(), 2 * (2 + 4 + 8) / 2 + 8);
        let v = 1.0 / 1.25f64.sqrt();
        let f = [c(v), c(0.5 * v)];
        let prod = StateTensor::product(&[f, f, f]).unwrap();
        let out = grover_rudolph_emulate(&prod, 0.01, 2.0 * (1.0 - 1e-3)).unwrap();
        assert!(out.distance <= 0.01, "distance {}", out.distance);
        assert!(grover_rudolph_emulate(&StateTensor::from_real(1, &[1.0, 1.0]).unwrap(), 0.1, 2.0).is_err());
    }

    #[test]
    fn reduced_density_matches_partial_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let amps: Vec<Complex64> = (0..8).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
        let psi = StateTensor::new(3, amps).unwrap();
        let full = crate::tensor::OperatorTensor::outer(&psi, &psi).unwrap();
        for k in 1..=3 {
            let a = reduced_density(&psi, k).unwrap();
            let b = full.partial_trace_tail(k).unwrap().into_tensor();
            assert!(a.distance(&b).unwrap() < 1e-14);
        }
    }
}
