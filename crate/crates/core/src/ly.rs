//! Lee-Yang membership: exact criteria, equatorial root scans, a budgeted
//! falsifier and related constructions.
//!
//! A tensor `ψ` lies in `LY(r)` when its generating polynomial has no zero
//! in the open polydisk `{|z_a| < r_a}`. Apart from the exact criteria,
//! nothing here proves membership: [`falsify_ly`] either exhibits a zero or
//! reports how hard it looked.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::hamiltonian::{build_epr_like, gibbs, gibbs_radius_n2};
use crate::poly::{poly_roots, UnivariatePoly};
use crate::tensor::{bits_to_string, index_to_bits, MultiRadius, OperatorTensor, StateTensor};

/// Largest tensor for the exhaustive equatorial scan (`2^n` polynomials).
pub const MAX_EQUATORIAL_INDICES: usize = 16;

/// A witness must sit strictly inside the polydisk by this relative margin.
pub const INTERIOR_MARGIN: f64 = 1e-12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    Falsified,
    CertifiedExact,
    NotFalsified,
}

/// A point inside the polydisk where the generating polynomial vanishes
/// to within the falsification tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub z: Vec<Complex64>,
    /// `|f(z)|`, recomputed from the tensor.
    pub f_abs: f64,
    /// `max_a |z_a|`.
    pub max_modulus: f64,
    /// `max_a |z_a| / r_a`, strictly below one.
    pub max_relative_modulus: f64,
    pub strategy: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyRecord {
    pub strategy: String,
    /// Polynomials solved or points evaluated.
    pub evaluations: usize,
    pub detail: String,
}

/// Outcome of an exact criterion: `holds` iff `lhs <= rhs` (up to the
/// documented slack).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub name: String,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyVerdict {
    pub kind: VerdictKind,
    pub radius: Vec<f64>,
    pub tolerance: f64,
    pub witness: Option<Witness>,
    pub effort: Vec<StrategyRecord>,
    pub criterion: Option<CriterionReport>,
}

impl LyVerdict {
    pub fn is_falsified(&self) -> bool {
        self.kind == VerdictKind::Falsified
    }

    pub fn is_certified(&self) -> bool {
        self.kind == VerdictKind::CertifiedExact
    }
}

/// Search effort for [`falsify_ly`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Random rays `t ↦ f(t · r ⊙ w)` to solve.
    pub rays: usize,
    /// Uniform random points in the polydisk.
    pub samples: usize,
    pub seed: u64,
    /// Run the equatorial scan (only for `n <= 16`).
    pub equatorial: bool,
}

impl Budget {
    /// `samples` points plus `max(16, samples / 20)` rays.
    pub fn new(samples: usize, seed: u64) -> Self {
        Budget {
            rays: (samples / 20).max(16),
            samples,
            seed,
            equatorial: true,
        }
    }
}

/// `1e-9 · Σ|ψ| · max(1, r_max)^n`.
pub fn falsification_tolerance(psi: &StateTensor, r: &MultiRadius) -> f64 {
    1e-9 * psi.abs_sum() * r.max().max(1.0).powi(psi.n_indices() as i32)
}

/// Unnormalized Walsh-Hadamard transform in place.
fn walsh_hadamard(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_exact_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (p, q) = (*x, *y);
                *x = p + q;
                *y = p - q;
            }
        }
        h *= 2;
    }
}

/// `table[j][y] = Σ_{|x| = j} ψ_x (-1)^{x·y}` for all `y` at once.
fn weight_signed_sums(psi: &StateTensor) -> Vec<Vec<Complex64>> {
    let n = psi.n_indices();
    let amps = psi.amplitudes();
    (0..=n)
        .into_par_iter()
        .map(|j| {
            let mut v: Vec<Complex64> = amps
                .iter()
                .enumerate()
                .map(|(x, &a)| if x.count_ones() as usize == j { a } else { ZERO })
                .collect();
            walsh_hadamard(&mut v);
            v
        })
        .collect()
}

/// `F_y(z) = 2^{-n/2} Σ_j c_{y,j} z^j` with `c_{y,j} = Σ_{|x|=j} ψ_x (-1)^{x·y}`,
/// i.e. `2^{-n/2} f_ψ((-1)^{y_1} z, …, (-1)^{y_n} z)`.
pub fn equatorial_poly(psi: &StateTensor, y: &[u8]) -> Result<UnivariatePoly> {
    let n = psi.n_indices();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: y.len(),
        });
    }
    let ymask = crate::tensor::bits_to_index(y);
    let mut c = vec![ZERO; n + 1];
    for (x, &a) in psi.amplitudes().iter().enumerate() {
        let sign = if (x & ymask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        c[x.count_ones() as usize] += a * sign;
    }
    let norm = 0.5f64.powf(n as f64 / 2.0);
    Ok(UnivariatePoly::new(c.into_iter().map(|v| v * norm).collect()))
}

/// A root of an equatorial polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquatorialRoot {
    pub y: String,
    pub root: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquatorialScan {
    /// Smallest root modulus over all `y`; `+∞` when no polynomial has a root.
    pub min_modulus: f64,
    pub argmin_y: Option<String>,
    pub argmin_root: Option<Complex64>,
    pub polys_scanned: usize,
    /// Identically zero polynomials, skipped.
    pub zero_polys: usize,
    /// Roots with modulus at most the requested cutoff.
    pub near_roots: Vec<EquatorialRoot>,
}

/// Scans all `2^n` equatorial polynomials. Roots with modulus at most
/// `keep_within` are returned in `near_roots`.
pub fn equatorial_scan(psi: &StateTensor, keep_within: Option<f64>) -> Result<EquatorialScan> {
    let n = psi.n_indices();
    if n > MAX_EQUATORIAL_INDICES {
        return Err(Error::TooLarge {
            what: "tensor indices for the equatorial scan",
            value: n,
            cap: MAX_EQUATORIAL_INDICES,
        });
    }
    let table = weight_signed_sums(psi);
    let per_y: Vec<Result<Option<Vec<Complex64>>>> = (0..1usize << n)
        .into_par_iter()
        .map(|y| {
            let p = UnivariatePoly::new((0..=n).map(|j| table[j][y]).collect());
            if p.is_zero() {
                Ok(None)
            } else if p.degree() == 0 {
                Ok(Some(Vec::new()))
            } else {
                poly_roots(&p).map(|rs| Some(rs.roots))
            }
        })
        .collect();
    let mut scan = EquatorialScan {
        min_modulus: f64::INFINITY,
        argmin_y: None,
        argmin_root: None,
        polys_scanned: 0,
        zero_polys: 0,
        near_roots: Vec::new(),
    };
    for (y, res) in per_y.into_iter().enumerate() {
        scan.polys_scanned += 1;
        match res? {
            None => {
                scan.zero_polys += 1;
                log::debug!(
                    "equatorial polynomial for y={} vanishes identically",
                    bits_to_string(&index_to_bits(y, n))
                );
            }
            Some(roots) => {
                for r in roots {
                    let m = r.norm();
                    if m < scan.min_modulus {
                        scan.min_modulus = m;
                        scan.argmin_y = Some(bits_to_string(&index_to_bits(y, n)));
                        scan.argmin_root = Some(r);
                    }
                    if keep_within.is_some_and(|c| m <= c) {
                        scan.near_roots.push(EquatorialRoot {
                            y: bits_to_string(&index_to_bits(y, n)),
                            root: r,
                        });
                    }
                }
            }
        }
    }
    Ok(scan)
}

/// Smallest root modulus over all equatorial polynomials.
pub fn min_equatorial_root_modulus(psi: &StateTensor) -> Result<EquatorialScan> {
    equatorial_scan(psi, None)
}

fn validate_witness(
    psi: &StateTensor,
    z: Vec<Complex64>,
    r: &MultiRadius,
    tol: f64,
    strategy: &str,
) -> Option<Witness> {
    let mut max_modulus = 0.0f64;
    let mut max_rel = 0.0f64;
    for (za, &ra) in z.iter().zip(r.radii()) {
        max_modulus = max_modulus.max(za.norm());
        max_rel = max_rel.max(za.norm() / ra);
    }
    if max_rel >= 1.0 - INTERIOR_MARGIN {
        return None;
    }
    let f_abs = psi.eval_gen_poly(&z).ok()?.norm();
    if f_abs > tol {
        return None;
    }
    Some(Witness {
        z,
        f_abs,
        max_modulus,
        max_relative_modulus: max_rel,
        strategy: strategy.to_string(),
    })
}

/// Coefficients in `t` of `f(t · v)` for a direction `v`.
fn ray_coeffs(psi: &StateTensor, v: &[Complex64]) -> Vec<Complex64> {
    let n = psi.n_indices();
    let mut prod = vec![Complex64::new(1.0, 0.0)];
    for &va in v {
        prod = prod.iter().flat_map(|&p| [p, p * va]).collect();
    }
    let mut c = vec![ZERO; n + 1];
    for (x, (&a, &w)) in psi.amplitudes().iter().zip(&prod).enumerate() {
        c[x.count_ones() as usize] += a * w;
    }
    c
}

/// Interior witnesses on the ray `t · v`, most interior first.
fn ray_witness(psi: &StateTensor, v: &[Complex64], r: &MultiRadius, tol: f64, strategy: &str) -> Option<Witness> {
    let p = UnivariatePoly::new(ray_coeffs(psi, v));
    if p.is_zero() {
        let z = v.iter().map(|&w| w * 0.5).collect();
        return validate_witness(psi, z, r, tol, strategy);
    }
    if p.degree() == 0 {
        return None;
    }
    let rs = poly_roots(&p).ok()?;
    rs.roots
        .iter()
        .filter(|t| t.norm() < 1.0)
        .find_map(|&t| validate_witness(psi, v.iter().map(|&w| w * t).collect(), r, tol, strategy))
}

/// Budgeted search for a zero of `f_ψ` in the open polydisk of radius `r`.
///
/// Strategies, in order: the origin, the exhaustive equatorial scan on the
/// rescaled tensor (roots in `t` of `f(t · r ⊙ σ_y)`), random rays
/// `f(t · r ⊙ w)` with directions alternating between unit-modulus and
/// random-modulus entries, and uniform sampling in the polydisk.
pub fn falsify_ly(psi: &StateTensor, r: &MultiRadius, budget: &Budget) -> Result<LyVerdict> {
    let n = psi.n_indices();
    if r.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: r.len(),
        });
    }
    let tol = falsification_tolerance(psi, r);
    let mut effort = Vec::new();
    let done = |w: Witness, effort: Vec<StrategyRecord>| LyVerdict {
        kind: VerdictKind::Falsified,
        radius: r.radii().to_vec(),
        tolerance: tol,
        witness: Some(w),
        effort,
        criterion: None,
    };

    effort.push(StrategyRecord {
        strategy: "origin".into(),
        evaluations: 1,
        detail: String::new(),
    });
    if psi.get(0).norm() <= tol {
        let w = validate_witness(psi, vec![ZERO; n], r, tol, "origin").expect("origin lies inside the polydisk");
        return Ok(done(w, effort));
    }
    if n == 0 {
        return Ok(not_falsified(r, tol, effort, None));
    }

    if budget.equatorial && n <= MAX_EQUATORIAL_INDICES {
        let scaled = psi.diag_scale(r.radii())?;
        let table = weight_signed_sums(&scaled);
        let found: Vec<Option<(f64, Witness)>> = (0..1usize << n)
            .into_par_iter()
            .map(|y| {
                let v: Vec<Complex64> = (0..n)
                    .map(|a| {
                        let sign = if crate::tensor::bit(y, a, n) == 1 { -1.0 } else { 1.0 };
                        Complex64::new(sign * r.radii()[a], 0.0)
                    })
                    .collect();
                let p = UnivariatePoly::new((0..=n).map(|j| table[j][y]).collect());
                if p.is_zero() {
                    let z = v.iter().map(|&w| w * 0.5).collect();
                    return validate_witness(psi, z, r, tol, "equatorial").map(|w| (0.5, w));
                }
                if p.degree() == 0 {
                    return None;
                }
                let rs = poly_roots(&p).ok()?;
                rs.roots.iter().filter(|t| t.norm() < 1.0).find_map(|&t| {
                    validate_witness(psi, v.iter().map(|&w| w * t).collect(), r, tol, "equatorial")
                        .map(|w| (t.norm(), w))
                })
            })
            .collect();
        effort.push(StrategyRecord {
            strategy: "equatorial".into(),
            evaluations: 1 << n,
            detail: "all sign patterns".into(),
        });
        let best = found.into_iter().flatten().min_by(|a, b| a.0.total_cmp(&b.0));
        if let Some((_, w)) = best {
            return Ok(done(w, effort));
        }
    } else {
        effort.push(StrategyRecord {
            strategy: "equatorial".into(),
            evaluations: 0,
            detail: if budget.equatorial {
                format!("skipped: {n} indices exceed the scan cap {MAX_EQUATORIAL_INDICES}")
            } else {
                "disabled".into()
            },
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let dirs: Vec<Vec<Complex64>> = (0..budget.rays)
        .map(|k| {
            (0..n)
                .map(|a| {
                    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                    let rho = if k % 2 == 0 {
                        1.0
                    } else {
                        rng.gen_range(f64::EPSILON..=1.0)
                    };
                    Complex64::from_polar(rho * r.radii()[a], phi)
                })
                .collect()
        })
        .collect();
    let hit = dirs
        .par_iter()
        .map(|v| ray_witness(psi, v, r, tol, "ray"))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();
    effort.push(StrategyRecord {
        strategy: "ray".into(),
        evaluations: budget.rays,
        detail: "alternating unit-modulus and random-modulus directions".into(),
    });
    if let Some(w) = hit {
        return Ok(done(w, effort));
    }

    let points: Vec<Vec<Complex64>> = (0..budget.samples)
        .map(|_| {
            r.radii()
                .iter()
                .map(|&ra| {
                    let u: f64 = rng.gen_range(0.0..1.0);
                    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                    Complex64::from_polar(ra * u.sqrt(), phi)
                })
                .collect()
        })
        .collect();
    let values: Vec<f64> = points
        .par_iter()
        .map(|z| psi.eval_gen_poly(z).map(|v| v.norm()).unwrap_or(f64::INFINITY))
        .collect();
    let min_abs = values.iter().copied().fold(f64::INFINITY, f64::min);
    effort.push(StrategyRecord {
        strategy: "sampling".into(),
        evaluations: budget.samples,
        detail: format!("min |f| = {min_abs:e}"),
    });
    if let Some(k) = values.iter().position(|&v| v <= tol) {
        if let Some(w) = validate_witness(psi, points[k].clone(), r, tol, "sampling") {
            return Ok(done(w, effort));
        }
    }
    Ok(not_falsified(r, tol, effort, None))
}

fn not_falsified(
    r: &MultiRadius,
    tol: f64,
    effort: Vec<StrategyRecord>,
    criterion: Option<CriterionReport>,
) -> LyVerdict {
    LyVerdict {
        kind: VerdictKind::NotFalsified,
        radius: r.radii().to_vec(),
        tolerance: tol,
        witness: None,
        effort,
        criterion,
    }
}

fn unit_radius(n: usize) -> MultiRadius {
    MultiRadius::uniform(n, 1.0).expect("unit radius is valid")
}

fn certified(n: usize, tol: f64, report: CriterionReport) -> LyVerdict {
    LyVerdict {
        kind: VerdictKind::CertifiedExact,
        radius: vec![1.0; n],
        tolerance: tol,
        witness: None,
        effort: Vec::new(),
        criterion: Some(report),
    }
}

fn check_arity(psi: &StateTensor, n: usize) -> Result<()> {
    if psi.n_indices() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: psi.n_indices(),
        });
    }
    Ok(())
}

/// `ψ ∈ LY(1)` iff `|ψ₀| ≥ |ψ₁|` for one index. On failure the zero
/// `z = -ψ₀/ψ₁` is returned as a witness.
pub fn check_single_qubit(psi: &StateTensor) -> Result<LyVerdict> {
    check_arity(psi, 1)?;
    let r = unit_radius(1);
    let tol = falsification_tolerance(psi, &r);
    let (a, b) = (psi.get(0), psi.get(1));
    let report = CriterionReport {
        name: "single-qubit".into(),
        holds: a.norm() >= b.norm(),
        lhs: b.norm(),
        rhs: a.norm(),
        detail: "|psi_1| <= |psi_0|".into(),
    };
    if report.holds {
        return Ok(certified(1, tol, report));
    }
    let w = validate_witness(psi, vec![-a / b], &r, tol, "single-qubit");
    Ok(LyVerdict {
        kind: if w.is_some() {
            VerdictKind::Falsified
        } else {
            VerdictKind::NotFalsified
        },
        radius: vec![1.0],
        tolerance: tol,
        witness: w,
        effort: Vec::new(),
        criterion: Some(report),
    })
}

/// Slack for equality cases of the two-qubit criterion, relative to `|ψ₀₀|²`.
const TWO_QUBIT_SLACK: f64 = 1e-12;

/// Two-index criterion
/// `|ψ₁₀ψ₀₀* − ψ₁₁ψ₀₁*| + |ψ₁₁ψ₀₀ − ψ₁₀ψ₀₁| ≤ |ψ₀₀|² − |ψ₀₁|²`.
///
/// Requires `ψ₀₀ ≠ 0`. When the inequality fails, a zero inside the unit
/// bidisk is searched for by minimizing `max(|z₁|, |z₂|)` along the solution curve
/// `z₁ = −(ψ₀₀ + ψ₀₁ z₂)/(ψ₁₀ + ψ₁₁ z₂)`.
pub fn check_two_qubit_ly1(psi: &StateTensor) -> Result<LyVerdict> {
    check_arity(psi, 2)?;
    let a = psi.amplitudes();
    let (p00, p01, p10, p11) = (a[0], a[1], a[2], a[3]);
    if p00.norm() == 0.0 {
        return Err(Error::ZeroAtOrigin(
            "the two-qubit criterion needs psi_00 != 0; f(0,0) = 0 already excludes LY(1)".into(),
        ));
    }
    let lhs = (p10 * p00.conj() - p11 * p01.conj()).norm() + (p11 * p00 - p10 * p01).norm();
    let rhs = p00.norm_sqr() - p01.norm_sqr();
    let holds = lhs <= rhs + TWO_QUBIT_SLACK * p00.norm_sqr();
    let report = CriterionReport {
        name: "two-qubit".into(),
        holds,
        lhs,
        rhs,
        detail: "|psi10 psi00* - psi11 psi01*| + |psi11 psi00 - psi10 psi01| <= |psi00|^2 - |psi01|^2".into(),
    };
    let r = unit_radius(2);
    let tol = falsification_tolerance(psi, &r);
    if holds {
        return Ok(certified(2, tol, report));
    }
    let w = two_qubit_witness(psi, tol);
    Ok(LyVerdict {
        kind: if w.is_some() {
            VerdictKind::Falsified
        } else {
            VerdictKind::NotFalsified
        },
        radius: vec![1.0, 1.0],
        tolerance: tol,
        witness: w,
        effort: vec![StrategyRecord {
            strategy: "two-qubit-curve".into(),
            evaluations: 0,
            detail: "grid and pattern search over |z2| < 1".into(),
        }],
        criterion: Some(report),
    })
}

fn two_qubit_witness(psi: &StateTensor, tol: f64) -> Option<Witness> {
    let a = psi.amplitudes();
    let (p00, p01, p10, p11) = (a[0], a[1], a[2], a[3]);
    let r = unit_radius(2);
    let limit = 1.0 - 1e-12;
    let z1_of = |z2: Complex64| -> f64 {
        let den = p10 + p11 * z2;
        if den.norm() == 0.0 {
            f64::INFINITY
        } else {
            ((p00 + p01 * z2) / den).norm().max(z2.norm())
        }
    };
    let mut radii: Vec<f64> = (0..64).map(|k| k as f64 / 64.0).collect();
    radii.extend((2..=10).map(|m| 1.0 - 10f64.powi(-m)));
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for &rho in &radii {
        for k in 0..256 {
            let phi = std::f64::consts::TAU * k as f64 / 256.0;
            let v = z1_of(Complex64::from_polar(rho, phi));
            if v < best.0 {
                best = (v, rho, phi);
            }
        }
    }
    let (mut val, mut rho, mut phi) = best;
    let (mut dr, mut dp) = (1.0 / 64.0, std::f64::consts::TAU / 256.0);
    for _ in 0..200 {
        let mut improved = false;
        for (nr, np) in [(rho + dr, phi), (rho - dr, phi), (rho, phi + dp), (rho, phi - dp)] {
            let nr = nr.clamp(0.0, limit);
            let v = z1_of(Complex64::from_polar(nr, np));
            if v < val {
                val = v;
                rho = nr;
                phi = np;
                improved = true;
            }
        }
        if !improved {
            dr *= 0.5;
            dp *= 0.5;
            if dr < 1e-15 {
                break;
            }
        }
    }
    if val >= limit {
        return None;
    }
    let z2 = Complex64::from_polar(rho, phi);
    let z1 = -(p00 + p01 * z2) / (p10 + p11 * z2);
    validate_witness(psi, vec![z1, z2], &r, tol, "two-qubit-curve")
}

/// Relative tolerance for the antiunitary symmetry of the sufficient criterion.
const SF_SYMMETRY_TOL: f64 = 1e-10;
/// Slack for the weight inequality, relative to `Σ|ψ|`.
const SF_WEIGHT_SLACK: f64 = 1e-12;

/// Sufficient criterion: `X^{⊗m}ψ = ±ψ*` and `|ψ_{0…0}| ≥ ¼ Σ_x |ψ_x|`.
/// Certifies `LY(1)`; otherwise reports the criterion as inapplicable.
pub fn check_sf_sufficient(psi: &StateTensor) -> LyVerdict {
    let n = psi.n_indices();
    let a = psi.amplitudes();
    let scale = psi.max_abs().max(f64::MIN_POSITIVE);
    let last = a.len() - 1;
    let dev = |sign: f64| {
        (0..a.len())
            .map(|x| (a[last - x] - a[x].conj() * sign).norm())
            .fold(0.0, f64::max)
    };
    let (dp, dm) = (dev(1.0), dev(-1.0));
    let sign = if dp <= SF_SYMMETRY_TOL * scale {
        Some('+')
    } else if dm <= SF_SYMMETRY_TOL * scale {
        Some('-')
    } else {
        None
    };
    let total = psi.abs_sum();
    let lhs = 0.25 * total;
    let rhs = a[0].norm();
    let weight_ok = rhs >= lhs - SF_WEIGHT_SLACK * total;
    let holds = sign.is_some() && weight_ok;
    let detail = match sign {
        Some(s) => format!("X^n psi = {s}conj(psi); |psi_0| >= sum|psi|/4: {weight_ok}"),
        None => format!("no antiunitary flip symmetry (deviations {dp:e}, {dm:e})"),
    };
    let report = CriterionReport {
        name: "suzuki-fisher-sufficient".into(),
        holds,
        lhs,
        rhs,
        detail,
    };
    let r = unit_radius(n);
    let tol = falsification_tolerance(psi, &r);
    if holds {
        certified(n, tol, report)
    } else {
        not_falsified(&r, tol, Vec::new(), Some(report))
    }
}

/// Choi matrix of the Pauli channel `ρ ↦ Σ p_i σ_i ρ σ_i`.
pub fn pauli_choi(p: [f64; 4]) -> Result<OperatorTensor> {
    validate_distribution(&p)?;
    let [p0, p1, p2, p3] = p;
    let rows = [
        [p0 + p3, 0.0, 0.0, p0 - p3],
        [0.0, p1 + p2, p1 - p2, 0.0],
        [0.0, p1 - p2, p1 + p2, 0.0],
        [p0 - p3, 0.0, 0.0, p0 + p3],
    ];
    let data = rows.iter().flatten().map(|&v| Complex64::new(v, 0.0)).collect();
    OperatorTensor::from_matrix(2, data)?.checked_hermitian(1e-14)
}

fn validate_distribution(p: &[f64; 4]) -> Result<()> {
    if p.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return invalid(format!("channel probabilities must be nonnegative, got {p:?}"));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return invalid(format!("channel probabilities must sum to 1, got {s}"));
    }
    Ok(())
}

/// `p = (1 - 3λ/4, λ/4, λ/4, λ/4)`.
pub fn depolarizing(lambda: f64) -> [f64; 4] {
    [1.0 - 0.75 * lambda, 0.25 * lambda, 0.25 * lambda, 0.25 * lambda]
}

/// `p = (1 - q, 0, 0, q)`.
pub fn dephasing(q: f64) -> [f64; 4] {
    [1.0 - q, 0.0, 0.0, q]
}

/// Certifies the channel in `LY(1)` iff `min{p₀,p₃} ≥ max{p₁,p₂}` and
/// returns its Choi matrix. Rejected channels are passed to the falsifier.
pub fn check_pauli_channel(p: [f64; 4]) -> Result<(LyVerdict, OperatorTensor)> {
    let choi = pauli_choi(p)?;
    let lhs = p[1].max(p[2]);
    let rhs = p[0].min(p[3]);
    let report = CriterionReport {
        name: "pauli-channel".into(),
        holds: rhs >= lhs - 1e-12,
        lhs,
        rhs,
        detail: "max{p1,p2} <= min{p0,p3}".into(),
    };
    let r = unit_radius(4);
    let tol = falsification_tolerance(choi.vectorized(), &r);
    let verdict = if report.holds {
        certified(4, tol, report)
    } else {
        let mut v = falsify_ly(choi.vectorized(), &r, &Budget::new(200, 0))?;
        v.criterion = Some(report);
        v
    };
    Ok((verdict, choi))
}

/// Applies `ρ ↦ Σ p_i σ_i ρ σ_i` on one qubit of an operator.
pub fn apply_pauli_channel(rho: &OperatorTensor, qubit: usize, p: [f64; 4]) -> Result<OperatorTensor> {
    validate_distribution(&p)?;
    let m = rho.n_qubits();
    if qubit >= m {
        return Err(Error::InvalidIndex { index: qubit, n: m });
    }
    let d = rho.dim();
    let mask = 1usize << (m - 1 - qubit);
    let mut out = vec![ZERO; d * d];
    for x in 0..d {
        for y in 0..d {
            let sign = if ((x & mask != 0) as u8 + (y & mask != 0) as u8).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            let same = rho.entry(x, y);
            let flip = rho.entry(x ^ mask, y ^ mask);
            out[x * d + y] = same * (p[0] + p[3] * sign) + flip * (p[1] + p[2] * sign);
        }
    }
    OperatorTensor::from_matrix(m, out)
}

/// `P = |z><z| − X^{⊗n}|z*><z*|X^{⊗n}` with `|z> = ⊗_a (|0> + z_a*|1>)`.
pub fn schur_projector(z: &[Complex64]) -> Result<OperatorTensor> {
    if let Some(bad) = z.iter().find(|c| c.norm() >= 1.0) {
        return invalid(format!("schur projector needs |z_a| < 1, got {bad}"));
    }
    let one = Complex64::new(1.0, 0.0);
    let ket = StateTensor::product(&z.iter().map(|c| [one, c.conj()]).collect::<Vec<_>>())?;
    let flipped = StateTensor::product(&z.iter().map(|&c| [one, c]).collect::<Vec<_>>())?.flip_all();
    let a = OperatorTensor::outer(&ket, &ket)?;
    let b = OperatorTensor::outer(&flipped, &flipped)?;
    let data = a.matrix().iter().zip(b.matrix()).map(|(x, y)| x - y).collect();
    OperatorTensor::from_matrix(z.len(), data)?.checked_hermitian(1e-14)
}

/// Perturbation size that keeps an `LY(r)` tensor inside `LY((1+r)/2)`:
/// `2^{-n/2} (1+ρ²)^{-n/2} exp(-n(r+1)/(r-1))` with `ρ = (1+r)/2`.
pub fn robustness_bound(n: usize, r: f64) -> Result<f64> {
    if !(r > 1.0) || !r.is_finite() {
        return invalid(format!("robustness bound needs finite r > 1, got {r}"));
    }
    let nf = n as f64;
    let rho = 0.5 * (1.0 + r);
    Ok(2f64.powf(-nf / 2.0) * (1.0 + rho * rho).powf(-nf / 2.0) * (-nf * (r + 1.0) / (r - 1.0)).exp())
}

/// Exact rule for `e^{-βH_s}` on one edge: in `LY(R)` iff `R ≤ r(β, s)`.
/// Beyond the radius the diagonal-ray zero `(r, −r, −r, −r)` is returned.
pub fn check_gibbs_n2(beta: f64, s: f64, radius: f64) -> Result<LyVerdict> {
    let r_exact = gibbs_radius_n2(beta, s)?;
    let h = build_epr_like(&Graph::path(2)?, s)?;
    let g = gibbs(&h, beta)?;
    let rr = MultiRadius::uniform(4, radius)?;
    let tol = falsification_tolerance(g.vectorized(), &rr);
    let report = CriterionReport {
        name: "gibbs-n2".into(),
        holds: radius <= r_exact,
        lhs: radius,
        rhs: r_exact,
        detail: "radius <= r(beta, s)".into(),
    };
    if report.holds {
        return Ok(LyVerdict {
            kind: VerdictKind::CertifiedExact,
            radius: rr.radii().to_vec(),
            tolerance: tol,
            witness: None,
            effort: Vec::new(),
            criterion: Some(report),
        });
    }
    let z = vec![
        Complex64::new(r_exact, 0.0),
        Complex64::new(-r_exact, 0.0),
        Complex64::new(-r_exact, 0.0),
        Complex64::new(-r_exact, 0.0),
    ];
    let w = validate_witness(g.vectorized(), z, &rr, tol, "gibbs-n2-diagonal-ray");
    Ok(LyVerdict {
        kind: if w.is_some() {
            VerdictKind::Falsified
        } else {
            VerdictKind::NotFalsified
        },
        radius: rr.radii().to_vec(),
        tolerance: tol,
        witness: w,
        effort: Vec::new(),
        criterion: Some(report),
    })
}

/// Runs the exact criteria on `diag_scale(r) ψ`, which lies in `LY(1)`
/// iff `ψ ∈ LY(r)`, and falls back to the falsifier when they do not certify.
/// A criterion witness is returned directly only at unit radius.
pub fn assess_ly(psi: &StateTensor, r: &MultiRadius, budget: &Budget) -> Result<LyVerdict> {
    let n = psi.n_indices();
    if r.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: r.len(),
        });
    }
    let mut report = None;
    if n > 0 {
        let unit = r.radii().iter().all(|&v| v == 1.0);
        let scaled = if unit { psi.clone() } else { psi.diag_scale(r.radii())? };
        let mut v = match n {
            1 => check_single_qubit(&scaled)?,
            2 if scaled.get(0).norm() > 0.0 => check_two_qubit_ly1(&scaled)?,
            _ => check_sf_sufficient(&scaled),
        };
        if v.is_certified() {
            v.radius = r.radii().to_vec();
            v.tolerance = falsification_tolerance(psi, r);
            return Ok(v);
        }
        if v.is_falsified() && unit {
            return Ok(v);
        }
        report = v.criterion;
    }
    let mut v = falsify_ly(psi, r, budget)?;
    v.criterion = report;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::theta_state;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn budget() -> Budget {
        Budget::new(2000, 1)
    }

    #[test]
    fn equatorial_poly_examples() {
        let z = StateTensor::basis(3, 0).unwrap();
        let p = equatorial_poly(&z, &[1, 0, 1]).unwrap();
        assert_eq!(p.degree(), 0);
        assert!((p.coeffs()[0].re - 0.5f64.powf(1.5)).abs() < 1e-15);
        let s = 0.3;
        let t = StateTensor::from_real(2, &[1.0, 0.0, 0.0, s]).unwrap();
        let p = equatorial_poly(&t, &[0, 1]).unwrap();
        assert!((p.coeffs()[0].re - 0.5).abs() < 1e-15 && (p.coeffs()[2].re + s / 2.0).abs() < 1e-15);
        let rs = poly_roots(&p).unwrap();
        for r in rs.roots {
            assert!((r.norm() - s.powf(-0.5)).abs() < 1e-12);
        }
        assert!(equatorial_poly(&t, &[0]).is_err());
    }

    #[test]
    fn scan_examples() {
        let t = StateTensor::from_real(2, &[1.0, 0.0, 0.0, 0.25]).unwrap();
        let sc = min_equatorial_root_modulus(&t).unwrap();
        assert!((sc.min_modulus - 2.0).abs() < 1e-12);
        let y = sc.argmin_y.unwrap();
        // Every sign pattern has roots of modulus 2; ties go to the first y.
        assert_eq!(y, "00");
        let z = StateTensor::basis(4, 0).unwrap();
        assert_eq!(min_equatorial_root_modulus(&z).unwrap().min_modulus, f64::INFINITY);
        // |01> - |10>: y = 00 and y = 11 give the zero polynomial.
        let a = StateTensor::from_real(2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert_eq!(min_equatorial_root_modulus(&a).unwrap().zero_polys, 2);
    }

    #[test]
    fn table_matches_direct_polys() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let amps: Vec<Complex64> = (0..32)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let psi = StateTensor::new(5, amps).unwrap();
        let table = weight_signed_sums(&psi);
        let norm = 0.5f64.powf(2.5);
        for y in 0..32 {
            let p = equatorial_poly(&psi, &index_to_bits(y, 5)).unwrap();
            for (j, cj) in p.coeffs().iter().enumerate() {
                assert!((cj - table[j][y] * norm).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn falsify_examples() {
        let one = StateTensor::basis(1, 1).unwrap();
        let v = falsify_ly(&one, &unit_radius(1), &budget()).unwrap();
        assert!(v.is_falsified());
        assert_eq!(v.witness.unwrap().z, vec![ZERO]);
        let bell = StateTensor::from_real(2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let v = falsify_ly(&bell, &unit_radius(2), &budget()).unwrap();
        assert_eq!(v.kind, VerdictKind::NotFalsified);
        assert_eq!(v.effort.len(), 4);
        let v = falsify_ly(&bell, &MultiRadius::uniform(2, 1.01).unwrap(), &budget()).unwrap();
        assert!(v.is_falsified());
        let w = v.witness.unwrap();
        assert!(w.max_relative_modulus < 1.0 && w.f_abs <= v.tolerance);
        // Re-evaluating reproduces the residual.
        assert_eq!(bell.eval_gen_poly(&w.z).unwrap().norm(), w.f_abs);
    }

    #[test]
    fn falsify_is_deterministic() {
        let t = StateTensor::from_real(3, &[1.0, 0.2, -0.3, 0.1, 0.5, 0.0, 0.7, 0.9]).unwrap();
        let r = MultiRadius::new(vec![1.0, 2.0, 0.5]).unwrap();
        let a = falsify_ly(&t, &r, &budget()).unwrap();
        let b = falsify_ly(&t, &r, &budget()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_qubit_examples() {
        let t = StateTensor::from_real(1, &[1.0, 0.5]).unwrap();
        assert!(check_single_qubit(&t).unwrap().is_certified());
        let t = StateTensor::basis(1, 1).unwrap();
        let v = check_single_qubit(&t).unwrap();
        assert!(v.is_falsified());
        let t = StateTensor::new(
            1,
            vec![c(0.7, 0.0), Complex64::from_polar(0.7, std::f64::consts::FRAC_PI_3)],
        )
        .unwrap();
        assert!(check_single_qubit(&t).unwrap().is_certified());
        let t = StateTensor::from_real(1, &[0.5, 1.0]).unwrap();
        let v = check_single_qubit(&t).unwrap();
        assert!(v.is_falsified());
        assert!((v.witness.unwrap().z[0] + 0.5).norm() < 1e-15);
        assert!(check_single_qubit(&StateTensor::basis(2, 0).unwrap()).is_err());
    }

    #[test]
    fn two_qubit_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateTensor::from_real(2, &[h, 0.0, 0.0, h]).unwrap();
        let v = check_two_qubit_ly1(&bell).unwrap();
        assert!(v.is_certified());
        let cr = v.criterion.unwrap();
        assert!((cr.lhs - 0.5).abs() < 1e-15 && (cr.rhs - 0.5).abs() < 1e-15);
        let t = StateTensor::from_real(2, &[1.0, 0.5, 0.5, 0.5]).unwrap();
        let cr = check_two_qubit_ly1(&t).unwrap().criterion.unwrap();
        assert!(cr.holds && (cr.lhs - 0.5).abs() < 1e-15 && (cr.rhs - 0.75).abs() < 1e-15);
        let t = StateTensor::from_real(2, &[1.0, 0.0, 0.0, 2.0]).unwrap();
        let v = check_two_qubit_ly1(&t).unwrap();
        assert!(v.is_falsified());
        let f = falsify_ly(&t, &unit_radius(2), &budget()).unwrap();
        assert!(f.is_falsified());
        assert!(matches!(
            check_two_qubit_ly1(&StateTensor::basis(2, 3).unwrap()),
            Err(Error::ZeroAtOrigin(_))
        ));
    }

    #[test]
    fn sf_sufficient_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut ghz = vec![0.0; 8];
        ghz[0] = h;
        ghz[7] = h;
        let v = check_sf_sufficient(&StateTensor::from_real(3, &ghz).unwrap());
        assert!(v.is_certified());
        assert!(v.criterion.unwrap().detail.contains("+conj"));
        ghz[7] = -h;
        let v = check_sf_sufficient(&StateTensor::from_real(3, &ghz).unwrap());
        assert!(v.is_certified());
        assert!(v.criterion.unwrap().detail.contains("-conj"));
        for lambda in [0.0, 0.3, 0.8, 1.0] {
            let choi = pauli_choi(depolarizing(lambda)).unwrap();
            assert!(check_sf_sufficient(choi.vectorized()).is_certified(), "lambda {lambda}");
        }
        let choi = pauli_choi([0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(!check_sf_sufficient(choi.vectorized()).criterion.unwrap().holds);
    }

    #[test]
    fn pauli_channel_examples() {
        assert!(check_pauli_channel([0.4, 0.2, 0.2, 0.2]).unwrap().0.is_certified());
        assert!(check_pauli_channel(dephasing(0.3)).unwrap().0.is_certified());
        let (v, _) = check_pauli_channel([0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(!v.is_certified());
        assert!(v.is_falsified());
        assert!(check_pauli_channel([0.5, 0.5, 0.5, 0.0]).is_err());
        assert!(check_pauli_channel([1.1, -0.1, 0.0, 0.0]).is_err());
    }

    #[test]
    fn pauli_channel_action() {
        // Full depolarization maps any single-qubit ρ to Tr(ρ) I / 2.
        let rho = OperatorTensor::from_matrix(1, vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]).unwrap();
        let out = apply_pauli_channel(&rho, 0, depolarizing(1.0)).unwrap();
        let expect = [c(0.5, 0.0), ZERO, ZERO, c(0.5, 0.0)];
        for (a, b) in out.matrix().iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
        // Dephasing with q = 1 is conjugation by Z.
        let out = apply_pauli_channel(&rho, 0, dephasing(1.0)).unwrap();
        assert!((out.entry(0, 1) + rho.entry(0, 1)).norm() < 1e-15);
    }

    #[test]
    fn schur_projector_examples() {
        let p = schur_projector(&[ZERO, ZERO]).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                let e = match (x, y) {
                    (0, 0) => 1.0,
                    (3, 3) => -1.0,
                    _ => 0.0,
                };
                assert!((p.entry(x, y) - e).norm() < 1e-15);
            }
        }
        // n = 1, z = 1/2: |z> = (1, 1/2), X|z*> = (1/2, 1).
        let p = schur_projector(&[c(0.5, 0.0)]).unwrap();
        let expect = [1.0 - 0.25, 0.5 - 0.5, 0.5 - 0.5, 0.25 - 1.0];
        for (a, b) in p.matrix().iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(schur_projector(&[c(1.0, 0.0)]).is_err());
        let p = schur_projector(&[c(0.3, -0.4), c(-0.2, 0.6)]).unwrap();
        assert!(p.hermiticity_deviation() < 1e-15);
        let v = falsify_ly(p.vectorized(), &unit_radius(4), &budget()).unwrap();
        assert_eq!(v.kind, VerdictKind::NotFalsified);
    }

    #[test]
    fn robustness_examples() {
        assert_eq!(robustness_bound(0, 5.0).unwrap(), 1.0);
        let b = robustness_bound(2, 3.0).unwrap();
        assert!((b - 0.1 * (-4f64).exp()).abs() < 1e-17);
        assert!(robustness_bound(2, 1.0).is_err());
    }

    #[test]
    fn postselect_equals_contraction() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let amps: Vec<Complex64> = (0..8)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let psi = StateTensor::new(3, amps).unwrap();
        for q in 0..3 {
            let theta = 0.9;
            let a = psi.equatorial_postselect(q, theta).unwrap();
            let b = psi
                .tensor_product(&theta_state(theta).conj())
                .unwrap()
                .contract_pair(q, 3)
                .unwrap();
            assert!(a.distance(&b).unwrap() < 1e-14);
        }
    }

    #[test]
    fn gibbs_n2_rule() {
        let r = gibbs_radius_n2(1.0, 0.5).unwrap();
        assert!(check_gibbs_n2(1.0, 0.5, r * 0.999).unwrap().is_certified());
        let v = check_gibbs_n2(1.0, 0.5, r * 1.001).unwrap();
        assert!(v.is_falsified());
    }

    #[test]
    fn assess_uses_criteria() {
        let t = StateTensor::from_real(1, &[1.0, 0.5]).unwrap();
        assert!(assess_ly(&t, &unit_radius(1), &budget()).unwrap().is_certified());
        let t = StateTensor::from_real(2, &[1.0, 0.0, 0.0, 2.0]).unwrap();
        assert!(assess_ly(&t, &unit_radius(2), &budget()).unwrap().is_falsified());
        let t = StateTensor::from_real(1, &[1.0, 0.5]).unwrap();
        let v = assess_ly(&t, &MultiRadius::uniform(1, 3.0).unwrap(), &budget()).unwrap();
        assert!(v.is_falsified());
        let v = assess_ly(&t, &MultiRadius::uniform(1, 1.9).unwrap(), &budget()).unwrap();
        assert!(v.is_certified());
        assert_eq!(v.radius, vec![1.9]);
    }

    #[test]
    fn assess_rescales_two_index_criterion() {
        // (1 + z₁/4)(1 + z₂/2) is zero-free on radii (4, 2) but not on (4, 2.1).
        let t = StateTensor::from_real(2, &[1.0, 0.5, 0.25, 0.125]).unwrap();
        let v = assess_ly(&t, &MultiRadius::new(vec![3.9, 1.99]).unwrap(), &budget()).unwrap();
        assert!(v.is_certified());
        let v = assess_ly(&t, &MultiRadius::new(vec![3.9, 2.1]).unwrap(), &budget()).unwrap();
        assert!(v.is_falsified());
    }
}
