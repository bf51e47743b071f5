//! Two-local qubit Hamiltonians on interaction graphs, exact diagonalization
//! by parity sector, Gibbs operators and closed-form spectral results.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, Csr, SymMatrix};
use crate::tensor::{OperatorTensor, StateTensor};

/// Largest qubit count accepted by the Hamiltonian builders.
pub const MAX_QUBITS: usize = 14;
/// Largest qubit count for Gibbs operators (a `2n`-index tensor).
pub const MAX_GIBBS_QUBITS: usize = 10;
/// Largest block diagonalized densely; bigger blocks go to Lanczos.
pub const DENSE_BLOCK_CAP: usize = 2048;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Sparse Hermitian matrix on `n` qubits in the computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    n_qubits: usize,
    matrix: Csr,
}

impl Hamiltonian {
    pub fn from_csr(n_qubits: usize, matrix: Csr) -> Result<Self> {
        if matrix.dim != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                actual: matrix.dim,
            });
        }
        let dev = matrix.hermiticity_deviation();
        if dev > 1e-10 * matrix.norm_inf().max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Hamiltonian { n_qubits, matrix })
    }

    /// Row-major dense input.
    pub fn from_dense(n_qubits: usize, data: &[Complex64]) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        let t = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, data[i * dim + j]))
            .collect();
        Self::from_csr(n_qubits, Csr::from_triplets(dim, t))
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn csr(&self) -> &Csr {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix.get(i, j)
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        self.matrix.to_dense()
    }

    pub fn is_real(&self) -> bool {
        self.matrix.is_real()
    }

    pub fn norm_inf(&self) -> f64 {
        self.matrix.norm_inf()
    }

    /// `[Z^{⊗n}, H] = 0` exactly: no entry connects strings of different parity.
    pub fn commutes_with_parity(&self) -> bool {
        (0..self.dim()).all(|i| {
            self.matrix
                .row(i)
                .all(|(j, _)| (i.count_ones() + j.count_ones()) % 2 == 0)
        })
    }

    /// No entry connects strings of different Hamming weight.
    pub fn conserves_particle_number(&self) -> bool {
        (0..self.dim()).all(|i| self.matrix.row(i).all(|(j, _)| i.count_ones() == j.count_ones()))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.matvec(v)
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "number of qubits",
            value: n,
            cap: MAX_QUBITS,
        });
    }
    Ok(())
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return invalid(format!("s must lie in [0, 1], got {s}"));
    }
    Ok(())
}

/// Bit mask of qubit `a` (qubit 0 is the most significant bit).
#[inline]
fn mask(a: usize, n: usize) -> usize {
    1 << (n - 1 - a)
}

/// `H_s = -Σ_{(i,j)} w_ij |φ_s><φ_s|` with `|φ_s> = |00> + s|11>`.
pub fn build_epr_like(g: &Graph, s: f64) -> Result<Hamiltonian> {
    check_s(s)?;
    let zero_phase = g.with_phases(&vec![0.0; g.edges().len()])?;
    build_phase_shifted(&zero_phase, s)
}

/// `H_s(θ) = -Σ w_ij h(s e^{iθ_ij})` with `h(z) = |φ_z><φ_z|`, `|φ_z> = |00> + z|11>`.
pub fn build_phase_shifted(g: &Graph, s: f64) -> Result<Hamiltonian> {
    check_s(s)?;
    let n = g.n_vertices();
    check_qubits(n)?;
    let dim = 1usize << n;
    let mut t = Vec::with_capacity(dim * g.edges().len() / 2 * 2);
    for e in g.edges() {
        let (mi, mj) = (mask(e.i, n), mask(e.j, n));
        let both = mi | mj;
        let z = Complex64::from_polar(s, e.theta);
        for x in 0..dim {
            match (x & mi != 0, x & mj != 0) {
                (false, false) => {
                    t.push((x, x, Complex64::new(-e.weight, 0.0)));
                    t.push((x | both, x, -e.weight * z));
                }
                (true, true) => {
                    t.push((x, x, Complex64::new(-e.weight * s * s, 0.0)));
                    t.push((x ^ both, x, -e.weight * z.conj()));
                }
                _ => {}
            }
        }
    }
    if g.edges().is_empty() {
        t.push((0, 0, ZERO));
    }
    Hamiltonian::from_csr(n, Csr::from_triplets(dim, t))
}

/// `H = -Σ w_ij h_ij - Σ μ_i Z_i` with the particle-preserving local term
/// `h = [[0,0,0,0],[0,d,f,0],[0,f,d,0],[0,0,0,0]]`.
pub fn build_xxz(g: &Graph, d: f64, f: f64, mu_z: &[f64]) -> Result<Hamiltonian> {
    let n = g.n_vertices();
    check_qubits(n)?;
    if mu_z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: mu_z.len(),
        });
    }
    let dim = 1usize << n;
    let mut t = Vec::new();
    for e in g.edges() {
        let (mi, mj) = (mask(e.i, n), mask(e.j, n));
        for x in 0..dim {
            if (x & mi != 0) != (x & mj != 0) {
                t.push((x, x, Complex64::new(-e.weight * d, 0.0)));
                t.push((x ^ mi ^ mj, x, Complex64::new(-e.weight * f, 0.0)));
            }
        }
    }
    for (a, &mu) in mu_z.iter().enumerate() {
        let m = mask(a, n);
        for x in 0..dim {
            let z = if x & m == 0 { 1.0 } else { -1.0 };
            t.push((x, x, Complex64::new(-mu * z, 0.0)));
        }
    }
    t.push((0, 0, ZERO));
    Hamiltonian::from_csr(n, Csr::from_triplets(dim, t))
}

/// Suzuki-Fisher type Hamiltonian
/// `H = -Σ w_ij (Jx XX + Jy YY + Jz ZZ) - Σ_i (μx X + μy Y + μz Z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SfSpec {
    pub graph: Graph,
    /// `(Jx, Jy, Jz)` per edge, in the graph's edge order.
    pub couplings: Vec<[f64; 3]>,
    /// `(μx, μy, μz)` per vertex.
    pub fields: Vec<[f64; 3]>,
}

impl SfSpec {
    pub fn new(graph: Graph, couplings: Vec<[f64; 3]>, fields: Vec<[f64; 3]>) -> Result<Self> {
        if couplings.len() != graph.edges().len() {
            return Err(Error::DimensionMismatch {
                expected: graph.edges().len(),
                actual: couplings.len(),
            });
        }
        if fields.len() != graph.n_vertices() {
            return Err(Error::DimensionMismatch {
                expected: graph.n_vertices(),
                actual: fields.len(),
            });
        }
        Ok(SfSpec {
            graph,
            couplings,
            fields,
        })
    }

    /// Random instance satisfying the ferromagnetic dominance conditions.
    pub fn random<R: Rng>(graph: Graph, rng: &mut R) -> Self {
        let couplings = graph
            .edges()
            .iter()
            .map(|_| {
                let jz: f64 = rng.gen_range(0.1..1.5);
                [rng.gen_range(-jz..=jz), rng.gen_range(-jz..=jz), jz]
            })
            .collect();
        let fields = (0..graph.n_vertices())
            .map(|_| {
                [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.0..1.0),
                ]
            })
            .collect();
        SfSpec {
            graph,
            couplings,
            fields,
        }
    }

    /// `Jz ≥ max(|Jx|, |Jy|)` on every edge and `μz ≥ 0` on every vertex.
    pub fn is_suzuki_fisher(&self) -> bool {
        self.couplings.iter().all(|&[jx, jy, jz]| jz >= jx.abs().max(jy.abs()))
            && self.fields.iter().all(|f| f[2] >= 0.0)
    }

    pub fn is_particle_preserving(&self) -> bool {
        self.couplings.iter().all(|c| c[0] == c[1]) && self.fields.iter().all(|f| f[0] == 0.0 && f[1] == 0.0)
    }

    /// Certified Lee-Yang radius `min_i e^{β μz_i}` of the Gibbs operator,
    /// valid for particle-preserving Suzuki-Fisher specs.
    pub fn particle_preserving_radius(&self, beta: f64) -> Result<f64> {
        if !self.is_particle_preserving() {
            return invalid("radius formula needs Jx = Jy and vanishing transverse fields");
        }
        if !self.is_suzuki_fisher() {
            return invalid("radius formula needs a Suzuki-Fisher spec");
        }
        let mu: Vec<f64> = self.fields.iter().map(|f| f[2]).collect();
        sf_radius_particle_preserving(beta, &mu)
    }

    pub fn build(&self) -> Result<Hamiltonian> {
        let g = &self.graph;
        let n = g.n_vertices();
        check_qubits(n)?;
        let dim = 1usize << n;
        let mut t = Vec::new();
        for (e, &[jx, jy, jz]) in g.edges().iter().zip(&self.couplings) {
            let (mi, mj) = (mask(e.i, n), mask(e.j, n));
            let w = e.weight;
            for x in 0..dim {
                let par = if ((x & mi != 0) as u8 + (x & mj != 0) as u8).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                t.push((x, x, Complex64::new(-w * jz * par, 0.0)));
                // XX|x> = |x'>, YY|x> = -(-1)^{b_i+b_j}|x'>
                t.push((x ^ mi ^ mj, x, Complex64::new(-w * (jx - jy * par), 0.0)));
            }
        }
        for (a, &[mx, my, mz]) in self.fields.iter().enumerate() {
            let m = mask(a, n);
            for x in 0..dim {
                let b1 = x & m != 0;
                let z = if b1 { -1.0 } else { 1.0 };
                t.push((x, x, Complex64::new(-mz * z, 0.0)));
                // Y|0> = i|1>, Y|1> = -i|0>
                let y = Complex64::new(0.0, if b1 { -1.0 } else { 1.0 });
                t.push((x ^ m, x, -(Complex64::new(mx, 0.0) + my * y)));
            }
        }
        t.push((0, 0, ZERO));
        Hamiltonian::from_csr(n, Csr::from_triplets(dim, t))
    }
}

/// Family-level description of the supported Hamiltonians.
#[derive(Clone, Debug, PartialEq)]
pub enum HamiltonianSpec {
    SuzukiFisher(SfSpec),
    Xxz {
        graph: Graph,
        d: f64,
        f: f64,
        mu_z: Vec<f64>,
    },
    EprLike {
        graph: Graph,
        s: f64,
    },
    PhaseShifted {
        graph: Graph,
        s: f64,
    },
}

impl HamiltonianSpec {
    pub fn build(&self) -> Result<Hamiltonian> {
        match self {
            HamiltonianSpec::SuzukiFisher(spec) => spec.build(),
            HamiltonianSpec::Xxz { graph, d, f, mu_z } => build_xxz(graph, *d, *f, mu_z),
            HamiltonianSpec::EprLike { graph, s } => build_epr_like(graph, *s),
            HamiltonianSpec::PhaseShifted { graph, s } => build_phase_shifted(graph, *s),
        }
    }

    pub fn graph(&self) -> &Graph {
        match self {
            HamiltonianSpec::SuzukiFisher(spec) => &spec.graph,
            HamiltonianSpec::Xxz { graph, .. }
            | HamiltonianSpec::EprLike { graph, .. }
            | HamiltonianSpec::PhaseShifted { graph, .. } => graph,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Lowest eigenvalues of the even and odd Hamming-weight blocks.
/// Second eigenvalues are `None` when the block has a single state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorExtremes {
    pub lambda1_even: f64,
    pub lambda2_even: Option<f64>,
    pub lambda1_odd: f64,
    pub lambda2_odd: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralData {
    /// Ascending; the full spectrum when `full_spectrum`, otherwise the
    /// lowest eigenvalues found by Lanczos.
    pub eigenvalues: Vec<f64>,
    pub full_spectrum: bool,
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
    pub sectors: Option<SectorExtremes>,
    pub ground_sector: Option<Parity>,
    pub lambda2_sector: Option<Parity>,
    /// Unit ground vector, largest-modulus entry real positive.
    pub ground_vector: Vec<Complex64>,
    pub degeneracy_tol: f64,
    /// `‖H v - λ₁ v‖` of the returned ground vector.
    pub residual: f64,
    pub method: String,
}

impl SpectralData {
    pub fn ground_state(&self, n_qubits: usize) -> Result<StateTensor> {
        StateTensor::new(n_qubits, self.ground_vector.clone())
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gap > self.degeneracy_tol
    }
}

struct BlockResult {
    values: Vec<f64>,
    full: bool,
    ground: Vec<Complex64>,
    method: &'static str,
}

fn solve_block(m: &Csr) -> Result<BlockResult> {
    let dim = m.dim;
    if dim <= DENSE_BLOCK_CAP {
        let dense = m.to_dense();
        if m.is_real() {
            let sym = SymMatrix::from_rows(dim, dense.iter().map(|c| c.re).collect())?;
            let (values, u) = linalg::sym_lowest(&sym)?;
            Ok(BlockResult {
                values,
                full: true,
                ground: u.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
                method: "householder-ql",
            })
        } else {
            let (values, v) = linalg::hermitian_lowest(dim, &dense)?;
            Ok(BlockResult {
                values,
                full: true,
                ground: v,
                method: "householder-ql-embedded",
            })
        }
    } else {
        let (values, v) = linalg::lanczos_lowest(m, 2, 400, 1e-13)?;
        Ok(BlockResult {
            values,
            full: false,
            ground: v,
            method: "lanczos",
        })
    }
}

/// Multiplies by a phase so that the largest-modulus entry (lowest index on
/// ties) becomes real positive.
pub fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, c) in v.iter().enumerate() {
        let a = c.norm();
        if a > best_abs {
            best_abs = a;
            best = i;
        }
    }
    if best_abs > 0.0 {
        let ph = v[best].conj() / best_abs;
        v.iter_mut().for_each(|c| *c *= ph);
        v[best] = Complex64::new(v[best].norm(), 0.0);
    }
}

/// Spectrum, gap, parity-sector extremes and a phase-fixed ground vector.
pub fn spectral_data(h: &Hamiltonian) -> Result<SpectralData> {
    let n = h.n_qubits();
    let dim = h.dim();
    let tol = 1e-9 * h.norm_inf().max(1.0);
    let parity = h.commutes_with_parity() && n >= 1;
    let (eigenvalues, full, sectors, ground_sector, lambda2_sector, mut ground, method);
    if parity {
        let even: Vec<usize> = (0..dim).filter(|x| x.count_ones() % 2 == 0).collect();
        let odd: Vec<usize> = (0..dim).filter(|x| x.count_ones() % 2 == 1).collect();
        let be = solve_block(&h.csr().submatrix(&even))?;
        let bo = solve_block(&h.csr().submatrix(&odd))?;
        let ext = SectorExtremes {
            lambda1_even: be.values[0],
            lambda2_even: be.values.get(1).copied(),
            lambda1_odd: bo.values[0],
            lambda2_odd: bo.values.get(1).copied(),
        };
        let mut all: Vec<f64> = be.values.iter().chain(&bo.values).copied().collect();
        all.sort_by(f64::total_cmp);
        let gs = if ext.lambda1_even <= ext.lambda1_odd + tol {
            Parity::Even
        } else {
            Parity::Odd
        };
        let l2s = match gs {
            Parity::Even => match ext.lambda2_even {
                Some(l2e) if ext.lambda1_odd > l2e + tol => Parity::Even,
                _ => Parity::Odd,
            },
            Parity::Odd => match ext.lambda2_odd {
                Some(l2o) if ext.lambda1_even > l2o + tol => Parity::Odd,
                _ => Parity::Even,
            },
        };
        let (basis, vec) = match gs {
            Parity::Even => (&even, &be.ground),
            Parity::Odd => (&odd, &bo.ground),
        };
        let mut g = vec![ZERO; dim];
        for (&b, &c) in basis.iter().zip(vec) {
            g[b] = c;
        }
        full = be.full && bo.full;
        method = if be.method == bo.method {
            be.method.to_string()
        } else {
            format!("{}+{}", be.method, bo.method)
        };
        eigenvalues = all;
        sectors = Some(ext);
        ground_sector = Some(gs);
        lambda2_sector = Some(l2s);
        ground = g;
    } else {
        let b = solve_block(h.csr())?;
        full = b.full;
        method = b.method.to_string();
        eigenvalues = b.values;
        sectors = None;
        ground_sector = None;
        lambda2_sector = None;
        ground = b.ground;
    }
    fix_phase(&mut ground);
    let lambda1 = eigenvalues[0];
    let lambda2 = eigenvalues.get(1).copied().unwrap_or(f64::INFINITY);
    let hv = h.apply(&ground);
    let residual = hv
        .iter()
        .zip(&ground)
        .map(|(a, b)| (a - b * lambda1).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(SpectralData {
        eigenvalues,
        full_spectrum: full,
        lambda1,
        lambda2,
        gap: lambda2 - lambda1,
        sectors,
        ground_sector,
        lambda2_sector,
        ground_vector: ground,
        degeneracy_tol: tol,
        residual,
        method,
    })
}

/// `e^{-βH}` as an operator tensor, computed by eigendecomposition.
pub fn gibbs(h: &Hamiltonian, beta: f64) -> Result<OperatorTensor> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return invalid(format!("beta must be finite and nonnegative, got {beta}"));
    }
    let n = h.n_qubits();
    if n > MAX_GIBBS_QUBITS {
        return Err(Error::TooLarge {
            what: "number of qubits for a Gibbs operator",
            value: n,
            cap: MAX_GIBBS_QUBITS,
        });
    }
    let dim = h.dim();
    let dense = h.to_dense();
    let data: Vec<Complex64> = if h.is_real() {
        let sym = SymMatrix::from_rows(dim, dense.iter().map(|c| c.re).collect())?;
        let e = linalg::sym_eigen(&sym)?;
        let out = exp_from_eigen(dim, &e, beta);
        out.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
    } else {
        let emb = linalg::hermitian_embedding(dim, &dense);
        let e = linalg::sym_eigen(&emb)?;
        let big = exp_from_eigen(2 * dim, &e, beta);
        let n2 = 2 * dim;
        (0..dim * dim)
            .map(|k| {
                let (i, j) = (k / dim, k % dim);
                Complex64::new(big[i * n2 + j], big[(i + dim) * n2 + j])
            })
            .collect()
    };
    OperatorTensor::from_matrix(n, data)?.checked_hermitian(1e-10)
}

fn exp_from_eigen(dim: usize, e: &linalg::SymEigen, beta: f64) -> Vec<f64> {
    let v = e.vectors.as_ref().expect("eigenvectors requested");
    let w: Vec<f64> = e.values.iter().map(|&l| (-beta * l).exp()).collect();
    let mut out = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let s: f64 = (0..dim).map(|k| v[i * dim + k] * w[k] * v[j * dim + k]).sum();
            out[i * dim + j] = s;
            out[j * dim + i] = s;
        }
    }
    out
}

/// Closed-form star-graph quantities `(λ₁ᵉ, λ₂ᵉ, λ₁ᵒ, gap)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarSpectrum {
    pub lambda1_even: f64,
    pub lambda2_even: f64,
    pub lambda1_odd: f64,
    pub gap: f64,
}

pub fn star_spectrum_analytic(n: usize, s: f64) -> Result<StarSpectrum> {
    if n < 3 {
        return invalid("the star closed form needs n >= 3");
    }
    if !(0.0..1.0).contains(&s) {
        return invalid(format!("the star closed form needs 0 <= s < 1, got {s}"));
    }
    let nf = n as f64;
    let s2 = s * s;
    Ok(StarSpectrum {
        lambda1_even: -(nf - 1.0 + s2),
        lambda2_even: -(nf - 3.0 + 3.0 * s2),
        lambda1_odd: -(nf - 2.0 + 2.0 * s2),
        gap: 1.0 - s2,
    })
}

/// Lee-Yang radius of `e^{-βH_s}` for a single edge:
/// `s^{-1/2} [(1 + s² e^{-β(1+s²)}) / (1 + s^{-2} e^{-β(1+s²)})]^{1/4}`.
/// Returns `+∞` for `s = 0`.
pub fn gibbs_radius_n2(beta: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    if !(beta >= 0.0) || !beta.is_finite() {
        return invalid(format!("beta must be finite and nonnegative, got {beta}"));
    }
    if s == 0.0 {
        return Ok(f64::INFINITY);
    }
    let e = (-beta * (1.0 + s * s)).exp();
    Ok(s.powf(-0.5) * ((1.0 + s * s * e) / (1.0 + e / (s * s))).powf(0.25))
}

/// `min_i e^{β μz_i}`.
pub fn sf_radius_particle_preserving(beta: f64, mu_z: &[f64]) -> Result<f64> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return invalid(format!("beta must be finite and nonnegative, got {beta}"));
    }
    if mu_z.is_empty() {
        return invalid("need at least one field value");
    }
    Ok(mu_z.iter().map(|&m| (beta * m).exp()).fold(f64::INFINITY, f64::min))
}
