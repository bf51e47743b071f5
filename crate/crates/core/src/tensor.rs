//! Dense tensors with binary indices.
//!
//! A tensor with `n` binary indices is stored as a flat vector of `2^n`
//! complex amplitudes. Index `a` (0-based) of the tensor corresponds to bit
//! `n - 1 - a` of the flat position, i.e. the first index is the most
//! significant bit and `|x_1 x_2 ... x_n>` reads left to right.
//!
//! Operators on `m` qubits are stored as tensors on `2m` indices with the
//! bra (row) indices first: flat position `x * 2^m + y` holds `<x|A|y>`.
//! No conjugation is applied to the bra indices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest number of binary indices a dense tensor may carry.
pub const MAX_INDICES: usize = 28;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Bit value of tensor index `a` inside flat position `x` for an `n`-index tensor.
#[inline]
pub fn bit(x: usize, a: usize, n: usize) -> usize {
    (x >> (n - 1 - a)) & 1
}

/// Parses a bit string such as `"0110"` into a vector of bits.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => invalid(format!("bit string contains {c:?}")),
        })
        .collect()
}

/// Flat index of a bit string (first bit most significant).
pub fn bits_to_index(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1))
}

/// Bit string of flat index `x` with `n` bits (first bit most significant).
pub fn index_to_bits(x: usize, n: usize) -> Vec<u8> {
    (0..n).map(|a| bit(x, a, n) as u8).collect()
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_INDICES {
        return Err(Error::TooLarge {
            what: "number of tensor indices",
            value: n,
            cap: MAX_INDICES,
        });
    }
    Ok(())
}

/// Dense complex tensor with `n` binary indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorDoc", into = "TensorDoc")]
pub struct StateTensor {
    n: usize,
    amps: Vec<Complex64>,
}

/// JSON layout `{n, amplitudes: [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct TensorDoc {
    n: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<TensorDoc> for StateTensor {
    type Error = Error;

    fn try_from(doc: TensorDoc) -> Result<Self> {
        let amps = doc
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        StateTensor::new(doc.n, amps)
    }
}

impl From<StateTensor> for TensorDoc {
    fn from(t: StateTensor) -> Self {
        TensorDoc {
            n: t.n,
            amplitudes: t.amps.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl StateTensor {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if amps.len() != 1usize << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: amps.len(),
            });
        }
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("tensor amplitudes"));
        }
        Ok(StateTensor { n, amps })
    }

    pub fn from_real(n: usize, amps: &[f64]) -> Result<Self> {
        Self::new(n, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(StateTensor {
            n,
            amps: vec![Complex64::new(0.0, 0.0); 1 << n],
        })
    }

    /// Computational basis tensor `|x>`.
    pub fn basis(n: usize, x: usize) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        if x >= t.amps.len() {
            return Err(Error::InvalidIndex { index: x, n });
        }
        t.amps[x] = Complex64::new(1.0, 0.0);
        Ok(t)
    }

    pub fn scalar(c: Complex64) -> Self {
        StateTensor { n: 0, amps: vec![c] }
    }

    /// Product state `⊗_a (u_a|0> + v_a|1>)`.
    pub fn product(factors: &[[Complex64; 2]]) -> Result<Self> {
        let n = factors.len();
        check_size(n)?;
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            amps = amps.iter().flat_map(|&a| [a * f[0], a * f[1]]).collect();
        }
        Self::new(n, amps)
    }

    #[inline]
    pub fn n_indices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    #[inline]
    pub fn get(&self, x: usize) -> Complex64 {
        self.amps[x]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ_x |ψ_x|`, the scale used by the falsification tolerance.
    pub fn abs_sum(&self) -> f64 {
        self.amps.iter().map(|c| c.norm()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.amps.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every entry is exactly zero (e.g. a vanishing contraction).
    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// True when the norm is at most `tol`.
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    pub fn scale(&self, c: Complex64) -> Self {
        StateTensor {
            n: self.n,
            amps: self.amps.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let nrm = self.norm();
        if nrm == 0.0 {
            return invalid("cannot normalize the zero tensor");
        }
        Ok(self.scale(Complex64::new(1.0 / nrm, 0.0)))
    }

    pub fn conj(&self) -> Self {
        StateTensor {
            n: self.n,
            amps: self.amps.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Self::new(self.n, self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect())
    }

    /// `<self|other>` with the conjugate on `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Generating polynomial `f(z) = Σ_x ψ_x Π_{a ∈ supp(x)} z_a`.
    pub fn eval_gen_poly(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: z.len(),
            });
        }
        if self.n == 0 {
            return Ok(self.amps[0]);
        }
        // Fold the least significant index first.
        let mut buf: Vec<Complex64> = self.amps.chunks_exact(2).map(|p| p[0] + z[self.n - 1] * p[1]).collect();
        for a in (0..self.n - 1).rev() {
            let za = z[a];
            let half = buf.len() / 2;
            for k in 0..half {
                buf[k] = buf[2 * k] + za * buf[2 * k + 1];
            }
            buf.truncate(half);
        }
        Ok(buf[0])
    }

    /// `a ⊗ b`: indices of `a` first, then those of `b`.
    pub fn tensor_product(&self, other: &Self) -> Result<Self> {
        let n = self.n + other.n;
        check_size(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for &a in &self.amps {
            amps.extend(other.amps.iter().map(|&b| a * b));
        }
        Ok(StateTensor { n, amps })
    }

    /// Sums over the diagonal `x_i = x_j` and removes both indices.
    ///
    /// The result may be the all-zero tensor; check with [`StateTensor::is_zero`].
    pub fn contract_pair(&self, i: usize, j: usize) -> Result<Self> {
        let n = self.n;
        for idx in [i, j] {
            if idx >= n {
                return Err(Error::InvalidIndex { index: idx, n });
            }
        }
        if i == j {
            return invalid("contract_pair needs two distinct indices");
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << (n - 2)];
        for (y, slot) in out.iter_mut().enumerate() {
            let base = insert_zero_bit(insert_zero_bit(y, lo, n - 1), hi, n);
            let both = base | (1 << (n - 1 - lo)) | (1 << (n - 1 - hi));
            *slot = self.amps[base] + self.amps[both];
        }
        Ok(StateTensor { n: n - 2, amps: out })
    }

    /// Multiplies entry `x` by `Π_{a ∈ supp(x)} s_a`, i.e. applies
    /// `diag(1, s_a)` to every index.
    pub fn diag_scale(&self, s: &[f64]) -> Result<Self> {
        if s.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: s.len(),
            });
        }
        if let Some(bad) = s.iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
            return invalid(format!("scale factors must be positive and finite, got {bad}"));
        }
        let mut weights = vec![1.0f64];
        for &sa in s {
            weights = weights.iter().flat_map(|&w| [w, w * sa]).collect();
        }
        let amps = self.amps.iter().zip(&weights).map(|(a, &w)| a * w).collect();
        Ok(StateTensor { n: self.n, amps })
    }

    /// Applies `<θ| = (<0| + e^{-iθ}<1|)/√2` to index `qubit` and drops it.
    pub fn equatorial_postselect(&self, qubit: usize, theta: f64) -> Result<Self> {
        let n = self.n;
        if qubit >= n {
            return Err(Error::InvalidIndex { index: qubit, n });
        }
        let phase = Complex64::from_polar(FRAC_1_SQRT_2, -theta);
        let w0 = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let mask = 1 << (n - 1 - qubit);
        let out = (0..1usize << (n - 1))
            .map(|y| {
                let x0 = insert_zero_bit(y, qubit, n);
                w0 * self.amps[x0] + phase * self.amps[x0 | mask]
            })
            .collect();
        Ok(StateTensor { n: n - 1, amps: out })
    }

    /// Applies the 2x2 matrix `m` (row-major, `m[out][in]`) to index `a`.
    pub fn apply_single(&self, a: usize, m: [[Complex64; 2]; 2]) -> Result<Self> {
        if a >= self.n {
            return Err(Error::InvalidIndex { index: a, n: self.n });
        }
        let mut amps = self.amps.clone();
        let stride = 1 << (self.n - 1 - a);
        for block in amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (p, q) = (*u, *v);
                *u = m[0][0] * p + m[0][1] * q;
                *v = m[1][0] * p + m[1][1] * q;
            }
        }
        Ok(StateTensor { n: self.n, amps })
    }

    /// `H^{⊗n}` applied to every index.
    pub fn hadamard_all(&self) -> Self {
        let mut amps = self.amps.clone();
        let mut stride = 1;
        while stride < amps.len() {
            for block in amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (p, q) = (*u, *v);
                    *u = p + q;
                    *v = p - q;
                }
            }
            stride *= 2;
        }
        let norm = 0.5f64.powf(self.n as f64 / 2.0);
        amps.iter_mut().for_each(|a| *a *= norm);
        StateTensor { n: self.n, amps }
    }

    /// `X^{⊗n}` applied to every index (reverses the flat order).
    pub fn flip_all(&self) -> Self {
        let mut amps = self.amps.clone();
        amps.reverse();
        StateTensor { n: self.n, amps }
    }
}

/// Inserts a zero bit at tensor index `a` into the `(n-1)`-bit value `y`,
/// producing an `n`-bit flat index.
#[inline]
fn insert_zero_bit(y: usize, a: usize, n: usize) -> usize {
    let p = n - 1 - a;
    let low = y & ((1 << p) - 1);
    ((y >> p) << (p + 1)) | low
}

/// Per-index radii of an open polydisk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MultiRadius(Vec<f64>);

impl MultiRadius {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
            return invalid(format!("radii must be positive and finite, got {r}"));
        }
        Ok(MultiRadius(radii))
    }

    pub fn uniform(n: usize, r: f64) -> Result<Self> {
        Self::new(vec![r; n])
    }

    pub fn radii(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for MultiRadius {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        MultiRadius::new(v)
    }
}

impl From<MultiRadius> for Vec<f64> {
    fn from(r: MultiRadius) -> Self {
        r.0
    }
}

/// An operator on `m` qubits viewed as a tensor on `2m` indices (bra first).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorTensor {
    n_qubits: usize,
    tensor: StateTensor,
    /// Set only after the Hermiticity check passed.
    hermitian: bool,
}

impl OperatorTensor {
    /// Wraps a `2m`-index tensor.
    pub fn from_tensor(tensor: StateTensor) -> Result<Self> {
        if !tensor.n_indices().is_multiple_of(2) {
            return invalid("operator tensors need an even number of indices");
        }
        Ok(OperatorTensor {
            n_qubits: tensor.n_indices() / 2,
            tensor,
            hermitian: false,
        })
    }

    /// Row-major `2^m x 2^m` matrix.
    pub fn from_matrix(n_qubits: usize, data: Vec<Complex64>) -> Result<Self> {
        let tensor = StateTensor::new(2 * n_qubits, data)?;
        Ok(OperatorTensor {
            n_qubits,
            tensor,
            hermitian: false,
        })
    }

    /// Like [`OperatorTensor::from_matrix`] but verifies Hermiticity to `tol`
    /// (relative to the largest entry) and sets the flag.
    pub fn from_hermitian_matrix(n_qubits: usize, data: Vec<Complex64>, tol: f64) -> Result<Self> {
        let op = Self::from_matrix(n_qubits, data)?;
        op.checked_hermitian(tol)
    }

    pub fn checked_hermitian(mut self, tol: f64) -> Result<Self> {
        let dev = self.hermiticity_deviation();
        if dev > tol * self.tensor.max_abs().max(1e-300) {
            return Err(Error::NotHermitian(dev));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(OperatorTensor {
            n_qubits,
            tensor: StateTensor::new(2 * n_qubits, data)?,
            hermitian: true,
        })
    }

    /// `|a><b|`.
    pub fn outer(a: &StateTensor, b: &StateTensor) -> Result<Self> {
        if a.n_indices() != b.n_indices() {
            return Err(Error::DimensionMismatch {
                expected: a.n_indices(),
                actual: b.n_indices(),
            });
        }
        let t = a.tensor_product(&b.conj())?;
        Self::from_tensor(t)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn is_hermitian_flagged(&self) -> bool {
        self.hermitian
    }

    /// Vectorized view: the `2m`-index tensor.
    pub fn vectorized(&self) -> &StateTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> StateTensor {
        self.tensor
    }

    #[inline]
    pub fn entry(&self, x: usize, y: usize) -> Complex64 {
        self.tensor.amps[x * self.dim() + y]
    }

    /// Row-major matrix data.
    pub fn matrix(&self) -> &[Complex64] {
        &self.tensor.amps
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut dev = 0.0f64;
        for x in 0..d {
            for y in x..d {
                dev = dev.max((self.entry(x, y) - self.entry(y, x).conj()).norm());
            }
        }
        dev
    }

    pub fn dagger(&self) -> Self {
        let d = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for x in 0..d {
            for y in 0..d {
                data[y * d + x] = self.entry(x, y).conj();
            }
        }
        OperatorTensor {
            n_qubits: self.n_qubits,
            tensor: StateTensor {
                n: self.tensor.n,
                amps: data,
            },
            hermitian: self.hermitian,
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let d = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for x in 0..d {
            let row = &mut data[x * d..(x + 1) * d];
            for k in 0..d {
                let a = self.entry(x, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.tensor.amps[k * d..(k + 1) * d];
                for (r, b) in row.iter_mut().zip(brow) {
                    *r += a * b;
                }
            }
        }
        Self::from_matrix(self.n_qubits, data)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|x| self.entry(x, x)).sum()
    }

    pub fn apply_to_state(&self, psi: &StateTensor) -> Result<StateTensor> {
        if psi.n_indices() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: psi.n_indices(),
            });
        }
        let d = self.dim();
        let amps = (0..d)
            .map(|x| {
                self.tensor.amps[x * d..(x + 1) * d]
                    .iter()
                    .zip(psi.amplitudes())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        StateTensor::new(self.n_qubits, amps)
    }

    /// Kronecker product `A ⊗ B` as an operator on `m_A + m_B` qubits.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let m = self.n_qubits + other.n_qubits;
        check_size(2 * m)?;
        let (da, db) = (self.dim(), other.dim());
        let d = da * db;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for xa in 0..da {
            for ya in 0..da {
                let a = self.entry(xa, ya);
                for xb in 0..db {
                    for yb in 0..db {
                        data[(xa * db + xb) * d + ya * db + yb] = a * other.entry(xb, yb);
                    }
                }
            }
        }
        let mut op = Self::from_matrix(m, data)?;
        op.hermitian = self.hermitian && other.hermitian;
        Ok(op)
    }

    /// Traces out all qubits after the first `keep`.
    pub fn partial_trace_tail(&self, keep: usize) -> Result<Self> {
        if keep > self.n_qubits {
            return Err(Error::InvalidIndex {
                index: keep,
                n: self.n_qubits,
            });
        }
        let dk = 1usize << keep;
        let dr = 1usize << (self.n_qubits - keep);
        let d = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); dk * dk];
        for x in 0..dk {
            for y in 0..dk {
                data[x * dk + y] = (0..dr).map(|z| self.tensor.amps[(x * dr + z) * d + y * dr + z]).sum();
            }
        }
        let mut op = Self::from_matrix(keep, data)?;
        op.hermitian = self.hermitian;
        Ok(op)
    }

    /// Conjugation `U A U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.dagger())
    }
}

/// Single-qubit `|θ> = (|0> + e^{iθ}|1>)/√2`.
pub fn theta_state(theta: f64) -> StateTensor {
    StateTensor {
        n: 1,
        amps: vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::from_polar(FRAC_1_SQRT_2, theta),
        ],
    }
}
