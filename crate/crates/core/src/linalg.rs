//! Self-contained eigensolvers for real symmetric and complex Hermitian
//! matrices, plus a small CSR type with a Lanczos extreme-eigenvalue solver.
//!
//! Dense real symmetric problems use Householder tridiagonalization followed
//! by implicit-shift QL. Complex Hermitian matrices `A + iB` are handled
//! through the real symmetric embedding `[[A, -B], [B, A]]`, whose spectrum
//! is that of the Hermitian matrix with every eigenvalue doubled.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

const QL_MAX_SWEEPS: usize = 60;

/// Row-major dense real symmetric matrix (only the values, no symmetry check).
#[derive(Clone, Debug)]
pub struct SymMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: data.len(),
            });
        }
        Ok(SymMatrix { n, data })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn asymmetry(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                dev = dev.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        dev
    }
}

/// Householder reduction `A = Q T Q^T` with the reflectors kept for
/// back-transformation of selected eigenvectors.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    /// Reflector `k` acts on components `k+1..n`; `None` when skipped.
    reflectors: Vec<Option<Vec<f64>>>,
}

fn tridiagonalize(m: &SymMatrix) -> Tridiagonal {
    let n = m.n;
    let mut a = m.data.clone();
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let mut v: Vec<f64> = (0..len).map(|i| a[(k + 1 + i) * n + k]).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let tail = v[1..].iter().map(|x| x * x).sum::<f64>();
        if norm == 0.0 || tail == 0.0 {
            reflectors.push(None);
            continue;
        }
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= vn);
        // p = 2 A' v, w = p - (v^T p) v, A' -= v w^T + w v^T
        let off = k + 1;
        let mut p = vec![0.0; len];
        for i in 0..len {
            let row = &a[(off + i) * n + off..(off + i) * n + n];
            p[i] = 2.0 * row.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>();
        }
        let kk = v.iter().zip(&p).map(|(x, y)| x * y).sum::<f64>();
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk * vi).collect();
        for i in 0..len {
            let row = &mut a[(off + i) * n + off..(off + i) * n + n];
            for j in 0..len {
                row[j] -= v[i] * w[j] + w[i] * v[j];
            }
        }
        a[(k + 1) * n + k] = alpha;
        a[k * n + k + 1] = alpha;
        for i in k + 2..n {
            a[i * n + k] = 0.0;
            a[k * n + i] = 0.0;
        }
        reflectors.push(Some(v));
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    let mut off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| a[(i + 1) * n + i]).collect();
    off.push(0.0);
    Tridiagonal { diag, off, reflectors }
}

impl Tridiagonal {
    /// Maps an eigenvector of `T` to one of `A`.
    fn back_transform(&self, u: &mut [f64]) {
        for (k, r) in self.reflectors.iter().enumerate().rev() {
            if let Some(v) = r {
                let seg = &mut u[k + 1..];
                let dot = 2.0 * seg.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
                for (x, y) in seg.iter_mut().zip(v) {
                    *x -= dot * y;
                }
            }
        }
    }

    /// Dense orthogonal `Q` (row-major) with `A = Q T Q^T`.
    fn q_matrix(&self) -> Vec<f64> {
        let n = self.diag.len();
        let mut q = vec![0.0; n * n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            col.iter_mut().for_each(|x| *x = 0.0);
            col[j] = 1.0;
            self.back_transform(&mut col);
            for i in 0..n {
                q[i * n + j] = col[i];
            }
        }
        q
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. `e[i]` couples
/// `d[i]` and `d[i+1]`; `e[n-1]` is ignored. When `z` is given (row-major
/// `n x n`), the rotations are accumulated into its columns.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_SWEEPS {
                return Err(Error::NonConvergence {
                    iterations: iter,
                    max_step: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zz) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = zz[k * n + i + 1];
                        zz[k * n + i + 1] = s * zz[k * n + i] + c * f;
                        zz[k * n + i] = c * zz[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues (ascending) and optionally eigenvectors of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Row-major `n x n`; column `j` is the eigenvector of `values[j]`.
    pub vectors: Option<Vec<f64>>,
}

impl SymEigen {
    pub fn vector(&self, j: usize) -> Option<Vec<f64>> {
        let n = self.values.len();
        self.vectors.as_ref().map(|v| (0..n).map(|i| v[i * n + j]).collect())
    }
}

fn sort_eigen(values: Vec<f64>, vectors: Option<Vec<f64>>) -> SymEigen {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let vectors = vectors.map(|v| {
        let mut out = vec![0.0; n * n];
        for (new_j, &old_j) in order.iter().enumerate() {
            for i in 0..n {
                out[i * n + new_j] = v[i * n + old_j];
            }
        }
        out
    });
    SymEigen {
        values: sorted,
        vectors,
    }
}

/// Full eigendecomposition of a real symmetric matrix.
pub fn sym_eigen(m: &SymMatrix) -> Result<SymEigen> {
    let t = tridiagonalize(m);
    let mut z = t.q_matrix();
    let (mut d, mut e) = (t.diag, t.off);
    tql(&mut d, &mut e, Some(&mut z))?;
    Ok(sort_eigen(d, Some(z)))
}

/// Eigenvalues only, ascending.
pub fn sym_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    let t = tridiagonalize(m);
    let (mut d, mut e) = (t.diag, t.off);
    tql(&mut d, &mut e, None)?;
    Ok(sort_eigen(d, None).values)
}

/// Eigenvalues (ascending) plus a unit eigenvector of the smallest one,
/// obtained by inverse iteration on the tridiagonal form.
pub fn sym_lowest(m: &SymMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = m.n;
    if n == 0 {
        return invalid("empty matrix");
    }
    let t = tridiagonalize(m);
    let (mut d, mut e) = (t.diag.clone(), t.off.clone());
    tql(&mut d, &mut e, None)?;
    let values = sort_eigen(d, None).values;
    let mut u = tridiagonal_inverse_iteration(&t.diag, &t.off, values[0]);
    t.back_transform(&mut u);
    let nrm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    u.iter_mut().for_each(|x| *x /= nrm);
    Ok((values, u))
}

/// Inverse iteration `(T - λ) x_{k+1} = x_k` with partial pivoting.
fn tridiagonal_inverse_iteration(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![1.0];
    }
    let tnorm = diag
        .iter()
        .zip(off)
        .map(|(a, b)| a.abs() + 2.0 * b.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * tnorm;
    // LU with partial pivoting of the tridiagonal T - λI: U has up to two
    // superdiagonals, L is unit lower bidiagonal with row swaps recorded.
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut mult = vec![0.0; n];
    let mut swapped = vec![false; n];
    let mut a = diag[0] - lambda;
    let mut b = off[0];
    for k in 0..n - 1 {
        let (c, dn, en) = (
            off[k],
            diag[k + 1] - lambda,
            if k + 1 < n - 1 { off[k + 1] } else { 0.0 },
        );
        if c.abs() > a.abs() {
            swapped[k] = true;
            u0[k] = c;
            u1[k] = dn;
            u2[k] = en;
            let l = if c == 0.0 { 0.0 } else { a / c };
            mult[k] = l;
            a = b - l * dn;
            b = -l * en;
        } else {
            let piv = if a == 0.0 { tiny } else { a };
            u0[k] = piv;
            u1[k] = b;
            u2[k] = 0.0;
            let l = c / piv;
            mult[k] = l;
            a = dn - l * b;
            b = en;
        }
    }
    u0[n - 1] = if a.abs() < tiny {
        tiny.copysign(if a == 0.0 { 1.0 } else { a })
    } else {
        a
    };
    for k in 0..n - 1 {
        if u0[k].abs() < tiny {
            u0[k] = tiny.copysign(if u0[k] == 0.0 { 1.0 } else { u0[k] });
        }
    }
    // Deterministic start vector with no special structure.
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    for _ in 0..4 {
        // Forward: apply L^{-1} with the recorded swaps.
        for k in 0..n - 1 {
            if swapped[k] {
                x.swap(k, k + 1);
            }
            x[k + 1] -= mult[k] * x[k];
        }
        // Backward: solve U x = y.
        for k in (0..n).rev() {
            let mut s = x[k];
            if k + 1 < n {
                s -= u1[k] * x[k + 1];
            }
            if k + 2 < n {
                s -= u2[k] * x[k + 2];
            }
            x[k] = s / u0[k];
        }
        let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !nrm.is_finite() || nrm == 0.0 {
            break;
        }
        x.iter_mut().for_each(|v| *v /= nrm);
    }
    x
}

/// Cyclic Jacobi eigenvalues, kept as an independent check on the QL path.
pub fn jacobi_eigenvalues(m: &SymMatrix) -> Vec<f64> {
    let n = m.n;
    let mut a = m.data.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut v: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Real symmetric embedding `[[A, -B], [B, A]]` of `A + iB` (row-major input).
pub fn hermitian_embedding(dim: usize, h: &[Complex64]) -> SymMatrix {
    let n2 = 2 * dim;
    let mut m = SymMatrix::zeros(n2);
    for i in 0..dim {
        for j in 0..dim {
            let z = h[i * dim + j];
            m.data[i * n2 + j] = z.re;
            m.data[(i + dim) * n2 + j + dim] = z.re;
            m.data[i * n2 + j + dim] = -z.im;
            m.data[(i + dim) * n2 + j] = z.im;
        }
    }
    m
}

/// Eigenvalues of a complex Hermitian matrix via the real embedding.
pub fn hermitian_eigenvalues(dim: usize, h: &[Complex64]) -> Result<Vec<f64>> {
    let vals = sym_eigenvalues(&hermitian_embedding(dim, h))?;
    Ok(vals.into_iter().step_by(2).collect())
}

/// Eigenvalues and a unit lowest eigenvector of a complex Hermitian matrix.
pub fn hermitian_lowest(dim: usize, h: &[Complex64]) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let (vals, u) = sym_lowest(&hermitian_embedding(dim, h))?;
    let mut v: Vec<Complex64> = (0..dim).map(|i| Complex64::new(u[i], u[i + dim])).collect();
    let nrm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|c| *c /= nrm);
    Ok((vals.into_iter().step_by(2).collect(), v))
}

/// Compressed sparse row matrix with complex entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Csr {
    pub dim: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<Complex64>,
}

impl Csr {
    /// Builds from unsorted `(row, col, value)` triplets, summing duplicates
    /// and dropping exact zeros.
    pub fn from_triplets(dim: usize, mut t: Vec<(usize, usize, Complex64)>) -> Self {
        t.sort_by_key(|a| (a.0, a.1));
        let mut indptr = vec![0usize; dim + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(t.len());
        let mut rows = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            if let (Some(&lr), Some(&lc)) = (rows.last(), indices.last()) {
                if lr == r && lc == c {
                    *values.last_mut().unwrap() += v;
                    continue;
                }
            }
            rows.push(r);
            indices.push(c);
            values.push(v);
        }
        let keep: Vec<bool> = values.iter().map(|v| v.re != 0.0 || v.im != 0.0).collect();
        let mut fr = Vec::new();
        let mut fi = Vec::new();
        let mut fv = Vec::new();
        for k in 0..values.len() {
            if keep[k] {
                fr.push(rows[k]);
                fi.push(indices[k]);
                fv.push(values[k]);
            }
        }
        for &r in &fr {
            indptr[r + 1] += 1;
        }
        for i in 0..dim {
            indptr[i + 1] += indptr[i];
        }
        Csr {
            dim,
            indptr,
            indices: fi,
            values: fv,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.indptr[i]..self.indptr[i + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.row(i)
            .find(|&(c, _)| c == j)
            .map(|(_, v)| v)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut d = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                d[i * self.dim + j] = v;
            }
        }
        d
    }

    /// Largest `|A_ij - conj(A_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                dev = dev.max((v - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Principal submatrix on the given (sorted) basis states.
    pub fn submatrix(&self, basis: &[usize]) -> Csr {
        let mut pos = vec![usize::MAX; self.dim];
        for (k, &b) in basis.iter().enumerate() {
            pos[b] = k;
        }
        let mut t = Vec::new();
        for (k, &b) in basis.iter().enumerate() {
            for (j, v) in self.row(b) {
                if pos[j] != usize::MAX {
                    t.push((k, pos[j], v));
                }
            }
        }
        Csr::from_triplets(basis.len(), t)
    }
}

/// Lowest eigenpairs of a sparse Hermitian matrix by Lanczos with full
/// reorthogonalization. Returns the `k` smallest Ritz values and the lowest
/// Ritz vector.
pub fn lanczos_lowest(a: &Csr, k: usize, max_dim: usize, tol: f64) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let n = a.dim;
    if n == 0 {
        return invalid("empty matrix");
    }
    let m_cap = max_dim.min(n);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m_cap);
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut q: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.37 * ((i * 2654435761usize) % 97) as f64 / 97.0, 0.0))
        .collect();
    let nrm = q.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    q.iter_mut().for_each(|c| *c /= nrm);
    let scale = a.norm_inf().max(1.0);
    let mut prev_ritz: Vec<f64> = Vec::new();
    loop {
        let mut w = a.matvec(&q);
        let al: f64 = q.iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum();
        basis.push(q.clone());
        alpha.push(al);
        // Full reorthogonalization, twice for stability.
        for _ in 0..2 {
            for b in &basis {
                let proj: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let bnorm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let j = alpha.len();
        let mut td = SymMatrix::zeros(j);
        for i in 0..j {
            td.set(i, i, alpha[i]);
            if i + 1 < j {
                td.set(i, i + 1, beta[i]);
                td.set(i + 1, i, beta[i]);
            }
        }
        let eig = sym_eigen(&td)?;
        let want = k.min(j);
        let ritz: Vec<f64> = eig.values[..want].to_vec();
        let stalled = bnorm <= 1e-12 * scale || j >= m_cap;
        let settled = want == k
            && prev_ritz.len() == want
            && ritz.iter().zip(&prev_ritz).all(|(a, b)| (a - b).abs() <= tol * scale)
            && {
                // Residual of the lowest Ritz pair: |β_j · last component|.
                let y = eig.vector(0).unwrap();
                (bnorm * y[j - 1]).abs() <= tol * scale
            };
        if stalled || settled {
            let y = eig.vector(0).unwrap();
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            for (c, b) in y.iter().zip(&basis) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += *c * bi;
                }
            }
            let nv = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|c| *c /= nv);
            return Ok((ritz, v));
        }
        prev_ritz = ritz;
        beta.push(bnorm);
        q = w.into_iter().map(|c| c / bnorm).collect();
    }
}
