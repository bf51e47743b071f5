//! First-order Trotter circuits for XXZ partition functions and their
//! six-vertex model on the 4-regular graph of the traced circuit.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Largest edge count for the `2^{|E|}` enumeration.
pub const MAX_SIX_VERTEX_EDGES: usize = 24;
/// Largest qubit count for the dense trace.
pub const MAX_TRACE_QUBITS: usize = 10;

const CHUNK: usize = 1 << 16;
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A two-qubit gate; `matrix[row][col]` in the basis `|x_{q1} x_{q2}>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub q1: usize,
    pub q2: usize,
    pub matrix: [[Complex64; 4]; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterCircuit {
    pub n_qubits: usize,
    /// Applied first to last: the circuit is `G_J ⋯ G_1`.
    pub gates: Vec<Gate>,
    pub delta: f64,
    pub d: f64,
    pub f: f64,
    pub beta: Option<f64>,
}

/// `e^{δh}` for `h = ½(f(XX + YY) + d(I − ZZ))`.
pub fn xxz_gate_matrix(d: f64, f: f64, delta: f64) -> [[Complex64; 4]; 4] {
    let c = |v: f64| Complex64::new(v, 0.0);
    let diag = (delta * d).exp() * (delta * f).cosh();
    let off = (delta * d).exp() * (delta * f).sinh();
    [
        [c(1.0), ZERO, ZERO, ZERO],
        [ZERO, c(diag), c(off), ZERO],
        [ZERO, c(off), c(diag), ZERO],
        [ZERO, ZERO, ZERO, c(1.0)],
    ]
}

impl TrotterCircuit {
    /// Circuit of XXZ gates `e^{δh}` on the given qubit pairs, in order.
    pub fn from_pairs(n_qubits: usize, pairs: &[(usize, usize)], d: f64, f: f64, delta: f64) -> Result<Self> {
        let matrix = xxz_gate_matrix(d, f, delta);
        let mut gates = Vec::with_capacity(pairs.len());
        for &(q1, q2) in pairs {
            if q1 == q2 {
                return invalid(format!("gate on qubit {q1} twice"));
            }
            if q1.max(q2) >= n_qubits {
                return Err(Error::InvalidIndex {
                    index: q1.max(q2),
                    n: n_qubits,
                });
            }
            gates.push(Gate { q1, q2, matrix });
        }
        Ok(TrotterCircuit {
            n_qubits,
            gates,
            delta,
            d,
            f,
            beta: None,
        })
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `(a, b, c) = (1, t, t + e^{δ(d−f)})` with `t = e^{δd} sinh(δf)`.
    pub fn params(&self) -> SixVertexParams {
        SixVertexParams::from_xxz(self.d, self.f, self.delta)
    }
}

/// First-order Trotter circuit for `tr e^{−βH}`, `H = −Σ_{(i,j)∈E} h_ij`:
/// `J/|E|` passes over the edges in order, each gate `e^{δh}` with
/// `δ = β|E|/J`.
pub fn trotterize(g: &Graph, d: f64, f: f64, beta: f64, steps: usize) -> Result<TrotterCircuit> {
    if !(f > 0.0) {
        return invalid(format!("the six-vertex mapping needs f > 0, got {f}"));
    }
    if !g.is_uniform() || g.edges().iter().any(|e| e.theta != 0.0) {
        return invalid("trotterization needs unit weights and zero phases");
    }
    let m = g.edges().len();
    if m == 0 {
        return invalid("the graph has no edges");
    }
    if steps == 0 || !steps.is_multiple_of(m) {
        return invalid(format!(
            "steps ({steps}) must be a positive multiple of the edge count ({m})"
        ));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return invalid(format!("beta must be finite and nonnegative, got {beta}"));
    }
    let delta = beta * m as f64 / steps as f64;
    let pairs: Vec<(usize, usize)> = g.pairs().into_iter().cycle().take(steps).collect();
    let mut c = TrotterCircuit::from_pairs(g.n_vertices(), &pairs, d, f, delta)?;
    c.beta = Some(beta);
    Ok(c)
}

/// `tr(G_J ⋯ G_1)` by dense multiplication.
pub fn trotter_trace(c: &TrotterCircuit) -> Result<Complex64> {
    let n = c.n_qubits;
    if n > MAX_TRACE_QUBITS {
        return Err(Error::TooLarge {
            what: "qubits for the dense trace",
            value: n,
            cap: MAX_TRACE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut m = vec![ZERO; dim * dim];
    for i in 0..dim {
        m[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    for g in &c.gates {
        let (s1, s2) = (n - 1 - g.q1, n - 1 - g.q2);
        let (m1, m2) = (1usize << s1, 1usize << s2);
        for x in 0..dim {
            if x & m1 != 0 || x & m2 != 0 {
                continue;
            }
            let rows = [x, x | m2, x | m1, x | m1 | m2];
            for col in 0..dim {
                let old = rows.map(|r| m[r * dim + col]);
                for (k, &r) in rows.iter().enumerate() {
                    m[r * dim + col] = (0..4).map(|l| g.matrix[k][l] * old[l]).sum();
                }
            }
        }
    }
    Ok((0..dim).map(|i| m[i * dim + i]).sum())
}

/// Six-vertex weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SixVertexParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SixVertexParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if [a, b, c].iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return invalid(format!(
                "six-vertex weights must be finite and nonnegative, got ({a}, {b}, {c})"
            ));
        }
        Ok(SixVertexParams { a, b, c })
    }

    pub fn from_xxz(d: f64, f: f64, delta: f64) -> Self {
        let t = (delta * d).exp() * (delta * f).sinh();
        SixVertexParams {
            a: 1.0,
            b: t,
            c: t + (delta * (d - f)).exp(),
        }
    }

    pub fn regime(&self) -> Regime {
        let (a2, b2, c2) = (self.a * self.a, self.b * self.b, self.c * self.c);
        if a2 <= b2 + c2 && b2 <= a2 + c2 && c2 <= a2 + b2 {
            Regime::Tractable
        } else if self.a > self.b + self.c || self.b > self.a + self.c || self.c > self.a + self.b {
            Regime::Hard
        } else {
            Regime::Unknown
        }
    }
}

/// Approximability of `Z(Γ, a, b, c)` on 4-regular graphs: the triangle
/// conditions on squares admit a rapidly mixing chain, a weight exceeding
/// the sum of the other two is NP-hard to approximate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Tractable,
    Hard,
    Unknown,
}

/// Vertex types by the orientation pattern around a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexType {
    /// `00 → 00` or `11 → 11`, weight `a`.
    Straight,
    /// `01 → 10` or `10 → 01`, weight `b`.
    Swap,
    /// `01 → 01` or `10 → 10`, weight `c`.
    Turn,
}

/// Type of a vertex with output bits `(x_{e1}, x_{e2})` and input bits
/// `(x_{e3}, x_{e4})`, or `None` when the orientation is not Eulerian there.
pub fn vertex_type(out: (u8, u8), inp: (u8, u8)) -> Option<VertexType> {
    match (out, inp) {
        ((0, 0), (0, 0)) | ((1, 1), (1, 1)) => Some(VertexType::Straight),
        ((0, 1), (1, 0)) | ((1, 0), (0, 1)) => Some(VertexType::Swap),
        ((0, 1), (0, 1)) | ((1, 0), (1, 0)) => Some(VertexType::Turn),
        _ => None,
    }
}

/// One port of a vertex: slots 0 and 1 are the outputs on the first and
/// second qubit of the gate, slots 2 and 3 the inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Port {
    pub vertex: usize,
    pub slot: usize,
}

/// A 4-regular multigraph with ordered half-edges. Edge `k` runs forward
/// in time from `edges[k].0` (an output slot) to `edges[k].1` (an input slot).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeOrderedGraph {
    pub n_vertices: usize,
    pub edges: Vec<(Port, Port)>,
    /// `slots[v][s]` is the edge attached to slot `s` of vertex `v`.
    pub slots: Vec<[usize; 4]>,
    /// Qubits without gates; each closes into a loop worth a factor 2.
    pub free_loops: usize,
}

impl EdgeOrderedGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_vertices];
        for (a, b) in &self.edges {
            d[a.vertex] += 1;
            d[b.vertex] += 1;
        }
        d
    }

    pub fn self_loops(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a.vertex == b.vertex).count()
    }
}

/// One vertex per gate; the wire of each qubit between consecutive gates
/// becomes an edge, and the trace closes it from the last gate back to the first.
pub fn circuit_to_six_vertex(c: &TrotterCircuit) -> (EdgeOrderedGraph, SixVertexParams) {
    let mut per_qubit: Vec<Vec<(usize, usize)>> = vec![Vec::new(); c.n_qubits];
    for (v, g) in c.gates.iter().enumerate() {
        per_qubit[g.q1].push((v, 0));
        per_qubit[g.q2].push((v, 1));
    }
    let mut edges = Vec::new();
    let mut slots = vec![[usize::MAX; 4]; c.gates.len()];
    let mut free_loops = 0;
    for wire in &per_qubit {
        if wire.is_empty() {
            free_loops += 1;
            continue;
        }
        for (k, &(v, pos)) in wire.iter().enumerate() {
            let (w, wpos) = wire[(k + 1) % wire.len()];
            let id = edges.len();
            edges.push((
                Port { vertex: v, slot: pos },
                Port {
                    vertex: w,
                    slot: 2 + wpos,
                },
            ));
            slots[v][pos] = id;
            slots[w][2 + wpos] = id;
        }
    }
    (
        EdgeOrderedGraph {
            n_vertices: c.gates.len(),
            edges,
            slots,
            free_loops,
        },
        c.params(),
    )
}

/// Kahan-compensated running sum.
#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// `Z(Γ, a, b, c) = Σ_τ a^{n₁} b^{n₂} c^{n₃}` over Eulerian orientations,
/// by enumerating all `2^{|E|}` edge bit strings (bit 1 = backward in
/// time). Free loops contribute a factor 2 each.
pub fn eulerian_partition(gamma: &EdgeOrderedGraph, params: &SixVertexParams) -> Result<f64> {
    let m = gamma.edges.len();
    if m > MAX_SIX_VERTEX_EDGES {
        return Err(Error::TooLarge {
            what: "edges for the six-vertex enumeration",
            value: m,
            cap: MAX_SIX_VERTEX_EDGES,
        });
    }
    let total = 1usize << m;
    let weight = |x: usize| -> f64 {
        let bit = |e: usize| ((x >> e) & 1) as u8;
        let mut w = 1.0;
        for s in &gamma.slots {
            let ty = vertex_type((bit(s[0]), bit(s[1])), (bit(s[2]), bit(s[3])));
            w *= match ty {
                None => return 0.0,
                Some(VertexType::Straight) => params.a,
                Some(VertexType::Swap) => params.b,
                Some(VertexType::Turn) => params.c,
            };
            if w == 0.0 {
                return 0.0;
            }
        }
        w
    };
    let partials: Vec<Kahan> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|k| {
            let mut acc = Kahan::default();
            for x in k * CHUNK..((k + 1) * CHUNK).min(total) {
                acc.add(weight(x));
            }
            acc
        })
        .collect();
    let mut acc = Kahan::default();
    for p in partials {
        acc.add(p.sum);
        acc.add(-p.comp);
    }
    Ok(acc.sum * 2f64.powi(gamma.free_loops as i32))
}
