//! Interaction graphs: edge lists with weights and phases, JSON and graph6 I/O.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    pub theta: f64,
}

/// Simple undirected graph on vertices `0..n` with `i < j` on every edge.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return invalid("a graph needs at least one vertex");
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            if e.i == e.j {
                return invalid(format!("self-loop at vertex {}", e.i));
            }
            if e.i > e.j {
                std::mem::swap(&mut e.i, &mut e.j);
            }
            if e.j >= n {
                return Err(Error::InvalidIndex { index: e.j, n });
            }
            if !(e.weight >= 0.0) || !e.weight.is_finite() || !e.theta.is_finite() {
                return invalid(format!("edge ({}, {}) needs a finite nonnegative weight", e.i, e.j));
            }
            if !seen.insert((e.i, e.j)) {
                return invalid(format!("duplicate edge ({}, {})", e.i, e.j));
            }
            out.push(e);
        }
        Ok(Graph { n, edges: out })
    }

    /// Unit-weight, zero-phase graph from vertex pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            n,
            pairs
                .iter()
                .map(|&(i, j)| Edge {
                    i,
                    j,
                    weight: 1.0,
                    theta: 0.0,
                })
                .collect(),
        )
    }

    pub fn path(n: usize) -> Result<Self> {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_pairs(n, &pairs)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return invalid("a cycle needs at least 3 vertices");
        }
        let mut pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        pairs.push((0, n - 1));
        Self::from_pairs(n, &pairs)
    }

    /// Star with center 0.
    pub fn star(n: usize) -> Result<Self> {
        let pairs: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Self::from_pairs(n, &pairs)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let pairs: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_pairs(n, &pairs)
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.i] += 1;
            d[e.j] += 1;
        }
        d
    }

    pub fn is_uniform(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = self.n;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.i), find(&mut parent, e.j));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps == 1
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n && self.is_connected()
    }

    /// A star in the sense of the closed-form spectrum: `n >= 3`, a tree,
    /// one vertex adjacent to all others.
    pub fn is_star(&self) -> bool {
        self.n >= 3 && self.is_tree() && self.degrees().iter().any(|&d| d == self.n - 1)
    }

    /// Same edges with the given per-edge phases.
    pub fn with_phases(&self, thetas: &[f64]) -> Result<Self> {
        if thetas.len() != self.edges.len() {
            return Err(Error::DimensionMismatch {
                expected: self.edges.len(),
                actual: thetas.len(),
            });
        }
        let edges = self
            .edges
            .iter()
            .zip(thetas)
            .map(|(e, &t)| Edge { theta: t, ..*e })
            .collect();
        Graph::new(self.n, edges)
    }

    /// Canonical identifier of the labeled edge set, e.g. `n3:0-1,0-2`.
    pub fn id(&self) -> String {
        let mut p = self.pairs();
        p.sort();
        let body: Vec<String> = p.iter().map(|(i, j)| format!("{i}-{j}")).collect();
        format!("n{}:{}", self.n, body.join(","))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphDoc::from(self)).expect("graph serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(s)?;
        doc.try_into()
    }

    /// Parses a graph6 string (simple undirected graphs, `n <= 62`).
    pub fn from_graph6(s: &str) -> Result<Self> {
        let bytes: Vec<u8> = s.trim().bytes().collect();
        if bytes.is_empty() {
            return invalid("empty graph6 string");
        }
        if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return invalid("graph6 characters must lie in 63..=126");
        }
        if bytes[0] == 126 {
            return invalid("graph6 strings with more than 62 vertices are not supported");
        }
        let n = (bytes[0] - 63) as usize;
        let need = (n * n.saturating_sub(1) / 2).div_ceil(6);
        if bytes.len() - 1 != need {
            return Err(Error::DimensionMismatch {
                expected: need + 1,
                actual: bytes.len(),
            });
        }
        let bits: Vec<bool> = bytes[1..]
            .iter()
            .flat_map(|&b| (0..6).rev().map(move |k| ((b - 63) >> k) & 1 == 1))
            .collect();
        let mut pairs = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bits[k] {
                    pairs.push((i, j));
                }
                k += 1;
            }
        }
        Self::from_pairs(n, &pairs)
    }

    pub fn to_graph6(&self) -> Result<String> {
        if self.n > 62 {
            return invalid("graph6 output is limited to 62 vertices");
        }
        let set: std::collections::BTreeSet<(usize, usize)> = self.pairs().into_iter().collect();
        let mut bits = Vec::new();
        for j in 1..self.n {
            for i in 0..j {
                bits.push(set.contains(&(i, j)));
            }
        }
        while bits.len() % 6 != 0 {
            bits.push(false);
        }
        let mut out = String::new();
        out.push((self.n as u8 + 63) as char);
        for chunk in bits.chunks(6) {
            let v = chunk.iter().fold(0u8, |acc, &b| (acc << 1) | b as u8);
            out.push((v + 63) as char);
        }
        Ok(out)
    }

    /// Reads JSON (if the text starts with `{`) or graph6.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_graph6(text)
        }
    }
}

/// `{n, edges: [[i, j, w?, theta?], ...]}` with 0-based vertices.
#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    edges: Vec<Vec<f64>>,
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        GraphDoc {
            n: g.n,
            edges: g
                .edges
                .iter()
                .map(|e| vec![e.i as f64, e.j as f64, e.weight, e.theta])
                .collect(),
        }
    }
}

impl TryFrom<GraphDoc> for Graph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Self> {
        let mut edges = Vec::with_capacity(doc.edges.len());
        for row in doc.edges {
            if !(2..=4).contains(&row.len()) {
                return invalid(format!("edge entries need 2 to 4 numbers, got {}", row.len()));
            }
            let idx = |v: f64| -> Result<usize> {
                if v >= 0.0 && v.fract() == 0.0 {
                    Ok(v as usize)
                } else {
                    invalid(format!("vertex label {v} is not a nonnegative integer"))
                }
            };
            edges.push(Edge {
                i: idx(row[0])?,
                j: idx(row[1])?,
                weight: row.get(2).copied().unwrap_or(1.0),
                theta: row.get(3).copied().unwrap_or(0.0),
            });
        }
        Graph::new(doc.n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Graph::from_pairs(3, &[(0, 0)]).is_err());
        assert!(Graph::from_pairs(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_pairs(3, &[(0, 3)]).is_err());
        assert!(Graph::new(
            2,
            vec![Edge {
                i: 0,
                j: 1,
                weight: -1.0,
                theta: 0.0
            }]
        )
        .is_err());
        let g = Graph::from_pairs(3, &[(2, 1)]).unwrap();
        assert_eq!(g.pairs(), vec![(1, 2)]);
    }

    #[test]
    fn families() {
        assert!(Graph::star(5).unwrap().is_star());
        assert!(!Graph::path(5).unwrap().is_star());
        assert!(Graph::path(3).unwrap().is_star());
        assert!(Graph::path(6).unwrap().is_tree());
        assert!(!Graph::cycle(4).unwrap().is_tree());
        assert!(Graph::cycle(4).unwrap().is_connected());
        assert!(!Graph::from_pairs(3, &[(0, 1)]).unwrap().is_connected());
        assert_eq!(Graph::complete(5).unwrap().edges().len(), 10);
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::from_json(r#"{"n":3,"edges":[[0,1],[1,2,0.5,1.25]]}"#).unwrap();
        assert_eq!(g.edges()[1].weight, 0.5);
        assert_eq!(g.edges()[1].theta, 1.25);
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
        assert!(Graph::from_json(r#"{"n":3,"edges":[[0]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":3,"edges":[[0.5,1]]}"#).is_err());
    }

    #[test]
    fn graph6_round_trip() {
        let k2 = Graph::from_graph6("A_").unwrap();
        assert_eq!(k2.pairs(), vec![(0, 1)]);
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(k4.to_graph6().unwrap(), "C~");
        for g in [
            Graph::path(7).unwrap(),
            Graph::cycle(5).unwrap(),
            Graph::star(9).unwrap(),
        ] {
            let s = g.to_graph6().unwrap();
            let mut a = Graph::from_graph6(&s).unwrap().pairs();
            let mut b = g.pairs();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
        assert!(Graph::from_graph6("C~~").is_err());
    }

    #[test]
    fn ids_are_order_independent() {
        let a = Graph::from_pairs(3, &[(0, 2), (0, 1)]).unwrap();
        let b = Graph::from_pairs(3, &[(0, 1), (2, 0)]).unwrap();
        assert_eq!(a.id(), b.id());
        assert_eq!(a.id(), "n3:0-1,0-2");
    }
}
