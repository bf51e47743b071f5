//! Enumeration of trees and connected graphs, labeled or up to isomorphism.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest `n` for labeled trees (`n^{n-2}` of them).
pub const MAX_LABELED_TREE_N: usize = 8;
/// Largest `n` for trees up to isomorphism.
pub const MAX_TREE_N: usize = 12;
/// Largest `n` for labeled connected graphs (`2^{C(n,2)}` edge subsets).
pub const MAX_LABELED_CONNECTED_N: usize = 6;
/// Largest `n` for connected graphs up to isomorphism.
pub const MAX_CONNECTED_N: usize = 7;

fn cap(what: &'static str, n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(Error::TooLarge {
            what,
            value: n,
            cap: max,
        });
    }
    Ok(())
}

/// Tree with the given Prüfer sequence on `seq.len() + 2` vertices.
pub fn prufer_decode(seq: &[usize]) -> Result<Graph> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidIndex { index: bad, n });
    }
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut pairs = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a tree always has a leaf");
        pairs.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    pairs.push((rest[0], rest[1]));
    Graph::from_pairs(n, &pairs)
}

/// All trees on `n` vertices. Labeled trees come from Prüfer sequences
/// (`n <= 8`); with `dedup`, one representative per isomorphism class
/// (`n <= 12`), sorted by canonical form.
pub fn enum_trees(n: usize, dedup: bool) -> Result<Vec<Graph>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if dedup {
        cap("vertices for tree enumeration", n, MAX_TREE_N)?;
        return Ok(unlabeled_trees(n));
    }
    cap("vertices for labeled tree enumeration", n, MAX_LABELED_TREE_N)?;
    if n == 1 {
        return Ok(vec![Graph::from_pairs(1, &[])?]);
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    let mut seq = vec![0usize; len];
    for mut k in 0..total {
        for slot in seq.iter_mut() {
            *slot = k % n;
            k /= n;
        }
        out.push(prufer_decode(&seq)?);
    }
    Ok(out)
}

fn adjacency_lists(g: &Graph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.n_vertices()];
    for (i, j) in g.pairs() {
        adj[i].push(j);
        adj[j].push(i);
    }
    adj
}

/// AHU encoding of the subtree rooted at `v`.
fn ahu(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| ahu(adj, u, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Canonical string of a tree: the smallest AHU code over its centers.
pub fn tree_canonical_form(g: &Graph) -> String {
    let adj = adjacency_lists(g);
    let n = g.n_vertices();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in &adj[v] {
                deg[u] -= 1;
                if deg[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    layer
        .iter()
        .map(|&c| ahu(&adj, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

fn unlabeled_trees(n: usize) -> Vec<Graph> {
    let mut level: BTreeMap<String, Graph> = BTreeMap::new();
    let single = Graph::from_pairs(1, &[]).expect("single vertex");
    level.insert(tree_canonical_form(&single), single);
    for m in 2..=n {
        let mut next = BTreeMap::new();
        for g in level.values() {
            for v in 0..m - 1 {
                let mut pairs = g.pairs();
                pairs.push((v, m - 1));
                let h = Graph::from_pairs(m, &pairs).expect("leaf augmentation");
                next.entry(tree_canonical_form(&h)).or_insert(h);
            }
        }
        level = next;
    }
    level.into_values().collect()
}

/// All connected simple graphs on `n` vertices: labeled (`n <= 6`) or, with
/// `dedup`, one per isomorphism class (`n <= 7`) sorted by canonical form.
pub fn enum_connected(n: usize, dedup: bool) -> Result<Vec<Graph>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if dedup {
        cap("vertices for connected graph enumeration", n, MAX_CONNECTED_N)?;
        return Ok(unlabeled_connected(n));
    }
    cap(
        "vertices for labeled connected graph enumeration",
        n,
        MAX_LABELED_CONNECTED_N,
    )?;
    let all: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << all.len() {
        let pairs: Vec<(usize, usize)> = all
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = Graph::from_pairs(n, &pairs)?;
        if g.is_connected() {
            out.push(g);
        }
    }
    Ok(out)
}

/// Bitmask adjacency rows.
fn adjacency_masks(n: usize, pairs: &[(usize, usize)]) -> Vec<u32> {
    let mut adj = vec![0u32; n];
    for &(i, j) in pairs {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    adj
}

/// Upper-triangle bit code of `adj` relabeled by `order` (new position → old vertex).
fn code_of(adj: &[u32], order: &[usize]) -> u64 {
    let n = order.len();
    let mut code = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            code = (code << 1) | u64::from(adj[order[a]] >> order[b] & 1);
        }
    }
    code
}

/// Calls `f` for every permutation of `items[lo..]`.
fn permute(items: &mut Vec<usize>, lo: usize, f: &mut impl FnMut(&[usize])) {
    if lo + 1 >= items.len() {
        f(items);
        return;
    }
    for k in lo..items.len() {
        items.swap(lo, k);
        permute(items, lo + 1, f);
        items.swap(lo, k);
    }
}

/// Canonical code: vertices are grouped by the invariant
/// `(degree, sorted neighbour degrees)`, groups are ordered by invariant,
/// and the code is the largest adjacency code over permutations within groups.
pub fn graph_canonical_form(g: &Graph) -> (usize, u64) {
    let n = g.n_vertices();
    let adj = adjacency_masks(n, &g.pairs());
    let deg: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    let inv: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut classes: BTreeMap<&(u32, Vec<u32>), Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        classes.entry(&inv[v]).or_default().push(v);
    }
    let groups: Vec<Vec<usize>> = classes.into_values().collect();
    let mut best = 0u64;
    let mut order = Vec::with_capacity(n);
    fn walk(groups: &[Vec<usize>], k: usize, order: &mut Vec<usize>, adj: &[u32], best: &mut u64) {
        if k == groups.len() {
            *best = (*best).max(code_of(adj, order));
            return;
        }
        let mut items = groups[k].clone();
        permute(&mut items, 0, &mut |perm| {
            let len = order.len();
            order.extend_from_slice(perm);
            walk(groups, k + 1, order, adj, best);
            order.truncate(len);
        });
    }
    walk(&groups, 0, &mut order, &adj, &mut best);
    (n, best)
}

fn unlabeled_connected(n: usize) -> Vec<Graph> {
    let mut level: BTreeMap<(usize, u64), Graph> = BTreeMap::new();
    let single = Graph::from_pairs(1, &[]).expect("single vertex");
    level.insert(graph_canonical_form(&single), single);
    for m in 2..=n {
        let mut next = BTreeMap::new();
        for g in level.values() {
            for subset in 1u32..1 << (m - 1) {
                let mut pairs = g.pairs();
                pairs.extend((0..m - 1).filter(|&v| subset >> v & 1 == 1).map(|v| (v, m - 1)));
                let h = Graph::from_pairs(m, &pairs).expect("vertex augmentation");
                next.entry(graph_canonical_form(&h)).or_insert(h);
            }
        }
        level = next;
    }
    level.into_values().collect()
}

/// Isomorphism test by trying every vertex permutation (small graphs only).
pub fn isomorphic_brute_force(a: &Graph, b: &Graph) -> bool {
    let n = a.n_vertices();
    if n != b.n_vertices() || a.edges().len() != b.edges().len() {
        return false;
    }
    let adj_a = adjacency_masks(n, &a.pairs());
    let adj_b = adjacency_masks(n, &b.pairs());
    let target = code_of(&adj_b, &(0..n).collect::<Vec<_>>());
    let mut items: Vec<usize> = (0..n).collect();
    let mut found = false;
    permute(&mut items, 0, &mut |perm| {
        if !found && code_of(&adj_a, perm) == target {
            found = true;
        }
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREES: [usize; 12] = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551];
    const CONNECTED: [usize; 7] = [1, 1, 2, 6, 21, 112, 853];
    const LABELED_CONNECTED: [usize; 6] = [1, 1, 4, 38, 728, 26704];

    fn classes_by_brute_force(gs: &[Graph]) -> usize {
        let mut reps: Vec<&Graph> = Vec::new();
        for g in gs {
            if !reps.iter().any(|r| isomorphic_brute_force(r, g)) {
                reps.push(g);
            }
        }
        reps.len()
    }

    #[test]
    fn prufer_examples() {
        let g = prufer_decode(&[3, 3, 3]).unwrap();
        assert!(g.is_star());
        assert_eq!(g.degrees()[3], 4);
        assert_eq!(prufer_decode(&[]).unwrap().pairs(), vec![(0, 1)]);
        assert!(prufer_decode(&[5]).is_err());
    }

    #[test]
    fn labeled_tree_counts() {
        assert_eq!(enum_trees(2, false).unwrap().len(), 1);
        for n in 3..=7 {
            let ts = enum_trees(n, false).unwrap();
            assert_eq!(ts.len(), n.pow(n as u32 - 2));
            assert!(ts.iter().all(Graph::is_tree));
            let ids: std::collections::BTreeSet<String> = ts.iter().map(Graph::id).collect();
            assert_eq!(ids.len(), ts.len());
        }
        assert!(enum_trees(9, false).is_err());
    }

    #[test]
    fn tree_counts_up_to_isomorphism() {
        for n in 1..=12 {
            let ts = enum_trees(n, true).unwrap();
            assert_eq!(ts.len(), TREES[n - 1], "n={n}");
            assert!(ts.iter().all(Graph::is_tree));
        }
        assert!(enum_trees(13, true).is_err());
    }

    #[test]
    fn tree_dedup_matches_brute_force() {
        let labeled = enum_trees(6, false).unwrap();
        assert_eq!(classes_by_brute_force(&labeled), enum_trees(6, true).unwrap().len());
    }

    #[test]
    fn connected_counts() {
        for n in 1..=6 {
            assert_eq!(enum_connected(n, false).unwrap().len(), LABELED_CONNECTED[n - 1]);
        }
        for n in 1..=7 {
            let gs = enum_connected(n, true).unwrap();
            assert_eq!(gs.len(), CONNECTED[n - 1], "n={n}");
            assert!(gs.iter().all(Graph::is_connected));
        }
        assert_eq!(enum_connected(3, false).unwrap().len(), 4);
        assert!(enum_connected(7, false).is_err());
        assert!(enum_connected(8, true).is_err());
    }

    #[test]
    fn connected_dedup_matches_brute_force() {
        let labeled = enum_connected(5, false).unwrap();
        assert_eq!(classes_by_brute_force(&labeled), enum_connected(5, true).unwrap().len());
        let reps = enum_connected(6, true).unwrap();
        for (k, a) in reps.iter().enumerate() {
            for b in &reps[k + 1..] {
                assert!(!isomorphic_brute_force(a, b));
            }
        }
    }

    #[test]
    fn canonical_forms_are_invariant() {
        let a = Graph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let b = Graph::from_pairs(5, &[(3, 1), (1, 4), (4, 0), (0, 2), (2, 3), (3, 4)]).unwrap();
        assert!(isomorphic_brute_force(&a, &b));
        assert_eq!(graph_canonical_form(&a), graph_canonical_form(&b));
        let p = Graph::from_pairs(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let q = Graph::from_pairs(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(tree_canonical_form(&p), tree_canonical_form(&q));
        assert_ne!(tree_canonical_form(&p), tree_canonical_form(&Graph::star(4).unwrap()));
    }
}
