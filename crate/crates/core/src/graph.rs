//! Simple undirected graphs with optional node labels and edge types,
//! plus the brute-force oracles the rest of the crate is tested against.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// An immutable simple undirected graph.
///
/// Nodes are `0..node_count`. Edges are stored canonically as `(u, v)` with
/// `u < v`, sorted. Node labels and edge types are opaque interned tokens;
/// absence means "all equal".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(u32, u32)>,
    edge_types: Option<Vec<u32>>,
    node_labels: Option<Vec<u32>>,
    adjacency: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting out-of-range endpoints,
    /// self-loops, and duplicate edges.
    pub fn new(node_count: usize, edge_list: &[(u32, u32)]) -> Result<Self> {
        Self::with_attributes(node_count, edge_list, None, None)
    }

    /// Builds a graph with optional per-node labels and per-edge types.
    ///
    /// `edge_types`, when present, must parallel `edge_list`.
    pub fn with_attributes(
        node_count: usize,
        edge_list: &[(u32, u32)],
        node_labels: Option<Vec<u32>>,
        edge_types: Option<Vec<u32>>,
    ) -> Result<Self> {
        if let Some(labels) = &node_labels {
            assert_eq!(labels.len(), node_count, "one label per node");
        }
        if let Some(types) = &edge_types {
            assert_eq!(types.len(), edge_list.len(), "one type per edge");
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        for (i, &(a, b)) in edge_list.iter().enumerate() {
            for node in [a, b] {
                if node as usize >= node_count {
                    return Err(Error::OutOfRange { node, node_count });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let canon = (a.min(b), a.max(b));
            edges.push((canon, edge_types.as_ref().map(|t| t[i])));
        }
        edges.sort();
        for pair in edges.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateEdge(pair[0].0 .0, pair[0].0 .1));
            }
        }
        let sorted_types = edge_types
            .is_some()
            .then(|| edges.iter().map(|e| e.1.unwrap()).collect());
        let edges: Vec<(u32, u32)> = edges.into_iter().map(|e| e.0).collect();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            node_count,
            edges,
            edge_types: sorted_types,
            node_labels,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, sorted, with `u < v` in every pair.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (a, b) = (u.min(v), u.max(v));
        self.edges.binary_search(&(a, b)).is_ok()
    }

    /// Type token of edge `(u, v)`, if the graph carries edge types.
    pub fn edge_type(&self, u: u32, v: u32) -> Option<u32> {
        let types = self.edge_types.as_ref()?;
        let (a, b) = (u.min(v), u.max(v));
        self.edges.binary_search(&(a, b)).ok().map(|i| types[i])
    }

    pub fn has_edge_types(&self) -> bool {
        self.edge_types.is_some()
    }

    pub fn node_labels(&self) -> Option<&[u32]> {
        self.node_labels.as_deref()
    }

    pub fn check_node(&self, v: u32) -> Result<()> {
        if (v as usize) < self.node_count {
            Ok(())
        } else {
            Err(Error::InvalidNode(v))
        }
    }

    /// Degree shared by all nodes, if the graph is regular. A graph with no
    /// nodes is vacuously 0-regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map_or(0, Vec::len);
        self.adjacency
            .iter()
            .all(|list| list.len() == d)
            .then_some(d)
    }
}

/// All-pairs shortest path distances; `None` marks unreachable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    node_count: usize,
    entries: Vec<u32>,
}

const UNREACHABLE: u32 = u32::MAX;

impl DistanceMatrix {
    pub fn get(&self, u: u32, v: u32) -> Option<u32> {
        let d = self.entries[u as usize * self.node_count + v as usize];
        (d != UNREACHABLE).then_some(d)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Largest finite distance from `v`.
    pub fn eccentricity(&self, v: u32) -> u32 {
        let row = &self.entries[v as usize * self.node_count..][..self.node_count];
        row.iter().copied().filter(|&d| d != UNREACHABLE).max().unwrap_or(0)
    }
}

/// Number of walks of length exactly `k` between each node pair, i.e. the
/// entries of the k-th power of the adjacency matrix. Counts saturate at
/// `u64::MAX`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCountMatrix {
    node_count: usize,
    steps: usize,
    entries: Vec<u64>,
}

impl WalkCountMatrix {
    pub fn get(&self, u: u32, v: u32) -> u64 {
        self.entries[u as usize * self.node_count + v as usize]
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// BFS distances from one source; `None` marks unreachable nodes.
pub fn single_source_distances(g: &Graph, src: u32) -> Vec<Option<u32>> {
    let n = g.node_count();
    let mut dist = vec![UNREACHABLE; n];
    dist[src as usize] = 0;
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &w in g.neighbors(u) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = du + 1;
                queue.push_back(w);
            }
        }
    }
    dist.into_iter()
        .map(|d| (d != UNREACHABLE).then_some(d))
        .collect()
}

/// BFS from every source. O(n(n+m)) total, O(n) extra space per source.
pub fn all_pairs_shortest_distance(g: &Graph) -> DistanceMatrix {
    let n = g.node_count();
    let mut entries = vec![UNREACHABLE; n * n];
    let mut queue = std::collections::VecDeque::new();
    for src in 0..n {
        let row = &mut entries[src * n..][..n];
        row[src] = 0;
        queue.clear();
        queue.push_back(src as u32);
        while let Some(u) = queue.pop_front() {
            let du = row[u as usize];
            for &w in g.neighbors(u) {
                if row[w as usize] == UNREACHABLE {
                    row[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    DistanceMatrix { node_count: n, entries }
}

/// Computes A^k entrywise by repeated sparse multiplication.
pub fn walk_counts(g: &Graph, k: usize) -> WalkCountMatrix {
    let n = g.node_count();
    let mut entries = vec![0u64; n * n];
    for i in 0..n {
        entries[i * n + i] = 1;
    }
    for _ in 0..k {
        let mut next = vec![0u64; n * n];
        for u in 0..n {
            let row = &entries[u * n..][..n];
            let out = &mut next[u * n..][..n];
            for (v, slot) in out.iter_mut().enumerate() {
                let mut acc = 0u64;
                for &w in g.neighbors(v as u32) {
                    acc = acc.saturating_add(row[w as usize]);
                }
                *slot = acc;
            }
        }
        entries = next;
    }
    WalkCountMatrix { node_count: n, steps: k, entries }
}

/// Rows of A^1..A^k for a single source node; `rows[j-1][u]` counts walks of
/// length `j` from `src` to `u`. Cheaper than the full matrix when only one
/// source is needed.
pub fn walk_count_rows(g: &Graph, src: u32, k: usize) -> Vec<Vec<u64>> {
    let n = g.node_count();
    let mut cur = vec![0u64; n];
    cur[src as usize] = 1;
    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        let mut next = vec![0u64; n];
        for (v, slot) in next.iter_mut().enumerate() {
            let mut acc = 0u64;
            for &w in g.neighbors(v as u32) {
                acc = acc.saturating_add(cur[w as usize]);
            }
            *slot = acc;
        }
        rows.push(next.clone());
        cur = next;
    }
    rows
}

/// Partition of the nodes into connected components, BFS order within each
/// component, components ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n as u32 {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        let mut comp = vec![start];
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        components.push(comp);
    }
    components
}

/// Places `g2` after `g1` with no cross edges; returns the combined graph and
/// the offset added to every `g2` node id.
///
/// Labels and edge types survive only when both inputs carry them; mixing a
/// labeled graph with an unlabeled one drops the attribute.
pub fn disjoint_union(g1: &Graph, g2: &Graph) -> (Graph, u32) {
    let (g, offsets) = disjoint_union_all(&[g1, g2]);
    (g, offsets[1])
}

/// Disjoint union of any number of graphs; returns per-graph node offsets.
pub fn disjoint_union_all(graphs: &[&Graph]) -> (Graph, Vec<u32>) {
    let mut offsets = Vec::with_capacity(graphs.len());
    let mut node_count = 0usize;
    let mut edges = Vec::new();
    for g in graphs {
        offsets.push(node_count as u32);
        let off = node_count as u32;
        edges.extend(g.edges().iter().map(|&(u, v)| (u + off, v + off)));
        node_count += g.node_count();
    }
    let all_labeled = graphs.iter().all(|g| g.node_labels().is_some());
    let labels = all_labeled.then(|| {
        graphs
            .iter()
            .flat_map(|g| g.node_labels().unwrap().iter().copied())
            .collect()
    });
    let all_typed = graphs.iter().all(|g| g.has_edge_types());
    let types = all_typed.then(|| {
        graphs
            .iter()
            .flat_map(|g| g.edges().iter().map(|&(u, v)| g.edge_type(u, v).unwrap()))
            .collect()
    });
    let g = Graph::with_attributes(node_count, &edges, labels, types)
        .expect("disjoint union of valid graphs is valid");
    (g, offsets)
}

/// Node cap for the brute-force isomorphism oracle.
pub const ISO_ORACLE_MAX_NODES: usize = 10;

/// Exact isomorphism verdict by backtracking permutation search with degree
/// pruning. Respects node labels and edge types. Errors above
/// [`ISO_ORACLE_MAX_NODES`] nodes.
pub fn is_isomorphic_small(g1: &Graph, g2: &Graph) -> Result<bool> {
    for g in [g1, g2] {
        if g.node_count() > ISO_ORACLE_MAX_NODES {
            return Err(Error::TooLarge {
                got: g.node_count(),
                limit: ISO_ORACLE_MAX_NODES,
            });
        }
    }
    if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let n = g1.node_count();
    let mut degs1: Vec<usize> = (0..n).map(|v| g1.degree(v as u32)).collect();
    let mut degs2: Vec<usize> = (0..n).map(|v| g2.degree(v as u32)).collect();
    degs1.sort_unstable();
    degs2.sort_unstable();
    if degs1 != degs2 {
        return Ok(false);
    }
    if sorted_labels(g1) != sorted_labels(g2) {
        return Ok(false);
    }

    // Map g1 nodes in order; prune on degree, label, and adjacency agreement.
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(g1: &Graph, g2: &Graph, v: usize, mapping: &mut [usize], used: &mut [bool]) -> bool {
        let n = g1.node_count();
        if v == n {
            return true;
        }
        'cand: for c in 0..n {
            if used[c]
                || g1.degree(v as u32) != g2.degree(c as u32)
                || node_label(g1, v) != node_label(g2, c)
            {
                continue;
            }
            for prev in 0..v {
                let e1 = g1.has_edge(v as u32, prev as u32);
                let e2 = g2.has_edge(c as u32, mapping[prev] as u32);
                if e1 != e2 {
                    continue 'cand;
                }
                if e1 {
                    let t1 = g1.edge_type(v as u32, prev as u32);
                    let t2 = g2.edge_type(c as u32, mapping[prev] as u32);
                    if t1 != t2 {
                        continue 'cand;
                    }
                }
            }
            mapping[v] = c;
            used[c] = true;
            if extend(g1, g2, v + 1, mapping, used) {
                return true;
            }
            used[c] = false;
            mapping[v] = usize::MAX;
        }
        false
    }
    Ok(extend(g1, g2, 0, &mut mapping, &mut used))
}

fn node_label(g: &Graph, v: usize) -> u32 {
    g.node_labels().map_or(0, |l| l[v])
}

fn sorted_labels(g: &Graph) -> Vec<u32> {
    let mut labels: Vec<u32> = (0..g.node_count()).map(|v| node_label(g, v)).collect();
    labels.sort_unstable();
    labels
}

/// Relabels nodes by `perm` (node v becomes `perm[v]`), preserving labels and
/// edge types. `perm` must be a permutation of `0..n`.
pub fn relabel(g: &Graph, perm: &[u32]) -> Graph {
    assert_eq!(perm.len(), g.node_count());
    let edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
        .collect();
    let types = g
        .has_edge_types()
        .then(|| g.edges().iter().map(|&(u, v)| g.edge_type(u, v).unwrap()).collect());
    let labels = g.node_labels().map(|labels| {
        let mut out = vec![0u32; labels.len()];
        for (v, &label) in labels.iter().enumerate() {
            out[perm[v] as usize] = label;
        }
        out
    });
    Graph::with_attributes(g.node_count(), &edges, labels, types)
        .expect("relabeling preserves validity")
}

/// Induced subgraph on `nodes` (which must be sorted and duplicate-free);
/// returns the subgraph with nodes relabeled to `0..nodes.len()`.
pub fn induced_subgraph(g: &Graph, nodes: &[u32]) -> Graph {
    debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    let mut index = HashMap::with_capacity(nodes.len());
    for (i, &v) in nodes.iter().enumerate() {
        index.insert(v, i as u32);
    }
    let mut edges = Vec::new();
    let mut types = Vec::new();
    for &v in nodes {
        for &w in g.neighbors(v) {
            if w > v {
                if let Some(&wi) = index.get(&w) {
                    edges.push((index[&v], wi));
                    if let Some(t) = g.edge_type(v, w) {
                        types.push(t);
                    }
                }
            }
        }
    }
    let labels = g
        .node_labels()
        .map(|l| nodes.iter().map(|&v| l[v as usize]).collect());
    let types = g.has_edge_types().then_some(types);
    Graph::with_attributes(nodes.len(), &edges, labels, types)
        .expect("induced subgraph of a valid graph is valid")
}
