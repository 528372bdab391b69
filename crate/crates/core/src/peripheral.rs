//! Peripheral subgraphs and their canonical encodings.
//!
//! The hop-k peripheral subgraph of a node is the subgraph induced by its
//! k-th hop set. Its encoding summarizes per-type edge counts, the number of
//! connected components, and a k'-deep summary of the subgraph itself:
//! node configurations of all its members summed up plus the total number of
//! their own peripheral edges across those hops. The summary is a constant of
//! the graph, computed once in preprocessing and reused by every refinement
//! iteration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{connected_components, induced_subgraph, Graph};
use crate::khop::{hop_sets, hop_sets_spd, Kernel};

/// Saturation caps for encoded counts. `None` lifts the cap.
///
/// The defaults (6 peripheral edges, 3 components) bound the encoding
/// vocabulary for embedding-style use; expressiveness suites lift them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_edges: Option<u64>,
    pub max_components: Option<u64>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_edges: Some(6), max_components: Some(3) }
    }
}

impl Caps {
    pub const UNCAPPED: Caps = Caps { max_edges: None, max_components: None };

    fn cap_edges(&self, n: u64) -> u64 {
        self.max_edges.map_or(n, |cap| n.min(cap))
    }

    fn cap_components(&self, n: u64) -> u64 {
        self.max_components.map_or(n, |cap| n.min(cap))
    }
}

/// How the k'-configuration aggregates per-member summaries: summed (the
/// default) or kept as a multiset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KprimeMode {
    #[default]
    Sum,
    Multiset,
}

/// The subgraph induced by one hop set, with original node ids retained.
#[derive(Debug, Clone)]
pub struct PeripheralSubgraph {
    pub hop: usize,
    pub kernel: Kernel,
    /// Original node ids, sorted.
    pub nodes: Vec<u32>,
    /// Induced subgraph relabeled to `0..nodes.len()`.
    pub graph: Graph,
}

impl PeripheralSubgraph {
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Edges in original node ids.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        self.graph
            .edges()
            .iter()
            .map(|&(u, v)| (self.nodes[u as usize], self.nodes[v as usize]))
            .collect()
    }
}

pub fn peripheral_subgraph(g: &Graph, v: u32, hop: usize, kernel: Kernel) -> Result<PeripheralSubgraph> {
    g.check_node(v)?;
    assert!(hop >= 1, "hops are 1-based");
    let sets = hop_sets(g, v, hop, kernel)?;
    let nodes = sets.hop(hop).to_vec();
    let graph = induced_subgraph(g, &nodes);
    Ok(PeripheralSubgraph { hop, kernel, nodes, graph })
}

/// Canonical summary of a peripheral subgraph. Two isomorphic labeled
/// subgraphs always get equal encodings (the converse need not hold).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeripheralEncoding {
    /// Edge count per edge-type token, sorted by token; untyped graphs use
    /// the single token 0. Counts saturate at the edge cap.
    pub edge_count_by_type: Vec<(u32, u64)>,
    /// Connected components of the subgraph, isolated nodes included,
    /// saturated at the component cap.
    pub component_count: u64,
    /// k'-configuration: per-hop configuration sums (or the per-member
    /// multiset) plus the members' own peripheral edge total.
    pub kprime: KprimeConfiguration,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KprimeConfiguration {
    /// `config_sum[j-1]` sums `|Q^{j,spd}|` within the subgraph over all its
    /// members; `edge_total` sums their peripheral edge counts across hops
    /// 1..=k'.
    Sum { config_sum: Vec<u64>, edge_total: u64 },
    /// Sorted multiset of per-member `(configuration, edge total)` rows.
    Multiset { rows: Vec<(Vec<u64>, u64)> },
}

/// Encodes a peripheral subgraph with a depth-k' summary.
///
/// `k_prime = 0` reduces to edge counts plus component count. Deeper
/// summaries always use spd hops inside the subgraph, the only kernel whose
/// hops partition it.
pub fn peripheral_encoding(
    ps: &PeripheralSubgraph,
    k_prime: usize,
    caps: &Caps,
    mode: KprimeMode,
) -> PeripheralEncoding {
    let sub = &ps.graph;
    let mut by_type: BTreeMap<u32, u64> = BTreeMap::new();
    for &(u, v) in sub.edges() {
        *by_type.entry(sub.edge_type(u, v).unwrap_or(0)).or_insert(0) += 1;
    }
    let edge_count_by_type = by_type
        .into_iter()
        .map(|(t, c)| (t, caps.cap_edges(c)))
        .collect();
    let component_count = caps.cap_components(connected_components(sub).len() as u64);

    let kprime = if k_prime == 0 {
        match mode {
            KprimeMode::Sum => KprimeConfiguration::Sum { config_sum: Vec::new(), edge_total: 0 },
            KprimeMode::Multiset => KprimeConfiguration::Multiset { rows: Vec::new() },
        }
    } else {
        let mut rows = Vec::with_capacity(sub.node_count());
        for u in 0..sub.node_count() as u32 {
            let hops = hop_sets_spd(sub, u, k_prime).expect("member node is valid");
            let config: Vec<u64> = hops.counts().iter().map(|&c| c as u64).collect();
            let mut edge_total = 0u64;
            for k in 1..=k_prime {
                let inner = induced_subgraph(sub, hops.hop(k));
                edge_total += inner.edge_count() as u64;
            }
            rows.push((config, edge_total));
        }
        match mode {
            KprimeMode::Sum => {
                let mut config_sum = vec![0u64; k_prime];
                let mut edge_total = 0u64;
                for (config, edges) in rows {
                    for (slot, c) in config_sum.iter_mut().zip(config) {
                        *slot += c;
                    }
                    edge_total += edges;
                }
                KprimeConfiguration::Sum { config_sum, edge_total }
            }
            KprimeMode::Multiset => {
                rows.sort();
                KprimeConfiguration::Multiset { rows }
            }
        }
    };

    PeripheralEncoding { edge_count_by_type, component_count, kprime }
}

/// Reports whether the hop-k peripheral subgraph (spd kernel) is regular and
/// with which degree. Empty and single-node subgraphs count as 0-regular.
pub fn peripheral_regularity_check(g: &Graph, v: u32, hop: usize) -> Result<(bool, usize)> {
    let ps = peripheral_subgraph(g, v, hop, Kernel::Spd)?;
    Ok(match ps.graph.regular_degree() {
        Some(d) => (true, d),
        None => (false, 0),
    })
}

/// Precomputed encodings for every `(node, hop)` pair up to `max_hop`;
/// `table[v][k-1]` is the hop-k encoding for node v.
pub fn encoding_table(
    g: &Graph,
    max_hop: usize,
    kernel: Kernel,
    k_prime: usize,
    caps: &Caps,
    mode: KprimeMode,
) -> Result<Vec<Vec<PeripheralEncoding>>> {
    let mut table = Vec::with_capacity(g.node_count());
    for v in 0..g.node_count() as u32 {
        let sets = hop_sets(g, v, max_hop, kernel)?;
        let mut per_node = Vec::with_capacity(max_hop);
        for k in 1..=max_hop {
            let nodes = sets.hop(k).to_vec();
            let graph = induced_subgraph(g, &nodes);
            let ps = PeripheralSubgraph { hop: k, kernel, nodes, graph };
            per_node.push(peripheral_encoding(&ps, k_prime, caps, mode));
        }
        table.push(per_node);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::catalog;
    use crate::graph::relabel;

    fn encode(g: &Graph, v: u32, hop: usize, kp: usize) -> PeripheralEncoding {
        let ps = peripheral_subgraph(g, v, hop, Kernel::Spd).unwrap();
        peripheral_encoding(&ps, kp, &Caps::UNCAPPED, KprimeMode::Sum)
    }

    #[test]
    fn prism_and_k33_first_hop_edges() {
        let prism = catalog("prism").unwrap();
        let ps = peripheral_subgraph(&prism, 0, 1, Kernel::Spd).unwrap();
        assert_eq!(ps.edge_count(), 1);
        assert_eq!(ps.edges(), vec![(1, 2)]);

        let k33 = catalog("k33").unwrap();
        let ps = peripheral_subgraph(&k33, 0, 1, Kernel::Spd).unwrap();
        assert_eq!(ps.edge_count(), 0);
    }

    #[test]
    fn srg16_pair_first_hop_shapes() {
        let shrikhande = catalog("shrikhande").unwrap();
        let rook = catalog("rook4").unwrap();
        for v in 0..16 {
            let a = peripheral_subgraph(&shrikhande, v, 1, Kernel::Spd).unwrap();
            assert_eq!((a.nodes.len(), a.edge_count()), (6, 6));
            assert_eq!(connected_components(&a.graph).len(), 1); // one 6-cycle

            let b = peripheral_subgraph(&rook, v, 1, Kernel::Spd).unwrap();
            assert_eq!((b.nodes.len(), b.edge_count()), (6, 6));
            assert_eq!(connected_components(&b.graph).len(), 2); // two triangles
        }
    }

    #[test]
    fn srg16_pair_encodings() {
        let shrikhande = catalog("shrikhande").unwrap();
        let rook = catalog("rook4").unwrap();
        let a = encode(&shrikhande, 0, 1, 1);
        assert_eq!(a.edge_count_by_type, vec![(0, 6)]);
        assert_eq!(a.component_count, 1);
        assert_eq!(
            a.kprime,
            KprimeConfiguration::Sum { config_sum: vec![12], edge_total: 0 }
        );

        let b = encode(&rook, 0, 1, 1);
        assert_eq!(b.edge_count_by_type, vec![(0, 6)]);
        assert_eq!(b.component_count, 2);
        assert_eq!(
            b.kprime,
            KprimeConfiguration::Sum { config_sum: vec![12], edge_total: 6 }
        );

        // depth-2 summaries keep them apart even on the configuration sums
        let a2 = encode(&shrikhande, 0, 1, 2);
        let b2 = encode(&rook, 0, 1, 2);
        match (&a2.kprime, &b2.kprime) {
            (
                KprimeConfiguration::Sum { config_sum: ca, .. },
                KprimeConfiguration::Sum { config_sum: cb, .. },
            ) => {
                assert_eq!(ca, &vec![12, 12]);
                assert_eq!(cb, &vec![12, 0]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_subgraph_encoding() {
        let star = catalog("star(4)").unwrap();
        let ps = peripheral_subgraph(&star, 0, 2, Kernel::Spd).unwrap();
        assert!(ps.nodes.is_empty());
        let e = peripheral_encoding(&ps, 1, &Caps::UNCAPPED, KprimeMode::Sum);
        assert!(e.edge_count_by_type.is_empty());
        assert_eq!(e.component_count, 0);

        // hop-1 of the star center: 4 isolated leaves
        let ps = peripheral_subgraph(&star, 0, 1, Kernel::Spd).unwrap();
        let e = peripheral_encoding(&ps, 1, &Caps::UNCAPPED, KprimeMode::Sum);
        assert!(e.edge_count_by_type.is_empty());
        assert_eq!(e.component_count, 4);
        assert_eq!(
            e.kprime,
            KprimeConfiguration::Sum { config_sum: vec![0], edge_total: 0 }
        );
    }

    #[test]
    fn caps_saturate() {
        let star = catalog("star(4)").unwrap();
        let ps = peripheral_subgraph(&star, 0, 1, Kernel::Spd).unwrap();
        let e = peripheral_encoding(&ps, 0, &Caps::default(), KprimeMode::Sum);
        assert_eq!(e.component_count, 3); // 4 saturates at the default cap

        let k6 = catalog("complete(7)").unwrap();
        let ps = peripheral_subgraph(&k6, 0, 1, Kernel::Spd).unwrap();
        let e = peripheral_encoding(&ps, 0, &Caps::default(), KprimeMode::Sum);
        assert_eq!(e.edge_count_by_type, vec![(0, 6)]); // 15 edges saturate
    }

    #[test]
    fn regularity_check() {
        let shrikhande = catalog("shrikhande").unwrap();
        for v in 0..16 {
            assert_eq!(peripheral_regularity_check(&shrikhande, v, 1).unwrap(), (true, 2));
            assert_eq!(peripheral_regularity_check(&shrikhande, v, 2).unwrap(), (true, 4));
        }
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(peripheral_regularity_check(&p3, 0, 1).unwrap(), (true, 0));
        let prism = catalog("prism").unwrap();
        assert_eq!(peripheral_regularity_check(&prism, 0, 1).unwrap().0, false);
    }

    #[test]
    fn encoding_is_relabel_invariant() {
        let g = catalog("prism").unwrap();
        let perm = [4u32, 2, 0, 5, 1, 3];
        let h = relabel(&g, &perm);
        for v in 0..6u32 {
            for hop in 1..=2 {
                let a = encode(&g, v, hop, 2);
                let b = encode(&h, perm[v as usize], hop, 2);
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn multiset_mode_orders_rows() {
        let prism = catalog("prism").unwrap();
        let ps = peripheral_subgraph(&prism, 0, 1, Kernel::Spd).unwrap();
        let e = peripheral_encoding(&ps, 1, &Caps::UNCAPPED, KprimeMode::Multiset);
        match e.kprime {
            KprimeConfiguration::Multiset { rows } => {
                assert_eq!(rows, vec![(vec![0], 0), (vec![1], 0), (vec![1], 0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
