//! Layered neighborhood extraction.
//!
//! Two hop kernels are supported: `Spd` puts a node in hop k when its
//! shortest path distance from the center is exactly k, so hops partition the
//! reachable set; `Gd` puts a node in hop k when a walk of length k from the
//! center reaches it, so hops may overlap. The union over k of the two hop
//! families is identical for any K, and hop 1 coincides.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Spd,
    Gd,
}

impl std::fmt::Display for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kernel::Spd => "spd",
            Kernel::Gd => "gd",
        })
    }
}

/// Hop sets `Q^1..Q^K` around a center node. Trailing hops stay in place as
/// empty sets, so the list always has length K. The center never appears in
/// its own hop sets (for the diffusion kernel this is a deliberate choice:
/// closed walks back to the center are dropped, which keeps the K-hop unions
/// of the two kernels equal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopSets {
    pub kernel: Kernel,
    pub center: u32,
    sets: Vec<Vec<u32>>,
}

impl HopSets {
    /// The k-th hop, 1-based. Sorted.
    pub fn hop(&self, k: usize) -> &[u32] {
        assert!(k >= 1, "hops are 1-based");
        &self.sets[k - 1]
    }

    pub fn max_hop(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn counts(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }
}

/// Hop sets by shortest path distance: `Q^k = {u : d(v,u) = k}`.
pub fn hop_sets_spd(g: &Graph, v: u32, max_hop: usize) -> Result<HopSets> {
    g.check_node(v)?;
    assert!(max_hop >= 1, "need at least one hop");
    let mut dist = vec![u32::MAX; g.node_count()];
    dist[v as usize] = 0;
    let mut frontier = vec![v];
    let mut sets = Vec::with_capacity(max_hop);
    for d in 0..max_hop as u32 {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d + 1;
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        sets.push(next.clone());
        frontier = next;
    }
    Ok(HopSets { kernel: Kernel::Spd, center: v, sets })
}

/// Hop sets by graph diffusion: `Q^k = {u != v : (A^k)[v][u] > 0}`, computed
/// by frontier expansion rather than matrix powers.
pub fn hop_sets_gd(g: &Graph, v: u32, max_hop: usize) -> Result<HopSets> {
    g.check_node(v)?;
    assert!(max_hop >= 1, "need at least one hop");
    let n = g.node_count();
    // The walk frontier keeps the center (walks may pass through it); only
    // the reported sets exclude it.
    let mut frontier = vec![false; n];
    frontier[v as usize] = true;
    let mut sets = Vec::with_capacity(max_hop);
    for _ in 0..max_hop {
        let mut next = vec![false; n];
        for u in 0..n {
            if frontier[u] {
                for &w in g.neighbors(u as u32) {
                    next[w as usize] = true;
                }
            }
        }
        sets.push(
            (0..n as u32)
                .filter(|&u| next[u as usize] && u != v)
                .collect(),
        );
        frontier = next;
    }
    Ok(HopSets { kernel: Kernel::Gd, center: v, sets })
}

pub fn hop_sets(g: &Graph, v: u32, max_hop: usize, kernel: Kernel) -> Result<HopSets> {
    match kernel {
        Kernel::Spd => hop_sets_spd(g, v, max_hop),
        Kernel::Gd => hop_sets_gd(g, v, max_hop),
    }
}

/// Per-hop neighbor counts `(a^1, ..., a^K)`; equality is component-wise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeConfiguration {
    pub kernel: Kernel,
    pub counts: Vec<usize>,
}

pub fn node_configuration(g: &Graph, v: u32, max_hop: usize, kernel: Kernel) -> Result<NodeConfiguration> {
    let hops = hop_sets(g, v, max_hop, kernel)?;
    Ok(NodeConfiguration { kernel, counts: hops.counts() })
}

/// Histogram over the nodes of `Q^{k+1,spd}` of how many edges each receives
/// from `Q^{k,spd}`; `counts[i-1]` is the number of hop-(k+1) nodes with
/// exactly `i` such edges. Trailing zero buckets are trimmed, so the entries
/// always sum to `|Q^{k+1,spd}|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrossEdgeConfiguration {
    pub hop: usize,
    pub counts: Vec<usize>,
}

/// Cross edge configuration between hops k and k+1 (spd kernel); `hop = 0`
/// uses `Q^0 = {v}`.
pub fn cross_edge_configuration(g: &Graph, v: u32, hop: usize) -> Result<CrossEdgeConfiguration> {
    g.check_node(v)?;
    let sets = hop_sets_spd(g, v, hop + 1)?;
    let inner: &[u32] = if hop == 0 {
        std::slice::from_ref(&v)
    } else {
        sets.hop(hop)
    };
    let outer = sets.hop(hop + 1);
    let mut in_inner = vec![false; g.node_count()];
    for &u in inner {
        in_inner[u as usize] = true;
    }
    let mut counts = Vec::new();
    for &w in outer {
        let back_edges = g
            .neighbors(w)
            .iter()
            .filter(|&&u| in_inner[u as usize])
            .count();
        debug_assert!(back_edges >= 1, "hop k+1 node must touch hop k");
        if counts.len() < back_edges {
            counts.resize(back_edges, 0);
        }
        counts[back_edges - 1] += 1;
    }
    Ok(CrossEdgeConfiguration { hop, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::generators::catalog;
    use crate::graph::{all_pairs_shortest_distance, walk_counts};

    #[test]
    fn spd_hops_on_cycle() {
        let c6 = catalog("cycle(6)").unwrap();
        for v in 0..6 {
            let h = hop_sets_spd(&c6, v, 3).unwrap();
            assert_eq!(h.counts(), vec![2, 2, 1]);
        }
    }

    #[test]
    fn spd_hops_match_distance_oracle() {
        let g = catalog("prism").unwrap();
        let d = all_pairs_shortest_distance(&g);
        for v in 0..6u32 {
            let h = hop_sets_spd(&g, v, 4).unwrap();
            for k in 1..=4u32 {
                let level: Vec<u32> = (0..6u32).filter(|&u| d.get(v, u) == Some(k)).collect();
                assert_eq!(h.hop(k as usize), level.as_slice());
            }
        }
    }

    #[test]
    fn spd_sizes_prism_vs_k33() {
        let prism = catalog("prism").unwrap();
        let k33 = catalog("k33").unwrap();
        for v in 0..6 {
            assert_eq!(hop_sets_spd(&prism, v, 2).unwrap().counts(), vec![3, 2]);
            assert_eq!(hop_sets_spd(&k33, v, 2).unwrap().counts(), vec![3, 2]);
            assert_eq!(hop_sets_spd(&k33, v, 4).unwrap().counts(), vec![3, 2, 0, 0]);
        }
    }

    #[test]
    fn gd_hops_match_walk_oracle() {
        let prism = catalog("prism").unwrap();
        let k33 = catalog("k33").unwrap();
        for v in 0..6 {
            assert_eq!(hop_sets_gd(&prism, v, 2).unwrap().counts()[1], 4);
            assert_eq!(hop_sets_gd(&k33, v, 2).unwrap().counts()[1], 2);
        }
        for g in [&prism, &k33] {
            for v in 0..6u32 {
                let h = hop_sets_gd(g, v, 4).unwrap();
                for k in 1..=4 {
                    let w = walk_counts(g, k);
                    let expect: Vec<u32> =
                        (0..6u32).filter(|&u| u != v && w.get(v, u) > 0).collect();
                    assert_eq!(h.hop(k), expect.as_slice());
                }
            }
        }
    }

    #[test]
    fn gd_hops_on_cycle_reenter_earlier_shells() {
        let c6 = catalog("cycle(6)").unwrap();
        let h = hop_sets_gd(&c6, 0, 3).unwrap();
        assert_eq!(h.counts(), vec![2, 2, 3]);
    }

    #[test]
    fn gd_single_edge_excludes_center() {
        let g = crate::graph::Graph::new(2, &[(0, 1)]).unwrap();
        let h = hop_sets_gd(&g, 0, 2).unwrap();
        assert_eq!(h.hop(1), &[1]);
        assert!(h.hop(2).is_empty());
    }

    #[test]
    fn kernels_agree_on_union_and_first_hop() {
        let g = catalog("prism").unwrap();
        for v in 0..6 {
            for max_hop in 1..=4 {
                let spd = hop_sets_spd(&g, v, max_hop).unwrap();
                let gd = hop_sets_gd(&g, v, max_hop).unwrap();
                assert_eq!(spd.hop(1), gd.hop(1));
                let mut u1: Vec<u32> = spd.sets().iter().flatten().copied().collect();
                let mut u2: Vec<u32> = gd.sets().iter().flatten().copied().collect();
                u1.sort_unstable();
                u1.dedup();
                u2.sort_unstable();
                u2.dedup();
                assert_eq!(u1, u2);
            }
        }
    }

    #[test]
    fn configurations() {
        let c6 = catalog("cycle(6)").unwrap();
        assert_eq!(
            node_configuration(&c6, 0, 3, Kernel::Spd).unwrap().counts,
            vec![2, 2, 1]
        );
        let prism = catalog("prism").unwrap();
        let k33 = catalog("k33").unwrap();
        let a = node_configuration(&prism, 0, 2, Kernel::Gd).unwrap();
        let b = node_configuration(&k33, 0, 2, Kernel::Gd).unwrap();
        assert_eq!(a.counts, vec![3, 4]);
        assert_eq!(b.counts, vec![3, 2]);
        assert_ne!(a, b);
        let a = node_configuration(&prism, 0, 2, Kernel::Spd).unwrap();
        let b = node_configuration(&k33, 0, 2, Kernel::Spd).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cross_edge_configurations() {
        let c6 = catalog("cycle(6)").unwrap();
        let c = cross_edge_configuration(&c6, 0, 1).unwrap();
        assert_eq!(c.counts, vec![2]);

        let k33 = catalog("k33").unwrap();
        let c = cross_edge_configuration(&k33, 0, 1).unwrap();
        assert_eq!(c.counts, vec![0, 0, 2]);

        let star = catalog("star(4)").unwrap();
        let c = cross_edge_configuration(&star, 0, 1).unwrap();
        assert!(c.counts.is_empty());
    }

    #[test]
    fn invalid_node_rejected() {
        let g = catalog("prism").unwrap();
        assert!(matches!(hop_sets_spd(&g, 6, 2), Err(Error::InvalidNode(6))));
        assert!(matches!(hop_sets_gd(&g, 9, 2), Err(Error::InvalidNode(9))));
    }
}
