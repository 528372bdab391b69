//! Folklore 2-WL over ordered node pairs — the standard realization of 3-WL
//! distinguishing power with O(n^2) state.
//!
//! Each ordered pair (u, v) starts from (u = v?, adjacency, labels) and is
//! updated with the multiset over all nodes w of the color pairs
//! ((u, w), (w, v)). Two graphs are compared by refining both in lockstep
//! inside one shared color space, each graph aggregating only over its own
//! nodes, and comparing the final pair-color multisets.

use std::collections::{HashMap, HashSet};

use crate::graph::Graph;
use crate::refine::{ColorId, Verdict};

/// Per-iteration colors of all ordered node pairs, indexed `u * n + v`.
#[derive(Debug, Clone)]
pub struct PairColoring {
    node_count: usize,
    history: Vec<Vec<ColorId>>,
}

impl PairColoring {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn iterations_run(&self) -> usize {
        self.history.len() - 1
    }

    pub fn color(&self, u: u32, v: u32) -> ColorId {
        self.final_colors()[u as usize * self.node_count + v as usize]
    }

    pub fn final_colors(&self) -> &[ColorId] {
        self.history.last().expect("history is never empty")
    }

    /// Number of distinct pair colors after each iteration.
    pub fn distinct_counts(&self) -> Vec<usize> {
        self.history
            .iter()
            .map(|row| row.iter().collect::<HashSet<_>>().len())
            .collect()
    }

    /// Sorted multiset of final pair colors plus the node count.
    pub fn fingerprint(&self) -> (usize, Vec<(ColorId, u32)>) {
        let mut counts: std::collections::BTreeMap<ColorId, u32> = Default::default();
        for &c in self.final_colors() {
            *counts.entry(c).or_insert(0) += 1;
        }
        (self.node_count, counts.into_iter().collect())
    }
}

#[derive(Default)]
struct Interner {
    map: HashMap<Vec<u8>, ColorId>,
}

impl Interner {
    fn intern(&mut self, key: &[u8]) -> ColorId {
        if let Some(&id) = self.map.get(key) {
            return id;
        }
        let id = u32::try_from(self.map.len()).expect("color id space exhausted");
        self.map.insert(key.to_vec(), id);
        id
    }
}

fn initial_colors(g: &Graph, interner: &mut Interner) -> Vec<ColorId> {
    let n = g.node_count();
    let mut colors = Vec::with_capacity(n * n);
    let mut buf = Vec::new();
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            buf.clear();
            buf.push(1);
            buf.push(u8::from(u == v));
            buf.push(u8::from(g.has_edge(u, v)));
            let labels = g.node_labels();
            buf.extend_from_slice(&labels.map_or(0, |l| l[u as usize]).to_le_bytes());
            buf.extend_from_slice(&labels.map_or(0, |l| l[v as usize]).to_le_bytes());
            buf.extend_from_slice(&g.edge_type(u, v).unwrap_or(0).to_le_bytes());
            colors.push(interner.intern(&buf));
        }
    }
    colors
}

fn update(g: &Graph, colors: &[ColorId], interner: &mut Interner) -> Vec<ColorId> {
    let n = g.node_count();
    let mut next = Vec::with_capacity(n * n);
    let mut buf = Vec::new();
    let mut mids: Vec<(ColorId, ColorId)> = Vec::with_capacity(n);
    for u in 0..n {
        for v in 0..n {
            mids.clear();
            for w in 0..n {
                mids.push((colors[u * n + w], colors[w * n + v]));
            }
            mids.sort_unstable();
            buf.clear();
            buf.push(2);
            buf.extend_from_slice(&colors[u * n + v].to_le_bytes());
            for &(a, b) in &mids {
                buf.extend_from_slice(&a.to_le_bytes());
                buf.extend_from_slice(&b.to_le_bytes());
            }
            next.push(interner.intern(&buf));
        }
    }
    next
}

fn distinct(colors: &[ColorId]) -> usize {
    colors.iter().collect::<HashSet<_>>().len()
}

/// Refines one graph to stabilization (or `max_iterations`, default n^2).
pub fn run_fwl2(g: &Graph, max_iterations: Option<usize>) -> PairColoring {
    let n = g.node_count();
    let cap = max_iterations.unwrap_or(n * n);
    let mut interner = Interner::default();
    let mut history = vec![initial_colors(g, &mut interner)];
    let mut prev_distinct = distinct(&history[0]);
    for _ in 0..cap {
        let next = update(g, history.last().unwrap(), &mut interner);
        let d = distinct(&next);
        history.push(next);
        if d == prev_distinct {
            break;
        }
        prev_distinct = d;
    }
    PairColoring { node_count: n, history }
}

/// 3-WL-power graph comparison: lockstep refinement of both graphs in one
/// shared color space until both are stable, then fingerprint comparison.
/// Graphs of different node counts are distinguished immediately.
pub fn distinguish_3wl(g1: &Graph, g2: &Graph) -> Verdict {
    if g1.node_count() != g2.node_count() {
        return Verdict::Distinguished;
    }
    let n = g1.node_count();
    let mut interner = Interner::default();
    let mut c1 = initial_colors(g1, &mut interner);
    let mut c2 = initial_colors(g2, &mut interner);
    let mut prev = distinct(&c1) + distinct(&c2);
    for _ in 0..n * n + 1 {
        c1 = update(g1, &c1, &mut interner);
        c2 = update(g2, &c2, &mut interner);
        let d = distinct(&c1) + distinct(&c2);
        if d == prev {
            break;
        }
        prev = d;
    }
    let fp = |colors: &[ColorId]| {
        let mut sorted = colors.to_vec();
        sorted.sort_unstable();
        sorted
    };
    if fp(&c1) == fp(&c2) {
        Verdict::NotDistinguished
    } else {
        Verdict::Distinguished
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::catalog;
    use crate::graph::relabel;

    #[test]
    fn cycle_vs_triangles_distinguished() {
        let c6 = catalog("cycle(6)").unwrap();
        let two = catalog("two_triangles").unwrap();
        assert_eq!(distinguish_3wl(&c6, &two), Verdict::Distinguished);
    }

    #[test]
    fn srg16_pair_not_distinguished() {
        let shrikhande = catalog("shrikhande").unwrap();
        let rook = catalog("rook4").unwrap();
        assert_eq!(distinguish_3wl(&shrikhande, &rook), Verdict::NotDistinguished);
    }

    #[test]
    fn isomorphic_copies_agree() {
        let g = catalog("prism").unwrap();
        let h = relabel(&g, &[5, 3, 1, 4, 2, 0]);
        assert_eq!(distinguish_3wl(&g, &h), Verdict::NotDistinguished);
    }

    #[test]
    fn dominates_wl1_on_small_pairs() {
        let pairs = [
            ("cycle(6)", "two_triangles"),
            ("prism", "k33"),
            ("cycle(5)", "cycle(5)"),
        ];
        for (a, b) in pairs {
            let g1 = catalog(a).unwrap();
            let g2 = catalog(b).unwrap();
            let wl1 = crate::refine::distinguish(&g1, &g2, &crate::refine::MethodSpec::wl1(8))
                .unwrap();
            let fwl2 = distinguish_3wl(&g1, &g2);
            if wl1 == Verdict::Distinguished {
                assert_eq!(fwl2, Verdict::Distinguished, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn stabilizes_quickly_on_small_graphs() {
        let g = catalog("cycle(5)").unwrap();
        let pc = run_fwl2(&g, None);
        assert!(pc.iterations_run() <= 25);
        assert_eq!(pc.node_count(), 5);
        let (n, digest) = pc.fingerprint();
        assert_eq!(n, 5);
        assert!(!digest.is_empty());
    }
}
