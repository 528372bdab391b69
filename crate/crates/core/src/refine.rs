//! Injective color refinement over layered neighborhoods.
//!
//! A refinement run assigns every node an interned color id. Interning maps
//! each distinct aggregated tuple to a fresh integer, so equal ids mean equal
//! tuples with zero collision risk; the id space is private to one run.
//! Graphs are therefore compared by refining their disjoint union jointly and
//! reading one fingerprint per component range.
//!
//! Which colors flow where is controlled by a [`RefinementConfiguration`]:
//! for every iteration l and hop k it lists the past iterations whose colors
//! the hop-k neighbors contribute. The classic 1-WL schedule, the all-hops
//! schedule, and the staggered GINE+ schedule are provided as constructors.

use std::collections::{HashMap, HashSet};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{disjoint_union_all, single_source_distances, walk_count_rows, Graph};
use crate::khop::Kernel;
use crate::peripheral::{encoding_table, Caps, KprimeConfiguration, KprimeMode, PeripheralEncoding};

pub type ColorId = u32;

/// Token used as the initial color of nodes that cannot reach a chosen
/// center (distance-based initializations only).
pub const UNREACHABLE_TOKEN: u32 = u32::MAX;

// ---------------------------------------------------------------------------
// refinement configurations
// ---------------------------------------------------------------------------

/// Per-iteration, per-hop sets of past iteration indices to aggregate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementConfiguration {
    max_hop: usize,
    /// `schedule[l][k]` is a strictly increasing subset of `0..=l`.
    schedule: Vec<Vec<Vec<usize>>>,
}

impl RefinementConfiguration {
    pub fn new(max_hop: usize, schedule: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        for (l, row) in schedule.iter().enumerate() {
            if row.len() != max_hop + 1 {
                return Err(Error::InvalidConfiguration(format!(
                    "iteration {l} schedules {} hops, expected {}",
                    row.len(),
                    max_hop + 1
                )));
            }
            for (k, past) in row.iter().enumerate() {
                if past.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidConfiguration(format!(
                        "iteration {l} hop {k}: indices must be strictly increasing"
                    )));
                }
                if let Some(&s) = past.last() {
                    if s > l {
                        return Err(Error::InvalidConfiguration(format!(
                            "iteration {l} hop {k}: index {s} refers past iteration {l}"
                        )));
                    }
                }
            }
        }
        Ok(RefinementConfiguration { max_hop, schedule })
    }

    /// Classic 1-WL: each iteration aggregates the current colors of the node
    /// itself and its direct neighbors.
    pub fn wl1(iterations: usize) -> Self {
        let schedule = (0..iterations).map(|l| vec![vec![l], vec![l]]).collect();
        RefinementConfiguration { max_hop: 1, schedule }
    }

    /// All hops aggregate the current colors every iteration.
    pub fn khop(iterations: usize, max_hop: usize) -> Self {
        let schedule = (0..iterations)
            .map(|l| vec![vec![l]; max_hop + 1])
            .collect();
        RefinementConfiguration { max_hop, schedule }
    }

    /// Staggered schedule: at iteration l, hop k contributes the colors of
    /// iteration l-k+1, so the receptive field stays at l after l iterations.
    pub fn gineplus(iterations: usize, max_hop: usize) -> Self {
        let schedule = (0..iterations)
            .map(|l| {
                (0..=max_hop)
                    .map(|k| {
                        if k == 0 {
                            vec![l]
                        } else if k <= l + 1 {
                            vec![l + 1 - k]
                        } else {
                            Vec::new()
                        }
                    })
                    .collect()
            })
            .collect();
        RefinementConfiguration { max_hop, schedule }
    }

    pub fn iterations(&self) -> usize {
        self.schedule.len()
    }

    pub fn max_hop(&self) -> usize {
        self.max_hop
    }

    fn past(&self, l: usize, k: usize) -> &[usize] {
        &self.schedule[l][k]
    }

    /// True when every scheduled entry is "the current iteration", the hop
    /// pattern does not change over time, and the node's own color is always
    /// included. Under such a schedule the partition refines monotonically
    /// and a stalled distinct-color count means a fixed point, so the run may
    /// exit early.
    fn supports_early_exit(&self) -> bool {
        let Some(first) = self.schedule.first() else {
            return true;
        };
        let pattern: Vec<bool> = first.iter().map(|p| !p.is_empty()).collect();
        if !pattern[0] {
            return false;
        }
        self.schedule.iter().enumerate().all(|(l, row)| {
            row.iter().enumerate().all(|(k, past)| {
                (past.is_empty() && !pattern[k]) || (past == &[l] && pattern[k])
            })
        })
    }
}

// ---------------------------------------------------------------------------
// interning
// ---------------------------------------------------------------------------

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

const TAG_LABEL: u8 = 1;
const TAG_TUPLE: u8 = 2;
const TAG_PERIPHERAL: u8 = 3;
const TAG_HOP: u8 = 4;

fn push_u32(buf: &mut Vec<u8>, v: u32) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn push_u64(buf: &mut Vec<u8>, v: u64) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn push_len(buf: &mut Vec<u8>, v: usize) {
    push_u64(buf, v as u64);
}

fn encode_peripheral(buf: &mut Vec<u8>, pe: &PeripheralEncoding) {
    buf.push(TAG_PERIPHERAL);
    push_len(buf, pe.edge_count_by_type.len());
    for &(ty, count) in &pe.edge_count_by_type {
        push_u32(buf, ty);
        push_u64(buf, count);
    }
    push_u64(buf, pe.component_count);
    match &pe.kprime {
        KprimeConfiguration::Sum { config_sum, edge_total } => {
            buf.push(0);
            push_len(buf, config_sum.len());
            for &c in config_sum {
                push_u64(buf, c);
            }
            push_u64(buf, *edge_total);
        }
        KprimeConfiguration::Multiset { rows } => {
            buf.push(1);
            push_len(buf, rows.len());
            for (config, edges) in rows {
                push_len(buf, config.len());
                for &c in config {
                    push_u64(buf, c);
                }
                push_u64(buf, *edges);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// hop extraction with reusable scratch (cheap on unions of many components)
// ---------------------------------------------------------------------------

struct HopScratch {
    stamp: Vec<u32>,
    epoch: u32,
}

impl HopScratch {
    fn new(n: usize) -> Self {
        HopScratch { stamp: vec![0; n], epoch: 0 }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch += 1;
        self.epoch
    }

    fn spd(&mut self, g: &Graph, v: u32, max_hop: usize) -> Vec<Vec<u32>> {
        let e = self.next_epoch();
        self.stamp[v as usize] = e;
        let mut frontier = vec![v];
        let mut sets = Vec::with_capacity(max_hop);
        for _ in 0..max_hop {
            let mut next = Vec::new();
            for &u in &frontier {
                for &w in g.neighbors(u) {
                    if self.stamp[w as usize] != e {
                        self.stamp[w as usize] = e;
                        next.push(w);
                    }
                }
            }
            next.sort_unstable();
            sets.push(next.clone());
            frontier = next;
        }
        sets
    }

    fn gd(&mut self, g: &Graph, v: u32, max_hop: usize) -> Vec<Vec<u32>> {
        // walk frontier keeps the center; reported sets drop it
        let mut cur = vec![v];
        let mut sets = Vec::with_capacity(max_hop);
        for _ in 0..max_hop {
            let e = self.next_epoch();
            let mut next = Vec::new();
            for &u in &cur {
                for &w in g.neighbors(u) {
                    if self.stamp[w as usize] != e {
                        self.stamp[w as usize] = e;
                        next.push(w);
                    }
                }
            }
            next.sort_unstable();
            sets.push(next.iter().copied().filter(|&u| u != v).collect());
            cur = next;
        }
        sets
    }
}

// ---------------------------------------------------------------------------
// colorings
// ---------------------------------------------------------------------------

/// Interned per-node colors, one row per iteration (row 0 is the initial
/// coloring). Runs under an early-exit schedule may record fewer rows than
/// requested once the partition stabilizes; later iterations could only
/// relabel the same partition.
#[derive(Debug, Clone)]
pub struct Coloring {
    history: Vec<Vec<ColorId>>,
    requested_iterations: usize,
}

impl Coloring {
    pub fn node_count(&self) -> usize {
        self.history[0].len()
    }

    pub fn iterations_run(&self) -> usize {
        self.history.len() - 1
    }

    pub fn requested_iterations(&self) -> usize {
        self.requested_iterations
    }

    /// Colors after iteration `l`, clamped to the last recorded row (valid
    /// because early exit only happens at a fixed point).
    pub fn colors_at(&self, l: usize) -> &[ColorId] {
        &self.history[l.min(self.history.len() - 1)]
    }

    pub fn final_colors(&self) -> &[ColorId] {
        self.history.last().expect("history is never empty")
    }

    /// Number of distinct colors within `range` after each iteration.
    pub fn distinct_counts(&self, range: Range<usize>) -> Vec<usize> {
        self.history
            .iter()
            .map(|row| row[range.clone()].iter().collect::<HashSet<_>>().len())
            .collect()
    }
}

/// Permutation-invariant digest of a color multiset plus the node count.
/// Comparable only between colorings produced by the same run.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub node_count: usize,
    pub digest: Vec<(ColorId, u32)>,
}

fn fingerprint_of(colors: &[ColorId]) -> Fingerprint {
    let mut counts: std::collections::BTreeMap<ColorId, u32> = std::collections::BTreeMap::new();
    for &c in colors {
        *counts.entry(c).or_insert(0) += 1;
    }
    Fingerprint { node_count: colors.len(), digest: counts.into_iter().collect() }
}

/// Digest of the whole coloring at `at_iteration` (default: final).
pub fn fingerprint(coloring: &Coloring, at_iteration: Option<usize>) -> Fingerprint {
    fingerprint_range(coloring, at_iteration, 0..coloring.node_count())
}

/// Digest of one node range, for reading per-graph results out of a joint
/// union run.
pub fn fingerprint_range(
    coloring: &Coloring,
    at_iteration: Option<usize>,
    range: Range<usize>,
) -> Fingerprint {
    let row = match at_iteration {
        Some(l) => {
            assert!(
                l <= coloring.requested_iterations(),
                "iteration {l} beyond requested {}",
                coloring.requested_iterations()
            );
            coloring.colors_at(l)
        }
        None => coloring.final_colors(),
    };
    fingerprint_of(&row[range])
}

// ---------------------------------------------------------------------------
// the engine
// ---------------------------------------------------------------------------

struct EngineOptions<'a> {
    kernel: Kernel,
    initial: Option<&'a [u32]>,
    peripheral: Option<&'a [Vec<PeripheralEncoding>]>,
    use_edge_types: bool,
    use_walk_counts: bool,
}

fn run_engine(g: &Graph, config: &RefinementConfiguration, opts: &EngineOptions) -> Result<Coloring> {
    let n = g.node_count();
    if let Some(init) = opts.initial {
        assert_eq!(init.len(), n, "one initial label per node");
    }
    let max_hop = config.max_hop();
    let mut interner = Interner::default();
    let mut buf = Vec::new();

    let labels = opts.initial.or_else(|| g.node_labels());
    let init: Vec<ColorId> = (0..n)
        .map(|v| {
            buf.clear();
            buf.push(TAG_LABEL);
            push_u32(&mut buf, labels.map_or(0, |l| l[v]));
            interner.intern(&buf)
        })
        .collect();
    let mut history = vec![init];
    if config.iterations() == 0 || n == 0 {
        return Ok(Coloring { history, requested_iterations: config.iterations() });
    }

    let mut scratch = HopScratch::new(n);
    let hops: Vec<Vec<Vec<u32>>> = (0..n as u32)
        .map(|v| match opts.kernel {
            Kernel::Spd => scratch.spd(g, v, max_hop),
            Kernel::Gd => scratch.gd(g, v, max_hop),
        })
        .collect();

    let walks: Option<Vec<Vec<Vec<u64>>>> = opts
        .use_walk_counts
        .then(|| (0..n as u32).map(|v| walk_count_rows(g, v, max_hop)).collect());

    let peri_tokens: Option<Vec<Vec<ColorId>>> = opts.peripheral.map(|table| {
        table
            .iter()
            .map(|per_node| {
                per_node
                    .iter()
                    .map(|pe| {
                        buf.clear();
                        encode_peripheral(&mut buf, pe);
                        interner.intern(&buf)
                    })
                    .collect()
            })
            .collect()
    });

    let early_exit = config.supports_early_exit();
    let typed = opts.use_edge_types && g.has_edge_types();
    let mut distinct_prev = history[0].iter().collect::<HashSet<_>>().len();
    let mut elems: Vec<(ColorId, u32, u64)> = Vec::new();

    for l in 0..config.iterations() {
        let mut next = Vec::with_capacity(n);
        for v in 0..n {
            let self_node = [v as u32];
            buf.clear();
            buf.push(TAG_TUPLE);
            for k in 0..=max_hop {
                let past = config.past(l, k);
                if past.is_empty() {
                    continue;
                }
                buf.push(TAG_HOP);
                push_u32(&mut buf, k as u32);
                let hop_typed = typed && k == 1;
                let hop_counted = walks.is_some() && k >= 1;
                buf.push(u8::from(hop_typed) | u8::from(hop_counted) << 1);
                push_len(&mut buf, past.len());
                for &s in past {
                    let members: &[u32] = if k == 0 { &self_node } else { &hops[v][k - 1] };
                    elems.clear();
                    for &u in members {
                        let color = history[s][u as usize];
                        let ty = if hop_typed {
                            g.edge_type(v as u32, u).unwrap_or(0)
                        } else {
                            0
                        };
                        let wc = match &walks {
                            Some(rows) if k >= 1 => rows[v][k - 1][u as usize],
                            _ => 0,
                        };
                        elems.push((color, ty, wc));
                    }
                    elems.sort_unstable();
                    push_len(&mut buf, elems.len());
                    for &(color, ty, wc) in &elems {
                        push_u32(&mut buf, color);
                        if hop_typed {
                            push_u32(&mut buf, ty);
                        }
                        if hop_counted {
                            push_u64(&mut buf, wc);
                        }
                    }
                }
                if k >= 1 {
                    if let Some(tokens) = &peri_tokens {
                        buf.push(TAG_PERIPHERAL);
                        push_u32(&mut buf, tokens[v][k - 1]);
                    }
                }
            }
            next.push(interner.intern(&buf));
        }
        history.push(next);
        if early_exit {
            let distinct = history[l + 1].iter().collect::<HashSet<_>>().len();
            if distinct == distinct_prev {
                break;
            }
            distinct_prev = distinct;
        }
    }
    Ok(Coloring { history, requested_iterations: config.iterations() })
}

// ---------------------------------------------------------------------------
// public runners
// ---------------------------------------------------------------------------

/// Runs the general refinement under an arbitrary configuration. Initial
/// colors come from `initial_labels`, else the graph's node labels, else one
/// shared color. Edge types and walk counts are not consulted here.
pub fn run_general_cr(
    g: &Graph,
    config: &RefinementConfiguration,
    kernel: Kernel,
    initial_labels: Option<&[u32]>,
) -> Result<Coloring> {
    run_engine(
        g,
        config,
        &EngineOptions {
            kernel,
            initial: initial_labels,
            peripheral: None,
            use_edge_types: false,
            use_walk_counts: false,
        },
    )
}

/// 1-WL refinement (kernel-independent).
pub fn run_wl1(g: &Graph, iterations: usize) -> Result<Coloring> {
    run_general_cr(g, &RefinementConfiguration::wl1(iterations), Kernel::Spd, None)
}

/// All-hops refinement. Hop-1 contributions carry edge types when the graph
/// has them; with `use_walk_counts` every hop-k contribution is paired with
/// the number of length-k walks from the node.
pub fn run_khop(
    g: &Graph,
    max_hop: usize,
    iterations: usize,
    kernel: Kernel,
    use_walk_counts: bool,
) -> Result<Coloring> {
    run_engine(
        g,
        &RefinementConfiguration::khop(iterations, max_hop),
        &EngineOptions {
            kernel,
            initial: None,
            peripheral: None,
            use_edge_types: true,
            use_walk_counts,
        },
    )
}

/// All-hops refinement where every hop-k contribution also includes the
/// (precomputed, constant) encoding of that hop's peripheral subgraph.
#[allow(clippy::too_many_arguments)]
pub fn run_kp(
    g: &Graph,
    max_hop: usize,
    iterations: usize,
    kernel: Kernel,
    k_prime: usize,
    caps: &Caps,
    kprime_mode: KprimeMode,
    use_walk_counts: bool,
) -> Result<Coloring> {
    let table = encoding_table(g, max_hop, kernel, k_prime, caps, kprime_mode)?;
    run_engine(
        g,
        &RefinementConfiguration::khop(iterations, max_hop),
        &EngineOptions {
            kernel,
            initial: None,
            peripheral: Some(&table),
            use_edge_types: true,
            use_walk_counts,
        },
    )
}

/// Initial tokens for distance-to-center refinement: the distance itself,
/// with [`UNREACHABLE_TOKEN`] for nodes in other components.
pub fn de1_initial_labels(g: &Graph, center: u32) -> Result<Vec<u32>> {
    g.check_node(center)?;
    Ok(single_source_distances(g, center)
        .into_iter()
        .map(|d| d.unwrap_or(UNREACHABLE_TOKEN))
        .collect())
}

/// Distance-encoding refinement: initialize every node with its distance to
/// `center`, then run 1-WL for `iterations` rounds.
pub fn run_de1(g: &Graph, center: u32, iterations: usize) -> Result<Coloring> {
    let labels = de1_initial_labels(g, center)?;
    run_general_cr(g, &RefinementConfiguration::wl1(iterations), Kernel::Spd, Some(&labels))
}

// ---------------------------------------------------------------------------
// method specifications and verdicts
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Wl1,
    KHop,
    GinePlus,
    Kp,
    De1,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Wl1 => "wl1",
            Method::KHop => "khop",
            Method::GinePlus => "gineplus",
            Method::Kp => "kp",
            Method::De1 => "de1",
        })
    }
}

/// Everything needed to run one refinement method. `kernel` and `hops` are
/// ignored by `Wl1` and `De1`; `k_prime`, `caps`, and `kprime_mode` matter
/// only for `Kp`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub method: Method,
    pub kernel: Kernel,
    pub hops: usize,
    pub iterations: usize,
    pub k_prime: usize,
    pub walk_counts: bool,
    pub caps: Caps,
    pub kprime_mode: KprimeMode,
}

impl MethodSpec {
    pub fn wl1(iterations: usize) -> Self {
        MethodSpec {
            method: Method::Wl1,
            kernel: Kernel::Spd,
            hops: 1,
            iterations,
            k_prime: 0,
            walk_counts: false,
            caps: Caps::UNCAPPED,
            kprime_mode: KprimeMode::Sum,
        }
    }

    pub fn khop(kernel: Kernel, hops: usize, iterations: usize) -> Self {
        MethodSpec { method: Method::KHop, kernel, hops, ..Self::wl1(iterations) }
    }

    pub fn gineplus(hops: usize, iterations: usize) -> Self {
        MethodSpec { method: Method::GinePlus, hops, ..Self::wl1(iterations) }
    }

    /// Peripheral-enhanced spec with uncapped counts (the expressiveness
    /// default); set `caps` explicitly for bounded-vocabulary use.
    pub fn kp(kernel: Kernel, hops: usize, iterations: usize, k_prime: usize) -> Self {
        MethodSpec { method: Method::Kp, kernel, hops, k_prime, ..Self::wl1(iterations) }
    }

    pub fn de1(iterations: usize) -> Self {
        MethodSpec { method: Method::De1, ..Self::wl1(iterations) }
    }

    pub fn with_walk_counts(mut self, on: bool) -> Self {
        self.walk_counts = on;
        self
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Distinguished,
    NotDistinguished,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Distinguished => "DISTINGUISHED",
            Verdict::NotDistinguished => "NOT_DISTINGUISHED",
        })
    }
}

/// Runs `spec` on one graph. `De1` has no single-graph run (it is defined per
/// center); use [`run_de1`] or the distinguishers instead.
pub fn run_method(g: &Graph, spec: &MethodSpec) -> Result<Coloring> {
    match spec.method {
        Method::Wl1 => run_wl1(g, spec.iterations),
        Method::KHop => run_khop(g, spec.hops, spec.iterations, spec.kernel, spec.walk_counts),
        Method::GinePlus => run_engine(
            g,
            &RefinementConfiguration::gineplus(spec.iterations, spec.hops),
            &EngineOptions {
                kernel: spec.kernel,
                initial: None,
                peripheral: None,
                use_edge_types: true,
                use_walk_counts: spec.walk_counts,
            },
        ),
        Method::Kp => run_kp(
            g,
            spec.hops,
            spec.iterations,
            spec.kernel,
            spec.k_prime,
            &spec.caps,
            spec.kprime_mode,
            spec.walk_counts,
        ),
        Method::De1 => Err(Error::InvalidConfiguration(
            "de1 is defined per center node; use run_de1 or a distinguisher".into(),
        )),
    }
}

/// A graph's identity under one joint refinement run. `De1` graphs are
/// summarized per center (one labeled run per node), everything else by a
/// single color multiset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphSignature {
    Single(Fingerprint),
    PerCenter(Vec<Fingerprint>),
}

/// Jointly refines the disjoint union of all graphs and returns one
/// comparable signature per graph.
pub fn graph_signatures(graphs: &[&Graph], spec: &MethodSpec) -> Result<Vec<GraphSignature>> {
    if graphs.is_empty() {
        return Ok(Vec::new());
    }
    if spec.method == Method::De1 {
        return de1_graph_signatures(graphs, spec.iterations);
    }
    let (union, offsets) = disjoint_union_all(graphs);
    let coloring = run_method(&union, spec)?;
    Ok(graphs
        .iter()
        .zip(&offsets)
        .map(|(g, &off)| {
            let range = off as usize..off as usize + g.node_count();
            GraphSignature::Single(fingerprint_range(&coloring, None, range))
        })
        .collect())
}

/// Expensive whole-graph mode for distance-encoding: every node takes a turn
/// as the center, each labeled copy is refined jointly, and the graph
/// signature is the sorted multiset of per-copy fingerprints.
fn de1_graph_signatures(graphs: &[&Graph], iterations: usize) -> Result<Vec<GraphSignature>> {
    let mut copies: Vec<&Graph> = Vec::new();
    let mut centers: Vec<(usize, u32)> = Vec::new();
    for (gi, g) in graphs.iter().enumerate() {
        for c in 0..g.node_count() as u32 {
            copies.push(g);
            centers.push((gi, c));
        }
    }
    let (union, offsets) = disjoint_union_all(&copies);
    let mut labels = vec![0u32; union.node_count()];
    for ((&(_, c), &off), g) in centers.iter().zip(&offsets).zip(&copies) {
        let local = de1_initial_labels(g, c)?;
        labels[off as usize..off as usize + g.node_count()].copy_from_slice(&local);
    }
    let coloring = run_general_cr(
        &union,
        &RefinementConfiguration::wl1(iterations),
        Kernel::Spd,
        Some(&labels),
    )?;
    let mut per_graph: Vec<Vec<Fingerprint>> = vec![Vec::new(); graphs.len()];
    for ((&(gi, _), &off), g) in centers.iter().zip(&offsets).zip(&copies) {
        let range = off as usize..off as usize + g.node_count();
        per_graph[gi].push(fingerprint_range(&coloring, None, range));
    }
    Ok(per_graph
        .into_iter()
        .map(|mut fps| {
            fps.sort();
            GraphSignature::PerCenter(fps)
        })
        .collect())
}

/// Joint-union graph distinguishability. Graphs of different node counts are
/// distinguished immediately.
pub fn distinguish(g1: &Graph, g2: &Graph, spec: &MethodSpec) -> Result<Verdict> {
    if g1.node_count() != g2.node_count() {
        return Ok(Verdict::Distinguished);
    }
    let sigs = graph_signatures(&[g1, g2], spec)?;
    Ok(if sigs[0] == sigs[1] {
        Verdict::NotDistinguished
    } else {
        Verdict::Distinguished
    })
}

/// Joint-union node distinguishability: compares the final colors of `v1` in
/// `g1` and `v2` in `g2`. For `De1` each component is labeled with distances
/// from its own chosen node first.
pub fn node_distinguish(
    g1: &Graph,
    v1: u32,
    g2: &Graph,
    v2: u32,
    spec: &MethodSpec,
) -> Result<Verdict> {
    g1.check_node(v1)?;
    g2.check_node(v2)?;
    let (union, offsets) = disjoint_union_all(&[g1, g2]);
    let coloring = match spec.method {
        Method::De1 => {
            let mut labels = vec![0u32; union.node_count()];
            for ((g, &off), &center) in [g1, g2].iter().zip(&offsets).zip(&[v1, v2]) {
                let local = de1_initial_labels(g, center)?;
                labels[off as usize..off as usize + g.node_count()].copy_from_slice(&local);
            }
            run_general_cr(
                &union,
                &RefinementConfiguration::wl1(spec.iterations),
                Kernel::Spd,
                Some(&labels),
            )?
        }
        _ => run_method(&union, spec)?,
    };
    let colors = coloring.final_colors();
    Ok(
        if colors[v1 as usize] == colors[offsets[1] as usize + v2 as usize] {
            Verdict::NotDistinguished
        } else {
            Verdict::Distinguished
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::catalog;
    use crate::graph::Graph;

    fn uncapped_kp(kernel: Kernel, hops: usize, iterations: usize, k_prime: usize) -> MethodSpec {
        MethodSpec::kp(kernel, hops, iterations, k_prime)
    }

    #[test]
    fn wl1_fails_on_cycle_vs_triangles() {
        let c6 = catalog("cycle(6)").unwrap();
        let two = catalog("two_triangles").unwrap();
        let v = distinguish(&c6, &two, &MethodSpec::wl1(10)).unwrap();
        assert_eq!(v, Verdict::NotDistinguished);
    }

    #[test]
    fn khop_splits_cycle_vs_triangles() {
        let c6 = catalog("cycle(6)").unwrap();
        let two = catalog("two_triangles").unwrap();
        let v = distinguish(&c6, &two, &MethodSpec::khop(Kernel::Spd, 2, 1)).unwrap();
        assert_eq!(v, Verdict::Distinguished);
    }

    #[test]
    fn zero_iterations_single_color() {
        let g = catalog("prism").unwrap();
        let coloring = run_wl1(&g, 0).unwrap();
        let fp = fingerprint(&coloring, Some(0));
        assert_eq!(fp.digest.len(), 1);
    }

    #[test]
    fn khop_with_one_hop_equals_wl1() {
        for name in ["prism", "k33", "cycle(7)", "star(4)"] {
            let g = catalog(name).unwrap();
            let a = run_wl1(&g, 4).unwrap();
            let b = run_khop(&g, 1, 4, Kernel::Spd, false).unwrap();
            for l in 0..=a.iterations_run().min(b.iterations_run()) {
                assert_eq!(
                    partition_of(a.colors_at(l)),
                    partition_of(b.colors_at(l)),
                    "{name} iteration {l}"
                );
            }
        }
    }

    fn partition_of(colors: &[ColorId]) -> Vec<Vec<usize>> {
        let mut groups: HashMap<ColorId, Vec<usize>> = HashMap::new();
        for (i, &c) in colors.iter().enumerate() {
            groups.entry(c).or_default().push(i);
        }
        let mut parts: Vec<Vec<usize>> = groups.into_values().collect();
        parts.sort();
        parts
    }

    #[test]
    fn first_layer_color_equals_node_configuration() {
        // after one iteration on an unlabeled graph, two nodes share a color
        // iff their per-hop counts agree
        let g = catalog("prism").unwrap();
        let h = catalog("star(4)").unwrap();
        let (union, _) = crate::graph::disjoint_union(&g, &h);
        let coloring = run_khop(&union, 3, 1, Kernel::Spd, false).unwrap();
        let colors = coloring.final_colors();
        for a in 0..union.node_count() as u32 {
            for b in 0..union.node_count() as u32 {
                let ca = crate::khop::node_configuration(&union, a, 3, Kernel::Spd).unwrap();
                let cb = crate::khop::node_configuration(&union, b, 3, Kernel::Spd).unwrap();
                assert_eq!(
                    colors[a as usize] == colors[b as usize],
                    ca == cb,
                    "nodes {a},{b}"
                );
            }
        }
    }

    #[test]
    fn kernel_choice_splits_the_six_node_pair() {
        let prism = catalog("prism").unwrap();
        let k33 = catalog("k33").unwrap();
        // diffusion kernel separates the node pair at K=2, L=1
        let v = node_distinguish(&prism, 0, &k33, 0, &MethodSpec::khop(Kernel::Gd, 2, 1)).unwrap();
        assert_eq!(v, Verdict::Distinguished);
        // distance kernel cannot, at any depth
        for l in 1..=5 {
            let v =
                node_distinguish(&prism, 0, &k33, 0, &MethodSpec::khop(Kernel::Spd, 2, l)).unwrap();
            assert_eq!(v, Verdict::NotDistinguished, "L={l}");
        }
        // peripheral edge counts (1 vs 0) settle it even at K=1, k'=0
        for kernel in [Kernel::Spd, Kernel::Gd] {
            let v = node_distinguish(&prism, 0, &k33, 0, &uncapped_kp(kernel, 1, 1, 0)).unwrap();
            assert_eq!(v, Verdict::Distinguished);
        }
    }

    #[test]
    fn de1_distinguishes_where_spd_khop_cannot() {
        let prism = catalog("prism").unwrap();
        let k33 = catalog("k33").unwrap();
        let v = node_distinguish(&prism, 0, &k33, 0, &MethodSpec::de1(2)).unwrap();
        assert_eq!(v, Verdict::Distinguished);
        // at L=0 the coloring is exactly the distance partition
        let coloring = run_de1(&prism, 0, 0).unwrap();
        let parts = partition_of(coloring.final_colors());
        assert_eq!(parts, vec![vec![0], vec![1, 2, 3], vec![4, 5]]);
        // one-node graph: single color
        let single = Graph::new(1, &[]).unwrap();
        let coloring = run_de1(&single, 0, 3).unwrap();
        assert_eq!(fingerprint(&coloring, None).digest.len(), 1);
    }

    #[test]
    fn joint_runs_are_permutation_invariant() {
        let g = catalog("shrikhande").unwrap();
        let perm: Vec<u32> = (0..16).map(|i| (i * 7 + 3) % 16).collect();
        let h = crate::graph::relabel(&g, &perm);
        for spec in [
            MethodSpec::wl1(3),
            MethodSpec::khop(Kernel::Gd, 3, 2),
            uncapped_kp(Kernel::Spd, 2, 2, 1),
            MethodSpec::de1(3),
        ] {
            assert_eq!(distinguish(&g, &h, &spec).unwrap(), Verdict::NotDistinguished);
        }
    }

    #[test]
    fn self_comparison_never_distinguishes() {
        let g = catalog("rook4").unwrap();
        assert_eq!(
            distinguish(&g, &g, &uncapped_kp(Kernel::Spd, 2, 2, 2)).unwrap(),
            Verdict::NotDistinguished
        );
        assert_eq!(
            node_distinguish(&g, 5, &g, 5, &MethodSpec::khop(Kernel::Spd, 2, 2)).unwrap(),
            Verdict::NotDistinguished
        );
    }

    #[test]
    fn different_sizes_distinguished_immediately() {
        let a = catalog("cycle(6)").unwrap();
        let b = catalog("cycle(7)").unwrap();
        assert_eq!(
            distinguish(&a, &b, &MethodSpec::wl1(1)).unwrap(),
            Verdict::Distinguished
        );
    }

    #[test]
    fn srg16_pair_khop_blind_kp_sighted() {
        let shrikhande = catalog("shrikhande").unwrap();
        let rook = catalog("rook4").unwrap();
        for kernel in [Kernel::Spd, Kernel::Gd] {
            for hops in 1..=4 {
                for iterations in 1..=3 {
                    let v = distinguish(
                        &shrikhande,
                        &rook,
                        &MethodSpec::khop(kernel, hops, iterations),
                    )
                    .unwrap();
                    assert_eq!(v, Verdict::NotDistinguished, "{kernel} K={hops} L={iterations}");
                }
            }
        }
        let v = distinguish(&shrikhande, &rook, &uncapped_kp(Kernel::Spd, 1, 1, 1)).unwrap();
        assert_eq!(v, Verdict::Distinguished);
    }

    #[test]
    fn monotone_refinement_in_iterations() {
        let g = catalog("prism").unwrap();
        let h = Graph::new(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (0, 3)])
            .unwrap();
        let (union, _) = crate::graph::disjoint_union(&g, &h);
        for spec in [
            MethodSpec::wl1(6),
            MethodSpec::khop(Kernel::Spd, 2, 6),
            MethodSpec::gineplus(3, 6),
        ] {
            let coloring = run_method(&union, &spec).unwrap();
            for l in 0..coloring.iterations_run() {
                assert!(refines(coloring.colors_at(l + 1), coloring.colors_at(l)));
            }
        }
    }

    fn refines(fine: &[ColorId], coarse: &[ColorId]) -> bool {
        let mut map: HashMap<ColorId, ColorId> = HashMap::new();
        fine.iter().zip(coarse).all(|(&f, &c)| *map.entry(f).or_insert(c) == c)
    }

    #[test]
    fn monotone_refinement_in_hops() {
        let g = Graph::new(8, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 7)])
            .unwrap();
        let mut prev: Option<Vec<Vec<usize>>> = None;
        for hops in 1..=4 {
            let coloring = run_khop(&g, hops, 2, Kernel::Spd, false).unwrap();
            let parts = partition_of(coloring.colors_at(2));
            if let Some(prev_parts) = &prev {
                // every class at K+1 sits inside a class at K
                for part in &parts {
                    assert!(prev_parts
                        .iter()
                        .any(|coarse| part.iter().all(|v| coarse.contains(v))));
                }
            }
            prev = Some(parts);
        }
    }

    #[test]
    fn invalid_configuration_rejected() {
        let bad = RefinementConfiguration::new(1, vec![vec![vec![1], vec![0]]]);
        assert!(matches!(bad, Err(Error::InvalidConfiguration(_))));
        let bad = RefinementConfiguration::new(1, vec![vec![vec![0]]]);
        assert!(matches!(bad, Err(Error::InvalidConfiguration(_))));
    }

    #[test]
    fn walk_counts_enrich_contributions() {
        // star(3) center vs leaf environments under gd with walk counts at K=2:
        // colors refine at least as much as without
        let g = catalog("star(3)").unwrap();
        let plain = run_khop(&g, 2, 1, Kernel::Gd, false).unwrap();
        let counted = run_khop(&g, 2, 1, Kernel::Gd, true).unwrap();
        let p1 = partition_of(plain.final_colors());
        let p2 = partition_of(counted.final_colors());
        for part in &p2 {
            assert!(p1.iter().any(|coarse| part.iter().all(|v| coarse.contains(v))));
        }
    }

    #[test]
    fn edge_types_feed_hop_one() {
        let a = Graph::with_attributes(3, &[(0, 1), (1, 2)], None, Some(vec![5, 5])).unwrap();
        let b = Graph::with_attributes(3, &[(0, 1), (1, 2)], None, Some(vec![5, 9])).unwrap();
        let v = distinguish(&a, &b, &MethodSpec::khop(Kernel::Spd, 1, 2)).unwrap();
        assert_eq!(v, Verdict::Distinguished);
    }
}
