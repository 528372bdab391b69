//! Graph sources: the uniform-pairing regular graph model, circulant skip
//! graphs, a small catalog of named hard instances, seeded random graphs, and
//! exhaustive enumeration of small connected graphs up to isomorphism.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Identifier of the seeded PRNG stored alongside experiment outputs.
pub const RNG_ALGORITHM: &str = "chacha12";

pub fn seeded_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Default retry budget for the pairing model.
pub const DEFAULT_MAX_RETRIES: usize = 10_000;

/// The ten-class circulant benchmark uses n = 41 with these skips.
pub const CSL_BENCHMARK_SKIPS: [usize; 10] = [2, 3, 4, 5, 6, 9, 11, 12, 13, 16];
pub const CSL_BENCHMARK_NODES: usize = 41;

/// Uniform random r-regular graph by stub pairing: all n*r stubs are paired
/// uniformly at random and the whole pairing is rejected on any self-loop or
/// duplicate edge, so accepted outcomes are uniform over simple graphs.
pub fn random_regular(n: usize, r: usize, seed: u64) -> Result<Graph> {
    random_regular_with(n, r, &mut seeded_rng(seed), DEFAULT_MAX_RETRIES)
}

pub fn random_regular_with<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    rng: &mut R,
    max_retries: usize,
) -> Result<Graph> {
    if r < 3 || r >= n || (n * r) % 2 != 0 {
        return Err(Error::InvalidDegree { nodes: n, degree: r });
    }
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat_n(v, r)).collect();
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(n * r / 2);
    let mut seen = std::collections::HashSet::with_capacity(n * r / 2);
    for _ in 0..max_retries {
        stubs.shuffle(rng);
        edges.clear();
        seen.clear();
        let mut ok = true;
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !seen.insert((u.min(v), u.max(v))) {
                ok = false;
                break;
            }
            edges.push((u, v));
        }
        if ok {
            return Graph::new(n, &edges);
        }
    }
    Err(Error::RetryExhausted(max_retries))
}

/// Circulant on `0..n`: the cycle plus chords i <-> i+skip (mod n). Rejects
/// skips that collide with cycle edges or pair up with themselves, so the
/// result is always simple and 4-regular.
pub fn csl(n: usize, skip: usize) -> Result<Graph> {
    if n < 5 || skip < 2 || skip > n - 2 || 2 * skip == n {
        return Err(Error::InvalidSkip { nodes: n, skip });
    }
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..n {
        edges.push((i as u32, ((i + 1) % n) as u32));
        edges.push((i as u32, ((i + skip) % n) as u32));
    }
    Graph::new(n, &edges)
}

/// The ten benchmark circulants csl(41, s).
pub fn csl_benchmark() -> Vec<Graph> {
    CSL_BENCHMARK_SKIPS
        .iter()
        .map(|&s| csl(CSL_BENCHMARK_NODES, s).expect("benchmark skips are valid"))
        .collect()
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::UnknownName(format!("cycle({n}): need n >= 3")));
    }
    let edges: Vec<(u32, u32)> = (0..n).map(|i| (i as u32, ((i + 1) % n) as u32)).collect();
    Graph::new(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            edges.push((i, j));
        }
    }
    Graph::new(n, &edges)
}

/// Star with `leaves` rays; node 0 is the center.
pub fn star(leaves: usize) -> Result<Graph> {
    let edges: Vec<(u32, u32)> = (1..=leaves as u32).map(|v| (0, v)).collect();
    Graph::new(leaves + 1, &edges)
}

/// Triangular prism: two triangles {0,1,2}, {3,4,5} joined by a matching.
pub fn prism() -> Graph {
    Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
        .expect("static construction")
}

/// Complete bipartite graph on sides {0,1,2} and {3,4,5}.
pub fn k33() -> Graph {
    let edges: Vec<(u32, u32)> = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
    Graph::new(6, &edges).expect("static construction")
}

pub fn two_triangles() -> Graph {
    Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).expect("static construction")
}

/// Nodes are Z4 x Z4 (index 4a+b); (a,b) ~ (c,d) iff the difference is one
/// of +-(1,0), +-(0,1), +-(1,1).
pub fn shrikhande() -> Graph {
    let diffs = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)];
    let mut edges = Vec::new();
    for a in 0..4u32 {
        for b in 0..4u32 {
            for &(da, db) in &diffs {
                let (c, d) = ((a + da) % 4, (b + db) % 4);
                let (u, v) = (4 * a + b, 4 * c + d);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::new(16, &edges).expect("static construction")
}

/// Nodes are Z4 x Z4 (index 4a+b); adjacent iff same row or same column.
pub fn rook4() -> Graph {
    let mut edges = Vec::new();
    for u in 0..16u32 {
        for v in u + 1..16 {
            let (a, b) = (u / 4, u % 4);
            let (c, d) = (v / 4, v % 4);
            if a == c || b == d {
                edges.push((u, v));
            }
        }
    }
    Graph::new(16, &edges).expect("static construction")
}

/// Looks up a named construction: `prism`, `k33`, `shrikhande`, `rook4`,
/// `two_triangles`, or parametric `cycle(n)`, `complete(n)`, `star(n)`.
pub fn catalog(name: &str) -> Result<Graph> {
    match name {
        "prism" => return Ok(prism()),
        "k33" => return Ok(k33()),
        "shrikhande" => return Ok(shrikhande()),
        "rook4" => return Ok(rook4()),
        "two_triangles" => return Ok(two_triangles()),
        _ => {}
    }
    if let Some((kind, arg)) = name
        .strip_suffix(')')
        .and_then(|rest| rest.split_once('('))
    {
        let n: usize = arg
            .parse()
            .map_err(|_| Error::UnknownName(name.to_string()))?;
        return match kind {
            "cycle" => cycle(n),
            "complete" => complete(n),
            "star" => star(n),
            _ => Err(Error::UnknownName(name.to_string())),
        };
    }
    Err(Error::UnknownName(name.to_string()))
}

/// Seeded Erdos-Renyi graph: every pair independently with probability `p`.
pub fn random_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    random_er_with(n, p, &mut seeded_rng(seed))
}

pub fn random_er_with<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut edges = Vec::new();
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, &edges)
}

/// Node cap for exhaustive enumeration.
pub const ENUMERATE_MAX_NODES: usize = 7;

/// All connected graphs on `n` nodes up to isomorphism, in ascending order of
/// their canonical edge bitmasks.
///
/// Works over the 2^C(n,2) labeled edge masks: the first unclaimed connected
/// mask starts a new class, after which every permutation of it is marked
/// claimed, so no isomorphism tests are needed.
pub fn enumerate_connected(n: usize) -> Result<Vec<Graph>> {
    if n > ENUMERATE_MAX_NODES {
        return Err(Error::TooLarge { got: n, limit: ENUMERATE_MAX_NODES });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let bits = pairs.len();
    let bit_of = |i: usize, j: usize| -> usize {
        let (lo, hi) = (i.min(j), i.max(j));
        pairs.iter().position(|&p| p == (lo, hi)).unwrap()
    };
    // bit_map[p][b]: where bit b lands under permutation p
    let perms = permutations(n);
    let bit_maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|perm| {
            (0..bits)
                .map(|b| bit_of(perm[pairs[b].0], perm[pairs[b].1]))
                .collect()
        })
        .collect();

    let mut claimed = vec![false; 1usize << bits];
    let mut out = Vec::new();
    for mask in 0..1u32 << bits {
        if claimed[mask as usize] || !mask_connected(mask, n, &pairs) {
            continue;
        }
        let edges: Vec<(u32, u32)> = (0..bits)
            .filter(|&b| mask >> b & 1 == 1)
            .map(|b| (pairs[b].0 as u32, pairs[b].1 as u32))
            .collect();
        out.push(Graph::new(n, &edges).expect("mask edges are valid"));
        for bit_map in &bit_maps {
            let mut permuted = 0u32;
            for b in 0..bits {
                if mask >> b & 1 == 1 {
                    permuted |= 1 << bit_map[b];
                }
            }
            claimed[permuted as usize] = true;
        }
    }
    Ok(out)
}

fn mask_connected(mask: u32, n: usize, pairs: &[(usize, usize)]) -> bool {
    let mut adj = [0u8; ENUMERATE_MAX_NODES];
    for (b, &(i, j)) in pairs.iter().enumerate() {
        if mask >> b & 1 == 1 {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
    }
    let full = if n == 8 { 0xff } else { (1u8 << n) - 1 };
    let mut visited = 1u8;
    loop {
        let mut next = visited;
        for i in 0..n {
            if visited >> i & 1 == 1 {
                next |= adj[i];
            }
        }
        if next == visited {
            return visited == full;
        }
        visited = next;
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// A serializable description of one graph source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    RandomRegular { n: usize, r: usize, count: usize, seed: u64 },
    Csl { n: usize, skip: usize },
    Er { n: usize, p: f64, count: usize, seed: u64 },
    Catalog { name: String },
    Enumerate { n: usize },
}

/// Materializes a generator spec. Multi-graph kinds derive one sub-seed per
/// graph from the master seed, in order, so output is reproducible.
pub fn generate(spec: &GeneratorSpec) -> Result<Vec<Graph>> {
    match spec {
        GeneratorSpec::RandomRegular { n, r, count, seed } => {
            let mut master = seeded_rng(*seed);
            (0..*count)
                .map(|_| {
                    let sub = master.random::<u64>();
                    random_regular(*n, *r, sub)
                })
                .collect()
        }
        GeneratorSpec::Csl { n, skip } => Ok(vec![csl(*n, *skip)?]),
        GeneratorSpec::Er { n, p, count, seed } => {
            let mut master = seeded_rng(*seed);
            (0..*count)
                .map(|_| {
                    let sub = master.random::<u64>();
                    random_er(*n, *p, sub)
                })
                .collect()
        }
        GeneratorSpec::Catalog { name } => Ok(vec![catalog(name)?]),
        GeneratorSpec::Enumerate { n } => enumerate_connected(*n),
    }
}
