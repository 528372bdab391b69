//! Fingerprint census over a graph corpus: how many distinct signatures each
//! refinement method assigns, plus the pairwise verdict matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{csl_benchmark, CSL_BENCHMARK_SKIPS};
use crate::graph::Graph;
use crate::graph6::parse_graph6;
use crate::khop::Kernel;
use crate::peripheral::{Caps, KprimeMode};
use crate::refine::{graph_signatures, Method, MethodSpec};

use super::{fraction, Metadata, ResultTable, Row};

/// Corpus sources: the ten-class circulant benchmark, a strongly regular
/// graph6 file (validated as 15 SRG(25,12,5,6) graphs), or a graph6 file of
/// consecutive graph pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum DatasetSpec {
    Csl,
    SrFile { path: String },
    PairFile { path: String },
}

/// One census column: a method instance. `iterations` defaults to the hop
/// count when absent; caps default to uncapped (the expressiveness setting).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusMethod {
    pub method: Method,
    pub kernel: Kernel,
    pub hops: usize,
    pub iterations: Option<usize>,
    #[serde(default)]
    pub k_prime: usize,
    #[serde(default)]
    pub walk_counts: bool,
    #[serde(default)]
    pub max_edges: Option<u64>,
    #[serde(default)]
    pub max_components: Option<u64>,
}

impl CensusMethod {
    pub fn new(method: Method, kernel: Kernel, hops: usize) -> Self {
        CensusMethod {
            method,
            kernel,
            hops,
            iterations: None,
            k_prime: 0,
            walk_counts: false,
            max_edges: None,
            max_components: None,
        }
    }

    pub fn with_k_prime(mut self, k_prime: usize) -> Self {
        self.k_prime = k_prime;
        self
    }

    pub fn to_spec(&self) -> MethodSpec {
        MethodSpec {
            method: self.method,
            kernel: self.kernel,
            hops: self.hops,
            iterations: self.iterations.unwrap_or(self.hops),
            k_prime: self.k_prime,
            walk_counts: self.walk_counts,
            caps: Caps { max_edges: self.max_edges, max_components: self.max_components },
            kprime_mode: KprimeMode::Sum,
        }
    }

    fn params(&self) -> Vec<(&'static str, String)> {
        let spec = self.to_spec();
        let mut params = vec![
            ("method", spec.method.to_string()),
            ("kernel", spec.kernel.to_string()),
            ("K", spec.hops.to_string()),
            ("L", spec.iterations.to_string()),
        ];
        if spec.method == Method::Kp {
            params.push(("kprime", spec.k_prime.to_string()));
        }
        if spec.walk_counts {
            params.push(("walk_counts", "true".to_string()));
        }
        params
    }
}

fn load_dataset(dataset: &DatasetSpec) -> Result<(Vec<Graph>, Vec<String>, bool)> {
    match dataset {
        DatasetSpec::Csl => {
            let graphs = csl_benchmark();
            let names = CSL_BENCHMARK_SKIPS
                .iter()
                .map(|s| format!("csl(41,{s})"))
                .collect();
            Ok((graphs, names, false))
        }
        DatasetSpec::SrFile { path } => {
            let data = std::fs::read(path)?;
            let graphs = parse_graph6(&data)?;
            validate_sr25(&graphs)?;
            let names = (0..graphs.len()).map(|i| format!("g{i}")).collect();
            Ok((graphs, names, false))
        }
        DatasetSpec::PairFile { path } => {
            let data = std::fs::read(path)?;
            let graphs = parse_graph6(&data)?;
            if graphs.len() % 2 != 0 {
                return Err(Error::CorpusValidation(format!(
                    "pair file holds {} graphs, expected an even count",
                    graphs.len()
                )));
            }
            let names = (0..graphs.len())
                .map(|i| format!("pair{}{}", i / 2, if i % 2 == 0 { "a" } else { "b" }))
                .collect();
            Ok((graphs, names, true))
        }
    }
}

/// The expected corpus is the 15 strongly regular (25,12,5,6) graphs.
fn validate_sr25(graphs: &[Graph]) -> Result<()> {
    if graphs.len() != 15 {
        return Err(Error::CorpusValidation(format!(
            "expected 15 graphs, found {}",
            graphs.len()
        )));
    }
    for (i, g) in graphs.iter().enumerate() {
        if g.node_count() != 25 || g.regular_degree() != Some(12) {
            return Err(Error::CorpusValidation(format!(
                "graph {i} is not 12-regular on 25 nodes"
            )));
        }
        for u in 0..25u32 {
            for v in u + 1..25 {
                let common = g
                    .neighbors(u)
                    .iter()
                    .filter(|w| g.neighbors(v).contains(w))
                    .count();
                let expected = if g.has_edge(u, v) { 5 } else { 6 };
                if common != expected {
                    return Err(Error::CorpusValidation(format!(
                        "graph {i} violates the (25,12,5,6) intersection numbers at ({u},{v})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Refines the whole corpus jointly once per method and reports the number
/// of distinct per-graph signatures plus pairwise verdicts (for pair files,
/// per designated pair instead of the full matrix).
pub fn fingerprint_census(dataset: &DatasetSpec, methods: &[CensusMethod]) -> Result<ResultTable> {
    let (graphs, names, paired) = load_dataset(dataset)?;
    let refs: Vec<&Graph> = graphs.iter().collect();
    let mut table = ResultTable::new(Metadata::new("census", None));
    for method in methods {
        let spec = method.to_spec();
        let sigs = graph_signatures(&refs, &spec)?;
        let params = method.params();
        let distinct = sigs
            .iter()
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        table.push(Row::new(&params, "distinct_signatures", distinct.to_string()));
        if paired {
            let mut distinguished = 0u64;
            for p in 0..sigs.len() / 2 {
                let verdict = sigs[2 * p] != sigs[2 * p + 1];
                distinguished += u64::from(verdict);
                let mut row_params = params.clone();
                row_params.push(("a", names[2 * p].clone()));
                row_params.push(("b", names[2 * p + 1].clone()));
                table.push(Row::new(&row_params, "distinguished", if verdict { "1" } else { "0" }));
            }
            table.push(Row::new(
                &params,
                "distinguished_pairs_fraction",
                fraction(distinguished, (sigs.len() / 2) as u64),
            ));
        } else {
            for i in 0..sigs.len() {
                for j in i + 1..sigs.len() {
                    let mut row_params = params.clone();
                    row_params.push(("a", names[i].clone()));
                    row_params.push(("b", names[j].clone()));
                    table.push(Row::new(
                        &row_params,
                        "distinguished",
                        if sigs[i] != sigs[j] { "1" } else { "0" },
                    ));
                }
            }
        }
    }
    Ok(table.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn distinct_for(table: &ResultTable, method: &str, k: &str) -> usize {
        table
            .rows
            .iter()
            .find(|r| {
                r.metric == "distinct_signatures"
                    && r.param("method") == Some(method)
                    && r.param("K") == Some(k)
            })
            .unwrap()
            .value
            .parse()
            .unwrap()
    }

    #[test]
    fn csl_census_small_depths() {
        let methods = vec![
            CensusMethod::new(Method::KHop, Kernel::Spd, 1),
            CensusMethod::new(Method::KHop, Kernel::Spd, 2),
            CensusMethod::new(Method::Kp, Kernel::Spd, 1).with_k_prime(1),
            CensusMethod::new(Method::Kp, Kernel::Spd, 2).with_k_prime(1),
        ];
        let table = fingerprint_census(&DatasetSpec::Csl, &methods).unwrap();
        assert_eq!(distinct_for(&table, "khop", "1"), 1);
        assert_eq!(distinct_for(&table, "khop", "2"), 3);
        assert_eq!(distinct_for(&table, "kp", "1"), 2);
        assert_eq!(distinct_for(&table, "kp", "2"), 5);
    }

    #[test]
    fn pair_file_census() {
        let dir = std::env::temp_dir().join("hopwl_census_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("pairs.g6");
        // pair 0: C6 vs two triangles; pair 1: C5 vs itself
        let c6 = crate::generators::cycle(6).unwrap();
        let two = crate::generators::two_triangles();
        let c5 = crate::generators::cycle(5).unwrap();
        let mut data = String::new();
        for g in [&c6, &two, &c5, &c5] {
            data.push_str(&crate::graph6::emit_graph6(g));
            data.push('\n');
        }
        std::fs::write(&path, data).unwrap();
        let methods = vec![CensusMethod::new(Method::KHop, Kernel::Spd, 2)];
        let table = fingerprint_census(
            &DatasetSpec::PairFile { path: path.to_string_lossy().into_owned() },
            &methods,
        )
        .unwrap();
        let frac = table
            .rows
            .iter()
            .find(|r| r.metric == "distinguished_pairs_fraction")
            .unwrap();
        assert_eq!(frac.value, "0.500000");
    }

    #[test]
    fn sr_validation_rejects_wrong_corpus() {
        let dir = std::env::temp_dir().join("hopwl_census_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad_sr.g6");
        let mut data = String::new();
        for _ in 0..15 {
            data.push_str(&crate::graph6::emit_graph6(&crate::generators::cycle(25).unwrap()));
            data.push('\n');
        }
        std::fs::write(&path, data).unwrap();
        let err = fingerprint_census(
            &DatasetSpec::SrFile { path: path.to_string_lossy().into_owned() },
            &[],
        )
        .unwrap_err();
        assert!(matches!(err, Error::CorpusValidation(_)));
    }
}
