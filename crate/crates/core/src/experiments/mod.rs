//! Experiment drivers: seeded simulations, fingerprint censuses, the
//! property suite, and single-pair reports, all emitting deterministic
//! result tables.
//!
//! A stored [`ExperimentConfig`] re-run with the same seed produces
//! byte-identical CSV and JSON. Wall time is therefore never written into
//! output files; callers that want it measure around [`run`].

mod census;
mod emit;
mod pair;
mod regular_sim;
mod suite;

pub use census::{fingerprint_census, CensusMethod, DatasetSpec};
pub use emit::{from_json, to_csv, to_json, to_svg, write_outputs, Format};
pub use pair::{pair_report, PairMethod, PairReport};
pub use regular_sim::regular_sim;
pub use suite::{parse_node_ref, property_suite, SuiteOutcome};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generators::RNG_ALGORITHM;

/// One experiment invocation, fully serializable for exact re-runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    RegularSim {
        n_list: Vec<usize>,
        r: usize,
        graphs_per_n: usize,
        k_max: usize,
        seed: u64,
    },
    Census {
        dataset: DatasetSpec,
        methods: Vec<CensusMethod>,
    },
    PropertySuite {
        seed: u64,
    },
}

/// Runs a config to a table. Suites with violations still return their table;
/// see [`property_suite`] for the violation list.
pub fn run(config: &ExperimentConfig) -> Result<ResultTable> {
    match config {
        ExperimentConfig::RegularSim { n_list, r, graphs_per_n, k_max, seed } => {
            regular_sim(n_list, *r, *graphs_per_n, *k_max, *seed)
        }
        ExperimentConfig::Census { dataset, methods } => fingerprint_census(dataset, methods),
        ExperimentConfig::PropertySuite { seed } => Ok(property_suite(*seed)?.table),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub experiment: String,
    pub version: String,
    pub seed: Option<u64>,
    pub rng_algorithm: Option<String>,
}

impl Metadata {
    pub fn new(experiment: &str, seed: Option<u64>) -> Self {
        Metadata {
            experiment: experiment.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            rng_algorithm: seed.map(|_| RNG_ALGORITHM.to_string()),
        }
    }
}

/// One measurement: named parameters, a metric name, and a canonical string
/// value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Row {
    pub params: BTreeMap<String, String>,
    pub metric: String,
    pub value: String,
}

impl Row {
    pub fn new<V: Into<String>>(params: &[(&str, String)], metric: &str, value: V) -> Self {
        Row {
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            metric: metric.to_string(),
            value: value.into(),
        }
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }
}

/// Canonical fixed-precision rendering for ratio metrics.
pub fn fraction(numerator: u64, denominator: u64) -> String {
    if denominator == 0 {
        "0.000000".to_string()
    } else {
        format!("{:.6}", numerator as f64 / denominator as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub rows: Vec<Row>,
}

impl ResultTable {
    pub fn new(metadata: Metadata) -> Self {
        ResultTable { metadata, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    /// Canonical row order; emission assumes this has been applied.
    pub fn finalize(mut self) -> Self {
        self.rows.sort();
        self
    }

    /// All metric values matching `metric`, keyed by a named parameter.
    pub fn metric_by<F, K>(&self, metric: &str, key: F) -> Vec<(K, &str)>
    where
        F: Fn(&Row) -> K,
    {
        self.rows
            .iter()
            .filter(|r| r.metric == metric)
            .map(|r| (key(r), r.value.as_str()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_sort_canonically() {
        let mut t = ResultTable::new(Metadata::new("x", None));
        t.push(Row::new(&[("n", "9".into())], "b", "1"));
        t.push(Row::new(&[("n", "10".into())], "a", "2"));
        t.push(Row::new(&[("n", "10".into())], "a", "1"));
        let t = t.finalize();
        assert_eq!(t.rows[0].param("n"), Some("10"));
        assert_eq!(t.rows[0].metric, "a");
    }

    #[test]
    fn fraction_formatting() {
        assert_eq!(fraction(1, 3), "0.333333");
        assert_eq!(fraction(0, 0), "0.000000");
        assert_eq!(fraction(2, 2), "1.000000");
    }
}
