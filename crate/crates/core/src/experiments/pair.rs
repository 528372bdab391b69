//! Single-pair verdicts with diagnostics: per-iteration distinct color
//! counts and, for peripheral-enhanced runs, the encodings seen at each hop.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::graph::{disjoint_union_all, Graph};
use crate::peripheral::{encoding_table, KprimeConfiguration, PeripheralEncoding};
use crate::refine::{
    fingerprint_range, graph_signatures, run_method, Method, MethodSpec, Verdict,
};
use crate::wl3::run_fwl2;

use super::{Metadata, ResultTable, Row};

/// What to run on the pair: a refinement method or the pair-refinement
/// upper-bound oracle.
#[derive(Debug, Clone)]
pub enum PairMethod {
    Spec(MethodSpec),
    Fwl2,
}

#[derive(Debug, Clone)]
pub struct PairReport {
    pub verdict: Verdict,
    pub table: ResultTable,
}

fn spec_params(spec: &MethodSpec) -> Vec<(&'static str, String)> {
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

fn describe_encoding(pe: &PeripheralEncoding) -> String {
    let edges: Vec<String> = pe
        .edge_count_by_type
        .iter()
        .map(|(t, c)| format!("{t}:{c}"))
        .collect();
    let kprime = match &pe.kprime {
        KprimeConfiguration::Sum { config_sum, edge_total } => {
            format!("sum={config_sum:?}+{edge_total}")
        }
        KprimeConfiguration::Multiset { rows } => format!("multiset={rows:?}"),
    };
    format!(
        "edges=[{}] components={} {}",
        edges.join(" "),
        pe.component_count,
        kprime
    )
}

pub fn pair_report(
    name_a: &str,
    a: &Graph,
    name_b: &str,
    b: &Graph,
    method: &PairMethod,
) -> Result<PairReport> {
    let mut table = ResultTable::new(Metadata::new("pair", None));
    let names = [name_a, name_b];
    let verdict = match method {
        PairMethod::Fwl2 => {
            let verdict = crate::wl3::distinguish_3wl(a, b);
            for (g, name) in [a, b].into_iter().zip(names) {
                let pc = run_fwl2(g, None);
                for (l, count) in pc.distinct_counts().into_iter().enumerate() {
                    table.push(Row::new(
                        &[("graph", name.to_string()), ("iteration", l.to_string())],
                        "distinct_pair_colors",
                        count.to_string(),
                    ));
                }
            }
            verdict
        }
        PairMethod::Spec(spec) if a.node_count() != b.node_count() => {
            table.push(Row::new(&spec_params(spec), "note", "node counts differ"));
            Verdict::Distinguished
        }
        PairMethod::Spec(spec) if spec.method == Method::De1 => {
            let sigs = graph_signatures(&[a, b], spec)?;
            if sigs[0] == sigs[1] {
                Verdict::NotDistinguished
            } else {
                Verdict::Distinguished
            }
        }
        PairMethod::Spec(spec) => {
            let (union, offsets) = disjoint_union_all(&[a, b]);
            let coloring = run_method(&union, spec)?;
            let params = spec_params(spec);
            for (i, (g, name)) in [a, b].into_iter().zip(names).enumerate() {
                let off = offsets[i] as usize;
                let range = off..off + g.node_count();
                for (l, count) in coloring.distinct_counts(range).into_iter().enumerate() {
                    let mut row_params = params.clone();
                    row_params.push(("graph", name.to_string()));
                    row_params.push(("iteration", l.to_string()));
                    table.push(Row::new(&row_params, "distinct_colors", count.to_string()));
                }
            }
            if spec.method == Method::Kp {
                let encodings = encoding_table(
                    &union,
                    spec.hops,
                    spec.kernel,
                    spec.k_prime,
                    &spec.caps,
                    spec.kprime_mode,
                )?;
                for (i, (g, name)) in [a, b].into_iter().zip(names).enumerate() {
                    let off = offsets[i] as usize;
                    for hop in 1..=spec.hops {
                        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
                        for v in off..off + g.node_count() {
                            *seen.entry(describe_encoding(&encodings[v][hop - 1])).or_insert(0) += 1;
                        }
                        let summary: Vec<String> =
                            seen.into_iter().map(|(desc, c)| format!("{c}x {desc}")).collect();
                        let mut row_params = params.clone();
                        row_params.push(("graph", name.to_string()));
                        row_params.push(("hop", hop.to_string()));
                        table.push(Row::new(
                            &row_params,
                            "peripheral_encodings",
                            summary.join(" | "),
                        ));
                    }
                }
            }
            let fp_a = fingerprint_range(&coloring, None, 0..a.node_count());
            let fp_b = fingerprint_range(
                &coloring,
                None,
                offsets[1] as usize..offsets[1] as usize + b.node_count(),
            );
            if fp_a == fp_b {
                Verdict::NotDistinguished
            } else {
                Verdict::Distinguished
            }
        }
    };
    table.push(Row::new(
        &[("a", name_a.to_string()), ("b", name_b.to_string())],
        "verdict",
        verdict.to_string(),
    ));
    Ok(PairReport { verdict, table: table.finalize() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::catalog;
    use crate::khop::Kernel;

    #[test]
    fn srg16_pair_kp_diagnostics_show_component_split() {
        let a = catalog("shrikhande").unwrap();
        let b = catalog("rook4").unwrap();
        let spec = MethodSpec::kp(Kernel::Spd, 1, 1, 1);
        let report = pair_report("shrikhande", &a, "rook4", &b, &PairMethod::Spec(spec)).unwrap();
        assert_eq!(report.verdict, Verdict::Distinguished);
        let diag: Vec<&Row> = report
            .table
            .rows
            .iter()
            .filter(|r| r.metric == "peripheral_encodings")
            .collect();
        assert_eq!(diag.len(), 2);
        let by_graph = |name: &str| {
            diag.iter()
                .find(|r| r.param("graph") == Some(name))
                .unwrap()
                .value
                .clone()
        };
        assert!(by_graph("shrikhande").contains("components=1"));
        assert!(by_graph("rook4").contains("components=2"));
    }

    #[test]
    fn identical_graphs_not_distinguished() {
        let g = catalog("prism").unwrap();
        let report = pair_report(
            "a",
            &g,
            "b",
            &g,
            &PairMethod::Spec(MethodSpec::khop(Kernel::Gd, 2, 2)),
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::NotDistinguished);
    }

    #[test]
    fn fwl2_report_runs() {
        let a = catalog("cycle(6)").unwrap();
        let b = catalog("two_triangles").unwrap();
        let report = pair_report("c6", &a, "2xc3", &b, &PairMethod::Fwl2).unwrap();
        assert_eq!(report.verdict, Verdict::Distinguished);
        assert!(report.table.rows.iter().any(|r| r.metric == "distinct_pair_colors"));
    }
}
