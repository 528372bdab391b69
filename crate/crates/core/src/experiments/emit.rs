//! Table serialization: CSV (RFC-4180-style quoting), JSON (stable key
//! order), and an SVG heatmap of the regular-graph simulation.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::ResultTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::InvalidConfiguration(format!("unknown format {other}"))),
        }
    }
}

fn csv_field(s: &str) -> Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        Cow::Owned(format!("\"{}\"", s.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(s)
    }
}

/// Renders the table as CSV: one column per parameter key (union over all
/// rows, sorted), then metric and value. Rows must already be finalized.
pub fn to_csv(table: &ResultTable) -> String {
    let keys: BTreeSet<&str> = table
        .rows
        .iter()
        .flat_map(|r| r.params.keys().map(String::as_str))
        .collect();
    let mut out = String::new();
    out.push_str("experiment");
    for key in &keys {
        out.push(',');
        out.push_str(&csv_field(key));
    }
    out.push_str(",metric,value\r\n");
    for row in &table.rows {
        out.push_str(&csv_field(&table.metadata.experiment));
        for key in &keys {
            out.push(',');
            if let Some(v) = row.param(key) {
                out.push_str(&csv_field(v));
            }
        }
        out.push(',');
        out.push_str(&csv_field(&row.metric));
        out.push(',');
        out.push_str(&csv_field(&row.value));
        out.push_str("\r\n");
    }
    out
}

/// Pretty JSON with stable key order (struct fields plus sorted parameter
/// maps); terminated by a newline.
pub fn to_json(table: &ResultTable) -> String {
    let mut s = serde_json::to_string_pretty(table).expect("table serializes");
    s.push('\n');
    s
}

pub fn from_json(data: &str) -> Result<ResultTable> {
    serde_json::from_str(data).map_err(|e| Error::InvalidConfiguration(format!("bad table JSON: {e}")))
}

/// Heatmap in the simulation layout: n on the x axis, K on the y axis
/// (largest on top), the indistinguishable node-pair fraction as the fill.
pub fn to_svg(table: &ResultTable) -> Result<String> {
    let mut cells: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for row in &table.rows {
        if row.metric != "node_indistinguishable_fraction" {
            continue;
        }
        let (Some(n), Some(k)) = (row.param("n"), row.param("K")) else {
            continue;
        };
        let (Ok(n), Ok(k)) = (n.parse::<usize>(), k.parse::<usize>()) else {
            continue;
        };
        let value: f64 = row
            .value
            .parse()
            .map_err(|_| Error::InvalidConfiguration(format!("bad fraction {}", row.value)))?;
        cells.insert((n, k), value);
    }
    if cells.is_empty() {
        return Err(Error::InvalidConfiguration(
            "svg output needs node_indistinguishable_fraction rows keyed by n and K".into(),
        ));
    }
    let ns: Vec<usize> = cells.keys().map(|&(n, _)| n).collect::<BTreeSet<_>>().into_iter().collect();
    let ks: Vec<usize> = cells.keys().map(|&(_, k)| k).collect::<BTreeSet<_>>().into_iter().collect();

    const CELL_W: usize = 72;
    const CELL_H: usize = 36;
    const LEFT: usize = 70;
    const TOP: usize = 50;
    let width = LEFT + CELL_W * ns.len() + 20;
    let height = TOP + CELL_H * ks.len() + 50;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}: indistinguishable node-pair fraction</text>\n",
        width / 2,
        xml_escape(&table.metadata.experiment)
    ));
    for (yi, &k) in ks.iter().rev().enumerate() {
        let y = TOP + yi * CELL_H;
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\">K={k}</text>\n",
            LEFT - 8,
            y + CELL_H / 2 + 4
        ));
        for (xi, &n) in ns.iter().enumerate() {
            let x = LEFT + xi * CELL_W;
            if let Some(&v) = cells.get(&(n, k)) {
                let shade = (255.0 - v.clamp(0.0, 1.0) * 205.0).round() as u8;
                let text = if shade < 140 { "white" } else { "black" };
                svg.push_str(&format!(
                    "  <rect x=\"{x}\" y=\"{y}\" width=\"{CELL_W}\" height=\"{CELL_H}\" \
                     fill=\"rgb({shade},{shade},255)\" stroke=\"gray\"/>\n"
                ));
                svg.push_str(&format!(
                    "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"{text}\">{v:.3}</text>\n",
                    x + CELL_W / 2,
                    y + CELL_H / 2 + 4
                ));
            }
        }
    }
    for (xi, &n) in ns.iter().enumerate() {
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">n={n}</text>\n",
            LEFT + xi * CELL_W + CELL_W / 2,
            TOP + ks.len() * CELL_H + 20
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes one file per requested format next to `base` (the extension is
/// replaced). Returns the written paths.
pub fn write_outputs(table: &ResultTable, base: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for format in formats {
        let path = base.with_extension(format.extension());
        let data = match format {
            Format::Csv => to_csv(table),
            Format::Json => to_json(table),
            Format::Svg => to_svg(table)?,
        };
        std::fs::write(&path, data)?;
        written.push(path);
    }
    Ok(written)
}
