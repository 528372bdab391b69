//! graph6 reader and writer (undirected variant, one graph per line).
//!
//! The encoding packs the upper triangle of the adjacency matrix in column
//! order, 6 bits per byte, offset by 63. An optional `>>graph6<<` header is
//! tolerated and stripped.

use crate::error::{Error, Result};
use crate::graph::Graph;

const HEADER: &[u8] = b">>graph6<<";
const MAX_NODES: usize = 258_047; // largest order the 4-byte size form covers

fn malformed(line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedLine { line, reason: reason.into() }
}

/// Parses a whole byte stream, one graph per non-empty line, order preserved.
pub fn parse_graph6(data: &[u8]) -> Result<Vec<Graph>> {
    let mut graphs = Vec::new();
    for (idx, raw) in data.split(|&b| b == b'\n').enumerate() {
        let line_no = idx + 1;
        let mut line = raw;
        if line.ends_with(b"\r") {
            line = &line[..line.len() - 1];
        }
        if let Some(stripped) = line.strip_prefix(HEADER) {
            line = stripped;
        }
        if line.is_empty() {
            continue;
        }
        graphs.push(parse_line(line, line_no)?);
    }
    Ok(graphs)
}

fn parse_line(line: &[u8], line_no: usize) -> Result<Graph> {
    let (n, used) = parse_order(line, line_no)?;
    let body = &line[used..];
    let bits = if n < 2 { 0 } else { n * (n - 1) / 2 };
    let need = bits.div_ceil(6);
    if body.len() != need {
        return Err(malformed(
            line_no,
            format!("expected {need} data bytes for {n} nodes, got {}", body.len()),
        ));
    }
    for &b in body {
        if !(63..=126).contains(&b) {
            return Err(malformed(line_no, format!("illegal byte {b}")));
        }
    }
    let mut edges = Vec::new();
    let mut pos = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = body[pos / 6] - 63;
            if byte >> (5 - pos % 6) & 1 == 1 {
                edges.push((u as u32, v as u32));
            }
            pos += 1;
        }
    }
    Graph::new(n, &edges).map_err(|e| malformed(line_no, e.to_string()))
}

fn parse_order(line: &[u8], line_no: usize) -> Result<(usize, usize)> {
    match line.first() {
        None => Err(malformed(line_no, "empty record")),
        Some(&b'~') => {
            if line.len() >= 2 && line[1] == b'~' {
                return Err(malformed(line_no, "8-byte order form not supported"));
            }
            if line.len() < 4 {
                return Err(malformed(line_no, "truncated order field"));
            }
            let mut n = 0usize;
            for &b in &line[1..4] {
                if !(63..=126).contains(&b) {
                    return Err(malformed(line_no, format!("illegal byte {b} in order")));
                }
                n = n << 6 | (b - 63) as usize;
            }
            Ok((n, 4))
        }
        Some(&b) if (63..126).contains(&b) => Ok(((b - 63) as usize, 1)),
        Some(&b) => Err(malformed(line_no, format!("illegal order byte {b}"))),
    }
}

/// Encodes a graph as a single graph6 line (no trailing newline).
/// `parse_graph6(emit_graph6(g))` reconstructs `g` exactly.
pub fn emit_graph6(g: &Graph) -> String {
    let n = g.node_count();
    assert!(n <= MAX_NODES, "graph too large for graph6 order field");
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut filled = 0u8;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | u8::from(g.has_edge(u as u32, v as u32));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_line() {
        // "E?~o" is a 6-node graph
        let graphs = parse_graph6(b"E?~o").unwrap();
        assert_eq!(graphs.len(), 1);
        assert_eq!(graphs[0].node_count(), 6);
        let back = emit_graph6(&graphs[0]);
        assert_eq!(back, "E?~o");
    }

    #[test]
    fn single_node_and_header() {
        let g = Graph::new(1, &[]).unwrap();
        assert_eq!(emit_graph6(&g), "@");
        let parsed = parse_graph6(b">>graph6<<@\n").unwrap();
        assert_eq!(parsed[0].node_count(), 1);
    }

    #[test]
    fn empty_stream_is_empty_list() {
        assert!(parse_graph6(b"").unwrap().is_empty());
        assert!(parse_graph6(b"\n\n").unwrap().is_empty());
    }

    #[test]
    fn illegal_byte_reports_line() {
        let err = parse_graph6(b"E?~o\nE\x01~o").unwrap_err();
        match err {
            Error::MalformedLine { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn wide_order_roundtrip() {
        let edges: Vec<(u32, u32)> = (0..99).map(|i| (i, i + 1)).collect();
        let g = Graph::new(100, &edges).unwrap();
        let line = emit_graph6(&g);
        let parsed = parse_graph6(line.as_bytes()).unwrap();
        assert_eq!(parsed[0], g);
    }
}
