use std::fmt::Write as _;

use super::{Graph, Vertex};
use crate::error::{Error, Result};

/// Parses the edge-list text format: one `u v` pair per line, 0-based ids,
/// `#` starts a comment. A `# vertices N` comment fixes the vertex count so
/// trailing isolated vertices survive a round trip; otherwise the count is
/// one more than the largest id seen.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut declared: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (content, comment) = match raw.find('#') {
            Some(pos) => (&raw[..pos], Some(&raw[pos + 1..])),
            None => (raw, None),
        };
        if let Some(comment) = comment {
            let mut words = comment.split_whitespace();
            if words.next() == Some("vertices") {
                let n = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or(Error::Parse {
                        line,
                        message: "malformed vertex count".into(),
                    })?;
                declared = Some(n);
            }
        }
        let mut fields = content.split_whitespace();
        let Some(first) = fields.next() else { continue };
        let parse = |s: &str| {
            s.parse::<Vertex>().map_err(|_| Error::Parse {
                line,
                message: format!("not a vertex id: {s:?}"),
            })
        };
        let u = parse(first)?;
        let v = parse(fields.next().ok_or(Error::Parse {
            line,
            message: "expected two vertex ids".into(),
        })?)?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line,
                message: "trailing fields".into(),
            });
        }
        edges.push((u, v));
    }
    let seen = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < seen => {
            return Err(Error::Parse {
                line: 0,
                message: format!("declared {n} vertices but id {} appears", seen - 1),
            })
        }
        Some(n) => n,
        None => seen,
    };
    Graph::from_edges(n, &edges)
}

/// Writes the edge-list format, one edge per line. The `# vertices N`
/// header is only written when the largest id would not recover `N`.
pub fn write_edge_list(graph: &Graph) -> String {
    let n = graph.vertex_count();
    let mut out = String::new();
    if n == 0 || graph.degree(n - 1) == 0 {
        writeln!(out, "# vertices {n}").unwrap();
    }
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
