//! JSON and plain-text hypergraph formats.
//!
//! JSON: `{"n": 4, "edges": [[1,2],[2,3,4]]}`.
//! Text: first non-comment line is `n`, every further nonempty line is one
//! whitespace-separated edge; lines starting with `#` are comments.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Hypergraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HypergraphJson {
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
}

impl From<&Hypergraph> for HypergraphJson {
    fn from(h: &Hypergraph) -> Self {
        HypergraphJson { n: h.n(), edges: h.canonical_edges() }
    }
}

impl TryFrom<HypergraphJson> for Hypergraph {
    type Error = Error;
    fn try_from(raw: HypergraphJson) -> Result<Self> {
        Hypergraph::new(raw.n, raw.edges)
    }
}

impl Hypergraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&HypergraphJson::from(self)).expect("plain data serialises")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for e in self.all_edges() {
            let line: Vec<String> = e.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parses either format; JSON is detected by a leading `{`.
pub fn parse_hypergraph(content: &str) -> Result<Hypergraph> {
    if content.trim_start().starts_with('{') {
        let raw: HypergraphJson = serde_json::from_str(content)?;
        return raw.try_into();
    }
    let mut lines = content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("missing vertex count".into()))?;
    let n = header
        .parse::<usize>()
        .map_err(|e| Error::Parse(format!("vertex count {header:?}: {e}")))?;
    let edges = lines
        .map(|line| {
            line.split_whitespace()
                .map(|tok| tok.parse::<usize>().map_err(|e| Error::Parse(format!("vertex {tok:?}: {e}"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Hypergraph::new(n, edges)
}

pub fn read_hypergraph(path: impl AsRef<Path>) -> Result<Hypergraph> {
    parse_hypergraph(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_text_agree() {
        let j = parse_hypergraph(r#"{"n": 4, "edges": [[2,1],[4,3,2]]}"#).unwrap();
        let t = parse_hypergraph("# a comment\n4\n1 2\n\n2 3 4\n").unwrap();
        assert_eq!(j, t);
        assert_eq!(parse_hypergraph(&j.to_text()).unwrap(), j);
        assert_eq!(parse_hypergraph(&j.to_json()).unwrap(), j);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_hypergraph(""), Err(Error::Parse(_))));
        assert!(matches!(parse_hypergraph("3\n1 x\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_hypergraph("{\"n\": 3"), Err(Error::Json(_))));
        assert!(matches!(parse_hypergraph("2\n1 3\n"), Err(Error::VertexOutOfRange { .. })));
    }
}
