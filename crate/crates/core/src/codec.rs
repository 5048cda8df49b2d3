//! Line-oriented text serialization for graphs and endorsement sets.
//!
//! The format is diff-able and language-neutral:
//!
//! ```text
//! #nodes N
//! #edges M
//! #skills K
//! e u v        (one per undirected edge, u < v, ascending)
//! a k u v      (one per endorsement arc u -> v of skill k, ascending)
//! ```
//!
//! UTF-8, LF line endings. Encoding is deterministic: equal structures
//! always produce identical byte streams. A skill count of zero decodes to
//! `None` endorsements.

use crate::graph::{EndorsementSet, Graph, GraphError, VertexId};
use std::fs;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("line {line}: expected header `{expected} <count>`, found `{found}`")]
    BadHeader {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("line {line}: cannot parse `{token}` as a count or id")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: malformed record `{found}`")]
    BadRecord { line: usize, found: String },
    #[error("line {line}: {source}")]
    Structure { line: usize, source: GraphError },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: VertexId, v: VertexId },
    #[error("line {line}: duplicate arc k={skill} ({u}, {v})")]
    DuplicateArc {
        line: usize,
        skill: usize,
        u: VertexId,
        v: VertexId,
    },
    #[error("edge count mismatch: header says {header}, found {found}")]
    EdgeCountMismatch { header: usize, found: usize },
    #[error("unexpected end of stream: {0}")]
    Truncated(&'static str),
}

/// Serialize a graph (and optional endorsements) to the text format.
pub fn encode(graph: &Graph, endorsements: Option<&EndorsementSet>) -> String {
    let skills = endorsements.map_or(0, EndorsementSet::skill_count);
    let mut out = String::new();
    out.push_str(&format!("#nodes {}\n", graph.vertex_count()));
    out.push_str(&format!("#edges {}\n", graph.edge_count()));
    out.push_str(&format!("#skills {}\n", skills));
    for (u, v) in graph.edges() {
        out.push_str(&format!("e {} {}\n", u, v));
    }
    if let Some(es) = endorsements {
        for k in 0..es.skill_count() {
            for &(u, v) in es.arcs(k).expect("skill index in range") {
                out.push_str(&format!("a {} {} {}\n", k, u, v));
            }
        }
    }
    out
}

fn parse_header(
    lines: &mut std::iter::Enumerate<std::str::Lines<'_>>,
    key: &'static str,
) -> Result<usize, CodecError> {
    let (idx, line) = lines
        .next()
        .ok_or(CodecError::Truncated("missing header line"))?;
    let line_no = idx + 1;
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(value), None) if k == key => {
            value.parse().map_err(|_| CodecError::BadNumber {
                line: line_no,
                token: value.to_string(),
            })
        }
        _ => Err(CodecError::BadHeader {
            line: line_no,
            expected: key,
            found: line.to_string(),
        }),
    }
}

/// Parse the text format back into a graph and optional endorsements.
///
/// The stream is validated structurally: counts must match, ids must be in
/// range, arcs must be orientations of present edges, and records must be
/// unique. Errors carry the offending line number.
pub fn decode(input: &str) -> Result<(Graph, Option<EndorsementSet>), CodecError> {
    let mut lines = input.lines().enumerate();
    let nodes = parse_header(&mut lines, "#nodes")?;
    let edges = parse_header(&mut lines, "#edges")?;
    let skills = parse_header(&mut lines, "#skills")?;

    let mut graph = Graph::with_vertices(nodes);
    let mut endorsements = EndorsementSet::new(skills);
    let mut edges_seen = 0usize;

    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let tag = parts.next().unwrap_or("");
        let fields: Vec<&str> = parts.collect();
        let num = |token: &str| -> Result<usize, CodecError> {
            token.parse().map_err(|_| CodecError::BadNumber {
                line: line_no,
                token: token.to_string(),
            })
        };
        match (tag, fields.as_slice()) {
            ("e", [u, v]) => {
                let (u, v) = (num(u)?, num(v)?);
                match graph.add_edge(u, v) {
                    Ok(true) => edges_seen += 1,
                    Ok(false) => return Err(CodecError::DuplicateEdge { line: line_no, u, v }),
                    Err(source) => return Err(CodecError::Structure { line: line_no, source }),
                }
            }
            ("a", [k, u, v]) => {
                let (k, u, v) = (num(k)?, num(u)?, num(v)?);
                match endorsements.add_arc(&graph, k, u, v) {
                    Ok(true) => {}
                    Ok(false) => {
                        return Err(CodecError::DuplicateArc {
                            line: line_no,
                            skill: k,
                            u,
                            v,
                        })
                    }
                    Err(source) => return Err(CodecError::Structure { line: line_no, source }),
                }
            }
            _ => {
                return Err(CodecError::BadRecord {
                    line: line_no,
                    found: line.to_string(),
                })
            }
        }
    }

    if edges_seen != edges {
        return Err(CodecError::EdgeCountMismatch {
            header: edges,
            found: edges_seen,
        });
    }
    let endorsements = (skills > 0).then_some(endorsements);
    Ok((graph, endorsements))
}

/// I/O wrapper errors for on-disk graph files.
#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: CodecError },
}

pub fn read_graph_file(path: &Path) -> Result<(Graph, Option<EndorsementSet>), FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode(&text).map_err(|source| FileError::Parse {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::IteratorRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_graph_is_header_only() {
        let g = Graph::new();
        let text = encode(&g, None);
        assert_eq!(text, "#nodes 0\n#edges 0\n#skills 0\n");
        let (g2, es) = decode(&text).unwrap();
        assert_eq!(g, g2);
        assert!(es.is_none());
    }

    #[test]
    fn clique_with_arc_round_trips_bit_exact() {
        let g = Graph::complete(5);
        let mut es = EndorsementSet::new(2);
        es.add_arc(&g, 1, 3, 0).unwrap();
        let text = encode(&g, Some(&es));
        let (g2, es2) = decode(&text).unwrap();
        assert_eq!(g, g2);
        assert_eq!(es2.as_ref(), Some(&es));
        assert_eq!(encode(&g2, es2.as_ref()), text);
    }

    #[test]
    fn arc_outside_base_edges_is_rejected() {
        let text = "#nodes 3\n#edges 2\n#skills 1\ne 0 1\ne 1 2\na 0 0 2\n";
        let err = decode(text).unwrap_err();
        assert_eq!(
            err,
            CodecError::Structure {
                line: 6,
                source: GraphError::NotBaseEdge { u: 0, v: 2 }
            }
        );
    }

    #[test]
    fn malformed_streams_name_the_line() {
        let cases = [
            ("#nodes x\n", 1),
            ("#nodes 2\n#edgez 1\n#skills 0\n", 2),
            ("#nodes 2\n#edges 1\n#skills 0\ne 0\n", 4),
            ("#nodes 2\n#edges 1\n#skills 0\nq 0 1\n", 4),
            ("#nodes 2\n#edges 1\n#skills 0\ne 0 1\ne 0 1\n", 5),
            ("#nodes 2\n#edges 1\n#skills 0\ne 0 0\n", 4),
            ("#nodes 2\n#edges 1\n#skills 0\ne 0 7\n", 4),
        ];
        for (text, line) in cases {
            let err = decode(text).unwrap_err();
            let msg = err.to_string();
            assert!(
                msg.contains(&format!("line {line}")),
                "expected line {line} in `{msg}` for {text:?}"
            );
        }
    }

    #[test]
    fn edge_count_mismatch_detected() {
        let err = decode("#nodes 2\n#edges 2\n#skills 0\ne 0 1\n").unwrap_err();
        assert_eq!(
            err,
            CodecError::EdgeCountMismatch {
                header: 2,
                found: 1
            }
        );
    }

    #[test]
    fn truncated_header_detected() {
        assert_eq!(
            decode("#nodes 2\n").unwrap_err(),
            CodecError::Truncated("missing header line")
        );
    }

    fn random_instance(seed: u64) -> (Graph, EndorsementSet) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1usize..10);
        let mut g = Graph::with_vertices(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(0.4) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let skills = rng.random_range(1usize..4);
        let mut es = EndorsementSet::new(skills);
        let edges: Vec<_> = g.edges().collect();
        for k in 0..skills {
            for _ in 0..rng.random_range(0usize..6) {
                if let Some(&(u, v)) = edges.iter().choose(&mut rng) {
                    let (u, v) = if rng.random_bool(0.5) { (u, v) } else { (v, u) };
                    es.add_arc(&g, k, u, v).unwrap();
                }
            }
        }
        (g, es)
    }

    proptest! {
        /// decode . encode is the identity on valid structures, and encode
        /// is deterministic.
        #[test]
        fn round_trip_identity(seed in 0u64..500) {
            let (g, es) = random_instance(seed);
            let text = encode(&g, Some(&es));
            let (g2, es2) = decode(&text).unwrap();
            prop_assert_eq!(&g, &g2);
            prop_assert_eq!(Some(&es), es2.as_ref());
            prop_assert_eq!(encode(&g2, es2.as_ref()), text);
        }
    }
}
