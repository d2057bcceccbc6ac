//! Pipe-delimited AS-relationship files.
//!
//! Data lines are `A|B|-1` (B is a customer of A) or `A|B|0` (A and B peer),
//! optionally followed by a fourth source field, which is ignored. Lines
//! starting with `#` are comments and are kept verbatim, except
//! `#@node <asn>`, which declares an AS that may have no edges. AS numbers are
//! mapped to dense ids in ascending AS-number order.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Write};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, LabeledAsGraph, NodeId};

pub type Asn = u32;

const NODE_DIRECTIVE: &str = "#@node";

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}: {content:?}")]
    Malformed { line: usize, content: String, reason: &'static str },
    #[error("line {line}: unknown relationship code {code:?}: {content:?}")]
    UnknownCode { line: usize, code: String, content: String },
    #[error("line {line}: AS {a} and AS {b} already have a different relationship: {content:?}")]
    Conflict { line: usize, a: Asn, b: Asn, content: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SnapshotMeta {
    pub source_path: Option<String>,
    /// Comment lines including the leading `#`, in file order.
    pub comment_lines: Vec<String>,
    /// `as_numbers[id]` is the AS number of dense id `id`; strictly ascending.
    pub as_numbers: Vec<Asn>,
    /// Data lines that repeated an edge already seen.
    pub duplicate_lines: usize,
}

impl SnapshotMeta {
    /// Identity mapping `id ↦ id`, for generated graphs.
    pub fn identity(node_count: usize, comment_lines: Vec<String>) -> Self {
        SnapshotMeta {
            source_path: None,
            comment_lines,
            as_numbers: (0..node_count as Asn).collect(),
            duplicate_lines: 0,
        }
    }

    pub fn asn(&self, id: NodeId) -> Asn {
        self.as_numbers[id as usize]
    }

    pub fn id_of(&self, asn: Asn) -> Option<NodeId> {
        self.as_numbers.binary_search(&asn).ok().map(|i| i as NodeId)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rel {
    Peer,
    /// first AS of the normalized pair is the provider
    LowProvides,
    HighProvides,
}

fn parse_asn(field: &str, line: usize, content: &str) -> Result<Asn, IoError> {
    field.trim().parse().map_err(|_| IoError::Malformed {
        line,
        content: content.to_string(),
        reason: "AS number is not an unsigned 32-bit integer",
    })
}

pub fn parse_caida<R: BufRead>(reader: R) -> Result<(LabeledAsGraph, SnapshotMeta), IoError> {
    let mut meta = SnapshotMeta::default();
    let mut rels: HashMap<(Asn, Asn), Rel> = HashMap::new();
    let mut declared: BTreeSet<Asn> = BTreeSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let content = line.trim_end_matches('\r');
        if content.trim().is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix(NODE_DIRECTIVE) {
            declared.insert(parse_asn(rest, lineno, content)?);
            continue;
        }
        if content.starts_with('#') {
            meta.comment_lines.push(content.to_string());
            continue;
        }
        let fields: Vec<&str> = content.split('|').collect();
        if !(fields.len() == 3 || fields.len() == 4) {
            return Err(IoError::Malformed {
                line: lineno,
                content: content.to_string(),
                reason: "expected 3 or 4 '|'-separated fields",
            });
        }
        let a = parse_asn(fields[0], lineno, content)?;
        let b = parse_asn(fields[1], lineno, content)?;
        if a == b {
            return Err(IoError::Malformed { line: lineno, content: content.to_string(), reason: "self-loop" });
        }
        let key = (a.min(b), a.max(b));
        let rel = match fields[2].trim() {
            "0" => Rel::Peer,
            "-1" if a < b => Rel::LowProvides,
            "-1" => Rel::HighProvides,
            code => {
                return Err(IoError::UnknownCode {
                    line: lineno,
                    code: code.to_string(),
                    content: content.to_string(),
                })
            }
        };
        match rels.get(&key) {
            None => {
                rels.insert(key, rel);
            }
            Some(&prev) if prev == rel => meta.duplicate_lines += 1,
            Some(_) => {
                return Err(IoError::Conflict { line: lineno, a, b, content: content.to_string() });
            }
        }
    }
    let mut asns = declared;
    for &(a, b) in rels.keys() {
        asns.insert(a);
        asns.insert(b);
    }
    meta.as_numbers = asns.into_iter().collect();
    let id = |asn: Asn| meta.id_of(asn).unwrap();
    let mut peers = Vec::new();
    let mut cps = Vec::new();
    for (&(lo, hi), &rel) in &rels {
        match rel {
            Rel::Peer => peers.push((id(lo), id(hi))),
            Rel::LowProvides => cps.push((id(hi), id(lo))),
            Rel::HighProvides => cps.push((id(lo), id(hi))),
        }
    }
    let g = LabeledAsGraph::new(meta.as_numbers.len(), &peers, &cps)?;
    Ok((g, meta))
}

/// Comments first, then `#@node` lines for edgeless ASes, then peer lines
/// and customer-provider lines, each sorted by dense id.
pub fn write_graph<W: Write>(g: &LabeledAsGraph, meta: &SnapshotMeta, mut out: W) -> Result<(), IoError> {
    assert_eq!(meta.as_numbers.len(), g.node_count(), "AS number map does not match the graph");
    for c in &meta.comment_lines {
        writeln!(out, "{c}")?;
    }
    for u in g.nodes().filter(|&u| g.degree(u) == 0) {
        writeln!(out, "{NODE_DIRECTIVE} {}", meta.asn(u))?;
    }
    for &(a, b) in g.peer_edges() {
        writeln!(out, "{}|{}|0", meta.asn(a), meta.asn(b))?;
    }
    let mut cps: Vec<(NodeId, NodeId)> = g.cp_edges().iter().map(|&(c, p)| (p, c)).collect();
    cps.sort_unstable();
    for (p, c) in cps {
        writeln!(out, "{}|{}|-1", meta.asn(p), meta.asn(c))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_graph_file(path: &std::path::Path) -> Result<(LabeledAsGraph, SnapshotMeta), IoError> {
    let file = std::fs::File::open(path)?;
    let (g, mut meta) = parse_caida(std::io::BufReader::new(file))?;
    meta.source_path = Some(path.display().to_string());
    Ok((g, meta))
}
