//! graph6 and the JSON sidecar format.
//!
//! graph6 stores the order followed by the upper triangle of the adjacency
//! matrix, column by column (`x(0,1), x(0,2), x(1,2), x(0,3), ...`), packed
//! six bits per printable byte. Labels are not representable in graph6; the
//! sidecar `{"n": .., "edges": [[u, v], ..], "labels": [..]}` keeps them.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

const HEADER: &str = ">>graph6<<";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Graph6,
    Json,
}

impl Format {
    /// `.json` means the sidecar format; anything else is graph6.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Graph6,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph6" | "g6" => Ok(Format::Graph6),
            "json" => Ok(Format::Json),
            other => Err(crate::error::invalid(format!("unknown graph format '{other}'"))),
        }
    }
}

fn push_order(out: &mut Vec<u8>, n: usize) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    push_order(&mut out, n);
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            chunk = (chunk << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(chunk + 63);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((chunk << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// Decodes one graph6 record. An optional `>>graph6<<` header and trailing
/// whitespace are accepted; offsets in errors count from the start of `s`.
pub fn from_graph6(s: &str) -> Result<Graph> {
    let bytes = s.as_bytes();
    let mut pos = if s.starts_with(HEADER) { HEADER.len() } else { 0 };
    let end = bytes.len() - bytes.iter().rev().take_while(|b| b.is_ascii_whitespace()).count();
    let body = &bytes[..end];
    if let Some(bad) = body[pos..].iter().position(|b| !(63..=126).contains(b)) {
        let at = pos + bad;
        return Err(parse_err(
            at,
            format!("byte 0x{:02x} is not a graph6 character", body[at]),
        ));
    }

    let take = |pos: &mut usize| -> Result<usize> {
        let b = *body
            .get(*pos)
            .ok_or_else(|| parse_err(*pos, "unexpected end of input"))?;
        if !(63..=126).contains(&b) {
            return Err(parse_err(*pos, format!("byte 0x{b:02x} is not a graph6 character")));
        }
        *pos += 1;
        Ok(usize::from(b - 63))
    };

    let first = take(&mut pos)?;
    let n = if first < 63 {
        first
    } else {
        let mut words = 3;
        if body.get(pos) == Some(&126) {
            pos += 1;
            words = 6;
        }
        let mut n = 0usize;
        for _ in 0..words {
            n = (n << 6) | take(&mut pos)?;
        }
        n
    };
    if n > 1 << 16 {
        return Err(parse_err(0, format!("order {n} exceeds the supported 65536 vertices")));
    }

    let bits = n * n.saturating_sub(1) / 2;
    let data_start = pos;
    let need = bits.div_ceil(6);
    if body.len() - data_start != need {
        let offset = data_start + need.min(body.len() - data_start);
        return Err(parse_err(
            offset,
            format!(
                "expected {need} data bytes for {n} vertices, found {}",
                body.len() - data_start
            ),
        ));
    }

    let mut g = Graph::empty(n);
    let (mut i, mut j) = (0usize, 1usize);
    for k in 0..need {
        let at = data_start + k;
        let word = take(&mut pos)?;
        for bit in (0..6).rev() {
            let idx = k * 6 + (5 - bit);
            let set = (word >> bit) & 1 == 1;
            if idx >= bits {
                if set {
                    return Err(parse_err(at, "nonzero padding bits"));
                }
                continue;
            }
            if set {
                g.add_edge(i, j);
            }
            i += 1;
            if i == j {
                i = 0;
                j += 1;
            }
        }
    }
    Ok(g)
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

pub fn to_json(g: &Graph) -> String {
    let doc = Sidecar {
        n: g.n(),
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
        labels: g.labels().map(<[String]>::to_vec),
    };
    serde_json::to_string(&doc).expect("serializable")
}

pub fn from_json(s: &str) -> Result<Graph> {
    let doc: Sidecar = serde_json::from_str(s).map_err(|e| {
        let line_start: usize = s
            .split_inclusive('\n')
            .take(e.line().saturating_sub(1))
            .map(str::len)
            .sum();
        parse_err(line_start + e.column().saturating_sub(1), e.to_string())
    })?;
    let g = Graph::from_edges(doc.n, doc.edges.iter().map(|e| (e[0], e[1])))?;
    match doc.labels {
        Some(l) => g.with_labels(l),
        None => Ok(g),
    }
}

pub fn encode(g: &Graph, format: Format) -> String {
    match format {
        Format::Graph6 => to_graph6(g),
        Format::Json => to_json(g),
    }
}

pub fn decode(s: &str, format: Format) -> Result<Graph> {
    match format {
        Format::Graph6 => {
            let line = s.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
            let skipped = s.find(line).unwrap_or(0);
            from_graph6(line).map_err(|e| match e {
                Error::Parse { offset, message } => Error::Parse {
                    offset: offset + skipped,
                    message,
                },
                other => other,
            })
        }
        Format::Json => from_json(s),
    }
}

/// Reads a graph, choosing the format from the file extension.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    decode(&text, Format::from_path(path))
}

pub fn write_graph(g: &Graph, path: &Path, format: Format) -> Result<()> {
    let mut text = encode(g, format);
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
