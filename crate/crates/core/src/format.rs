//! Line-based instance file format.
//!
//! ```text
//! grid <m> <n> <UNDIRECTED|DIRECTED>
//! start <row> <col>
//! k <value>                      (optional)
//! edge <r1> <c1> <r2> <c2> <weight>
//! ```
//!
//! `#` starts a comment and blank lines are ignored. There is exactly one
//! `edge` line per grid edge. Undirected files name the canonical
//! (lexicographically smaller) endpoint first; directed files list the
//! edge from its tail to its head.

use std::fmt::Write as _;

use thiserror::Error;

use crate::grid::{EdgeId, GridSpec, Instance, Orientation, Vertex, MAX_WEIGHT};

/// Upper bound on `m * n` accepted by the parser.
pub const MAX_PARSE_VERTICES: usize = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("input is not valid UTF-8")]
    NotUtf8,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `grid` header")]
    MissingHeader,
    #[error("missing `start` line")]
    MissingStart,
    #[error("grid {rows}x{cols} has invalid dimensions")]
    BadDimensions { rows: u64, cols: u64 },
    #[error("grid {rows}x{cols} exceeds the parser limit of {MAX_PARSE_VERTICES} vertices")]
    TooLarge { rows: u64, cols: u64 },
    #[error("line {line}: start {start} lies outside the grid")]
    StartOutOfBounds { line: usize, start: Vertex },
    #[error("line {line}: vertex {vertex} lies outside the grid")]
    VertexOutOfBounds { line: usize, vertex: Vertex },
    #[error("line {line}: endpoints {a} and {b} are not adjacent")]
    NonAdjacentEndpoints { line: usize, a: Vertex, b: Vertex },
    #[error("line {line}: bad weight `{token}`")]
    BadWeight { line: usize, token: String },
    #[error("line {line}: edge {edge} declared twice")]
    DuplicateEdge { line: usize, edge: EdgeId },
    #[error("edge {edge} is not declared")]
    MissingEdge { edge: EdgeId },
    #[error("line {line}: undirected edge must list its canonical endpoint first")]
    OrientationOnUndirected { line: usize },
}

fn tokens(line: &str) -> Vec<&str> {
    let body = line.split('#').next().unwrap_or("");
    body.split_whitespace().collect()
}

fn number(line: usize, tok: &str, what: &str) -> Result<u64, ParseError> {
    tok.parse::<u64>().map_err(|_| ParseError::Syntax {
        line,
        msg: format!("expected {what}, found `{tok}`"),
    })
}

fn coord(line: usize, tok: &str) -> Result<u32, ParseError> {
    let v = number(line, tok, "coordinate")?;
    u32::try_from(v).map_err(|_| ParseError::Syntax {
        line,
        msg: format!("coordinate `{tok}` out of range"),
    })
}

fn arity(line: usize, toks: &[&str], n: usize) -> Result<(), ParseError> {
    if toks.len() != n {
        return Err(ParseError::Syntax {
            line,
            msg: format!("`{}` expects {} fields, found {}", toks[0], n - 1, toks.len() - 1),
        });
    }
    Ok(())
}

/// Parses an instance file from raw bytes.
pub fn parse_instance(bytes: &[u8]) -> Result<Instance, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError::NotUtf8)?;
    parse_instance_str(text)
}

pub fn parse_instance_str(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty());

    let (ln, head) = lines.next().ok_or(ParseError::MissingHeader)?;
    if head[0] != "grid" {
        return Err(ParseError::MissingHeader);
    }
    arity(ln, &head, 4)?;
    let rows = number(ln, head[1], "row count")?;
    let cols = number(ln, head[2], "column count")?;
    let directed = match head[3] {
        "UNDIRECTED" => false,
        "DIRECTED" => true,
        other => {
            return Err(ParseError::Syntax {
                line: ln,
                msg: format!("expected UNDIRECTED or DIRECTED, found `{other}`"),
            })
        }
    };
    if rows == 0 || cols == 0 {
        return Err(ParseError::BadDimensions { rows, cols });
    }
    if rows.checked_mul(cols).is_none_or(|c| c > MAX_PARSE_VERTICES as u64) {
        return Err(ParseError::TooLarge { rows, cols });
    }
    let spec = GridSpec::new(rows as u32, cols as u32, directed)
        .map_err(|_| ParseError::BadDimensions { rows, cols })?;

    let (ln, st) = lines.next().ok_or(ParseError::MissingStart)?;
    if st[0] != "start" {
        return Err(ParseError::MissingStart);
    }
    arity(ln, &st, 3)?;
    let start = Vertex::new(coord(ln, st[1])?, coord(ln, st[2])?);
    if !spec.contains(start) {
        return Err(ParseError::StartOutOfBounds { line: ln, start });
    }

    let edge_count = spec.edge_count();
    let mut weights: Vec<Option<u64>> = vec![None; edge_count];
    let mut orientation = vec![Orientation::Forward; edge_count];
    let mut k = None;
    let mut seen_edge = false;

    for (ln, t) in lines {
        match t[0] {
            "k" if !seen_edge && k.is_none() => {
                arity(ln, &t, 2)?;
                let v = number(ln, t[1], "k")?;
                if v == 0 || v > MAX_WEIGHT {
                    return Err(ParseError::BadWeight {
                        line: ln,
                        token: t[1].to_string(),
                    });
                }
                k = Some(v);
            }
            "edge" => {
                seen_edge = true;
                arity(ln, &t, 6)?;
                let a = Vertex::new(coord(ln, t[1])?, coord(ln, t[2])?);
                let b = Vertex::new(coord(ln, t[3])?, coord(ln, t[4])?);
                for v in [a, b] {
                    if !spec.contains(v) {
                        return Err(ParseError::VertexOutOfBounds { line: ln, vertex: v });
                    }
                }
                let id = EdgeId::new(a, b)
                    .ok_or(ParseError::NonAdjacentEndpoints { line: ln, a, b })?;
                let w = match t[5].parse::<u64>() {
                    Ok(w) if (1..=MAX_WEIGHT).contains(&w) => w,
                    _ => {
                        return Err(ParseError::BadWeight {
                            line: ln,
                            token: t[5].to_string(),
                        })
                    }
                };
                if !directed && id.first() != a {
                    return Err(ParseError::OrientationOnUndirected { line: ln });
                }
                let e = spec.edge_index(id).expect("in-bounds adjacent pair");
                if weights[e].is_some() {
                    return Err(ParseError::DuplicateEdge { line: ln, edge: id });
                }
                weights[e] = Some(w);
                orientation[e] = id.orientation_from(a).expect("endpoint");
            }
            other => {
                return Err(ParseError::Syntax {
                    line: ln,
                    msg: format!("unexpected `{other}` line"),
                })
            }
        }
    }

    let weights = weights
        .into_iter()
        .enumerate()
        .map(|(e, w)| w.ok_or(ParseError::MissingEdge { edge: spec.edge(e) }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Instance {
        spec,
        weights,
        orientation: directed.then_some(orientation),
        start,
        k,
    })
}

/// Canonical text: edges in canonical order, single spaces, LF endings.
pub fn serialize_instance(inst: &Instance) -> String {
    let spec = inst.spec;
    let mut out = String::new();
    let kind = if spec.directed { "DIRECTED" } else { "UNDIRECTED" };
    let _ = writeln!(out, "grid {} {} {}", spec.rows, spec.cols, kind);
    let _ = writeln!(out, "start {} {}", inst.start.row, inst.start.col);
    if let Some(k) = inst.k {
        let _ = writeln!(out, "k {k}");
    }
    for e in 0..spec.edge_count() {
        let id = spec.edge(e);
        let (a, b) = match inst.orientation_of(e) {
            Some(o) => (id.tail(o), id.head(o)),
            None => (id.first(), id.second()),
        };
        let _ = writeln!(
            out,
            "edge {} {} {} {} {}",
            a.row, a.col, b.row, b.col, inst.weights[e]
        );
    }
    out
}
