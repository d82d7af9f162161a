//! Text formats for graphs and strategies.
//!
//! Graph: `#` comments, a header `n <count>`, then one `u v` arc per line.
//! Strategy: one step per line, indices ascending, `-` for the empty step.

use std::fmt::Write as _;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::strategy::Strategy;
use crate::vertex_set::VertexSet;

/// A parsed graph plus non-fatal remarks such as repeated arcs.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: Digraph,
    pub warnings: Vec<String>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| Error::Syntax {
        line,
        message: format!("expected a vertex index, found `{tok}`"),
    })
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Syntax {
        line: 1,
        message: "missing header `n <count>`".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n = match (toks.next(), toks.next(), toks.next()) {
        (Some("n"), Some(count), None) => count.parse::<usize>().map_err(|_| Error::Syntax {
            line: hline,
            message: format!("invalid vertex count `{count}`"),
        })?,
        _ => {
            return Err(Error::Syntax {
                line: hline,
                message: "expected header `n <count>`".into(),
            })
        }
    };
    let mut graph = Digraph::new(n);
    let mut warnings = Vec::new();
    for (line, text) in lines {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Syntax {
                line,
                message: format!("expected `u v`, found `{text}`"),
            });
        }
        let u = parse_index(toks[0], line)?;
        let v = parse_index(toks[1], line)?;
        for index in [u, v] {
            if index >= n {
                return Err(Error::IndexOutOfRange { line, index, n });
            }
        }
        if !graph.add_arc(u, v) {
            warnings.push(format!("line {line}: duplicate arc {u} {v} ignored"));
        }
    }
    Ok(ParsedGraph { graph, warnings })
}

/// Canonical form: header then arcs in lexicographic order.
pub fn emit_graph(d: &Digraph) -> String {
    let mut out = format!("n {}\n", d.n());
    for (u, v) in d.arcs() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

/// Parses a strategy over universe `n`. A blank line is not a step; use `-`.
pub fn parse_strategy(text: &str, n: usize) -> Result<Strategy> {
    let mut steps = Vec::new();
    for (line, text) in content_lines(text) {
        if text == "-" {
            steps.push(VertexSet::empty(n));
            continue;
        }
        let mut step = VertexSet::empty(n);
        for tok in text.split_whitespace() {
            let index = parse_index(tok, line)?;
            if index >= n {
                return Err(Error::IndexOutOfRange { line, index, n });
            }
            step.insert(index);
        }
        steps.push(step);
    }
    Ok(Strategy::new(steps))
}

pub fn emit_strategy(s: &Strategy) -> String {
    let mut out = String::new();
    for step in s.steps() {
        if step.is_empty() {
            out.push('-');
        } else {
            let parts: Vec<String> = step.iter().map(|v| v.to_string()).collect();
            out.push_str(&parts.join(" "));
        }
        out.push('\n');
    }
    out
}
