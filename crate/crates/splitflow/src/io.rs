//! Line-oriented instance file format.
//!
//! ```text
//! # comments start with '#'
//! p biflow <n> <m>
//! t 1 <s1> <t1> <k1> [<d1_num>/<d1_den>]
//! t 2 <s2> <t2> <k2> [<d2_num>/<d2_den>]
//! e <u> <v> <cap>        (exactly m such lines)
//! ```
//!
//! Edge ids are assigned in file order, so round-trips preserve parallel
//! edges as distinct lines.

use crate::graph::{Commodity, Graph, Instance, ModelError};
use crate::rational::{format_rational, parse_rational};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed line: {detail}")]
    Malformed { line: usize, detail: String },
    #[error("line {line}: unknown directive `{directive}`")]
    UnknownDirective { line: usize, directive: String },
    #[error("line {line}: expected `p biflow <n> <m>` before any other directive")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate problem line")]
    DuplicateHeader { line: usize },
    #[error("line {line}: duplicate terminal declaration for commodity {commodity}")]
    DuplicateTerminal { line: usize, commodity: u8 },
    #[error("line {line}: {source}")]
    Model { line: usize, source: ModelError },
    #[error("line {line}: more edge lines than the {declared} declared")]
    TooManyEdges { line: usize, declared: usize },
    #[error("expected {declared} edge lines, found {found}")]
    MissingEdges { declared: usize, found: usize },
    #[error("missing terminal declaration for commodity {commodity}")]
    MissingTerminal { commodity: u8 },
    #[error("missing problem line")]
    MissingProblemLine,
    #[error("{source}")]
    Invalid { source: ModelError },
}

fn parse_count(line: usize, field: &str, what: &str) -> Result<usize, ParseError> {
    field.parse().map_err(|_| ParseError::Malformed {
        line,
        detail: format!("invalid {what} `{field}`"),
    })
}

fn parse_capacity(line: usize, field: &str) -> Result<i64, ParseError> {
    let cap: i64 = field.parse().map_err(|_| ParseError::Malformed {
        line,
        detail: format!("invalid capacity `{field}` (integer required)"),
    })?;
    if cap < 0 {
        return Err(ParseError::Model { line, source: ModelError::NegativeCapacity(cap) });
    }
    Ok(cap)
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut graph: Option<Graph> = None;
    let mut declared_edges = 0usize;
    let mut edge_lines = 0usize;
    let mut terminals: [Option<Commodity>; 2] = [None, None];

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        match fields[0] {
            "p" => {
                if graph.is_some() {
                    return Err(ParseError::DuplicateHeader { line });
                }
                if fields.len() != 4 || fields[1] != "biflow" {
                    return Err(ParseError::Malformed {
                        line,
                        detail: "expected `p biflow <n> <m>`".to_string(),
                    });
                }
                let n = parse_count(line, fields[2], "vertex count")?;
                declared_edges = parse_count(line, fields[3], "edge count")?;
                graph =
                    Some(Graph::new(n).map_err(|source| ParseError::Model { line, source })?);
            }
            "t" => {
                if graph.is_none() {
                    return Err(ParseError::MissingHeader { line });
                }
                if fields.len() != 5 && fields.len() != 6 {
                    return Err(ParseError::Malformed {
                        line,
                        detail: "expected `t <1|2> <s> <t> <k> [num/den]`".to_string(),
                    });
                }
                let commodity = match fields[1] {
                    "1" => 0usize,
                    "2" => 1usize,
                    other => {
                        return Err(ParseError::Malformed {
                            line,
                            detail: format!("commodity must be 1 or 2, got `{other}`"),
                        })
                    }
                };
                if terminals[commodity].is_some() {
                    return Err(ParseError::DuplicateTerminal {
                        line,
                        commodity: commodity as u8 + 1,
                    });
                }
                let source = parse_count(line, fields[2], "vertex id")?;
                let sink = parse_count(line, fields[3], "vertex id")?;
                let splits: u32 = fields[4].parse().map_err(|_| ParseError::Malformed {
                    line,
                    detail: format!("invalid split count `{}`", fields[4]),
                })?;
                let demand = match fields.get(5) {
                    Some(text) => Some(parse_rational(text).map_err(|e| ParseError::Malformed {
                        line,
                        detail: e.to_string(),
                    })?),
                    None => None,
                };
                terminals[commodity] = Some(Commodity { source, sink, splits, demand });
            }
            "e" => {
                let graph = graph.as_mut().ok_or(ParseError::MissingHeader { line })?;
                if fields.len() != 4 {
                    return Err(ParseError::Malformed {
                        line,
                        detail: "expected `e <u> <v> <cap>`".to_string(),
                    });
                }
                if edge_lines == declared_edges {
                    return Err(ParseError::TooManyEdges { line, declared: declared_edges });
                }
                let a = parse_count(line, fields[1], "vertex id")?;
                let b = parse_count(line, fields[2], "vertex id")?;
                let cap = parse_capacity(line, fields[3])?;
                graph
                    .add_edge(a, b, cap)
                    .map_err(|source| ParseError::Model { line, source })?;
                edge_lines += 1;
            }
            other => {
                return Err(ParseError::UnknownDirective { line, directive: other.to_string() })
            }
        }
    }

    let graph = graph.ok_or(ParseError::MissingProblemLine)?;
    if edge_lines != declared_edges {
        return Err(ParseError::MissingEdges { declared: declared_edges, found: edge_lines });
    }
    let [first, second] = terminals;
    let first = first.ok_or(ParseError::MissingTerminal { commodity: 1 })?;
    let second = second.ok_or(ParseError::MissingTerminal { commodity: 2 })?;
    Instance::new(graph, first, second).map_err(|source| ParseError::Invalid { source })
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "p biflow {} {}\n",
        inst.graph.vertex_count(),
        inst.graph.edge_count()
    ));
    for (idx, c) in inst.commodities.iter().enumerate() {
        out.push_str(&format!("t {} {} {} {}", idx + 1, c.source, c.sink, c.splits));
        if let Some(d) = c.demand {
            out.push_str(&format!(" {}", format_rational(d)));
        }
        out.push('\n');
    }
    for e in inst.graph.edges() {
        out.push_str(&format!("e {} {} {}\n", e.a, e.b, e.capacity));
    }
    out
}
