//! Input formats: edge-list text, graph and instance JSON, list and
//! partition JSON, and DIMACS CNF.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::applications::{AppError, CnfFormula, Partition};
use crate::hypergraph::{Hypergraph, HypergraphError, ListAssignment};
use crate::instance::{BadFamily, Instance, InstanceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("cannot read `{path}`: {message}")]
    Read { path: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("header declares {declared_vars} variables and {declared_clauses} clauses; found {found_clauses} clauses using variables up to {max_var}")]
    HeaderMismatch {
        declared_vars: usize,
        declared_clauses: usize,
        found_clauses: usize,
        max_var: usize,
    },
    #[error("clause {0} contains a variable and its negation")]
    TautologicalClause(usize),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    App(#[from] AppError),
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn json_err(msg: impl Into<String>) -> IoError {
    IoError::Json(msg.into())
}

/// Vertex ids may be JSON strings or integers.
fn id(v: &Value) -> Result<String, IoError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        other => Err(json_err(format!("vertex id must be a string or integer, got {other}"))),
    }
}

fn id_list(v: &Value, what: &str) -> Result<Vec<String>, IoError> {
    v.as_array()
        .ok_or_else(|| json_err(format!("{what} must be an array")))?
        .iter()
        .map(id)
        .collect()
}

fn colour(v: &Value) -> Result<i64, IoError> {
    v.as_i64().ok_or_else(|| json_err(format!("colour must be an integer, got {v}")))
}

fn parse_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| json_err(e.to_string()))
}

fn graph_from_value(value: &Value) -> Result<Hypergraph, IoError> {
    let obj = value.as_object().ok_or_else(|| json_err("expected an object"))?;
    let edges: Vec<Vec<String>> = obj
        .get("edges")
        .ok_or_else(|| json_err("missing `edges`"))?
        .as_array()
        .ok_or_else(|| json_err("`edges` must be an array"))?
        .iter()
        .map(|e| id_list(e, "an edge"))
        .collect::<Result<_, _>>()?;
    let vertices = match obj.get("vertices") {
        Some(v) => id_list(v, "`vertices`")?,
        None => first_appearance(&edges),
    };
    Ok(Hypergraph::new(vertices, edges)?)
}

fn first_appearance(edges: &[Vec<String>]) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    edges
        .iter()
        .flatten()
        .filter(|v| seen.insert(v.as_str()))
        .cloned()
        .collect()
}

/// Edge list text (one whitespace-separated tuple per line, `#` comments) or
/// a JSON object `{"vertices": [...], "edges": [[...], ...]}`.
pub fn parse_graph(text: &str) -> Result<Hypergraph, IoError> {
    if text.trim_start().starts_with('{') {
        return graph_from_value(&parse_json(text)?);
    }
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let ids: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        match ids.len() {
            0 => continue,
            1 => {
                return Err(IoError::Parse {
                    line: i + 1,
                    message: format!("edge `{}` has size 1", ids[0]),
                })
            }
            _ => {
                let mut uniq = ids.clone();
                uniq.sort();
                uniq.dedup();
                if uniq.len() < 2 {
                    return Err(IoError::Parse {
                        line: i + 1,
                        message: "edge has fewer than 2 distinct vertices".into(),
                    });
                }
                edges.push(ids);
            }
        }
    }
    let vertices = first_appearance(&edges);
    Ok(Hypergraph::new(vertices, edges)?)
}

pub fn parse_graph_file(path: &Path) -> Result<Hypergraph, IoError> {
    parse_graph(&read_file(path)?)
}

fn graph_value(graph: &Hypergraph) -> Value {
    let edges: Vec<Vec<&str>> = (0..graph.num_edges()).map(|e| graph.edge_names(e)).collect();
    json!({ "vertices": graph.names(), "edges": edges })
}

/// JSON form read back by [`parse_graph`].
pub fn serialize_graph(graph: &Hypergraph) -> String {
    serde_json::to_string_pretty(&graph_value(graph)).expect("serializable")
}

fn lists_from_value(graph: &Hypergraph, value: &Value) -> Result<ListAssignment, IoError> {
    let obj = value.as_object().ok_or_else(|| json_err("lists must be an object"))?;
    let mut map = BTreeMap::new();
    for (k, v) in obj {
        let list = v
            .as_array()
            .ok_or_else(|| json_err(format!("list of `{k}` must be an array")))?
            .iter()
            .map(colour)
            .collect::<Result<Vec<_>, _>>()?;
        map.insert(k.clone(), list);
    }
    Ok(ListAssignment::from_map(graph, &map)?)
}

/// `{"v": [1, 2], ...}` keyed by vertex id.
pub fn parse_lists(graph: &Hypergraph, text: &str) -> Result<ListAssignment, IoError> {
    lists_from_value(graph, &parse_json(text)?)
}

pub fn lists_value(graph: &Hypergraph, lists: &ListAssignment) -> Value {
    json!(lists.to_map(graph))
}

/// `{"parts": [["a", "b"], ["c", "d"]]}`.
pub fn parse_partition(graph: &Hypergraph, text: &str) -> Result<Partition, IoError> {
    let value = parse_json(text)?;
    let parts = value
        .get("parts")
        .ok_or_else(|| json_err("missing `parts`"))?
        .as_array()
        .ok_or_else(|| json_err("`parts` must be an array"))?
        .iter()
        .map(|p| id_list(p, "a part"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Partition::new(graph, &parts)?)
}

fn family_from_value(graph: &Hypergraph, edge: usize, value: &Value) -> Result<BadFamily, IoError> {
    let kind = value
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| json_err(format!("family {edge} needs a string `type`")))?;
    match kind {
        "monochromatic" => Ok(BadFamily::monochromatic(graph.edge(edge))),
        "partition" => {
            let blocks = value
                .get("blocks")
                .and_then(Value::as_array)
                .ok_or_else(|| json_err(format!("family {edge} needs `blocks`")))?
                .iter()
                .map(|b| {
                    id_list(b, "a block")?
                        .iter()
                        .map(|v| Ok(graph.require_handle(v)?))
                        .collect::<Result<Vec<_>, IoError>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(BadFamily::partition(blocks))
        }
        "explicit" => {
            let maps = value
                .get("colourings")
                .and_then(Value::as_array)
                .ok_or_else(|| json_err(format!("family {edge} needs `colourings`")))?
                .iter()
                .map(|m| {
                    m.as_object()
                        .ok_or_else(|| json_err("a colouring must be an object"))?
                        .iter()
                        .map(|(k, v)| Ok((k.clone(), colour(v)?)))
                        .collect::<Result<BTreeMap<_, _>, IoError>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(BadFamily::explicit_from_maps(graph, edge, &maps)?)
        }
        other => Err(json_err(format!("unknown family type `{other}`"))),
    }
}

/// An instance: the graph fields plus optional `families` (one per edge,
/// default monochromatic) and optional `lists`. Edge list text gives the
/// proper instance.
pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    if !text.trim_start().starts_with('{') {
        return Ok(Instance::proper(parse_graph(text)?));
    }
    let value = parse_json(text)?;
    let graph = graph_from_value(&value)?;
    let families = match value.get("families") {
        None => (0..graph.num_edges())
            .map(|e| BadFamily::monochromatic(graph.edge(e)))
            .collect(),
        Some(f) => f
            .as_array()
            .ok_or_else(|| json_err("`families` must be an array"))?
            .iter()
            .enumerate()
            .map(|(e, v)| {
                if e >= graph.num_edges() {
                    return Err(json_err(format!(
                        "{} families for {} edges",
                        f.as_array().map_or(0, Vec::len),
                        graph.num_edges()
                    )));
                }
                family_from_value(&graph, e, v)
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let lists = value.get("lists").map(|l| lists_from_value(&graph, l)).transpose()?;
    let instance = Instance::new(graph, families)?;
    Ok(match lists {
        Some(l) => instance.with_lists(l)?,
        None => instance,
    })
}

pub fn parse_instance_file(path: &Path) -> Result<Instance, IoError> {
    parse_instance(&read_file(path)?)
}

fn family_value(graph: &Hypergraph, edge: usize, family: &BadFamily) -> Value {
    match family {
        BadFamily::EqualityPartition { blocks } if blocks.len() == 1 && blocks[0].len() == graph.edge(edge).len() => {
            json!({ "type": "monochromatic" })
        }
        BadFamily::EqualityPartition { blocks } => {
            let blocks: Vec<Vec<&str>> = blocks
                .iter()
                .map(|b| b.iter().map(|&h| graph.name(h)).collect())
                .collect();
            json!({ "type": "partition", "blocks": blocks })
        }
        BadFamily::ExplicitSet { colourings } => {
            let maps: Vec<Map<String, Value>> = colourings
                .iter()
                .map(|phi| {
                    graph
                        .edge(edge)
                        .iter()
                        .zip(phi)
                        .map(|(&h, &c)| (graph.name(h).to_string(), json!(c)))
                        .collect()
                })
                .collect();
            json!({ "type": "explicit", "colourings": maps })
        }
    }
}

/// JSON form read back by [`parse_instance`].
pub fn serialize_instance(instance: &Instance) -> String {
    let graph = instance.graph();
    let mut value = graph_value(graph);
    let families: Vec<Value> = instance
        .families()
        .iter()
        .enumerate()
        .map(|(e, f)| family_value(graph, e, f))
        .collect();
    value["families"] = json!(families);
    if let Some(l) = instance.lists() {
        value["lists"] = lists_value(graph, l);
    }
    serde_json::to_string_pretty(&value).expect("serializable")
}

/// DIMACS CNF: `c` comments, a `p cnf <vars> <clauses>` header, then clauses
/// as signed integers terminated by `0`.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, IoError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut max_var = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let line_no = i + 1;
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                return Err(IoError::Parse {
                    line: line_no,
                    message: "expected a single `p cnf <vars> <clauses>` header".into(),
                });
            }
            let num = |s: &str| {
                s.parse::<usize>().map_err(|_| IoError::Parse {
                    line: line_no,
                    message: format!("`{s}` is not a count"),
                })
            };
            header = Some((num(parts[2])?, num(parts[3])?));
            continue;
        }
        if header.is_none() {
            return Err(IoError::Parse {
                line: line_no,
                message: "clause before the `p cnf` header".into(),
            });
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| IoError::Parse {
                line: line_no,
                message: format!("`{tok}` is not a literal"),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                max_var = max_var.max(lit.unsigned_abs() as usize);
                current.push(lit);
            }
        }
    }
    let Some((vars, declared)) = header else {
        return Err(IoError::Parse {
            line: text.lines().count().max(1),
            message: "missing `p cnf` header".into(),
        });
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != declared || max_var > vars {
        return Err(IoError::HeaderMismatch {
            declared_vars: vars,
            declared_clauses: declared,
            found_clauses: clauses.len(),
            max_var,
        });
    }
    CnfFormula::new(vars, clauses).map_err(|e| match e {
        AppError::TautologicalClause(c) => IoError::TautologicalClause(c),
        other => IoError::App(other),
    })
}

pub fn serialize_dimacs(formula: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_vars(), formula.clauses().len());
    for c in formula.clauses() {
        for l in c {
            out.push_str(&format!("{l} "));
        }
        out.push_str("0\n");
    }
    out
}
