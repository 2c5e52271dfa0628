//! Independent transversals of a vertex partition, and constrained list
//! colourings of graphs.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::check_vertex_beta;
use crate::bounds::VertexBetaReport;
use crate::exact::{pow, Beta};
use crate::hypergraph::{Hypergraph, ListAssignment};
use crate::instance::{BadFamily, Instance};

use super::{require_simple_graph, AppError};

/// Ordered disjoint parts covering the vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<Vec<usize>>,
    part_of: Vec<usize>,
}

impl Partition {
    pub fn new<S: AsRef<str>>(graph: &Hypergraph, parts: &[Vec<S>]) -> Result<Self, AppError> {
        let handles = parts
            .iter()
            .map(|p| p.iter().map(|v| graph.require_handle(v.as_ref())).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| AppError::InvalidPartition(e.to_string()))?;
        Self::from_handles(graph, handles)
    }

    pub fn from_handles(graph: &Hypergraph, parts: Vec<Vec<usize>>) -> Result<Self, AppError> {
        let mut part_of = vec![usize::MAX; graph.num_vertices()];
        let mut sorted = Vec::with_capacity(parts.len());
        for (i, mut part) in parts.into_iter().enumerate() {
            if part.is_empty() {
                return Err(AppError::InvalidPartition(format!("part {} is empty", i + 1)));
            }
            part.sort_unstable();
            for &h in &part {
                if part_of[h] != usize::MAX {
                    return Err(AppError::InvalidPartition(format!(
                        "vertex `{}` lies in more than one part",
                        graph.name(h)
                    )));
                }
                part_of[h] = i;
            }
            sorted.push(part);
        }
        if let Some(h) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(AppError::InvalidPartition(format!("vertex `{}` is in no part", graph.name(h))));
        }
        Ok(Self { parts: sorted, part_of })
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part index of a vertex handle.
    pub fn part_of(&self, h: usize) -> usize {
        self.part_of[h]
    }

    /// Smallest part size.
    pub fn min_size(&self) -> usize {
        self.parts.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Whether the edge meets `|e|` distinct parts.
    pub fn stretches(&self, edge: &[usize]) -> bool {
        edge.iter().map(|&h| self.part_of[h]).collect::<BTreeSet<_>>().len() == edge.len()
    }

    pub fn names(&self, graph: &Hypergraph) -> Vec<Vec<String>> {
        self.parts
            .iter()
            .map(|p| p.iter().map(|&h| graph.name(h).to_string()).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartLoad {
    pub part: usize,
    pub size: usize,
    /// Stretched edges meeting the part.
    pub stretched_edges: u64,
    /// `r^-r (r-1)^(r-1) t^(r-1) |V_i|`.
    pub limit: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransversalReport {
    pub parts: usize,
    pub t: usize,
    /// Common edge size of the stretched edges, when uniform.
    pub r: Option<usize>,
    pub stretched_edges: usize,
    pub dropped_edges: usize,
    pub removed_vertices: Vec<String>,
    pub loads: Vec<PartLoad>,
    pub hypothesis_holds: bool,
    /// `(r-1) t / r`.
    pub beta: f64,
    /// `n ln beta`.
    pub log_count_bound: f64,
}

#[derive(Debug, Clone)]
pub struct TransversalInstance {
    /// Vertices are part labels `1..n`; colours are vertex handles of the
    /// original hypergraph.
    pub instance: Instance,
    pub lists: ListAssignment,
    pub beta: Beta,
    pub report: TransversalReport,
}

impl TransversalInstance {
    /// Vertex ids picked by a colouring of the part hypergraph.
    pub fn transversal(&self, graph: &Hypergraph, colours: &[i64]) -> Vec<String> {
        colours.iter().map(|&c| graph.name(c as usize).to_string()).collect()
    }
}

/// Builds the part hypergraph whose good colourings are the independent
/// transversals. Non-stretched edges are dropped. With `reduce`, each part
/// larger than the smallest loses maximum-degree vertices until all parts
/// have size `t`.
pub fn transversal_instance(graph: &Hypergraph, parts: &Partition, reduce: bool) -> Result<TransversalInstance, AppError> {
    if parts.part_of.len() != graph.num_vertices() {
        return Err(AppError::InvalidPartition("partition belongs to another vertex set".into()));
    }
    let n = parts.len();
    let t = parts.min_size();
    let mut stretched: Vec<usize> = (0..graph.num_edges()).filter(|&e| parts.stretches(graph.edge(e))).collect();
    let dropped = graph.num_edges() - stretched.len();

    let sizes: BTreeSet<usize> = stretched.iter().map(|&e| graph.edge(e).len()).collect();
    let r = match sizes.len() {
        1 => sizes.first().copied(),
        _ => None,
    };
    let uniform = sizes.len() <= 1;
    let mut loads = Vec::with_capacity(n);
    for (i, part) in parts.parts.iter().enumerate() {
        let count = stretched
            .iter()
            .filter(|&&e| graph.edge(e).iter().any(|&h| parts.part_of[h] == i))
            .count() as u64;
        let size = part.len() as u64;
        let (holds, limit) = match r {
            Some(r) => {
                let r = r as u64;
                let lhs = BigUint::from(count) * pow(r, r);
                let rhs = pow(r - 1, r - 1) * pow(t as u64, r - 1) * BigUint::from(size);
                let limit = ((r - 1) as f64).powi(r as i32 - 1) * (t as f64).powi(r as i32 - 1) * size as f64
                    / (r as f64).powi(r as i32);
                (lhs <= rhs, limit)
            }
            None if uniform => (true, f64::INFINITY),
            None => (false, f64::NAN),
        };
        loads.push(PartLoad {
            part: i + 1,
            size: part.len(),
            stretched_edges: count,
            limit,
            holds,
        });
    }
    let mut alive = vec![true; graph.num_vertices()];
    let mut removed = Vec::new();
    let mut members: Vec<Vec<usize>> = parts.parts.clone();
    if reduce {
        for part in members.iter_mut() {
            while part.len() > t {
                let degree = |h: usize| {
                    stretched
                        .iter()
                        .filter(|&&e| graph.edge(e).contains(&h))
                        .count()
                };
                // First vertex of maximum degree.
                let (pos, &v) = part
                    .iter()
                    .enumerate()
                    .max_by_key(|&(i, &h)| (degree(h), std::cmp::Reverse(i)))
                    .unwrap();
                part.remove(pos);
                alive[v] = false;
                removed.push(graph.name(v).to_string());
                stretched.retain(|&e| !graph.edge(e).contains(&v));
            }
        }
    }

    let beta = match r {
        Some(r) => Beta::ratio(((r - 1) * t) as u64, r as u64),
        None => Beta::integer(t as u64),
    };

    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut x_edges = Vec::with_capacity(stretched.len());
    let mut families = Vec::with_capacity(stretched.len());
    for &e in &stretched {
        let mut pairs: Vec<(usize, i64)> = graph.edge(e).iter().map(|&h| (parts.part_of[h], h as i64)).collect();
        pairs.sort_unstable();
        x_edges.push(pairs.iter().map(|p| p.0).collect());
        families.push(BadFamily::explicit(vec![pairs.iter().map(|p| p.1).collect()]));
    }
    let x = Hypergraph::from_handles(labels, x_edges)?;
    let lists = ListAssignment::from_lists(
        &x,
        members
            .iter()
            .map(|p| p.iter().filter(|&&h| alive[h]).map(|&h| h as i64).collect())
            .collect(),
    )?;
    let instance = Instance::new(x, families)?;
    let report = TransversalReport {
        parts: n,
        t,
        r,
        stretched_edges: stretched.len(),
        dropped_edges: dropped,
        removed_vertices: removed,
        hypothesis_holds: loads.iter().all(|l| l.holds),
        loads,
        beta: beta.value(),
        log_count_bound: n as f64 * beta.value().ln(),
    };
    Ok(TransversalInstance {
        instance,
        lists,
        beta,
        report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstrainedMode {
    /// `t`-lists with `4 sum_w |L(v) & L(w)| <= t^2`; at least `(t/2)^|V|`.
    SharedColours { t: usize },
    /// `4k`-lists where each colour of `L(v)` lies in at most `k` neighbour
    /// lists; at least `(2k)^|V|`.
    ColourDegree { k: usize },
    /// `|L(v)| >= 4 sum_w |L(v) & L(w)| / |L(w)|`; at least `prod |L(v)| / 2`.
    VertexBeta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedVertex {
    pub vertex: String,
    /// Left side of the per-vertex hypothesis: `4 sum |L(v) & L(w)|`, or the
    /// largest number of neighbours sharing one colour.
    pub load: u64,
    pub limit: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedReport {
    pub mode: &'static str,
    pub holds: bool,
    pub vertices: Vec<ConstrainedVertex>,
    /// Guaranteed number of proper list colourings, exact.
    pub count_bound: String,
    pub log_count_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_beta: Option<VertexBetaReport>,
}

fn require_size(graph: &Hypergraph, lists: &ListAssignment, size: usize) -> Result<(), AppError> {
    for v in 0..graph.num_vertices() {
        let got = lists.list(v).len();
        if got != size {
            return Err(AppError::ListSizeMismatch {
                vertex: graph.name(v).to_string(),
                expected: size,
                got,
            });
        }
    }
    Ok(())
}

pub fn constrained_check(graph: &Hypergraph, lists: &ListAssignment, mode: ConstrainedMode) -> Result<ConstrainedReport, AppError> {
    require_simple_graph(graph)?;
    if lists.len() != graph.num_vertices() {
        return Err(AppError::OutOfRange(format!(
            "{} lists for {} vertices",
            lists.len(),
            graph.num_vertices()
        )));
    }
    let nbrs = graph.neighbourhoods();
    let n = graph.num_vertices();
    let shared = |v: usize, w: usize| {
        let lw = lists.list(w);
        lists.list(v).iter().filter(|c| lw.binary_search(c).is_ok()).count() as u64
    };
    match mode {
        ConstrainedMode::SharedColours { t } => {
            if t < 2 {
                return Err(AppError::OutOfRange("t >= 2".into()));
            }
            require_size(graph, lists, t)?;
            let limit = (t * t) as u64;
            let vertices: Vec<_> = (0..n)
                .map(|v| {
                    let load = 4 * nbrs[v].iter().map(|&w| shared(v, w)).sum::<u64>();
                    ConstrainedVertex {
                        vertex: graph.name(v).to_string(),
                        load,
                        limit,
                        holds: load <= limit,
                    }
                })
                .collect();
            // (t/2)^n
            let (num, den) = (pow(t as u64, n as u64), pow(2, n as u64));
            Ok(ConstrainedReport {
                mode: "shared-colours",
                holds: vertices.iter().all(|v| v.holds),
                vertices,
                count_bound: ratio_string(num, den),
                log_count_bound: n as f64 * (t as f64 / 2.0).ln(),
                vertex_beta: None,
            })
        }
        ConstrainedMode::ColourDegree { k } => {
            if k < 1 {
                return Err(AppError::OutOfRange("k >= 1".into()));
            }
            require_size(graph, lists, 4 * k)?;
            let vertices: Vec<_> = (0..n)
                .map(|v| {
                    let load = lists
                        .list(v)
                        .iter()
                        .map(|c| nbrs[v].iter().filter(|&&w| lists.list(w).binary_search(c).is_ok()).count() as u64)
                        .max()
                        .unwrap_or(0);
                    ConstrainedVertex {
                        vertex: graph.name(v).to_string(),
                        load,
                        limit: k as u64,
                        holds: load <= k as u64,
                    }
                })
                .collect();
            Ok(ConstrainedReport {
                mode: "colour-degree",
                holds: vertices.iter().all(|v| v.holds),
                vertices,
                count_bound: pow(2 * k as u64, n as u64).to_string(),
                log_count_bound: n as f64 * (2.0 * k as f64).ln(),
                vertex_beta: None,
            })
        }
        ConstrainedMode::VertexBeta => {
            let report = check_vertex_beta(graph, lists)?;
            Ok(ConstrainedReport {
                mode: "vertex-beta",
                holds: report.holds,
                vertices: Vec::new(),
                count_bound: report.count_bound.clone(),
                log_count_bound: report.log_count_bound,
                vertex_beta: Some(report),
            })
        }
    }
}

fn ratio_string(num: BigUint, den: BigUint) -> String {
    let r = num_rational::Ratio::new(num, den);
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
