//! Bad-colouring families, determining sets, pair weights and weight profiles.
//!
//! An [`Instance`] attaches to every edge `e` a family of forbidden colourings
//! of `e`. A colouring of the whole hypergraph is *good* when no edge sees one
//! of its forbidden colourings. The weight of a pair `(v, e)` is
//! `|e| - 1 - |S|` where `S` is a smallest subset of `e \ {v}` on which the
//! forbidden colourings are pairwise distinct.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError, ListAssignment};

/// Largest edge accepted for an explicit family; the determining-set search
/// is exponential in the edge size.
pub const MAX_EXPLICIT_EDGE: usize = 16;

/// Forbidden colourings of one edge.
///
/// Handles refer to the owning instance's hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BadFamily {
    /// All colourings constant on every block. Blocks may share a colour.
    EqualityPartition { blocks: Vec<Vec<usize>> },
    /// Listed colourings; each is aligned with the edge's sorted handles.
    ExplicitSet { colourings: Vec<Vec<i64>> },
}

impl BadFamily {
    /// One block: the monochromatic colourings of `edge`.
    pub fn monochromatic(edge: &[usize]) -> Self {
        Self::partition(vec![edge.to_vec()])
    }

    pub fn partition(blocks: Vec<Vec<usize>>) -> Self {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Self::EqualityPartition { blocks }
    }

    pub fn explicit(colourings: Vec<Vec<i64>>) -> Self {
        Self::ExplicitSet { colourings }
    }

    /// Explicit family from colourings keyed by vertex id.
    pub fn explicit_from_maps(
        graph: &Hypergraph,
        edge: usize,
        colourings: &[BTreeMap<String, i64>],
    ) -> Result<Self, InstanceError> {
        let e = graph.edge(edge);
        let mut out = Vec::with_capacity(colourings.len());
        for (j, map) in colourings.iter().enumerate() {
            if map.len() != e.len() || e.iter().any(|&h| !map.contains_key(graph.name(h))) {
                return Err(InstanceError::Invalid(ValidationReport {
                    issues: vec![ValidationIssue {
                        edge,
                        vertex: None,
                        kind: IssueKind::DomainMismatch { colouring: j },
                    }],
                }));
            }
            out.push(e.iter().map(|&h| map[graph.name(h)]).collect());
        }
        Ok(Self::explicit(out))
    }

    /// Whether the colouring (indexed by handle) restricted to `edge` is forbidden.
    pub fn contains(&self, edge: &[usize], colours: &[i64]) -> bool {
        match self {
            Self::EqualityPartition { blocks } => blocks.iter().all(|b| {
                let c = colours[b[0]];
                b[1..].iter().all(|&h| colours[h] == c)
            }),
            Self::ExplicitSet { colourings } => colourings
                .iter()
                .any(|phi| phi.iter().zip(edge).all(|(&c, &h)| colours[h] == c)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IssueKind {
    FamilyCountMismatch { families: usize, edges: usize },
    SingletonBlock { block: Vec<String> },
    BlocksNotPartition,
    DomainMismatch { colouring: usize },
    DuplicateColouring { colouring: usize },
    NotDeterminable { first: usize, second: usize },
    ExplicitEdgeTooLarge { size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub edge: usize,
    pub vertex: Option<String>,
    #[serde(flatten)]
    pub kind: IssueKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "edge {}", issue.edge)?;
            if let Some(v) = &issue.vertex {
                write!(f, " vertex `{v}`")?;
            }
            write!(f, ": {:?}", issue.kind)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("invalid instance: {0}")]
    Invalid(ValidationReport),
    #[error("edge index {0} out of range")]
    EdgeIndexOutOfRange(usize),
    #[error("vertex `{vertex}` is not in edge {edge}")]
    VertexNotInEdge { edge: usize, vertex: String },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Checks every family invariant, including that each `e \ {v}` determines
/// the family of `e`.
pub fn validate_instance(graph: &Hypergraph, families: &[BadFamily]) -> Result<(), ValidationReport> {
    let mut issues = Vec::new();
    if families.len() != graph.num_edges() {
        issues.push(ValidationIssue {
            edge: families.len().min(graph.num_edges()),
            vertex: None,
            kind: IssueKind::FamilyCountMismatch {
                families: families.len(),
                edges: graph.num_edges(),
            },
        });
        return Err(ValidationReport { issues });
    }
    for (i, (edge, family)) in graph.edges().iter().zip(families).enumerate() {
        match family {
            BadFamily::EqualityPartition { blocks } => {
                let mut covered: Vec<usize> = blocks.iter().flatten().copied().collect();
                covered.sort_unstable();
                if covered != *edge {
                    issues.push(ValidationIssue {
                        edge: i,
                        vertex: None,
                        kind: IssueKind::BlocksNotPartition,
                    });
                    continue;
                }
                for b in blocks.iter().filter(|b| b.len() < 2) {
                    issues.push(ValidationIssue {
                        edge: i,
                        vertex: Some(graph.name(b[0]).to_string()),
                        kind: IssueKind::SingletonBlock {
                            block: b.iter().map(|&h| graph.name(h).to_string()).collect(),
                        },
                    });
                }
            }
            BadFamily::ExplicitSet { colourings } => {
                if edge.len() > MAX_EXPLICIT_EDGE {
                    issues.push(ValidationIssue {
                        edge: i,
                        vertex: None,
                        kind: IssueKind::ExplicitEdgeTooLarge { size: edge.len() },
                    });
                    continue;
                }
                let mut domain_ok = true;
                for (j, phi) in colourings.iter().enumerate() {
                    if phi.len() != edge.len() {
                        domain_ok = false;
                        issues.push(ValidationIssue {
                            edge: i,
                            vertex: None,
                            kind: IssueKind::DomainMismatch { colouring: j },
                        });
                    }
                }
                if !domain_ok {
                    continue;
                }
                let mut seen = HashSet::new();
                let mut unique = true;
                for (j, phi) in colourings.iter().enumerate() {
                    if !seen.insert(phi.as_slice()) {
                        unique = false;
                        issues.push(ValidationIssue {
                            edge: i,
                            vertex: None,
                            kind: IssueKind::DuplicateColouring { colouring: j },
                        });
                    }
                }
                if !unique {
                    continue;
                }
                for (pos, &v) in edge.iter().enumerate() {
                    let others: Vec<usize> = (0..edge.len()).filter(|&p| p != pos).collect();
                    if let Some((first, second)) = first_collision(colourings, &others) {
                        issues.push(ValidationIssue {
                            edge: i,
                            vertex: Some(graph.name(v).to_string()),
                            kind: IssueKind::NotDeterminable { first, second },
                        });
                    }
                }
            }
        }
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(ValidationReport { issues })
    }
}

/// First pair of colourings that agree on the given edge positions.
fn first_collision(colourings: &[Vec<i64>], positions: &[usize]) -> Option<(usize, usize)> {
    let mut seen: std::collections::HashMap<Vec<i64>, usize> = std::collections::HashMap::new();
    for (j, phi) in colourings.iter().enumerate() {
        let key: Vec<i64> = positions.iter().map(|&p| phi[p]).collect();
        if let Some(&first) = seen.get(&key) {
            return Some((first, j));
        }
        seen.insert(key, j);
    }
    None
}

/// A hypergraph with one bad family per edge and optionally a list assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Hypergraph,
    families: Vec<BadFamily>,
    lists: Option<ListAssignment>,
}

impl Instance {
    pub fn new(graph: Hypergraph, families: Vec<BadFamily>) -> Result<Self, InstanceError> {
        validate_instance(&graph, &families).map_err(InstanceError::Invalid)?;
        Ok(Self {
            graph,
            families,
            lists: None,
        })
    }

    /// Every edge gets the monochromatic family.
    pub fn proper(graph: Hypergraph) -> Self {
        let families = graph.edges().iter().map(|e| BadFamily::monochromatic(e)).collect();
        Self {
            graph,
            families,
            lists: None,
        }
    }

    pub fn with_lists(mut self, lists: ListAssignment) -> Result<Self, InstanceError> {
        if lists.len() != self.graph.num_vertices() {
            return Err(HypergraphError::MissingList {
                vertex: self
                    .graph
                    .names()
                    .get(lists.len())
                    .cloned()
                    .unwrap_or_default(),
            }
            .into());
        }
        self.lists = Some(lists);
        Ok(self)
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn families(&self) -> &[BadFamily] {
        &self.families
    }

    pub fn family(&self, edge: usize) -> &BadFamily {
        &self.families[edge]
    }

    pub fn lists(&self) -> Option<&ListAssignment> {
        self.lists.as_ref()
    }

    /// Whether edge `edge` is forbidden under the handle-indexed colouring.
    pub fn edge_is_bad(&self, edge: usize, colours: &[i64]) -> bool {
        self.families[edge].contains(self.graph.edge(edge), colours)
    }

    fn check_pair(&self, edge: usize, vertex: &str) -> Result<usize, InstanceError> {
        if edge >= self.graph.num_edges() {
            return Err(InstanceError::EdgeIndexOutOfRange(edge));
        }
        let h = self.graph.require_handle(vertex)?;
        if !self.graph.edge(edge).contains(&h) {
            return Err(InstanceError::VertexNotInEdge {
                edge,
                vertex: vertex.to_string(),
            });
        }
        Ok(h)
    }

    /// Lexicographically smallest minimum-size subset of `e \ {v}` that
    /// determines the family of `e`.
    pub fn min_determining_set(&self, edge: usize, vertex: &str) -> Result<Vec<String>, InstanceError> {
        let h = self.check_pair(edge, vertex)?;
        Ok(self
            .determining_set_handles(edge, h)
            .into_iter()
            .map(|s| self.graph.name(s).to_string())
            .collect())
    }

    pub fn pair_weight(&self, edge: usize, vertex: &str) -> Result<usize, InstanceError> {
        let h = self.check_pair(edge, vertex)?;
        Ok(self.pair_weight_handle(edge, h))
    }

    /// Handle form of [`Self::min_determining_set`]. `v` must lie in the edge.
    pub fn determining_set_handles(&self, edge: usize, v: usize) -> Vec<usize> {
        let e = self.graph.edge(edge);
        match &self.families[edge] {
            BadFamily::EqualityPartition { blocks } => {
                let mut s: Vec<usize> = blocks
                    .iter()
                    .map(|b| *b.iter().find(|&&w| w != v).expect("blocks have size >= 2"))
                    .collect();
                s.sort_unstable();
                s
            }
            BadFamily::ExplicitSet { colourings } => {
                let pos_v = e.iter().position(|&w| w == v).expect("vertex in edge");
                let candidates: Vec<usize> = (0..e.len()).filter(|&p| p != pos_v).collect();
                for size in 0..=candidates.len() {
                    let found = Combinations::new(candidates.len(), size).find(|combo| {
                        let positions: Vec<usize> = combo.iter().map(|&i| candidates[i]).collect();
                        first_collision(colourings, &positions).is_none()
                    });
                    if let Some(combo) = found {
                        return combo.iter().map(|&i| e[candidates[i]]).collect();
                    }
                }
                unreachable!("validated families are determined by e minus v")
            }
        }
    }

    pub fn pair_weight_handle(&self, edge: usize, v: usize) -> usize {
        let size = self.graph.edge(edge).len();
        match &self.families[edge] {
            BadFamily::EqualityPartition { blocks } => size - 1 - blocks.len(),
            BadFamily::ExplicitSet { .. } => size - 1 - self.determining_set_handles(edge, v).len(),
        }
    }

    /// Exact `k -> E_k(v)` tallies for every vertex.
    pub fn weight_profile(&self) -> WeightProfile {
        let entries = (0..self.graph.num_vertices())
            .into_par_iter()
            .map(|v| {
                let mut counts = BTreeMap::new();
                for &e in self.graph.incident(v) {
                    *counts.entry(self.pair_weight_handle(e, v)).or_insert(0u64) += 1;
                }
                VertexProfile {
                    vertex: self.graph.name(v).to_string(),
                    counts,
                }
            })
            .collect();
        WeightProfile {
            mode: ProfileMode::Exact,
            entries,
        }
    }

    /// Sub-instance induced by a vertex mask (families follow their edges).
    pub fn induced_by_mask(&self, mask: &[bool]) -> Instance {
        let (graph, edge_map) = self.graph.induced_by_mask(mask);
        let mut relabel = vec![usize::MAX; mask.len()];
        let mut next = 0;
        for (h, &kept) in mask.iter().enumerate() {
            if kept {
                relabel[h] = next;
                next += 1;
            }
        }
        let families = edge_map
            .iter()
            .map(|&i| match &self.families[i] {
                BadFamily::EqualityPartition { blocks } => BadFamily::EqualityPartition {
                    blocks: blocks
                        .iter()
                        .map(|b| b.iter().map(|&h| relabel[h]).collect())
                        .collect(),
                },
                other => other.clone(),
            })
            .collect();
        let lists = self.lists.as_ref().map(|l| {
            let kept = l
                .lists()
                .iter()
                .zip(mask)
                .filter(|(_, &m)| m)
                .map(|(list, _)| list.clone())
                .collect();
            ListAssignment::from_lists(&graph, kept).expect("restricted lists stay valid")
        });
        Instance {
            graph,
            families,
            lists,
        }
    }
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMode {
    /// Enumerated from an instance.
    Exact,
    /// Upper bounds on `E_k` from a closed-form argument.
    Parametric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexProfile {
    pub vertex: String,
    pub counts: BTreeMap<usize, u64>,
}

impl VertexProfile {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightProfile {
    pub mode: ProfileMode,
    pub entries: Vec<VertexProfile>,
}

impl WeightProfile {
    /// A single representative vertex carrying upper bounds on `E_k`.
    pub fn parametric(label: impl Into<String>, counts: BTreeMap<usize, u64>) -> Self {
        Self {
            mode: ProfileMode::Parametric,
            entries: vec![VertexProfile {
                vertex: label.into(),
                counts,
            }],
        }
    }

    pub fn exact(entries: Vec<VertexProfile>) -> Self {
        Self {
            mode: ProfileMode::Exact,
            entries,
        }
    }

    pub fn vertex(&self, name: &str) -> Option<&VertexProfile> {
        self.entries.iter().find(|e| e.vertex == name)
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.entries
            .iter()
            .filter_map(|e| e.counts.iter().filter(|(_, &n)| n > 0).map(|(&k, _)| k).max())
            .max()
    }

    /// True when no pair has positive weight, so every objective is linear.
    pub fn is_linear(&self) -> bool {
        self.max_weight().is_none_or(|k| k == 0)
    }
}
