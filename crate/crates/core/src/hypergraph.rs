//! Immutable hypergraphs with parallel edges, induced restriction and degree queries.
//!
//! Vertex identifiers are opaque strings. Internally every vertex gets a dense
//! handle (its position in the vertex order) and edges are stored as sorted
//! handle arrays, so edge `i` of a hypergraph is always addressable by index.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("edge {edge} mentions unknown vertex `{vertex}`")]
    EdgeNotSubset { edge: usize, vertex: String },
    #[error("edge {edge} has {size} distinct vertices; edges need at least 2")]
    EdgeTooSmall { edge: usize, size: usize },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertexId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{vertex}` has an empty colour list")]
    EmptyList { vertex: String },
    #[error("no colour list given for vertex `{vertex}`")]
    MissingList { vertex: String },
}

#[derive(Debug, Clone)]
pub struct Hypergraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

/// Per-vertex degrees (parallel edges counted with multiplicity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub degrees: BTreeMap<String, usize>,
    pub max_degree: usize,
    /// `Some(r)` when every edge has exactly `r` vertices. `None` for mixed
    /// sizes and for the edgeless hypergraph.
    pub uniformity: Option<usize>,
}

impl Hypergraph {
    /// Builds a hypergraph from vertex ids and edges given as vertex-id lists.
    ///
    /// Repeated ids inside one edge collapse, since an edge is a set.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, HypergraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = S>,
        S: IntoIterator,
        S::Item: AsRef<str>,
    {
        let names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (h, name) in names.iter().enumerate() {
            if index.insert(name.clone(), h).is_some() {
                return Err(HypergraphError::DuplicateVertexId(name.clone()));
            }
        }
        let mut handle_edges = Vec::new();
        for (i, edge) in edges.into_iter().enumerate() {
            let mut handles = Vec::new();
            for v in edge {
                let v = v.as_ref();
                match index.get(v) {
                    Some(&h) => handles.push(h),
                    None => {
                        return Err(HypergraphError::EdgeNotSubset {
                            edge: i,
                            vertex: v.to_string(),
                        })
                    }
                }
            }
            handle_edges.push(handles);
        }
        Self::from_handles_with_index(names, index, handle_edges)
    }

    /// Builds from dense handles `0..names.len()`.
    pub fn from_handles(names: Vec<String>, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let mut index = HashMap::with_capacity(names.len());
        for (h, name) in names.iter().enumerate() {
            if index.insert(name.clone(), h).is_some() {
                return Err(HypergraphError::DuplicateVertexId(name.clone()));
            }
        }
        Self::from_handles_with_index(names, index, edges)
    }

    fn from_handles_with_index(
        names: Vec<String>,
        index: HashMap<String, usize>,
        edges: Vec<Vec<usize>>,
    ) -> Result<Self, HypergraphError> {
        let n = names.len();
        let mut incidence = vec![Vec::new(); n];
        let mut sorted_edges = Vec::with_capacity(edges.len());
        for (i, mut edge) in edges.into_iter().enumerate() {
            if let Some(&bad) = edge.iter().find(|&&h| h >= n) {
                return Err(HypergraphError::EdgeNotSubset {
                    edge: i,
                    vertex: format!("#{bad}"),
                });
            }
            edge.sort_unstable();
            edge.dedup();
            if edge.len() < 2 {
                return Err(HypergraphError::EdgeTooSmall {
                    edge: i,
                    size: edge.len(),
                });
            }
            for &h in &edge {
                incidence[h].push(i);
            }
            sorted_edges.push(edge);
        }
        Ok(Self {
            names,
            index,
            edges: sorted_edges,
            incidence,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, handle: usize) -> &str {
        &self.names[handle]
    }

    pub fn handle(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require_handle(&self, name: &str) -> Result<usize, HypergraphError> {
        self.handle(name)
            .ok_or_else(|| HypergraphError::UnknownVertex(name.to_string()))
    }

    /// Sorted handles of edge `i`.
    pub fn edge(&self, i: usize) -> &[usize] {
        &self.edges[i]
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Edge `i` as vertex ids, in handle order.
    pub fn edge_names(&self, i: usize) -> Vec<&str> {
        self.edges[i].iter().map(|&h| self.name(h)).collect()
    }

    /// Indices of the edges containing `handle`.
    pub fn incident(&self, handle: usize) -> &[usize] {
        &self.incidence[handle]
    }

    pub fn degree(&self, handle: usize) -> usize {
        self.incidence[handle].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn uniformity(&self) -> Option<usize> {
        let r = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == r).then_some(r)
    }

    pub fn degree_stats(&self) -> DegreeStats {
        DegreeStats {
            degrees: self
                .names
                .iter()
                .zip(&self.incidence)
                .map(|(n, inc)| (n.clone(), inc.len()))
                .collect(),
            max_degree: self.max_degree(),
            uniformity: self.uniformity(),
        }
    }

    /// True when every edge has exactly two vertices.
    pub fn is_graph(&self) -> bool {
        self.edges.iter().all(|e| e.len() == 2)
    }

    /// True when no two edges have the same vertex set.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|e| seen.insert(e.as_slice()))
    }

    /// The sub-hypergraph induced by `keep`. Returns it with a map from each
    /// new edge index to the original edge index.
    pub fn induced_subhypergraph<S: AsRef<str>>(
        &self,
        keep: &[S],
    ) -> Result<(Hypergraph, Vec<usize>), HypergraphError> {
        let mut mask = vec![false; self.num_vertices()];
        for name in keep {
            mask[self.require_handle(name.as_ref())?] = true;
        }
        Ok(self.induced_by_mask(&mask))
    }

    /// Induced restriction by a vertex mask indexed by handle. Vertex order is
    /// preserved.
    pub fn induced_by_mask(&self, mask: &[bool]) -> (Hypergraph, Vec<usize>) {
        let mut relabel = vec![usize::MAX; self.num_vertices()];
        let mut names = Vec::new();
        for (h, &kept) in mask.iter().enumerate() {
            if kept {
                relabel[h] = names.len();
                names.push(self.names[h].clone());
            }
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.iter().all(|&h| mask[h]) {
                edges.push(e.iter().map(|&h| relabel[h]).collect());
                edge_map.push(i);
            }
        }
        let sub = Hypergraph::from_handles(names, edges)
            .expect("restriction of a valid hypergraph is valid");
        (sub, edge_map)
    }

    /// Neighbour handle sets for a 2-uniform hypergraph (parallel edges merged).
    pub fn neighbourhoods(&self) -> Vec<BTreeSet<usize>> {
        let mut nbrs = vec![BTreeSet::new(); self.num_vertices()];
        for e in &self.edges {
            for &a in e {
                for &b in e {
                    if a != b {
                        nbrs[a].insert(b);
                    }
                }
            }
        }
        nbrs
    }
}

/// Per-vertex finite colour lists, indexed by vertex handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<Vec<i64>>,
}

impl ListAssignment {
    /// The list `{1, ..., c}` at every vertex.
    pub fn uniform(num_vertices: usize, c: usize) -> Self {
        let palette: Vec<i64> = (1..=c as i64).collect();
        Self {
            lists: vec![palette; num_vertices],
        }
    }

    /// Lists indexed by handle. Duplicate colours collapse.
    pub fn from_lists(graph: &Hypergraph, lists: Vec<Vec<i64>>) -> Result<Self, HypergraphError> {
        if lists.len() != graph.num_vertices() {
            let missing = graph.name(lists.len().min(graph.num_vertices().saturating_sub(1)));
            return Err(HypergraphError::MissingList {
                vertex: missing.to_string(),
            });
        }
        let mut out = Vec::with_capacity(lists.len());
        for (h, mut list) in lists.into_iter().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                return Err(HypergraphError::EmptyList {
                    vertex: graph.name(h).to_string(),
                });
            }
            out.push(list);
        }
        Ok(Self { lists: out })
    }

    pub fn from_map(graph: &Hypergraph, map: &BTreeMap<String, Vec<i64>>) -> Result<Self, HypergraphError> {
        for name in map.keys() {
            graph.require_handle(name)?;
        }
        let lists = graph
            .names()
            .iter()
            .map(|name| {
                map.get(name).cloned().ok_or_else(|| HypergraphError::MissingList {
                    vertex: name.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_lists(graph, lists)
    }

    pub fn list(&self, handle: usize) -> &[i64] {
        &self.lists[handle]
    }

    pub fn lists(&self) -> &[Vec<i64>] {
        &self.lists
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// `Some(c)` when this is a c-list-assignment.
    pub fn uniform_size(&self) -> Option<usize> {
        let c = self.lists.first()?.len();
        self.lists.iter().all(|l| l.len() == c).then_some(c)
    }

    /// Product of list sizes over the masked vertices, saturating.
    pub fn product_size(&self, mask: Option<&[bool]>) -> u128 {
        self.lists
            .iter()
            .enumerate()
            .filter(|(h, _)| mask.is_none_or(|m| m[*h]))
            .fold(1u128, |acc, (_, l)| acc.saturating_mul(l.len() as u128))
    }

    pub fn to_map(&self, graph: &Hypergraph) -> BTreeMap<String, Vec<i64>> {
        graph
            .names()
            .iter()
            .cloned()
            .zip(self.lists.iter().cloned())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Hypergraph {
        Hypergraph::new(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]]).unwrap()
    }

    #[test]
    fn triangle_degrees() {
        let k3 = triangle();
        let stats = k3.degree_stats();
        assert_eq!(stats.max_degree, 2);
        assert_eq!(stats.uniformity, Some(2));
        assert!(stats.degrees.values().all(|&d| d == 2));
    }

    #[test]
    fn three_uniform_example() {
        let h = Hypergraph::new(["a", "b", "c", "d"], [vec!["a", "b", "c"], vec!["b", "c", "d"]]).unwrap();
        assert_eq!(h.max_degree(), 2);
        assert_eq!(h.uniformity(), Some(3));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            Hypergraph::new(["a", "b"], [["a", "c"]]).unwrap_err(),
            HypergraphError::EdgeNotSubset {
                edge: 0,
                vertex: "c".into()
            }
        );
        assert!(matches!(
            Hypergraph::new(["a", "b"], [["a", "a"]]),
            Err(HypergraphError::EdgeTooSmall { edge: 0, size: 1 })
        ));
        assert!(matches!(
            Hypergraph::new(["a", "a"], Vec::<Vec<&str>>::new()),
            Err(HypergraphError::DuplicateVertexId(_))
        ));
    }

    #[test]
    fn parallel_edges_count_twice() {
        let h = Hypergraph::new(["a", "b"], [["a", "b"], ["a", "b"]]).unwrap();
        assert_eq!(h.degree(h.handle("a").unwrap()), 2);
        assert!(!h.is_simple());
    }

    #[test]
    fn mixed_sizes_have_no_uniformity() {
        let h = Hypergraph::new(["a", "b", "c"], [vec!["a", "b"], vec!["a", "b", "c"]]).unwrap();
        assert_eq!(h.uniformity(), None);
    }

    #[test]
    fn induced_restrictions() {
        let k3 = triangle();
        let (sub, map) = k3.induced_subhypergraph(&["a", "b"]).unwrap();
        assert_eq!(sub.num_edges(), 1);
        assert_eq!(sub.edge_names(0), vec!["a", "b"]);
        assert_eq!(map, vec![0]);

        let (single, _) = k3.induced_subhypergraph(&["a"]).unwrap();
        assert_eq!(single.num_vertices(), 1);
        assert_eq!(single.num_edges(), 0);

        let h = Hypergraph::new(["a", "b", "c", "d"], [vec!["a", "b", "c"], vec!["b", "c", "d"]]).unwrap();
        let (sub, map) = h.induced_subhypergraph(&["a", "b", "c"]).unwrap();
        assert_eq!(sub.num_edges(), 1);
        assert_eq!(map, vec![0]);

        assert!(matches!(
            k3.induced_subhypergraph(&["z"]),
            Err(HypergraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn full_restriction_is_identity() {
        let k3 = triangle();
        let (same, map) = k3.induced_subhypergraph(k3.names()).unwrap();
        assert_eq!(same, k3);
        assert_eq!(map, vec![0, 1, 2]);
    }

    #[test]
    fn lists_must_cover_every_vertex() {
        let k3 = triangle();
        let mut map = BTreeMap::new();
        map.insert("a".to_string(), vec![1, 2]);
        assert!(matches!(
            ListAssignment::from_map(&k3, &map),
            Err(HypergraphError::MissingList { .. })
        ));
        map.insert("b".to_string(), vec![]);
        map.insert("c".to_string(), vec![3]);
        assert!(matches!(
            ListAssignment::from_map(&k3, &map),
            Err(HypergraphError::EmptyList { .. })
        ));
        let uni = ListAssignment::uniform(3, 4);
        assert_eq!(uni.uniform_size(), Some(4));
        assert_eq!(uni.product_size(None), 64);
    }
}
