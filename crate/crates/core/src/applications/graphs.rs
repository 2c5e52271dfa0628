//! Star, nonrepetitive and frugal colourings as good colourings of
//! auxiliary hypergraphs on the same vertex set.

use crate::hypergraph::Hypergraph;
use crate::instance::{BadFamily, Combinations, Instance};

use super::{require_simple_graph, AppError};

pub const DEFAULT_PATH_BUDGET: u64 = 1_000_000;

fn build(graph: &Hypergraph, edges: Vec<(Vec<usize>, BadFamily)>) -> Result<Instance, AppError> {
    let (edges, families): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
    let aux = Hypergraph::from_handles(graph.names().to_vec(), edges)?;
    Ok(Instance::new(aux, families)?)
}

fn graph_edges(graph: &Hypergraph) -> Vec<(Vec<usize>, BadFamily)> {
    graph
        .edges()
        .iter()
        .map(|e| (e.clone(), BadFamily::monochromatic(e)))
        .collect()
}

/// Graph edges forbid monochromatic pairs; each 4-vertex path `u v w x`
/// forbids `u, w` and `v, x` both sharing a colour.
pub fn star_instance(graph: &Hypergraph) -> Result<Instance, AppError> {
    require_simple_graph(graph)?;
    let nbrs = graph.neighbourhoods();
    let mut paths = Vec::new();
    for v in 0..graph.num_vertices() {
        for &w in &nbrs[v] {
            for &u in nbrs[v].iter().filter(|&&u| u != w) {
                for &x in nbrs[w].iter().filter(|&&x| x != v && x != u && u < x) {
                    paths.push([u, v, w, x]);
                }
            }
        }
    }
    paths.sort_unstable();
    let mut edges = graph_edges(graph);
    edges.extend(
        paths
            .into_iter()
            .map(|[u, v, w, x]| (vec![u, v, w, x], BadFamily::partition(vec![vec![u, w], vec![v, x]]))),
    );
    build(graph, edges)
}

#[derive(Debug, Clone)]
pub struct NonrepetitiveInstance {
    pub instance: Instance,
    /// Longest path order encoded.
    pub max_order: usize,
    /// An explicit order below `|V|` was requested, so counts only certify
    /// paths up to `max_order`.
    pub truncated: bool,
    /// Number of encoded paths per even order, ascending.
    pub paths_by_order: Vec<(usize, usize)>,
}

impl NonrepetitiveInstance {
    pub fn validity_note(&self) -> Option<String> {
        self.truncated
            .then(|| format!("verification valid only up to order {}", self.max_order))
    }
}

/// One edge per even-order path `v1 .. v2t`, forbidding `c(v_i) = c(v_{t+i})`
/// for all `i`. A path and its reverse give one edge.
pub fn nonrepetitive_instance(
    graph: &Hypergraph,
    max_order: Option<usize>,
    budget: u64,
) -> Result<NonrepetitiveInstance, AppError> {
    require_simple_graph(graph)?;
    let n = graph.num_vertices();
    let full = 2 * (n / 2);
    let order = match max_order {
        Some(o) if o < 2 || o % 2 == 1 => return Err(AppError::InvalidOrder(o)),
        Some(o) => o.min(full.max(2)),
        None => full.max(2),
    };
    let truncated = max_order.is_some_and(|o| o < n);
    let nbrs: Vec<Vec<usize>> = graph.neighbourhoods().into_iter().map(|s| s.into_iter().collect()).collect();

    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut on_path = vec![false; n];
    let mut stack = Vec::with_capacity(order);
    fn walk(
        nbrs: &[Vec<usize>],
        order: usize,
        budget: u64,
        on_path: &mut [bool],
        stack: &mut Vec<usize>,
        paths: &mut Vec<Vec<usize>>,
    ) -> Result<(), AppError> {
        let len = stack.len();
        if len >= 4 && len.is_multiple_of(2) && stack[0] < stack[len - 1] {
            if paths.len() as u64 >= budget {
                return Err(AppError::PathBudget(budget));
            }
            paths.push(stack.clone());
        }
        if len == order {
            return Ok(());
        }
        let last = stack[len - 1];
        for &w in &nbrs[last] {
            if !on_path[w] {
                on_path[w] = true;
                stack.push(w);
                walk(nbrs, order, budget, on_path, stack, paths)?;
                stack.pop();
                on_path[w] = false;
            }
        }
        Ok(())
    }
    for v in 0..n {
        on_path[v] = true;
        stack.push(v);
        walk(&nbrs, order, budget, &mut on_path, &mut stack, &mut paths)?;
        stack.pop();
        on_path[v] = false;
    }
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let mut paths_by_order = vec![(2, graph.num_edges())];
    let mut edges = graph_edges(graph);
    for path in paths {
        let t = path.len() / 2;
        match paths_by_order.last_mut() {
            Some((o, count)) if *o == path.len() => *count += 1,
            _ => paths_by_order.push((path.len(), 1)),
        }
        let blocks = (0..t).map(|i| vec![path[i], path[t + i]]).collect();
        edges.push((path, BadFamily::partition(blocks)));
    }
    Ok(NonrepetitiveInstance {
        instance: build(graph, edges)?,
        max_order: order,
        truncated,
        paths_by_order,
    })
}

/// Graph edges plus, for every vertex `v` and every `(k+1)`-subset of its
/// neighbourhood, a monochromatic-forbidding edge. Equal subsets from
/// different centres stay as parallel edges.
pub fn frugal_instance(graph: &Hypergraph, k: u64) -> Result<Instance, AppError> {
    if k < 2 {
        return Err(AppError::KTooSmall(k));
    }
    require_simple_graph(graph)?;
    let mut edges = graph_edges(graph);
    for nbrs in graph.neighbourhoods() {
        let nbrs: Vec<usize> = nbrs.into_iter().collect();
        for subset in Combinations::new(nbrs.len(), k as usize + 1) {
            let e: Vec<usize> = subset.iter().map(|&i| nbrs[i]).collect();
            edges.push((e.clone(), BadFamily::monochromatic(&e)));
        }
    }
    build(graph, edges)
}
