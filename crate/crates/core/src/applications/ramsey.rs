//! Edge colourings of a graph with no monochromatic `K_k`, as good vertex
//! colourings of the hypergraph on `E(G)` whose edges are `k`-cliques.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::bounds::{ramsey_dk_admissible, ramsey_dk_threshold};
use crate::exact::{biguint_ln, pow};
use crate::hypergraph::{Hypergraph, ListAssignment};
use crate::instance::{BadFamily, Instance};

use super::{require_simple_graph, AppError};

pub const DEFAULT_CLIQUE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamseyReport {
    pub k: u64,
    pub c: u64,
    pub cliques: usize,
    /// Largest number of `k`-cliques through one edge.
    pub d_k: u64,
    /// `C(k,2) - 1`.
    pub m: u64,
    /// `(D_k (m-1))^(1/m)`.
    pub beta: f64,
    /// Largest `D_k` allowed by the threshold for this `c`.
    pub threshold: String,
    pub threshold_float: f64,
    pub applicable: bool,
    /// `(D_k (m-1))^(|E|/m)` in log form.
    pub log_count_bound: f64,
}

#[derive(Debug, Clone)]
pub struct RamseyInstance {
    /// One vertex `u~v` per graph edge.
    pub instance: Instance,
    pub lists: ListAssignment,
    pub report: RamseyReport,
}

impl RamseyInstance {
    /// Exact check of `count >= (D_k (m-1))^(|E|/m)`, as
    /// `count^m >= (D_k (m-1))^|E|`.
    pub fn count_meets_bound(&self, count: &BigUint) -> bool {
        let base = self.report.d_k * (self.report.m - 1);
        let edges = self.instance.graph().num_vertices();
        num_traits::pow(count.clone(), self.report.m as usize) >= pow(base, edges as u64)
    }
}

/// All `k`-cliques as increasing handle tuples, in lexicographic order.
pub fn k_cliques(graph: &Hypergraph, k: usize, budget: u64) -> Result<Vec<Vec<usize>>, AppError> {
    let nbrs = graph.neighbourhoods();
    let mut out = Vec::new();
    fn extend(
        nbrs: &[std::collections::BTreeSet<usize>],
        k: usize,
        budget: u64,
        clique: &mut Vec<usize>,
        candidates: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), AppError> {
        if clique.len() == k {
            if out.len() as u64 >= budget {
                return Err(AppError::CliqueEnumerationBudget(budget));
            }
            out.push(clique.clone());
            return Ok(());
        }
        if clique.len() + candidates.len() < k {
            return Ok(());
        }
        for (i, &v) in candidates.iter().enumerate() {
            let next = candidates[i + 1..].iter().copied().filter(|w| nbrs[v].contains(w)).collect();
            clique.push(v);
            extend(nbrs, k, budget, clique, next, out)?;
            clique.pop();
        }
        Ok(())
    }
    extend(&nbrs, k, budget, &mut Vec::new(), (0..graph.num_vertices()).collect(), &mut out)?;
    Ok(out)
}

pub fn ramsey_instance(graph: &Hypergraph, k: u64, c: u64, budget: u64) -> Result<RamseyInstance, AppError> {
    if k < 3 {
        return Err(AppError::OutOfRange("k >= 3".into()));
    }
    if c < 2 {
        return Err(AppError::OutOfRange("c >= 2".into()));
    }
    require_simple_graph(graph)?;
    let edge_names: Vec<String> = graph
        .edges()
        .iter()
        .map(|e| format!("{}~{}", graph.name(e[0]), graph.name(e[1])))
        .collect();
    let mut edge_index = std::collections::HashMap::new();
    for (i, e) in graph.edges().iter().enumerate() {
        edge_index.insert((e[0], e[1]), i);
    }
    let cliques = k_cliques(graph, k as usize, budget)?;
    let mut aux_edges = Vec::with_capacity(cliques.len());
    for q in &cliques {
        let mut e = Vec::new();
        for (i, &a) in q.iter().enumerate() {
            for &b in &q[i + 1..] {
                e.push(edge_index[&(a, b)]);
            }
        }
        aux_edges.push(e);
    }
    let aux = Hypergraph::from_handles(edge_names, aux_edges)?;
    let families = aux.edges().iter().map(|e| BadFamily::monochromatic(e)).collect();
    let lists = ListAssignment::uniform(aux.num_vertices(), c as usize);
    let d_k = aux.max_degree() as u64;
    let instance = Instance::new(aux, families)?;

    let m = k * (k - 1) / 2 - 1;
    let base = (d_k * (m - 1)) as f64;
    let threshold = ramsey_dk_threshold(k, c);
    let exact_threshold =
        ((m - 1) as f64).powi(m as i32 - 1) * (c as f64).powi(m as i32) / (m as f64).powi(m as i32);
    let d = BigUint::from(d_k);
    let report = RamseyReport {
        k,
        c,
        cliques: cliques.len(),
        d_k,
        m,
        beta: base.powf(1.0 / m as f64),
        threshold: threshold.to_string(),
        threshold_float: exact_threshold,
        applicable: ramsey_dk_admissible(k, c, &d),
        log_count_bound: if d.is_zero() {
            f64::NEG_INFINITY
        } else {
            instance.graph().num_vertices() as f64 / m as f64 * biguint_ln(&BigUint::from(d_k * (m - 1)))
        },
    };
    Ok(RamseyInstance {
        instance,
        lists,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{count_good, DEFAULT_BUDGET};

    fn complete(n: usize) -> Hypergraph {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push(vec![a, b]);
            }
        }
        Hypergraph::from_handles(names, edges).unwrap()
    }

    #[test]
    fn k4_triangles() {
        let ri = ramsey_instance(&complete(4), 3, 3, DEFAULT_CLIQUE_BUDGET).unwrap();
        assert_eq!(ri.report.cliques, 4);
        assert_eq!(ri.report.d_k, 2);
        assert_eq!(ri.report.m, 2);
        assert!(ri.report.applicable);
        assert_eq!(ri.report.threshold, "2");
        assert!((ri.report.log_count_bound - 8f64.ln()).abs() < 1e-12);
        let count = count_good(&ri.instance, &ri.lists, DEFAULT_BUDGET).unwrap().count;
        assert!(count >= 8u32.into());
        assert!(ri.count_meets_bound(&count));
        assert!(ri.instance.graph().names().contains(&"v0~v1".to_string()));
    }

    #[test]
    fn k3_two_colours() {
        let ri = ramsey_instance(&complete(3), 3, 2, DEFAULT_CLIQUE_BUDGET).unwrap();
        assert_eq!(ri.report.d_k, 1);
        assert!(ri.report.applicable);
        let count = count_good(&ri.instance, &ri.lists, DEFAULT_BUDGET).unwrap().count;
        assert_eq!(count, 6u32.into());
        assert!(ri.count_meets_bound(&count));
    }

    #[test]
    fn triangle_free_and_budget() {
        let names: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let c5 = Hypergraph::from_handles(names, (0..5).map(|i| vec![i, (i + 1) % 5]).collect()).unwrap();
        let ri = ramsey_instance(&c5, 3, 2, DEFAULT_CLIQUE_BUDGET).unwrap();
        assert_eq!(ri.report.d_k, 0);
        assert_eq!(ri.instance.graph().num_edges(), 0);
        assert_eq!(
            ramsey_instance(&complete(6), 3, 2, 5).unwrap_err(),
            AppError::CliqueEnumerationBudget(5)
        );
        assert_eq!(k_cliques(&complete(6), 4, 100).unwrap().len(), 15);
    }
}
