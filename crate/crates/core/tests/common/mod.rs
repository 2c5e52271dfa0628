//! Graph generators and brute-force oracles shared by the integration tests.
//! Nothing here calls the enumeration engine.
#![allow(dead_code)]

use std::collections::BTreeSet;

use goodcolour::{Hypergraph, Instance, ListAssignment};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Hypergraph {
    Hypergraph::from_handles(names(n), edges.iter().map(|&(a, b)| vec![a, b]).collect()).unwrap()
}

pub fn path(n: usize) -> Hypergraph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    graph(n, &edges)
}

pub fn cycle(n: usize) -> Hypergraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    graph(n, &edges)
}

pub fn complete(n: usize) -> Hypergraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    graph(n, &edges)
}

fn pair_slots(n: usize) -> Vec<(usize, usize)> {
    let mut slots = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            slots.push((a, b));
        }
    }
    slots
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative per isomorphism class of simple graphs on `n`
/// vertices, as edge lists. Canonical form: the smallest edge bitmask over
/// all vertex permutations.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let slots = pair_slots(n);
    let index = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        slots.iter().position(|&s| s == (a, b)).unwrap()
    };
    let perms = permutations(n);
    // Slot remapping per permutation, precomputed.
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| slots.iter().map(|&(a, b)| index(p[a], p[b])).collect())
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for bits in 0u32..1 << slots.len() {
        let canon = maps
            .iter()
            .map(|m| {
                (0..slots.len())
                    .filter(|&i| bits >> i & 1 == 1)
                    .fold(0u32, |acc, i| acc | 1 << m[i])
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(
                (0..slots.len())
                    .filter(|&i| canon >> i & 1 == 1)
                    .map(|i| slots[i])
                    .collect(),
            );
        }
    }
    out
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

pub fn trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    nonisomorphic_graphs(n)
        .into_iter()
        .filter(|e| e.len() + 1 == n && is_connected(n, e))
        .collect()
}

pub fn max_degree(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut deg = vec![0; n];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    deg.into_iter().max().unwrap_or(0)
}

/// Every colouring drawn from `lists`, in odometer order.
pub fn all_colourings(lists: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(lists.len())];
    for list in lists {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |&c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    out
}

/// Good colourings counted by testing every edge of every colouring.
pub fn naive_count(instance: &Instance, lists: &ListAssignment) -> u64 {
    let edges = instance.graph().num_edges();
    all_colourings(lists.lists())
        .iter()
        .filter(|col| (0..edges).all(|e| !instance.edge_is_bad(e, col)))
        .count() as u64
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    adj
}

pub fn is_proper(edges: &[(usize, usize)], col: &[i64]) -> bool {
    edges.iter().all(|&(a, b)| col[a] != col[b])
}

/// Proper, and no path on four vertices uses exactly two colours.
pub fn is_star_colouring(n: usize, edges: &[(usize, usize)], col: &[i64]) -> bool {
    if !is_proper(edges, col) {
        return false;
    }
    let adj = adjacency(n, edges);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
                    if distinct && adj[a][b] && adj[b][c] && adj[c][d] && col[a] == col[c] && col[b] == col[d] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// All simple paths as vertex sequences (both directions), any length >= 1.
pub fn simple_paths(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let adj = adjacency(n, edges);
    let mut out = Vec::new();
    fn grow(adj: &[Vec<bool>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        let last = *path.last().unwrap();
        for w in 0..adj.len() {
            if adj[last][w] && !path.contains(&w) {
                path.push(w);
                grow(adj, path, out);
                path.pop();
            }
        }
    }
    for v in 0..n {
        grow(&adj, &mut vec![v], &mut out);
    }
    out
}

/// No path of even order has first half coloured like its second half.
pub fn is_nonrepetitive(paths: &[Vec<usize>], col: &[i64]) -> bool {
    paths.iter().all(|p| {
        let t = p.len() / 2;
        p.len() % 2 == 1 || (0..t).any(|i| col[p[i]] != col[p[t + i]])
    })
}

/// Proper, and no colour repeats more than `k` times around any vertex.
pub fn is_frugal(n: usize, edges: &[(usize, usize)], col: &[i64], k: usize) -> bool {
    if !is_proper(edges, col) {
        return false;
    }
    let adj = adjacency(n, edges);
    (0..n).all(|v| {
        let mut seen = std::collections::BTreeMap::new();
        for w in (0..n).filter(|&w| adj[v][w]) {
            *seen.entry(col[w]).or_insert(0usize) += 1;
        }
        seen.values().all(|&m| m <= k)
    })
}

/// Independent transversals by brute force: one vertex per part, no edge
/// inside the chosen set.
pub fn count_independent_transversals(graph: &Hypergraph, parts: &[Vec<usize>]) -> u64 {
    let lists: Vec<Vec<i64>> = parts.iter().map(|p| p.iter().map(|&h| h as i64).collect()).collect();
    all_colourings(&lists)
        .iter()
        .filter(|choice| {
            let set: BTreeSet<usize> = choice.iter().map(|&h| h as usize).collect();
            graph.edges().iter().all(|e| !e.iter().all(|h| set.contains(h)))
        })
        .count() as u64
}

/// Random `r`-uniform hypergraph on `n` vertices with maximum degree at most
/// `max_deg`: candidate edges are drawn and kept while degrees allow.
pub fn random_uniform(rng: &mut impl Rng, n: usize, r: usize, max_deg: usize, tries: usize) -> Hypergraph {
    let mut deg = vec![0; n];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let verts: Vec<usize> = (0..n).collect();
    for _ in 0..tries {
        let mut e: Vec<usize> = verts.choose_multiple(rng, r).copied().collect();
        e.sort_unstable();
        if e.iter().all(|&v| deg[v] < max_deg) && !edges.contains(&e) {
            for &v in &e {
                deg[v] += 1;
            }
            edges.push(e);
        }
    }
    Hypergraph::from_handles(names(n), edges).unwrap()
}
