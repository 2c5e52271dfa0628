//! Exhaustive counting and search for good list colourings, plus empirical
//! checks of the count guarantee and of the one-vertex extension inequality
//! `P(H) >= beta * P(H - v)` over every induced sub-hypergraph.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::check_key;
use crate::exact::{biguint_ln, Beta};
use crate::hypergraph::{Hypergraph, ListAssignment};
use crate::instance::Instance;

pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Largest vertex count accepted by [`verify_extension_lemma`].
pub const MAX_LEMMA_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColouringError {
    #[error("colouring does not assign vertex `{vertex}`")]
    PartialColouring { vertex: String },
    #[error("colouring has {got} entries, instance has {expected} vertices")]
    WrongLength { got: usize, expected: usize },
    #[error("enumeration needs {product} leaves, budget is {budget}")]
    BudgetExceeded { product: u128, budget: u128 },
    #[error("list assignment covers {got} vertices, instance has {expected}")]
    ListMismatch { got: usize, expected: usize },
    #[error("{} ({attempts} attempts)", if *certified { "no good colouring exists" } else { "no good colouring found; inconclusive" })]
    NoneFound { certified: bool, attempts: u64 },
    #[error("extension check needs at most {MAX_LEMMA_VERTICES} vertices, got {0}")]
    TooManyVertices(usize),
}

/// A total colouring, indexed by vertex handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    colours: Vec<i64>,
}

impl Colouring {
    pub fn new(colours: Vec<i64>) -> Self {
        Self { colours }
    }

    pub fn from_map(graph: &Hypergraph, map: &BTreeMap<String, i64>) -> Result<Self, ColouringError> {
        let colours = graph
            .names()
            .iter()
            .map(|n| {
                map.get(n)
                    .copied()
                    .ok_or_else(|| ColouringError::PartialColouring { vertex: n.clone() })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { colours })
    }

    pub fn colours(&self) -> &[i64] {
        &self.colours
    }

    pub fn to_map(&self, graph: &Hypergraph) -> BTreeMap<String, i64> {
        graph.names().iter().cloned().zip(self.colours.iter().copied()).collect()
    }

    /// Whether every vertex takes a colour from its list.
    pub fn respects(&self, lists: &ListAssignment) -> bool {
        self.colours
            .iter()
            .enumerate()
            .all(|(h, c)| lists.list(h).binary_search(c).is_ok())
    }
}

/// Lowest-index edge whose restriction is forbidden, if any.
pub fn is_bad(instance: &Instance, colouring: &Colouring) -> Result<Option<usize>, ColouringError> {
    let n = instance.graph().num_vertices();
    if colouring.colours.len() != n {
        return Err(ColouringError::WrongLength {
            got: colouring.colours.len(),
            expected: n,
        });
    }
    Ok((0..instance.graph().num_edges()).find(|&e| instance.edge_is_bad(e, &colouring.colours)))
}

/// Vertex order and per-position edge checks for one enumeration.
struct Plan<'a> {
    instance: &'a Instance,
    lists: &'a ListAssignment,
    order: Vec<usize>,
    /// Edges whose last vertex in `order` sits at each position.
    closing: Vec<Vec<usize>>,
    /// First position after which no edge closes.
    free_from: usize,
    /// `suffix[p]` is the product of list sizes over `order[p..]`.
    suffix: Vec<u128>,
}

impl<'a> Plan<'a> {
    /// Fail-first order (most incident edges first) over the masked vertices;
    /// only edges inside the mask are checked.
    fn new(instance: &'a Instance, lists: &'a ListAssignment, mask: Option<&[bool]>) -> Self {
        let graph = instance.graph();
        let keep = |h: usize| mask.is_none_or(|m| m[h]);
        let live_edges: Vec<usize> = (0..graph.num_edges())
            .filter(|&e| graph.edge(e).iter().all(|&h| keep(h)))
            .collect();
        let mut degree = vec![0usize; graph.num_vertices()];
        for &e in &live_edges {
            for &h in graph.edge(e) {
                degree[h] += 1;
            }
        }
        let mut order: Vec<usize> = (0..graph.num_vertices()).filter(|&h| keep(h)).collect();
        order.sort_by_key(|&h| (std::cmp::Reverse(degree[h]), h));
        let mut position = vec![usize::MAX; graph.num_vertices()];
        for (p, &h) in order.iter().enumerate() {
            position[h] = p;
        }
        let mut closing = vec![Vec::new(); order.len()];
        for &e in &live_edges {
            let last = graph.edge(e).iter().map(|&h| position[h]).max().unwrap();
            closing[last].push(e);
        }
        let free_from = closing.iter().rposition(|c| !c.is_empty()).map_or(0, |p| p + 1);
        let mut suffix = vec![1u128; order.len() + 1];
        for p in (0..order.len()).rev() {
            suffix[p] = suffix[p + 1].saturating_mul(lists.list(order[p]).len() as u128);
        }
        Self {
            instance,
            lists,
            order,
            closing,
            free_from,
            suffix,
        }
    }

    fn ok_at(&self, pos: usize, colours: &[i64]) -> bool {
        self.closing[pos].iter().all(|&e| !self.instance.edge_is_bad(e, colours))
    }

    fn count_from(&self, pos: usize, colours: &mut [i64]) -> u128 {
        if pos >= self.free_from {
            return self.suffix[pos];
        }
        let v = self.order[pos];
        let mut total = 0;
        for &c in self.lists.list(v) {
            colours[v] = c;
            if self.ok_at(pos, colours) {
                total += self.count_from(pos + 1, colours);
            }
        }
        total
    }

    fn count(&self) -> u128 {
        let Some(&first) = self.order.first() else {
            return 1;
        };
        let n = self.instance.graph().num_vertices();
        self.lists
            .list(first)
            .par_iter()
            .map(|&c| {
                let mut colours = vec![0i64; n];
                colours[first] = c;
                if self.ok_at(0, &colours) {
                    self.count_from(1, &mut colours)
                } else {
                    0
                }
            })
            .sum()
    }

    fn find_from(&self, pos: usize, colours: &mut [i64]) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let v = self.order[pos];
        for &c in self.lists.list(v) {
            colours[v] = c;
            if self.ok_at(pos, colours) && self.find_from(pos + 1, colours) {
                return true;
            }
        }
        false
    }
}

fn check_lists(instance: &Instance, lists: &ListAssignment) -> Result<(), ColouringError> {
    let n = instance.graph().num_vertices();
    if lists.len() != n {
        return Err(ColouringError::ListMismatch {
            got: lists.len(),
            expected: n,
        });
    }
    Ok(())
}

fn check_budget(lists: &ListAssignment, mask: Option<&[bool]>, budget: u128) -> Result<u128, ColouringError> {
    let product = lists.product_size(mask);
    if product > budget {
        return Err(ColouringError::BudgetExceeded { product, budget });
    }
    Ok(product)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub count: BigUint,
    pub vertices: usize,
    /// Product of list sizes, the size of the search space.
    pub search_space: u128,
}

/// Exact number of good colourings from the given lists.
pub fn count_good(instance: &Instance, lists: &ListAssignment, budget: u128) -> Result<CountResult, ColouringError> {
    check_lists(instance, lists)?;
    let search_space = check_budget(lists, None, budget)?;
    let count = Plan::new(instance, lists, None).count();
    Ok(CountResult {
        count: BigUint::from(count),
        vertices: instance.graph().num_vertices(),
        search_space,
    })
}

fn count_masked(instance: &Instance, lists: &ListAssignment, mask: &[bool]) -> u128 {
    Plan::new(instance, lists, Some(mask)).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Backtracking; finds a colouring iff one exists.
    Exhaustive,
    /// Random vertex order and random list colours, restarting on conflict.
    RandomGreedy { restarts: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub colouring: Colouring,
    /// Restarts used (1 for exhaustive search).
    pub attempts: u64,
}

pub fn find_good(instance: &Instance, lists: &ListAssignment, strategy: Strategy) -> Result<SearchOutcome, ColouringError> {
    check_lists(instance, lists)?;
    let n = instance.graph().num_vertices();
    match strategy {
        Strategy::Exhaustive => {
            let plan = Plan::new(instance, lists, None);
            let mut colours = vec![0i64; n];
            if plan.find_from(0, &mut colours) {
                Ok(SearchOutcome {
                    colouring: Colouring::new(colours),
                    attempts: 1,
                })
            } else {
                Err(ColouringError::NoneFound {
                    certified: true,
                    attempts: 1,
                })
            }
        }
        Strategy::RandomGreedy { restarts, seed } => {
            let graph = instance.graph();
            for attempt in 0..restarts {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(attempt);
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                let mut remaining: Vec<usize> = graph.edges().iter().map(Vec::len).collect();
                let mut colours = vec![0i64; n];
                let mut conflict = false;
                'vertices: for &v in &order {
                    let list = lists.list(v);
                    colours[v] = list[rng.gen_range(0..list.len())];
                    for &e in graph.incident(v) {
                        remaining[e] -= 1;
                        if remaining[e] == 0 && instance.edge_is_bad(e, &colours) {
                            conflict = true;
                            break 'vertices;
                        }
                    }
                }
                if !conflict {
                    return Ok(SearchOutcome {
                        colouring: Colouring::new(colours),
                        attempts: attempt + 1,
                    });
                }
            }
            Err(ColouringError::NoneFound {
                certified: false,
                attempts: restarts,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountBoundReport {
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub count: BigUint,
    pub vertices: usize,
    pub beta: f64,
    /// `beta^|V|` as `p/q` when beta is rational.
    pub bound_exact: Option<String>,
    pub log_bound: f64,
    pub log_count: f64,
    pub satisfied: bool,
}

/// Compares the exact count against `beta^|V|`.
pub fn verify_count_bound(
    instance: &Instance,
    lists: &ListAssignment,
    beta: &Beta,
    budget: u128,
) -> Result<CountBoundReport, ColouringError> {
    let result = count_good(instance, lists, budget)?;
    let n = result.vertices;
    Ok(CountBoundReport {
        satisfied: beta.power_at_most(&result.count, n),
        bound_exact: beta.exact_power(n).map(|r| {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }),
        log_bound: n as f64 * beta.value().ln(),
        log_count: biguint_ln(&result.count),
        beta: beta.value(),
        vertices: n,
        count: result.count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaVerdict {
    /// Key condition holds and every inequality was observed.
    KeyHoldsVerified,
    /// Key condition holds yet an inequality failed.
    KeyHoldsViolated,
    /// Key condition fails; the inequalities happened to hold.
    KeyFailsObservedHolds,
    /// Key condition fails and some inequality failed, as it may.
    KeyFailsObservedViolation,
    /// Lists are not all the same size, so the key condition was not checked.
    NoKeyCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaViolation {
    pub subset: Vec<String>,
    pub vertex: String,
    pub with_vertex: String,
    pub without_vertex: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub beta: f64,
    pub subsets: u64,
    pub pairs_checked: u64,
    /// Smallest `P(H) / P(H - v)` over pairs with `P(H - v) > 0`.
    pub min_ratio: Option<f64>,
    pub violations: u64,
    /// The first few violations.
    pub examples: Vec<LemmaViolation>,
    pub key_satisfied: Option<bool>,
    pub verdict: LemmaVerdict,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `P(H) >= beta * P(H - v)` for every induced sub-hypergraph `H` and
/// every vertex `v` of `H`.
pub fn verify_extension_lemma(
    instance: &Instance,
    lists: &ListAssignment,
    beta: &Beta,
    budget: u128,
) -> Result<LemmaReport, ColouringError> {
    check_lists(instance, lists)?;
    let graph = instance.graph();
    let n = graph.num_vertices();
    if n > MAX_LEMMA_VERTICES {
        return Err(ColouringError::TooManyVertices(n));
    }
    check_budget(lists, None, budget)?;
    let masks: u64 = 1 << n;
    let to_mask = |bits: u64| -> Vec<bool> { (0..n).map(|h| bits >> h & 1 == 1).collect() };
    let counts: Vec<BigUint> = (0..masks)
        .into_par_iter()
        .map(|bits| BigUint::from(count_masked(instance, lists, &to_mask(bits))))
        .collect();

    let mut pairs = 0u64;
    let mut violations = 0u64;
    let mut examples = Vec::new();
    let mut min_ratio: Option<f64> = None;
    for bits in 1..masks {
        let with = &counts[bits as usize];
        for v in (0..n).filter(|&v| bits >> v & 1 == 1) {
            pairs += 1;
            let without = &counts[(bits & !(1 << v)) as usize];
            if !without.is_zero() {
                let ratio = with.to_f64().unwrap() / without.to_f64().unwrap();
                min_ratio = Some(min_ratio.map_or(ratio, |m| m.min(ratio)));
            }
            if !beta.scaled_at_most(with, without) {
                violations += 1;
                if examples.len() < 10 {
                    examples.push(LemmaViolation {
                        subset: (0..n)
                            .filter(|&h| bits >> h & 1 == 1)
                            .map(|h| graph.name(h).to_string())
                            .collect(),
                        vertex: graph.name(v).to_string(),
                        with_vertex: with.to_string(),
                        without_vertex: without.to_string(),
                    });
                }
            }
        }
    }
    let key_satisfied = lists.uniform_size().map(|c| {
        check_key(&instance.weight_profile(), beta.value(), c as u64)
            .map(|r| r.guarantee)
            .unwrap_or(false)
    });
    let verdict = match (key_satisfied, violations == 0) {
        (None, _) => LemmaVerdict::NoKeyCheck,
        (Some(true), true) => LemmaVerdict::KeyHoldsVerified,
        (Some(true), false) => LemmaVerdict::KeyHoldsViolated,
        (Some(false), true) => LemmaVerdict::KeyFailsObservedHolds,
        (Some(false), false) => LemmaVerdict::KeyFailsObservedViolation,
    };
    Ok(LemmaReport {
        beta: beta.value(),
        subsets: masks,
        pairs_checked: pairs,
        min_ratio,
        violations,
        examples,
        key_satisfied,
        verdict,
    })
}
