//! Satisfying assignments of a k-CNF formula as good `{0,1}`-colourings of
//! its variable hypergraph.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use crate::bounds::ksat_threshold;
use crate::exact::{ratio_to_f64, Beta};
use crate::hypergraph::{Hypergraph, ListAssignment};
use crate::instance::{BadFamily, Instance};

use super::AppError;

/// A CNF formula over variables `1..=num_vars`; literal `-i` negates `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    /// Repeated literals inside a clause collapse.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self, AppError> {
        let mut out = Vec::with_capacity(clauses.len());
        for (i, clause) in clauses.into_iter().enumerate() {
            let mut seen = BTreeSet::new();
            let mut lits = Vec::with_capacity(clause.len());
            for lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(AppError::InvalidFormula(format!(
                        "clause {} has literal {lit} outside 1..={num_vars}",
                        i + 1
                    )));
                }
                if seen.contains(&-lit) {
                    return Err(AppError::TautologicalClause(i + 1));
                }
                if seen.insert(lit) {
                    lits.push(lit);
                }
            }
            if lits.is_empty() {
                return Err(AppError::InvalidFormula(format!("clause {} is empty", i + 1)));
            }
            out.push(lits);
        }
        Ok(Self {
            num_vars,
            clauses: out,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }

    /// `assignment[i]` is the value of variable `i + 1`.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// Number of clauses containing each variable, counting repeated clauses.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.num_vars];
        for c in &self.clauses {
            for &l in c {
                occ[l.unsigned_abs() as usize - 1] += 1;
            }
        }
        occ
    }

    pub fn variable_name(i: usize) -> String {
        format!("x{i}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SatReport {
    pub k: usize,
    pub variables: usize,
    pub clauses: usize,
    pub max_occurrence: usize,
    /// `(2^k / k) ((k-1)/k)^(k-1)`.
    pub threshold: f64,
    pub applicable: bool,
    /// `2 - 2/k`.
    pub beta: f64,
    /// `beta^n`, exact.
    pub count_bound: String,
    pub count_bound_float: f64,
}

#[derive(Debug, Clone)]
pub struct SatInstance {
    pub instance: Instance,
    pub lists: ListAssignment,
    pub beta: Beta,
    pub report: SatReport,
}

/// Vertex `x<i>` per variable, one edge per clause forbidding its unique
/// falsifying assignment, lists `{0, 1}`.
pub fn ksat_instance(formula: &CnfFormula) -> Result<SatInstance, AppError> {
    let Some(first) = formula.clauses.first() else {
        return Err(AppError::InvalidFormula("no clauses".into()));
    };
    let k = first.len();
    if k < 2 {
        return Err(AppError::NotKUniform {
            clause: 1,
            expected: 2,
            got: k,
        });
    }
    if let Some((i, c)) = formula.clauses.iter().enumerate().find(|(_, c)| c.len() != k) {
        return Err(AppError::NotKUniform {
            clause: i + 1,
            expected: k,
            got: c.len(),
        });
    }
    let n = formula.num_vars;
    let names: Vec<String> = (1..=n).map(CnfFormula::variable_name).collect();
    let mut edges = Vec::with_capacity(formula.clauses.len());
    let mut families = Vec::with_capacity(formula.clauses.len());
    for clause in &formula.clauses {
        let mut pairs: Vec<(usize, i64)> = clause
            .iter()
            .map(|&l| (l.unsigned_abs() as usize - 1, if l > 0 { 0 } else { 1 }))
            .collect();
        pairs.sort_unstable();
        edges.push(pairs.iter().map(|p| p.0).collect());
        families.push(BadFamily::explicit(vec![pairs.iter().map(|p| p.1).collect()]));
    }
    let graph = Hypergraph::from_handles(names, edges)?;
    let lists = ListAssignment::from_lists(&graph, vec![vec![0, 1]; n])?;
    let instance = Instance::new(graph, families)?;

    let max_occurrence = formula.occurrences().into_iter().max().unwrap_or(0);
    let threshold = ksat_threshold(k as u64);
    let applicable = BigRational::from_integer(BigInt::from(max_occurrence)) <= threshold;
    let beta = Beta::ratio(2 * k as u64 - 2, k as u64);
    let bound = beta.exact_power(n).expect("rational");
    let count_bound = if bound.is_integer() {
        bound.numer().to_string()
    } else {
        format!("{}/{}", bound.numer(), bound.denom())
    };
    Ok(SatInstance {
        report: SatReport {
            k,
            variables: n,
            clauses: formula.clauses.len(),
            max_occurrence,
            threshold: ratio_to_f64(&threshold),
            applicable,
            beta: beta.value(),
            count_bound,
            count_bound_float: ratio_to_f64(&bound),
        },
        instance,
        lists,
        beta,
    })
}

/// Satisfying assignments by direct evaluation over all `2^n` assignments.
pub fn count_satisfying(formula: &CnfFormula) -> BigUint {
    let n = formula.num_vars;
    assert!(n < 64, "direct evaluation needs fewer than 64 variables");
    let mut count = 0u64;
    let mut assignment = vec![false; n];
    for bits in 0..1u64 << n {
        for (i, a) in assignment.iter_mut().enumerate() {
            *a = bits >> i & 1 == 1;
        }
        if formula.satisfied_by(&assignment) {
            count += 1;
        }
    }
    BigUint::from(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{count_good, DEFAULT_BUDGET};

    #[test]
    fn falsifiers() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        let si = ksat_instance(&f).unwrap();
        assert_eq!(si.instance.family(0), &BadFamily::explicit(vec![vec![0, 0, 0]]));
        let f = CnfFormula::new(3, vec![vec![-1, 2, -3]]).unwrap();
        let si = ksat_instance(&f).unwrap();
        assert_eq!(si.instance.family(0), &BadFamily::explicit(vec![vec![1, 0, 1]]));
        assert_eq!(si.instance.pair_weight(0, "x1").unwrap(), 2);
    }

    #[test]
    fn single_clause_count() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        let si = ksat_instance(&f).unwrap();
        assert!(si.report.applicable);
        assert_eq!(si.report.count_bound, "64/27");
        let count = count_good(&si.instance, &si.lists, DEFAULT_BUDGET).unwrap().count;
        assert_eq!(count, 7u32.into());
        assert_eq!(count_satisfying(&f), count);
        assert!(si.beta.power_at_most(&count, 3));
    }

    #[test]
    fn formula_errors() {
        assert_eq!(
            CnfFormula::new(2, vec![vec![1, -1]]).unwrap_err(),
            AppError::TautologicalClause(1)
        );
        assert!(CnfFormula::new(2, vec![vec![3]]).is_err());
        let f = CnfFormula::new(3, vec![vec![1, 2, 3], vec![1, 2]]).unwrap();
        assert!(matches!(ksat_instance(&f), Err(AppError::NotKUniform { clause: 2, .. })));
    }

    #[test]
    fn thresholds() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3], vec![1, -2, 3], vec![-1, 2, 3]]).unwrap();
        let si = ksat_instance(&f).unwrap();
        // 2^3 * 2^2 / 3^3 = 32/27
        assert!((si.report.threshold - 32.0 / 27.0).abs() < 1e-15);
        assert_eq!(si.report.max_occurrence, 3);
        assert!(!si.report.applicable);
    }
}
