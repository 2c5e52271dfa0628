//! The key condition `c >= beta + sum_k beta^-k E_k(v)`, its minimisation over
//! `beta`, and the closed-form colour bounds of the individual applications.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{binomial, binomial_signed, e_times_lt, guarded_ceil, pow, ratio_to_f64, Beta};
use crate::hypergraph::{Hypergraph, ListAssignment};
use crate::instance::{ProfileMode, WeightProfile};

/// Slack tolerance for declaring the key condition satisfied. Several closed
/// forms meet the condition with equality, which floating evaluation can miss
/// by a few ulps.
pub const KEY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("beta must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error("colour count c must be at least 1")]
    ZeroColours,
    #[error("vertex `{0}` is not in the profile")]
    UnknownVertex(String),
    #[error("{app}: parameter out of range ({hypothesis})")]
    ParameterOutOfRange { app: &'static str, hypothesis: String },
    #[error("expected a 2-uniform hypergraph")]
    NotAGraph,
}

fn out_of_range(app: &'static str, hypothesis: impl Into<String>) -> BoundError {
    BoundError::ParameterOutOfRange {
        app,
        hypothesis: hypothesis.into(),
    }
}

fn objective(counts: &BTreeMap<usize, u64>, beta: f64) -> f64 {
    beta + counts
        .iter()
        .map(|(&k, &n)| n as f64 * beta.powi(-(k as i32)))
        .sum::<f64>()
}

fn objective_derivative(counts: &BTreeMap<usize, u64>, beta: f64) -> f64 {
    1.0 - counts
        .iter()
        .filter(|(&k, _)| k > 0)
        .map(|(&k, &n)| k as f64 * n as f64 * beta.powi(-(k as i32) - 1))
        .sum::<f64>()
}

/// `Q_v(beta) = beta + sum_k beta^-k E_k(v)`.
pub fn laurent_objective(profile: &WeightProfile, vertex: &str, beta: f64) -> Result<f64, BoundError> {
    // Also rejects NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(beta > 0.0) {
        return Err(BoundError::NonPositiveBeta(beta));
    }
    if beta < 1.0 {
        log::warn!("beta = {beta} < 1: the key condition gives no guarantee");
    }
    let entry = profile
        .vertex(vertex)
        .ok_or_else(|| BoundError::UnknownVertex(vertex.to_string()))?;
    Ok(objective(&entry.counts, beta))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyReport {
    pub beta: f64,
    pub c: u64,
    /// `c - Q_v(beta)` per vertex.
    pub slack: BTreeMap<String, f64>,
    pub min_slack: f64,
    pub binding_vertex: Option<String>,
    pub satisfied: bool,
    /// Satisfied with `beta >= 1`, so the count guarantee applies.
    pub guarantee: bool,
    pub log_beta: f64,
    /// `|V| ln beta`; absent for parametric profiles, which have no vertex set.
    pub count_log_lower_bound: Option<f64>,
    pub mode: ProfileMode,
}

pub fn check_key(profile: &WeightProfile, beta: f64, c: u64) -> Result<KeyReport, BoundError> {
    // Also rejects NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(beta > 0.0) {
        return Err(BoundError::NonPositiveBeta(beta));
    }
    if c == 0 {
        return Err(BoundError::ZeroColours);
    }
    let mut slack = BTreeMap::new();
    let mut min_slack = f64::INFINITY;
    let mut binding = None;
    for entry in &profile.entries {
        let s = c as f64 - objective(&entry.counts, beta);
        if s < min_slack {
            min_slack = s;
            binding = Some(entry.vertex.clone());
        }
        slack.insert(entry.vertex.clone(), s);
    }
    if profile.entries.is_empty() {
        min_slack = c as f64 - beta;
    }
    let satisfied = min_slack >= -KEY_TOLERANCE * (c as f64).max(1.0);
    Ok(KeyReport {
        beta,
        c,
        slack,
        min_slack,
        binding_vertex: binding,
        satisfied,
        guarantee: satisfied && beta >= 1.0,
        log_beta: beta.ln(),
        count_log_lower_bound: (profile.mode == ProfileMode::Exact)
            .then(|| profile.entries.len() as f64 * beta.ln()),
        mode: profile.mode,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaOptimum {
    pub beta: f64,
    pub c: u64,
    pub objective: f64,
    pub binding_vertex: Option<String>,
}

/// `(max_v Q_v(beta), argmax)`.
fn max_objective(profile: &WeightProfile, beta: f64) -> (f64, Option<usize>) {
    let mut best = (beta, None);
    for (i, e) in profile.entries.iter().enumerate() {
        let q = objective(&e.counts, beta);
        if best.1.is_none() || q > best.0 {
            best = (q, Some(i));
        }
    }
    best
}

/// Subgradient of `max_v Q_v` at `beta` taken from the maximising vertex.
fn max_subgradient(profile: &WeightProfile, beta: f64) -> f64 {
    match max_objective(profile, beta).1 {
        Some(i) => objective_derivative(&profile.entries[i].counts, beta),
        None => 1.0,
    }
}

/// Minimises `max_v Q_v(beta)` over `beta >= 1`.
///
/// Each `Q_v` is convex on `beta > 0`, so the maximum is convex and the sign
/// of a subgradient says which side of `beta` the minimum lies on. The search
/// brackets the minimum by doubling and then bisects on that sign.
pub fn optimize_beta(profile: &WeightProfile) -> BetaOptimum {
    let beta = if max_subgradient(profile, 1.0) >= 0.0 {
        1.0
    } else {
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        while max_subgradient(profile, hi) < 0.0 && hi < 1e300 {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..200 {
            if hi - lo <= 1e-13 * hi.max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if max_subgradient(profile, mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let (q, arg) = max_objective(profile, beta);
    BetaOptimum {
        beta,
        c: ((q - 1e-9).ceil() as u64).max(1),
        objective: q,
        binding_vertex: arg.map(|i| profile.entries[i].vertex.clone()),
    }
}

/// Application parameters with a closed-form `(beta, c)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Application {
    ProperHypergraph { r: u64, delta: u64 },
    ProperGraph { delta: u64, beta: Beta },
    Star { delta: u64 },
    Nonrepetitive { delta: u64 },
    Frugal { delta: u64, k: u64 },
    Transversal { r: u64, t: u64 },
    /// `d_k` defaults to the largest value the hypothesis allows.
    Ramsey { k: u64, c: u64, d_k: Option<u64> },
    KSat { k: u64 },
}

impl Application {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ProperHypergraph { .. } => "proper-hypergraph",
            Self::ProperGraph { .. } => "proper-graph",
            Self::Star { .. } => "star",
            Self::Nonrepetitive { .. } => "nonrepetitive",
            Self::Frugal { .. } => "frugal",
            Self::Transversal { .. } => "transversal",
            Self::Ramsey { .. } => "ramsey",
            Self::KSat { .. } => "ksat",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedForm {
    pub app: &'static str,
    pub beta: f64,
    pub c: u64,
    pub extras: BTreeMap<&'static str, f64>,
    pub notes: Vec<String>,
}

/// `ceil((r-1)/(r-2) * ((r-2) delta)^(1/(r-1)))` for `r >= 3`.
pub fn proper_hypergraph_c(r: u64, delta: u64) -> u64 {
    let estimate = (r - 1) as f64 / (r - 2) as f64 * ((r - 2) as f64 * delta as f64).powf(1.0 / (r - 1) as f64);
    // x <= n  <=>  (r-1)^(r-1) delta <= n^(r-1) (r-2)^(r-2)
    let lhs = pow(r - 1, r - 1) * BigUint::from(delta);
    guarded_ceil(estimate, |n| lhs <= pow(n, r - 1) * pow(r - 2, r - 2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LllBound {
    pub c: u64,
    /// Set for `r = 2`, where the comparison theorem needs `r >= 3`.
    pub degenerate_r2: bool,
}

/// `ceil((e (r (delta - 1) + 1))^(1/(r-1)))`.
pub fn lll_bound(r: u64, delta: u64) -> Result<LllBound, BoundError> {
    if r < 2 {
        return Err(out_of_range("lll", "r >= 2"));
    }
    if delta < 1 {
        return Err(out_of_range("lll", "delta >= 1"));
    }
    let m = r * (delta - 1) + 1;
    let estimate = (std::f64::consts::E * m as f64).powf(1.0 / (r - 1) as f64);
    let m = BigUint::from(m);
    // x <= n  <=>  e m <= n^(r-1), and e m is never an integer.
    let c = guarded_ceil(estimate, |n| e_times_lt(&m, &pow(n, r - 1)));
    Ok(LllBound {
        c,
        degenerate_r2: r == 2,
    })
}

fn nonrepetitive_c(delta: u64) -> u64 {
    let d = delta as f64;
    let eps = (2.0 / d).cbrt();
    let beta = (1.0 + eps) * (d - 1.0).powi(2);
    let estimate = beta + 2f64.powf(-2.0 / 3.0) * d.powf(5.0 / 3.0) * (1.0 + eps).powi(2);
    // With y = (delta/2)^(1/3) the bound is (1 + 1/y)(delta-1)^2 + delta (y+1)^2.
    let dm1sq = BigRational::from_integer(BigInt::from((delta - 1) * (delta - 1)));
    let dr = BigRational::from_integer(BigInt::from(delta));
    let value = |y: &BigRational| -> BigRational {
        let one = BigRational::one();
        (&one + y.recip()) * &dm1sq + &dr * (y + &one) * (y + &one)
    };
    let target = BigRational::new(BigInt::from(delta), BigInt::from(2));
    let exact_root = (1..=delta).find(|a| 2 * a * a * a >= delta).filter(|a| 2 * a * a * a == delta);
    guarded_ceil(estimate, |n| {
        let n = BigRational::from_integer(BigInt::from(n));
        if let Some(a) = exact_root {
            return value(&BigRational::from_integer(BigInt::from(a))) <= n;
        }
        let (mut lo, mut hi) = (BigRational::one(), dr.clone());
        for _ in 0..400 {
            let (upper, lower) = (
                (BigRational::one() + lo.recip()) * &dm1sq + &dr * (&hi + BigRational::one()).pow(2),
                (BigRational::one() + hi.recip()) * &dm1sq + &dr * (&lo + BigRational::one()).pow(2),
            );
            if upper <= n {
                return true;
            }
            if lower > n {
                return false;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            if mid.pow(3) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        estimate <= ratio_to_f64(&n)
    })
}

/// `floor((m-1)^(m-1) c^m / m^m)`, the largest admissible `D_k`.
pub fn ramsey_dk_threshold(k: u64, c: u64) -> BigUint {
    let m = k * (k - 1) / 2 - 1;
    pow(m - 1, m - 1) * pow(c, m) / pow(m, m)
}

/// `D_k <= (m-1)^(m-1) c^m / m^m`, exactly.
pub fn ramsey_dk_admissible(k: u64, c: u64, d: &BigUint) -> bool {
    let m = k * (k - 1) / 2 - 1;
    d * pow(m, m) <= pow(m - 1, m - 1) * pow(c, m)
}

/// `(2^k / k) ((k-1)/k)^(k-1)` as an exact rational.
pub fn ksat_threshold(k: u64) -> BigRational {
    BigRational::new(
        BigInt::from(pow(2, k) * pow(k - 1, k - 1)),
        BigInt::from(pow(k, k)),
    )
}

pub fn closed_form_bound(app: &Application) -> Result<ClosedForm, BoundError> {
    let mut extras = BTreeMap::new();
    let mut notes = Vec::new();
    let name = app.name();
    let (beta, c) = match app {
        &Application::ProperHypergraph { r, delta } => {
            if r < 3 {
                return Err(out_of_range(name, "r >= 3"));
            }
            if delta < 1 {
                return Err(out_of_range(name, "delta >= 1"));
            }
            let beta = ((r - 2) as f64 * delta as f64).powf(1.0 / (r - 1) as f64);
            (beta, proper_hypergraph_c(r, delta))
        }
        Application::ProperGraph { delta, beta } => {
            if beta.value() < 1.0 {
                return Err(out_of_range(name, "beta >= 1"));
            }
            let c = match beta.exact() {
                Some(b) => {
                    let x = b + BigRational::from_integer(BigInt::from(*delta));
                    x.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
                }
                None => (*delta as f64 + beta.value()).ceil() as u64,
            };
            (beta.value(), c)
        }
        &Application::Star { delta } => {
            if delta < 2 {
                return Err(out_of_range(name, "delta >= 2 so that beta = sqrt(2 delta)(delta-1) >= 1"));
            }
            let beta = (2.0 * delta as f64).sqrt() * (delta - 1) as f64;
            let estimate = delta as f64 + (8.0 * delta as f64).sqrt() * (delta - 1) as f64;
            let c = guarded_ceil(estimate, |n| {
                n >= delta && {
                    let s = BigUint::from(n - delta);
                    BigUint::from(8 * delta) * pow(delta - 1, 2) <= &s * &s
                }
            });
            (beta, c)
        }
        &Application::Nonrepetitive { delta } => {
            if delta < 2 {
                return Err(out_of_range(name, "delta >= 2"));
            }
            if delta <= 2 {
                notes.push("delta <= 2: (delta-1)^2 <= 1, outside the intended regime".to_string());
            }
            let d = delta as f64;
            let eps = (2.0 / d).cbrt();
            extras.insert("epsilon", eps);
            ((1.0 + eps) * (d - 1.0).powi(2), nonrepetitive_c(delta))
        }
        &Application::Frugal { delta, k } => {
            if k < 2 || delta <= k {
                return Err(out_of_range(name, "delta > k >= 2"));
            }
            let choose = binomial(delta - 1, k);
            let base = BigUint::from((k - 1) * delta) * &choose;
            let beta = base.to_f64().unwrap().powf(1.0 / k as f64);
            // k beta / (k-1) <= n  <=>  k^k delta C(delta-1, k) <= n^k (k-1)^(k-1)
            let lhs = pow(k, k) * BigUint::from(delta) * &choose;
            let ceil_part = guarded_ceil(k as f64 * beta / (k - 1) as f64, |n| lhs <= pow(n, k) * pow(k - 1, k - 1));
            let d = delta as f64;
            extras.insert("asymptotic_leading_c", std::f64::consts::E * d.powf(1.0 + 1.0 / k as f64) / k as f64);
            notes.push("asymptotic form: ceil((e + o(1)) delta^(1+1/k) / k) colours as delta > k -> infinity".into());
            (beta, delta + ceil_part)
        }
        &Application::Transversal { r, t } => {
            if r < 2 || t < 1 {
                return Err(out_of_range(name, "r >= 2 and t >= 1"));
            }
            let rf = r as f64;
            let coeff = (rf - 1.0).powi(r as i32 - 1) * (t as f64).powi(r as i32 - 1) / rf.powi(r as i32);
            extras.insert("per_part_edge_coefficient", coeff);
            extras.insert("max_part_degree", coeff * t as f64);
            ((r - 1) as f64 * t as f64 / rf, t)
        }
        &Application::Ramsey { k, c, d_k } => {
            if k < 3 || c < 2 {
                return Err(out_of_range(name, "k >= 3 and c >= 2"));
            }
            let m = k * (k - 1) / 2 - 1;
            let threshold = ramsey_dk_threshold(k, c);
            let d = match d_k {
                Some(d) => {
                    if !ramsey_dk_admissible(k, c, &BigUint::from(d)) {
                        return Err(out_of_range(name, "D_k <= (m-1)^(m-1) c^m / m^m"));
                    }
                    d
                }
                None => threshold.to_u64().unwrap_or(u64::MAX),
            };
            let mf = m as f64;
            extras.insert("m", mf);
            extras.insert("d_k", d as f64);
            extras.insert(
                "d_k_threshold",
                (mf - 1.0).powf(mf - 1.0) * (c as f64).powf(mf) / mf.powf(mf),
            );
            if d == 0 {
                notes.push("D_k = 0: no k-cliques, every colouring is good".into());
            }
            ((d as f64 * (mf - 1.0)).powf(1.0 / mf), c)
        }
        &Application::KSat { k } => {
            if k < 2 {
                return Err(out_of_range(name, "k >= 2"));
            }
            extras.insert("max_occurrences", ratio_to_f64(&ksat_threshold(k)));
            (2.0 - 2.0 / k as f64, 2)
        }
    };
    Ok(ClosedForm {
        app: name,
        beta,
        c,
        extras,
        notes,
    })
}

/// Upper bounds on `E_k` behind each closed form. The nonrepetitive series is
/// infinite and is truncated to the terms that fit in `u64`.
pub fn parametric_profile(app: &Application) -> Result<WeightProfile, BoundError> {
    closed_form_bound(app)?;
    let counts: BTreeMap<usize, u64> = match *app {
        Application::ProperHypergraph { r, delta } => [((r - 2) as usize, delta)].into(),
        Application::ProperGraph { delta, .. } => [(0, delta)].into(),
        Application::Star { delta } => [(0, delta), (1, 2 * delta * (delta - 1) * (delta - 1))].into(),
        Application::Nonrepetitive { delta } => {
            let mut counts = BTreeMap::new();
            for t in 1u32..=64 {
                let count = (delta - 1)
                    .checked_pow(2 * t - 2)
                    .and_then(|p| p.checked_mul(delta))
                    .and_then(|p| p.checked_mul(t as u64));
                match count {
                    Some(n) => counts.insert(t as usize - 1, n),
                    None => break,
                };
            }
            counts
        }
        Application::Frugal { delta, k } => {
            let n = (BigUint::from(delta) * binomial(delta - 1, k)).to_u64().unwrap_or(u64::MAX);
            [(0, delta), ((k - 1) as usize, n)].into()
        }
        Application::Transversal { r, t } => {
            let n = pow(r - 1, r - 1) * pow(t, r) / pow(r, r);
            [((r - 1) as usize, n.to_u64().unwrap_or(u64::MAX))].into()
        }
        Application::Ramsey { k, c, d_k } => {
            let m = k * (k - 1) / 2 - 1;
            let d = d_k.unwrap_or_else(|| ramsey_dk_threshold(k, c).to_u64().unwrap_or(u64::MAX));
            [((m - 1) as usize, d)].into()
        }
        Application::KSat { k } => {
            let delta = ksat_threshold(k).floor().to_integer().to_u64().unwrap_or(u64::MAX);
            [((k - 1) as usize, delta)].into()
        }
    };
    Ok(WeightProfile::parametric(app.name(), counts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    Ours,
    Theirs,
    Tie,
}

impl Winner {
    fn smaller_is_better(ours: u64, theirs: u64) -> Self {
        match ours.cmp(&theirs) {
            std::cmp::Ordering::Less => Self::Ours,
            std::cmp::Ordering::Greater => Self::Theirs,
            std::cmp::Ordering::Equal => Self::Tie,
        }
    }

    fn larger_is_better(ours: u64, theirs: u64) -> Self {
        Self::smaller_is_better(theirs, ours)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMode {
    /// Colours needed for proper colouring: key condition vs local lemma.
    Proper { r: u64, delta: u64 },
    /// Largest `n` certified for `[n, k, r]`-hypergraphs.
    Egl { r: u64, k: u64 },
    /// Largest `n` with `R_c(k) > n`.
    Ramsey { k: u64, c: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ComparisonRow {
    Proper {
        r: u64,
        delta: u64,
        thm2_c: u64,
        lll_c: u64,
        winner: Winner,
    },
    Egl {
        r: u64,
        k: u64,
        ours_max_n: u64,
        egl_max_n: u64,
        /// Exact ratio of the two edge-count sides at `ours_max_n`.
        ratio: f64,
        /// `((r-1)/r)^(r-1) (1 - r^2 / (2n))` at `ours_max_n`.
        ratio_lower_bound: f64,
        lower_bound_valid: bool,
        exceeds_inv_e: bool,
        winner: Winner,
    },
    Ramsey {
        k: u64,
        c: u64,
        ours_max_n: u64,
        spencer_max_n: Option<u64>,
        winner: Option<Winner>,
    },
}

/// Largest `n >= start - 1` with `holds(start), ..., holds(n)`, for a
/// predicate that is monotone decreasing in `n`.
fn max_monotone(start: u64, holds: impl Fn(u64) -> bool) -> u64 {
    if !holds(start) {
        return start - 1;
    }
    let (mut lo, mut hi) = (start, start + 1);
    while holds(hi) {
        lo = hi;
        hi = hi.saturating_mul(2);
        if hi == u64::MAX {
            return lo;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest `n` with `C(n-1, r-1) <= (r-1)^(r-1) k^r / r^r`.
pub fn egl_ours_max_n(r: u64, k: u64) -> u64 {
    let rhs = pow(r - 1, r - 1) * pow(k, r);
    let rr = pow(r, r);
    max_monotone(r, |n| binomial(n - 1, r - 1) * &rr <= rhs)
}

/// Largest `n` with `e (C(n, r) - C(n-r, r)) < k^r`.
pub fn egl_lll_max_n(r: u64, k: u64) -> u64 {
    let rhs = pow(k, r);
    max_monotone(r, |n| {
        let a = binomial(n, r) - binomial_signed(n as i64 - r as i64, r);
        e_times_lt(&a, &rhs)
    })
}

/// Largest `n` with `m^m C(n-2, k-2) <= c^m (m-1)^(m-1)`, `m = C(k,2) - 1`.
pub fn ramsey_max_n(k: u64, c: u64) -> Result<u64, BoundError> {
    if k < 3 || c < 2 {
        return Err(out_of_range("ramsey", "k >= 3 and c >= 2"));
    }
    let m = k * (k - 1) / 2 - 1;
    let lhs_coeff = pow(m, m);
    let rhs = pow(c, m) * pow(m - 1, m - 1);
    Ok(max_monotone(k, |n| binomial(n - 2, k - 2) * &lhs_coeff <= rhs))
}

/// Largest `n` with `e C(k,2) (C(n-2, k-2) + 1) < 2^(C(k,2) - 1)`.
pub fn spencer_max_n(k: u64) -> Result<u64, BoundError> {
    if k < 3 {
        return Err(out_of_range("ramsey", "k >= 3"));
    }
    let kk = k * (k - 1) / 2;
    let rhs = pow(2, kk - 1);
    Ok(max_monotone(k, |n| {
        let a = BigUint::from(kk) * (binomial(n - 2, k - 2) + BigUint::one());
        e_times_lt(&a, &rhs)
    }))
}

pub fn compare_bounds(mode: CompareMode) -> Result<ComparisonRow, BoundError> {
    match mode {
        CompareMode::Proper { r, delta } => {
            let ours = closed_form_bound(&Application::ProperHypergraph { r, delta })?.c;
            let theirs = lll_bound(r, delta)?.c;
            Ok(ComparisonRow::Proper {
                r,
                delta,
                thm2_c: ours,
                lll_c: theirs,
                winner: Winner::smaller_is_better(ours, theirs),
            })
        }
        CompareMode::Egl { r, k } => {
            if r < 2 || k < 1 {
                return Err(out_of_range("egl", "r >= 2 and k >= 1"));
            }
            let ours = egl_ours_max_n(r, k);
            let theirs = egl_lll_max_n(r, k);
            let n = ours.max(r);
            let num = pow(r - 1, r - 1) * (binomial(n, r) - binomial_signed(n as i64 - r as i64, r));
            let den = pow(r, r) * binomial(n - 1, r - 1);
            let ratio = ratio_to_f64(&BigRational::new(BigInt::from(num), BigInt::from(den)));
            let rf = r as f64;
            let lower = ((rf - 1.0) / rf).powf(rf - 1.0) * (1.0 - rf * rf / (2.0 * n as f64));
            Ok(ComparisonRow::Egl {
                r,
                k,
                ours_max_n: ours,
                egl_max_n: theirs,
                ratio,
                ratio_lower_bound: lower,
                lower_bound_valid: 4 * n >= r * r,
                exceeds_inv_e: lower > (-1f64).exp(),
                winner: Winner::larger_is_better(ours, theirs),
            })
        }
        CompareMode::Ramsey { k, c } => {
            let ours = ramsey_max_n(k, c)?;
            let spencer = if c == 2 { Some(spencer_max_n(k)?) } else { None };
            Ok(ComparisonRow::Ramsey {
                k,
                c,
                ours_max_n: ours,
                spencer_max_n: spencer,
                winner: spencer.map(|s| Winner::larger_is_better(ours, s)),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexBetaEntry {
    pub vertex: String,
    pub list_size: usize,
    /// `4 sum_w |L(v) & L(w)| / |L(w)|`.
    pub requirement: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexBetaReport {
    pub holds: bool,
    pub vertices: Vec<VertexBetaEntry>,
    /// `prod_v |L(v)| / 2` as `p/q`.
    pub count_bound: String,
    pub log_count_bound: f64,
    /// The product is below 1, so no colouring is claimed.
    pub bound_below_one: bool,
}

pub fn check_vertex_beta(graph: &Hypergraph, lists: &ListAssignment) -> Result<VertexBetaReport, BoundError> {
    if !graph.is_graph() {
        return Err(BoundError::NotAGraph);
    }
    let nbrs = graph.neighbourhoods();
    let mut vertices = Vec::with_capacity(graph.num_vertices());
    let mut product = BigRational::one();
    let mut log_bound = 0.0;
    for (v, nv) in nbrs.iter().enumerate() {
        let lv = lists.list(v);
        let mut rhs = BigRational::zero();
        for &w in nv {
            let lw = lists.list(w);
            let shared = lv.iter().filter(|c| lw.binary_search(c).is_ok()).count();
            rhs += BigRational::new(BigInt::from(4 * shared), BigInt::from(lw.len()));
        }
        let size = BigRational::from_integer(BigInt::from(lv.len()));
        vertices.push(VertexBetaEntry {
            vertex: graph.name(v).to_string(),
            list_size: lv.len(),
            requirement: ratio_to_f64(&rhs),
            holds: size >= rhs,
        });
        product *= BigRational::new(BigInt::from(lv.len()), BigInt::from(2));
        log_bound += (lv.len() as f64 / 2.0).ln();
    }
    let below_one = product < BigRational::one();
    Ok(VertexBetaReport {
        holds: vertices.iter().all(|e| e.holds),
        vertices,
        count_bound: if product.is_integer() {
            product.numer().to_string()
        } else {
            format!("{}/{}", product.numer(), product.denom())
        },
        log_count_bound: log_bound,
        bound_below_one: below_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(counts: &[(usize, u64)]) -> WeightProfile {
        WeightProfile::parametric("v", counts.iter().copied().collect())
    }

    #[test]
    fn laurent_examples() {
        assert_eq!(laurent_objective(&profile(&[(0, 3)]), "v", 1.0).unwrap(), 4.0);
        assert_eq!(laurent_objective(&profile(&[(1, 4)]), "v", 2.0).unwrap(), 4.0);
        assert_eq!(laurent_objective(&profile(&[]), "v", 5.0).unwrap(), 5.0);
        assert_eq!(
            laurent_objective(&profile(&[]), "v", 0.0),
            Err(BoundError::NonPositiveBeta(0.0))
        );
        assert!(laurent_objective(&profile(&[]), "w", 1.0).is_err());
        // beta < 1 warns but evaluates.
        assert_eq!(laurent_objective(&profile(&[(1, 1)]), "v", 0.5).unwrap(), 2.5);
    }

    #[test]
    fn optimizer_examples() {
        let lin = optimize_beta(&profile(&[(0, 3)]));
        assert_eq!((lin.beta, lin.c), (1.0, 4));
        let one = optimize_beta(&profile(&[(1, 4)]));
        assert!((one.beta - 2.0).abs() < 1e-9);
        assert_eq!(one.c, 4);
        let mixed = optimize_beta(&profile(&[(0, 2), (1, 4)]));
        assert!((mixed.beta - 2.0).abs() < 1e-9);
        assert_eq!(mixed.c, 6);
        let empty = optimize_beta(&WeightProfile::exact(vec![]));
        assert_eq!((empty.beta, empty.c), (1.0, 1));
    }

    #[test]
    fn closed_form_examples() {
        let p = closed_form_bound(&Application::ProperHypergraph { r: 3, delta: 4 }).unwrap();
        assert_eq!((p.beta, p.c), (2.0, 4));
        let s = closed_form_bound(&Application::Star { delta: 2 }).unwrap();
        assert!((s.beta - 2.0).abs() < 1e-12);
        assert_eq!(s.c, 6);
        let f = closed_form_bound(&Application::Frugal { delta: 3, k: 2 }).unwrap();
        assert!((f.beta - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(f.c, 7);
        let sat = closed_form_bound(&Application::KSat { k: 3 }).unwrap();
        assert!((sat.beta - 4.0 / 3.0).abs() < 1e-15);
        assert!((sat.extras["max_occurrences"] - 32.0 / 27.0).abs() < 1e-15);
        let nr = closed_form_bound(&Application::Nonrepetitive { delta: 2 }).unwrap();
        assert!((nr.beta - 2.0).abs() < 1e-12);
        assert_eq!(nr.c, 10);
        assert_eq!(nr.notes.len(), 1);
        let tr = closed_form_bound(&Application::Transversal { r: 2, t: 4 }).unwrap();
        assert_eq!((tr.beta, tr.c), (2.0, 4));
        let g = closed_form_bound(&Application::ProperGraph {
            delta: 3,
            beta: Beta::ratio(3, 2),
        })
        .unwrap();
        assert_eq!(g.c, 5);
    }

    #[test]
    fn closed_form_ranges() {
        for app in [
            Application::ProperHypergraph { r: 2, delta: 4 },
            Application::ProperHypergraph { r: 3, delta: 0 },
            Application::Star { delta: 1 },
            Application::Frugal { delta: 2, k: 2 },
            Application::Frugal { delta: 5, k: 1 },
            Application::Ramsey { k: 2, c: 2, d_k: None },
            Application::Ramsey { k: 3, c: 2, d_k: Some(2) },
            Application::KSat { k: 1 },
        ] {
            assert!(
                matches!(closed_form_bound(&app), Err(BoundError::ParameterOutOfRange { .. })),
                "{app:?}"
            );
        }
    }

    #[test]
    fn nonrepetitive_ceiling_matches_float_away_from_integers() {
        for delta in 3..200u64 {
            let d = delta as f64;
            let eps = (2.0 / d).cbrt();
            let x = (1.0 + eps) * (d - 1.0).powi(2) + 2f64.powf(-2.0 / 3.0) * d.powf(5.0 / 3.0) * (1.0 + eps).powi(2);
            assert_eq!(nonrepetitive_c(delta), x.ceil() as u64, "delta = {delta}");
        }
        // delta = 2 a^3 gives a rational cube root: delta = 16, y = 2.
        let exact: f64 = 1.5 * 225.0 + 16.0 * 9.0;
        assert_eq!(nonrepetitive_c(16), exact.ceil() as u64);
    }

    #[test]
    fn lll_examples() {
        // sqrt(10 e) = 5.21
        assert_eq!(lll_bound(3, 4).unwrap().c, 6);
        assert_eq!(lll_bound(3, 1).unwrap().c, 2);
        let deg = lll_bound(2, 3).unwrap();
        assert_eq!(deg.c, 14);
        assert!(deg.degenerate_r2);
        assert!(lll_bound(1, 3).is_err());
    }

    #[test]
    fn comparison_examples() {
        let ComparisonRow::Proper { thm2_c, lll_c, winner, .. } =
            compare_bounds(CompareMode::Proper { r: 3, delta: 4 }).unwrap()
        else {
            panic!()
        };
        assert_eq!((thm2_c, lll_c, winner), (4, 6, Winner::Ours));

        let ComparisonRow::Egl { ours_max_n, egl_max_n, .. } = compare_bounds(CompareMode::Egl { r: 2, k: 10 }).unwrap()
        else {
            panic!()
        };
        assert_eq!((ours_max_n, egl_max_n), (26, 19));

        let ComparisonRow::Ramsey {
            ours_max_n,
            spencer_max_n,
            ..
        } = compare_bounds(CompareMode::Ramsey { k: 5, c: 2 }).unwrap()
        else {
            panic!()
        };
        assert_eq!((ours_max_n, spencer_max_n), (8, Some(7)));
    }

    #[test]
    fn ramsey_sweeps() {
        assert_eq!(ramsey_max_n(3, 2).unwrap(), 3);
        assert_eq!(ramsey_max_n(3, 3).unwrap(), 4);
        assert_eq!(ramsey_max_n(5, 2).unwrap(), 8);
        assert_eq!(spencer_max_n(5).unwrap(), 7);
        assert!(ramsey_max_n(2, 2).is_err());
    }

    #[test]
    fn key_examples() {
        let k3 = WeightProfile::exact(
            ["a", "b", "c"]
                .iter()
                .map(|v| crate::instance::VertexProfile {
                    vertex: v.to_string(),
                    counts: [(0, 2)].into(),
                })
                .collect(),
        );
        let r = check_key(&k3, 1.0, 3).unwrap();
        assert!(r.satisfied && r.guarantee);
        assert_eq!(r.min_slack, 0.0);
        let r = check_key(&k3, 2.0, 4).unwrap();
        assert!(r.satisfied);
        assert!((r.count_log_lower_bound.unwrap().exp() - 8.0).abs() < 1e-9);
        let r = check_key(&k3, 1.0, 2).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.min_slack, -1.0);
        assert_eq!(r.binding_vertex.as_deref(), Some("a"));
        assert_eq!(check_key(&k3, 1.0, 0), Err(BoundError::ZeroColours));
    }

    #[test]
    fn vertex_beta_examples() {
        let k2 = Hypergraph::new(["v", "w"], [["v", "w"]]).unwrap();
        let lists = ListAssignment::uniform(2, 8);
        let r = check_vertex_beta(&k2, &lists).unwrap();
        assert!(r.holds);
        assert_eq!(r.count_bound, "16");
        assert!(!r.bound_below_one);

        let single = Hypergraph::new(["v"], Vec::<Vec<&str>>::new()).unwrap();
        let r = check_vertex_beta(&single, &ListAssignment::uniform(1, 1)).unwrap();
        assert!(r.holds);
        assert_eq!(r.count_bound, "1/2");
        assert!(r.bound_below_one);

        let disjoint = ListAssignment::from_lists(&k2, vec![vec![1], vec![2]]).unwrap();
        let r = check_vertex_beta(&k2, &disjoint).unwrap();
        assert!(r.holds);
        assert_eq!(r.count_bound, "1/4");

        let tri = Hypergraph::new(["a", "b", "c"], [["a", "b", "c"]]).unwrap();
        assert_eq!(
            check_vertex_beta(&tri, &ListAssignment::uniform(3, 3)),
            Err(BoundError::NotAGraph)
        );
    }
}
