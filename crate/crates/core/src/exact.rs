//! Exact arithmetic helpers: binomials, comparisons against `e`, guarded
//! ceilings and the [`Beta`] value type.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Relative margin used whenever a count is compared against an irrational
/// power in log space.
pub const LOG_MARGIN: f64 = 1e-12;

/// Ceilings closer than this (relative) to an integer are settled exactly.
pub const CEIL_GUARD: f64 = 1e-9;

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `C(n, k)` with the convention `C(n, k) = 0` for `n < 0`.
pub fn binomial_signed(n: i64, k: u64) -> BigUint {
    if n < 0 {
        BigUint::zero()
    } else {
        binomial(n as u64, k)
    }
}

pub fn pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Rational enclosure `lo < e < hi` from the first `terms + 1` series terms.
pub fn e_enclosure(terms: u32) -> (BigRational, BigRational) {
    let terms = terms.max(2);
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for i in 0..=terms {
        if i > 0 {
            fact *= BigInt::from(i);
        }
        sum += BigRational::new(BigInt::one(), fact.clone());
    }
    // Tail after term N is below 1 / (N! * N).
    let tail = BigRational::new(BigInt::one(), fact * BigInt::from(terms));
    let hi = &sum + tail;
    (sum, hi)
}

/// Decides `e * a < b` exactly.
pub fn e_times_lt(a: &BigUint, b: &BigUint) -> bool {
    if a.is_zero() {
        return !b.is_zero();
    }
    let a = BigRational::from_integer(BigInt::from(a.clone()));
    let b = BigRational::from_integer(BigInt::from(b.clone()));
    let mut terms = 24;
    loop {
        let (lo, hi) = e_enclosure(terms);
        if &hi * &a < b {
            return true;
        }
        if &lo * &a >= b {
            return false;
        }
        // e is irrational, so refinement always terminates.
        terms *= 2;
    }
}

/// Ceiling of a positive real `x` whose float estimate is `estimate`, where
/// `le(n)` decides `x <= n` exactly. The exact predicate only runs when the
/// estimate is within [`CEIL_GUARD`] of an integer.
pub fn guarded_ceil(estimate: f64, le: impl Fn(u64) -> bool) -> u64 {
    let est = estimate.max(0.0);
    let nearest = est.round();
    if (est - nearest).abs() > CEIL_GUARD * est.max(1.0) {
        return est.ceil() as u64;
    }
    let mut n = nearest as u64;
    while !le(n) {
        n += 1;
    }
    while n > 0 && le(n - 1) {
        n -= 1;
    }
    n
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let num = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let den = r.denom().to_f64().unwrap_or(f64::INFINITY);
        num / den
    })
}

pub fn biguint_ln(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    match n.to_f64() {
        Some(x) if x.is_finite() => x.ln(),
        _ => {
            let bits = n.bits();
            let shift = bits - 64;
            (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// Rounds to 15 significant digits, the precision used in reports.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// A positive real parameter, kept exact when it is rational.
#[derive(Debug, Clone, PartialEq)]
pub struct Beta {
    value: f64,
    exact: Option<BigRational>,
}

impl Beta {
    pub fn real(value: f64) -> Self {
        Self { value, exact: None }
    }

    pub fn integer(n: u64) -> Self {
        Self::from_ratio(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        Self::from_ratio(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Self {
            value: ratio_to_f64(&r),
            exact: Some(r),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    /// Whether `count >= beta^n`: exact for rational beta, otherwise in log
    /// space with [`LOG_MARGIN`].
    pub fn power_at_most(&self, count: &BigUint, n: usize) -> bool {
        if let Some(r) = &self.exact {
            if r.is_negative() || r.is_zero() {
                return true;
            }
            let lhs = BigInt::from(count.clone()) * num_traits::pow(r.denom().clone(), n);
            return lhs >= num_traits::pow(r.numer().clone(), n);
        }
        if self.value <= 0.0 {
            return true;
        }
        if n == 0 {
            return !count.is_zero();
        }
        let target = n as f64 * self.value.ln();
        biguint_ln(count) >= target - LOG_MARGIN * target.abs().max(1.0)
    }

    /// Whether `big >= beta * small`.
    pub fn scaled_at_most(&self, big: &BigUint, small: &BigUint) -> bool {
        if let Some(r) = &self.exact {
            return BigInt::from(big.clone()) * r.denom() >= r.numer() * BigInt::from(small.clone());
        }
        let big = big.to_f64().unwrap_or(f64::INFINITY);
        let rhs = self.value * small.to_f64().unwrap_or(f64::INFINITY);
        big >= rhs * (1.0 - LOG_MARGIN)
    }

    /// `beta^n` exactly when rational.
    pub fn exact_power(&self, n: usize) -> Option<BigRational> {
        self.exact.as_ref().map(|r| num_traits::pow(r.clone(), n))
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Some(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            None => write!(f, "{}", self.value),
        }
    }
}

impl FromStr for Beta {
    type Err = String;

    /// Accepts `p/q`, integers and finite decimals, all kept exact.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("cannot parse `{s}` as a positive number");
        let r = if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            BigRational::new(p, q)
        } else if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
            BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len()))
        } else {
            BigRational::from_integer(s.parse().map_err(|_| bad())?)
        };
        if !r.is_positive() {
            return Err(bad());
        }
        Ok(Self::from_ratio(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
        assert_eq!(binomial_signed(-2, 1), BigUint::zero());
    }

    #[test]
    fn e_enclosure_brackets_e() {
        let (lo, hi) = e_enclosure(20);
        assert!(ratio_to_f64(&lo) <= std::f64::consts::E);
        assert!(ratio_to_f64(&hi) >= std::f64::consts::E);
        assert!(e_times_lt(&BigUint::from(1u32), &BigUint::from(3u32)));
        assert!(!e_times_lt(&BigUint::from(1u32), &BigUint::from(2u32)));
        // 10^6 e = 2718281.83
        assert!(e_times_lt(&BigUint::from(1_000_000u32), &BigUint::from(2_718_282u32)));
        assert!(!e_times_lt(&BigUint::from(1_000_000u32), &BigUint::from(2_718_281u32)));
    }

    #[test]
    fn guarded_ceil_settles_integers() {
        // 2 sqrt(4) = 4 exactly.
        assert_eq!(guarded_ceil(4.0 + 1e-13, |n| 16 <= n * n), 4);
        assert_eq!(guarded_ceil(4.0 - 1e-13, |n| 16 <= n * n), 4);
        assert_eq!(guarded_ceil(4.5, |_| unreachable!()), 5);
    }

    #[test]
    fn beta_parsing() {
        assert_eq!(Beta::from_str("3/2").unwrap().value(), 1.5);
        assert_eq!(Beta::from_str("1.25").unwrap().exact().unwrap(), &BigRational::new(5.into(), 4.into()));
        assert_eq!(Beta::from_str("2").unwrap().to_string(), "2");
        assert!(Beta::from_str("0").is_err());
        assert!(Beta::from_str("-1").is_err());
        assert!(Beta::from_str("x").is_err());
    }

    #[test]
    fn power_comparisons() {
        let two = Beta::integer(2);
        assert!(two.power_at_most(&BigUint::from(8u32), 3));
        assert!(!two.power_at_most(&BigUint::from(7u32), 3));
        let root3 = Beta::real(3f64.sqrt());
        assert!(root3.power_at_most(&BigUint::from(9u32), 4));
        assert!(!root3.power_at_most(&BigUint::from(8u32), 4));
        assert!(two.scaled_at_most(&BigUint::from(6u32), &BigUint::from(3u32)));
        assert!(!two.scaled_at_most(&BigUint::from(5u32), &BigUint::from(3u32)));
    }

    #[test]
    fn big_logs() {
        let big = pow(10, 400);
        assert!((biguint_ln(&big) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert_eq!(sig15(1.0 / 3.0), 0.333333333333333);
    }
}
