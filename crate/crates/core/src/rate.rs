//! Exact coding rates and the `2^{nR}` thresholds used in set-membership tests.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigmath::{log2_biguint, log2_ratio, ratio_int};
use crate::{Error, Result};

/// Largest accepted denominator of a rate; keeps exact threshold tests tractable.
const MAX_DENOMINATOR: u64 = 1_000_000_000;

/// A nonnegative rate in bits per source symbol, held as an exact rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rate(BigRational);

impl Rate {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::InvalidRate(format!("{value} is negative")));
        }
        if value.denom() > &BigInt::from(MAX_DENOMINATOR) {
            return Err(Error::InvalidRate(format!(
                "denominator of {value} exceeds {MAX_DENOMINATOR}"
            )));
        }
        Ok(Rate(value))
    }

    pub fn from_ratio(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidRate("zero denominator".into()));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(bits: u64) -> Self {
        Rate(BigRational::from_integer(bits.into()))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromStr for Rate {
    type Err = Error;

    /// Accepts `p/q`, integers and plain decimals such as `0.8`.
    fn from_str(s: &str) -> Result<Self> {
        parse_nonneg_rational(s)
            .ok_or_else(|| Error::InvalidRate(format!("cannot parse {s:?}")))
            .and_then(Rate::new)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses `p/q`, `123` or `12.345` into an exact nonnegative rational.
pub fn parse_nonneg_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() || p.is_negative() || q.is_negative() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = BigInt::from(10u32).pow(frac.len() as u32);
    Some(BigRational::new(numer, denom))
}

/// The quantity `2^{nR}` written as `base^(1/root)` with a rational base.
///
/// Every rate that appears in the admissible-set tests is either a rational
/// `p/q` (giving `base = 2^{np}`, `root = q`), a code rate `log2(M)/n`
/// (giving `base = M`, `root = 1`), or one of those shifted by
/// `±ε_n(N)`, which multiplies `2^{nR}` by the rational `((n+1)^k N)^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Threshold {
    base: BigRational,
    root: u32,
}

impl Threshold {
    pub fn for_rate(n: usize, rate: &Rate) -> Self {
        let p = rate.0.numer().magnitude().clone();
        let q = rate.0.denom().magnitude().to_u32().expect("bounded denominator");
        let exponent = p * BigUint::from(n);
        let exponent = exponent.to_u64().expect("rate exponent fits in u64");
        Threshold {
            base: ratio_int(BigUint::one() << exponent),
            root: q,
        }
    }

    /// `2^{nR}` where `R = log2(count) / n`.
    pub fn from_count(count: BigUint) -> Self {
        Threshold {
            base: ratio_int(count),
            root: 1,
        }
    }

    /// Multiplies the represented value by `factor`.
    pub fn scaled(&self, factor: &BigRational) -> Self {
        Threshold {
            base: &self.base * factor.pow(self.root as i32),
            root: self.root,
        }
    }

    /// `log2` of the represented value, i.e. `nR`.
    pub fn log2(&self) -> f64 {
        log2_ratio(&self.base) / f64::from(self.root)
    }

    /// Exact test `w <= 2^{nR}` for a nonnegative rational `w`.
    pub fn admits(&self, w: &BigRational) -> bool {
        let lw = log2_ratio(w) * f64::from(self.root);
        let lb = log2_ratio(&self.base);
        if lw == f64::NEG_INFINITY {
            return true;
        }
        if lb == f64::NEG_INFINITY {
            return false;
        }
        let margin = 1e-7 * (1.0 + lb.abs().max(lw.abs()));
        if lw < lb - margin {
            return true;
        }
        if lw > lb + margin {
            return false;
        }
        w.pow(self.root as i32) <= self.base
    }
}

/// `2^{nε_n(N)} = (n+1)^{joint_size} · N`, exactly.
pub fn exp2_n_epsilon(n: usize, joint_size: usize, big_n: u64) -> BigUint {
    BigUint::from(n as u64 + 1).pow(joint_size as u32) * BigUint::from(big_n)
}

/// `(1/n) log2(count)` as a plain float.
pub fn rate_of_count(n: usize, count: &BigUint) -> f64 {
    log2_biguint(count) / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        let r: Rate = "0.8".parse().unwrap();
        assert_eq!(r, Rate::from_ratio(4, 5).unwrap());
        let r: Rate = "11/100".parse().unwrap();
        assert_eq!(r, Rate::from_ratio(11, 100).unwrap());
        let r: Rate = "2".parse().unwrap();
        assert_eq!(r, Rate::integer(2));
        assert!("-1".parse::<Rate>().is_err());
        assert!("abc".parse::<Rate>().is_err());
        assert!("1/0".parse::<Rate>().is_err());
        assert!(".".parse::<Rate>().is_err());
    }

    #[test]
    fn threshold_boundary_is_inclusive() {
        // 2^{4 * 1} = 16
        let t = Threshold::for_rate(4, &Rate::integer(1));
        assert!(t.admits(&ratio_int(BigUint::from(16u32))));
        assert!(!t.admits(&BigRational::new(161.into(), 10.into())));
        // 2^{5 * 4/5} = 16 as well, via the q-th root path
        let t = Threshold::for_rate(5, &Rate::from_ratio(4, 5).unwrap());
        assert!(t.admits(&ratio_int(BigUint::from(16u32))));
        assert!(!t.admits(&BigRational::new(16_000_001.into(), 1_000_000.into())));
    }

    #[test]
    fn scaled_threshold_tracks_epsilon_shift() {
        let t = Threshold::from_count(BigUint::from(10u32));
        let s = t.scaled(&ratio_int(BigUint::from(3u32)));
        assert!(s.admits(&ratio_int(BigUint::from(30u32))));
        assert!(!s.admits(&ratio_int(BigUint::from(31u32))));
        assert!((s.log2() - 30f64.log2()).abs() < 1e-12);
    }
}
