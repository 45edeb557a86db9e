//! Exact big-integer combinatorics and base-2 logarithms of big numbers.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `log2(x)` for an arbitrary-size integer; `-inf` for zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        // exact conversion is within one ulp here
        return x.to_f64().map(f64::log2).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

/// `log2(x)` for a nonnegative rational; `-inf` for zero.
pub fn log2_ratio(x: &BigRational) -> f64 {
    assert!(!x.is_negative(), "log2 of a negative rational");
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    log2_biguint(num) - log2_biguint(den)
}

/// Smallest `w` with `2^w >= x` (0 for `x <= 1`).
pub fn ceil_log2(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        0
    } else {
        (x - 1u32).bits()
    }
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(Σ counts)! / Π counts!`.
pub fn multinomial(counts: &[u32]) -> BigUint {
    let mut acc = BigUint::one();
    let mut total = 0u64;
    for &c in counts {
        for i in 1..=u64::from(c) {
            total += 1;
            acc = acc * total / i;
        }
    }
    acc
}

/// `Π c^c` over the nonzero entries (with `0^0 = 1`).
pub fn self_power_product(counts: impl IntoIterator<Item = u64>) -> BigUint {
    counts
        .into_iter()
        .filter(|&c| c > 0)
        .fold(BigUint::one(), |acc, c| acc * BigUint::from(c).pow(c as u32))
}

pub fn ratio_from(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn ratio_int(x: BigUint) -> BigRational {
    BigRational::from_integer(x.into())
}
