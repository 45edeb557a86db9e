//! Entropies, divergences and type probabilities, in bits.
//!
//! Each float-valued quantity has an exact rational companion of the form
//! `2^{±n·(quantity)}`: for empirical distributions those powers are ratios
//! of products of integers, which is what makes the lemma bounds checkable
//! without rounding.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{class_size, marginal_type, Distribution, JointType};
use crate::bigmath::{log2_ratio, ratio_from, ratio_int, self_power_product};
use crate::network::SourceNetwork;
use crate::typekit::AlphabetSpec;
use crate::Result;

/// `H(Q)` in bits.
pub fn entropy(q: &JointType) -> f64 {
    let n = q.n() as f64;
    q.counts()
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let f = f64::from(c) / n;
            -f * f.log2()
        })
        .sum::<f64>()
        .max(0.0)
}

/// `D(Q‖P)` in bits; `+inf` when `Q` puts mass where `P` has none.
pub fn divergence(q: &JointType, p: &Distribution) -> f64 {
    assert_eq!(q.joint_size(), p.joint_size(), "type and distribution alphabets differ");
    let n = q.n() as f64;
    let mut d = 0.0;
    for (&c, &pa) in q.counts().iter().zip(p.floats()) {
        if c == 0 {
            continue;
        }
        if pa == 0.0 {
            return f64::INFINITY;
        }
        let f = f64::from(c) / n;
        d += f * (f / pa).log2();
    }
    d.max(0.0)
}

/// `H(V_j | Q_j) = H(Q) - H(Q_j)` where `Q_j` is the marginal on `S_j^c`.
pub fn cond_entropy(q: &JointType, sn: &SourceNetwork, j: usize) -> Result<f64> {
    let view = sn.view(j)?;
    let side = marginal_type(q, sn.alphabet(), &view.side)?;
    Ok(entropy(q) - entropy(&side))
}

/// `log2 P(T_Q)`; `-inf` when the class has probability zero.
pub fn type_probability(q: &JointType, p: &Distribution) -> f64 {
    log2_ratio(&type_probability_exact(q, p))
}

/// `P(T_Q) = |T_Q| · Π P(a)^{N(a|Q)}`, exactly.
pub fn type_probability_exact(q: &JointType, p: &Distribution) -> BigRational {
    assert_eq!(q.joint_size(), p.joint_size(), "type and distribution alphabets differ");
    let mut prob = ratio_int(class_size(q));
    for (&c, pa) in q.counts().iter().zip(p.probs()) {
        if c > 0 {
            if pa.is_zero() {
                return BigRational::zero();
            }
            prob *= pa.pow(c as i32);
        }
    }
    prob
}

/// `ε_n(N) = (|𝒳| log2(n+1) + log2 N) / n` for the joint alphabet `𝒳`.
pub fn epsilon_n(n: usize, big_n: u64, a: &AlphabetSpec) -> f64 {
    (a.joint_size() as f64 * ((n + 1) as f64).log2() + (big_n as f64).log2()) / n as f64
}

/// `2^{nH(Q)} = n^n / Π c^c`.
pub fn exp2_n_entropy(q: &JointType) -> BigRational {
    let n = q.n() as u64;
    ratio_from(
        self_power_product([n]),
        self_power_product(q.counts().iter().map(|&c| u64::from(c))),
    )
}

/// `2^{nH(V_j|Q_j)} = Π_b m_b^{m_b} / Π_a c_a^{c_a}` with `m` the side marginal.
pub fn exp2_n_cond_entropy(q: &JointType, sn: &SourceNetwork, j: usize) -> Result<BigRational> {
    let view = sn.view(j)?;
    let mut side = vec![0u64; view.side_alphabet.joint_size()];
    for (a, &c) in q.counts().iter().enumerate() {
        side[view.side_of[a]] += u64::from(c);
    }
    Ok(ratio_from(
        self_power_product(side),
        self_power_product(q.counts().iter().map(|&c| u64::from(c))),
    ))
}

/// `2^{-nD(Q‖P)} = Π_a (n P(a) / c_a)^{c_a}`; zero when the divergence is infinite.
pub fn exp2_neg_n_divergence(q: &JointType, p: &Distribution) -> BigRational {
    assert_eq!(q.joint_size(), p.joint_size(), "type and distribution alphabets differ");
    let n = BigRational::from_integer(q.n().into());
    let mut acc = BigRational::one();
    for (&c, pa) in q.counts().iter().zip(p.probs()) {
        if c == 0 {
            continue;
        }
        if pa.is_zero() {
            return BigRational::zero();
        }
        let ratio = &n * pa / BigRational::from_integer(BigUint::from(c).into());
        acc *= ratio.pow(c as i32);
    }
    acc
}
