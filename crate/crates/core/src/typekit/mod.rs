//! Method-of-types calculus over product alphabets.
//!
//! Joint letters are indexed in mixed radix with the first source most
//! significant, so index order equals lexicographic order over letter
//! tuples. Types are dense count vectors over those indices.

mod measure;
mod rank;
mod shell;

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::bigmath::{binomial, multinomial};
use crate::network::SourceSet;
use crate::{Error, Result};

pub use measure::{
    cond_entropy, divergence, entropy, epsilon_n, exp2_n_cond_entropy, exp2_n_entropy,
    exp2_neg_n_divergence, type_probability, type_probability_exact,
};
pub(crate) use rank::GroupedMultiset;
pub use shell::{
    enumerate_shell, rank_in_shell, shell_size, unrank_in_shell, ShellIndex, ShellIter,
};

/// Largest supported joint alphabet.
const MAX_JOINT_SIZE: usize = 1 << 16;

/// Per-source alphabet sizes `|𝒳^(i)|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlphabetSpec {
    sizes: Vec<usize>,
    joint_size: usize,
}

impl AlphabetSpec {
    /// At least two sources, each with an alphabet of 2..=256 letters.
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 sources, got {}",
                sizes.len()
            )));
        }
        Self::checked(sizes)
    }

    fn checked(sizes: Vec<usize>) -> Result<Self> {
        if let Some(&s) = sizes.iter().find(|&&s| !(2..=256).contains(&s)) {
            return Err(Error::InvalidAlphabet(format!(
                "alphabet size {s} outside 2..=256"
            )));
        }
        let mut joint_size = 1usize;
        for &s in &sizes {
            joint_size = joint_size.saturating_mul(s);
        }
        if joint_size > MAX_JOINT_SIZE {
            return Err(Error::InvalidAlphabet(format!(
                "joint alphabet of {joint_size} letters exceeds {MAX_JOINT_SIZE}"
            )));
        }
        Ok(AlphabetSpec { sizes, joint_size })
    }

    /// The alphabet of the sub-tuple over `sources`; may have a single source.
    pub fn restrict(&self, sources: &SourceSet) -> AlphabetSpec {
        let sizes: Vec<usize> = sources.indices().iter().map(|&i| self.sizes[i]).collect();
        let joint_size = sizes.iter().product();
        AlphabetSpec { sizes, joint_size }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n_sources(&self) -> usize {
        self.sizes.len()
    }

    pub fn joint_size(&self) -> usize {
        self.joint_size
    }

    pub fn joint_index(&self, letters: &[u8]) -> usize {
        letters
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&l, &s)| acc * s + l as usize)
    }

    pub fn letters(&self, mut joint: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.sizes.len()];
        for (slot, &s) in out.iter_mut().zip(&self.sizes).rev() {
            *slot = (joint % s) as u8;
            joint /= s;
        }
        out
    }

    /// Index of the projection of joint letter `joint` onto `sources`.
    pub fn project_index(&self, joint: usize, sources: &SourceSet) -> usize {
        let letters = self.letters(joint);
        sources
            .indices()
            .iter()
            .fold(0, |acc, &i| acc * self.sizes[i] + letters[i] as usize)
    }
}

/// A block of `n` letter tuples, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequenceTuple {
    width: usize,
    symbols: Vec<u8>,
}

impl SequenceTuple {
    /// `symbols[t * width + i]` is the letter of the `i`-th component at time `t`.
    pub fn new(width: usize, symbols: Vec<u8>) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidSequence("tuple width must be positive".into()));
        }
        if symbols.is_empty() || !symbols.len().is_multiple_of(width) {
            return Err(Error::InvalidSequence(format!(
                "{} symbols do not form a nonempty block of width {width}",
                symbols.len()
            )));
        }
        Ok(SequenceTuple { width, symbols })
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let width = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if rows.iter().any(|r| r.as_ref().len() != width) {
            return Err(Error::InvalidSequence("rows of unequal width".into()));
        }
        Self::new(width, rows.iter().flat_map(|r| r.as_ref().to_vec()).collect())
    }

    pub fn from_joint(a: &AlphabetSpec, joint: &[usize]) -> Self {
        let symbols = joint.iter().flat_map(|&j| a.letters(j)).collect();
        SequenceTuple {
            width: a.n_sources(),
            symbols,
        }
    }

    /// All-zero block, used as the decoder output on a declared error.
    pub fn smallest(width: usize, n: usize) -> Self {
        SequenceTuple {
            width,
            symbols: vec![0; width * n],
        }
    }

    /// Block length `n`.
    pub fn len(&self) -> usize {
        self.symbols.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn symbol(&self, t: usize) -> &[u8] {
        &self.symbols[t * self.width..(t + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.symbols.chunks(self.width)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.symbols
    }

    /// Keeps only the given components, in the given order.
    pub fn select(&self, columns: &[usize]) -> SequenceTuple {
        let symbols = self
            .rows()
            .flat_map(|row| columns.iter().map(move |&c| row[c]))
            .collect();
        SequenceTuple {
            width: columns.len(),
            symbols,
        }
    }

    /// Projection of a full tuple onto `sources`.
    pub fn project(&self, sources: &SourceSet) -> SequenceTuple {
        self.select(sources.indices())
    }

    pub fn check(&self, a: &AlphabetSpec) -> Result<()> {
        if self.width != a.n_sources() {
            return Err(Error::InvalidSequence(format!(
                "tuple width {} but alphabet has {} sources",
                self.width,
                a.n_sources()
            )));
        }
        for (t, row) in self.rows().enumerate() {
            for (i, (&l, &s)) in row.iter().zip(a.sizes()).enumerate() {
                if l as usize >= s {
                    return Err(Error::InvalidSequence(format!(
                        "letter {l} of component {} at time {t} outside alphabet of size {s}",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Joint letter indices, after checking the tuple against `a`.
    pub fn to_joint(&self, a: &AlphabetSpec) -> Result<Vec<usize>> {
        self.check(a)?;
        Ok(self.rows().map(|r| a.joint_index(r)).collect())
    }
}

/// An empirical count vector over a joint alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointType {
    n: usize,
    counts: Vec<u32>,
}

impl JointType {
    pub fn new(counts: Vec<u32>) -> Self {
        let n = counts.iter().map(|&c| c as usize).sum();
        JointType { n, counts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, a: usize) -> u32 {
        self.counts[a]
    }

    pub fn joint_size(&self) -> usize {
        self.counts.len()
    }

    fn check(&self, a: &AlphabetSpec) -> Result<()> {
        if self.counts.len() != a.joint_size() {
            return Err(Error::TypeMismatch(format!(
                "type over {} letters, alphabet has {}",
                self.counts.len(),
                a.joint_size()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for JointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// A probability vector over the joint alphabet, held exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<BigRational>,
    floats: Vec<f64>,
}

impl Distribution {
    /// Entries must be nonnegative and sum to 1 within 1e-12; the result is
    /// renormalized exactly.
    pub fn from_rationals(a: &AlphabetSpec, probs: Vec<BigRational>) -> Result<Self> {
        if probs.len() != a.joint_size() {
            return Err(Error::InvalidDistribution(format!(
                "{} entries for a joint alphabet of {} letters",
                probs.len(),
                a.joint_size()
            )));
        }
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(Error::InvalidDistribution(format!("negative entry {p}")));
        }
        let sum: BigRational = probs.iter().sum();
        let deviation = (&sum - BigRational::one()).abs();
        if deviation > BigRational::new(1.into(), 1_000_000_000_000u64.into()) {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {:.15}, not 1",
                sum.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let probs: Vec<BigRational> = probs.into_iter().map(|p| p / &sum).collect();
        let floats = probs.iter().map(|p| p.to_f64().unwrap_or(0.0)).collect();
        Ok(Distribution { probs, floats })
    }

    pub fn from_f64(a: &AlphabetSpec, probs: &[f64]) -> Result<Self> {
        let exact = probs
            .iter()
            .map(|&p| {
                BigRational::from_float(p)
                    .ok_or_else(|| Error::InvalidDistribution(format!("non-finite entry {p}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rationals(a, exact)
    }

    /// Doubly symmetric binary source: uniform `X`, `Y = X` flipped with
    /// probability `crossover`.
    pub fn dsbs(crossover: &BigRational) -> Result<Self> {
        let half = BigRational::new(1.into(), 2.into());
        if crossover.is_negative() || crossover > &BigRational::one() {
            return Err(Error::InvalidDistribution(format!(
                "crossover {crossover} outside [0, 1]"
            )));
        }
        let same = (BigRational::one() - crossover) * &half;
        let diff = crossover * &half;
        let a = AlphabetSpec::new(vec![2, 2])?;
        Self::from_rationals(&a, vec![same.clone(), diff.clone(), diff, same])
    }

    pub fn dsbs_f64(crossover: f64) -> Self {
        Self::dsbs(&BigRational::from_float(crossover).expect("finite crossover"))
            .expect("valid crossover")
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn floats(&self) -> &[f64] {
        &self.floats
    }

    pub fn joint_size(&self) -> usize {
        self.probs.len()
    }
}

/// Empirical joint type of a block.
pub fn type_of(x: &SequenceTuple, a: &AlphabetSpec) -> Result<JointType> {
    let mut counts = vec![0u32; a.joint_size()];
    for j in x.to_joint(a)? {
        counts[j] += 1;
    }
    Ok(JointType::new(counts))
}

/// `|𝒫_n| = C(n + k - 1, k - 1)` for a joint alphabet of `k` letters.
pub fn type_count(n: usize, joint_size: usize) -> BigUint {
    binomial((n + joint_size - 1) as u64, (joint_size - 1) as u64)
}

/// Every type of block length `n`, lexicographically ascending in the
/// count vector.
pub fn enumerate_types(n: usize, a: &AlphabetSpec, cap: u64) -> Result<Vec<JointType>> {
    enumerate_compositions(n, a.joint_size(), cap)
}

pub(crate) fn enumerate_compositions(n: usize, k: usize, cap: u64) -> Result<Vec<JointType>> {
    if n == 0 {
        return Err(Error::InvalidSequence("block length must be at least 1".into()));
    }
    let total = type_count(n, k);
    if total > BigUint::from(cap) {
        return Err(Error::ConfigurationTooLarge {
            what: "type set",
            items: total.to_string(),
            cap,
        });
    }
    let mut out = Vec::with_capacity(total.to_usize().unwrap_or(0));
    let mut counts = vec![0u32; k];
    fill(&mut counts, 0, n as u32, &mut out);
    Ok(out)
}

fn fill(counts: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<JointType>) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        out.push(JointType::new(counts.to_vec()));
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        fill(counts, pos + 1, remaining - c, out);
    }
    counts[pos] = 0;
}

/// `|T_Q| = n! / Π counts!`.
pub fn class_size(q: &JointType) -> BigUint {
    multinomial(&q.counts)
}

/// Rank of a block within its type class, in lexicographic order.
pub fn class_rank(x: &SequenceTuple, q: &JointType, a: &AlphabetSpec) -> Result<u64> {
    q.check(a)?;
    let joint = x.to_joint(a)?;
    class_indexer(q)?.rank(&joint)
}

/// Inverse of [`class_rank`].
pub fn class_unrank(r: u64, q: &JointType, a: &AlphabetSpec) -> Result<SequenceTuple> {
    q.check(a)?;
    let joint = class_indexer(q)?.unrank(r)?;
    Ok(SequenceTuple::from_joint(a, &joint))
}

pub(crate) fn class_indexer(q: &JointType) -> Result<GroupedMultiset> {
    GroupedMultiset::new(vec![0; q.n()], vec![q.counts.clone()])
}

/// Marginal of `q` on `sources`.
pub fn marginal_type(q: &JointType, a: &AlphabetSpec, sources: &SourceSet) -> Result<JointType> {
    q.check(a)?;
    if sources.is_empty() {
        return Err(Error::EmptySourceSet);
    }
    if let Some(&i) = sources.indices().iter().find(|&&i| i >= a.n_sources()) {
        return Err(Error::OutOfRange(format!("source {} does not exist", i + 1)));
    }
    let sub = a.restrict(sources);
    let mut counts = vec![0u32; sub.joint_size()];
    for (j, &c) in q.counts.iter().enumerate() {
        counts[a.project_index(j, sources)] += c;
    }
    Ok(JointType::new(counts))
}
