//! The demand family `𝒮 = {S_j}` of a GCD network and its optimal rate.

use std::collections::BTreeSet;
use std::fmt;

use crate::typekit::{AlphabetSpec, Distribution};
use crate::{Error, Result};

/// A nonempty, sorted set of 0-based source indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSet(Vec<usize>);

impl SourceSet {
    /// Builds a set from 0-based indices; duplicates are merged.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptySourceSet);
        }
        Ok(SourceSet(set.into_iter().collect()))
    }

    /// Builds a set from the 1-based indices used in configs and in print.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::OutOfRange("source indices are 1-based".into()));
        }
        Self::new(indices.iter().map(|i| i - 1))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// All sources `0..n_sources` not in this set; may be empty.
    pub fn complement_indices(&self, n_sources: usize) -> Vec<usize> {
        (0..n_sources).filter(|&i| !self.contains(i)).collect()
    }
}

impl fmt::Display for SourceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Decoder `j` reproduces the sources in `demands[j]` from side information
/// made of every other source.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NetworkSpec {
    n_sources: usize,
    demands: Vec<SourceSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetworkViolation {
    TooFewSources(usize),
    NoDecoders,
    SourceOutOfRange { decoder: usize, source: usize },
    NotProperSubset { decoder: usize },
    DuplicateDemand { first: usize, second: usize },
}

impl fmt::Display for NetworkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkViolation::TooFewSources(n) => write!(f, "need at least 2 sources, got {n}"),
            NetworkViolation::NoDecoders => write!(f, "network has no decoders"),
            NetworkViolation::SourceOutOfRange { decoder, source } => write!(
                f,
                "decoder {} demands source {} which does not exist",
                decoder + 1,
                source + 1
            ),
            NetworkViolation::NotProperSubset { decoder } => write!(
                f,
                "decoder {} demands every source (demand must be a proper subset)",
                decoder + 1
            ),
            NetworkViolation::DuplicateDemand { first, second } => write!(
                f,
                "decoders {} and {} have the same demand set",
                first + 1,
                second + 1
            ),
        }
    }
}

impl NetworkSpec {
    /// Builds and validates a network.
    pub fn new(n_sources: usize, demands: Vec<SourceSet>) -> Result<Self> {
        let net = NetworkSpec { n_sources, demands };
        let violations = net.validate();
        if violations.is_empty() {
            Ok(net)
        } else {
            Err(Error::InvalidNetwork(violations))
        }
    }

    /// Builds without validation; pair with [`NetworkSpec::validate`].
    pub fn unchecked(n_sources: usize, demands: Vec<SourceSet>) -> Self {
        NetworkSpec { n_sources, demands }
    }

    /// The original complementary delivery network: `S_1 = {1}`, `S_2 = {2}`.
    pub fn complementary_delivery() -> Self {
        NetworkSpec {
            n_sources: 2,
            demands: vec![SourceSet(vec![0]), SourceSet(vec![1])],
        }
    }

    /// Three sources `X, Y, Z`; each decoder holds one and wants the other two.
    pub fn three_user() -> Self {
        NetworkSpec {
            n_sources: 3,
            demands: vec![
                SourceSet(vec![0, 1]),
                SourceSet(vec![0, 2]),
                SourceSet(vec![1, 2]),
            ],
        }
    }

    /// Every violated invariant, in a stable order.
    pub fn validate(&self) -> Vec<NetworkViolation> {
        let mut out = Vec::new();
        if self.n_sources < 2 {
            out.push(NetworkViolation::TooFewSources(self.n_sources));
        }
        if self.demands.is_empty() {
            out.push(NetworkViolation::NoDecoders);
        }
        for (j, s) in self.demands.iter().enumerate() {
            for &i in s.indices() {
                if i >= self.n_sources {
                    out.push(NetworkViolation::SourceOutOfRange {
                        decoder: j,
                        source: i,
                    });
                }
            }
            if s.indices().iter().all(|&i| i < self.n_sources) && s.len() >= self.n_sources {
                out.push(NetworkViolation::NotProperSubset { decoder: j });
            }
        }
        for a in 0..self.demands.len() {
            for b in a + 1..self.demands.len() {
                if self.demands[a] == self.demands[b] {
                    out.push(NetworkViolation::DuplicateDemand {
                        first: a,
                        second: b,
                    });
                }
            }
        }
        out
    }

    pub fn n_sources(&self) -> usize {
        self.n_sources
    }

    pub fn n_decoders(&self) -> usize {
        self.demands.len()
    }

    pub fn demands(&self) -> &[SourceSet] {
        &self.demands
    }

    pub fn demand(&self, j: usize) -> Result<&SourceSet> {
        self.demands.get(j).ok_or(Error::DecoderIndex {
            index: j,
            count: self.demands.len(),
        })
    }

    /// `S_j^c`, nonempty for a valid network.
    pub fn side(&self, j: usize) -> Result<SourceSet> {
        SourceSet::new(self.demand(j)?.complement_indices(self.n_sources))
    }
}

/// Per-decoder index tables over the joint alphabet.
#[derive(Clone, Debug)]
pub struct DecoderView {
    pub side: SourceSet,
    pub demand: SourceSet,
    pub side_alphabet: AlphabetSpec,
    pub demand_alphabet: AlphabetSpec,
    /// joint letter -> side letter
    pub side_of: Vec<usize>,
    /// joint letter -> demanded letter
    pub demand_of: Vec<usize>,
    /// `side * demand_size + demanded` -> joint letter
    pub join: Vec<usize>,
}

impl DecoderView {
    fn new(alphabet: &AlphabetSpec, side: SourceSet, demand: SourceSet) -> Self {
        let side_alphabet = alphabet.restrict(&side);
        let demand_alphabet = alphabet.restrict(&demand);
        let k = alphabet.joint_size();
        let mut side_of = Vec::with_capacity(k);
        let mut demand_of = Vec::with_capacity(k);
        let mut join = vec![0; k];
        for a in 0..k {
            let s = alphabet.project_index(a, &side);
            let d = alphabet.project_index(a, &demand);
            side_of.push(s);
            demand_of.push(d);
            join[s * demand_alphabet.joint_size() + d] = a;
        }
        DecoderView {
            side,
            demand,
            side_alphabet,
            demand_alphabet,
            side_of,
            demand_of,
            join,
        }
    }

    pub fn joint(&self, side: usize, demanded: usize) -> usize {
        self.join[side * self.demand_alphabet.joint_size() + demanded]
    }
}

/// A validated network together with its source alphabets.
#[derive(Clone, Debug)]
pub struct SourceNetwork {
    alphabet: AlphabetSpec,
    net: NetworkSpec,
    views: Vec<DecoderView>,
}

impl SourceNetwork {
    pub fn new(alphabet: AlphabetSpec, net: NetworkSpec) -> Result<Self> {
        let violations = net.validate();
        if alphabet.n_sources() != net.n_sources() {
            return Err(Error::InvalidAlphabet(format!(
                "alphabet has {} sources, network has {}",
                alphabet.n_sources(),
                net.n_sources()
            )));
        }
        if !violations.is_empty() {
            return Err(Error::InvalidNetwork(violations));
        }
        let views = (0..net.n_decoders())
            .map(|j| {
                let side = net.side(j)?;
                Ok(DecoderView::new(&alphabet, side, net.demands[j].clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SourceNetwork {
            alphabet,
            net,
            views,
        })
    }

    pub fn alphabet(&self) -> &AlphabetSpec {
        &self.alphabet
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.net
    }

    pub fn n_decoders(&self) -> usize {
        self.net.n_decoders()
    }

    pub fn view(&self, j: usize) -> Result<&DecoderView> {
        self.views.get(j).ok_or(Error::DecoderIndex {
            index: j,
            count: self.views.len(),
        })
    }

    pub fn views(&self) -> &[DecoderView] {
        &self.views
    }
}

/// `H(X^{S_j} | X^{S_j^c})` under `p`, in bits.
pub fn conditional_entropy(p: &Distribution, sn: &SourceNetwork, j: usize) -> Result<f64> {
    let view = sn.view(j)?;
    let mut side = vec![0.0; view.side_alphabet.joint_size()];
    for (a, &pa) in p.floats().iter().enumerate() {
        side[view.side_of[a]] += pa;
    }
    Ok(entropy_of(p.floats()) - entropy_of(&side))
}

fn entropy_of(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Optimal fixed-length rate `R_f = max_j H(X^{S_j} | X^{S_j^c})`.
pub fn rf_rate(p: &Distribution, sn: &SourceNetwork) -> f64 {
    (0..sn.n_decoders())
        .map(|j| conditional_entropy(p, sn, j).expect("decoder index in range"))
        .fold(0.0, f64::max)
}

/// Optimal variable-length rate; it coincides with [`rf_rate`].
pub fn rv_rate(p: &Distribution, sn: &SourceNetwork) -> f64 {
    rf_rate(p, sn)
}
