//! Admissible type sets and colorings of the per-type coding graphs.
//!
//! The coding graph `G(Q)` has the type class `T_Q` as vertices; two blocks
//! are adjacent when some decoder cannot tell them apart from its side
//! information, i.e. when they lie in a common V-shell. Every shell is a
//! clique and there are no other edges. The graph is never stored: vertices
//! are class ranks and neighbors are enumerated through the shells.

mod bipartite;
mod greedy;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::network::SourceNetwork;
use crate::rate::{Rate, Threshold};
use crate::typekit::{
    class_indexer, class_size, enumerate_types, exp2_n_cond_entropy, shell_size, type_of,
    JointType, SequenceTuple, ShellIndex,
};
use crate::{Error, Result};

pub use bipartite::color_bipartite;
pub use greedy::color_greedy;

/// The types whose every conditional entropy is at most `R`.
#[derive(Clone, Debug)]
pub struct AdmissibleTypeSet {
    pub n: usize,
    pub rate: Rate,
    pub members: Vec<JointType>,
}

impl AdmissibleTypeSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, q: &JointType) -> bool {
        self.members.binary_search(q).is_ok()
    }
}

/// `max_j 2^{nH(V_j|Q_j)} <= threshold`, decided exactly.
pub fn is_admissible(q: &JointType, sn: &SourceNetwork, threshold: &Threshold) -> Result<bool> {
    for j in 0..sn.n_decoders() {
        if !threshold.admits(&exp2_n_cond_entropy(q, sn, j)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn admissible_types(
    n: usize,
    rate: &Rate,
    sn: &SourceNetwork,
    cap: u64,
) -> Result<AdmissibleTypeSet> {
    let threshold = Threshold::for_rate(n, rate);
    let mut members = Vec::new();
    for q in enumerate_types(n, sn.alphabet(), cap)? {
        if is_admissible(&q, sn, &threshold)? {
            members.push(q);
        }
    }
    Ok(AdmissibleTypeSet {
        n,
        rate: rate.clone(),
        members,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColoringMode {
    Greedy,
    Bipartite,
}

impl ColoringMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ColoringMode::Greedy => "greedy",
            ColoringMode::Bipartite => "bipartite",
        }
    }

    /// Rejects bipartite mode unless there are exactly two decoders.
    pub fn check(self, sn: &SourceNetwork) -> Result<()> {
        if self == ColoringMode::Bipartite && sn.n_decoders() != 2 {
            return Err(Error::WrongDecoderCount {
                expected: 2,
                found: sn.n_decoders(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for ColoringMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ColoringMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "greedy" => Ok(ColoringMode::Greedy),
            "bipartite" => Ok(ColoringMode::Bipartite),
            other => Err(Error::InvalidMode(format!(
                "unknown coloring mode `{other}` (expected greedy or bipartite)"
            ))),
        }
    }
}

fn shell_sizes(q: &JointType, sn: &SourceNetwork) -> Result<Vec<BigUint>> {
    (0..sn.n_decoders()).map(|j| shell_size(q, sn, j)).collect()
}

/// `Σ_j (|shell_j| − 1) + 1`, at least the largest degree plus one.
///
/// Equality holds when the shells through a vertex meet only in that
/// vertex, which is the case when the demand sets are disjoint.
pub fn degree_budget(q: &JointType, sn: &SourceNetwork) -> Result<BigUint> {
    Ok(shell_sizes(q, sn)?
        .into_iter()
        .fold(BigUint::one(), |acc, s| acc + s - 1u32))
}

/// Largest shell size, which is the clique number `ω(G(Q))`.
pub fn clique_number(q: &JointType, sn: &SourceNetwork) -> Result<BigUint> {
    Ok(shell_sizes(q, sn)?.into_iter().max().unwrap_or_else(BigUint::one))
}

/// The maximum-degree expression `Σ_j |shell_j|` as the paper writes it,
/// which counts the vertex itself once per clique.
pub fn stated_max_degree(q: &JointType, sn: &SourceNetwork) -> Result<BigUint> {
    Ok(shell_sizes(q, sn)?.into_iter().sum())
}

/// Closed-form number of colors a coloring of `G(Q)` may use in `mode`.
pub fn color_budget(q: &JointType, sn: &SourceNetwork, mode: ColoringMode) -> Result<BigUint> {
    match mode {
        ColoringMode::Greedy => degree_budget(q, sn),
        ColoringMode::Bipartite => {
            mode.check(sn)?;
            clique_number(q, sn)
        }
    }
}

/// All vertices adjacent to `x` in `G(type_of(x))`, sorted and deduplicated.
pub fn neighbors(x: &SequenceTuple, sn: &SourceNetwork) -> Result<Vec<SequenceTuple>> {
    let a = sn.alphabet();
    let q = type_of(x, a)?;
    let joint = x.to_joint(a)?;
    let mut out = Vec::new();
    for j in 0..sn.n_decoders() {
        let view = sn.view(j)?;
        let side = joint.iter().map(|&l| view.side_of[l]).collect();
        let shell = ShellIndex::from_side_letters(side, &q, sn, j)?;
        out.extend(shell.iter().filter(|y| y != x));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A proper coloring of one coding graph, indexed by class rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeColoring {
    pub q: JointType,
    pub colors: Vec<u32>,
    pub colors_used: u32,
    pub budget: u64,
}

impl TypeColoring {
    pub fn color_of_rank(&self, rank: u64) -> Option<u32> {
        self.colors.get(rank as usize).copied()
    }
}

pub fn color_type(
    q: &JointType,
    sn: &SourceNetwork,
    mode: ColoringMode,
    cap: u64,
) -> Result<TypeColoring> {
    match mode {
        ColoringMode::Greedy => color_greedy(q, sn, cap),
        ColoringMode::Bipartite => color_bipartite(q, sn, cap),
    }
}

/// Class size as a `usize`, or an error above `cap`.
pub(crate) fn checked_class_size(q: &JointType, cap: u64) -> Result<usize> {
    let size = class_size(q);
    match size.to_u64() {
        Some(s) if s <= cap => Ok(s as usize),
        _ => Err(Error::ConfigurationTooLarge {
            what: "type class",
            items: size.to_string(),
            cap,
        }),
    }
}

pub(crate) fn budget_u64(budget: BigUint) -> Result<u64> {
    budget.to_u64().ok_or_else(|| Error::ConfigurationTooLarge {
        what: "color budget",
        items: budget.to_string(),
        cap: u64::MAX,
    })
}

/// Two vertices of a common shell that received the same color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringViolation {
    pub decoder: usize,
    pub first: u64,
    pub second: u64,
    pub color: u32,
}

impl fmt::Display for ColoringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertices {} and {} share color {} in a shell of decoder {}",
            self.first,
            self.second,
            self.color,
            self.decoder + 1
        )
    }
}

/// Checks every shell of every decoder for a repeated color.
///
/// A coloring of the wrong length is reported as a violation between the
/// first missing or surplus rank and itself.
pub fn verify_coloring(
    q: &JointType,
    sn: &SourceNetwork,
    c: &TypeColoring,
) -> std::result::Result<(), ColoringViolation> {
    let indexer = class_indexer(q).expect("valid type");
    if c.colors.len() as u64 != indexer.size() || c.q != *q {
        let at = c.colors.len().min(indexer.size() as usize) as u64;
        return Err(ColoringViolation {
            decoder: 0,
            first: at,
            second: at,
            color: 0,
        });
    }
    for (j, view) in sn.views().iter().enumerate() {
        let mut seen: HashMap<(Vec<usize>, u32), u64> = HashMap::new();
        for r in 0..indexer.size() {
            let joint = indexer.unrank(r).expect("rank in range");
            let side: Vec<usize> = joint.iter().map(|&l| view.side_of[l]).collect();
            let color = c.colors[r as usize];
            if let Some(&first) = seen.get(&(side.clone(), color)) {
                return Err(ColoringViolation {
                    decoder: j,
                    first,
                    second: r,
                    color,
                });
            }
            seen.insert((side, color), r);
        }
    }
    Ok(())
}
