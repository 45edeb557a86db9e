//! Fixed-to-fixed (FF) and fixed-to-variable (FV) codes over colored coding
//! graphs.
//!
//! Both codes send the type of the block followed by the color of the block
//! in its coding graph. A decoder knows its side sequence, hence which shell
//! of `G(Q)` the block lies in, and every shell is a clique, so the color
//! pins the block down.
//!
//! FF layout: the codeword is the integer `t · C_max + c` where `t` is the
//! rank of the type among all types of length `n`, `c` the color and
//! `C_max` the largest color budget over admissible types. The integer
//! `M_n − 1` with `M_n = |𝒫_n| · C_max + 1` is reserved for declared errors.
//!
//! FV layout: `w_t = ⌈log2 |𝒫_n|⌉` bits of type rank, then `⌈log2 B(Q)⌉`
//! bits of color, both most significant bit first.

mod bits;
pub mod format;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::bigmath::{ceil_log2, ratio_int};
use crate::graphcode::{
    budget_u64, color_budget, color_type, is_admissible, verify_coloring, ColoringMode,
    TypeColoring,
};
use crate::network::SourceNetwork;
use crate::rate::{exp2_n_epsilon, Rate, Threshold};
use crate::typekit::{
    class_indexer, enumerate_types, type_of, JointType, SequenceTuple, ShellIndex,
};
use crate::{Error, Result};

pub use bits::{BitReader, BitString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeMode {
    Ff,
    Fv,
}

impl CodeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CodeMode::Ff => "ff",
            CodeMode::Fv => "fv",
        }
    }
}

impl fmt::Display for CodeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CodeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ff" => Ok(CodeMode::Ff),
            "fv" => Ok(CodeMode::Fv),
            other => Err(Error::InvalidMode(format!(
                "unknown code mode `{other}` (expected ff or fv)"
            ))),
        }
    }
}

/// An FF codeword: an integer below `M_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FfCodeword {
    pub index: u64,
    pub declared_error: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FfDecoded {
    /// The reconstruction of the demanded sources.
    pub sequence: SequenceTuple,
    pub declared_error: bool,
}

/// A universal codebook. Nothing in it depends on a source distribution.
#[derive(Debug)]
pub struct Codebook {
    n: usize,
    rate: Option<Rate>,
    sn: SourceNetwork,
    mode: CodeMode,
    coloring: ColoringMode,
    cap: u64,
    types: Vec<JointType>,
    index: HashMap<JointType, usize>,
    admissible: Vec<bool>,
    budgets: Vec<u64>,
    c_max: u64,
    m_n: u64,
    type_width: u32,
    colorings: Vec<OnceLock<Arc<TypeColoring>>>,
}

impl Codebook {
    /// Builds the code layout; colorings are computed on first use.
    ///
    /// FF requires a rate, FV ignores it.
    pub fn build(
        n: usize,
        rate: Option<Rate>,
        sn: SourceNetwork,
        mode: CodeMode,
        coloring: ColoringMode,
        cap: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("block length must be at least 1".into()));
        }
        coloring.check(&sn)?;
        let rate = match mode {
            CodeMode::Ff => Some(rate.ok_or_else(|| {
                Error::InvalidRate("a fixed-length code needs a rate".into())
            })?),
            CodeMode::Fv => None,
        };
        let types = enumerate_types(n, sn.alphabet(), cap)?;
        let admissible = match &rate {
            Some(r) => {
                let threshold = Threshold::for_rate(n, r);
                types
                    .iter()
                    .map(|q| is_admissible(q, &sn, &threshold))
                    .collect::<Result<Vec<_>>>()?
            }
            None => vec![true; types.len()],
        };
        let budgets = types
            .iter()
            .zip(&admissible)
            .map(|(q, &ok)| {
                if ok {
                    budget_u64(color_budget(q, &sn, coloring)?)
                } else {
                    Ok(0)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let c_max = budgets.iter().copied().max().unwrap_or(0);
        let m_n = (BigUint::from(types.len()) * c_max + 1u32)
            .to_u64()
            .ok_or_else(|| Error::ConfigurationTooLarge {
                what: "codeword set",
                items: (BigUint::from(types.len()) * c_max + 1u32).to_string(),
                cap: u64::MAX,
            })?;
        let type_width = ceil_log2(&BigUint::from(types.len())) as u32;
        let index = types.iter().cloned().enumerate().map(|(i, q)| (q, i)).collect();
        let colorings = (0..types.len()).map(|_| OnceLock::new()).collect();
        Ok(Codebook {
            n,
            rate,
            sn,
            mode,
            coloring,
            cap,
            types,
            index,
            admissible,
            budgets,
            c_max,
            m_n,
            type_width,
            colorings,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> Option<&Rate> {
        self.rate.as_ref()
    }

    pub fn network(&self) -> &SourceNetwork {
        &self.sn
    }

    pub fn mode(&self) -> CodeMode {
        self.mode
    }

    pub fn coloring_mode(&self) -> ColoringMode {
        self.coloring
    }

    /// All types of length `n`, in canonical order.
    pub fn types(&self) -> &[JointType] {
        &self.types
    }

    pub fn type_index(&self, q: &JointType) -> Option<usize> {
        self.index.get(q).copied()
    }

    pub fn is_admissible(&self, t: usize) -> bool {
        self.admissible[t]
    }

    pub fn admissible_count(&self) -> usize {
        self.admissible.iter().filter(|&&a| a).count()
    }

    /// Closed-form color budget of type `t`; zero for inadmissible types.
    pub fn budget(&self, t: usize) -> u64 {
        self.budgets[t]
    }

    pub fn c_max(&self) -> u64 {
        self.c_max
    }

    /// Size `M_n` of the FF codeword set.
    pub fn m_n(&self) -> u64 {
        self.m_n
    }

    pub fn error_index(&self) -> u64 {
        self.m_n - 1
    }

    /// `(1/n) log2 M_n`.
    pub fn ff_rate(&self) -> f64 {
        (self.m_n as f64).log2() / self.n as f64
    }

    /// Whether `(1/n) log2 M_n <= R + ε_n(N_d) + 1/n`, decided exactly.
    pub fn meets_rate_bound(&self) -> bool {
        let Some(rate) = &self.rate else {
            return true;
        };
        let slack = exp2_n_epsilon(self.n, self.sn.alphabet().joint_size(), self.sn.n_decoders() as u64)
            * 2u32;
        Threshold::for_rate(self.n, rate)
            .scaled(&ratio_int(slack))
            .admits(&ratio_int(BigUint::from(self.m_n)))
    }

    pub fn type_width(&self) -> u32 {
        self.type_width
    }

    pub fn color_width(&self, t: usize) -> u32 {
        ceil_log2(&BigUint::from(self.budgets[t])) as u32
    }

    /// FV codeword length for blocks of type `t`.
    pub fn fv_length(&self, t: usize) -> u32 {
        self.type_width + self.color_width(t)
    }

    /// The coloring of type `t`, computed once and cached.
    pub fn coloring(&self, t: usize) -> Result<Arc<TypeColoring>> {
        if !self.admissible[t] {
            return Err(Error::OutOfRange(format!(
                "type {} is not admissible and has no coloring",
                self.types[t]
            )));
        }
        if let Some(c) = self.colorings[t].get() {
            return Ok(c.clone());
        }
        let c = Arc::new(color_type(&self.types[t], &self.sn, self.coloring, self.cap)?);
        Ok(self.colorings[t].get_or_init(|| c).clone())
    }

    /// Colors every admissible type, in parallel.
    pub fn color_all(&self) -> Result<()> {
        (0..self.types.len())
            .into_par_iter()
            .filter(|&t| self.admissible[t])
            .try_for_each(|t| self.coloring(t).map(|_| ()))
    }

    /// Installs a coloring read from storage after checking that it is proper.
    pub(crate) fn install_coloring(&self, t: usize, c: TypeColoring) -> Result<()> {
        if c.q != self.types[t] || c.budget != self.budgets[t] || u64::from(c.colors_used) > c.budget
        {
            return Err(Error::Format(format!("coloring record for type {} is inconsistent", c.q)));
        }
        if c.colors.iter().any(|&x| x >= c.colors_used) {
            return Err(Error::Format(format!("color out of range in type {}", c.q)));
        }
        verify_coloring(&self.types[t], &self.sn, &c)
            .map_err(|v| Error::Format(format!("stored coloring of {} is improper: {v}", c.q)))?;
        let _ = self.colorings[t].set(Arc::new(c));
        Ok(())
    }

    fn check_block(&self, x: &SequenceTuple) -> Result<(usize, u32)> {
        if x.len() != self.n {
            return Err(Error::InvalidSequence(format!(
                "block has length {}, codebook expects {}",
                x.len(),
                self.n
            )));
        }
        let q = type_of(x, self.sn.alphabet())?;
        let t = self.index[&q];
        if !self.admissible[t] {
            return Ok((t, u32::MAX));
        }
        let rank = class_indexer(&q)?.rank(&x.to_joint(self.sn.alphabet())?)?;
        let color = self.coloring(t)?.colors[rank as usize];
        Ok((t, color))
    }

    pub fn encode_ff(&self, x: &SequenceTuple) -> Result<FfCodeword> {
        self.expect_mode(CodeMode::Ff)?;
        let (t, color) = self.check_block(x)?;
        if color == u32::MAX {
            return Ok(FfCodeword {
                index: self.error_index(),
                declared_error: true,
            });
        }
        Ok(FfCodeword {
            index: t as u64 * self.c_max + u64::from(color),
            declared_error: false,
        })
    }

    /// Decoder `j` recovers its demanded sources from the codeword and its
    /// side sequence (the sources outside `S_j`, in source order).
    pub fn decode_ff(&self, j: usize, w: u64, side: &SequenceTuple) -> Result<FfDecoded> {
        self.expect_mode(CodeMode::Ff)?;
        let view = self.sn.view(j)?;
        self.check_side(j, side)?;
        if w >= self.m_n {
            return Err(Error::OutOfRange(format!(
                "codeword {w} is not below M_n = {}",
                self.m_n
            )));
        }
        if w == self.error_index() {
            return Ok(FfDecoded {
                sequence: SequenceTuple::smallest(view.demand.len(), self.n),
                declared_error: true,
            });
        }
        let t = (w / self.c_max) as usize;
        let color = (w % self.c_max) as u32;
        if !self.admissible[t] {
            return Err(Error::NoMatchingVertex);
        }
        Ok(FfDecoded {
            sequence: self.find_in_shell(j, t, color, side)?,
            declared_error: false,
        })
    }

    pub fn encode_fv(&self, x: &SequenceTuple) -> Result<BitString> {
        self.expect_mode(CodeMode::Fv)?;
        let (t, color) = self.check_block(x)?;
        let mut bits = BitString::new();
        bits.push(t as u64, self.type_width);
        bits.push(u64::from(color), self.color_width(t));
        Ok(bits)
    }

    /// Decodes one complete FV codeword; trailing bits are an error.
    pub fn decode_fv(&self, j: usize, bits: &BitString, side: &SequenceTuple) -> Result<SequenceTuple> {
        let mut reader = BitReader::new(bits);
        let x = self.decode_fv_from(j, &mut reader, side)?;
        if reader.remaining() != 0 {
            return Err(Error::MalformedBits(format!(
                "{} bits left after the codeword",
                reader.remaining()
            )));
        }
        Ok(x)
    }

    /// Reads one FV codeword from a stream of concatenated codewords.
    pub fn decode_fv_from(
        &self,
        j: usize,
        reader: &mut BitReader<'_>,
        side: &SequenceTuple,
    ) -> Result<SequenceTuple> {
        self.expect_mode(CodeMode::Fv)?;
        self.sn.view(j)?;
        self.check_side(j, side)?;
        let t = reader.read(self.type_width)? as usize;
        if t >= self.types.len() {
            return Err(Error::MalformedBits(format!("type index {t} out of range")));
        }
        let color = reader.read(self.color_width(t))?;
        if color >= self.budgets[t] {
            return Err(Error::MalformedBits(format!("color {color} exceeds the budget")));
        }
        self.find_in_shell(j, t, color as u32, side)
    }

    fn find_in_shell(&self, j: usize, t: usize, color: u32, side: &SequenceTuple) -> Result<SequenceTuple> {
        let q = &self.types[t];
        let view = self.sn.view(j)?;
        let shell = ShellIndex::new(side, q, &self.sn, j)?;
        let coloring = self.coloring(t)?;
        let indexer = class_indexer(q)?;
        for s in 0..shell.size() {
            let joint = shell.unrank_joint(s)?;
            if coloring.colors[indexer.rank(&joint)? as usize] == color {
                let x = SequenceTuple::from_joint(self.sn.alphabet(), &joint);
                return Ok(x.project(&view.demand));
            }
        }
        Err(Error::NoMatchingVertex)
    }

    fn check_side(&self, j: usize, side: &SequenceTuple) -> Result<()> {
        let view = self.sn.view(j)?;
        if side.len() != self.n || side.width() != view.side.len() {
            return Err(Error::InvalidSequence(format!(
                "side sequence is {}x{}, decoder {} expects {}x{}",
                side.len(),
                side.width(),
                j + 1,
                self.n,
                view.side.len()
            )));
        }
        side.check(&view.side_alphabet)
    }

    fn expect_mode(&self, mode: CodeMode) -> Result<()> {
        if self.mode != mode {
            return Err(Error::InvalidMode(format!(
                "codebook is {}, operation needs {}",
                self.mode, mode
            )));
        }
        Ok(())
    }
}

/// True when no codeword in the list is a proper or equal prefix of another.
pub fn is_prefix_free(words: &[BitString]) -> bool {
    let mut sorted: Vec<&BitString> = words.iter().collect();
    sorted.sort();
    sorted.dedup_by(|a, b| a == b);
    if sorted.len() != words.len() {
        return false;
    }
    // in lexicographic order a prefix sorts immediately before some word it
    // prefixes, so checking neighbors suffices
    sorted.windows(2).all(|w| !w[0].is_prefix_of(w[1]))
}

impl Codebook {
    pub(crate) fn cached_coloring(&self, t: usize) -> Option<&Arc<TypeColoring>> {
        self.colorings[t].get()
    }
}
