//! Exact performance of the codes by type enumeration, and every finite-n
//! bound of the coding theorems evaluated with exact rationals.
//!
//! The FF decoder declares an error exactly when the block's type is not
//! admissible, and then every decoder fails at once. The declared-error
//! probability `P_err = Σ_{Q ∉ 𝒯_n(R)} P(T_Q)` is therefore the per-decoder
//! error probability of every decoder, and the theorems' `Σ_j e_n^(j)` is
//! `N_d · P_err`.
//!
//! Bounds are kept as exact rationals where the expression allows it and
//! compared with exact probabilities directly. Only the underflow converse
//! involves `2^{nR}` for a fractional `nR`; it is evaluated in floating point.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bigmath::{ceil_log2, log2_biguint, log2_ratio, ratio_int};
use crate::graphcode::ColoringMode;
use crate::network::{rf_rate, SourceNetwork};
use crate::rate::{exp2_n_epsilon, Rate, Threshold};
use crate::typekit::{
    divergence, enumerate_types, exp2_n_cond_entropy, exp2_neg_n_divergence, shell_size,
    type_count, type_probability_exact, Distribution, JointType,
};
use crate::{Error, Result};

/// Per-type quantities shared by every computation in this module.
#[derive(Clone, Debug)]
pub struct TypeRow {
    pub q: JointType,
    /// `P(T_Q)`.
    pub prob: BigRational,
    /// `2^{-nD(Q‖P)}`.
    pub neg_div: BigRational,
    /// `D(Q‖P)` in bits.
    pub div: f64,
    /// `2^{nH(V_j|Q_j)}` per decoder.
    pub cond: Vec<BigRational>,
    /// V-shell size per decoder.
    pub shells: Vec<BigUint>,
}

impl TypeRow {
    fn admitted(&self, t: &Threshold) -> bool {
        self.cond.iter().all(|w| t.admits(w))
    }

    fn cond_max(&self) -> &BigRational {
        self.cond.iter().max().expect("at least one decoder")
    }

    pub fn budget(&self, mode: ColoringMode) -> BigUint {
        match mode {
            ColoringMode::Greedy => {
                self.shells.iter().fold(BigUint::one(), |acc, s| acc + s - 1u32)
            }
            ColoringMode::Bipartite => self.shells.iter().max().cloned().unwrap_or_default(),
        }
    }
}

/// All types of one block length with their probabilities under `P`.
#[derive(Clone, Debug)]
pub struct TypeTable {
    n: usize,
    sn: SourceNetwork,
    p: Distribution,
    rows: Vec<TypeRow>,
}

impl TypeTable {
    pub fn new(p: &Distribution, n: usize, sn: &SourceNetwork, cap: u64) -> Result<Self> {
        if p.joint_size() != sn.alphabet().joint_size() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities for a joint alphabet of {} letters",
                p.joint_size(),
                sn.alphabet().joint_size()
            )));
        }
        if n == 0 {
            return Err(Error::OutOfRange("block length must be at least 1".into()));
        }
        let rows = enumerate_types(n, sn.alphabet(), cap)?
            .into_par_iter()
            .map(|q| {
                let cond = (0..sn.n_decoders())
                    .map(|j| exp2_n_cond_entropy(&q, sn, j))
                    .collect::<Result<Vec<_>>>()?;
                let shells = (0..sn.n_decoders())
                    .map(|j| shell_size(&q, sn, j))
                    .collect::<Result<Vec<_>>>()?;
                Ok(TypeRow {
                    prob: type_probability_exact(&q, p),
                    neg_div: exp2_neg_n_divergence(&q, p),
                    div: divergence(&q, p),
                    cond,
                    shells,
                    q,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TypeTable {
            n,
            sn: sn.clone(),
            p: p.clone(),
            rows,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[TypeRow] {
        &self.rows
    }

    pub fn network(&self) -> &SourceNetwork {
        &self.sn
    }

    pub fn distribution(&self) -> &Distribution {
        &self.p
    }

    fn k(&self) -> usize {
        self.sn.alphabet().joint_size()
    }

    /// `2^{nε_n(N)}` as a rational.
    fn eps(&self, big_n: u64) -> BigRational {
        ratio_int(exp2_n_epsilon(self.n, self.k(), big_n))
    }

    fn n_d(&self) -> u64 {
        self.sn.n_decoders() as u64
    }

    fn sum_prob(&self, keep: impl Fn(&TypeRow) -> bool + Sync) -> BigRational {
        self.rows
            .par_iter()
            .filter(|r| keep(r))
            .map(|r| r.prob.clone())
            .reduce(BigRational::zero, |a, b| a + b)
    }

    fn max_neg_div(&self, keep: impl Fn(&TypeRow) -> bool) -> BigRational {
        self.rows
            .iter()
            .filter(|r| keep(r))
            .map(|r| &r.neg_div)
            .max()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Declared-error probability of the FF code at rate `R`.
    pub fn exact_error_prob(&self, rate: &Rate) -> BigRational {
        let t = Threshold::for_rate(self.n, rate);
        self.sum_prob(|r| !r.admitted(&t))
    }

    /// `min_{Q ∉ 𝒯_n(R)} D(Q‖P)`; `+inf` when every type is admissible.
    pub fn error_exponent(&self, rate: &Rate) -> f64 {
        let t = Threshold::for_rate(self.n, rate);
        self.rows
            .iter()
            .filter(|r| !r.admitted(&t))
            .map(|r| r.div)
            .fold(f64::INFINITY, f64::min)
    }

    /// Closed-form FF layout: `(C_max, M_n)` for rate `R`.
    pub fn ff_layout(&self, rate: &Rate, mode: ColoringMode) -> Result<(BigUint, BigUint)> {
        mode.check(&self.sn)?;
        let t = Threshold::for_rate(self.n, rate);
        let c_max = self
            .rows
            .iter()
            .filter(|r| r.admitted(&t))
            .map(|r| r.budget(mode))
            .max()
            .unwrap_or_default();
        let m_n = BigUint::from(self.rows.len()) * &c_max + 1u32;
        Ok((c_max, m_n))
    }

    /// FV codeword length of each type: `⌈log2 |𝒫_n|⌉ + ⌈log2 B(Q)⌉` bits.
    pub fn fv_lengths(&self, mode: ColoringMode) -> Result<Vec<u64>> {
        mode.check(&self.sn)?;
        let w_t = ceil_log2(&type_count(self.n, self.k()));
        Ok(self
            .rows
            .iter()
            .map(|r| w_t + ceil_log2(&r.budget(mode)))
            .collect())
    }

    /// `E[l(φ_n(X^n))] / n`, exactly.
    pub fn fv_expected_length(&self, mode: ColoringMode) -> Result<BigRational> {
        let lengths = self.fv_lengths(mode)?;
        let total: BigRational = self
            .rows
            .iter()
            .zip(&lengths)
            .map(|(r, &l)| &r.prob * BigRational::from_integer(l.into()))
            .sum();
        Ok(total / BigRational::from_integer(self.n.into()))
    }

    /// Exact `Pr{l > nR}` and `Pr{l < nR}`.
    pub fn fv_overflow_underflow(
        &self,
        rate: &Rate,
        mode: ColoringMode,
    ) -> Result<(BigRational, BigRational)> {
        let lengths = self.fv_lengths(mode)?;
        let nr = rate.as_ratio() * BigRational::from_integer(self.n.into());
        let mut over = BigRational::zero();
        let mut under = BigRational::zero();
        for (r, &l) in self.rows.iter().zip(&lengths) {
            let l = BigRational::from_integer(l.into());
            if l > nr {
                over += &r.prob;
            } else if l < nr {
                under += &r.prob;
            }
        }
        Ok((over, under))
    }

    pub fn fv_stats(&self, rate: &Rate, mode: ColoringMode) -> Result<FvStats> {
        let (over, under) = self.fv_overflow_underflow(rate, mode)?;
        Ok(FvStats {
            expected_length_per_symbol: self.fv_expected_length(mode)?,
            overflow_exact: over,
            underflow_exact: under,
        })
    }

    /// Direct FF bound on `Σ_j e_j`: `2^{nε_n(N_d)} · max_{𝒯_n^c(R)} 2^{-nD}`.
    pub fn bound_direct_ff(&self, rate: &Rate) -> Bound {
        let t = Threshold::for_rate(self.n, rate);
        Bound::exact(self.eps(self.n_d()) * self.max_neg_div(|r| !r.admitted(&t)))
    }

    /// Converse FF bound at the code rate `log2(M_n)/n`:
    /// `2^{-nε_n(2)} · max_{𝒯_n^c(R + ε_n(2))} 2^{-nD}`.
    pub fn bound_converse_ff(&self, m_n: &BigUint) -> Bound {
        let t = Threshold::from_count(m_n.clone()).scaled(&self.eps(2));
        Bound::exact(self.max_neg_div(|r| !r.admitted(&t)) / self.eps(2))
    }

    /// Direct bound on correct decoding: `2^{-nε_n(1)} · max_{𝒯_n(R)} 2^{-nD}`.
    pub fn bound_correct_direct(&self, rate: &Rate) -> Bound {
        let t = Threshold::for_rate(self.n, rate);
        Bound::exact(self.max_neg_div(|r| r.admitted(&t)) / self.eps(1))
    }

    /// Converse bound on correct decoding at the code rate:
    /// `2^{nε_n(1)} · max_Q min(1, M_n 2^{nε_n(1)} / max_j 2^{nH(V_j|Q_j)}) 2^{-nD}`.
    pub fn bound_correct_converse(&self, m_n: &BigUint) -> Bound {
        let e1 = self.eps(1);
        let scale = ratio_int(m_n.clone()) * &e1;
        let best = self
            .rows
            .iter()
            .map(|r| {
                let clip = (&scale / r.cond_max()).min(BigRational::one());
                clip * &r.neg_div
            })
            .max()
            .unwrap_or_else(BigRational::zero);
        Bound::exact(e1 * best)
    }

    /// Overflow direct bound: `2^{nε_n(N_d)} · max_{𝒯_n^c(R − ε_n(N_d))} 2^{-nD}`.
    pub fn bound_overflow_direct(&self, rate: &Rate) -> Bound {
        let e = self.eps(self.n_d());
        let t = Threshold::for_rate(self.n, rate).scaled(&e.recip());
        Bound::exact(e * self.max_neg_div(|r| !r.admitted(&t)))
    }

    /// Overflow converse bound: `2^{-nε_n(2)} · max_{𝒯_n^c(R + ε_n(2))} 2^{-nD}`.
    pub fn bound_overflow_converse(&self, rate: &Rate) -> Bound {
        let e = self.eps(2);
        let t = Threshold::for_rate(self.n, rate).scaled(&e);
        Bound::exact(self.max_neg_div(|r| !r.admitted(&t)) / e)
    }

    /// Underflow direct bound: `2^{-nε_n(1)} · max_{𝒯_n(R − ε_n(N_d))} 2^{-nD}`.
    pub fn bound_underflow_direct(&self, rate: &Rate) -> Bound {
        let t = Threshold::for_rate(self.n, rate).scaled(&self.eps(self.n_d()).recip());
        Bound::exact(self.max_neg_div(|r| r.admitted(&t)) / self.eps(1))
    }

    /// Underflow converse bound:
    /// `2^{nε_n(1)} · max_Q min(1, 2^{nR} 2^{nε_n(1)} / max_j 2^{nH(V_j|Q_j)}) 2^{-nD}`,
    /// in floating point.
    pub fn bound_underflow_converse(&self, rate: &Rate) -> Bound {
        let le1 = log2_ratio(&self.eps(1));
        let nr = rate.to_f64() * self.n as f64;
        let best = self
            .rows
            .iter()
            .map(|r| (nr + le1 - log2_ratio(r.cond_max())).min(0.0) + log2_ratio(&r.neg_div))
            .fold(f64::NEG_INFINITY, f64::max);
        Bound::from_log2(le1 + best)
    }

    pub fn report(&self, rate: &Rate, mode: ColoringMode) -> Result<AnalysisReport> {
        let (c_max, m_n) = self.ff_layout(rate, mode)?;
        let exact_error = self.exact_error_prob(rate);
        let exact_correct = BigRational::one() - &exact_error;
        Ok(AnalysisReport {
            n: self.n,
            rate: rate.clone(),
            coloring: mode,
            n_decoders: self.sn.n_decoders(),
            rf: rf_rate(&self.p, &self.sn),
            code_rate: log2_biguint(&m_n) / self.n as f64,
            c_max,
            exponent: self.error_exponent(rate),
            bounds: Bounds {
                direct_ff: self.bound_direct_ff(rate),
                converse_ff: self.bound_converse_ff(&m_n),
                correct_direct: self.bound_correct_direct(rate),
                correct_converse: self.bound_correct_converse(&m_n),
                overflow_direct: self.bound_overflow_direct(rate),
                overflow_converse: self.bound_overflow_converse(rate),
                underflow_direct: self.bound_underflow_direct(rate),
                underflow_converse: self.bound_underflow_converse(rate),
            },
            fv: self.fv_stats(rate, mode)?,
            m_n,
            exact_error,
            exact_correct,
        })
    }
}

/// One evaluated bound on a probability.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    /// Exact value when the expression is rational.
    pub exact: Option<BigRational>,
    pub log2: f64,
    /// The value is `>= 1` or `<= 0`, so it says nothing about a probability.
    pub vacuous: bool,
}

impl Bound {
    fn exact(v: BigRational) -> Self {
        let vacuous = v.is_zero() || v >= BigRational::one();
        Bound {
            log2: log2_ratio(&v),
            exact: Some(v),
            vacuous,
        }
    }

    fn from_log2(log2: f64) -> Self {
        Bound {
            exact: None,
            log2,
            vacuous: log2 >= 0.0 || log2 == f64::NEG_INFINITY,
        }
    }

    /// `p <= bound`, exactly when possible.
    pub fn dominates(&self, p: &BigRational) -> bool {
        match &self.exact {
            Some(b) => p <= b,
            None => log2_ratio(p) <= self.log2 + 1e-9,
        }
    }

    /// `p >= bound`, exactly when possible.
    pub fn is_dominated_by(&self, p: &BigRational) -> bool {
        match &self.exact {
            Some(b) => p >= b,
            None => log2_ratio(p) + 1e-9 >= self.log2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bounds {
    pub direct_ff: Bound,
    pub converse_ff: Bound,
    pub correct_direct: Bound,
    pub correct_converse: Bound,
    pub overflow_direct: Bound,
    pub overflow_converse: Bound,
    pub underflow_direct: Bound,
    pub underflow_converse: Bound,
}

impl Bounds {
    pub const NAMES: [&'static str; 8] = [
        "direct_ff",
        "converse_ff",
        "correct_direct",
        "correct_converse",
        "overflow_direct",
        "overflow_converse",
        "underflow_direct",
        "underflow_converse",
    ];

    pub fn all(&self) -> [&Bound; 8] {
        [
            &self.direct_ff,
            &self.converse_ff,
            &self.correct_direct,
            &self.correct_converse,
            &self.overflow_direct,
            &self.overflow_converse,
            &self.underflow_direct,
            &self.underflow_converse,
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FvStats {
    pub expected_length_per_symbol: BigRational,
    pub overflow_exact: BigRational,
    pub underflow_exact: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub n: usize,
    pub rate: Rate,
    pub coloring: ColoringMode,
    pub n_decoders: usize,
    pub rf: f64,
    pub c_max: BigUint,
    pub m_n: BigUint,
    /// `(1/n) log2 M_n`.
    pub code_rate: f64,
    pub exact_error: BigRational,
    pub exact_correct: BigRational,
    pub exponent: f64,
    pub bounds: Bounds,
    pub fv: FvStats,
}

fn f(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl AnalysisReport {
    /// `Σ_j e_n^(j) = N_d · P_err`.
    pub fn error_sum(&self) -> BigRational {
        &self.exact_error * BigRational::from_integer(self.n_decoders.into())
    }

    /// `-(1/n) log2 P_err`.
    pub fn empirical_exponent(&self) -> f64 {
        -log2_ratio(&self.exact_error) / self.n as f64
    }

    pub fn csv_header() -> String {
        let mut cols: Vec<String> = [
            "n",
            "rate",
            "coloring",
            "rf",
            "code_rate",
            "exact_error",
            "exact_correct",
            "exponent",
            "neg_log_error_per_symbol",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        for name in Bounds::NAMES {
            cols.push(format!("{name}_log2"));
            cols.push(format!("{name}_vacuous"));
        }
        cols.extend(
            ["fv_expected_length", "fv_overflow", "fv_underflow"]
                .iter()
                .map(|s| s.to_string()),
        );
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cols = vec![
            self.n.to_string(),
            format!("{:.6}", self.rate.to_f64()),
            self.coloring.to_string(),
            format!("{:.6}", self.rf),
            format!("{:.6}", self.code_rate),
            format!("{:.6e}", f(&self.exact_error)),
            format!("{:.6e}", f(&self.exact_correct)),
            format!("{:.6}", self.exponent),
            format!("{:.6}", self.empirical_exponent()),
        ];
        for b in self.bounds.all() {
            cols.push(format!("{:.6}", b.log2));
            cols.push(b.vacuous.to_string());
        }
        cols.push(format!("{:.6}", f(&self.fv.expected_length_per_symbol)));
        cols.push(format!("{:.6e}", f(&self.fv.overflow_exact)));
        cols.push(format!("{:.6e}", f(&self.fv.underflow_exact)));
        cols.join(",")
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f_: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f_, "n = {}, R = {} ({:.6} bits), coloring = {}", self.n, self.rate, self.rate.to_f64(), self.coloring)?;
        writeln!(f_, "optimal rate R_f = R_v = {:.6}", self.rf)?;
        writeln!(f_, "FF code: C_max = {}, M_n = {}, (1/n) log M_n = {:.6}", self.c_max, self.m_n, self.code_rate)?;
        writeln!(f_, "declared-error probability = {:.6e}", f(&self.exact_error))?;
        writeln!(f_, "correct-decoding probability = {:.6e}", f(&self.exact_correct))?;
        writeln!(f_, "error exponent (min D over inadmissible types) = {:.6}", self.exponent)?;
        writeln!(f_, "-(1/n) log P_err = {:.6}", self.empirical_exponent())?;
        writeln!(f_, "bounds (log2):")?;
        for (name, b) in Bounds::NAMES.iter().zip(self.bounds.all()) {
            writeln!(f_, "  {name:<20} {:>12.6}{}", b.log2, if b.vacuous { "  (vacuous)" } else { "" })?;
        }
        writeln!(f_, "FV expected length per symbol = {:.6}", f(&self.fv.expected_length_per_symbol))?;
        writeln!(f_, "FV overflow Pr{{l > nR}} = {:.6e}", f(&self.fv.overflow_exact))?;
        write!(f_, "FV underflow Pr{{l < nR}} = {:.6e}", f(&self.fv.underflow_exact))
    }
}

pub fn exact_error_prob(
    p: &Distribution,
    n: usize,
    rate: &Rate,
    sn: &SourceNetwork,
    cap: u64,
) -> Result<BigRational> {
    Ok(TypeTable::new(p, n, sn, cap)?.exact_error_prob(rate))
}

pub fn error_exponent(
    p: &Distribution,
    n: usize,
    rate: &Rate,
    sn: &SourceNetwork,
    cap: u64,
) -> Result<f64> {
    Ok(TypeTable::new(p, n, sn, cap)?.error_exponent(rate))
}

pub fn fv_length_stats(
    p: &Distribution,
    n: usize,
    rate: &Rate,
    sn: &SourceNetwork,
    mode: ColoringMode,
    cap: u64,
) -> Result<FvStats> {
    TypeTable::new(p, n, sn, cap)?.fv_stats(rate, mode)
}

pub fn full_report(
    p: &Distribution,
    n: usize,
    rate: &Rate,
    sn: &SourceNetwork,
    mode: ColoringMode,
    cap: u64,
) -> Result<AnalysisReport> {
    TypeTable::new(p, n, sn, cap)?.report(rate, mode)
}
