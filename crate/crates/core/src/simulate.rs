//! Seeded Monte Carlo runs of a built code.
//!
//! Trial `i` draws its block from `ChaCha8Rng` seeded with the run seed on
//! stream `i`, so each trial's randomness depends only on `(seed, i)` and
//! the totals do not depend on how trials are spread over threads.

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codec::{CodeMode, Codebook};
use crate::typekit::{Distribution, SequenceTuple};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimulationTally {
    pub trials: u64,
    /// FF blocks whose type was not admissible.
    pub declared_errors: u64,
    /// Per decoder, blocks whose demanded part was not reproduced.
    pub mismatches: Vec<u64>,
    /// Total FV codeword bits (zero for FF).
    pub total_bits: u64,
}

impl SimulationTally {
    fn merge(mut self, other: SimulationTally) -> SimulationTally {
        self.trials += other.trials;
        self.declared_errors += other.declared_errors;
        for (a, b) in self.mismatches.iter_mut().zip(other.mismatches) {
            *a += b;
        }
        self.total_bits += other.total_bits;
        self
    }
}

/// Draws one block of length `n` for trial `trial`.
pub fn draw_block(
    weights: &WeightedIndex<f64>,
    cb: &Codebook,
    seed: u64,
    trial: u64,
) -> SequenceTuple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let joint: Vec<usize> = (0..cb.n()).map(|_| weights.sample(&mut rng)).collect();
    SequenceTuple::from_joint(cb.network().alphabet(), &joint)
}

pub fn simulate(cb: &Codebook, p: &Distribution, trials: u64, seed: u64) -> Result<SimulationTally> {
    let sn = cb.network();
    if p.joint_size() != sn.alphabet().joint_size() {
        return Err(Error::InvalidDistribution(
            "distribution does not match the codebook alphabet".into(),
        ));
    }
    let weights = WeightedIndex::new(p.floats())
        .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    cb.color_all()?;
    let empty = SimulationTally {
        mismatches: vec![0; sn.n_decoders()],
        ..Default::default()
    };
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let x = draw_block(&weights, cb, seed, trial);
            let mut t = SimulationTally {
                trials: 1,
                mismatches: vec![0; sn.n_decoders()],
                ..Default::default()
            };
            match cb.mode() {
                CodeMode::Ff => {
                    let w = cb.encode_ff(&x)?;
                    t.declared_errors = u64::from(w.declared_error);
                    for (j, view) in sn.views().iter().enumerate() {
                        let d = cb.decode_ff(j, w.index, &x.project(&view.side))?;
                        t.mismatches[j] =
                            u64::from(d.declared_error || d.sequence != x.project(&view.demand));
                    }
                }
                CodeMode::Fv => {
                    let bits = cb.encode_fv(&x)?;
                    t.total_bits = bits.len() as u64;
                    for (j, view) in sn.views().iter().enumerate() {
                        let d = cb.decode_fv(j, &bits, &x.project(&view.side))?;
                        t.mismatches[j] = u64::from(d != x.project(&view.demand));
                    }
                }
            }
            Ok(t)
        })
        .try_reduce(|| empty.clone(), |a, b| Ok(a.merge(b)))
}

/// Wilson score interval at 95% for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

pub const CSV_HEADER: &str = "n,mode,coloring,rate,seed,trials,metric,count,estimate,ci95_low,ci95_high";

/// One CSV row per metric: the declared-error rate and each decoder's error rate.
pub fn csv_rows(cb: &Codebook, seed: u64, tally: &SimulationTally) -> Vec<String> {
    let rate = cb.rate().map(|r| format!("{:.6}", r.to_f64())).unwrap_or_default();
    let prefix = format!(
        "{},{},{},{},{},{}",
        cb.n(),
        cb.mode(),
        cb.coloring_mode(),
        rate,
        seed,
        tally.trials
    );
    let row = |metric: &str, count: u64| {
        let (lo, hi) = wilson_interval(count, tally.trials);
        let est = if tally.trials == 0 {
            0.0
        } else {
            count as f64 / tally.trials as f64
        };
        format!("{prefix},{metric},{count},{est:.6e},{lo:.6e},{hi:.6e}")
    };
    let mut rows = Vec::new();
    if cb.mode() == CodeMode::Ff {
        rows.push(row("declared_error", tally.declared_errors));
    }
    for (j, &m) in tally.mismatches.iter().enumerate() {
        rows.push(row(&format!("decoder_{}_error", j + 1), m));
    }
    if cb.mode() == CodeMode::Fv && tally.trials > 0 {
        let per_symbol = tally.total_bits as f64 / (tally.trials as f64 * cb.n() as f64);
        rows.push(format!("{prefix},bits_per_symbol,{},{per_symbol:.6},,", tally.total_bits));
    }
    rows
}
