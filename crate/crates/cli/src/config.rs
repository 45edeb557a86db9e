//! Run configuration files.
//!
//! ```text
//! # comments start with '#'
//! alphabet = 2 2            # alphabet size of each source
//! demands = {1} {2}         # one demand set per decoder, 1-based sources
//! n = 4 8 12                # block lengths (build/encode use the first)
//! rate = 0.6 0.8 1          # rates: decimals or p/q (build/encode use the first)
//! mode = ff                 # ff | fv
//! coloring = bipartite      # greedy | bipartite
//! seed = 42
//! trials = 100000
//!
//! [distribution]
//! 0 0 = 89/200              # one letter per source, then its probability
//! 0 1 = 11/200
//! 1 0 = 11/200
//! 1 1 = 89/200
//! ```
//!
//! Letters missing from the distribution table have probability zero.

use std::collections::HashSet;
use std::fmt;

use gcd_core::codec::CodeMode;
use gcd_core::graphcode::ColoringMode;
use gcd_core::rate::parse_nonneg_rational;
use gcd_core::{AlphabetSpec, Distribution, NetworkSpec, Rate, SourceNetwork, SourceSet};
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}, `{}`: {}", self.field, self.message),
            None => write!(f, "`{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: Option<usize>, field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub network: SourceNetwork,
    pub distribution: Option<Distribution>,
    pub n: Vec<usize>,
    pub rates: Vec<Rate>,
    pub mode: CodeMode,
    pub coloring: ColoringMode,
    pub seed: u64,
    pub trials: u64,
}

impl RunConfig {
    pub fn first_n(&self) -> Result<usize, ConfigError> {
        self.n
            .first()
            .copied()
            .ok_or_else(|| err(None, "n", "no block length given"))
    }

    pub fn first_rate(&self) -> Option<Rate> {
        self.rates.first().cloned()
    }

    pub fn distribution(&self) -> Result<&Distribution, ConfigError> {
        self.distribution
            .as_ref()
            .ok_or_else(|| err(None, "distribution", "this command needs a [distribution] table"))
    }
}

pub fn parse_list<T>(s: &str, one: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(one)
        .collect()
}

pub fn parse_rates(s: &str) -> Option<Vec<Rate>> {
    parse_list(s, |t| t.parse::<Rate>().ok())
}

pub fn parse_lengths(s: &str) -> Option<Vec<usize>> {
    parse_list(s, |t| t.parse::<usize>().ok().filter(|&n| n >= 1))
}

fn parse_demands(s: &str) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let open = rest.strip_prefix('{')?;
        let close = open.find('}')?;
        let inner = &open[..close];
        out.push(parse_list(inner, |t| t.parse::<usize>().ok())?);
        rest = open[close + 1..].trim_start_matches([',', ' ', '\t']);
    }
    Some(out)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut alphabet: Option<(usize, Vec<usize>)> = None;
    let mut demands: Option<(usize, Vec<Vec<usize>>)> = None;
    let mut n = Vec::new();
    let mut rates = Vec::new();
    let mut mode = CodeMode::Ff;
    let mut coloring = ColoringMode::Greedy;
    let mut seed = 0u64;
    let mut trials = 0u64;
    let mut dist_rows: Vec<(usize, Vec<usize>, BigRational)> = Vec::new();
    let mut in_distribution = false;
    let mut seen = HashSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if line == "[distribution]" {
                in_distribution = true;
                continue;
            }
            return Err(err(Some(line_no), line, "unknown section"));
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(Some(line_no), line, "expected `key = value`"));
        };
        let (key, value) = (key.trim(), value.trim());
        let at = Some(line_no);
        if in_distribution {
            let letters = parse_list(key, |t| t.parse::<usize>().ok())
                .ok_or_else(|| err(at, key, "letters must be nonnegative integers"))?;
            let p = parse_nonneg_rational(value)
                .ok_or_else(|| err(at, key, format!("bad probability `{value}`")))?;
            dist_rows.push((line_no, letters, p));
            continue;
        }
        if !seen.insert(key.to_string()) {
            return Err(err(at, key, "given twice"));
        }
        match key {
            "alphabet" => {
                let sizes = parse_list(value, |t| t.parse::<usize>().ok())
                    .ok_or_else(|| err(at, key, "expected alphabet sizes"))?;
                alphabet = Some((line_no, sizes));
            }
            "demands" => {
                let d = parse_demands(value)
                    .ok_or_else(|| err(at, key, "expected sets such as `{1} {2,3}`"))?;
                demands = Some((line_no, d));
            }
            "n" => n = parse_lengths(value).ok_or_else(|| err(at, key, "expected positive integers"))?,
            "rate" => rates = parse_rates(value).ok_or_else(|| err(at, key, "expected rates such as `0.8` or `4/5`"))?,
            "mode" => mode = value.parse().map_err(|e: gcd_core::Error| err(at, key, e.to_string()))?,
            "coloring" => coloring = value.parse().map_err(|e: gcd_core::Error| err(at, key, e.to_string()))?,
            "seed" => seed = value.parse().map_err(|_| err(at, key, "expected an unsigned 64-bit integer"))?,
            "trials" => trials = value.parse().map_err(|_| err(at, key, "expected a nonnegative integer"))?,
            _ => return Err(err(at, key, "unknown key")),
        }
    }

    let (a_line, sizes) = alphabet.ok_or_else(|| err(None, "alphabet", "missing"))?;
    let a = AlphabetSpec::new(sizes).map_err(|e| err(Some(a_line), "alphabet", e.to_string()))?;
    let (d_line, demand_lists) = demands.ok_or_else(|| err(None, "demands", "missing"))?;
    let sets = demand_lists
        .iter()
        .map(|d| SourceSet::from_one_based(d))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| err(Some(d_line), "demands", e.to_string()))?;
    let spec = NetworkSpec::new(a.n_sources(), sets).map_err(|e| err(Some(d_line), "demands", e.to_string()))?;
    let network = SourceNetwork::new(a.clone(), spec).map_err(|e| err(Some(d_line), "demands", e.to_string()))?;
    coloring
        .check(&network)
        .map_err(|e| err(None, "coloring", e.to_string()))?;

    let distribution = if dist_rows.is_empty() {
        None
    } else {
        let mut probs = vec![BigRational::from_integer(0.into()); a.joint_size()];
        let mut filled = vec![false; a.joint_size()];
        for (line_no, letters, p) in dist_rows {
            let at = Some(line_no);
            if letters.len() != a.n_sources()
                || letters.iter().zip(a.sizes()).any(|(&l, &s)| l >= s)
            {
                return Err(err(at, "distribution", "letter tuple does not fit the alphabet"));
            }
            let bytes: Vec<u8> = letters.iter().map(|&l| l as u8).collect();
            let idx = a.joint_index(&bytes);
            if filled[idx] {
                return Err(err(at, "distribution", "letter tuple listed twice"));
            }
            filled[idx] = true;
            probs[idx] = p;
        }
        Some(
            Distribution::from_rationals(&a, probs)
                .map_err(|e| err(None, "distribution", e.to_string()))?,
        )
    };

    Ok(RunConfig {
        network,
        distribution,
        n,
        rates,
        mode,
        coloring,
        seed,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DSBS: &str = "\
alphabet = 2 2
demands = {1} {2}
n = 4 8
rate = 0.8, 3/5
coloring = bipartite
seed = 9

[distribution]
0 0 = 89/200
0 1 = 0.055
1 0 = 11/200
1 1 = 89/200
";

    #[test]
    fn parses_full_config() {
        let c = parse_config(DSBS).unwrap();
        assert_eq!(c.n, vec![4, 8]);
        assert_eq!(c.rates.len(), 2);
        assert_eq!(c.coloring, ColoringMode::Bipartite);
        assert_eq!(c.seed, 9);
        let p = c.distribution.unwrap();
        assert_eq!(p.probs()[1], BigRational::new(11.into(), 200.into()));
    }

    #[test]
    fn reports_line_numbers() {
        let bad = DSBS.replace("n = 4 8", "n = four");
        let e = parse_config(&bad).unwrap_err();
        assert_eq!(e.line, Some(3));
        assert_eq!(e.field, "n");
    }

    #[test]
    fn rejects_bad_network_and_distribution() {
        let e = parse_config(&DSBS.replace("{1} {2}", "{1} {1}")).unwrap_err();
        assert_eq!(e.field, "demands");
        let e = parse_config(&DSBS.replace("1 1 = 89/200", "1 1 = 1/2")).unwrap_err();
        assert_eq!(e.field, "distribution");
        let e = parse_config(&DSBS.replace("0 1 = 0.055", "0 2 = 0.055")).unwrap_err();
        assert_eq!(e.line, Some(10));
        let e = parse_config(&DSBS.replace("seed = 9", "colour = red")).unwrap_err();
        assert_eq!(e.message, "unknown key");
    }

    #[test]
    fn bipartite_needs_two_decoders() {
        let text = "alphabet = 2 2 2\ndemands = {1,2} {1,3} {2,3}\ncoloring = bipartite\n";
        assert_eq!(parse_config(text).unwrap_err().field, "coloring");
        let ok = text.replace("bipartite", "greedy");
        assert_eq!(parse_config(&ok).unwrap().network.n_decoders(), 3);
    }

    #[test]
    fn demand_syntax() {
        assert_eq!(parse_demands("{1} {2,3}").unwrap(), vec![vec![1], vec![2, 3]]);
        assert_eq!(parse_demands("{1},{2}").unwrap(), vec![vec![1], vec![2]]);
        assert!(parse_demands("1 2").is_none());
    }
}
