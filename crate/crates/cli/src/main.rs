mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gcd_core::analysis::{AnalysisReport, TypeTable};
use gcd_core::codec::format::{
    load_codebook, messages_to_bytes, parse_messages, read_codewords, save_codebook,
    write_codewords, Codewords,
};
use gcd_core::codec::{BitReader, BitString, CodeMode, Codebook};
use gcd_core::network::rf_rate;
use gcd_core::simulate::{self, simulate};
use gcd_core::{Rate, SequenceTuple, DEFAULT_CAP};
use num_traits::ToPrimitive;

use config::{parse_config, parse_lengths, parse_rates, ConfigError, RunConfig};

#[derive(Parser)]
#[command(name = "gcd", version, about = "Universal codes for generalized complementary delivery networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the optimal rates R_f and R_v of the configured source
    Rate(Common),
    /// Build a codebook file
    Build {
        #[command(flatten)]
        common: Common,
        /// Rate for FF codebooks (defaults to the first configured rate)
        #[arg(long)]
        rate: Option<String>,
    },
    /// Encode a message file with a codebook
    Encode {
        #[arg(long)]
        codebook: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a codeword file at one decoder
    Decode {
        #[arg(long)]
        codebook: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Side information: either the decoder's side sources per symbol or
        /// whole message blocks
        #[arg(long)]
        side: PathBuf,
        /// Decoder number, starting at 1
        #[arg(long)]
        decoder: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact analysis over a grid of block lengths and rates, as CSV
    Analyze(Common),
    /// Seeded Monte Carlo run of a code, as CSV
    Simulate(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    coloring: Option<String>,
    /// Block lengths, comma separated
    #[arg(long)]
    n: Option<String>,
    /// Rates, comma separated
    #[arg(long = "rate-grid")]
    rate_grid: Option<String>,
}

enum CliError {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(format!("config error: {e}"))
    }
}

impl From<gcd_core::Error> for CliError {
    fn from(e: gcd_core::Error) -> Self {
        match e {
            gcd_core::Error::ConfigurationTooLarge { .. } => CliError::Runtime(format!(
                "{e}; lower the block length or use a smaller alphabet"
            )),
            e => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn config_err(field: &str, message: impl Into<String>) -> CliError {
    CliError::from(ConfigError {
        line: None,
        field: field.to_string(),
        message: message.into(),
    })
}

/// Reads the config file and applies command-line overrides.
fn load(common: &Common) -> CliResult<RunConfig> {
    let text = fs::read_to_string(&common.config).map_err(|e| {
        CliError::Config(format!("cannot read {}: {e}", common.config.display()))
    })?;
    let mut cfg = parse_config(&text)?;
    if let Some(s) = &common.n {
        cfg.n = parse_lengths(s).ok_or_else(|| config_err("--n", "expected positive integers"))?;
    }
    if let Some(s) = &common.rate_grid {
        cfg.rates = parse_rates(s).ok_or_else(|| config_err("--rate-grid", "expected rates"))?;
    }
    if let Some(s) = &common.mode {
        cfg.mode = s.parse().map_err(|e: gcd_core::Error| config_err("--mode", e.to_string()))?;
    }
    if let Some(s) = &common.coloring {
        cfg.coloring = s
            .parse()
            .map_err(|e: gcd_core::Error| config_err("--coloring", e.to_string()))?;
        cfg.coloring
            .check(&cfg.network)
            .map_err(|e| config_err("--coloring", e.to_string()))?;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_rate(common: &Common) -> CliResult<()> {
    let cfg = load(common)?;
    let p = cfg.distribution()?;
    let r = rf_rate(p, &cfg.network);
    emit(common.out.as_deref(), &format!("R_f = {r:.6}\nR_v = {r:.6}\n"))
}

fn build_from(cfg: &RunConfig, rate: Option<Rate>) -> CliResult<Codebook> {
    let n = cfg.first_n()?;
    if cfg.mode == CodeMode::Ff && rate.is_none() {
        return Err(config_err("rate", "a fixed-length code needs a rate"));
    }
    Ok(Codebook::build(n, rate, cfg.network.clone(), cfg.mode, cfg.coloring, DEFAULT_CAP)?)
}

fn cmd_build(common: &Common, rate: Option<&str>) -> CliResult<()> {
    let cfg = load(common)?;
    let rate = match rate {
        Some(s) => Some(s.parse::<Rate>().map_err(|e| config_err("--rate", e.to_string()))?),
        None => cfg.first_rate(),
    };
    let out = common
        .out
        .as_deref()
        .ok_or_else(|| config_err("--out", "build needs an output path"))?;
    let cb = build_from(&cfg, rate)?;
    save_codebook(&cb, out)?;
    let admissible = cb.admissible_count();
    match cb.mode() {
        CodeMode::Ff => eprintln!(
            "built ff codebook: n={} types={} admissible={} C_max={} M_n={} rate={:.6}",
            cb.n(),
            cb.types().len(),
            admissible,
            cb.c_max(),
            cb.m_n(),
            cb.ff_rate()
        ),
        CodeMode::Fv => eprintln!(
            "built fv codebook: n={} types={} type_width={}",
            cb.n(),
            cb.types().len(),
            cb.type_width()
        ),
    }
    Ok(())
}

fn cmd_encode(codebook: &Path, input: &Path, out: &Path) -> CliResult<()> {
    let cb = load_codebook(codebook, DEFAULT_CAP)?;
    let width = cb.network().alphabet().n_sources();
    let blocks = parse_messages(&fs::read(input)?, cb.n(), width)?;
    let mut declared = 0usize;
    let words = match cb.mode() {
        CodeMode::Ff => {
            let mut ws = Vec::with_capacity(blocks.len());
            for b in &blocks {
                let w = cb.encode_ff(b)?;
                declared += usize::from(w.declared_error);
                ws.push(w.index);
            }
            Codewords::Ff(ws)
        }
        CodeMode::Fv => {
            let mut stream = BitString::new();
            for b in &blocks {
                stream.extend(&cb.encode_fv(b)?);
            }
            Codewords::Fv {
                count: blocks.len() as u32,
                stream,
            }
        }
    };
    let mut buf = Vec::new();
    write_codewords(cb.n(), &words, &mut buf)?;
    fs::write(out, buf)?;
    eprintln!("encoded {} blocks, declared errors: {declared}", blocks.len());
    Ok(())
}

fn cmd_decode(codebook: &Path, input: &Path, side: &Path, decoder: usize, out: &Path) -> CliResult<()> {
    let cb = load_codebook(codebook, DEFAULT_CAP)?;
    let sn = cb.network();
    if decoder == 0 || decoder > sn.n_decoders() {
        return Err(config_err(
            "--decoder",
            format!("must be between 1 and {}", sn.n_decoders()),
        ));
    }
    let j = decoder - 1;
    let view = sn.view(j)?;
    let (n, words) = read_codewords(&mut fs::read(input)?.as_slice())?;
    if n != cb.n() || words.mode() != cb.mode() {
        return Err(CliError::Runtime(
            "codeword file was not produced with this codebook".into(),
        ));
    }
    let side_bytes = fs::read(side)?;
    let full = sn.alphabet().n_sources();
    let sides: Vec<SequenceTuple> = if side_bytes.len() == words.len() * n * full {
        parse_messages(&side_bytes, n, full)?
            .iter()
            .map(|b| b.project(&view.side))
            .collect()
    } else {
        parse_messages(&side_bytes, n, view.side.len())?
    };
    if sides.len() != words.len() {
        return Err(CliError::Runtime(format!(
            "{} side blocks for {} codewords",
            sides.len(),
            words.len()
        )));
    }

    let mut decoded = Vec::with_capacity(sides.len());
    let mut declared = 0usize;
    match &words {
        Codewords::Ff(ws) => {
            for (w, s) in ws.iter().zip(&sides) {
                let d = cb.decode_ff(j, *w, s)?;
                declared += usize::from(d.declared_error);
                decoded.push(d.sequence);
            }
        }
        Codewords::Fv { stream, .. } => {
            let mut reader = BitReader::new(stream);
            for s in &sides {
                decoded.push(cb.decode_fv_from(j, &mut reader, s)?);
            }
            if reader.remaining() >= 8 {
                return Err(CliError::Runtime("trailing data in codeword stream".into()));
            }
        }
    }

    // reassemble whole blocks in source order
    let blocks: Vec<SequenceTuple> = decoded
        .iter()
        .zip(&sides)
        .map(|(d, s)| {
            let mut symbols = Vec::with_capacity(n * full);
            for t in 0..n {
                let (mut di, mut si) = (0, 0);
                for src in 0..full {
                    if view.demand.contains(src) {
                        symbols.push(d.symbol(t)[di]);
                        di += 1;
                    } else {
                        symbols.push(s.symbol(t)[si]);
                        si += 1;
                    }
                }
            }
            SequenceTuple::new(full, symbols)
        })
        .collect::<Result<_, _>>()?;
    fs::write(out, messages_to_bytes(&blocks))?;
    eprintln!(
        "decoded {} blocks at decoder {decoder}, declared errors: {declared}",
        blocks.len()
    );
    Ok(())
}

fn cmd_analyze(common: &Common) -> CliResult<()> {
    let cfg = load(common)?;
    let p = cfg.distribution()?;
    let mut ns = cfg.n.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut rates = cfg.rates.clone();
    rates.sort();
    rates.dedup();
    let mut csv = AnalysisReport::csv_header();
    csv.push('\n');
    for &n in &ns {
        if rates.is_empty() {
            break;
        }
        let table = TypeTable::new(p, n, &cfg.network, DEFAULT_CAP)?;
        for r in &rates {
            csv.push_str(&table.report(r, cfg.coloring)?.csv_row());
            csv.push('\n');
        }
    }
    emit(common.out.as_deref(), &csv)
}

fn cmd_simulate(common: &Common) -> CliResult<()> {
    let cfg = load(common)?;
    let p = cfg.distribution()?;
    if cfg.trials == 0 {
        return Err(config_err("trials", "simulation needs at least one trial"));
    }
    let rate = match cfg.mode {
        CodeMode::Ff => cfg.first_rate(),
        CodeMode::Fv => None,
    };
    let cb = build_from(&cfg, rate.clone())?;
    let tally = simulate(&cb, p, cfg.trials, cfg.seed)?;
    let mut csv = String::from(simulate::CSV_HEADER);
    csv.push('\n');
    for row in simulate::csv_rows(&cb, cfg.seed, &tally) {
        csv.push_str(&row);
        csv.push('\n');
    }
    emit(common.out.as_deref(), &csv)?;
    if let Some(r) = rate {
        let table = TypeTable::new(p, cb.n(), &cfg.network, DEFAULT_CAP)?;
        let exact = table.exact_error_prob(&r).to_f64().unwrap_or(f64::NAN);
        let trials = tally.trials as f64;
        let sigma = (exact * (1.0 - exact) / trials).sqrt();
        let observed = tally.declared_errors as f64 / trials;
        eprintln!(
            "declared-error rate {observed:.6e}, exact {exact:.6e}, deviation {:.2} sigma",
            if sigma > 0.0 { (observed - exact).abs() / sigma } else { 0.0 }
        );
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Rate(c) => cmd_rate(c),
        Command::Build { common, rate } => cmd_build(common, rate.as_deref()),
        Command::Encode { codebook, input, out } => cmd_encode(codebook, input, out),
        Command::Decode {
            codebook,
            input,
            side,
            decoder,
            out,
        } => cmd_decode(codebook, input, side, *decoder, out),
        Command::Analyze(c) => cmd_analyze(c),
        Command::Simulate(c) => cmd_simulate(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
