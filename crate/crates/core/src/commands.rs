//! The `treepiece` command-line surface. Commands write to caller-supplied
//! streams so they can run in-process.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::io::{
    load_corpus_with, load_vocab, parse_corpus, save_vocab, CorpusOptions, LoadedCorpus,
};
use crate::lattice::{TokenizationResult, Tokenizer, DEFAULT_MAX_NODES};
use crate::rng::derive_seed;
use crate::trainer::{
    em_train, expand_vocab, generate_vocabulary_detailed, init_vocab, TrainConfig,
};
use crate::tree::Skeleton;
use crate::unit::{assemble, TreePieceUnit};
use crate::vocab::{Phase, Vocabulary};

/// Printed in place of a tokenization when a skeleton cannot be covered.
pub const OOV_SENTINEL: &str = "<OOV>";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "treepiece",
    version,
    about = "Subtree tokenizer for semantic-parse skeletons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a vocabulary: merges, EM on the simplex, placeholder expansion.
    Train(TrainArgs),
    /// Tokenize each logical form into tab-separated units.
    Tokenize(TokenizeArgs),
    /// Assemble lines of units back into skeletons.
    Detokenize(DetokenizeArgs),
    /// Units-per-skeleton and vocabulary statistics.
    Stats(StatsArgs),
    /// Share of corpus skeletons the vocabulary cannot cover.
    OovRate(StatsArgs),
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Column count of the corpus (1, 2 or 3); detected from tabs if omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub columns: Option<u8>,
    /// Skip malformed lines with a warning instead of failing.
    #[arg(long)]
    pub lenient: bool,
}

impl CorpusArgs {
    fn options(&self) -> CorpusOptions {
        CorpusOptions {
            columns: self.columns.map(usize::from),
            lenient: self.lenient,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training corpus (TSV, last column is the logical form).
    #[arg(long)]
    pub corpus: PathBuf,
    /// Where to write the vocabulary file.
    #[arg(long)]
    pub out: PathBuf,
    /// Upper bound on merge steps.
    #[arg(long, default_value_t = 600)]
    pub merges: usize,
    /// Maximum EM iterations; 0 skips EM.
    #[arg(long, default_value_t = 30)]
    pub em_iters: usize,
    /// Stop EM once the log-likelihood gains less than this.
    #[arg(long, default_value_t = 0.01)]
    pub em_eps: f64,
    /// Samples drawn per skeleton during expansion.
    #[arg(long, default_value_t = 10)]
    pub expand_samples: usize,
    /// Sharpness of the expansion sampler.
    #[arg(long, default_value_t = 0.15, value_parser = positive_f64)]
    pub expand_theta: f64,
    /// Write the bare vocabulary after EM without expansion.
    #[arg(long)]
    pub no_expand: bool,
    /// Seed for every random draw.
    #[arg(long, env = "TREEPIECE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Largest skeleton, in nodes, the lattice accepts (at most 32).
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    pub max_nodes: usize,
    #[command(flatten)]
    pub corpus_args: CorpusArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Viterbi,
    Sample,
}

#[derive(Debug, Args)]
pub struct TokenizeArgs {
    /// Vocabulary file written by `train`.
    #[arg(long)]
    pub vocab: PathBuf,
    /// Corpus or logical-form lines; standard input if omitted.
    #[arg(long, visible_alias = "corpus")]
    pub input: Option<PathBuf>,
    /// `viterbi` for the best tokenization, `sample` for a random one.
    #[arg(long, value_enum, default_value_t = Mode::Viterbi)]
    pub mode: Mode,
    /// Sharpness of sampling; large values approach Viterbi.
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    pub theta: f64,
    /// Seed for sampling; record k uses a stream derived from it.
    #[arg(long, env = "TREEPIECE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Largest skeleton, in nodes, the lattice accepts (at most 32).
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    pub max_nodes: usize,
    #[command(flatten)]
    pub corpus_args: CorpusArgs,
}

#[derive(Debug, Args)]
pub struct DetokenizeArgs {
    /// Lines of tab-separated units; standard input if omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Vocabulary file written by `train`.
    #[arg(long)]
    pub vocab: PathBuf,
    /// Corpus to tokenize.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Largest skeleton, in nodes, the lattice accepts (at most 32).
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    pub max_nodes: usize,
    #[command(flatten)]
    pub corpus_args: CorpusArgs,
}

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be positive and finite, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

/// Parses arguments and runs one command. Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Train(a) => cmd_train(a, out, err),
        Command::Tokenize(a) => cmd_tokenize(a, stdin, out, err),
        Command::Detokenize(a) => cmd_detokenize(a, stdin, out),
        Command::Stats(a) => cmd_stats(a, out, err),
        Command::OovRate(a) => cmd_oov_rate(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::FileNotFound(p.to_path_buf()),
            _ => Error::Io(format!("{}: {e}", p.display())),
        }),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(io_err)?;
            Ok(s)
        }
    }
}

fn warn_skipped(loaded: &LoadedCorpus, err: &mut dyn Write) -> Result<()> {
    for e in &loaded.skipped {
        writeln!(err, "warning: skipped {e}").map_err(io_err)?;
    }
    Ok(())
}

pub fn cmd_train(args: &TrainArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let loaded = load_corpus_with(&args.corpus, &args.corpus_args.options())?;
    warn_skipped(&loaded, err)?;
    let config = TrainConfig {
        num_merges: args.merges,
        em_max_iters: args.em_iters,
        em_epsilon: args.em_eps,
        expand_samples: args.expand_samples,
        expand_theta: args.expand_theta,
        seed: args.seed,
        max_nodes: args.max_nodes,
    };
    let vocab = train_pipeline(&loaded.corpus, &config, !args.no_expand, out)?;
    save_vocab(&vocab, &args.out)?;
    writeln!(out, "wrote {} units to {}", vocab.len(), args.out.display()).map_err(io_err)
}

/// init → merges → EM → expansion, reporting each stage to `out`.
pub fn train_pipeline(
    corpus: &Corpus,
    config: &TrainConfig,
    expand: bool,
    out: &mut dyn Write,
) -> Result<Vocabulary> {
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(io_err);
    w(out, format!("corpus: {} skeletons", corpus.len()))?;
    w(
        out,
        format!("initial vocabulary: {}", init_vocab(corpus)?.len()),
    )?;
    let generation = generate_vocabulary_detailed(corpus, config)?;
    w(
        out,
        format!(
            "after merges: {} ({} merges)",
            generation.vocab.len(),
            generation.merges.len()
        ),
    )?;
    let (vocab, trace) = em_train(corpus, &generation.vocab, config)?;
    for (i, ll) in trace.log_likelihoods.iter().enumerate() {
        w(
            out,
            format!("em iteration {}: log-likelihood {ll:.6}", i + 1),
        )?;
    }
    w(
        out,
        format!(
            "em stopped: {:?} after {} iterations",
            trace.stop, trace.iterations
        ),
    )?;
    if !expand {
        return Ok(vocab);
    }
    let expanded = expand_vocab(corpus, &vocab, config)?;
    w(out, format!("after expansion: {}", expanded.len()))?;
    Ok(expanded)
}

/// Tokenizes every skeleton, in order. OOV comes back as
/// `Err(OovSkeleton)` alongside any other per-skeleton error.
pub fn tokenize_each(
    skeletons: &[Skeleton],
    vocab: &Vocabulary,
    mode: Mode,
    theta: f64,
    seed: u64,
    max_nodes: usize,
) -> Vec<Result<TokenizationResult>> {
    let tokenizer = Tokenizer::new(vocab).with_max_nodes(max_nodes);
    skeletons
        .par_iter()
        .enumerate()
        .map(|(k, s)| match mode {
            Mode::Viterbi => tokenizer.viterbi(s),
            Mode::Sample => tokenizer.ffbs(s, theta, derive_seed(seed, k as u64, 0)),
        })
        .collect()
}

pub fn cmd_tokenize(
    args: &TokenizeArgs,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let vocab = load_vocab(&args.vocab)?;
    let text = read_input(args.input.as_deref(), stdin)?;
    let loaded = parse_corpus(&text, &args.corpus_args.options())?;
    warn_skipped(&loaded, err)?;
    let results = tokenize_each(
        loaded.corpus.skeletons(),
        &vocab,
        args.mode,
        args.theta,
        args.seed,
        args.max_nodes,
    );
    let mut text = String::new();
    for (r, &line) in results.into_iter().zip(&loaded.lines) {
        match r {
            Ok(r) => text.push_str(&r.partition.to_line()),
            Err(Error::OovSkeleton) => text.push_str(OOV_SENTINEL),
            Err(e) => return Err(Error::at_line(line, e)),
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes()).map_err(io_err)
}

/// Assembles one line of tab-separated units. `<OOV>` passes through.
pub fn detokenize_line(line: &str) -> Result<String> {
    if line == OOV_SENTINEL {
        return Ok(OOV_SENTINEL.to_string());
    }
    let units = line
        .split('\t')
        .map(TreePieceUnit::parse)
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(&units)?.serialize())
}

pub fn cmd_detokenize(
    args: &DetokenizeArgs,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
) -> Result<()> {
    let text = read_input(args.input.as_deref(), stdin)?;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let skeleton = detokenize_line(line).map_err(|e| Error::at_line(i + 1, e))?;
        writeln!(out, "{skeleton}").map_err(io_err)?;
    }
    Ok(())
}

/// Tokenization statistics of a corpus under a vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub skeletons: usize,
    pub oov: usize,
    /// Units per skeleton, over skeletons that tokenized.
    pub mean_units: f64,
    pub median_units: f64,
    pub max_units: usize,
    pub vocab_size: usize,
    pub phase: Phase,
    pub placeholder_units: usize,
    pub bare_units: usize,
    /// Node count of each emitted unit → number of units of that size.
    pub unit_size_histogram: BTreeMap<usize, u64>,
}

impl CorpusStats {
    pub fn oov_percent(&self) -> f64 {
        100.0 * self.oov as f64 / self.skeletons as f64
    }
}

/// Viterbi statistics of `corpus` under `vocab`.
pub fn corpus_stats(corpus: &Corpus, vocab: &Vocabulary, max_nodes: usize) -> Result<CorpusStats> {
    let mut counts = Vec::new();
    let mut histogram = BTreeMap::new();
    for r in tokenize_each(corpus.skeletons(), vocab, Mode::Viterbi, 1.0, 0, max_nodes) {
        let r = match r {
            Ok(r) => r,
            Err(Error::OovSkeleton) => continue,
            Err(e) => return Err(e),
        };
        counts.push(r.partition.len());
        for u in r.partition.units() {
            *histogram.entry(u.node_count()).or_insert(0) += 1;
        }
    }
    counts.sort_unstable();
    let n = counts.len();
    let mean_units = if n == 0 {
        0.0
    } else {
        counts.iter().sum::<usize>() as f64 / n as f64
    };
    let median_units = match n {
        0 => 0.0,
        _ if n % 2 == 1 => counts[n / 2] as f64,
        _ => (counts[n / 2 - 1] + counts[n / 2]) as f64 / 2.0,
    };
    let placeholder_units = vocab.entries().iter().filter(|e| !e.unit.is_bare()).count();
    Ok(CorpusStats {
        skeletons: corpus.len(),
        oov: corpus.len() - n,
        mean_units,
        median_units,
        max_units: counts.last().copied().unwrap_or(0),
        vocab_size: vocab.len(),
        phase: vocab.phase(),
        placeholder_units,
        bare_units: vocab.len() - placeholder_units,
        unit_size_histogram: histogram,
    })
}

fn load_stats(args: &StatsArgs, err: &mut dyn Write) -> Result<CorpusStats> {
    let vocab = load_vocab(&args.vocab)?;
    let loaded = load_corpus_with(&args.corpus, &args.corpus_args.options())?;
    warn_skipped(&loaded, err)?;
    corpus_stats(&loaded.corpus, &vocab, args.max_nodes)
}

pub fn cmd_stats(args: &StatsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let s = load_stats(args, err)?;
    let mut text = format!(
        "skeletons: {}\n\
         oov: {}\n\
         units per skeleton: mean {:.3}, median {:.1}, max {}\n\
         vocabulary: {} units ({}), {} with placeholders, {} bare\n\
         unit size histogram (nodes: units):\n",
        s.skeletons,
        s.oov,
        s.mean_units,
        s.median_units,
        s.max_units,
        s.vocab_size,
        s.phase,
        s.placeholder_units,
        s.bare_units,
    );
    for (size, count) in &s.unit_size_histogram {
        text.push_str(&format!("  {size}: {count}\n"));
    }
    out.write_all(text.as_bytes()).map_err(io_err)
}

pub fn cmd_oov_rate(args: &StatsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let s = load_stats(args, err)?;
    writeln!(
        out,
        "oov: {} / {} ({:.3}%)",
        s.oov,
        s.skeletons,
        s.oov_percent()
    )
    .map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detokenize_examples() {
        assert_eq!(
            detokenize_line("[in:A <ph> <ph> ]\t[sl:B ]\t[sl:C ]").unwrap(),
            "[in:A [sl:B ] [sl:C ] ]"
        );
        assert_eq!(
            detokenize_line("[in:A [sl:B ] ]").unwrap(),
            "[in:A [sl:B ] ]"
        );
        assert_eq!(detokenize_line("<OOV>").unwrap(), "<OOV>");
        assert_eq!(
            detokenize_line("[in:A <ph> ]").unwrap_err(),
            Error::UnfilledPlaceholders(1)
        );
    }

    #[test]
    fn usage_errors_exit_one() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            ["treepiece", "bogus"],
            &mut std::io::empty(),
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_USAGE);
        let code = run(
            ["treepiece", "tokenize", "--vocab", "v", "--theta", "0"],
            &mut std::io::empty(),
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_USAGE);
        let code = run(
            ["treepiece", "--help"],
            &mut std::io::empty(),
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn stats_of_singleton_vocab_match_node_counts() {
        let corpus =
            Corpus::from_logical_forms(["[in:A [sl:B ] ]", "[in:A [sl:B ] [sl:C [in:D ] ] ]"])
                .unwrap();
        let vocab = init_vocab(&corpus).unwrap();
        let s = corpus_stats(&corpus, &vocab, DEFAULT_MAX_NODES).unwrap();
        assert_eq!(s.oov, 0);
        assert_eq!(s.mean_units, 3.0);
        assert_eq!(s.median_units, 3.0);
        assert_eq!(s.max_units, 4);
        assert_eq!(s.unit_size_histogram, BTreeMap::from([(1, 6)]));
    }
}
