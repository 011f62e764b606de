//! Vocabulary generation, EM training of the simplex, and placeholder
//! expansion.
//!
//! Per-skeleton work runs in parallel over distinct skeletons; results are
//! then folded in corpus order so every sum is taken in the same order as a
//! single-threaded pass over the corpus.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::lattice::{Tokenizer, DEFAULT_MAX_NODES};
use crate::rng::{derive_seed, stream_rng};
use crate::tree::Skeleton;
use crate::unit::{write_component_canonical, AdjacentPair, TreePieceUnit};
use crate::vocab::{Phase, UnitId, Vocabulary};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub num_merges: usize,
    /// N0
    pub em_max_iters: usize,
    /// ε0
    pub em_epsilon: f64,
    /// K0
    pub expand_samples: usize,
    /// θ0
    pub expand_theta: f64,
    pub seed: u64,
    pub max_nodes: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            num_merges: 600,
            em_max_iters: 30,
            em_epsilon: 0.01,
            expand_samples: 10,
            expand_theta: 0.15,
            seed: 0,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIters,
    Converged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmTrace {
    /// Corpus log-likelihood under the simplex each E-step was run with.
    pub log_likelihoods: Vec<f64>,
    pub iterations: usize,
    pub stop: StopReason,
}

impl EmTrace {
    pub fn is_non_decreasing(&self, slack: f64) -> bool {
        self.log_likelihoods
            .windows(2)
            .all(|w| w[1] >= w[0] - slack)
    }
}

/// Distinct skeletons of a corpus and, per record, which one it is.
struct Dedup<'c> {
    unique: Vec<&'c Skeleton>,
    of_record: Vec<usize>,
}

impl<'c> Dedup<'c> {
    fn new(corpus: &'c Corpus) -> Self {
        let mut seen: HashMap<&Skeleton, usize> = HashMap::new();
        let mut unique = Vec::new();
        let of_record = corpus
            .skeletons()
            .iter()
            .map(|s| {
                *seen.entry(s).or_insert_with(|| {
                    unique.push(s);
                    unique.len() - 1
                })
            })
            .collect();
        Dedup { unique, of_record }
    }

    fn weights(&self) -> Vec<u64> {
        let mut w = vec![0u64; self.unique.len()];
        for &u in &self.of_record {
            w[u] += 1;
        }
        w
    }
}

/// Bare vocabulary of single ontologies, weighted by occurrence count.
pub fn init_vocab(corpus: &Corpus) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut counts: BTreeMap<String, (TreePieceUnit, u64)> = BTreeMap::new();
    for skeleton in corpus.skeletons() {
        for node in skeleton.nodes() {
            let unit = TreePieceUnit::singleton(node.label.clone());
            counts
                .entry(unit.canonical().to_string())
                .or_insert((unit, 0))
                .1 += 1;
        }
    }
    Vocabulary::from_frequencies(Phase::Bare, counts.into_values())
}

/// Outcome of the merge loop.
#[derive(Debug, Clone)]
pub struct Generation {
    pub vocab: Vocabulary,
    /// Selected pairs in merge order, with the frequency they were picked at.
    pub merges: Vec<AdjacentPair>,
}

pub fn generate_vocabulary(corpus: &Corpus, config: &TrainConfig) -> Result<Vocabulary> {
    generate_vocabulary_detailed(corpus, config).map(|g| g.vocab)
}

struct MergeState<'c> {
    skeleton: &'c Skeleton,
    weight: u64,
    /// Root node of the unit each node currently belongs to.
    group: Vec<usize>,
    /// (lower unit root, pair id) for every parent/child contact between two
    /// units, in pre-order of the lower root.
    contacts: Vec<(usize, u32)>,
}

#[derive(Default)]
struct PairTable {
    ids: HashMap<String, u32>,
    shapes: Vec<String>,
    counts: Vec<u64>,
}

impl PairTable {
    fn intern(&mut self, shape: &str) -> u32 {
        if let Some(&id) = self.ids.get(shape) {
            return id;
        }
        let id = self.shapes.len() as u32;
        self.ids.insert(shape.to_string(), id);
        self.shapes.push(shape.to_string());
        self.counts.push(0);
        id
    }

    /// Most frequent pair; ties go to the smaller canonical string.
    fn best(&self) -> Option<(u32, u64)> {
        let mut best: Option<(u32, u64)> = None;
        for (id, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((b, bc)) => c > bc || (c == bc && self.shapes[id] < self.shapes[b as usize]),
            };
            if better {
                best = Some((id as u32, c));
            }
        }
        best
    }
}

impl MergeState<'_> {
    fn refresh(&mut self, table: &mut PairTable, buf: &mut String) {
        for &(_, pid) in &self.contacts {
            table.counts[pid as usize] -= self.weight;
        }
        self.contacts.clear();
        let group = &self.group;
        for i in 1..self.skeleton.node_count() {
            if group[i] != i {
                continue;
            }
            let upper = group[self.skeleton.node(i).parent.expect("non-root")];
            buf.clear();
            let member = |x: usize| group[x] == upper || group[x] == i;
            write_component_canonical(self.skeleton, upper, &member, false, buf);
            let pid = table.intern(buf);
            table.counts[pid as usize] += self.weight;
            self.contacts.push((i, pid));
        }
    }

    /// Merges non-overlapping occurrences of `pid` greedily in pre-order.
    fn merge(&mut self, pid: u32) -> bool {
        let mut consumed = vec![false; self.skeleton.node_count()];
        let mut merged = false;
        for &(lower, p) in &self.contacts {
            if p != pid {
                continue;
            }
            let upper = self.group[self.skeleton.node(lower).parent.expect("non-root")];
            if consumed[upper] || consumed[lower] {
                continue;
            }
            for g in self.group.iter_mut() {
                if *g == lower {
                    *g = upper;
                }
            }
            consumed[upper] = true;
            consumed[lower] = true;
            merged = true;
        }
        merged
    }
}

/// BPE-style merging of adjacent units. Runs until `num_merges` new units
/// have been added or no pair occurs at least twice.
pub fn generate_vocabulary_detailed(corpus: &Corpus, config: &TrainConfig) -> Result<Generation> {
    let init = init_vocab(corpus)?;
    let mut freq: BTreeMap<String, (TreePieceUnit, u64)> = init
        .entries()
        .iter()
        .map(|e| (e.unit.canonical().to_string(), (e.unit.clone(), e.freq)))
        .collect();

    let dedup = Dedup::new(corpus);
    let weights = dedup.weights();
    let mut table = PairTable::default();
    let mut buf = String::new();
    let mut states: Vec<MergeState> = dedup
        .unique
        .iter()
        .zip(&weights)
        .map(|(&skeleton, &weight)| MergeState {
            skeleton,
            weight,
            group: (0..skeleton.node_count()).collect(),
            contacts: Vec::new(),
        })
        .collect();
    for state in states.iter_mut() {
        state.refresh(&mut table, &mut buf);
    }

    let mut merges = Vec::new();
    let mut added = 0;
    while added < config.num_merges {
        let Some((pid, count)) = table.best() else {
            break;
        };
        if count < 2 {
            break;
        }
        for state in states.iter_mut() {
            if state.contacts.iter().any(|&(_, p)| p == pid) && state.merge(pid) {
                state.refresh(&mut table, &mut buf);
            }
        }
        let shape = table.shapes[pid as usize].clone();
        let unit = TreePieceUnit::parse(&shape)?;
        match freq.get_mut(&shape) {
            Some(entry) => entry.1 += count,
            None => {
                freq.insert(shape, (unit.clone(), count));
                added += 1;
            }
        }
        merges.push(AdjacentPair {
            merged: unit,
            frequency: count,
        });
    }
    let vocab = Vocabulary::from_frequencies(Phase::Bare, freq.into_values())?;
    Ok(Generation { vocab, merges })
}

/// Result of one hard E-step over a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct EStep {
    /// ℱ*: unit counts over the Viterbi partitions, indexed by unit id.
    pub counts: Vec<u64>,
    pub log_likelihood: f64,
}

/// Viterbi E-step: tokenizes each skeleton under the current simplex and
/// counts units of the returned partitions.
pub fn e_step(corpus: &Corpus, vocab: &Vocabulary, max_nodes: usize) -> Result<EStep> {
    let tokenizer = Tokenizer::new(vocab).with_max_nodes(max_nodes);
    let dedup = Dedup::new(corpus);
    let results: Vec<_> = dedup
        .unique
        .par_iter()
        .map(|s| tokenizer.viterbi(s))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = vec![0u64; vocab.len()];
    let mut log_likelihood = 0.0;
    for &u in &dedup.of_record {
        let r = &results[u];
        log_likelihood += r.log_probability;
        for id in &r.unit_ids {
            counts[id.index()] += 1;
        }
    }
    Ok(EStep {
        counts,
        log_likelihood,
    })
}

fn normalize(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// One E-step's output: stored frequencies, the weights the simplex is
/// normalized from, and the log-likelihood.
type StepOutput = (Vec<u64>, Vec<u64>, f64);

fn run_em(
    vocab: &Vocabulary,
    config: &TrainConfig,
    mut step: impl FnMut(&Vocabulary) -> Result<StepOutput>,
) -> Result<(Vocabulary, EmTrace)> {
    let mut vocab = vocab.clone();
    let mut trace = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    let mut delta = f64::INFINITY;
    let mut fixed_point = false;
    while trace.len() < config.em_max_iters && delta > config.em_epsilon && !fixed_point {
        let (counts, weights, ll) = step(&vocab)?;
        let probs = normalize(&weights);
        fixed_point = vocab.ids().zip(&probs).all(|(id, &p)| vocab.prob(id) == p);
        vocab.set_counts(&counts, &probs);
        trace.push(ll);
        delta = ll - prev;
        prev = ll;
    }
    let stop = if fixed_point || delta <= config.em_epsilon {
        StopReason::Converged
    } else {
        StopReason::MaxIters
    };
    let iterations = trace.len();
    Ok((
        vocab,
        EmTrace {
            log_likelihoods: trace,
            iterations,
            stop,
        },
    ))
}

/// Hard EM: Viterbi E-step, normalized-count M-step. Stops after N0
/// iterations, when the log-likelihood gain drops to ε0, or when the M-step
/// reproduces the simplex exactly. Units whose count falls to zero keep
/// their entry with probability 0.
pub fn em_train(
    corpus: &Corpus,
    vocab: &Vocabulary,
    config: &TrainConfig,
) -> Result<(Vocabulary, EmTrace)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    run_em(vocab, config, |v| {
        let e = e_step(corpus, v, config.max_nodes)?;
        Ok((e.counts.clone(), e.counts, e.log_likelihood))
    })
}

/// Units drawn for every record, in record order.
struct Draws {
    /// Per record, per draw, the sampled partition's units.
    units: Vec<Vec<Vec<TreePieceUnit>>>,
    /// Per record, the ids of all units over all draws.
    ids: Vec<Vec<UnitId>>,
    /// Σ ln 𝒬(S) over records.
    log_likelihood: f64,
}

/// `samples` backward-sampling draws per record.
fn sample_units(
    corpus: &Corpus,
    vocab: &Vocabulary,
    max_nodes: usize,
    samples: usize,
    theta: f64,
    seed: u64,
) -> Result<Draws> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidTheta(theta));
    }
    let tokenizer = Tokenizer::new(vocab).with_max_nodes(max_nodes);
    let dedup = Dedup::new(corpus);
    let forwards = dedup
        .unique
        .par_iter()
        .map(|s| tokenizer.forward(s))
        .collect::<Result<Vec<_>>>()?;
    let per_record: Vec<(Vec<Vec<TreePieceUnit>>, Vec<UnitId>)> = dedup
        .of_record
        .par_iter()
        .enumerate()
        .map(|(k, &u)| {
            let mut units = Vec::with_capacity(samples);
            let mut ids = Vec::new();
            for draw in 0..samples {
                let r = forwards[u].sample(&mut stream_rng(seed, k, draw), theta)?;
                ids.extend_from_slice(&r.unit_ids);
                units.push(r.partition.into_units());
            }
            Ok((units, ids))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ll = 0.0;
    for &u in &dedup.of_record {
        ll += forwards[u].total().ln();
    }
    let (units, ids) = per_record.into_iter().unzip();
    Ok(Draws {
        units,
        ids,
        log_likelihood: ll,
    })
}

/// Result of one sampled E-step.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledEStep {
    /// Unit counts summed over all draws, indexed by unit id.
    pub totals: Vec<u64>,
    pub samples: usize,
    /// Σ ln 𝒬(S) over the corpus.
    pub log_likelihood: f64,
}

impl SampledEStep {
    /// Per-draw average count, rounded to the nearest integer.
    pub fn averaged(&self) -> Vec<u64> {
        let k = self.samples as u64;
        self.totals.iter().map(|&t| (2 * t + k) / (2 * k)).collect()
    }
}

/// Draws `samples` partitions per skeleton with sharpness `theta`. Record k,
/// draw j uses the stream keyed by (seed, k, j).
pub fn sampled_e_step(
    corpus: &Corpus,
    vocab: &Vocabulary,
    max_nodes: usize,
    samples: usize,
    theta: f64,
    seed: u64,
) -> Result<SampledEStep> {
    let samples = samples.max(1);
    let draws = sample_units(corpus, vocab, max_nodes, samples, theta, seed)?;
    let mut totals = vec![0u64; vocab.len()];
    for id in draws.ids.iter().flatten() {
        totals[id.index()] += 1;
    }
    Ok(SampledEStep {
        totals,
        samples,
        log_likelihood: draws.log_likelihood,
    })
}

/// EM with a sampled E-step: K backward-sampling draws per skeleton. The
/// simplex is normalized from counts over all draws and stored frequencies
/// are the per-draw averages. The log-likelihood uses the full marginal
/// 𝒬(S), and unlike [`em_train`] it need not be monotone.
pub fn em_train_sampled(
    corpus: &Corpus,
    vocab: &Vocabulary,
    config: &TrainConfig,
    samples: usize,
    theta: f64,
) -> Result<(Vocabulary, EmTrace)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut iteration = 0u64;
    run_em(vocab, config, |v| {
        let seed = derive_seed(config.seed, iteration, 0);
        iteration += 1;
        let e = sampled_e_step(corpus, v, config.max_nodes, samples, theta, seed)?;
        Ok((e.averaged(), e.totals, e.log_likelihood))
    })
}

/// Tokenizes every training skeleton K0 times by backward sampling with θ0
/// and collects the decorated units into a new vocabulary weighted by how
/// often each was drawn.
pub fn expand_vocab(
    corpus: &Corpus,
    vocab: &Vocabulary,
    config: &TrainConfig,
) -> Result<Vocabulary> {
    if vocab.phase() != Phase::Bare {
        return Err(Error::PhaseMismatch {
            expected: Phase::Bare.to_string(),
            found: vocab.phase().to_string(),
        });
    }
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let draws = sample_units(
        corpus,
        vocab,
        config.max_nodes,
        config.expand_samples.max(1),
        config.expand_theta,
        config.seed,
    )?;
    let mut counts: BTreeMap<String, (TreePieceUnit, u64)> = BTreeMap::new();
    for unit in draws.units.into_iter().flatten().flatten() {
        counts
            .entry(unit.canonical().to_string())
            .or_insert_with(|| (unit, 0))
            .1 += 1;
    }
    Vocabulary::from_frequencies(Phase::Decorated, counts.into_values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::VocabEntry;

    fn corpus(forms: &[&str]) -> Corpus {
        Corpus::from_logical_forms(forms.iter().copied()).unwrap()
    }

    fn two_partition_vocab() -> Vocabulary {
        let third = 1.0 / 3.0;
        Vocabulary::new(
            Phase::Decorated,
            ["[in:A <ph> ]", "[sl:B ]", "[in:A [sl:B ] ]"]
                .iter()
                .map(|u| VocabEntry {
                    unit: TreePieceUnit::parse(u).unwrap(),
                    freq: 1,
                    prob: third,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn init_vocab_counts() {
        let c = corpus(&["[in:A [sl:B ] ]", "[in:A ]"]);
        let v = init_vocab(&c).unwrap();
        assert_eq!(v.len(), 2);
        let a = v.id("[in:A ]").unwrap();
        let b = v.id("[sl:B ]").unwrap();
        assert_eq!((v.freq(a), v.freq(b)), (2, 1));
        assert!((v.prob(a) - 2.0 / 3.0).abs() < 1e-15);
        assert!((v.prob(b) - 1.0 / 3.0).abs() < 1e-15);

        let single = init_vocab(&corpus(&["[in:A ]"])).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.entries()[0].prob, 1.0);
    }

    #[test]
    fn one_merge_picks_most_frequent_pair() {
        let c = corpus(&["[in:A [sl:B ] [sl:C ] ]", "[in:A [sl:B ] ]"]);
        let config = TrainConfig {
            num_merges: 1,
            ..TrainConfig::default()
        };
        let g = generate_vocabulary_detailed(&c, &config).unwrap();
        assert_eq!(g.merges.len(), 1);
        assert_eq!(g.merges[0].merged.canonical(), "[in:A [sl:B ] ]");
        assert_eq!(g.merges[0].frequency, 2);
        assert_eq!(g.vocab.len(), 4);
        assert_eq!(g.vocab.freq(g.vocab.id("[in:A [sl:B ] ]").unwrap()), 2);
    }

    #[test]
    fn zero_merges_equals_init() {
        let c = corpus(&["[in:A [sl:B ] [sl:C ] ]", "[in:A [sl:B ] ]"]);
        let config = TrainConfig {
            num_merges: 0,
            ..TrainConfig::default()
        };
        assert_eq!(
            generate_vocabulary(&c, &config).unwrap(),
            init_vocab(&c).unwrap()
        );
    }

    #[test]
    fn merging_stops_without_repeated_pairs() {
        let c = corpus(&["[in:A [sl:B ] ]", "[in:C [sl:D ] ]"]);
        let g = generate_vocabulary_detailed(&c, &TrainConfig::default()).unwrap();
        assert!(g.merges.is_empty());
        assert_eq!(g.vocab.len(), 4);
    }

    #[test]
    fn overlapping_occurrences_merge_greedily() {
        // A-B contacts overlap on the chain A B A B: only one can merge per
        // round when they share a unit.
        let c = corpus(&["[in:A [sl:B [in:A [sl:B ] ] ] ]", "[in:A [sl:B ] ]"]);
        let config = TrainConfig {
            num_merges: 1,
            ..TrainConfig::default()
        };
        let g = generate_vocabulary_detailed(&c, &config).unwrap();
        assert_eq!(g.merges[0].merged.canonical(), "[in:A [sl:B ] ]");
        assert_eq!(g.merges[0].frequency, 3);
    }

    #[test]
    fn em_two_partition_fixture() {
        let c = corpus(&["[in:A [sl:B ] ]"]);
        let (v, trace) = em_train(&c, &two_partition_vocab(), &TrainConfig::default()).unwrap();
        assert_eq!(trace.iterations, 2);
        assert_eq!(trace.stop, StopReason::Converged);
        assert!((trace.log_likelihoods[0] - (1.0f64 / 3.0).ln()).abs() < 1e-15);
        assert_eq!(trace.log_likelihoods[1], 0.0);
        assert_eq!(v.prob(v.id("[in:A [sl:B ] ]").unwrap()), 1.0);
        assert_eq!(v.prob(v.id("[sl:B ]").unwrap()), 0.0);
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn em_fixed_point_stops_after_one_iteration() {
        let c = corpus(&["[in:A [sl:B ] ]"]);
        let v = Vocabulary::from_frequencies(
            Phase::Bare,
            vec![(TreePieceUnit::parse("[in:A [sl:B ] ]").unwrap(), 5)],
        )
        .unwrap();
        let (_, trace) = em_train(&c, &v, &TrainConfig::default()).unwrap();
        assert_eq!(trace.iterations, 1);
        assert_eq!(trace.stop, StopReason::Converged);
        assert_eq!(trace.log_likelihoods, vec![0.0]);
    }

    #[test]
    fn em_zero_iterations_is_identity() {
        let c = corpus(&["[in:A [sl:B ] ]"]);
        let config = TrainConfig {
            em_max_iters: 0,
            ..TrainConfig::default()
        };
        let v0 = two_partition_vocab();
        let (v, trace) = em_train(&c, &v0, &config).unwrap();
        assert_eq!(v, v0);
        assert_eq!(trace.iterations, 0);
    }

    #[test]
    fn em_reports_oov_in_decorated_phase() {
        let c = corpus(&["[in:A [sl:C ] ]"]);
        assert_eq!(
            em_train(&c, &two_partition_vocab(), &TrainConfig::default()).unwrap_err(),
            Error::OovSkeleton
        );
    }

    #[test]
    fn sampled_em_matches_hard_em_on_single_partition() {
        let c = corpus(&["[in:A [sl:B ] ]", "[in:A [sl:B ] [sl:C ] ]"]);
        let v = Vocabulary::from_frequencies(
            Phase::Bare,
            ["[in:A [sl:B ] ]", "[sl:C ]"]
                .iter()
                .map(|u| (TreePieceUnit::parse(u).unwrap(), 1)),
        )
        .unwrap();
        let config = TrainConfig::default();
        let hard = em_train(&c, &v, &config).unwrap();
        for (k, theta) in [(1, 1.0), (7, 0.3)] {
            assert_eq!(em_train_sampled(&c, &v, &config, k, theta).unwrap(), hard);
        }
    }

    #[test]
    fn sampled_e_step_averages() {
        let c = corpus(&["[in:A [sl:B ] ]"]);
        let e = sampled_e_step(&c, &two_partition_vocab(), DEFAULT_MAX_NODES, 4, 100.0, 1).unwrap();
        let ab = two_partition_vocab().id("[in:A [sl:B ] ]").unwrap();
        assert_eq!(e.totals[ab.index()], 4);
        assert_eq!(e.averaged()[ab.index()], 1);
        assert!((e.log_likelihood - (4.0f64 / 9.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn expand_requires_bare_phase() {
        let c = corpus(&["[in:A [sl:B ] ]"]);
        assert!(matches!(
            expand_vocab(&c, &two_partition_vocab(), &TrainConfig::default()),
            Err(Error::PhaseMismatch { .. })
        ));
    }

    #[test]
    fn expand_single_partition() {
        let c = corpus(&["[in:A [sl:B ] ]"]);
        let bare = Vocabulary::from_frequencies(
            Phase::Bare,
            vec![(TreePieceUnit::parse("[in:A [sl:B ] ]").unwrap(), 1)],
        )
        .unwrap();
        let v = expand_vocab(&c, &bare, &TrainConfig::default()).unwrap();
        assert_eq!(v.phase(), Phase::Decorated);
        assert_eq!(v.len(), 1);
        assert_eq!(v.entries()[0].unit.canonical(), "[in:A [sl:B ] ]");
        assert_eq!(v.entries()[0].freq, 10);
    }

    #[test]
    fn expand_adds_placeholder_patterns() {
        let c = corpus(&["[in:A [sl:B ] ]"]);
        let bare = Vocabulary::from_frequencies(
            Phase::Bare,
            ["[in:A ]", "[sl:B ]", "[in:A [sl:B ] ]"]
                .iter()
                .map(|u| (TreePieceUnit::parse(u).unwrap(), 1)),
        )
        .unwrap();
        let config = TrainConfig {
            expand_samples: 50,
            ..TrainConfig::default()
        };
        let v = expand_vocab(&c, &bare, &config).unwrap();
        assert!(v.id("[in:A <ph> ]").is_some());
        assert!(v.id("[sl:B ]").is_some());
        assert!(v.id("[in:A [sl:B ] ]").is_some());
        let total: u64 = v.entries().iter().map(|e| e.freq).sum();
        // 50 draws; each draw contributes one or two units
        assert!(total > 50 && total < 100);
    }
}
