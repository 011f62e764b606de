//! Subtree lattices over a skeleton and the two tokenizers built on them.
//!
//! Every lattice state is a connected subtree containing the skeleton root,
//! identified by a bitmask over pre-order node indices. A state `t'` steps to
//! `t` by adding one unit `t \ t'`. The unit added must be rooted at the
//! smallest node (in pre-order) not yet covered, so each partition of the
//! skeleton corresponds to exactly one path from BOS to the full skeleton and
//! its units come out in assembly order.

use std::collections::HashMap;
use std::ops::Range;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::seeded_rng;
use crate::tree::Skeleton;
use crate::unit::{bare_shape, decorate, write_component_canonical, Partition};
use crate::vocab::{Phase, UnitId, Vocabulary};

/// Default cap on skeleton size for lattice construction.
pub const DEFAULT_MAX_NODES: usize = 24;
/// Largest skeleton the exhaustive oracle accepts.
pub const BRUTE_FORCE_MAX_NODES: usize = 10;
const MASK_BITS: usize = 32;

pub type SubtreeMask = u32;

/// Root-containing connected subtrees of a skeleton, graded by depth.
#[derive(Debug, Clone)]
pub struct SubtreeLattice<'s> {
    skeleton: &'s Skeleton,
    full: SubtreeMask,
    descendants: Vec<SubtreeMask>,
    subtrees: Vec<SubtreeMask>,
    by_depth: Vec<Range<usize>>,
    position: HashMap<SubtreeMask, usize>,
}

pub fn enumerate_subtrees(skeleton: &Skeleton, max_nodes: usize) -> Result<SubtreeLattice<'_>> {
    let n = skeleton.node_count();
    let limit = max_nodes.min(MASK_BITS);
    if n > limit {
        return Err(Error::SkeletonTooLarge { nodes: n, limit });
    }
    let mut descendants = vec![0u32; n];
    for i in (0..n).rev() {
        let mut m = 1u32 << i;
        for &c in &skeleton.node(i).children {
            m |= descendants[c];
        }
        descendants[i] = m;
    }

    fn rooted(skeleton: &Skeleton, v: usize) -> Vec<u32> {
        let mut acc = vec![1u32 << v];
        for &c in &skeleton.node(v).children {
            let sub = rooted(skeleton, c);
            let mut next = Vec::with_capacity(acc.len() * (sub.len() + 1));
            next.extend_from_slice(&acc);
            for &a in &acc {
                next.extend(sub.iter().map(|&s| a | s));
            }
            acc = next;
        }
        acc
    }

    let depth_of = |mask: u32| {
        bits(mask)
            .map(|i| skeleton.node(i).depth)
            .max()
            .unwrap_or(0)
    };
    let mut keyed: Vec<(usize, u32, u32)> = rooted(skeleton, 0)
        .into_iter()
        .map(|m| (depth_of(m), m.count_ones(), m))
        .collect();
    // Subsets sort before supersets: depth and size never decrease.
    keyed.sort_unstable();
    let max_depth = skeleton.depth();
    let mut by_depth = Vec::with_capacity(max_depth);
    let mut start = 0;
    for d in 1..=max_depth {
        let end = start + keyed[start..].iter().take_while(|k| k.0 == d).count();
        by_depth.push(start..end);
        start = end;
    }
    let subtrees: Vec<u32> = keyed.into_iter().map(|k| k.2).collect();
    let position = subtrees.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let full = descendants[0];
    Ok(SubtreeLattice {
        skeleton,
        full,
        descendants,
        subtrees,
        by_depth,
        position,
    })
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn mask_to_nodes(mask: SubtreeMask) -> Vec<usize> {
    bits(mask).collect()
}

impl<'s> SubtreeLattice<'s> {
    pub fn skeleton(&self) -> &'s Skeleton {
        self.skeleton
    }

    pub fn len(&self) -> usize {
        self.subtrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subtrees.is_empty()
    }

    /// All subtrees, ordered by (depth, size, mask).
    pub fn subtrees(&self) -> &[SubtreeMask] {
        &self.subtrees
    }

    /// Subtrees of depth `d` (root alone has depth 1).
    pub fn of_depth(&self, d: usize) -> &[SubtreeMask] {
        match d.checked_sub(1).and_then(|i| self.by_depth.get(i)) {
            Some(r) => &self.subtrees[r.clone()],
            None => &[],
        }
    }

    pub fn max_depth(&self) -> usize {
        self.by_depth.len()
    }

    pub fn full(&self) -> SubtreeMask {
        self.full
    }

    pub fn position(&self, mask: SubtreeMask) -> Option<usize> {
        self.position.get(&mask).copied()
    }

    /// `(t', t \ t')` for every admissible predecessor `t'` of `t`, ordered
    /// by the root of the added unit.
    pub fn predecessors(
        &self,
        t: SubtreeMask,
    ) -> impl Iterator<Item = (SubtreeMask, SubtreeMask)> + '_ {
        let frontier = (self.full & !t).trailing_zeros() as usize;
        bits(t & !1)
            .take_while(move |&r| r < frontier)
            .map(move |r| {
                let delta = self.descendants[r] & t;
                (t & !delta, delta)
            })
    }
}

/// Resolves node sets to vocabulary units, memoized per mask. Units with
/// zero probability count as absent.
struct UnitLookup<'v> {
    vocab: &'v Vocabulary,
    cache: HashMap<SubtreeMask, Option<(UnitId, f64)>>,
    buf: String,
}

impl<'v> UnitLookup<'v> {
    fn new(vocab: &'v Vocabulary) -> Self {
        UnitLookup {
            vocab,
            cache: HashMap::new(),
            buf: String::new(),
        }
    }

    fn get(&mut self, skeleton: &Skeleton, mask: SubtreeMask) -> Option<(UnitId, f64)> {
        if let Some(&hit) = self.cache.get(&mask) {
            return hit;
        }
        self.buf.clear();
        let root = mask.trailing_zeros() as usize;
        let member = |i: usize| i < MASK_BITS && (mask >> i) & 1 == 1;
        let decorated = self.vocab.phase() == Phase::Decorated;
        write_component_canonical(skeleton, root, &member, decorated, &mut self.buf);
        let found = self
            .vocab
            .id(&self.buf)
            .map(|id| (id, self.vocab.prob(id)))
            .filter(|&(_, p)| p > 0.0);
        self.cache.insert(mask, found);
        found
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TokenizationResult {
    pub partition: Partition,
    /// Vocabulary ids aligned with `partition.units()`.
    pub unit_ids: Vec<UnitId>,
    /// Product of unit probabilities for the returned partition.
    pub probability: f64,
    pub log_probability: f64,
}

impl TokenizationResult {
    fn from_path(
        skeleton: &Skeleton,
        vocab: &Vocabulary,
        mut path: Vec<(SubtreeMask, UnitId)>,
    ) -> Result<Self> {
        path.reverse();
        debug_assert!(path
            .windows(2)
            .all(|w| w[0].0.trailing_zeros() < w[1].0.trailing_zeros()));
        let components: Vec<Vec<usize>> = path.iter().map(|&(m, _)| mask_to_nodes(m)).collect();
        let partition = Partition::from_components(skeleton, &components)?;
        let unit_ids: Vec<UnitId> = path.iter().map(|&(_, id)| id).collect();
        let log_probability: f64 = unit_ids.iter().map(|&id| vocab.prob(id).ln()).sum();
        Ok(TokenizationResult {
            partition,
            unit_ids,
            probability: log_probability.exp(),
            log_probability,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Back {
    Bos,
    Pred(usize, SubtreeMask),
}

/// Tokenizer bound to one read-only vocabulary; safe to share across threads.
#[derive(Debug, Clone, Copy)]
pub struct Tokenizer<'v> {
    vocab: &'v Vocabulary,
    max_nodes: usize,
}

impl<'v> Tokenizer<'v> {
    pub fn new(vocab: &'v Vocabulary) -> Self {
        Tokenizer {
            vocab,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }

    pub fn with_max_nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn vocab(&self) -> &'v Vocabulary {
        self.vocab
    }

    /// Most probable partition and its probability, by a max-product
    /// forward pass in log space followed by back-pointer traversal.
    pub fn viterbi(&self, skeleton: &Skeleton) -> Result<TokenizationResult> {
        let lattice = enumerate_subtrees(skeleton, self.max_nodes)?;
        let mut lookup = UnitLookup::new(self.vocab);
        let n = lattice.len();
        let mut score = vec![f64::NEG_INFINITY; n];
        let mut back = vec![Back::Bos; n];
        let mut chosen: Vec<Option<UnitId>> = vec![None; n];

        for idx in 0..n {
            let t = lattice.subtrees[idx];
            let (mut best, mut best_back, mut best_unit) = match lookup.get(skeleton, t) {
                Some((id, p)) => (p.ln(), Back::Bos, Some(id)),
                None => (f64::NEG_INFINITY, Back::Bos, None),
            };
            for (pred, delta) in lattice.predecessors(t) {
                let pi = lattice.position[&pred];
                if score[pi] == f64::NEG_INFINITY {
                    continue;
                }
                let Some((id, p)) = lookup.get(skeleton, delta) else {
                    continue;
                };
                let cand = score[pi] + p.ln();
                let wins = cand > best
                    || (cand == best
                        && best_unit.is_some_and(|b| {
                            self.vocab.unit(id).canonical() < self.vocab.unit(b).canonical()
                        }));
                if wins {
                    best = cand;
                    best_back = Back::Pred(pi, delta);
                    best_unit = Some(id);
                }
            }
            score[idx] = best;
            back[idx] = best_back;
            chosen[idx] = best_unit;
        }

        let mut idx = lattice.position[&lattice.full];
        if score[idx] == f64::NEG_INFINITY {
            return Err(Error::OovSkeleton);
        }
        let mut path = Vec::new();
        loop {
            let id = chosen[idx].expect("finite score has a unit");
            match back[idx] {
                Back::Bos => {
                    path.push((lattice.subtrees[idx], id));
                    break;
                }
                Back::Pred(pi, delta) => {
                    path.push((delta, id));
                    idx = pi;
                }
            }
        }
        TokenizationResult::from_path(skeleton, self.vocab, path)
    }

    /// Sum-product forward pass; the returned tables can be sampled from
    /// repeatedly.
    pub fn forward<'s>(&self, skeleton: &'s Skeleton) -> Result<ForwardFilter<'s, 'v>> {
        let lattice = enumerate_subtrees(skeleton, self.max_nodes)?;
        let mut lookup = UnitLookup::new(self.vocab);
        let n = lattice.len();
        let mut marginal = vec![0.0f64; n];
        for idx in 0..n {
            let t = lattice.subtrees[idx];
            let mut q = lookup.get(skeleton, t).map_or(0.0, |(_, p)| p);
            for (pred, delta) in lattice.predecessors(t) {
                let qp = marginal[lattice.position[&pred]];
                if qp == 0.0 {
                    continue;
                }
                if let Some((_, p)) = lookup.get(skeleton, delta) {
                    q += qp * p;
                }
            }
            marginal[idx] = q;
        }
        Ok(ForwardFilter {
            vocab: self.vocab,
            lattice,
            marginal,
            units: lookup.cache,
        })
    }

    pub fn ffbs(&self, skeleton: &Skeleton, theta: f64, seed: u64) -> Result<TokenizationResult> {
        let forward = self.forward(skeleton)?;
        forward.sample(&mut seeded_rng(seed), theta)
    }
}

/// Forward tables of the sampling tokenizer: 𝒬(t) for every subtree and
/// the unit lookups needed to evaluate pair weights 𝒫(t, t').
#[derive(Debug, Clone)]
pub struct ForwardFilter<'s, 'v> {
    vocab: &'v Vocabulary,
    lattice: SubtreeLattice<'s>,
    marginal: Vec<f64>,
    units: HashMap<SubtreeMask, Option<(UnitId, f64)>>,
}

/// A backward-step candidate: `None` is BOS (the subtree itself is the first
/// unit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairWeight {
    pub predecessor: Option<SubtreeMask>,
    pub unit: SubtreeMask,
    pub id: UnitId,
    pub weight: f64,
}

impl<'s, 'v> ForwardFilter<'s, 'v> {
    pub fn lattice(&self) -> &SubtreeLattice<'s> {
        &self.lattice
    }

    /// 𝒬(S): total weight of all partitions of the skeleton.
    pub fn total(&self) -> f64 {
        self.marginal[self.lattice.position[&self.lattice.full]]
    }

    pub fn marginal(&self, t: SubtreeMask) -> Option<f64> {
        self.lattice.position(t).map(|i| self.marginal[i])
    }

    fn unit(&self, mask: SubtreeMask) -> Option<(UnitId, f64)> {
        self.units.get(&mask).copied().flatten()
    }

    /// Candidates with positive weight for the step into `t`.
    pub fn pair_weights(&self, t: SubtreeMask) -> Vec<PairWeight> {
        let mut out = Vec::new();
        if let Some((id, p)) = self.unit(t) {
            out.push(PairWeight {
                predecessor: None,
                unit: t,
                id,
                weight: p,
            });
        }
        for (pred, delta) in self.lattice.predecessors(t) {
            let qp = self.marginal[self.lattice.position[&pred]];
            if qp == 0.0 {
                continue;
            }
            if let Some((id, p)) = self.unit(delta) {
                let w = qp * p;
                if w > 0.0 {
                    out.push(PairWeight {
                        predecessor: Some(pred),
                        unit: delta,
                        id,
                        weight: w,
                    });
                }
            }
        }
        out
    }

    /// Samples one partition backward from the full skeleton. Each step picks
    /// a candidate with probability proportional to `weight^theta`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, theta: f64) -> Result<TokenizationResult> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidTheta(theta));
        }
        if self.total() <= 0.0 {
            return Err(Error::OovSkeleton);
        }
        let mut t = self.lattice.full;
        let mut path = Vec::new();
        let mut logw = Vec::new();
        loop {
            let cands = self.pair_weights(t);
            logw.clear();
            logw.extend(cands.iter().map(|c| theta * c.weight.ln()));
            let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut cumulative = 0.0;
            for w in logw.iter_mut() {
                cumulative += (*w - max).exp();
                *w = cumulative;
            }
            let u = rng.random::<f64>() * cumulative;
            let pick = logw.iter().position(|&c| u < c).unwrap_or(cands.len() - 1);
            let c = cands[pick];
            path.push((c.unit, c.id));
            match c.predecessor {
                None => break,
                Some(pred) => t = pred,
            }
        }
        TokenizationResult::from_path(self.lattice.skeleton, self.vocab, path)
    }
}

pub fn viterbi_tokenize(skeleton: &Skeleton, vocab: &Vocabulary) -> Result<TokenizationResult> {
    Tokenizer::new(vocab).viterbi(skeleton)
}

pub fn ffbs_tokenize(
    skeleton: &Skeleton,
    vocab: &Vocabulary,
    theta: f64,
    seed: u64,
) -> Result<TokenizationResult> {
    Tokenizer::new(vocab).ffbs(skeleton, theta, seed)
}

/// Exhaustive enumeration of every partition with in-vocabulary units.
#[derive(Debug, Clone)]
pub struct BruteForce {
    pub best: Option<TokenizationResult>,
    pub total_probability: f64,
    /// Each partition with its product weight, in enumeration order.
    pub all_partitions: Vec<(Partition, f64)>,
}

/// Test oracle: walks all 2^(n-1) edge cuts of the skeleton. Units are built
/// by tree decoration, independently of the lattice's canonical writer.
pub fn brute_force_tokenize(skeleton: &Skeleton, vocab: &Vocabulary) -> Result<BruteForce> {
    let n = skeleton.node_count();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::SkeletonTooLarge {
            nodes: n,
            limit: BRUTE_FORCE_MAX_NODES,
        });
    }
    let mut all = Vec::new();
    let mut total = 0.0;
    let mut best: Option<(f64, String, TokenizationResult)> = None;
    for cuts in 0u32..(1u32 << (n - 1)) {
        let mut owner = vec![0usize; n];
        for i in 1..n {
            owner[i] = if (cuts >> (i - 1)) & 1 == 1 {
                i
            } else {
                owner[skeleton.node(i).parent.expect("non-root has a parent")]
            };
        }
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for (i, &r) in owner.iter().enumerate() {
            if slot[r] == usize::MAX {
                slot[r] = components.len();
                components.push(Vec::new());
            }
            components[slot[r]].push(i);
        }
        let mut ids = Vec::with_capacity(components.len());
        for comp in &components {
            let key = match vocab.phase() {
                Phase::Decorated => decorate(skeleton, comp)?,
                Phase::Bare => bare_shape(skeleton, comp)?,
            };
            match vocab.id(key.canonical()) {
                Some(id) if vocab.prob(id) > 0.0 => ids.push(id),
                _ => break,
            }
        }
        if ids.len() != components.len() {
            continue;
        }
        let partition = Partition::from_components(skeleton, &components)?;
        let weight: f64 = ids.iter().map(|&id| vocab.prob(id)).product();
        let log_weight: f64 = ids.iter().map(|&id| vocab.prob(id).ln()).sum();
        total += weight;
        let line = partition.to_line();
        let better = match &best {
            None => true,
            Some((bl, bline, _)) => log_weight > *bl || (log_weight == *bl && line < *bline),
        };
        if better {
            best = Some((
                log_weight,
                line,
                TokenizationResult {
                    partition: partition.clone(),
                    unit_ids: ids.clone(),
                    probability: log_weight.exp(),
                    log_probability: log_weight,
                },
            ));
        }
        all.push((partition, weight));
    }
    Ok(BruteForce {
        best: best.map(|b| b.2),
        total_probability: total,
        all_partitions: all,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unit::TreePieceUnit;
    use crate::vocab::VocabEntry;

    fn skel(s: &str) -> Skeleton {
        Skeleton::parse(s).unwrap()
    }

    fn vocab(phase: Phase, units: &[(&str, f64)]) -> Vocabulary {
        Vocabulary::new(
            phase,
            units
                .iter()
                .map(|&(u, p)| VocabEntry {
                    unit: TreePieceUnit::parse(u).unwrap(),
                    freq: 1,
                    prob: p,
                })
                .collect(),
        )
        .unwrap()
    }

    fn two_partition_vocab() -> Vocabulary {
        let third = 1.0 / 3.0;
        vocab(
            Phase::Decorated,
            &[
                ("[in:A <ph> ]", third),
                ("[sl:B ]", third),
                ("[in:A [sl:B ] ]", third),
            ],
        )
    }

    #[test]
    fn enumerates_chain_star_and_single() {
        let chain = skel("[in:A [sl:B [in:C ] ] ]");
        let l = enumerate_subtrees(&chain, 24).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l.subtrees(), &[0b001, 0b011, 0b111]);
        assert_eq!(l.max_depth(), 3);

        let star = skel("[in:A [sl:B ] [sl:C ] ]");
        let l = enumerate_subtrees(&star, 24).unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(l.of_depth(1), &[0b001]);
        assert_eq!(l.of_depth(2), &[0b011, 0b101, 0b111]);
        assert!(l.subtrees().contains(&l.full()));

        let single = skel("[in:A ]");
        assert_eq!(enumerate_subtrees(&single, 24).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_respects_cap() {
        let star = skel("[in:A [sl:B ] [sl:C ] ]");
        assert_eq!(
            enumerate_subtrees(&star, 2).unwrap_err(),
            Error::SkeletonTooLarge { nodes: 3, limit: 2 }
        );
    }

    #[test]
    fn predecessors_follow_frontier_rule() {
        // 0 = A, 1 = B, 2 = C
        let star = skel("[in:A [sl:B ] [sl:C ] ]");
        let l = enumerate_subtrees(&star, 24).unwrap();
        let full: Vec<_> = l.predecessors(0b111).collect();
        assert_eq!(full, vec![(0b101, 0b010), (0b011, 0b100)]);
        let ab: Vec<_> = l.predecessors(0b011).collect();
        assert_eq!(ab, vec![(0b001, 0b010)]);
        // {A, C} leaves B uncovered, so C cannot be the latest unit.
        assert!(l.predecessors(0b101).next().is_none());
    }

    #[test]
    fn viterbi_two_partition_example() {
        let v = two_partition_vocab();
        let s = skel("[in:A [sl:B ] ]");
        let r = viterbi_tokenize(&s, &v).unwrap();
        assert_eq!(r.partition.to_line(), "[in:A [sl:B ] ]");
        assert!((r.probability - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn viterbi_single_unit_and_oov() {
        let s = skel("[in:A [sl:B ] [sl:C ] ]");
        let whole = vocab(Phase::Decorated, &[("[in:A [sl:B ] [sl:C ] ]", 1.0)]);
        let r = viterbi_tokenize(&s, &whole).unwrap();
        assert_eq!(r.partition.len(), 1);
        assert_eq!(r.probability, 1.0);

        let no_root = vocab(Phase::Decorated, &[("[sl:B ]", 0.5), ("[sl:C ]", 0.5)]);
        assert_eq!(viterbi_tokenize(&s, &no_root), Err(Error::OovSkeleton));
    }

    #[test]
    fn bare_phase_matches_plain_shapes() {
        let s = skel("[in:A [sl:B ] [sl:C ] ]");
        let v = vocab(
            Phase::Bare,
            &[
                ("[in:A ]", 0.25),
                ("[sl:B ]", 0.25),
                ("[sl:C ]", 0.25),
                ("[in:A [sl:C ] ]", 0.25),
            ],
        );
        let r = viterbi_tokenize(&s, &v).unwrap();
        assert_eq!(r.partition.to_line(), "[in:A <ph> [sl:C ] ]\t[sl:B ]");
        assert_eq!(r.partition.assemble().unwrap(), s);
    }

    #[test]
    fn viterbi_tie_prefers_smaller_unit_string() {
        let s = skel("[in:A [sl:B ] ]");
        let v = vocab(
            Phase::Decorated,
            &[
                ("[in:A <ph> ]", 0.5),
                ("[sl:B ]", 0.25),
                ("[in:A [sl:B ] ]", 0.125),
                ("[in:Z ]", 0.125),
            ],
        );
        // both partitions weigh 1/8; "[in:A [sl:B ] ]" < "[sl:B ]"
        let r = viterbi_tokenize(&s, &v).unwrap();
        assert_eq!(r.partition.len(), 1);
    }

    #[test]
    fn forward_total_two_partition_example() {
        let v = two_partition_vocab();
        let s = skel("[in:A [sl:B ] ]");
        let f = Tokenizer::new(&v).forward(&s).unwrap();
        assert!((f.total() - 4.0 / 9.0).abs() < 1e-15);
        let w = f.pair_weights(0b11);
        assert_eq!(w.len(), 2);
        assert!((w[0].weight - 1.0 / 3.0).abs() < 1e-15);
        assert!((w[1].weight - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn ffbs_is_deterministic_under_seed() {
        let v = two_partition_vocab();
        let s = skel("[in:A [sl:B ] ]");
        for seed in 0..20 {
            assert_eq!(
                ffbs_tokenize(&s, &v, 1.0, seed).unwrap(),
                ffbs_tokenize(&s, &v, 1.0, seed).unwrap()
            );
        }
    }

    #[test]
    fn ffbs_single_partition_ignores_theta() {
        let s = skel("[in:A [sl:B ] ]");
        let v = vocab(Phase::Decorated, &[("[in:A [sl:B ] ]", 1.0)]);
        for (theta, seed) in [(0.01, 1), (1.0, 2), (100.0, 3)] {
            let r = ffbs_tokenize(&s, &v, theta, seed).unwrap();
            assert_eq!(r.partition.to_line(), "[in:A [sl:B ] ]");
        }
    }

    #[test]
    fn ffbs_rejects_bad_theta_and_oov() {
        let v = two_partition_vocab();
        let s = skel("[in:A [sl:B ] ]");
        assert_eq!(ffbs_tokenize(&s, &v, 0.0, 0), Err(Error::InvalidTheta(0.0)));
        assert!(ffbs_tokenize(&s, &v, f64::NAN, 0).is_err());
        let oov = skel("[in:A [sl:C ] ]");
        assert_eq!(ffbs_tokenize(&oov, &v, 1.0, 0), Err(Error::OovSkeleton));
    }

    #[test]
    fn brute_force_examples() {
        let v = two_partition_vocab();
        let s = skel("[in:A [sl:B ] ]");
        let bf = brute_force_tokenize(&s, &v).unwrap();
        assert_eq!(bf.all_partitions.len(), 2);
        assert!((bf.total_probability - 4.0 / 9.0).abs() < 1e-15);
        let best = bf.best.unwrap();
        assert_eq!(best.partition.to_line(), "[in:A [sl:B ] ]");
        assert!((best.probability - 1.0 / 3.0).abs() < 1e-15);

        let empty = vocab(Phase::Decorated, &[("[in:Q ]", 1.0)]);
        let bf = brute_force_tokenize(&s, &empty).unwrap();
        assert!(bf.all_partitions.is_empty());
        assert_eq!(bf.total_probability, 0.0);
        assert!(bf.best.is_none());

        let whole = vocab(Phase::Decorated, &[("[in:A [sl:B ] ]", 1.0)]);
        let bf = brute_force_tokenize(&s, &whole).unwrap();
        assert_eq!(bf.all_partitions.len(), 1);
        assert_eq!(bf.total_probability, 1.0);
    }

    #[test]
    fn brute_force_cap() {
        let big = skel(
            "[in:A [sl:B ] [sl:C ] [sl:D ] [sl:E ] [sl:F ] [sl:G ] [sl:H ] [sl:I ] [sl:J ] [sl:K ] ]",
        );
        let v = vocab(Phase::Bare, &[("[in:A ]", 1.0)]);
        assert!(matches!(
            brute_force_tokenize(&big, &v),
            Err(Error::SkeletonTooLarge { nodes: 11, .. })
        ));
    }
}
