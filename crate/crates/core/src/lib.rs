//! Subtree tokenization of semantic-parse skeletons.
//!
//! A parse tree in the decoupled bracket form is reduced to its skeleton of
//! intent and slot labels. The skeleton is then split into connected
//! subtree units drawn from a learned vocabulary, either by the single most
//! probable partition (Viterbi) or by sampling from the posterior over
//! partitions (forward filtering, backward sampling). Units carry `<ph>`
//! placeholders where children were cut away, so a unit sequence assembles
//! back into exactly one skeleton.

mod error;

pub mod commands;
pub mod corpus;
pub mod io;
pub mod lattice;
pub mod rng;
pub mod trainer;
pub mod tree;
pub mod unit;
pub mod vocab;

pub use corpus::{Corpus, CorpusRecord};
pub use error::{Error, Result};
pub use lattice::{
    brute_force_tokenize, enumerate_subtrees, ffbs_tokenize, viterbi_tokenize, BruteForce,
    ForwardFilter, SubtreeLattice, TokenizationResult, Tokenizer, DEFAULT_MAX_NODES,
};
pub use trainer::{
    e_step, em_train, em_train_sampled, expand_vocab, generate_vocabulary,
    generate_vocabulary_detailed, init_vocab, sampled_e_step, EmTrace, StopReason, TrainConfig,
};
pub use tree::{
    extract_leaves, extract_skeleton, parse_top, reconstruct, serialize_placeholder_nest,
    serialize_top, OntologyLabel, ParseTree, Skeleton,
};
pub use unit::{assemble, AdjacentPair, Partition, TreePieceUnit, PLACEHOLDER};
pub use vocab::{Phase, UnitId, VocabEntry, Vocabulary};
