#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::seq::IndexedRandom;
use rand::Rng;
use treepiece::unit::{bare_shape, decorate};
use treepiece::{Phase, Skeleton, TreePieceUnit, Vocabulary};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// The vocabulary shared by the hand-derived examples:
/// `[in:A <ph> ]`, `[sl:B ]` and `[in:A [sl:B ] ]` at 1/3 each.
pub fn two_partition_vocab() -> Vocabulary {
    Vocabulary::from_frequencies(
        Phase::Decorated,
        ["[in:A <ph> ]", "[sl:B ]", "[in:A [sl:B ] ]"]
            .iter()
            .map(|u| (TreePieceUnit::parse(u).unwrap(), 1)),
    )
    .unwrap()
}

const INTENTS: [&str; 3] = ["A", "B", "C"];
const SLOTS: [&str; 3] = ["X", "Y", "Z"];

/// Random skeleton with `n` nodes: node i > 0 hangs under a uniformly chosen
/// earlier node, labels come from a small alphabet so shapes repeat.
pub fn random_skeleton<R: Rng>(rng: &mut R, n: usize) -> Skeleton {
    random_skeleton_over(rng, n, &INTENTS, &SLOTS)
}

pub fn random_skeleton_over<R: Rng>(
    rng: &mut R,
    n: usize,
    intents: &[&str],
    slots: &[&str],
) -> Skeleton {
    let mut children = vec![Vec::new(); n];
    for i in 1..n {
        children[rng.random_range(0..i)].push(i);
    }
    let labels: Vec<String> = (0..n)
        .map(|i| {
            if i == 0 || rng.random_bool(0.4) {
                format!("in:{}", intents.choose(rng).unwrap())
            } else {
                format!("sl:{}", slots.choose(rng).unwrap())
            }
        })
        .collect();
    fn write(i: usize, children: &[Vec<usize>], labels: &[String], out: &mut String) {
        out.push('[');
        out.push_str(&labels[i]);
        for &c in &children[i] {
            out.push(' ');
            write(c, children, labels, out);
        }
        out.push_str(" ]");
    }
    let mut text = String::new();
    write(0, &children, &labels, &mut text);
    Skeleton::parse(&text).unwrap()
}

/// Connected components of every partition obtained by cutting a subset of
/// the skeleton's edges. Exponential in node count; keep skeletons small.
pub fn all_edge_cuts(skeleton: &Skeleton) -> Vec<Vec<Vec<usize>>> {
    let n = skeleton.node_count();
    let mut out = Vec::new();
    for cut in 0u32..(1 << (n - 1)) {
        // edge (parent(i), i) is cut when bit i-1 is set
        let mut group: Vec<usize> = (0..n).collect();
        for i in 1..n {
            if cut >> (i - 1) & 1 == 0 {
                group[i] = group[skeleton.node(i).parent.unwrap()];
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &g) in group.iter().enumerate() {
            comps.entry(g).or_default().push(i);
        }
        out.push(comps.into_values().collect());
    }
    out
}

/// Every unit that can occur in some partition of `skeleton`, keyed for
/// `phase`.
pub fn candidate_units(skeleton: &Skeleton, phase: Phase) -> BTreeMap<String, TreePieceUnit> {
    let mut units = BTreeMap::new();
    for partition in all_edge_cuts(skeleton) {
        for comp in partition {
            let u = match phase {
                Phase::Decorated => decorate(skeleton, &comp).unwrap(),
                Phase::Bare => bare_shape(skeleton, &comp).unwrap(),
            };
            units.insert(u.canonical().to_string(), u);
        }
    }
    units
}

/// Random vocabulary over a subset of `units`, each kept with probability
/// `keep`, with random positive weights.
pub fn random_vocab<R: Rng>(
    rng: &mut R,
    units: impl IntoIterator<Item = TreePieceUnit>,
    phase: Phase,
    keep: f64,
) -> Option<Vocabulary> {
    let mut picked = Vec::new();
    for u in units {
        if rng.random_bool(keep) {
            picked.push((u, rng.random_range(1..=1000u64)));
        }
    }
    if picked.is_empty() {
        return None;
    }
    Some(Vocabulary::from_frequencies(phase, picked).unwrap())
}
