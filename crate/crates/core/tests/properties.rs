mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treepiece::io::{parse_vocab, write_vocab};
use treepiece::lattice::enumerate_subtrees;
use treepiece::rng::seeded_rng;
use treepiece::unit::decorate;
use treepiece::{
    assemble, brute_force_tokenize, extract_leaves, extract_skeleton, parse_top, reconstruct,
    serialize_placeholder_nest, serialize_top, Partition, Phase, Skeleton, Tokenizer,
};

use common::{all_edge_cuts, candidate_units, random_skeleton, random_vocab};

fn skeleton(max_nodes: usize) -> impl Strategy<Value = Skeleton> {
    (any::<u64>(), 1..=max_nodes)
        .prop_map(|(seed, n)| random_skeleton(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

/// A logical form with text under some slots.
fn logical_form() -> impl Strategy<Value = String> {
    (skeleton(10), any::<u64>()).prop_map(|(s, seed)| {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words = ["set", "an", "alarm", "for", "mom", "7", "pm"];
        // words go right after a slot's label, before any nested nodes
        let mut out = String::new();
        for tok in s.serialize().split(' ') {
            out.push_str(tok);
            out.push(' ');
            if tok.starts_with("[sl:") && rng.random_bool(0.6) {
                for _ in 0..rng.random_range(1..=3) {
                    out.push_str(words[rng.random_range(0..words.len())]);
                    out.push(' ');
                }
            }
        }
        out.trim_end().to_string()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn top_round_trip(lf in logical_form()) {
        let tree = parse_top(&lf).unwrap();
        prop_assert_eq!(serialize_top(&tree), lf.clone());
        prop_assert_eq!(parse_top(&serialize_top(&tree)).unwrap(), tree);
    }

    #[test]
    fn skeleton_and_leaves_reconstruct(lf in logical_form()) {
        let tree = parse_top(&lf).unwrap();
        let s = extract_skeleton(&tree);
        prop_assert_eq!(extract_skeleton(&s.to_tree()), s.clone());
        prop_assert_eq!(s.node_count(), tree.ontology_count());
        let rebuilt = reconstruct(&s, &extract_leaves(&tree)).unwrap();
        prop_assert_eq!(rebuilt, tree);
    }

    #[test]
    fn every_edge_cut_reassembles(s in skeleton(7)) {
        for comps in all_edge_cuts(&s) {
            let p = Partition::from_components(&s, &comps).unwrap();
            prop_assert_eq!(assemble(p.units()).unwrap(), s.clone());
            // one placeholder per cut edge
            let phs: usize = p.units().iter().map(|u| u.placeholder_count()).sum();
            prop_assert_eq!(phs, p.len() - 1);
            let nodes: usize = p.units().iter().map(|u| u.node_count()).sum();
            prop_assert_eq!(nodes, s.node_count());
            let nest = serialize_placeholder_nest(&s, &p).unwrap();
            prop_assert_eq!(nest.matches("<ph>(").count(), p.len() - 1);
        }
    }

    #[test]
    fn subtree_count_matches_enumeration(s in skeleton(9)) {
        // root-containing connected subsets, counted by the product rule
        fn count(s: &Skeleton, i: usize) -> usize {
            s.node(i).children.iter().map(|&c| count(s, c) + 1).product()
        }
        let lattice = enumerate_subtrees(&s, 24).unwrap();
        prop_assert_eq!(lattice.len(), count(&s, 0));
        prop_assert_eq!(lattice.full().count_ones() as usize, s.node_count());
    }

    #[test]
    fn viterbi_dominates_every_partition(s in skeleton(7), seed in any::<u64>(), bare in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phase = if bare { Phase::Bare } else { Phase::Decorated };
        let Some(vocab) = random_vocab(&mut rng, candidate_units(&s, phase).into_values(), phase, 0.7) else {
            return Ok(());
        };
        let oracle = brute_force_tokenize(&s, &vocab).unwrap();
        let tokenizer = Tokenizer::new(&vocab);
        match tokenizer.viterbi(&s) {
            Ok(v) => {
                for (_, w) in &oracle.all_partitions {
                    prop_assert!(v.log_probability >= w.ln() - 1e-12);
                }
                let q = tokenizer.forward(&s).unwrap().total();
                prop_assert!((q - oracle.total_probability).abs() <= 1e-12 * oracle.total_probability);
            }
            Err(e) => {
                prop_assert_eq!(e, treepiece::Error::OovSkeleton);
                prop_assert!(oracle.all_partitions.is_empty());
            }
        }
    }

    #[test]
    fn samples_are_supported_partitions(s in skeleton(8), seed in any::<u64>(), theta in 0.05f64..50.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(vocab) = random_vocab(&mut rng, candidate_units(&s, Phase::Decorated).into_values(), Phase::Decorated, 0.8) else {
            return Ok(());
        };
        let forward = match Tokenizer::new(&vocab).forward(&s) {
            Ok(f) if f.total() > 0.0 => f,
            _ => return Ok(()),
        };
        for draw in 0..5 {
            let r = forward.sample(&mut seeded_rng(seed ^ draw), theta).unwrap();
            prop_assert_eq!(r.partition.assemble().unwrap(), s.clone());
            for (u, id) in r.partition.units().iter().zip(&r.unit_ids) {
                prop_assert_eq!(vocab.unit(*id), u);
                prop_assert!(vocab.prob(*id) > 0.0);
            }
        }
    }

    #[test]
    fn decorated_singletons_have_one_placeholder_per_child(s in skeleton(10)) {
        for i in 0..s.node_count() {
            let u = decorate(&s, &[i]).unwrap();
            prop_assert_eq!(u.placeholder_count(), s.node(i).children.len());
            prop_assert_eq!(u.bare().placeholder_count(), 0);
        }
    }

    #[test]
    fn vocab_file_round_trip(s in skeleton(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(vocab) = random_vocab(&mut rng, candidate_units(&s, Phase::Decorated).into_values(), Phase::Decorated, 0.9) else {
            return Ok(());
        };
        let text = write_vocab(&vocab);
        let back = parse_vocab(&text).unwrap();
        prop_assert_eq!(&back, &vocab);
        prop_assert_eq!(write_vocab(&back), text);
    }
}
