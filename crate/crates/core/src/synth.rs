//! Seeded synthetic datasets for fuzzing and the `gen` subcommand.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Dataset, Itemset, MinSupport, Sequence, Time};

/// Latest timestamp drawn by default.
pub const MAX_TIME: Time = 30;

pub const FUZZ_SEQUENCES: (usize, usize) = (2, 8);
pub const FUZZ_ITEMS: (usize, usize) = (3, 6);
pub const FUZZ_EVENTS: (usize, usize) = (2, 6);
pub const FUZZ_MIN_SUPP: [&str; 3] = ["0.2", "0.3", "0.5"];

fn item_name(i: usize) -> String {
    format!("s{}", i + 1)
}

fn build(rng: &mut ChaCha8Rng, sequences: usize, items: usize, max_events: usize) -> Dataset {
    let min_events = max_events.min(2);
    // keep timestamps distinct even when max_events exceeds the default span
    let span = (MAX_TIME as usize + 1).max(2 * max_events);
    let seqs = (0..sequences)
        .map(|i| {
            let len = rng.gen_range(min_events..=max_events);
            let mut times: Vec<usize> = sample(rng, span, len).into_vec();
            times.sort_unstable();
            let raw = times
                .into_iter()
                .map(|t| {
                    let item = item_name(rng.gen_range(0..items));
                    (
                        Itemset::from_tokens([item]).expect("generated token"),
                        t as Time,
                    )
                })
                .collect();
            Sequence::new(format!("C{:03}", i + 1), raw).expect("distinct timestamps")
        })
        .collect();
    Dataset::new(seqs).expect("at least one sequence")
}

/// `sequences` sequences of 2..=`max_events` single-item events over items
/// `s1..s{items}`. The same seed always yields the same dataset.
pub fn generate(sequences: usize, items: usize, max_events: usize, seed: u64) -> Dataset {
    assert!(sequences >= 1 && items >= 1 && max_events >= 1);
    build(
        &mut ChaCha8Rng::seed_from_u64(seed),
        sequences,
        items,
        max_events,
    )
}

/// A small random mining problem sized for exhaustive search.
#[derive(Debug, Clone)]
pub struct FuzzInstance {
    pub seed: u64,
    pub dataset: Dataset,
    pub target: Itemset,
    pub min_supp: MinSupport,
}

pub fn fuzz_instance(seed: u64) -> FuzzInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sequences = rng.gen_range(FUZZ_SEQUENCES.0..=FUZZ_SEQUENCES.1);
    let items = rng.gen_range(FUZZ_ITEMS.0..=FUZZ_ITEMS.1);
    let max_events = rng.gen_range(FUZZ_EVENTS.0..=FUZZ_EVENTS.1);
    let min_supp = FUZZ_MIN_SUPP[rng.gen_range(0..FUZZ_MIN_SUPP.len())]
        .parse()
        .expect("valid threshold");
    let target = Itemset::from_tokens([item_name(rng.gen_range(0..items))]).expect("token");
    let dataset = build(&mut rng, sequences, items, max_events);
    FuzzInstance {
        seed,
        dataset,
        target,
        min_supp,
    }
}
