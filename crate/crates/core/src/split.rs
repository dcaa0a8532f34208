//! Seeded test/train/validation partitioning.
//!
//! The test holdout takes `round(0.10 * n)` records; of the remainder the
//! training partition takes `round(0.73 * remainder)` and validation gets the
//! rest (half-up rounding). For n=52 this yields 5 / 34 / 13. Selection is a
//! uniform ChaCha8 shuffle of the record ids, so a seed fully determines the
//! partition.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest dataset the split rule accepts.
pub const MIN_SPLIT_SIZE: usize = 10;

const TEST_FRACTION: f64 = 0.10;
const TRAIN_FRACTION: f64 = 0.73;

/// Disjoint id partitions covering the whole dataset, plus the seed that
/// produced them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub test_ids: Vec<String>,
    pub train_ids: Vec<String>,
    pub validation_ids: Vec<String>,
    pub seed: u64,
}

impl DatasetSplit {
    pub fn len(&self) -> usize {
        self.test_ids.len() + self.train_ids.len() + self.validation_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Partition sizes (test, train, validation) for a dataset of `n` records.
pub fn split_sizes(n: usize) -> (usize, usize, usize) {
    let test = round_half_up(TEST_FRACTION * n as f64);
    let remainder = n - test;
    let train = round_half_up(TRAIN_FRACTION * remainder as f64);
    (test, train, remainder - train)
}

/// Draws a seeded random split over `ids`. Requires `n >= 10`, unique ids,
/// and that every partition comes out non-empty.
pub fn random_split(ids: &[String], seed: u64) -> Result<DatasetSplit> {
    let n = ids.len();
    if n < MIN_SPLIT_SIZE {
        return Err(Error::InvalidDataset(format!(
            "need at least {MIN_SPLIT_SIZE} records to split, got {n}"
        )));
    }
    for (i, id) in ids.iter().enumerate() {
        if ids[..i].contains(id) {
            return Err(Error::InvalidDataset(format!("duplicate record id {id:?}")));
        }
    }

    let (test_n, train_n, validation_n) = split_sizes(n);
    if test_n == 0 || train_n == 0 || validation_n == 0 {
        return Err(Error::InvalidDataset(format!(
            "split of {n} records leaves an empty partition ({test_n}/{train_n}/{validation_n})"
        )));
    }

    let mut shuffled: Vec<String> = ids.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shuffled.shuffle(&mut rng);

    let test_ids = shuffled[..test_n].to_vec();
    let train_ids = shuffled[test_n..test_n + train_n].to_vec();
    let validation_ids = shuffled[test_n + train_n..].to_vec();

    Ok(DatasetSplit {
        test_ids,
        train_ids,
        validation_ids,
        seed,
    })
}
