#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semidirected::generator::{gen_tree_child, GenConfig};
use semidirected::io::parse_network;
use semidirected::Network;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture(name: &str) -> Network {
    parse_network(&read_data(&format!("{name}.net"))).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Small generator settings drawn from the seed: 3 to 12 leaves, at most
/// 2 root components, 4 hybrids and in-degree 3.
pub fn corpus_config(seed: u64) -> GenConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(3..=12);
    let t = rng.gen_range(1..=2.min(n - 1));
    let h = rng.gen_range(0..=4.min(n - t));
    let mut cfg = GenConfig::new(n, h, t, seed);
    cfg.max_in_degree = rng.gen_range(2..=3);
    cfg
}

pub fn corpus(seeds: std::ops::RangeInclusive<u64>) -> Vec<(u64, Network)> {
    seeds.map(|s| (s, gen_tree_child(&corpus_config(s)).unwrap_or_else(|e| panic!("seed {s}: {e}")))).collect()
}
