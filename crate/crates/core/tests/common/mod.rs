#![allow(dead_code)]

use dolbeault::{BlowUpSpec, CohomologyTable};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub mod bott_oracle;

pub fn random_table<R: Rng>(rng: &mut R, n: usize, max_entry: i128) -> CohomologyTable {
    let entries: Vec<_> = (0..=n as i64)
        .flat_map(|p| (0..=n as i64).map(move |q| (p, q)))
        .map(|(p, q)| (p, q, rng.gen_range(0..=max_entry)))
        .collect();
    CohomologyTable::new(n, "rand", entries).unwrap()
}

/// Deterministic corpus of valid blow-up specs with `n <= 6`, entries `<= 9`.
pub fn random_specs(count: usize, seed: u64) -> Vec<BlowUpSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=6usize);
            let r = rng.gen_range(2..=n);
            let base = random_table(&mut rng, n, 9);
            let center = random_table(&mut rng, n - r, 9);
            BlowUpSpec::new(base, center, r as i64).unwrap()
        })
        .collect()
}
