//! Fixtures shared by the criterion benches.

use dnamagic::{
    build_key, Nucleotide, NucleotideSequence, PlainImage, RandomStream, ReferenceKey, KEY_MIN_LEN,
};

pub fn random_sequence(seed: u64) -> NucleotideSequence {
    let mut rng = RandomStream::from_seed(seed);
    let bases = (0..KEY_MIN_LEN)
        .map(|_| Nucleotide::from_code(rng.next_u64() as u8))
        .collect();
    NucleotideSequence::new(bases, "bench")
}

pub fn random_key(seed: u64) -> ReferenceKey {
    build_key(random_sequence(seed)).expect("random key covers every quad")
}

pub fn noise_image(side: usize, seed: u64) -> PlainImage {
    let mut rng = RandomStream::from_seed(seed);
    PlainImage::from_fn(side, side, |_, _| rng.next_u64() as u8)
}
