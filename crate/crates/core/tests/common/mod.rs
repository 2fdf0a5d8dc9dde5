#![allow(dead_code)]

use dnamagic::{
    build_key, Nucleotide, NucleotideSequence, PlainImage, RandomStream, ReferenceKey, KEY_MIN_LEN,
};

/// Uniformly random key of exactly `KEY_MIN_LEN` bases.
pub fn random_key(seed: u64) -> ReferenceKey {
    build_key(random_sequence(KEY_MIN_LEN, seed)).expect("random key covers all quads")
}

pub fn random_sequence(len: usize, seed: u64) -> NucleotideSequence {
    let mut rng = RandomStream::from_seed(seed ^ 0x5EED_0F4B_1500);
    let bases = (0..len)
        .map(|_| Nucleotide::from_code(rng.next_u64() as u8))
        .collect();
    NucleotideSequence::new(bases, format!("random-{seed}"))
}

pub fn random_image(side: usize, rng: &mut RandomStream) -> PlainImage {
    PlainImage::from_fn(side, side, |_, _| rng.next_u64() as u8)
}

pub fn gradient_image(side: usize) -> PlainImage {
    PlainImage::from_fn(side, side, |_, c| (c % 256) as u8)
}

pub fn constant_image(side: usize, value: u8) -> PlainImage {
    PlainImage::from_fn(side, side, |_, _| value)
}
