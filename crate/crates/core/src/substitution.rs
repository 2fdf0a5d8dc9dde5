//! The one-to-many substitution: each quad is replaced by one of its
//! occurrence positions in the key, chosen uniformly at random.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::dna_codec::{DnaImage, Quad};
use crate::reference_key::{ReferenceKey, WINDOW_STARTS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error("quad {0} does not occur in the key window")]
    QuadNotCovered(Quad),
    #[error("pointer {value} at cell {index} is outside the key window")]
    PointerOutOfRange { index: usize, value: u32 },
}

impl SubstitutionError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::QuadNotCovered(_) => "QuadNotCovered",
            Self::PointerOutOfRange { .. } => "PointerOutOfRange",
        }
    }
}

/// Seedable deterministic generator (ChaCha8 keyed from a 64-bit seed).
///
/// Not a cryptographic claim about the cipher. Identical seeds give
/// identical draw sequences on every platform.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform index in `0..bound` from exactly one 64-bit draw
    /// (widening multiply; bias below `bound / 2^64`).
    pub fn index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "index bound must be positive");
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    /// Derives an independent stream seeded from this one.
    pub fn fork(&mut self) -> Self {
        Self::from_seed(self.next_u64())
    }
}

/// Row-major grid of key positions.
///
/// Pointers are held wider than 16 bits so that out-of-window values can be
/// represented and rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointerGrid {
    pub width: usize,
    pub height: usize,
    pub pointers: Vec<u32>,
}

/// Replaces every quad with a uniformly drawn occurrence position.
/// Consumes exactly one draw per pixel, in row-major order.
pub fn substitute(
    dna: &DnaImage,
    key: &ReferenceKey,
    rng: &mut RandomStream,
) -> Result<PointerGrid, SubstitutionError> {
    let index = key.index();
    let pointers = dna
        .quads
        .iter()
        .map(|&q| {
            let list = index.positions(q);
            if list.is_empty() {
                return Err(SubstitutionError::QuadNotCovered(q));
            }
            Ok(list[rng.index(list.len())] as u32)
        })
        .collect::<Result<_, _>>()?;
    Ok(PointerGrid {
        width: dna.width,
        height: dna.height,
        pointers,
    })
}

/// Reads the quad at each pointer back out of the key.
pub fn reverse_substitute(
    grid: &PointerGrid,
    key: &ReferenceKey,
) -> Result<DnaImage, SubstitutionError> {
    let quads = grid
        .pointers
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            if value as usize >= WINDOW_STARTS {
                return Err(SubstitutionError::PointerOutOfRange { index, value });
            }
            Ok(key.quad_at(value).expect("pointer inside window"))
        })
        .collect::<Result<_, _>>()?;
    Ok(DnaImage {
        width: grid.width,
        height: grid.height,
        quads,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dna_codec::{decode_quad, encode_pixel, Nucleotide};
    use crate::reference_key::{build_key, NucleotideSequence, KEY_MIN_LEN};

    fn random_key(seed: u64) -> ReferenceKey {
        let mut rng = RandomStream::from_seed(seed);
        let bases = (0..KEY_MIN_LEN)
            .map(|_| Nucleotide::from_code(rng.next_u64() as u8))
            .collect();
        build_key(NucleotideSequence::new(bases, "random")).unwrap()
    }

    fn random_dna(w: usize, h: usize, rng: &mut RandomStream) -> DnaImage {
        DnaImage {
            width: w,
            height: h,
            quads: (0..w * h)
                .map(|_| encode_pixel(rng.next_u64() as u8))
                .collect(),
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomStream::from_seed(42);
        let mut b = RandomStream::from_seed(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_ne!(
            RandomStream::from_seed(1).next_u64(),
            RandomStream::from_seed(2).next_u64()
        );
    }

    #[test]
    fn index_stays_in_bounds() {
        let mut r = RandomStream::from_seed(0);
        for bound in 1..200 {
            assert!(r.index(bound) < bound);
        }
        assert_eq!(r.index(1), 0);
    }

    #[test]
    fn every_pointer_points_at_its_quad() {
        let key = random_key(11);
        let mut rng = RandomStream::from_seed(3);
        let dna = random_dna(32, 32, &mut rng);
        let grid = substitute(&dna, &key, &mut rng).unwrap();
        for (q, &p) in dna.quads.iter().zip(&grid.pointers) {
            let p = p as usize;
            assert_eq!(Quad::from_slice(&key.sequence().bases[p..p + 4]), *q);
        }
    }

    #[test]
    fn singleton_occurrence_forces_the_draw() {
        // CCCC appears only at position 7; every other quad is plentiful.
        let mut rng = RandomStream::from_seed(5);
        let mut bases: Vec<Nucleotide> = Vec::with_capacity(KEY_MIN_LEN);
        bases.extend([Nucleotide::A; 7]);
        bases.extend([Nucleotide::C; 4]);
        while bases.len() < KEY_MIN_LEN {
            let n = Nucleotide::from_code(rng.next_u64() as u8);
            let len = bases.len();
            // avoid creating another CCCC
            if n == Nucleotide::C && bases[len - 3..].iter().all(|&b| b == Nucleotide::C) {
                continue;
            }
            bases.push(n);
        }
        bases[11] = Nucleotide::G;
        let key = build_key(NucleotideSequence::new(bases, "single")).unwrap();
        assert_eq!(key.index().positions_of_byte(0), &[7]);
        assert_eq!(key.min_multiplicity(), 1);

        let dna = DnaImage {
            width: 4,
            height: 1,
            quads: vec![encode_pixel(0); 4],
        };
        for seed in 0..20 {
            let grid = substitute(&dna, &key, &mut RandomStream::from_seed(seed)).unwrap();
            assert_eq!(grid.pointers, vec![7; 4]);
        }
    }

    #[test]
    fn round_trip_any_seed() {
        let key = random_key(21);
        let mut rng = RandomStream::from_seed(8);
        for _ in 0..50 {
            let dna = random_dna(8, 8, &mut rng);
            let grid = substitute(&dna, &key, &mut rng).unwrap();
            assert_eq!(reverse_substitute(&grid, &key).unwrap(), dna);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let key = random_key(2);
        let dna = random_dna(16, 16, &mut RandomStream::from_seed(4));
        let a = substitute(&dna, &key, &mut RandomStream::from_seed(77)).unwrap();
        let b = substitute(&dna, &key, &mut RandomStream::from_seed(77)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn consumes_one_draw_per_pixel() {
        let key = random_key(2);
        let dna = random_dna(8, 8, &mut RandomStream::from_seed(4));
        let mut used = RandomStream::from_seed(9);
        substitute(&dna, &key, &mut used).unwrap();
        let mut reference = RandomStream::from_seed(9);
        for _ in 0..64 {
            reference.next_u64();
        }
        assert_eq!(used.next_u64(), reference.next_u64());
    }

    #[test]
    fn pointer_zero_reads_key_prefix() {
        let mut rng = RandomStream::from_seed(1);
        let mut bases: Vec<Nucleotide> = "GATC"
            .bytes()
            .map(|b| Nucleotide::from_symbol(b).unwrap())
            .collect();
        bases.extend((4..KEY_MIN_LEN).map(|_| Nucleotide::from_code(rng.next_u64() as u8)));
        let key = build_key(NucleotideSequence::new(bases, "gatc")).unwrap();
        let grid = PointerGrid {
            width: 1,
            height: 1,
            pointers: vec![0],
        };
        let dna = reverse_substitute(&grid, &key).unwrap();
        assert_eq!(dna.quads[0].to_string(), "GATC");
        assert_eq!(decode_quad(dna.quads[0]), 228);
    }

    #[test]
    fn out_of_window_pointer_rejected() {
        let key = random_key(1);
        let grid = PointerGrid {
            width: 2,
            height: 1,
            pointers: vec![3, 65536],
        };
        assert_eq!(
            reverse_substitute(&grid, &key),
            Err(SubstitutionError::PointerOutOfRange {
                index: 1,
                value: 65536
            })
        );
    }

    #[test]
    fn seeds_disagree_on_most_cells() {
        let key = random_key(31);
        assert!(key.min_multiplicity() >= 16);
        let dna = random_dna(64, 64, &mut RandomStream::from_seed(100));
        for pair in 0..10u64 {
            let a = substitute(&dna, &key, &mut RandomStream::from_seed(2 * pair)).unwrap();
            let b = substitute(&dna, &key, &mut RandomStream::from_seed(2 * pair + 1)).unwrap();
            let differ = a
                .pointers
                .iter()
                .zip(&b.pointers)
                .filter(|(x, y)| x != y)
                .count();
            assert!(differ as f64 >= 0.9 * 4096.0, "pair {pair}: {differ}");
        }
    }

    #[test]
    fn draws_are_uniform_over_occurrences() {
        let key = random_key(13);
        let q = encode_pixel(0x5A);
        let list = key.index().positions(q);
        let m = list.len();
        let draws = 10_000;
        let dna = DnaImage {
            width: draws,
            height: 1,
            quads: vec![q; draws],
        };
        let grid = substitute(&dna, &key, &mut RandomStream::from_seed(6)).unwrap();

        let mut counts = std::collections::HashMap::new();
        for p in grid.pointers {
            *counts.entry(p as u16).or_insert(0usize) += 1;
        }
        let expect = 1.0 / m as f64;
        let se = (expect * (1.0 - expect) / draws as f64).sqrt();
        for &p in list {
            let freq = *counts.get(&p).unwrap_or(&0) as f64 / draws as f64;
            assert!(
                (freq - expect).abs() <= 5.0 * se,
                "position {p}: {freq} vs {expect}"
            );
        }
    }
}
