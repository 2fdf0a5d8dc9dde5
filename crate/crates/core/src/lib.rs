//! DNA-coded image cipher.
//!
//! A grayscale image whose side is a multiple of 4 is encrypted in three
//! steps:
//!
//! 1. every pixel becomes four nucleotides (`C=00`, `T=01`, `A=10`, `G=11`);
//! 2. every such quad is replaced by one of its occurrence positions in a
//!    shared key sequence, drawn uniformly at random;
//! 3. the resulting 16-bit pointer cells are permuted by a doubly-even
//!    magic square of the image's order.
//!
//! The key sequence (a FASTA file both parties hold) is the only secret.
//! Ciphertexts keep the plaintext's width and height but store 16 bits per
//! cell, serialized in the `DMC1` container (see [`cipher`]).
//!
//! ```
//! use dnamagic::{build_key, decrypt, encrypt, Nucleotide, NucleotideSequence, PlainImage, RandomStream};
//!
//! let mut rng = RandomStream::from_seed(7);
//! let bases = (0..dnamagic::KEY_MIN_LEN)
//!     .map(|_| Nucleotide::from_code(rng.next_u64() as u8))
//!     .collect();
//! let key = build_key(NucleotideSequence::new(bases, "demo")).unwrap();
//!
//! let image = PlainImage::from_fn(8, 8, |r, c| (r * 8 + c) as u8);
//! let cipher = encrypt(&image, &key, &mut rng).unwrap();
//! assert_eq!(decrypt(&cipher, &key).unwrap(), image);
//! ```

pub mod analysis;
pub mod cipher;
pub mod dna_codec;
pub mod imageio;
pub mod magic_square;
pub mod reference_key;
pub mod substitution;

pub use analysis::{
    adjacent_correlation, chosen_plaintext_attack, differential_sensitivity,
    differential_sensitivity_with, evaluate_attack, histogram, pearson, pointer_histogram,
    AnalysisError, AttackReport, CorrelationReport, DifferentialMode, DifferentialReport,
    Direction, Histogram, Verdict,
};
pub use cipher::{
    decrypt, deserialize, encrypt, encrypt_with_fingerprint, serialize, CipherError, CipherImage,
};
pub use dna_codec::{
    decode_quad, encode_pixel, resynthesize, synthesize, DnaImage, Nucleotide, Quad,
};
pub use imageio::{read_pgm, write_pgm, PgmError, PlainImage};
pub use magic_square::{
    generate_doubly_even, magic_constant, scramble, to_permutation, unscramble, MagicError,
    MagicSquare, Permutation,
};
pub use reference_key::{
    build_key, key_fingerprint, parse_fasta, KeyError, KmerIndex, NucleotideSequence, ParseMode,
    ReferenceKey, KEY_MIN_LEN, WINDOW_STARTS,
};
pub use substitution::{
    reverse_substitute, substitute, PointerGrid, RandomStream, SubstitutionError,
};

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error(transparent)]
    Key(#[from] KeyError),
    #[error(transparent)]
    Magic(#[from] MagicError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error(transparent)]
    Cipher(#[from] CipherError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl Error {
    /// Short variant name, e.g. `DimensionError`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Pgm(e) => e.name(),
            Error::Key(e) => e.name(),
            Error::Magic(e) => e.name(),
            Error::Substitution(e) => e.name(),
            Error::Cipher(e) => e.name(),
            Error::Analysis(e) => e.name(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
