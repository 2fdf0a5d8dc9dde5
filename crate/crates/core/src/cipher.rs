//! Encryption and decryption pipelines and the `DMC1` container.
//!
//! Encryption: synthesize, substitute, then scramble the pointer cells with
//! the order-`n` doubly-even magic square. Decryption runs the inverse steps
//! in reverse order. The magic square is public structure and is rebuilt
//! from `n` at both ends; the key sequence is the only secret.
//!
//! # Container layout
//!
//! | offset | size | field                                        |
//! |--------|------|----------------------------------------------|
//! | 0      | 4    | magic `DMC1`                                 |
//! | 4      | 1    | version (`1`)                                |
//! | 5      | 1    | flags (bit 0: fingerprint present)           |
//! | 6      | 4    | width, u32 LE                                |
//! | 10     | 4    | height, u32 LE                               |
//! | 14     | 8    | fingerprint, u64 LE (only if flag bit 0)     |
//! | ...    | 2·wh | pointers, u16 LE, row-major, already scrambled |

use thiserror::Error;

use crate::dna_codec::{resynthesize, synthesize};
use crate::imageio::PlainImage;
use crate::magic_square::{
    generate_doubly_even, is_doubly_even, scramble, to_permutation, unscramble,
};
use crate::reference_key::ReferenceKey;
use crate::substitution::{
    reverse_substitute, substitute, PointerGrid, RandomStream, SubstitutionError,
};

pub const MAGIC: [u8; 4] = *b"DMC1";
pub const FORMAT_VERSION: u8 = 1;
pub const FLAG_FINGERPRINT: u8 = 0b0000_0001;
const HEADER_LEN: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CipherError {
    #[error("image is {width}x{height}; a square image with side divisible by 4 is required")]
    DimensionError { width: usize, height: usize },
    #[error("key fingerprint {actual:016x} does not match container fingerprint {expected:016x}")]
    WrongKey { expected: u64, actual: u64 },
    #[error("not a DMC1 container")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("unsupported flag bits {0:#04x}")]
    UnsupportedFlags(u8),
    #[error("container truncated: need {expected} bytes, have {actual}")]
    TruncatedPayload { expected: usize, actual: usize },
    #[error("{0} unexpected bytes after the payload")]
    TrailingBytes(usize),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
}

impl CipherError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::DimensionError { .. } => "DimensionError",
            Self::WrongKey { .. } => "WrongKey",
            Self::BadMagic => "BadMagic",
            Self::UnsupportedVersion(_) => "UnsupportedVersion",
            Self::UnsupportedFlags(_) => "UnsupportedFlags",
            Self::TruncatedPayload { .. } => "TruncatedPayload",
            Self::TrailingBytes(_) => "TrailingBytes",
            Self::Substitution(e) => e.name(),
        }
    }
}

/// A scrambled pointer grid plus its container metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherImage {
    width: usize,
    height: usize,
    pointers: Vec<u16>,
    fingerprint: Option<u64>,
}

impl CipherImage {
    pub fn new(
        width: usize,
        height: usize,
        pointers: Vec<u16>,
        fingerprint: Option<u64>,
    ) -> Result<Self, CipherError> {
        check_dimensions(width, height)?;
        if pointers.len() != width * height {
            return Err(CipherError::TruncatedPayload {
                expected: width * height,
                actual: pointers.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pointers,
            fingerprint,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Scrambled pointer payload in storage order.
    pub fn pointers(&self) -> &[u16] {
        &self.pointers
    }

    pub fn fingerprint(&self) -> Option<u64> {
        self.fingerprint
    }

    pub fn flags(&self) -> u8 {
        if self.fingerprint.is_some() {
            FLAG_FINGERPRINT
        } else {
            0
        }
    }

    pub fn set_fingerprint(&mut self, fingerprint: Option<u64>) {
        self.fingerprint = fingerprint;
    }
}

fn check_dimensions(width: usize, height: usize) -> Result<(), CipherError> {
    if width != height || !is_doubly_even(width) {
        return Err(CipherError::DimensionError { width, height });
    }
    Ok(())
}

/// Encrypts without embedding the key fingerprint.
pub fn encrypt(
    image: &PlainImage,
    key: &ReferenceKey,
    rng: &mut RandomStream,
) -> Result<CipherImage, CipherError> {
    let (width, height) = (image.width(), image.height());
    check_dimensions(width, height)?;

    let dna = synthesize(image);
    let grid = substitute(&dna, key, rng)?;
    let perm = to_permutation(&generate_doubly_even(width).expect("checked doubly even"));
    let cells: Vec<u16> = grid.pointers.iter().map(|&p| p as u16).collect();
    let pointers = scramble(&cells, &perm).expect("grid matches permutation order");

    Ok(CipherImage {
        width,
        height,
        pointers,
        fingerprint: None,
    })
}

/// Like [`encrypt`] but records the key fingerprint in the container.
pub fn encrypt_with_fingerprint(
    image: &PlainImage,
    key: &ReferenceKey,
    rng: &mut RandomStream,
) -> Result<CipherImage, CipherError> {
    let mut c = encrypt(image, key, rng)?;
    c.fingerprint = Some(key.fingerprint());
    Ok(c)
}

pub fn decrypt(cipher: &CipherImage, key: &ReferenceKey) -> Result<PlainImage, CipherError> {
    check_dimensions(cipher.width, cipher.height)?;
    if let Some(expected) = cipher.fingerprint {
        if expected != key.fingerprint() {
            return Err(CipherError::WrongKey {
                expected,
                actual: key.fingerprint(),
            });
        }
    }

    let perm = to_permutation(&generate_doubly_even(cipher.width).expect("checked doubly even"));
    let cells = unscramble(&cipher.pointers, &perm).map_err(|_| CipherError::TruncatedPayload {
        expected: perm.len(),
        actual: cipher.pointers.len(),
    })?;
    let grid = PointerGrid {
        width: cipher.width,
        height: cipher.height,
        pointers: cells.into_iter().map(u32::from).collect(),
    };
    let dna = reverse_substitute(&grid, key)?;
    Ok(resynthesize(&dna))
}

pub fn serialize(cipher: &CipherImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 + 2 * cipher.pointers.len());
    out.extend_from_slice(&MAGIC);
    out.push(FORMAT_VERSION);
    out.push(cipher.flags());
    out.extend_from_slice(&(cipher.width as u32).to_le_bytes());
    out.extend_from_slice(&(cipher.height as u32).to_le_bytes());
    if let Some(fp) = cipher.fingerprint {
        out.extend_from_slice(&fp.to_le_bytes());
    }
    for p in &cipher.pointers {
        out.extend_from_slice(&p.to_le_bytes());
    }
    out
}

pub fn deserialize(bytes: &[u8]) -> Result<CipherImage, CipherError> {
    let need = |expected: usize| {
        if bytes.len() < expected {
            Err(CipherError::TruncatedPayload {
                expected,
                actual: bytes.len(),
            })
        } else {
            Ok(())
        }
    };

    if bytes.len() < MAGIC.len() || bytes[..4] != MAGIC {
        return Err(CipherError::BadMagic);
    }
    need(HEADER_LEN)?;
    if bytes[4] != FORMAT_VERSION {
        return Err(CipherError::UnsupportedVersion(bytes[4]));
    }
    let flags = bytes[5];
    if flags & !FLAG_FINGERPRINT != 0 {
        return Err(CipherError::UnsupportedFlags(flags));
    }
    let width = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[10..14].try_into().unwrap()) as usize;
    check_dimensions(width, height)?;

    let mut pos = HEADER_LEN;
    let fingerprint = if flags & FLAG_FINGERPRINT != 0 {
        need(pos + 8)?;
        let fp = u64::from_le_bytes(bytes[pos..pos + 8].try_into().unwrap());
        pos += 8;
        Some(fp)
    } else {
        None
    };

    let end = width
        .checked_mul(height)
        .and_then(|cells| cells.checked_mul(2))
        .and_then(|len| len.checked_add(pos))
        .unwrap_or(usize::MAX);
    need(end)?;
    if bytes.len() > end {
        return Err(CipherError::TrailingBytes(bytes.len() - end));
    }
    let pointers = bytes[pos..end]
        .chunks_exact(2)
        .map(|c| u16::from_le_bytes([c[0], c[1]]))
        .collect();

    Ok(CipherImage {
        width,
        height,
        pointers,
        fingerprint,
    })
}
