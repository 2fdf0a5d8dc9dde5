//! The shared key sequence: FASTA ingestion, the 4-mer occurrence index and
//! the key fingerprint.
//!
//! Only the first [`WINDOW_STARTS`] start positions are indexed so that every
//! pointer fits in 16 bits. A key therefore needs at least [`KEY_MIN_LEN`]
//! bases; anything past that is ignored by the cipher.

use std::fmt;

use thiserror::Error;

use crate::dna_codec::{Nucleotide, Quad};

/// Number of indexed start positions.
pub const WINDOW_STARTS: usize = 1 << 16;

/// Minimum usable key length: every indexed start begins a full quad, plus one spare base.
pub const KEY_MIN_LEN: usize = WINDOW_STARTS + 4;

const FNV_OFFSET_BASIS: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KeyError {
    #[error("invalid symbol {symbol:?} at byte offset {offset}")]
    InvalidSymbol { offset: usize, symbol: char },
    #[error("no nucleotides in input")]
    EmptySequence,
    #[error("key sequence has {0} bases, at least {KEY_MIN_LEN} required")]
    SequenceTooShort(usize),
    #[error("{} quad(s) never occur in the key window: {}", .0.len(), quad_list(.0))]
    QuadCoverage(Vec<Quad>),
}

impl KeyError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::InvalidSymbol { .. } => "InvalidSymbol",
            Self::EmptySequence => "EmptySequence",
            Self::SequenceTooShort(_) => "SequenceTooShort",
            Self::QuadCoverage(_) => "QuadCoverageError",
        }
    }
}

fn quad_list(quads: &[Quad]) -> String {
    const SHOWN: usize = 16;
    let mut s: Vec<String> = quads.iter().take(SHOWN).map(Quad::to_string).collect();
    if quads.len() > SHOWN {
        s.push("...".into());
    }
    s.join(",")
}

/// How [`parse_fasta`] treats symbols outside `ACGT`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Reject with [`KeyError::InvalidSymbol`].
    #[default]
    Strict,
    /// Drop silently.
    Sanitize,
}

impl std::str::FromStr for ParseMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ParseMode::Strict),
            "sanitize" => Ok(ParseMode::Sanitize),
            other => Err(format!(
                "unknown parse mode {other:?} (expected strict or sanitize)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NucleotideSequence {
    pub bases: Vec<Nucleotide>,
    pub source_name: String,
}

impl NucleotideSequence {
    pub fn new(bases: Vec<Nucleotide>, source_name: impl Into<String>) -> Self {
        Self {
            bases,
            source_name: source_name.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }
}

impl fmt::Display for NucleotideSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bases {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Parses FASTA text. All records are concatenated in file order; header
/// lines (`>`) are skipped and the first header names the sequence.
pub fn parse_fasta(bytes: &[u8], mode: ParseMode) -> Result<NucleotideSequence, KeyError> {
    let mut bases = Vec::with_capacity(bytes.len());
    let mut source_name: Option<String> = None;
    let mut offset = 0;

    for line in bytes.split_inclusive(|&b| b == b'\n') {
        let line_start = offset;
        offset += line.len();
        if line.first() == Some(&b'>') {
            if source_name.is_none() {
                let name = String::from_utf8_lossy(&line[1..]);
                source_name = Some(name.trim().to_string());
            }
            continue;
        }
        for (i, &b) in line.iter().enumerate() {
            if b.is_ascii_whitespace() {
                continue;
            }
            match Nucleotide::from_symbol(b) {
                Some(n) => bases.push(n),
                None if mode == ParseMode::Sanitize => {}
                None => {
                    return Err(KeyError::InvalidSymbol {
                        offset: line_start + i,
                        symbol: char::from(b),
                    })
                }
            }
        }
    }

    if bases.is_empty() {
        return Err(KeyError::EmptySequence);
    }
    Ok(NucleotideSequence {
        bases,
        source_name: source_name.unwrap_or_default(),
    })
}

/// FNV-1a (64-bit) over the ASCII symbols of the first [`KEY_MIN_LEN`] bases.
pub fn key_fingerprint(seq: &NucleotideSequence) -> Result<u64, KeyError> {
    if seq.len() < KEY_MIN_LEN {
        return Err(KeyError::SequenceTooShort(seq.len()));
    }
    Ok(seq.bases[..KEY_MIN_LEN]
        .iter()
        .fold(FNV_OFFSET_BASIS, |h, n| {
            (h ^ n.symbol() as u64).wrapping_mul(FNV_PRIME)
        }))
}

/// For each of the 256 quads, the sorted start positions in the window where it occurs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerIndex {
    occurrences: Vec<Vec<u16>>,
}

impl KmerIndex {
    /// Scans start positions `0..WINDOW_STARTS` once. Quads that never occur
    /// get empty lists; use [`KmerIndex::missing_quads`] to check coverage.
    pub fn scan(seq: &NucleotideSequence) -> Result<Self, KeyError> {
        if seq.len() < KEY_MIN_LEN {
            return Err(KeyError::SequenceTooShort(seq.len()));
        }
        let mut occurrences = vec![Vec::new(); 256];
        let mut word: u8 = 0;
        for (i, n) in seq.bases[..WINDOW_STARTS + 3].iter().enumerate() {
            word = (word << 2) | n.code();
            if i >= 3 {
                occurrences[word as usize].push((i - 3) as u16);
            }
        }
        Ok(Self { occurrences })
    }

    pub fn window_starts(&self) -> usize {
        WINDOW_STARTS
    }

    pub fn positions(&self, quad: Quad) -> &[u16] {
        &self.occurrences[quad.to_byte() as usize]
    }

    /// Occurrence list for the quad encoding `value`.
    pub fn positions_of_byte(&self, value: u8) -> &[u16] {
        &self.occurrences[value as usize]
    }

    pub fn min_multiplicity(&self) -> usize {
        self.occurrences.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.occurrences.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn missing_quads(&self) -> Vec<Quad> {
        (0..=255u8)
            .filter(|&v| self.occurrences[v as usize].is_empty())
            .map(Quad::from_byte)
            .collect()
    }

    pub fn covered_count(&self) -> usize {
        self.occurrences.iter().filter(|l| !l.is_empty()).count()
    }
}

/// A validated key: sequence, occurrence index and fingerprint.
///
/// Immutable once built; share it freely between concurrent encryptions.
#[derive(Debug, Clone)]
pub struct ReferenceKey {
    sequence: NucleotideSequence,
    index: KmerIndex,
    fingerprint: u64,
}

impl ReferenceKey {
    pub fn sequence(&self) -> &NucleotideSequence {
        &self.sequence
    }

    pub fn index(&self) -> &KmerIndex {
        &self.index
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn min_multiplicity(&self) -> usize {
        self.index.min_multiplicity()
    }

    /// The quad starting at `position`, if it lies inside the window.
    pub fn quad_at(&self, position: u32) -> Option<Quad> {
        let p = position as usize;
        (p < WINDOW_STARTS).then(|| Quad::from_slice(&self.sequence.bases[p..p + 4]))
    }
}

/// Indexes `seq` and checks that all 256 quads can be encrypted.
pub fn build_key(seq: NucleotideSequence) -> Result<ReferenceKey, KeyError> {
    let index = KmerIndex::scan(&seq)?;
    let missing = index.missing_quads();
    if !missing.is_empty() {
        return Err(KeyError::QuadCoverage(missing));
    }
    if index.min_multiplicity() == 1 {
        let single: Vec<Quad> = (0..=255u8)
            .filter(|&v| index.positions_of_byte(v).len() == 1)
            .map(Quad::from_byte)
            .collect();
        log::warn!(
            "key {:?}: {} quad(s) occur only once, their substitution is one-to-one: {}",
            seq.source_name,
            single.len(),
            quad_list(&single)
        );
    }
    let fingerprint = key_fingerprint(&seq)?;
    Ok(ReferenceKey {
        sequence: seq,
        index,
        fingerprint,
    })
}
