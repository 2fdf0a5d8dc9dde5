//! DNA digital coding of pixels.
//!
//! Each nucleotide carries two bits: `C = 00`, `T = 01`, `A = 10`, `G = 11`.
//! A byte is split into four bit-pairs, most significant first, giving one
//! [`Quad`] per pixel.

use std::fmt;

use crate::imageio::PlainImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nucleotide {
    C,
    T,
    A,
    G,
}

impl Nucleotide {
    /// All four bases, indexed by their 2-bit code.
    pub const ALL: [Nucleotide; 4] = [Nucleotide::C, Nucleotide::T, Nucleotide::A, Nucleotide::G];

    pub const fn code(self) -> u8 {
        match self {
            Nucleotide::C => 0b00,
            Nucleotide::T => 0b01,
            Nucleotide::A => 0b10,
            Nucleotide::G => 0b11,
        }
    }

    /// Only the low two bits of `code` are used.
    pub const fn from_code(code: u8) -> Self {
        Self::ALL[(code & 0b11) as usize]
    }

    pub const fn symbol(self) -> char {
        match self {
            Nucleotide::C => 'C',
            Nucleotide::T => 'T',
            Nucleotide::A => 'A',
            Nucleotide::G => 'G',
        }
    }

    /// Case-insensitive parse of `A`, `C`, `G` or `T`.
    pub const fn from_symbol(symbol: u8) -> Option<Self> {
        match symbol.to_ascii_uppercase() {
            b'C' => Some(Nucleotide::C),
            b'T' => Some(Nucleotide::T),
            b'A' => Some(Nucleotide::A),
            b'G' => Some(Nucleotide::G),
            _ => None,
        }
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Four nucleotides, most significant bit-pair first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quad(pub [Nucleotide; 4]);

impl Quad {
    pub fn to_byte(self) -> u8 {
        self.0.iter().fold(0u8, |acc, n| (acc << 2) | n.code())
    }

    pub fn from_byte(value: u8) -> Self {
        Quad([
            Nucleotide::from_code(value >> 6),
            Nucleotide::from_code(value >> 4),
            Nucleotide::from_code(value >> 2),
            Nucleotide::from_code(value),
        ])
    }

    /// Reads the first four entries of `bases`. Panics if fewer than four.
    pub fn from_slice(bases: &[Nucleotide]) -> Self {
        Quad([bases[0], bases[1], bases[2], bases[3]])
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in self.0 {
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Quad {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return Err(format!("quad must have 4 symbols, got {:?}", s));
        }
        let mut out = [Nucleotide::C; 4];
        for (slot, &b) in out.iter_mut().zip(bytes) {
            *slot = Nucleotide::from_symbol(b)
                .ok_or_else(|| format!("invalid nucleotide {:?} in {:?}", b as char, s))?;
        }
        Ok(Quad(out))
    }
}

pub fn encode_pixel(value: u8) -> Quad {
    Quad::from_byte(value)
}

pub fn decode_quad(q: Quad) -> u8 {
    q.to_byte()
}

/// A raster of quads, one per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnaImage {
    pub width: usize,
    pub height: usize,
    pub quads: Vec<Quad>,
}

/// SYNTHESIS: pixel raster to DNA image.
pub fn synthesize(image: &PlainImage) -> DnaImage {
    DnaImage {
        width: image.width(),
        height: image.height(),
        quads: image.pixels().iter().map(|&p| encode_pixel(p)).collect(),
    }
}

/// Rev-Synthesis: DNA image back to a pixel raster.
pub fn resynthesize(dna: &DnaImage) -> PlainImage {
    let pixels = dna.quads.iter().map(|&q| decode_quad(q)).collect();
    PlainImage::new(dna.width, dna.height, pixels).expect("DnaImage dimensions are consistent")
}
