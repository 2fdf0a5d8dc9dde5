//! Security analyses: histograms, adjacent-pixel correlation, the XOR replay
//! chosen-plaintext attack and differential sensitivity.

use std::fmt;

use thiserror::Error;

use crate::cipher::{encrypt, CipherError};
use crate::imageio::PlainImage;
use crate::reference_key::ReferenceKey;
use crate::substitution::RandomStream;

/// Default number of sampled pairs for [`adjacent_correlation`].
pub const DEFAULT_SAMPLE_N: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("a series has zero variance")]
    ZeroVariance,
    #[error("a {width}x{height} image has no {direction} neighbours")]
    NoAdjacentPairs {
        width: usize,
        height: usize,
        direction: Direction,
    },
    #[error("empty input")]
    EmptyInput,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Cipher(#[from] CipherError),
}

impl AnalysisError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LengthMismatch { .. } => "LengthMismatch",
            Self::TooFewSamples(_) => "TooFewSamples",
            Self::ZeroVariance => "ZeroVariance",
            Self::NoAdjacentPairs { .. } => "NoAdjacentPairs",
            Self::EmptyInput => "EmptyInput",
            Self::NoTrials => "NoTrials",
            Self::Cipher(e) => e.name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub bins: [u64; 256],
    pub total: u64,
}

impl Histogram {
    pub fn mean_bin(&self) -> f64 {
        self.total as f64 / 256.0
    }

    pub fn max_bin(&self) -> u64 {
        self.bins.iter().copied().max().unwrap_or(0)
    }

    /// Pearson chi-square statistic against the uniform distribution over 256 bins.
    pub fn chi_square_uniform(&self) -> f64 {
        let expected = self.mean_bin();
        if expected == 0.0 {
            return 0.0;
        }
        self.bins
            .iter()
            .map(|&o| {
                let d = o as f64 - expected;
                d * d / expected
            })
            .sum()
    }
}

pub fn histogram(values: &[u8]) -> Histogram {
    let mut bins = [0u64; 256];
    for &v in values {
        bins[v as usize] += 1;
    }
    Histogram {
        bins,
        total: values.len() as u64,
    }
}

/// Ciphertext histogram: each 16-bit pointer contributes its high byte.
pub fn pointer_histogram(pointers: &[u16]) -> Histogram {
    let high: Vec<u8> = pointers.iter().map(|&p| (p >> 8) as u8).collect();
    histogram(&high)
}

/// Pearson correlation in the raw-sums form
/// `(nΣxy − ΣxΣy) / (√(nΣx² − (Σx)²) · √(nΣy² − (Σy)²))`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, AnalysisError> {
    if x.len() != y.len() {
        return Err(AnalysisError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(AnalysisError::TooFewSamples(x.len()));
    }
    let n = x.len() as f64;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sx += a;
        sy += b;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx <= 0.0 || vy <= 0.0 {
        return Err(AnalysisError::ZeroVariance);
    }
    let r = (n * sxy - sx * sy) / (vx * vy).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Horizontal,
    Vertical,
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [
        Direction::Horizontal,
        Direction::Vertical,
        Direction::Diagonal,
    ];

    /// (row, column) step to the neighbour.
    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (0, 1),
            Direction::Vertical => (1, 0),
            Direction::Diagonal => (1, 1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
            Direction::Diagonal => "diagonal",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub direction: Direction,
    pub sample_count: usize,
    pub r: f64,
}

/// Samples `sample_n` pixel positions uniformly with replacement among those
/// whose `direction` neighbour exists, then correlates the pairs.
pub fn adjacent_correlation<T: Copy + Into<f64>>(
    cells: &[T],
    width: usize,
    height: usize,
    direction: Direction,
    sample_n: usize,
    rng: &mut RandomStream,
) -> Result<CorrelationReport, AnalysisError> {
    if cells.len() != width * height {
        return Err(AnalysisError::LengthMismatch {
            left: cells.len(),
            right: width * height,
        });
    }
    if sample_n < 2 {
        return Err(AnalysisError::TooFewSamples(sample_n));
    }
    let (dr, dc) = direction.offset();
    if width <= dc || height <= dr {
        return Err(AnalysisError::NoAdjacentPairs {
            width,
            height,
            direction,
        });
    }
    let (rows, cols) = (height - dr, width - dc);

    let mut x = Vec::with_capacity(sample_n);
    let mut y = Vec::with_capacity(sample_n);
    for _ in 0..sample_n {
        let r = rng.index(rows);
        let c = rng.index(cols);
        x.push(cells[r * width + c].into());
        y.push(cells[(r + dr) * width + c + dc].into());
    }
    let r = pearson(&x, &y)?;
    Ok(CorrelationReport {
        direction,
        sample_count: sample_n,
        r,
    })
}

/// XOR replay: `M = plain ⊕ known_cipher`, `candidate = M ⊕ target`, keeping
/// the low byte of each 16-bit cell. Plain bytes are zero-extended.
pub fn chosen_plaintext_attack(
    known_plain: &[u8],
    known_cipher: &[u16],
    target_cipher: &[u16],
) -> Result<Vec<u8>, AnalysisError> {
    if known_plain.len() != known_cipher.len() {
        return Err(AnalysisError::LengthMismatch {
            left: known_plain.len(),
            right: known_cipher.len(),
        });
    }
    if known_cipher.len() != target_cipher.len() {
        return Err(AnalysisError::LengthMismatch {
            left: known_cipher.len(),
            right: target_cipher.len(),
        });
    }
    Ok(known_plain
        .iter()
        .zip(known_cipher)
        .zip(target_cipher)
        .map(|((&p, &c), &z)| {
            let keystream = u16::from(p) ^ c;
            (keystream ^ z) as u8
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Success,
    Failure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackReport {
    pub recovered: Vec<u8>,
    pub match_fraction: f64,
    pub verdict: Verdict,
}

pub fn evaluate_attack(candidate: &[u8], truth: &[u8]) -> Result<AttackReport, AnalysisError> {
    if candidate.len() != truth.len() {
        return Err(AnalysisError::LengthMismatch {
            left: candidate.len(),
            right: truth.len(),
        });
    }
    if candidate.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let matching = candidate.iter().zip(truth).filter(|(a, b)| a == b).count();
    let match_fraction = matching as f64 / candidate.len() as f64;
    let verdict = if matching == candidate.len() {
        Verdict::Success
    } else {
        Verdict::Failure
    };
    Ok(AttackReport {
        recovered: candidate.to_vec(),
        match_fraction,
        verdict,
    })
}

/// How the two encryptions in a differential trial obtain their randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DifferentialMode {
    /// Independent fresh streams for the original and the modified image.
    Fresh,
    /// Both images encrypted from the same seed.
    PairedSeed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialReport {
    pub mode: DifferentialMode,
    /// Number of differing pointer cells per trial.
    pub changed_cells: Vec<usize>,
    pub cells: usize,
    pub mean_change_rate: f64,
}

/// Mean fraction of ciphertext cells that change after adding 1 (mod 256)
/// to one random pixel, with fresh randomness for every encryption.
pub fn differential_sensitivity(
    image: &PlainImage,
    key: &ReferenceKey,
    trials: usize,
    rng: &mut RandomStream,
) -> Result<f64, AnalysisError> {
    differential_sensitivity_with(image, key, trials, DifferentialMode::Fresh, rng)
        .map(|r| r.mean_change_rate)
}

pub fn differential_sensitivity_with(
    image: &PlainImage,
    key: &ReferenceKey,
    trials: usize,
    mode: DifferentialMode,
    rng: &mut RandomStream,
) -> Result<DifferentialReport, AnalysisError> {
    if trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    let cells = image.pixels().len();
    if cells == 0 {
        return Err(AnalysisError::EmptyInput);
    }
    let mut changed_cells = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut modified = image.clone();
        let k = rng.index(cells);
        modified.pixels_mut()[k] = modified.pixels()[k].wrapping_add(1);

        let (mut first, mut second) = match mode {
            DifferentialMode::Fresh => (rng.fork(), rng.fork()),
            DifferentialMode::PairedSeed => {
                let s = rng.fork();
                (s.clone(), s)
            }
        };
        let a = encrypt(image, key, &mut first)?;
        let b = encrypt(&modified, key, &mut second)?;
        let diff = a
            .pointers()
            .iter()
            .zip(b.pointers())
            .filter(|(x, y)| x != y)
            .count();
        changed_cells.push(diff);
    }
    let mean_change_rate = changed_cells
        .iter()
        .map(|&d| d as f64 / cells as f64)
        .sum::<f64>()
        / trials as f64;
    Ok(DifferentialReport {
        mode,
        changed_cells,
        cells,
        mean_change_rate,
    })
}
