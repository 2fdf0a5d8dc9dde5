//! Doubly-even magic squares and the cell permutation they induce.
//!
//! A square of order `n` sends the cell at row-major index `k` to index
//! `cells[k] - 1`. Encryption scrambles with that map; decryption applies
//! its inverse.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MagicError {
    #[error("order {0} is not doubly even (must be a positive multiple of 4)")]
    NotDoublyEven(usize),
    #[error("grid has {actual} cells, permutation expects {expected}")]
    LengthMismatch { expected: usize, actual: usize },
}

impl MagicError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::NotDoublyEven(_) => "NotDoublyEven",
            Self::LengthMismatch { .. } => "LengthMismatch",
        }
    }
}

/// Common line sum `n(n² + 1) / 2`.
pub fn magic_constant(n: u64) -> u64 {
    n * (n * n + 1) / 2
}

pub fn is_doubly_even(n: usize) -> bool {
    n >= 4 && n.is_multiple_of(4)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagicSquare {
    order: usize,
    cells: Vec<u32>,
}

impl MagicSquare {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Row-major cell values.
    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.order + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.cells.chunks(self.order)
    }

    pub fn magic_constant(&self) -> u64 {
        magic_constant(self.order as u64)
    }
}

impl fmt::Display for MagicSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = (self.order * self.order).to_string().len();
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Fills `1..=n²` row-major and complements (`v -> n² + 1 - v`) the cells on
/// the diagonals of every 4×4 block.
pub fn generate_doubly_even(n: usize) -> Result<MagicSquare, MagicError> {
    if !is_doubly_even(n) {
        return Err(MagicError::NotDoublyEven(n));
    }
    let nn = (n * n) as u32;
    let cells = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n % 4, k % n % 4);
            let v = k as u32 + 1;
            if i == j || i + j == 3 {
                nn + 1 - v
            } else {
                v
            }
        })
        .collect();
    Ok(MagicSquare { order: n, cells })
}

/// A bijection on `0..len` with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    backward: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        let forward: Vec<usize> = (0..len).collect();
        Self {
            backward: forward.clone(),
            forward,
        }
    }

    /// Returns `None` unless `forward` is a bijection on `0..forward.len()`.
    pub fn from_forward(forward: Vec<usize>) -> Option<Self> {
        let mut backward = vec![usize::MAX; forward.len()];
        for (src, &dst) in forward.iter().enumerate() {
            if dst >= forward.len() || backward[dst] != usize::MAX {
                return None;
            }
            backward[dst] = src;
        }
        Some(Self { forward, backward })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self, k: usize) -> usize {
        self.forward[k]
    }

    pub fn backward(&self, k: usize) -> usize {
        self.backward[k]
    }
}

pub fn to_permutation(ms: &MagicSquare) -> Permutation {
    let forward = ms.cells.iter().map(|&v| v as usize - 1).collect();
    Permutation::from_forward(forward).expect("magic square cells are a permutation of 1..n²")
}

/// `output[perm.forward(k)] = grid[k]`.
pub fn scramble<T: Copy>(grid: &[T], perm: &Permutation) -> Result<Vec<T>, MagicError> {
    check_len(grid.len(), perm)?;
    Ok((0..grid.len()).map(|d| grid[perm.backward[d]]).collect())
}

/// `output[k] = grid[perm.forward(k)]`.
pub fn unscramble<T: Copy>(grid: &[T], perm: &Permutation) -> Result<Vec<T>, MagicError> {
    check_len(grid.len(), perm)?;
    Ok(perm.forward.iter().map(|&d| grid[d]).collect())
}

fn check_len(actual: usize, perm: &Permutation) -> Result<(), MagicError> {
    if actual != perm.len() {
        return Err(MagicError::LengthMismatch {
            expected: perm.len(),
            actual,
        });
    }
    Ok(())
}
