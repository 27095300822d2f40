//! Problem instance: order, permutations, the difference matrices `A(n)`, `A`,
//! `A_π`, constraint sets and givens.

mod constraint;
mod matrix;
mod permutation;
mod puzzle;

pub use constraint::ConstraintSetSystem;
pub use matrix::{
    all_nonzero, build_a, build_block_a, build_permuted_a, pair_count, ConstraintMatrix,
};
pub use permutation::Permutation;
pub use puzzle::{Givens, Puzzle};

use crate::error::{Error, Result};

/// Largest order accepted for a puzzle; candidate values are tracked in `u64` masks.
pub const MAX_ORDER: usize = 64;

/// Side length `n` of the value range; a puzzle has `n²` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PuzzleOrder(usize);

impl PuzzleOrder {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(n, "order must be at least 1"));
        }
        Ok(PuzzleOrder(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `n²`, overflow-checked.
    pub fn cells(self) -> Result<usize> {
        self.0.checked_mul(self.0).ok_or(Error::Overflow("n²"))
    }

    /// `s(n) = n(n−1)/2`.
    pub fn pair_count(self) -> Result<usize> {
        pair_count(self.0)
    }
}

/// Permutations whose constraint sets are the rows, columns and `m × m` blocks
/// of a row-major `m² × m²` grid (cell `(row, col)` is `(row−1)·n + col`).
pub fn classical_permutations(m: usize) -> Result<[Permutation; 3]> {
    if m == 0 {
        return Err(Error::InvalidOrder(m, "block size must be at least 1"));
    }
    let n = m.checked_mul(m).ok_or(Error::Overflow("m²"))?;
    let cells = n.checked_mul(n).ok_or(Error::Overflow("n²"))?;

    let rows = Permutation::identity(cells);

    let mut cols = vec![0; cells];
    for j in 0..n {
        for k in 0..n {
            cols[j * n + k] = k * n + j + 1;
        }
    }

    let mut blocks = vec![0; cells];
    for j in 0..n {
        let (band, stack) = (j / m, j % m);
        for k in 0..n {
            let row = band * m + k / m;
            let col = stack * m + k % m;
            blocks[j * n + k] = row * n + col + 1;
        }
    }

    Ok([
        rows,
        Permutation::from_images(cols)?,
        Permutation::from_images(blocks)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_validation() {
        assert!(PuzzleOrder::new(0).is_err());
        assert_eq!(PuzzleOrder::new(9).unwrap().cells().unwrap(), 81);
        assert_eq!(PuzzleOrder::new(9).unwrap().pair_count().unwrap(), 36);
        assert!(PuzzleOrder::new(usize::MAX).unwrap().cells().is_err());
    }

    #[test]
    fn classical_constraint_sets() {
        let [p1, p2, p3] = classical_permutations(2).unwrap();
        let o = PuzzleOrder::new(4).unwrap();
        assert!(p1.is_identity());
        let cols = ConstraintSetSystem::new(&p2, o).unwrap();
        assert_eq!(cols.sorted_set(1), vec![1, 5, 9, 13]);
        let blocks = ConstraintSetSystem::new(&p3, o).unwrap();
        assert_eq!(blocks.sorted_set(1), vec![1, 2, 5, 6]);
        assert_eq!(blocks.sorted_set(4), vec![11, 12, 15, 16]);

        let [p1, p2, p3] = classical_permutations(3).unwrap();
        let o = PuzzleOrder::new(9).unwrap();
        let blocks = ConstraintSetSystem::new(&p3, o).unwrap();
        assert_eq!(blocks.sorted_set(1), vec![1, 2, 3, 10, 11, 12, 19, 20, 21]);
        let rows = ConstraintSetSystem::new(&p1, o).unwrap();
        let cols = ConstraintSetSystem::new(&p2, o).unwrap();
        assert_eq!(rows.set_of(21), 3);
        assert_eq!(cols.set_of(21), 3);
        assert_eq!(blocks.set_of(21), 1);
    }
}
