use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::model::{
    build_permuted_a, classical_permutations, ConstraintMatrix, ConstraintSetSystem, Permutation,
    PuzzleOrder, MAX_ORDER,
};

/// Pre-populated cells `(i_l, g_{i_l})`, kept sorted by cell.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Givens {
    pairs: Vec<(usize, u32)>,
}

impl Givens {
    pub fn none() -> Self {
        Givens::default()
    }

    /// Validates cells in `1..=n²`, values in `1..=n` and pairwise distinct cells.
    pub fn new(mut pairs: Vec<(usize, u32)>, order: PuzzleOrder) -> Result<Self> {
        let n = order.get();
        let cells = order.cells()?;
        for &(cell, value) in &pairs {
            if cell == 0 || cell > cells {
                return Err(Error::InvalidGivens(format!(
                    "cell {cell} outside 1..={cells}"
                )));
            }
            if value == 0 || value as usize > n {
                return Err(Error::InvalidGivens(format!(
                    "value {value} at cell {cell} outside 1..={n}"
                )));
            }
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidGivens(format!("cell {} given twice", w[0].0)));
        }
        Ok(Givens { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, u32)] {
        &self.pairs
    }

    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().map(|&(c, _)| c)
    }

    pub fn value_at(&self, cell: usize) -> Option<u32> {
        self.pairs
            .binary_search_by_key(&cell, |&(c, _)| c)
            .ok()
            .map(|k| self.pairs[k].1)
    }
}

/// A generalized Sudoku instance: order `n ≥ 2`, permutations `π1, π2, π3` on
/// `1..=n²` and a list of givens.
#[derive(Debug)]
pub struct Puzzle {
    order: PuzzleOrder,
    perms: [Permutation; 3],
    givens: Givens,
    systems: [ConstraintSetSystem; 3],
    matrices: OnceLock<[ConstraintMatrix; 3]>,
}

impl Clone for Puzzle {
    fn clone(&self) -> Self {
        Puzzle {
            order: self.order,
            perms: self.perms.clone(),
            givens: self.givens.clone(),
            systems: self.systems.clone(),
            matrices: OnceLock::new(),
        }
    }
}

impl PartialEq for Puzzle {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.perms == other.perms && self.givens == other.givens
    }
}

impl Eq for Puzzle {}

impl Puzzle {
    pub fn new(order: PuzzleOrder, perms: [Permutation; 3], givens: Givens) -> Result<Self> {
        let n = order.get();
        if n < 2 {
            return Err(Error::InvalidOrder(n, "a puzzle needs n ≥ 2"));
        }
        if n > MAX_ORDER {
            return Err(Error::InvalidOrder(n, "orders above 64 are not supported"));
        }
        let systems = [
            ConstraintSetSystem::new(&perms[0], order)?,
            ConstraintSetSystem::new(&perms[1], order)?,
            ConstraintSetSystem::new(&perms[2], order)?,
        ];
        let givens = Givens::new(givens.pairs, order)?;
        Ok(Puzzle {
            order,
            perms,
            givens,
            systems,
            matrices: OnceLock::new(),
        })
    }

    /// Classical `m² × m²` Sudoku with rows, columns and blocks as constraint sets.
    pub fn classical(m: usize, givens: Vec<(usize, u32)>) -> Result<Self> {
        let order = PuzzleOrder::new(m.checked_mul(m).ok_or(Error::Overflow("m²"))?)?;
        let perms = classical_permutations(m)?;
        Puzzle::new(order, perms, Givens::new(givens, order)?)
    }

    /// Classical puzzle from a row-major value list where `0` marks an empty cell.
    pub fn classical_from_grid(m: usize, grid: &[u32]) -> Result<Self> {
        let givens = grid
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (i + 1, v))
            .collect();
        let puzzle = Puzzle::classical(m, givens)?;
        if grid.len() != puzzle.cells() {
            return Err(Error::DimensionMismatch {
                expected: puzzle.cells(),
                actual: grid.len(),
            });
        }
        Ok(puzzle)
    }

    pub fn order(&self) -> PuzzleOrder {
        self.order
    }

    pub fn n(&self) -> usize {
        self.order.get()
    }

    pub fn cells(&self) -> usize {
        self.n() * self.n()
    }

    /// `π_r` for `r ∈ {1, 2, 3}`.
    pub fn perm(&self, r: usize) -> &Permutation {
        &self.perms[r - 1]
    }

    pub fn perms(&self) -> &[Permutation; 3] {
        &self.perms
    }

    /// Constraint sets of `π_r` for `r ∈ {1, 2, 3}`.
    pub fn system(&self, r: usize) -> &ConstraintSetSystem {
        &self.systems[r - 1]
    }

    pub fn systems(&self) -> &[ConstraintSetSystem; 3] {
        &self.systems
    }

    pub fn givens(&self) -> &Givens {
        &self.givens
    }

    /// `A_{π_r}`, built on first use.
    pub fn matrix(&self, r: usize) -> &ConstraintMatrix {
        &self.matrices()[r - 1]
    }

    fn matrices(&self) -> &[ConstraintMatrix; 3] {
        self.matrices.get_or_init(|| {
            let build = |p: &Permutation| {
                build_permuted_a(self.order, p).expect("order and permutation validated")
            };
            [
                build(&self.perms[0]),
                build(&self.perms[1]),
                build(&self.perms[2]),
            ]
        })
    }

    /// `A_eq` (one unit row per given) and the right-hand side `g`.
    pub fn equality_system(&self) -> (ConstraintMatrix, Vec<i64>) {
        let mut m = ConstraintMatrix::empty(self.cells());
        let mut g = Vec::with_capacity(self.givens.len());
        for &(cell, value) in self.givens.pairs() {
            m.push_row(vec![(cell, 1)]).expect("given cell in range");
            g.push(i64::from(value));
        }
        (m, g)
    }

    /// Copy of this puzzle with replaced givens.
    pub fn with_givens(&self, givens: Vec<(usize, u32)>) -> Result<Puzzle> {
        Puzzle::new(
            self.order,
            self.perms.clone(),
            Givens::new(givens, self.order)?,
        )
    }

    /// Copy of this puzzle with one more given.
    pub fn with_given(&self, cell: usize, value: u32) -> Result<Puzzle> {
        let mut pairs = self.givens.pairs().to_vec();
        pairs.push((cell, value));
        self.with_givens(pairs)
    }

    /// `Some(m)` when the three families of constraint sets are the rows,
    /// columns and blocks of an `m² × m²` grid.
    pub fn classical_block_size(&self) -> Option<usize> {
        let n = self.n();
        let m = (1..=n).find(|m| m * m >= n)?;
        if m * m != n {
            return None;
        }
        let classical = classical_permutations(m).ok()?;
        (0..3)
            .all(|r| {
                ConstraintSetSystem::new(&classical[r], self.order)
                    .map(|cs| cs.same_partition(&self.systems[r]))
                    .unwrap_or(false)
            })
            .then_some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn givens_validation() {
        let o = PuzzleOrder::new(4).unwrap();
        assert!(Givens::new(vec![(17, 1)], o).is_err());
        assert!(Givens::new(vec![(0, 1)], o).is_err());
        assert!(Givens::new(vec![(1, 5)], o).is_err());
        assert!(Givens::new(vec![(1, 0)], o).is_err());
        assert!(Givens::new(vec![(3, 1), (3, 2)], o).is_err());
        let g = Givens::new(vec![(9, 2), (3, 1)], o).unwrap();
        assert_eq!(g.pairs(), &[(3, 1), (9, 2)]);
        assert_eq!(g.value_at(9), Some(2));
        assert_eq!(g.value_at(4), None);
    }

    #[test]
    fn puzzle_requires_order_two() {
        let o = PuzzleOrder::new(1).unwrap();
        let id = Permutation::identity(1);
        assert!(Puzzle::new(o, [id.clone(), id.clone(), id], Givens::none()).is_err());
    }

    #[test]
    fn equality_rows_follow_givens() {
        let p = Puzzle::classical(2, vec![(5, 3), (2, 1)]).unwrap();
        let (a_eq, g) = p.equality_system();
        assert_eq!(a_eq.nrows(), 2);
        assert_eq!(a_eq.row(1), &[(2, 1)]);
        assert_eq!(a_eq.row(2), &[(5, 1)]);
        assert_eq!(g, vec![1, 3]);
    }

    #[test]
    fn classical_detection() {
        assert_eq!(
            Puzzle::classical(2, vec![]).unwrap().classical_block_size(),
            Some(2)
        );
        let o = PuzzleOrder::new(4).unwrap();
        let id = Permutation::identity(16);
        let p = Puzzle::new(o, [id.clone(), id.clone(), id], Givens::none()).unwrap();
        assert_eq!(p.classical_block_size(), None);
    }
}
