use crate::error::{Error, Result};
use crate::model::{Permutation, PuzzleOrder};

/// The `n` constraint sets `cs_π(1..=n)` of a permutation, each holding `n`
/// cells, together with the reverse lookup cell → set index.
///
/// `cs_π(j) = {π(i) | (j−1)n < i ≤ jn}`. The cells inside a set are kept in the
/// order of `i`, i.e. `sets[j][k] = π((j−1)n + k + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSetSystem {
    n: usize,
    sets: Vec<Vec<usize>>,
    set_of: Vec<usize>,
}

impl ConstraintSetSystem {
    pub fn new(pi: &Permutation, order: PuzzleOrder) -> Result<Self> {
        let n = order.get();
        let cells = order.cells()?;
        if pi.len() != cells {
            return Err(Error::DimensionMismatch {
                expected: cells,
                actual: pi.len(),
            });
        }
        let mut sets = Vec::with_capacity(n);
        let mut set_of = vec![0; cells];
        for j in 0..n {
            let set: Vec<usize> = (j * n + 1..=(j + 1) * n).map(|i| pi.image(i)).collect();
            for &c in &set {
                set_of[c - 1] = j + 1;
            }
            sets.push(set);
        }
        Ok(ConstraintSetSystem { n, sets, set_of })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// `cs_π(j)` for `1 ≤ j ≤ n`, in defining order.
    pub fn set(&self, j: usize) -> &[usize] {
        &self.sets[j - 1]
    }

    pub fn sets(&self) -> impl Iterator<Item = &[usize]> {
        self.sets.iter().map(Vec::as_slice)
    }

    /// `cs_π(j)` sorted ascending.
    pub fn sorted_set(&self, j: usize) -> Vec<usize> {
        let mut s = self.sets[j - 1].clone();
        s.sort_unstable();
        s
    }

    /// Index `j` of the constraint set containing `cell`.
    pub fn set_of(&self, cell: usize) -> usize {
        self.set_of[cell - 1]
    }

    /// Same family of sets, irrespective of the underlying permutation.
    pub fn same_partition(&self, other: &ConstraintSetSystem) -> bool {
        self.n == other.n && (1..=self.n).all(|j| self.sorted_set(j) == other.sorted_set(j))
    }

    /// Partition check: pairwise disjoint, covering `1..=n²`, each of size `n`.
    pub fn is_partition(&self) -> bool {
        let cells = self.n * self.n;
        let mut seen = vec![false; cells];
        for set in &self.sets {
            if set.len() != self.n {
                return false;
            }
            for &c in set {
                if c == 0 || c > cells || std::mem::replace(&mut seen[c - 1], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
