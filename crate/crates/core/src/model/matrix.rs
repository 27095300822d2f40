use crate::error::{Error, Result};
use crate::model::{Permutation, PuzzleOrder};

/// Sparse integer matrix whose stored entries are `±1`.
///
/// Rows and columns are addressed 1-based through the public accessors. Zero
/// entries are never stored; each row keeps its entries sorted by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, i8)>>,
}

impl ConstraintMatrix {
    pub fn empty(cols: usize) -> Self {
        ConstraintMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    /// Builds a matrix from sparse rows of `(column, value)` pairs.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(usize, i8)>>) -> Result<Self> {
        let mut out = ConstraintMatrix::empty(cols);
        for row in rows {
            out.push_row(row)?;
        }
        Ok(out)
    }

    pub(crate) fn push_row(&mut self, mut row: Vec<(usize, i8)>) -> Result<()> {
        row.retain(|&(_, v)| v != 0);
        row.sort_unstable_by_key(|&(c, _)| c);
        for w in row.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::invalid(format!("column {} repeated in row", w[0].0)));
            }
        }
        for &(c, v) in &row {
            if c == 0 || c > self.cols {
                return Err(Error::DimensionMismatch {
                    expected: self.cols,
                    actual: c,
                });
            }
            if v != 1 && v != -1 {
                return Err(Error::invalid(format!("entry {v} is not ±1")));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Entry at 1-based `(row, col)`; zero when not stored.
    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.rows[row - 1]
            .binary_search_by_key(&col, |&(c, _)| c)
            .map(|k| self.rows[row - 1][k].1)
            .unwrap_or(0)
    }

    /// Stored entries of a 1-based row.
    pub fn row(&self, row: usize) -> &[(usize, i8)] {
        &self.rows[row - 1]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[(usize, i8)]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(c, v)| i64::from(v) * x[c - 1]).sum())
            .collect())
    }

    /// Dense copy; intended for small matrices in tests and diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<i8>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0; self.cols];
                for &(c, v) in row {
                    dense[c - 1] = v;
                }
                dense
            })
            .collect()
    }

    /// Column permutation `π(A) = (a^{π⁻¹(1)}, …, a^{π⁻¹(cols)})`: column `c`
    /// of `self` becomes column `π(c)` of the result.
    pub fn permute_columns(&self, pi: &Permutation) -> Result<Self> {
        if pi.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: pi.len(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut moved: Vec<(usize, i8)> =
                    row.iter().map(|&(c, v)| (pi.image(c), v)).collect();
                moved.sort_unstable_by_key(|&(c, _)| c);
                moved
            })
            .collect();
        Ok(ConstraintMatrix {
            cols: self.cols,
            rows,
        })
    }

    /// Block-diagonal matrix holding `count` copies of `block`.
    pub fn block_diagonal(block: &ConstraintMatrix, count: usize) -> Result<Self> {
        let cols = block
            .cols
            .checked_mul(count)
            .ok_or(Error::Overflow("block-diagonal width"))?;
        let mut out = ConstraintMatrix::empty(cols);
        for b in 0..count {
            let shift = b * block.cols;
            for row in &block.rows {
                out.rows
                    .push(row.iter().map(|&(c, v)| (c + shift, v)).collect());
            }
        }
        Ok(out)
    }
}

/// `s(n) = n(n−1)/2`, the number of rows of `A(n)`.
pub fn pair_count(n: usize) -> Result<usize> {
    n.checked_mul(n.saturating_sub(1))
        .map(|v| v / 2)
        .ok_or(Error::Overflow("s(n)"))
}

/// The pairwise-difference matrix `A(n)` with `s(n)` rows and `n` columns.
///
/// `A(1)` is empty; `A(n)` stacks `[1 | −U]` (one row per pair `(1, j)`) on top of
/// `[0 | A(n−1)]`, so every row has a `+1` at the smaller column and a `−1` at
/// the larger one.
pub fn build_a(order: PuzzleOrder) -> Result<ConstraintMatrix> {
    let n = order.get();
    pair_count(n)?;
    build_a_rec(n)
}

fn build_a_rec(n: usize) -> Result<ConstraintMatrix> {
    if n == 1 {
        return Ok(ConstraintMatrix::empty(1));
    }
    let tail = build_a_rec(n - 1)?;
    let mut a = ConstraintMatrix::empty(n);
    for j in 2..=n {
        a.rows.push(vec![(1, 1), (j, -1)]);
    }
    for row in tail.rows {
        a.rows
            .push(row.into_iter().map(|(c, v)| (c + 1, v)).collect());
    }
    Ok(a)
}

/// The block-diagonal matrix `A` with `n` copies of `A(n)` on its diagonal.
pub fn build_block_a(order: PuzzleOrder) -> Result<ConstraintMatrix> {
    ConstraintMatrix::block_diagonal(&build_a(order)?, order.get())
}

/// `A_π = π(A)`.
pub fn build_permuted_a(order: PuzzleOrder, pi: &Permutation) -> Result<ConstraintMatrix> {
    build_block_a(order)?.permute_columns(pi)
}

/// `true` iff every component is nonzero; vacuously true for the empty vector.
pub fn all_nonzero(y: &[i64]) -> bool {
    y.iter().all(|&v| v != 0)
}
