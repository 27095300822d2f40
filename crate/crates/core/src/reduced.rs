//! Unicity cells and reduced problems over a base set of cells.
//!
//! Projecting onto a base set `J` keeps only the columns of `J`. Rows of the
//! projected `A_{π_r}` with at most one nonzero and zero rows of the projected
//! `A_eq` are dropped, giving `B_1`, `B_2`, `B_3`, `B_eq` and `g′`. Every
//! solution of the full problem projects to a solution of the reduced one, so a
//! value forced on the reduced problem is forced on the full problem too.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::feasibility::{full_mask, solve, Assignment, SolutionSet};
use crate::model::{all_nonzero, ConstraintMatrix, Puzzle};

/// Upper bound on the reduced-solution count recorded in a certificate.
pub const CERTIFICATE_COUNT_CAP: usize = 10_000;

/// A sorted, duplicate-free set of cells `j_1 < … < j_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct BaseSet {
    cells: Vec<usize>,
}

impl BaseSet {
    pub fn new(mut cells: Vec<usize>, total: usize) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::invalid("base set must contain at least one cell"));
        }
        cells.sort_unstable();
        if let Some(w) = cells.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "cell {} repeated in base set",
                w[0]
            )));
        }
        if let Some(&bad) = cells.iter().find(|&&c| c == 0 || c > total) {
            return Err(Error::invalid(format!("cell {bad} outside 1..={total}")));
        }
        Ok(BaseSet { cells })
    }

    pub fn all(total: usize) -> Self {
        BaseSet {
            cells: (1..=total).collect(),
        }
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// `t_J(cell)`: the 1-based position of `cell` inside `J`.
    pub fn position(&self, cell: usize) -> Option<usize> {
        self.cells.binary_search(&cell).ok().map(|k| k + 1)
    }
}

/// `P_J(x) = (x_{j_1}, …, x_{j_p})`.
pub fn project_vector<T: Clone>(base: &BaseSet, x: &[T]) -> Vec<T> {
    base.cells.iter().map(|&c| x[c - 1].clone()).collect()
}

/// Row-wise projection; the row count is preserved, so zero rows may appear.
pub fn project_matrix(base: &BaseSet, m: &ConstraintMatrix) -> ConstraintMatrix {
    let mut out = ConstraintMatrix::empty(base.len());
    for row in m.row_iter() {
        let projected = row
            .iter()
            .filter_map(|&(c, v)| base.position(c).map(|k| (k, v)))
            .collect();
        out.push_row(projected)
            .expect("projected columns are in range");
    }
    out
}

/// The reduced problem induced by a base set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedProblem {
    n: usize,
    base: BaseSet,
    b: [ConstraintMatrix; 3],
    b_eq: ConstraintMatrix,
    g_prime: Vec<i64>,
    /// Original row (1-based) of each kept row of `B_r`.
    kept_rows: [Vec<usize>; 3],
    /// Original row of `A_eq` for each row of `B_eq`.
    kept_eq_rows: Vec<usize>,
}

pub fn build_reduced(puzzle: &Puzzle, base: &BaseSet) -> Result<ReducedProblem> {
    if base.cells.last().is_some_and(|&c| c > puzzle.cells()) {
        return Err(Error::invalid("base set exceeds the puzzle's cells"));
    }
    let p = base.len();
    let mut b: [ConstraintMatrix; 3] = std::array::from_fn(|_| ConstraintMatrix::empty(p));
    let mut kept_rows: [Vec<usize>; 3] = Default::default();
    for r in 0..3 {
        let projected = project_matrix(base, puzzle.matrix(r + 1));
        for (k, row) in projected.row_iter().enumerate() {
            if row.len() >= 2 {
                b[r].push_row(row.to_vec())?;
                kept_rows[r].push(k + 1);
            }
        }
    }
    let (a_eq, g) = puzzle.equality_system();
    let projected = project_matrix(base, &a_eq);
    let mut b_eq = ConstraintMatrix::empty(p);
    let mut g_prime = Vec::new();
    let mut kept_eq_rows = Vec::new();
    for (k, row) in projected.row_iter().enumerate() {
        if !row.is_empty() {
            b_eq.push_row(row.to_vec())?;
            g_prime.push(g[k]);
            kept_eq_rows.push(k + 1);
        }
    }
    Ok(ReducedProblem {
        n: puzzle.n(),
        base: base.clone(),
        b,
        b_eq,
        g_prime,
        kept_rows,
        kept_eq_rows,
    })
}

impl ReducedProblem {
    pub fn p(&self) -> usize {
        self.base.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &BaseSet {
        &self.base
    }

    /// `B_r` for `r ∈ {1, 2, 3}`.
    pub fn b(&self, r: usize) -> &ConstraintMatrix {
        &self.b[r - 1]
    }

    pub fn b_eq(&self) -> &ConstraintMatrix {
        &self.b_eq
    }

    pub fn g_prime(&self) -> &[i64] {
        &self.g_prime
    }

    /// Reduced row `k` of `B_r` came from row `kept_rows(r)[k-1]` of `P_J(A_{π_r})`.
    pub fn kept_rows(&self, r: usize) -> &[usize] {
        &self.kept_rows[r - 1]
    }

    pub fn kept_eq_rows(&self) -> &[usize] {
        &self.kept_eq_rows
    }

    /// Matrix-form check: bounds, `B_r z <> 0` and `B_eq z = g′`.
    pub fn is_solution(&self, z: &[u32]) -> Result<bool> {
        if z.len() != self.p() {
            return Err(Error::DimensionMismatch {
                expected: self.p(),
                actual: z.len(),
            });
        }
        if !z.iter().all(|&v| v >= 1 && v as usize <= self.n) {
            return Ok(false);
        }
        let zi: Vec<i64> = z.iter().map(|&v| i64::from(v)).collect();
        for m in &self.b {
            if !all_nonzero(&m.mul_vec(&zi)?) {
                return Ok(false);
            }
        }
        Ok(self.b_eq.mul_vec(&zi)? == self.g_prime)
    }

    fn search(&self, extra: Option<(usize, u32)>) -> ReducedSearch {
        let p = self.p();
        let mut neighbors = vec![Vec::new(); p];
        for m in &self.b {
            for row in m.row_iter() {
                // projected difference rows always keep exactly the pair (+1, −1)
                assert!(
                    row.len() == 2 && row[0].1 == -row[1].1,
                    "reduced row is not a pairwise difference"
                );
                let (a, c) = (row[0].0 - 1, row[1].0 - 1);
                neighbors[a].push(c);
                neighbors[c].push(a);
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        let mut values = vec![0u32; p];
        let mut consistent = true;
        let mut fix = |pos: usize, v: u32| {
            let clash = values[pos] != 0 && values[pos] != v;
            values[pos] = v;
            !clash
        };
        for (row, &g) in self.b_eq.row_iter().zip(&self.g_prime) {
            match u32::try_from(g)
                .ok()
                .filter(|&v| v >= 1 && v as usize <= self.n)
            {
                Some(v) => consistent &= fix(row[0].0 - 1, v),
                None => consistent = false,
            }
        }
        if let Some((pos, v)) = extra {
            consistent &= fix(pos - 1, v);
        }
        for (a, list) in neighbors.iter().enumerate() {
            if values[a] != 0 && list.iter().any(|&c| values[c] == values[a]) {
                consistent = false;
            }
        }
        ReducedSearch {
            full: full_mask(self.n),
            neighbors,
            values,
            consistent,
        }
    }

    /// Visits reduced solutions in the deterministic search order.
    fn for_each(
        &self,
        extra: Option<(usize, u32)>,
        visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>,
    ) -> bool {
        let mut search = self.search(extra);
        if !search.consistent {
            return true;
        }
        search.run(visit).is_continue()
    }
}

struct ReducedSearch {
    full: u64,
    neighbors: Vec<Vec<usize>>,
    values: Vec<u32>,
    consistent: bool,
}

impl ReducedSearch {
    fn candidates(&self, idx: usize) -> u64 {
        let taken = self.neighbors[idx]
            .iter()
            .filter(|&&c| self.values[c] != 0)
            .fold(0u64, |acc, &c| acc | 1 << (self.values[c] - 1));
        self.full & !taken
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>) -> ControlFlow<()> {
        let mut best: Option<(usize, u64)> = None;
        for idx in 0..self.values.len() {
            if self.values[idx] != 0 {
                continue;
            }
            let cand = self.candidates(idx);
            if best.is_none_or(|(_, b)| cand.count_ones() < b.count_ones()) {
                best = Some((idx, cand));
                if cand == 0 {
                    break;
                }
            }
        }
        let Some((idx, mut cand)) = best else {
            return visit(&self.values);
        };
        while cand != 0 {
            let bit = cand & cand.wrapping_neg();
            cand ^= bit;
            self.values[idx] = bit.trailing_zeros() + 1;
            let flow = self.run(visit);
            self.values[idx] = 0;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// All `z ∈ {1..n}^p` solving the reduced problem, or the first `limit`.
pub fn enumerate_reduced(rp: &ReducedProblem, limit: Option<usize>) -> SolutionSet {
    let mut solutions = Vec::new();
    if limit == Some(0) {
        return SolutionSet {
            solutions,
            exhausted: false,
            limit,
        };
    }
    let exhausted = rp.for_each(None, &mut |z| {
        solutions.push(Assignment::new(z.to_vec()));
        if Some(solutions.len()) == limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    SolutionSet {
        solutions,
        exhausted,
        limit,
    }
}

/// Reduced-solution count up to `cap`, and whether the search completed.
pub fn count_reduced(rp: &ReducedProblem, cap: usize) -> Result<(usize, bool)> {
    if cap == 0 {
        return Err(Error::invalid("solution cap must be at least 1"));
    }
    let mut count = 0;
    let exhausted = rp.for_each(None, &mut |_| {
        count += 1;
        if count == cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok((count, exhausted))
}

/// Whether all solutions agree on one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum CellUnicity {
    /// Every solution carries this value.
    Unique(u32),
    /// There is no solution at all, so every value is forced vacuously.
    Vacuous,
    /// Two solutions disagree on the cell.
    Ambiguous,
}

impl CellUnicity {
    /// Whether this outcome forces `v` on the cell.
    pub fn forces(self, v: u32) -> bool {
        match self {
            CellUnicity::Unique(u) => u == v,
            CellUnicity::Vacuous => true,
            CellUnicity::Ambiguous => false,
        }
    }
}

fn first_reduced(rp: &ReducedProblem, extra: Option<(usize, u32)>) -> Option<Vec<u32>> {
    let mut found = None;
    rp.for_each(extra, &mut |z| {
        found = Some(z.to_vec());
        ControlFlow::Break(())
    });
    found
}

/// Unicity of the reduced component at 1-based position `pos`: one solution is
/// found, then every other value at `pos` is probed for feasibility.
pub fn reduced_position_unicity(rp: &ReducedProblem, pos: usize) -> Result<CellUnicity> {
    if pos == 0 || pos > rp.p() {
        return Err(Error::invalid(format!(
            "position {pos} outside 1..={}",
            rp.p()
        )));
    }
    let Some(z) = first_reduced(rp, None) else {
        return Ok(CellUnicity::Vacuous);
    };
    let v = z[pos - 1];
    let other_fits = (1..=rp.n as u32)
        .filter(|&w| w != v)
        .any(|w| first_reduced(rp, Some((pos, w))).is_some());
    Ok(if other_fits {
        CellUnicity::Ambiguous
    } else {
        CellUnicity::Unique(v)
    })
}

/// `true` iff every solution `z` of the reduced problem induced by `base` has
/// `z_{t_J(cell)} = v`; vacuously true when that problem has no solution.
pub fn is_unicity_cell_wrt(puzzle: &Puzzle, base: &BaseSet, cell: usize, v: u32) -> Result<bool> {
    let pos = base
        .position(cell)
        .ok_or_else(|| Error::invalid(format!("cell {cell} is not in the base set")))?;
    let rp = build_reduced(puzzle, base)?;
    Ok(reduced_position_unicity(&rp, pos)?.forces(v))
}

/// Whether all solutions of the full problem agree on `cell`.
///
/// One solution is found and each alternative value is probed by adding it as
/// a given; this is equivalent to comparing all members of `S(n, g)` without
/// enumerating them.
pub fn is_unicity_cell(puzzle: &Puzzle, cell: usize) -> Result<CellUnicity> {
    if cell == 0 || cell > puzzle.cells() {
        return Err(Error::invalid(format!(
            "cell {cell} outside 1..={}",
            puzzle.cells()
        )));
    }
    let Some(x) = solve(puzzle) else {
        return Ok(CellUnicity::Vacuous);
    };
    let v = x.get(cell);
    if puzzle.givens().value_at(cell).is_some() {
        return Ok(CellUnicity::Unique(v));
    }
    for w in (1..=puzzle.n() as u32).filter(|&w| w != v) {
        if solve(&puzzle.with_given(cell, w)?).is_some() {
            return Ok(CellUnicity::Ambiguous);
        }
    }
    Ok(CellUnicity::Unique(v))
}

/// Checks that `cell` is forced to `v` on the full problem exactly when some
/// base set containing it forces `v`.
///
/// The full base set is checked directly. `samples` further base sets
/// containing `cell` (its constraint sets, their union, and random subsets
/// drawn from `seed`) must never force a value that the full problem does not.
pub fn verify_base_set_equivalence(
    puzzle: &Puzzle,
    cell: usize,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let full = is_unicity_cell(puzzle, cell)?;
    let total = puzzle.cells();
    let n = puzzle.n() as u32;

    let everything = build_reduced(puzzle, &BaseSet::all(total))?;
    let via_full_base = reduced_position_unicity(&everything, cell)?;
    if via_full_base != full {
        return Ok(false);
    }

    let mut bases = vec![BaseSet::new(vec![cell], total)?];
    let mut union = vec![cell];
    for system in puzzle.systems() {
        let set = system.sorted_set(system.set_of(cell));
        union.extend_from_slice(&set);
        bases.push(BaseSet::new(set, total)?);
    }
    union.sort_unstable();
    union.dedup();
    bases.push(BaseSet::new(union, total)?);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let others: Vec<usize> = (1..=total).filter(|&c| c != cell).collect();
    for _ in 0..samples {
        let size = rng.gen_range(0..=others.len());
        let mut cells: Vec<usize> = others.choose_multiple(&mut rng, size).copied().collect();
        cells.push(cell);
        bases.push(BaseSet::new(cells, total)?);
    }

    for base in &bases {
        let rp = build_reduced(puzzle, base)?;
        let local = reduced_position_unicity(&rp, base.position(cell).expect("cell in base"))?;
        for v in 1..=n {
            if local.forces(v) && !full.forces(v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A base set on which a cell is forced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnicityCellCertificate {
    pub cell: usize,
    /// `Unique(v)`, or `Vacuous` when the reduced problem has no solution.
    pub value: CellUnicity,
    pub base_set: BaseSet,
    /// Reduced solutions counted up to [`CERTIFICATE_COUNT_CAP`].
    pub reduced_solutions: usize,
    pub exhausted: bool,
}

/// Greedy search for a small base set forcing `cell`.
///
/// Starts from `cell` plus every given sharing a constraint set with it (just
/// `{cell}` for a given cell). While the cell is not forced, adds the outside
/// cell whose own constraint sets meet `J` most often, givens before free
/// cells on ties, lowest index first.
/// `budget` bounds the number of growth steps.
pub fn find_small_base_set(
    puzzle: &Puzzle,
    cell: usize,
    budget: usize,
) -> Result<Option<UnicityCellCertificate>> {
    let total = puzzle.cells();
    if cell == 0 || cell > total {
        return Err(Error::invalid(format!("cell {cell} outside 1..={total}")));
    }
    let systems = puzzle.systems();
    let shares_set = |a: usize, b: usize| systems.iter().any(|s| s.set_of(a) == s.set_of(b));

    let mut in_base = vec![false; total + 1];
    in_base[cell] = true;
    if puzzle.givens().value_at(cell).is_none() {
        for c in puzzle.givens().cells().filter(|&c| shares_set(c, cell)) {
            in_base[c] = true;
        }
    }

    for round in 0..=budget {
        let base = BaseSet::new((1..=total).filter(|&c| in_base[c]).collect(), total)?;
        let rp = build_reduced(puzzle, &base)?;
        let outcome = reduced_position_unicity(&rp, base.position(cell).expect("cell in base"))?;
        if outcome != CellUnicity::Ambiguous {
            let (reduced_solutions, exhausted) = count_reduced(&rp, CERTIFICATE_COUNT_CAP)?;
            return Ok(Some(UnicityCellCertificate {
                cell,
                value: outcome,
                base_set: base,
                reduced_solutions,
                exhausted,
            }));
        }
        if round == budget || base.len() == total {
            break;
        }
        let touched: [Vec<bool>; 3] = std::array::from_fn(|r| {
            let mut hit = vec![false; puzzle.n() + 1];
            for &c in base.cells() {
                hit[systems[r].set_of(c)] = true;
            }
            hit
        });
        let next = (1..=total)
            .filter(|&c| !in_base[c])
            .max_by_key(|&c| {
                let score = (0..3).filter(|&r| touched[r][systems[r].set_of(c)]).count();
                let given = puzzle.givens().value_at(c).is_some();
                (score, given, std::cmp::Reverse(c))
            })
            .expect("base set is not full");
        in_base[next] = true;
    }
    Ok(None)
}
