//! Solutions, the solution set `S(n, g)` and a deterministic backtracking
//! enumerator that every other analysis uses as its ground truth.
//!
//! Search order is fixed: the next cell is the unassigned cell with the fewest
//! candidates (lowest index on ties) and candidate values are tried in
//! ascending order. Two runs on the same puzzle therefore produce the same
//! ordered solution list.

use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{all_nonzero, Puzzle};

/// A length-`n²` value vector, 1-based cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Assignment(Vec<u32>);

impl Assignment {
    pub fn new(values: Vec<u32>) -> Self {
        Assignment(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value at a 1-based cell.
    pub fn get(&self, cell: usize) -> u32 {
        self.0[cell - 1]
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&v| i64::from(v)).collect()
    }
}

impl From<Vec<u32>> for Assignment {
    fn from(values: Vec<u32>) -> Self {
        Assignment(values)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Solver state: `0` marks an unassigned cell. Given cells are fixed at
/// construction and never reassigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    values: Vec<u32>,
    fixed: Vec<bool>,
}

impl PartialAssignment {
    pub fn from_puzzle(puzzle: &Puzzle) -> Self {
        let mut values = vec![0; puzzle.cells()];
        let mut fixed = vec![false; puzzle.cells()];
        for &(cell, v) in puzzle.givens().pairs() {
            values[cell - 1] = v;
            fixed[cell - 1] = true;
        }
        PartialAssignment { values, fixed }
    }

    pub fn get(&self, cell: usize) -> Option<u32> {
        Some(self.values[cell - 1]).filter(|&v| v != 0)
    }

    pub fn is_fixed(&self, cell: usize) -> bool {
        self.fixed[cell - 1]
    }

    pub fn unassigned(&self) -> usize {
        self.values.iter().filter(|&&v| v == 0).count()
    }

    fn set(&mut self, idx: usize, v: u32) {
        debug_assert!(!self.fixed[idx]);
        self.values[idx] = v;
    }

    fn clear(&mut self, idx: usize) {
        debug_assert!(!self.fixed[idx]);
        self.values[idx] = 0;
    }
}

/// Members of `S(n, g)` found by [`enumerate_solutions`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionSet {
    pub solutions: Vec<Assignment>,
    /// `true` iff the search tree was explored completely.
    pub exhausted: bool,
    pub limit: Option<usize>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn contains(&self, x: &Assignment) -> bool {
        self.solutions.iter().any(|s| s == x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Unique(Assignment),
    Multiple(Assignment, Assignment),
    Unsolvable,
}

impl Verdict {
    pub fn is_unique(&self) -> bool {
        matches!(self, Verdict::Unique(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Unique(_) => "unique",
            Verdict::Multiple(..) => "multiple",
            Verdict::Unsolvable => "unsolvable",
        }
    }

    pub fn into_unique(self) -> Option<Assignment> {
        match self {
            Verdict::Unique(x) => Some(x),
            _ => None,
        }
    }
}

fn check_len(puzzle: &Puzzle, x: &Assignment) -> Result<()> {
    if x.len() != puzzle.cells() {
        return Err(Error::DimensionMismatch {
            expected: puzzle.cells(),
            actual: x.len(),
        });
    }
    Ok(())
}

fn matches_givens(puzzle: &Puzzle, x: &Assignment) -> bool {
    puzzle.givens().pairs().iter().all(|&(c, v)| x.get(c) == v)
}

/// Matrix route: bounds, `A_{π_r} x <> 0` for `r = 1, 2, 3`, and the givens.
pub fn satisfies_matrix_form(puzzle: &Puzzle, x: &Assignment) -> Result<bool> {
    check_len(puzzle, x)?;
    let n = puzzle.n() as u32;
    if !x.values().iter().all(|&v| (1..=n).contains(&v)) {
        return Ok(false);
    }
    let xi = x.to_i64();
    for r in 1..=3 {
        if !all_nonzero(&puzzle.matrix(r).mul_vec(&xi)?) {
            return Ok(false);
        }
    }
    Ok(matches_givens(puzzle, x))
}

/// Set route: `{x_i | i ∈ cs_{π_r}(j)} = {1, …, n}` for every `r`, `j`, and the givens.
pub fn satisfies_set_form(puzzle: &Puzzle, x: &Assignment) -> Result<bool> {
    check_len(puzzle, x)?;
    let n = puzzle.n();
    let full = full_mask(n);
    for system in puzzle.systems() {
        for set in system.sets() {
            let mut mask = 0u64;
            for &c in set {
                let v = x.get(c) as usize;
                if v == 0 || v > n {
                    return Ok(false);
                }
                mask |= 1 << (v - 1);
            }
            if mask != full {
                return Ok(false);
            }
        }
    }
    Ok(matches_givens(puzzle, x))
}

/// Membership in `S(n, g)`. Both the matrix route and the set route are
/// evaluated; disagreement between them is a bug and panics.
pub fn is_solution(puzzle: &Puzzle, x: &Assignment) -> Result<bool> {
    let by_matrix = satisfies_matrix_form(puzzle, x)?;
    let by_sets = satisfies_set_form(puzzle, x)?;
    assert_eq!(
        by_matrix, by_sets,
        "matrix and constraint-set verdicts disagree for {x}"
    );
    Ok(by_matrix)
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

struct Search<'a> {
    full: u64,
    set_of: [Vec<usize>; 3],
    used: [Vec<u64>; 3],
    state: PartialAssignment,
    sink: &'a mut dyn FnMut(&[u32]) -> ControlFlow<()>,
}

impl Search<'_> {
    fn candidates(&self, idx: usize) -> u64 {
        let taken = self.used[0][self.set_of[0][idx]]
            | self.used[1][self.set_of[1][idx]]
            | self.used[2][self.set_of[2][idx]];
        self.full & !taken
    }

    fn toggle(&mut self, idx: usize, bit: u64) {
        for r in 0..3 {
            self.used[r][self.set_of[r][idx]] ^= bit;
        }
    }

    fn run(&mut self) -> ControlFlow<()> {
        let mut best: Option<(usize, u64)> = None;
        for (idx, &v) in self.state.values.iter().enumerate() {
            if v != 0 {
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
            return (self.sink)(&self.state.values);
        };
        while cand != 0 {
            let bit = cand & cand.wrapping_neg();
            cand ^= bit;
            self.state.set(idx, bit.trailing_zeros() + 1);
            self.toggle(idx, bit);
            let flow = self.run();
            self.toggle(idx, bit);
            self.state.clear(idx);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Walks every member of `S(n, g)` in the deterministic search order until the
/// visitor breaks. Returns `true` when the whole tree was explored.
pub fn for_each_solution<F>(puzzle: &Puzzle, mut visit: F) -> bool
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    let n = puzzle.n();
    let state = PartialAssignment::from_puzzle(puzzle);
    let set_of: [Vec<usize>; 3] = std::array::from_fn(|r| {
        (1..=puzzle.cells())
            .map(|c| puzzle.system(r + 1).set_of(c) - 1)
            .collect()
    });
    let mut used: [Vec<u64>; 3] = std::array::from_fn(|_| vec![0u64; n]);
    for &(cell, v) in puzzle.givens().pairs() {
        let bit = 1u64 << (v - 1);
        for r in 0..3 {
            let slot = &mut used[r][set_of[r][cell - 1]];
            if *slot & bit != 0 {
                // two givens share a value inside one constraint set
                return true;
            }
            *slot |= bit;
        }
    }
    let mut search = Search {
        full: full_mask(n),
        set_of,
        used,
        state,
        sink: &mut visit,
    };
    search.run().is_continue()
}

/// All members of `S(n, g)`, or the first `limit` of them in search order.
pub fn enumerate_solutions(puzzle: &Puzzle, limit: Option<usize>) -> SolutionSet {
    let mut solutions = Vec::new();
    if limit == Some(0) {
        return SolutionSet {
            solutions,
            exhausted: false,
            limit,
        };
    }
    let exhausted = for_each_solution(puzzle, |values| {
        solutions.push(Assignment::new(values.to_vec()));
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

/// Number of solutions found before reaching `cap`, and whether the search
/// finished without hitting it.
pub fn count_solutions(puzzle: &Puzzle, cap: usize) -> Result<(usize, bool)> {
    if cap == 0 {
        return Err(Error::invalid("solution cap must be at least 1"));
    }
    let mut count = 0;
    let exhausted = for_each_solution(puzzle, |_| {
        count += 1;
        if count == cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok((count, exhausted))
}

/// First solution in search order.
pub fn solve(puzzle: &Puzzle) -> Option<Assignment> {
    enumerate_solutions(puzzle, Some(1))
        .solutions
        .into_iter()
        .next()
}

pub fn is_uniquely_solvable(puzzle: &Puzzle) -> Verdict {
    let mut found = enumerate_solutions(puzzle, Some(2)).solutions.into_iter();
    match (found.next(), found.next()) {
        (None, _) => Verdict::Unsolvable,
        (Some(x), None) => Verdict::Unique(x),
        (Some(x), Some(y)) => Verdict::Multiple(x, y),
    }
}
