//! p-q-rectangles and minimal solutions on them.
//!
//! A cell set `J` of size `p·q` is a p-q-rectangle when, for each of the three
//! families of constraint sets, `q` distinct sets meet `J` in exactly `p` cells.
//! A solution is minimal on `J` when it uses only `p` values there. Swapping
//! two of those values inside a given-free `J` yields another solution, so a
//! unique solution can only be minimal on rectangles that contain a given.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::feasibility::{is_solution, is_uniquely_solvable, Assignment, Verdict};
use crate::model::Puzzle;

/// A validated p-q-rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rectangle {
    /// Cells of `J`, ascending.
    pub cells: Vec<usize>,
    pub p: usize,
    pub q: usize,
    /// For `r = 1, 2, 3`, the indices `j_{r,1} < … < j_{r,q}` of the constraint
    /// sets meeting `J`.
    pub witnesses: [Vec<usize>; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub rectangle: Rectangle,
    /// `{x_i | i ∈ J}`, ascending.
    pub value_set: Vec<u32>,
    pub minimal: bool,
    pub contains_given: bool,
}

/// Default `(p_max, q_max)` for a rectangle scan: exhaustive up to `n = 4`,
/// capped at 3 beyond that.
pub fn default_rectangle_bounds(n: usize) -> (usize, usize) {
    if n <= 4 {
        (n, n)
    } else {
        (3, 3)
    }
}

/// Recognizes `cells` as a p-q-rectangle of the puzzle.
///
/// Fails when `|J| ≠ p·q`, when `p` or `q` lies outside `1..=n`, or when `J`
/// has repeated or out-of-range cells.
pub fn is_rectangle(
    puzzle: &Puzzle,
    cells: &[usize],
    p: usize,
    q: usize,
) -> Result<Option<Rectangle>> {
    let n = puzzle.n();
    if !(1..=n).contains(&p) || !(1..=n).contains(&q) {
        return Err(Error::invalid(format!(
            "p = {p}, q = {q} must lie in 1..={n}"
        )));
    }
    if cells.len() != p * q {
        return Err(Error::invalid(format!(
            "|J| = {} but p·q = {}",
            cells.len(),
            p * q
        )));
    }
    let mut sorted = cells.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("repeated cell in J"));
    }
    if sorted.iter().any(|&c| c == 0 || c > puzzle.cells()) {
        return Err(Error::invalid("cell of J out of range"));
    }
    Ok(rectangle_unchecked(puzzle, sorted, p, q))
}

fn rectangle_unchecked(
    puzzle: &Puzzle,
    cells: Vec<usize>,
    p: usize,
    q: usize,
) -> Option<Rectangle> {
    let n = puzzle.n();
    let mut witnesses: [Vec<usize>; 3] = Default::default();
    for (r, system) in puzzle.systems().iter().enumerate() {
        let mut counts = vec![0usize; n + 1];
        for &c in &cells {
            counts[system.set_of(c)] += 1;
        }
        let hit: Vec<usize> = (1..=n).filter(|&j| counts[j] == p).collect();
        // q sets of p cells cover all p·q cells of J, so every other set is empty
        if hit.len() != q || (1..=n).any(|j| counts[j] != 0 && counts[j] != p) {
            return None;
        }
        witnesses[r] = hit;
    }
    Some(Rectangle {
        cells,
        p,
        q,
        witnesses,
    })
}

fn value_set(x: &Assignment, cells: &[usize]) -> Vec<u32> {
    let mut values: Vec<u32> = cells.iter().map(|&c| x.get(c)).collect();
    values.sort_unstable();
    values.dedup();
    values
}

fn require_solution(puzzle: &Puzzle, x: &Assignment) -> Result<()> {
    if !is_solution(puzzle, x)? {
        return Err(Error::invalid("x is not a solution of the puzzle"));
    }
    Ok(())
}

/// Whether the solution `x` uses exactly `p` values on the rectangle.
pub fn is_minimal_on(
    puzzle: &Puzzle,
    x: &Assignment,
    rect: &Rectangle,
) -> Result<MinimalityReport> {
    require_solution(puzzle, x)?;
    Ok(minimality(puzzle, x, rect.clone()))
}

fn minimality(puzzle: &Puzzle, x: &Assignment, rectangle: Rectangle) -> MinimalityReport {
    let value_set = value_set(x, &rectangle.cells);
    // each constraint set of the rectangle alone holds p distinct values
    assert!(
        value_set.len() >= rectangle.p,
        "solution uses fewer than p values on J"
    );
    let contains_given = rectangle
        .cells
        .iter()
        .any(|&c| puzzle.givens().value_at(c).is_some());
    MinimalityReport {
        minimal: value_set.len() == rectangle.p,
        value_set,
        contains_given,
        rectangle,
    }
}

/// Exchanges the values `z_{p1}` and `z_{p2}` (1-based, ascending order of the
/// value set) on the cells of a given-free rectangle where `x` is minimal.
///
/// The result is another solution different from `x`.
pub fn swap_alternative(
    puzzle: &Puzzle,
    x: &Assignment,
    rect: &Rectangle,
    p1: usize,
    p2: usize,
) -> Result<Assignment> {
    let report = is_minimal_on(puzzle, x, rect)?;
    if !report.minimal {
        return Err(Error::invalid("x is not minimal on the rectangle"));
    }
    if rect.p < 2 {
        return Err(Error::invalid("swapping needs p ≥ 2"));
    }
    if report.contains_given {
        return Err(Error::invalid("the rectangle contains a given"));
    }
    if p1 == p2 || !(1..=rect.p).contains(&p1) || !(1..=rect.p).contains(&p2) {
        return Err(Error::invalid(format!(
            "value indices {p1}, {p2} must be distinct and lie in 1..={}",
            rect.p
        )));
    }
    let (a, b) = (report.value_set[p1 - 1], report.value_set[p2 - 1]);
    let mut values = x.values().to_vec();
    for &c in &rect.cells {
        let v = &mut values[c - 1];
        if *v == a {
            *v = b;
        } else if *v == b {
            *v = a;
        }
    }
    let swapped = Assignment::new(values);
    assert_ne!(&swapped, x);
    assert!(
        is_solution(puzzle, &swapped)?,
        "swap produced a non-solution"
    );
    Ok(swapped)
}

fn combinations(items: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(
        start: usize,
        items: usize,
        k: usize,
        acc: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if acc.len() == k {
            visit(acc);
            return;
        }
        for i in start..=items {
            if items - i + 1 < k - acc.len() {
                break;
            }
            acc.push(i);
            rec(i + 1, items, k, acc, visit);
            acc.pop();
        }
    }
    rec(1, items, k, &mut Vec::with_capacity(k), &mut visit);
}

/// Every p-q-rectangle with `2 ≤ p ≤ p_max`, `1 ≤ q ≤ q_max` on which `x` is
/// minimal, sorted by `(p, q, cells)`.
///
/// Candidates are generated from values: for a set `V` of `p` values, the cells
/// of `x` carrying values of `V` meet every `π1` constraint set in exactly `p`
/// cells, and a rectangle minimal with value set `V` is the union of `q` of
/// those slices. Each union is then validated against `π2` and `π3`.
pub fn find_minimal_rectangles(
    puzzle: &Puzzle,
    x: &Assignment,
    p_max: usize,
    q_max: usize,
) -> Result<Vec<MinimalityReport>> {
    require_solution(puzzle, x)?;
    let n = puzzle.n();
    if p_max > n || q_max > n {
        return Err(Error::invalid(format!(
            "p_max and q_max must not exceed {n}"
        )));
    }
    let rows = puzzle.system(1);
    let mut found = Vec::new();
    for p in 2..=p_max {
        combinations(n, p, |values| {
            let slices: Vec<Vec<usize>> = (1..=n)
                .map(|j| {
                    rows.set(j)
                        .iter()
                        .copied()
                        .filter(|&c| values.contains(&(x.get(c) as usize)))
                        .collect()
                })
                .collect();
            for q in 1..=q_max {
                combinations(n, q, |chosen| {
                    let mut cells: Vec<usize> = chosen
                        .iter()
                        .flat_map(|&j| slices[j - 1].iter().copied())
                        .collect();
                    cells.sort_unstable();
                    if let Some(rect) = rectangle_unchecked(puzzle, cells, p, q) {
                        let report = minimality(puzzle, x, rect);
                        debug_assert!(report.minimal);
                        found.push(report);
                    }
                });
            }
        });
    }
    found.sort_by(|a, b| {
        (a.rectangle.p, a.rectangle.q, &a.rectangle.cells).cmp(&(
            b.rectangle.p,
            b.rectangle.q,
            &b.rectangle.cells,
        ))
    });
    Ok(found)
}

/// For a uniquely solvable puzzle, checks that every rectangle within the
/// default bounds on which the solution is minimal contains a given. Puzzles
/// without a unique solution pass trivially.
pub fn rectangles_hold_givens(puzzle: &Puzzle) -> Result<bool> {
    let (p_max, q_max) = default_rectangle_bounds(puzzle.n());
    rectangles_hold_givens_within(puzzle, p_max, q_max)
}

pub fn rectangles_hold_givens_within(puzzle: &Puzzle, p_max: usize, q_max: usize) -> Result<bool> {
    let Verdict::Unique(x) = is_uniquely_solvable(puzzle) else {
        return Ok(true);
    };
    Ok(find_minimal_rectangles(puzzle, &x, p_max, q_max)?
        .iter()
        .all(|r| r.contains_given))
}
