//! Shared 4×4 corpus and brute-force oracles for integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sudoku_unicity::feasibility::{count_solutions, Assignment};
use sudoku_unicity::model::Puzzle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Unsolvable,
    Unique,
    Multiple,
}

fn row_permutations() -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 1..=4 {
        for b in 1..=4 {
            for c in 1..=4 {
                for d in 1..=4 {
                    let row = [a, b, c, d];
                    let distinct: BTreeSet<u32> = row.iter().copied().collect();
                    if distinct.len() == 4 {
                        out.push(row);
                    }
                }
            }
        }
    }
    out
}

/// Every valid 4×4 classical grid, found by trying all row-permutation
/// quadruples and checking columns and blocks afterwards. Shares no code with
/// the library search.
pub fn oracle_grids() -> &'static [Vec<u32>] {
    static GRIDS: OnceLock<Vec<Vec<u32>>> = OnceLock::new();
    GRIDS.get_or_init(|| {
        let rows = row_permutations();
        let mut grids = Vec::new();
        for r0 in &rows {
            for r1 in &rows {
                for r2 in &rows {
                    for r3 in &rows {
                        let g: Vec<u32> = [r0, r1, r2, r3]
                            .iter()
                            .flat_map(|r| r.iter().copied())
                            .collect();
                        if grid_is_valid(&g) {
                            grids.push(g);
                        }
                    }
                }
            }
        }
        grids
    })
}

/// Column and block check for a 4×4 grid whose rows are already permutations.
pub fn grid_is_valid(g: &[u32]) -> bool {
    let distinct =
        |cells: [usize; 4]| cells.iter().map(|&c| g[c]).collect::<BTreeSet<_>>().len() == 4;
    (0..4).all(|c| distinct([c, c + 4, c + 8, c + 12]))
        && [0, 2, 8, 10]
            .iter()
            .all(|&b| distinct([b, b + 1, b + 4, b + 5]))
}

/// The oracle grids compatible with the givens of a classical 4×4 puzzle.
pub fn oracle_solutions(puzzle: &Puzzle) -> BTreeSet<Vec<u32>> {
    assert_eq!(puzzle.classical_block_size(), Some(2));
    oracle_grids()
        .iter()
        .filter(|g| puzzle.givens().pairs().iter().all(|&(c, v)| g[c - 1] == v))
        .cloned()
        .collect()
}

pub fn kind_of(puzzle: &Puzzle) -> Kind {
    match count_solutions(puzzle, 2).unwrap() {
        (0, _) => Kind::Unsolvable,
        (1, true) => Kind::Unique,
        _ => Kind::Multiple,
    }
}

fn givens_from(grid: &[u32], cells: &[usize]) -> Vec<(usize, u32)> {
    cells.iter().map(|&c| (c, grid[c - 1])).collect()
}

/// A seeded 4×4 corpus with `per_kind` instances of each kind.
///
/// Unique instances add random grid cells until one solution remains,
/// multiple instances keep 0 to 7 grid cells, unsolvable instances place one
/// wrong value among grid givens.
pub fn corpus(seed: u64, per_kind: usize) -> Vec<(Kind, Puzzle)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grids = oracle_grids();
    let mut out = Vec::new();

    let mut produced = 0;
    while produced < per_kind {
        let grid = grids.choose(&mut rng).unwrap();
        let k = rng.gen_range(0..=7);
        let mut cells: Vec<usize> = (1..=16).collect();
        cells.shuffle(&mut rng);
        let p = Puzzle::classical(2, givens_from(grid, &cells[..k])).unwrap();
        if kind_of(&p) == Kind::Multiple {
            out.push((Kind::Multiple, p));
            produced += 1;
        }
    }

    for _ in 0..per_kind {
        let grid = grids.choose(&mut rng).unwrap();
        let mut cells: Vec<usize> = (1..=16).collect();
        cells.shuffle(&mut rng);
        let mut k = 0;
        let p = loop {
            let p = Puzzle::classical(2, givens_from(grid, &cells[..k])).unwrap();
            if kind_of(&p) == Kind::Unique {
                break p;
            }
            k += 1;
        };
        out.push((Kind::Unique, p));
    }

    let mut produced = 0;
    while produced < per_kind {
        let grid = grids.choose(&mut rng).unwrap();
        let mut cells: Vec<usize> = (1..=16).collect();
        cells.shuffle(&mut rng);
        let k = rng.gen_range(1..=8);
        let mut givens = givens_from(grid, &cells[..k]);
        let wrong = rng.gen_range(0..k);
        let (cell, v) = givens[wrong];
        givens[wrong] = (cell, v % 4 + 1);
        let p = Puzzle::classical(2, givens).unwrap();
        // a single wrong value may still leave other grids compatible
        if kind_of(&p) == Kind::Unsolvable {
            out.push((Kind::Unsolvable, p));
            produced += 1;
        }
    }
    out
}

/// Complete grids paired with a given-free 2-2 rectangle `J` on which the grid
/// is minimal, one for every grid and rectangle with that property.
pub fn rectangle_instances() -> Vec<(Vec<u32>, Vec<usize>)> {
    let mut out = Vec::new();
    for g in oracle_grids() {
        for r1 in 0..4 {
            for r2 in r1 + 1..4 {
                for c1 in 0..4 {
                    for c2 in c1 + 1..4 {
                        // two blocks of two cells each
                        if (r1 / 2 == r2 / 2) == (c1 / 2 == c2 / 2) {
                            continue;
                        }
                        let cells = [r1 * 4 + c1, r1 * 4 + c2, r2 * 4 + c1, r2 * 4 + c2];
                        let a = g[cells[0]];
                        let b = g[cells[1]];
                        if g[cells[2]] == b && g[cells[3]] == a && a != b {
                            out.push((g.clone(), cells.iter().map(|c| c + 1).collect()));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn assignment(values: &[u32]) -> Assignment {
    Assignment::new(values.to_vec())
}
