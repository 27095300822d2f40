mod common;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sudoku_unicity::feasibility::enumerate_solutions;
use sudoku_unicity::model::Puzzle;
use sudoku_unicity::reduced::{
    build_reduced, enumerate_reduced, find_small_base_set, is_unicity_cell, is_unicity_cell_wrt,
    project_vector, verify_base_set_equivalence, BaseSet, CellUnicity,
};

use common::{corpus, oracle_solutions, Kind};

fn random_base(rng: &mut ChaCha8Rng, total: usize) -> BaseSet {
    let size = rng.gen_range(1..=total);
    let mut cells: Vec<usize> = (1..=total).collect();
    cells.shuffle(rng);
    BaseSet::new(cells[..size].to_vec(), total).unwrap()
}

#[test]
fn projected_solutions_solve_the_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let solvable: Vec<Puzzle> = corpus(51, 20)
        .into_iter()
        .filter(|(k, _)| *k != Kind::Unsolvable)
        .map(|(_, p)| p)
        .collect();
    let mut pairs = 0;
    while pairs < 120 {
        let p = solvable.choose(&mut rng).unwrap();
        let base = random_base(&mut rng, 16);
        let rp = build_reduced(p, &base).unwrap();
        let reduced: BTreeSet<Vec<u32>> = enumerate_reduced(&rp, None)
            .solutions
            .into_iter()
            .map(|z| z.into_values())
            .collect();
        assert!(
            !reduced.is_empty(),
            "solvable puzzle with unsolvable reduction"
        );
        for x in enumerate_solutions(p, None).solutions {
            let z = project_vector(&base, x.values());
            assert!(rp.is_solution(&z).unwrap());
            assert!(reduced.contains(&z));
        }
        pairs += 1;
    }
}

#[test]
fn full_base_set_reproduces_the_solution_set() {
    for (_, p) in corpus(52, 8) {
        let rp = build_reduced(&p, &BaseSet::all(16)).unwrap();
        assert_eq!(rp.b_eq().nrows(), p.givens().len());
        assert_eq!(enumerate_reduced(&rp, None), enumerate_solutions(&p, None));
    }
}

#[test]
fn kept_rows_have_the_expected_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for (_, p) in corpus(53, 5) {
        for _ in 0..10 {
            let base = random_base(&mut rng, 16);
            let rp = build_reduced(&p, &base).unwrap();
            for r in 1..=3 {
                assert_eq!(rp.b(r).nrows(), rp.kept_rows(r).len());
                assert!(rp.b(r).row_iter().all(|row| row.len() >= 2));
                // kept rows are exactly the difference rows inside J
                let full = p.matrix(r);
                let expected: Vec<usize> = (1..=full.nrows())
                    .filter(|&k| full.row(k).iter().all(|&(c, _)| base.contains(c)))
                    .collect();
                assert_eq!(rp.kept_rows(r), expected.as_slice());
            }
            assert!(rp.b_eq().row_iter().all(|row| row.len() == 1));
            let inside: Vec<(usize, u32)> = p
                .givens()
                .pairs()
                .iter()
                .copied()
                .filter(|&(c, _)| base.contains(c))
                .collect();
            assert_eq!(rp.b_eq().nrows(), inside.len());
            let g: Vec<i64> = inside.iter().map(|&(_, v)| v as i64).collect();
            assert_eq!(rp.g_prime(), g.as_slice());
        }
    }
}

#[test]
fn reduced_solutions_need_not_extend() {
    // one solution, but a lone free cell admits every value in its reduction
    let p =
        Puzzle::classical_from_grid(2, &[1, 2, 0, 4, 0, 0, 1, 0, 0, 1, 0, 0, 4, 0, 0, 1]).unwrap();
    assert_eq!(enumerate_solutions(&p, None).len(), 1);
    let base = BaseSet::new(vec![3], 16).unwrap();
    let rp = build_reduced(&p, &base).unwrap();
    assert_eq!(enumerate_reduced(&rp, None).len(), 4);
    assert_eq!(is_unicity_cell(&p, 3).unwrap(), CellUnicity::Unique(3));
    assert!(!is_unicity_cell_wrt(&p, &base, 3, 3).unwrap());
}

#[test]
fn unicity_cells_match_brute_force_on_the_corpus() {
    for (seed, (_, p)) in corpus(54, 20).into_iter().enumerate() {
        let solutions = oracle_solutions(&p);
        for cell in 1..=16 {
            let values: BTreeSet<u32> = solutions.iter().map(|g| g[cell - 1]).collect();
            let expected = match values.len() {
                0 => CellUnicity::Vacuous,
                1 => CellUnicity::Unique(*values.first().unwrap()),
                _ => CellUnicity::Ambiguous,
            };
            assert_eq!(is_unicity_cell(&p, cell).unwrap(), expected);
            for v in 1..=4 {
                let full = is_unicity_cell_wrt(&p, &BaseSet::all(16), cell, v).unwrap();
                assert_eq!(full, expected.forces(v));
            }
            assert!(verify_base_set_equivalence(&p, cell, 6, seed as u64).unwrap());
        }
    }
}

#[test]
fn greedy_certificates_are_sound() {
    for (_, p) in corpus(55, 10) {
        for cell in 1..=16 {
            let truth = is_unicity_cell(&p, cell).unwrap();
            let cert = find_small_base_set(&p, cell, 16).unwrap();
            match truth {
                CellUnicity::Ambiguous => assert!(cert.is_none()),
                _ => {
                    let cert = cert.expect("a forced cell is certified within n² steps");
                    assert!(cert.base_set.contains(cell));
                    // with no solution every reduced verdict holds vacuously
                    if let (CellUnicity::Unique(v), CellUnicity::Unique(_)) = (cert.value, truth) {
                        assert_eq!(truth, CellUnicity::Unique(v));
                        assert!(is_unicity_cell_wrt(&p, &cert.base_set, cell, v).unwrap());
                    }
                }
            }
        }
    }
}

fn cell9(row: usize, col: usize) -> usize {
    (row - 1) * 9 + col
}

#[test]
fn block_and_value_cells_force_a_hidden_single() {
    // 4s in rows 1 and 2 and in columns 1 and 2, all outside the top-left
    // block, leave cell 21 as the only place for a 4 in that block
    let fours = [cell9(1, 5), cell9(2, 8), cell9(4, 1), cell9(8, 2)];
    let p = Puzzle::classical(3, fours.iter().map(|&c| (c, 4)).collect()).unwrap();
    assert_eq!(cell9(3, 3), 21);
    let block = [1, 2, 3, 10, 11, 12, 19, 20, 21];
    let base = BaseSet::new(block.iter().chain(fours.iter()).copied().collect(), 81).unwrap();
    assert!(is_unicity_cell_wrt(&p, &base, 21, 4).unwrap());
    for v in [1, 2, 3, 5, 6, 7, 8, 9] {
        assert!(!is_unicity_cell_wrt(&p, &base, 21, v).unwrap());
    }
    // the block alone does not suffice
    let alone = BaseSet::new(block.to_vec(), 81).unwrap();
    assert!(!is_unicity_cell_wrt(&p, &alone, 21, 4).unwrap());
    assert_eq!(is_unicity_cell(&p, 21).unwrap(), CellUnicity::Unique(4));
}

#[test]
fn unsolvable_puzzles_are_vacuous_everywhere() {
    let p = Puzzle::classical(2, vec![(1, 1), (2, 1)]).unwrap();
    for cell in 1..=16 {
        assert_eq!(is_unicity_cell(&p, cell).unwrap(), CellUnicity::Vacuous);
    }
    let cert = find_small_base_set(&p, 5, 16).unwrap().unwrap();
    assert_eq!(cert.value, CellUnicity::Vacuous);
    assert_eq!(cert.reduced_solutions, 0);
}
