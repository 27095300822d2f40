mod common;

use std::collections::BTreeSet;

use sudoku_unicity::feasibility::{count_solutions, is_solution, solve};
use sudoku_unicity::model::Puzzle;
use sudoku_unicity::rectangles::{
    find_minimal_rectangles, is_minimal_on, is_rectangle, rectangles_hold_givens, swap_alternative,
};
use sudoku_unicity::witness::{derive_tau_for, ConsistencyReport};

use common::{assignment, corpus, oracle_grids, rectangle_instances, Kind};

/// Row, column and block of a 0-based 4×4 cell.
fn units(c: usize) -> [usize; 3] {
    let (r, k) = (c / 4, c % 4);
    [r, k, (r / 2) * 2 + k / 2]
}

/// Rectangle test written from coordinates: in each of the three unit kinds,
/// exactly `q` units meet `J`, each in exactly `p` cells.
fn oracle_rectangle(mask: u32, p: usize, q: usize) -> bool {
    (0..3).all(|kind| {
        let mut counts = [0usize; 4];
        for c in (0..16).filter(|c| mask >> c & 1 == 1) {
            counts[units(c)[kind]] += 1;
        }
        counts.iter().filter(|&&k| k == p).count() == q && counts.iter().all(|&k| k == 0 || k == p)
    })
}

fn cells_of(mask: u32) -> Vec<usize> {
    (0..16)
        .filter(|c| mask >> c & 1 == 1)
        .map(|c| c + 1)
        .collect()
}

#[test]
fn rectangle_search_matches_subset_enumeration() {
    let empty = Puzzle::classical(2, vec![]).unwrap();
    for g in oracle_grids().iter().step_by(36) {
        let x = assignment(g);
        let mut expected = BTreeSet::new();
        for mask in 1u32..1 << 16 {
            let size = mask.count_ones() as usize;
            for p in 1..=4 {
                if !size.is_multiple_of(p) || size / p > 4 || !oracle_rectangle(mask, p, size / p) {
                    continue;
                }
                let q = size / p;
                let cells = cells_of(mask);
                let rect = is_rectangle(&empty, &cells, p, q)
                    .unwrap()
                    .expect("library rejects a rectangle");
                let values: BTreeSet<u32> = cells.iter().map(|&c| g[c - 1]).collect();
                // every unit of the rectangle alone holds p distinct values
                assert!(values.len() >= p);
                assert_eq!(
                    is_minimal_on(&empty, &x, &rect).unwrap().minimal,
                    values.len() == p
                );
                if p >= 2 && values.len() == p {
                    expected.insert((p, q, cells));
                }
            }
        }
        let found: BTreeSet<(usize, usize, Vec<usize>)> = find_minimal_rectangles(&empty, &x, 4, 4)
            .unwrap()
            .into_iter()
            .map(|r| (r.rectangle.p, r.rectangle.q, r.rectangle.cells))
            .collect();
        assert_eq!(found, expected);
    }
}

#[test]
fn non_rectangles_are_rejected() {
    let empty = Puzzle::classical(2, vec![]).unwrap();
    for mask in (1u32..1 << 16).step_by(7) {
        let size = mask.count_ones() as usize;
        for p in 1..=4 {
            if size.is_multiple_of(p) && size / p <= 4 && size / p >= 1 {
                let q = size / p;
                let got = is_rectangle(&empty, &cells_of(mask), p, q)
                    .unwrap()
                    .is_some();
                assert_eq!(got, oracle_rectangle(mask, p, q), "mask {mask:016b}");
            }
        }
    }
}

/// Multiset of values in each row, column and block.
fn unit_multisets(values: &[u32]) -> Vec<Vec<u32>> {
    let mut sets = vec![Vec::new(); 12];
    for (c, &v) in values.iter().enumerate() {
        for (kind, u) in units(c).into_iter().enumerate() {
            sets[kind * 4 + u].push(v);
        }
    }
    for s in &mut sets {
        s.sort_unstable();
    }
    sets
}

#[test]
fn swaps_on_given_free_rectangles_give_new_solutions() {
    let instances = rectangle_instances();
    assert!(instances.len() >= 100);
    for (g, j) in instances {
        let givens = (1..=16)
            .filter(|c| !j.contains(c))
            .map(|c| (c, g[c - 1]))
            .collect();
        let p = Puzzle::classical(2, givens).unwrap();
        let x = assignment(&g);
        let rect = is_rectangle(&p, &j, 2, 2).unwrap().unwrap();
        let report = is_minimal_on(&p, &x, &rect).unwrap();
        assert!(report.minimal && !report.contains_given);

        let y = swap_alternative(&p, &x, &rect, 1, 2).unwrap();
        assert_ne!(y, x);
        assert!(is_solution(&p, &y).unwrap());
        assert_eq!(unit_multisets(y.values()), unit_multisets(x.values()));
        assert_eq!(swap_alternative(&p, &y, &rect, 1, 2).unwrap(), x);
        assert_eq!(swap_alternative(&p, &x, &rect, 2, 1).unwrap(), y);
        assert_eq!(count_solutions(&p, 3).unwrap(), (2, true));

        let tau = derive_tau_for(&p, &x, &y, 1).unwrap();
        assert!(ConsistencyReport::evaluate(&p, &tau, &x)
            .unwrap()
            .is_witness());
    }
}

#[test]
fn swap_preconditions_are_enforced() {
    let (g, j) = rectangle_instances().remove(0);
    let x = assignment(&g);
    // with a given inside J the swap is refused
    let inside = Puzzle::classical(2, vec![(j[0], g[j[0] - 1])]).unwrap();
    let rect = is_rectangle(&inside, &j, 2, 2).unwrap().unwrap();
    assert!(swap_alternative(&inside, &x, &rect, 1, 2).is_err());
    let free = Puzzle::classical(2, vec![]).unwrap();
    assert!(swap_alternative(&free, &x, &rect, 1, 1).is_err());
    assert!(swap_alternative(&free, &x, &rect, 1, 3).is_err());
    let mut broken = g.clone();
    broken.swap(0, 1);
    assert!(swap_alternative(&free, &assignment(&broken), &rect, 1, 2).is_err());
}

#[test]
fn unique_solutions_keep_givens_in_minimal_rectangles() {
    for (kind, p) in corpus(62, 20) {
        assert!(rectangles_hold_givens(&p).unwrap());
        if kind == Kind::Unique {
            let x = solve(&p).unwrap();
            assert!(find_minimal_rectangles(&p, &x, 4, 4)
                .unwrap()
                .iter()
                .all(|r| r.contains_given));
        }
    }
}

#[test]
fn multiple_solutions_can_hide_a_given_free_rectangle() {
    let mut hidden = 0;
    for (_, p) in corpus(63, 20)
        .into_iter()
        .filter(|(k, _)| *k == Kind::Multiple)
    {
        let x = solve(&p).unwrap();
        if let Some(r) = find_minimal_rectangles(&p, &x, 4, 4)
            .unwrap()
            .iter()
            .find(|r| !r.contains_given)
        {
            let y = swap_alternative(&p, &x, &r.rectangle, 1, 2).unwrap();
            assert!(is_solution(&p, &y).unwrap());
            hidden += 1;
        }
    }
    assert!(hidden > 0);
}

#[test]
fn swap_on_a_nine_by_nine_rectangle() {
    let j = [50, 51, 59, 60];
    let seed = Puzzle::classical(3, vec![(50, 9), (51, 4), (59, 4), (60, 9)]).unwrap();
    let x = solve(&seed).unwrap();
    let givens = (1..=81)
        .filter(|c| !j.contains(c))
        .map(|c| (c, x.get(c)))
        .collect();
    let p = Puzzle::classical(3, givens).unwrap();
    let rect = is_rectangle(&p, &j, 2, 2).unwrap().unwrap();
    assert_eq!(rect.witnesses, [vec![6, 7], vec![5, 6], vec![5, 8]]);
    let found = find_minimal_rectangles(&p, &x, 3, 3).unwrap();
    assert!(found
        .iter()
        .any(|r| r.rectangle == rect && !r.contains_given));
    let y = swap_alternative(&p, &x, &rect, 1, 2).unwrap();
    let swapped: Vec<u32> = j.iter().map(|&c| y.get(c)).collect();
    assert_eq!(swapped, vec![4, 9, 9, 4]);
    assert!(is_solution(&p, &y).unwrap());
    assert_eq!(count_solutions(&p, 3).unwrap(), (2, true));
}
