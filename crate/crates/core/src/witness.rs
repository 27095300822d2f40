//! Unicity by permutations.
//!
//! Every solution `y` of a puzzle is the image `τ(x)` of a fixed solution `x`
//! under a permutation `τ` that preserves the constraint sets of `π1`,
//! preserves the value sets of `x` on the constraint sets of `π2` and `π3`, and
//! fixes every given. `x` is unique exactly when no such `τ` moves it.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::feasibility::{enumerate_solutions, is_solution, Assignment};
use crate::model::{all_nonzero, ConstraintSetSystem, Permutation, Puzzle, PuzzleOrder};

/// Every predicate of a candidate `τ`, evaluated eagerly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    /// `τ` is `π_r`-consistent, `r = 1, 2, 3`.
    pub pi_consistent: [bool; 3],
    /// `τ` is `π_r`-`x`-consistent, `r = 1, 2, 3`.
    pub pi_x_consistent: [bool; 3],
    pub fixes_givens: bool,
    /// `τ(x) ≠ x`.
    pub moves_x: bool,
}

impl ConsistencyReport {
    pub fn evaluate(puzzle: &Puzzle, tau: &Permutation, x: &Assignment) -> Result<Self> {
        check_lengths(puzzle.cells(), tau, x)?;
        let pi_consistent = std::array::from_fn(|r| preserves_sets(tau, puzzle.system(r + 1)));
        let pi_x_consistent =
            std::array::from_fn(|r| preserves_value_sets(tau, puzzle.system(r + 1), x));
        let fixes_givens = puzzle.givens().cells().all(|c| tau.image(c) == c);
        let moves_x = tau.act(x.values())? != x.values();
        Ok(ConsistencyReport {
            pi_consistent,
            pi_x_consistent,
            fixes_givens,
            moves_x,
        })
    }

    /// The membership conditions: `π1`-consistent, `π2`-/`π3`-`x`-consistent,
    /// and fixing every given.
    pub fn admissible(&self) -> bool {
        self.pi_consistent[0]
            && self.pi_x_consistent[1]
            && self.pi_x_consistent[2]
            && self.fixes_givens
    }

    /// Admissible and moving `x`: proof that `x` is not the only solution.
    pub fn is_witness(&self) -> bool {
        self.admissible() && self.moves_x
    }
}

/// A permutation proving that a solution is not unique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnicityWitness {
    pub tau: Permutation,
    /// `τ(x)`, a second member of `S(n, g)`.
    pub alternative: Assignment,
    pub report: ConsistencyReport,
}

fn check_lengths(cells: usize, tau: &Permutation, x: &Assignment) -> Result<()> {
    for len in [tau.len(), x.len()] {
        if len != cells {
            return Err(Error::DimensionMismatch {
                expected: cells,
                actual: len,
            });
        }
    }
    Ok(())
}

fn order_of(cells: usize) -> Result<PuzzleOrder> {
    let n = (0..=cells).find(|n| n * n >= cells).unwrap_or(0);
    if n * n != cells {
        return Err(Error::invalid(format!(
            "{cells} is not a square cell count"
        )));
    }
    PuzzleOrder::new(n)
}

fn preserves_sets(tau: &Permutation, system: &ConstraintSetSystem) -> bool {
    (1..=tau.len()).all(|c| system.set_of(tau.image(c)) == system.set_of(c))
}

fn preserves_value_sets(tau: &Permutation, system: &ConstraintSetSystem, x: &Assignment) -> bool {
    let tau_inv = tau.inverse();
    system.sets().all(|set| {
        let moved: BTreeSet<u32> = set.iter().map(|&i| x.get(tau_inv.image(i))).collect();
        let original: BTreeSet<u32> = set.iter().map(|&i| x.get(i)).collect();
        moved == original
    })
}

/// `τ(cs_π(j)) = cs_π(j)` for every `j`.
pub fn is_pi_consistent(tau: &Permutation, pi: &Permutation, order: PuzzleOrder) -> Result<bool> {
    let system = ConstraintSetSystem::new(pi, order)?;
    if tau.len() != pi.len() {
        return Err(Error::DimensionMismatch {
            expected: pi.len(),
            actual: tau.len(),
        });
    }
    Ok(preserves_sets(tau, &system))
}

/// `{x_{τ⁻¹(i)} | i ∈ cs_π(j)} = {x_i | i ∈ cs_π(j)}` for every `j`.
pub fn is_pi_x_consistent(tau: &Permutation, pi: &Permutation, x: &Assignment) -> Result<bool> {
    let system = ConstraintSetSystem::new(pi, order_of(pi.len())?)?;
    check_lengths(pi.len(), tau, x)?;
    Ok(preserves_value_sets(tau, &system, x))
}

/// The unique `π`-consistent `τ` with `τ(x) = y`.
///
/// Inside each constraint set `cs_π(j)`, `τ(i)` is the cell of the same set
/// where `y` carries the value `x_i`. Both `x` and `y` must take every value
/// `1..=n` exactly once on each constraint set.
pub fn derive_tau(x: &Assignment, y: &Assignment, pi: &Permutation) -> Result<Permutation> {
    let order = order_of(pi.len())?;
    let system = ConstraintSetSystem::new(pi, order)?;
    derive_tau_with(x, y, &system)
}

fn derive_tau_with(
    x: &Assignment,
    y: &Assignment,
    system: &ConstraintSetSystem,
) -> Result<Permutation> {
    let n = system.order();
    let cells = n * n;
    for v in [x, y] {
        if v.len() != cells {
            return Err(Error::DimensionMismatch {
                expected: cells,
                actual: v.len(),
            });
        }
    }
    let mut images = vec![0; cells];
    for (j, set) in system.sets().enumerate() {
        let mut where_y = vec![0usize; n + 1];
        let mut seen_x = vec![false; n + 1];
        for &c in set {
            let (xv, yv) = (x.get(c) as usize, y.get(c) as usize);
            if xv == 0 || xv > n || yv == 0 || yv > n || where_y[yv] != 0 || seen_x[xv] {
                return Err(Error::invalid(format!(
                    "values on constraint set {} are not a permutation of 1..={n}",
                    j + 1
                )));
            }
            where_y[yv] = c;
            seen_x[xv] = true;
        }
        for &c in set {
            images[c - 1] = where_y[x.get(c) as usize];
        }
    }
    Permutation::from_images(images)
}

/// `derive_tau` against `π_r` of a puzzle.
pub fn derive_tau_for(
    puzzle: &Puzzle,
    x: &Assignment,
    y: &Assignment,
    r: usize,
) -> Result<Permutation> {
    derive_tau_with(x, y, puzzle.system(r))
}

/// The three statements whose pairs imply the third:
/// `A_π x <> 0`, `A_π τ(x) <> 0`, and `τ` being `π`-`x`-consistent.
pub fn consistency_triple(
    pi: &Permutation,
    tau: &Permutation,
    x: &Assignment,
) -> Result<(bool, bool, bool)> {
    let order = order_of(pi.len())?;
    let n = order.get() as u32;
    if !x.values().iter().all(|&v| (1..=n).contains(&v)) {
        return Err(Error::invalid("values must lie in 1..=n"));
    }
    check_lengths(pi.len(), tau, x)?;
    let a_pi = crate::model::build_permuted_a(order, pi)?;
    let holds_i = all_nonzero(&a_pi.mul_vec(&x.to_i64())?);
    let moved: Vec<i64> = tau.act(&x.to_i64())?;
    let holds_ii = all_nonzero(&a_pi.mul_vec(&moved)?);
    let holds_iii = is_pi_x_consistent(tau, pi, x)?;
    Ok((holds_i, holds_ii, holds_iii))
}

/// Outcome of checking the permutation description of `S(n, g)` against
/// enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Characterization {
    pub solution_count: usize,
    /// One `τ` per enumerated solution, in enumeration order.
    pub taus: Vec<Permutation>,
    /// Every solution `y` yields an admissible `τ` with `τ(x) = y`.
    pub solutions_covered: bool,
    /// Every derived `τ` maps `x` back into `S(n, g)`.
    pub images_are_solutions: bool,
    /// For every `y` and `r`, the `π_r`-consistent `τ_r` fixes the givens and maps `x` to `y`.
    pub per_family_form: bool,
}

impl Characterization {
    pub fn holds(&self) -> bool {
        self.solutions_covered && self.images_are_solutions && self.per_family_form
    }
}

fn require_solution(puzzle: &Puzzle, x: &Assignment) -> Result<()> {
    if !is_solution(puzzle, x)? {
        return Err(Error::invalid("x is not a solution of the puzzle"));
    }
    Ok(())
}

/// Checks both inclusions of the single-`τ` description of `S(n, g)` and the
/// three-`τ` form against an exhaustive enumeration.
pub fn characterize_solutions(puzzle: &Puzzle, x: &Assignment) -> Result<Characterization> {
    require_solution(puzzle, x)?;
    let solutions = enumerate_solutions(puzzle, None).solutions;
    let mut taus = Vec::with_capacity(solutions.len());
    let mut solutions_covered = true;
    let mut images_are_solutions = true;
    let mut per_family_form = true;

    for y in &solutions {
        let tau = derive_tau_for(puzzle, x, y, 1)?;
        let report = ConsistencyReport::evaluate(puzzle, &tau, x)?;
        let image = Assignment::new(tau.act(x.values())?);
        solutions_covered &= report.admissible() && &image == y && report.moves_x == (y != x);
        images_are_solutions &= is_solution(puzzle, &image)? && solutions.contains(&image);

        for r in 1..=3 {
            let tau_r = derive_tau_for(puzzle, x, y, r)?;
            let report_r = ConsistencyReport::evaluate(puzzle, &tau_r, x)?;
            per_family_form &= report_r.pi_consistent[r - 1]
                && report_r.fixes_givens
                && tau_r.act(x.values())? == y.values();
        }
        taus.push(tau);
    }

    Ok(Characterization {
        solution_count: solutions.len(),
        taus,
        solutions_covered,
        images_are_solutions,
        per_family_form,
    })
}

/// A permutation certifying that `x` is not the unique solution, or `None`
/// when it is.
///
/// The search runs over solutions rather than over all `(n²)!` permutations:
/// a second solution `y` determines its `τ` through [`derive_tau`] with `π1`.
pub fn find_unicity_witness(puzzle: &Puzzle, x: &Assignment) -> Result<Option<UnicityWitness>> {
    require_solution(puzzle, x)?;
    let found = enumerate_solutions(puzzle, Some(2));
    let Some(y) = found.solutions.into_iter().find(|y| y != x) else {
        return Ok(None);
    };
    let tau = derive_tau_for(puzzle, x, &y, 1)?;
    let report = ConsistencyReport::evaluate(puzzle, &tau, x)?;
    assert!(
        report.is_witness(),
        "derived τ fails the witness conditions: {report:?}"
    );
    let alternative = Assignment::new(tau.act(x.values())?);
    assert_eq!(alternative, y);
    Ok(Some(UnicityWitness {
        tau,
        alternative,
        report,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Givens;

    fn two() -> PuzzleOrder {
        PuzzleOrder::new(2).unwrap()
    }

    #[test]
    fn pi_consistency() {
        let id = Permutation::identity(4);
        assert!(is_pi_consistent(&id, &id, two()).unwrap());
        let inside = Permutation::transposition(4, 1, 2).unwrap();
        assert!(is_pi_consistent(&inside, &id, two()).unwrap());
        let across = Permutation::transposition(4, 1, 3).unwrap();
        assert!(!is_pi_consistent(&across, &id, two()).unwrap());
    }

    #[test]
    fn value_set_consistency_is_weaker() {
        let id = Permutation::identity(4);
        let x: Assignment = vec![1, 2, 1, 2].into();
        let across = Permutation::transposition(4, 1, 3).unwrap();
        assert!(is_pi_x_consistent(&across, &id, &x).unwrap());
        assert!(!is_pi_consistent(&across, &id, two()).unwrap());
        assert!(is_pi_x_consistent(&id, &id, &x).unwrap());

        let y: Assignment = vec![1, 2, 3, 4].into();
        assert!(!is_pi_x_consistent(&across, &id, &y).unwrap());
    }

    #[test]
    fn derive_tau_examples() {
        let id = Permutation::identity(4);
        let x: Assignment = vec![1, 2, 1, 2].into();
        assert!(derive_tau(&x, &x, &id).unwrap().is_identity());
        let y: Assignment = vec![2, 1, 1, 2].into();
        let tau = derive_tau(&x, &y, &id).unwrap();
        assert_eq!(tau, Permutation::transposition(4, 1, 2).unwrap());
        assert_eq!(tau.act(x.values()).unwrap(), y.values());

        let bad: Assignment = vec![1, 1, 1, 2].into();
        assert!(derive_tau(&bad, &y, &id).is_err());
        assert!(derive_tau(&x, &bad, &id).is_err());
        assert!(derive_tau(&x, &vec![1, 2].into(), &id).is_err());
    }

    #[test]
    fn consistency_triple_examples() {
        let id = Permutation::identity(4);
        let x: Assignment = vec![1, 2, 2, 1].into();
        assert_eq!(
            consistency_triple(&id, &id, &x).unwrap(),
            (true, true, true)
        );

        let constant: Assignment = vec![1, 1, 1, 1].into();
        let (i, ii, _) = consistency_triple(
            &id,
            &Permutation::transposition(4, 2, 3).unwrap(),
            &constant,
        )
        .unwrap();
        assert!(!i && !ii);
        assert!(consistency_triple(&id, &id, &vec![0, 1, 2, 1].into()).is_err());
    }

    #[test]
    fn witness_on_small_instance() {
        let o = two();
        let rows = Permutation::identity(4);
        let cols = Permutation::from_images(vec![1, 3, 2, 4]).unwrap();
        let p = Puzzle::new(o, [rows.clone(), cols, rows], Givens::none()).unwrap();
        let x: Assignment = vec![1, 2, 2, 1].into();
        let w = find_unicity_witness(&p, &x).unwrap().unwrap();
        assert_eq!(w.alternative, vec![2, 1, 1, 2].into());
        assert!(w.report.is_witness());

        let fixed = p.with_given(1, 1).unwrap();
        assert!(find_unicity_witness(&fixed, &x).unwrap().is_none());
        assert!(find_unicity_witness(&fixed, &vec![2, 1, 1, 2].into()).is_err());

        let c = characterize_solutions(&p, &x).unwrap();
        assert!(c.holds());
        assert_eq!(c.solution_count, 2);
        assert!(c.taus[0].is_identity() || c.taus[1].is_identity());
    }
}
