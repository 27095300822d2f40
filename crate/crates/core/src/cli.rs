//! Command-line driver. `run` returns the process exit code: 0 on success, 1
//! when `--strict` turns an infeasibility verdict into a failure, 2 on input
//! errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::feasibility::{enumerate_solutions, is_uniquely_solvable, solve, Assignment, Verdict};
use crate::io::{parse_assignment, parse_puzzle, render_assignment};
use crate::model::Puzzle;
use crate::rectangles::{default_rectangle_bounds, find_minimal_rectangles, swap_alternative};
use crate::reduced::{
    build_reduced, enumerate_reduced, find_small_base_set, is_unicity_cell, BaseSet, CellUnicity,
};
use crate::witness::{derive_tau_for, find_unicity_witness, ConsistencyReport};

pub const JSON_SCHEMA: &str = "v1";
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "sudoku-unicity",
    version,
    about = "Generalized Sudoku feasibility and unicity analysis"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Exit with status 1 on infeasibility verdicts (no solution, or not unique for check-unique).
    #[arg(long, global = true)]
    strict: bool,
    /// Upper bound on enumerated solutions.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Lift the enumeration cap.
    #[arg(long, global = true, conflicts_with = "cap")]
    no_cap: bool,
}

impl Global {
    fn limit(&self, requested: Option<usize>) -> Option<usize> {
        match (requested, self.no_cap) {
            (Some(n), true) => Some(n),
            (Some(n), false) => Some(n.min(self.cap)),
            (None, true) => None,
            (None, false) => Some(self.cap),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the first solution.
    Solve { file: PathBuf },
    /// List solutions.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Decide unique solvability; print a witness permutation when not unique.
    CheckUnique { file: PathBuf },
    /// Forced cell values with certifying base sets.
    UnicityCells {
        file: PathBuf,
        #[arg(long)]
        cell: Option<usize>,
        /// Growth steps allowed when searching a base set [default: n²].
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Rectangles on which the first solution is minimal.
    Rectangles {
        file: PathBuf,
        #[command(flatten)]
        args: RectangleArgs,
    },
    /// The permutation carrying one solution onto another.
    DeriveTau {
        file: PathBuf,
        /// Target solution (a document or bare grid).
        #[arg(long)]
        other: PathBuf,
        /// Source solution; defaults to the first solution of the puzzle.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Constraint family `r` whose sets τ must preserve.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
        family: u8,
    },
    /// Dump the reduced problem on a base set and its solutions.
    Reduce {
        file: PathBuf,
        /// Cells such as `1-4,9,13`.
        #[arg(long)]
        cells: String,
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct RectangleArgs {
    /// Largest p [default: n for n <= 4, else 3].
    #[arg(long)]
    pmax: Option<usize>,
    /// Largest q [default: n for n <= 4, else 3].
    #[arg(long)]
    qmax: Option<usize>,
    /// Also print the alternative solution obtained by swapping z_p1 and z_p2
    /// on every given-free rectangle.
    #[arg(long)]
    swap: bool,
    #[arg(long, default_value_t = 1)]
    p1: usize,
    #[arg(long, default_value_t = 2)]
    p2: usize,
}

struct Report {
    text: String,
    json: Value,
    infeasible: bool,
    /// Printed to stderr, never to stdout.
    warning: Option<String>,
}

fn read_source(path: &Path) -> Result<String> {
    let mut text = String::new();
    let outcome = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    outcome.map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn load_puzzle(path: &Path) -> Result<Puzzle> {
    parse_puzzle(&read_source(path)?)
        .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn load_solution(path: &Path, puzzle: &Puzzle) -> Result<Assignment> {
    let x = parse_assignment(&read_source(path)?, puzzle.n())
        .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    if !crate::feasibility::is_solution(puzzle, &x)? {
        return Err(Error::invalid(format!(
            "{}: not a solution of the puzzle",
            path.display()
        )));
    }
    Ok(x)
}

/// Parses `1-4,9,13` into a cell list.
pub fn parse_cell_list(list: &str) -> Result<Vec<usize>> {
    let bad = |t: &str| Error::invalid(format!("bad cell list entry `{t}`"));
    let mut cells = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad(token))?;
                let b: usize = b.trim().parse().map_err(|_| bad(token))?;
                if a > b {
                    return Err(bad(token));
                }
                cells.extend(a..=b);
            }
            None => cells.push(token.parse().map_err(|_| bad(token))?),
        }
    }
    Ok(cells)
}

fn fmt_set(items: &[usize]) -> String {
    let parts: Vec<String> = items.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn fmt_values(items: &[u32]) -> String {
    let parts: Vec<String> = items.iter().map(u32::to_string).collect();
    parts.join(" ")
}

fn unsolvable() -> Report {
    Report {
        text: "unsolvable\n".into(),
        json: json!({ "status": "unsolvable" }),
        infeasible: true,
        warning: None,
    }
}

fn cmd_solve(puzzle: &Puzzle) -> Result<Report> {
    let Some(x) = solve(puzzle) else {
        return Ok(unsolvable());
    };
    Ok(Report {
        text: render_assignment(puzzle, &x)?,
        json: json!({ "status": "solved", "solution": x }),
        infeasible: false,
        warning: None,
    })
}

fn cmd_enumerate(puzzle: &Puzzle, limit: Option<usize>) -> Result<Report> {
    let set = enumerate_solutions(puzzle, limit);
    let mut text = format!("solutions: {}\nexhausted: {}\n", set.len(), set.exhausted);
    for (k, x) in set.solutions.iter().enumerate() {
        let _ = write!(
            text,
            "\n# solution {}\n{}",
            k + 1,
            render_assignment(puzzle, x)?
        );
    }
    Ok(Report {
        text,
        json: json!({
            "count": set.len(),
            "exhausted": set.exhausted,
            "limit": set.limit,
            "solutions": set.solutions,
        }),
        infeasible: set.is_empty(),
        warning: None,
    })
}

fn cmd_check_unique(puzzle: &Puzzle) -> Result<Report> {
    match is_uniquely_solvable(puzzle) {
        Verdict::Unsolvable => Ok(unsolvable()),
        Verdict::Unique(x) => Ok(Report {
            text: format!("unique\n{}", render_assignment(puzzle, &x)?),
            json: json!({ "status": "unique", "solution": x }),
            infeasible: false,
            warning: None,
        }),
        Verdict::Multiple(x, _) => {
            let w = find_unicity_witness(puzzle, &x)?.expect("a second solution yields a witness");
            let text = format!(
                "multiple\ntau: {}\n\n# solution 1\n{}\n# solution 2\n{}",
                w.tau,
                render_assignment(puzzle, &x)?,
                render_assignment(puzzle, &w.alternative)?
            );
            Ok(Report {
                text,
                json: json!({
                    "status": "multiple",
                    "solution": x,
                    "alternative": w.alternative,
                    "tau": w.tau,
                    "consistency": w.report,
                }),
                infeasible: true,
                warning: None,
            })
        }
    }
}

fn cmd_unicity_cells(
    puzzle: &Puzzle,
    cell: Option<usize>,
    budget: Option<usize>,
) -> Result<Report> {
    let total = puzzle.cells();
    let budget = budget.unwrap_or(total);
    let cells: Vec<usize> = match cell {
        Some(c) if c == 0 || c > total => {
            return Err(Error::invalid(format!("cell {c} outside 1..={total}")))
        }
        Some(c) => vec![c],
        None => (1..=total).collect(),
    };
    let solvable = solve(puzzle).is_some();
    let mut text = String::new();
    let mut entries = Vec::new();
    for c in cells {
        let verdict = is_unicity_cell(puzzle, c)?;
        let certificate = match verdict {
            CellUnicity::Ambiguous => None,
            _ => find_small_base_set(puzzle, c, budget)?,
        };
        let _ = write!(text, "cell {c}: ");
        match verdict {
            CellUnicity::Unique(v) => {
                let _ = write!(text, "unique {v}");
            }
            CellUnicity::Vacuous => text.push_str("vacuous"),
            CellUnicity::Ambiguous => text.push_str("ambiguous"),
        }
        match &certificate {
            Some(cert) => {
                let _ = write!(
                    text,
                    " base {} |J|={} reduced_solutions={}{}",
                    fmt_set(cert.base_set.cells()),
                    cert.base_set.len(),
                    cert.reduced_solutions,
                    if cert.exhausted { "" } else { "+" }
                );
            }
            None if verdict != CellUnicity::Ambiguous => text.push_str(" base none within budget"),
            None => {}
        }
        text.push('\n');
        entries.push(json!({ "cell": c, "verdict": verdict, "certificate": certificate }));
    }
    Ok(Report {
        text,
        json: json!({ "budget": budget, "cells": entries }),
        infeasible: !solvable,
        warning: None,
    })
}

fn cmd_rectangles(puzzle: &Puzzle, args: &RectangleArgs) -> Result<Report> {
    let Some(x) = solve(puzzle) else {
        return Ok(unsolvable());
    };
    let (dp, dq) = default_rectangle_bounds(puzzle.n());
    let (pmax, qmax) = (args.pmax.unwrap_or(dp), args.qmax.unwrap_or(dq));
    let warning = (pmax > dp || qmax > dq).then(|| {
        format!(
            "warning: bounds p<={pmax}, q<={qmax} exceed the defaults ({dp}, {dq}) for n = {}; \
             the scan visits C(n,p)·C(n,q) candidates per p and q",
            puzzle.n()
        )
    });
    let reports = find_minimal_rectangles(puzzle, &x, pmax, qmax)?;
    let free = reports.iter().filter(|r| !r.contains_given).count();
    let mut text = format!(
        "solution\n{}\nminimal rectangles (p<={pmax}, q<={qmax}): {}\ngiven-free: {free}\n",
        render_assignment(puzzle, &x)?,
        reports.len()
    );
    let mut entries = Vec::new();
    for r in &reports {
        let rect = &r.rectangle;
        let _ = writeln!(
            text,
            "{}-{} cells {} values {} sets {} {} {}{}",
            rect.p,
            rect.q,
            fmt_set(&rect.cells),
            fmt_values(&r.value_set),
            fmt_set(&rect.witnesses[0]),
            fmt_set(&rect.witnesses[1]),
            fmt_set(&rect.witnesses[2]),
            if r.contains_given {
                " given"
            } else {
                " given-free"
            }
        );
        let mut entry = serde_json::to_value(r).expect("serializable report");
        if args.swap && !r.contains_given {
            let swapped = swap_alternative(puzzle, &x, rect, args.p1, args.p2)?;
            let _ = writeln!(
                text,
                "  swap z{} <-> z{}: {}",
                args.p1,
                args.p2,
                fmt_values(swapped.values())
            );
            entry["swap"] = json!({ "p1": args.p1, "p2": args.p2, "alternative": swapped });
        }
        entries.push(entry);
    }
    Ok(Report {
        text,
        json: json!({
            "status": "solved",
            "solution": x,
            "pmax": pmax,
            "qmax": qmax,
            "given_free": free,
            "rectangles": entries,
        }),
        infeasible: false,
        warning,
    })
}

fn cmd_derive_tau(
    puzzle: &Puzzle,
    other: &Path,
    from: Option<&Path>,
    family: usize,
) -> Result<Report> {
    let y = load_solution(other, puzzle)?;
    let x = match from {
        Some(path) => load_solution(path, puzzle)?,
        None => match solve(puzzle) {
            Some(x) => x,
            None => return Ok(unsolvable()),
        },
    };
    let tau = derive_tau_for(puzzle, &x, &y, family)?;
    let report = ConsistencyReport::evaluate(puzzle, &tau, &x)?;
    let text = format!(
        "tau: {tau}\nfamily: {family}\npi-consistent: {:?}\npi-x-consistent: {:?}\nfixes givens: {}\nmoves x: {}\n",
        report.pi_consistent, report.pi_x_consistent, report.fixes_givens, report.moves_x
    );
    Ok(Report {
        text,
        json: json!({ "tau": tau, "family": family, "consistency": report, "from": x, "to": y }),
        infeasible: false,
        warning: None,
    })
}

fn cmd_reduce(puzzle: &Puzzle, cells: &str, limit: Option<usize>) -> Result<Report> {
    let base = BaseSet::new(parse_cell_list(cells)?, puzzle.cells())?;
    let rp = build_reduced(puzzle, &base)?;
    let set = enumerate_reduced(&rp, limit);
    let mut text = format!("base set: {}\np: {}\n", fmt_set(base.cells()), rp.p());
    for r in 1..=3 {
        let _ = writeln!(
            text,
            "B{r} rows: {} from {}",
            rp.b(r).nrows(),
            fmt_set(rp.kept_rows(r))
        );
    }
    let _ = writeln!(
        text,
        "B_eq rows: {} from {}",
        rp.b_eq().nrows(),
        fmt_set(rp.kept_eq_rows())
    );
    let g: Vec<String> = rp.g_prime().iter().map(i64::to_string).collect();
    let _ = writeln!(text, "g': [{}]", g.join(" "));
    let _ = writeln!(
        text,
        "solutions: {}\nexhausted: {}",
        set.len(),
        set.exhausted
    );
    for z in &set.solutions {
        let _ = writeln!(text, "z = {}", fmt_values(z.values()));
    }
    let b_rows: Vec<usize> = (1..=3).map(|r| rp.b(r).nrows()).collect();
    Ok(Report {
        text,
        json: json!({
            "base_set": base,
            "p": rp.p(),
            "b_rows": b_rows,
            "kept_rows": [rp.kept_rows(1), rp.kept_rows(2), rp.kept_rows(3)],
            "kept_eq_rows": rp.kept_eq_rows(),
            "b_eq_rows": rp.b_eq().nrows(),
            "g_prime": rp.g_prime(),
            "count": set.len(),
            "exhausted": set.exhausted,
            "solutions": set.solutions,
        }),
        infeasible: set.is_empty(),
        warning: None,
    })
}

fn dispatch(cli: &Cli) -> Result<(&'static str, Report)> {
    let g = &cli.global;
    Ok(match &cli.command {
        Command::Solve { file } => ("solve", cmd_solve(&load_puzzle(file)?)?),
        Command::Enumerate { file, limit } => (
            "enumerate",
            cmd_enumerate(&load_puzzle(file)?, g.limit(*limit))?,
        ),
        Command::CheckUnique { file } => ("check-unique", cmd_check_unique(&load_puzzle(file)?)?),
        Command::UnicityCells { file, cell, budget } => (
            "unicity-cells",
            cmd_unicity_cells(&load_puzzle(file)?, *cell, *budget)?,
        ),
        Command::Rectangles { file, args } => {
            ("rectangles", cmd_rectangles(&load_puzzle(file)?, args)?)
        }
        Command::DeriveTau {
            file,
            other,
            from,
            family,
        } => {
            let puzzle = load_puzzle(file)?;
            (
                "derive-tau",
                cmd_derive_tau(&puzzle, other, from.as_deref(), usize::from(*family))?,
            )
        }
        Command::Reduce { file, cells, limit } => (
            "reduce",
            cmd_reduce(&load_puzzle(file)?, cells, g.limit(*limit))?,
        ),
    })
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let (command, report) = match dispatch(&cli) {
        Ok(done) => done,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    if let Some(w) = &report.warning {
        let _ = writeln!(err, "{w}");
    }
    let written = if cli.global.json {
        let mut doc = json!({ "schema": JSON_SCHEMA, "command": command });
        if let (Value::Object(map), Value::Object(body)) = (&mut doc, report.json) {
            map.extend(body);
        }
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable report")
        )
    } else {
        out.write_all(report.text.as_bytes())
    };
    if let Err(e) = written.and_then(|_| out.flush()) {
        // a closed reader (e.g. `| head`) is not an error of the run
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return 0;
        }
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    if cli.global.strict && report.infeasible {
        1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_lists() {
        assert_eq!(
            parse_cell_list("1-4,9, 13").unwrap(),
            vec![1, 2, 3, 4, 9, 13]
        );
        assert_eq!(parse_cell_list("7").unwrap(), vec![7]);
        assert!(parse_cell_list("4-1").is_err());
        assert!(parse_cell_list("x").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["sudoku-unicity", "frobnicate"], &mut out, &mut err), 2);
        assert!(String::from_utf8(err).unwrap().contains("Usage"));
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(
            run(
                ["sudoku-unicity", "solve", "/nonexistent/file"],
                &mut out,
                &mut err
            ),
            2
        );
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["sudoku-unicity", "--help"], &mut out, &mut err), 0);
    }

    #[test]
    fn limits() {
        let g = Global {
            json: false,
            strict: false,
            cap: 10,
            no_cap: false,
        };
        assert_eq!(g.limit(None), Some(10));
        assert_eq!(g.limit(Some(300)), Some(10));
        let g = Global { no_cap: true, ..g };
        assert_eq!(g.limit(None), None);
        assert_eq!(g.limit(Some(300)), Some(300));
    }
}
