//! C ABI over `sudoku-unicity`.
//!
//! Puzzles and solution sets are opaque handles created by `su_*` constructors
//! and released with the matching `*_free`. Every fallible call returns a
//! [`SuStatus`]; on failure [`su_last_error_message`] describes the error for
//! the calling thread. Cells, values and permutation images are 1-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sudoku_unicity::feasibility::{
    count_solutions, enumerate_solutions, is_uniquely_solvable, solve, Assignment, SolutionSet,
    Verdict,
};
use sudoku_unicity::io::{parse_puzzle, render_grid};
use sudoku_unicity::model::Puzzle;
use sudoku_unicity::reduced::{is_unicity_cell, CellUnicity};
use sudoku_unicity::witness::derive_tau_for;
use sudoku_unicity::Error;

/// Opaque puzzle handle.
pub struct SuPuzzle(Puzzle);

/// Opaque list of enumerated solutions.
pub struct SuSolutionSet(SolutionSet);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    BufferTooSmall = 5,
    Unsolvable = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuVerdict {
    Unsolvable = 0,
    Unique = 1,
    Multiple = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuCellKind {
    /// All solutions share the value.
    Unique = 0,
    /// No solution exists.
    Vacuous = 1,
    /// Two solutions disagree.
    Ambiguous = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(message).ok());
}

fn fail(status: SuStatus, message: impl Into<String>) -> SuStatus {
    set_error(message);
    status
}

fn from_error(e: Error) -> SuStatus {
    let status = match e {
        Error::Parse { .. } => SuStatus::ParseError,
        _ => SuStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `body`, turning a panic into [`SuStatus::Panic`].
fn guard(body: impl FnOnce() -> SuStatus) -> SuStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => {
            if status == SuStatus::Ok {
                LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            }
            status
        }
        Err(_) => fail(SuStatus::Panic, "internal panic"),
    }
}

macro_rules! deref {
    ($ptr:expr, $name:literal) => {
        match unsafe { $ptr.as_ref() } {
            Some(v) => v,
            None => return fail(SuStatus::NullPointer, concat!($name, " is null")),
        }
    };
}

fn write_values(values: &[u32], out: *mut u32, len: usize) -> SuStatus {
    if out.is_null() {
        return fail(SuStatus::NullPointer, "output buffer is null");
    }
    if len < values.len() {
        return fail(
            SuStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", values.len()),
        );
    }
    unsafe { ptr::copy_nonoverlapping(values.as_ptr(), out, values.len()) };
    SuStatus::Ok
}

fn read_assignment(
    values: *const u32,
    len: usize,
    puzzle: &Puzzle,
) -> Result<Assignment, SuStatus> {
    if values.is_null() {
        return Err(fail(SuStatus::NullPointer, "assignment is null"));
    }
    if len != puzzle.cells() {
        return Err(fail(
            SuStatus::InvalidArgument,
            format!("assignment has {len} values, expected {}", puzzle.cells()),
        ));
    }
    Ok(Assignment::new(
        unsafe { std::slice::from_raw_parts(values, len) }.to_vec(),
    ))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next `su_*` call on the same thread.
#[no_mangle]
pub extern "C" fn su_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a `sudoku v1` document into a new puzzle handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn su_puzzle_parse(text: *const c_char, out: *mut *mut SuPuzzle) -> SuStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(SuStatus::NullPointer, "text or out is null");
        }
        let text = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(t) => t,
            Err(e) => return fail(SuStatus::InvalidUtf8, e.to_string()),
        };
        match parse_puzzle(text) {
            Ok(p) => {
                unsafe { *out = Box::into_raw(Box::new(SuPuzzle(p))) };
                SuStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `puzzle` must come from [`su_puzzle_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn su_puzzle_free(puzzle: *mut SuPuzzle) {
    if !puzzle.is_null() {
        drop(unsafe { Box::from_raw(puzzle) });
    }
}

/// Order `n`, or 0 for a null handle.
///
/// # Safety
/// `puzzle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn su_puzzle_order(puzzle: *const SuPuzzle) -> usize {
    unsafe { puzzle.as_ref() }.map_or(0, |p| p.0.n())
}

/// Number of cells `n²`, or 0 for a null handle.
///
/// # Safety
/// `puzzle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn su_puzzle_cells(puzzle: *const SuPuzzle) -> usize {
    unsafe { puzzle.as_ref() }.map_or(0, |p| p.0.cells())
}

/// Counts solutions up to `cap`; `exhausted` is false when the cap cut the
/// search short.
///
/// # Safety
/// `puzzle` must be a live handle; `count` and `exhausted` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn su_count_solutions(
    puzzle: *const SuPuzzle,
    cap: usize,
    count: *mut usize,
    exhausted: *mut bool,
) -> SuStatus {
    guard(|| {
        let p = deref!(puzzle, "puzzle");
        if count.is_null() || exhausted.is_null() {
            return fail(SuStatus::NullPointer, "count or exhausted is null");
        }
        match count_solutions(&p.0, cap) {
            Ok((c, e)) => {
                unsafe {
                    *count = c;
                    *exhausted = e;
                }
                SuStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Writes the first solution into `out[0..n²]`, or returns
/// [`SuStatus::Unsolvable`].
///
/// # Safety
/// `puzzle` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn su_solve(puzzle: *const SuPuzzle, out: *mut u32, len: usize) -> SuStatus {
    guard(|| {
        let p = deref!(puzzle, "puzzle");
        match solve(&p.0) {
            Some(x) => write_values(x.values(), out, len),
            None => fail(SuStatus::Unsolvable, "the puzzle has no solution"),
        }
    })
}

/// # Safety
/// `puzzle` must be a live handle; `verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn su_check_unique(
    puzzle: *const SuPuzzle,
    verdict: *mut SuVerdict,
) -> SuStatus {
    guard(|| {
        let p = deref!(puzzle, "puzzle");
        if verdict.is_null() {
            return fail(SuStatus::NullPointer, "verdict is null");
        }
        let v = match is_uniquely_solvable(&p.0) {
            Verdict::Unsolvable => SuVerdict::Unsolvable,
            Verdict::Unique(_) => SuVerdict::Unique,
            Verdict::Multiple(..) => SuVerdict::Multiple,
        };
        unsafe { *verdict = v };
        SuStatus::Ok
    })
}

/// Whether all solutions agree on `cell`; `value` receives the shared value
/// for [`SuCellKind::Unique`] and 0 otherwise.
///
/// # Safety
/// `puzzle` must be a live handle; `kind` and `value` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn su_unicity_cell(
    puzzle: *const SuPuzzle,
    cell: usize,
    kind: *mut SuCellKind,
    value: *mut u32,
) -> SuStatus {
    guard(|| {
        let p = deref!(puzzle, "puzzle");
        if kind.is_null() || value.is_null() {
            return fail(SuStatus::NullPointer, "kind or value is null");
        }
        let (k, v) = match is_unicity_cell(&p.0, cell) {
            Ok(CellUnicity::Unique(v)) => (SuCellKind::Unique, v),
            Ok(CellUnicity::Vacuous) => (SuCellKind::Vacuous, 0),
            Ok(CellUnicity::Ambiguous) => (SuCellKind::Ambiguous, 0),
            Err(e) => return from_error(e),
        };
        unsafe {
            *kind = k;
            *value = v;
        }
        SuStatus::Ok
    })
}

/// The permutation preserving the constraint sets of family `family` (1..=3)
/// that carries `x` onto `y`. Writes its images to `out[0..n²]`.
///
/// # Safety
/// `puzzle` must be a live handle; `x` and `y` must hold `len` values and
/// `out` room for `len` images.
#[no_mangle]
pub unsafe extern "C" fn su_derive_tau(
    puzzle: *const SuPuzzle,
    x: *const u32,
    y: *const u32,
    len: usize,
    family: u32,
    out: *mut usize,
) -> SuStatus {
    guard(|| {
        let p = deref!(puzzle, "puzzle");
        if !(1..=3).contains(&family) {
            return fail(
                SuStatus::InvalidArgument,
                format!("family {family} outside 1..=3"),
            );
        }
        if out.is_null() {
            return fail(SuStatus::NullPointer, "out is null");
        }
        let (x, y) = match (read_assignment(x, len, &p.0), read_assignment(y, len, &p.0)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match derive_tau_for(&p.0, &x, &y, family as usize) {
            Ok(tau) => {
                unsafe { ptr::copy_nonoverlapping(tau.images().as_ptr(), out, len) };
                SuStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Enumerates up to `limit` solutions (0 means no limit) into a new handle.
///
/// # Safety
/// `puzzle` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn su_enumerate(
    puzzle: *const SuPuzzle,
    limit: usize,
    out: *mut *mut SuSolutionSet,
) -> SuStatus {
    guard(|| {
        let p = deref!(puzzle, "puzzle");
        if out.is_null() {
            return fail(SuStatus::NullPointer, "out is null");
        }
        let set = enumerate_solutions(&p.0, (limit > 0).then_some(limit));
        unsafe { *out = Box::into_raw(Box::new(SuSolutionSet(set))) };
        SuStatus::Ok
    })
}

/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn su_solution_set_len(set: *const SuSolutionSet) -> usize {
    unsafe { set.as_ref() }.map_or(0, |s| s.0.len())
}

/// Whether the enumeration finished without hitting its limit.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn su_solution_set_exhausted(set: *const SuSolutionSet) -> bool {
    unsafe { set.as_ref() }.is_some_and(|s| s.0.exhausted)
}

/// Copies solution `index` (0-based) into `out`.
///
/// # Safety
/// `set` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn su_solution_set_get(
    set: *const SuSolutionSet,
    index: usize,
    out: *mut u32,
    len: usize,
) -> SuStatus {
    guard(|| {
        let s = deref!(set, "solution set");
        match s.0.solutions.get(index) {
            Some(x) => write_values(x.values(), out, len),
            None => fail(
                SuStatus::InvalidArgument,
                format!("index {index} outside 0..{}", s.0.len()),
            ),
        }
    })
}

/// # Safety
/// `set` must come from [`su_enumerate`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn su_solution_set_free(set: *mut SuSolutionSet) {
    if !set.is_null() {
        drop(unsafe { Box::from_raw(set) });
    }
}

/// The givens as a text grid. Release with [`su_string_free`]; null on a null
/// handle.
///
/// # Safety
/// `puzzle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn su_render_grid(puzzle: *const SuPuzzle) -> *mut c_char {
    let Some(p) = (unsafe { puzzle.as_ref() }) else {
        set_error("puzzle is null");
        return ptr::null_mut();
    };
    CString::new(render_grid(&p.0)).map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must come from [`su_render_grid`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn su_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
