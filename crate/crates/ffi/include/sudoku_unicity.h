#ifndef SUDOKU_UNICITY_H
#define SUDOKU_UNICITY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SuCellKind {
  // All solutions share the value.
  SU_CELL_KIND_UNIQUE = 0,
  // No solution exists.
  SU_CELL_KIND_VACUOUS = 1,
  // Two solutions disagree.
  SU_CELL_KIND_AMBIGUOUS = 2,
} SuCellKind;

typedef enum SuStatus {
  SU_STATUS_OK = 0,
  SU_STATUS_NULL_POINTER = 1,
  SU_STATUS_INVALID_UTF8 = 2,
  SU_STATUS_PARSE_ERROR = 3,
  SU_STATUS_INVALID_ARGUMENT = 4,
  SU_STATUS_BUFFER_TOO_SMALL = 5,
  SU_STATUS_UNSOLVABLE = 6,
  SU_STATUS_PANIC = 7,
} SuStatus;

typedef enum SuVerdict {
  SU_VERDICT_UNSOLVABLE = 0,
  SU_VERDICT_UNIQUE = 1,
  SU_VERDICT_MULTIPLE = 2,
} SuVerdict;

// Opaque puzzle handle.
typedef struct SuPuzzle SuPuzzle;

// Opaque list of enumerated solutions.
typedef struct SuSolutionSet SuSolutionSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next `su_*` call on the same thread.
const char *su_last_error_message(void);

// Parses a `sudoku v1` document into a new puzzle handle.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum SuStatus su_puzzle_parse(const char *text, struct SuPuzzle **out);

// # Safety
// `puzzle` must come from [`su_puzzle_parse`] and not be freed twice.
void su_puzzle_free(struct SuPuzzle *puzzle);

// Order `n`, or 0 for a null handle.
//
// # Safety
// `puzzle` must be null or a live handle.
size_t su_puzzle_order(const struct SuPuzzle *puzzle);

// Number of cells `n²`, or 0 for a null handle.
//
// # Safety
// `puzzle` must be null or a live handle.
size_t su_puzzle_cells(const struct SuPuzzle *puzzle);

// Counts solutions up to `cap`; `exhausted` is false when the cap cut the
// search short.
//
// # Safety
// `puzzle` must be a live handle; `count` and `exhausted` valid pointers.
enum SuStatus su_count_solutions(const struct SuPuzzle *puzzle,
                                 size_t cap,
                                 size_t *count,
                                 bool *exhausted);

// Writes the first solution into `out[0..n²]`, or returns
// [`SuStatus::Unsolvable`].
//
// # Safety
// `puzzle` must be a live handle; `out` must hold `len` values.
enum SuStatus su_solve(const struct SuPuzzle *puzzle, uint32_t *out, size_t len);

// # Safety
// `puzzle` must be a live handle; `verdict` a valid pointer.
enum SuStatus su_check_unique(const struct SuPuzzle *puzzle, enum SuVerdict *verdict);

// Whether all solutions agree on `cell`; `value` receives the shared value
// for [`SuCellKind::Unique`] and 0 otherwise.
//
// # Safety
// `puzzle` must be a live handle; `kind` and `value` valid pointers.
enum SuStatus su_unicity_cell(const struct SuPuzzle *puzzle,
                              size_t cell,
                              enum SuCellKind *kind,
                              uint32_t *value);

// The permutation preserving the constraint sets of family `family` (1..=3)
// that carries `x` onto `y`. Writes its images to `out[0..n²]`.
//
// # Safety
// `puzzle` must be a live handle; `x` and `y` must hold `len` values and
// `out` room for `len` images.
enum SuStatus su_derive_tau(const struct SuPuzzle *puzzle,
                            const uint32_t *x,
                            const uint32_t *y,
                            size_t len,
                            uint32_t family,
                            size_t *out);

// Enumerates up to `limit` solutions (0 means no limit) into a new handle.
//
// # Safety
// `puzzle` must be a live handle; `out` a valid pointer.
enum SuStatus su_enumerate(const struct SuPuzzle *puzzle, size_t limit, struct SuSolutionSet **out);

// # Safety
// `set` must be null or a live handle.
size_t su_solution_set_len(const struct SuSolutionSet *set);

// Whether the enumeration finished without hitting its limit.
//
// # Safety
// `set` must be null or a live handle.
bool su_solution_set_exhausted(const struct SuSolutionSet *set);

// Copies solution `index` (0-based) into `out`.
//
// # Safety
// `set` must be a live handle; `out` must hold `len` values.
enum SuStatus su_solution_set_get(const struct SuSolutionSet *set,
                                  size_t index,
                                  uint32_t *out,
                                  size_t len);

// # Safety
// `set` must come from [`su_enumerate`] and not be freed twice.
void su_solution_set_free(struct SuSolutionSet *set);

// The givens as a text grid. Release with [`su_string_free`]; null on a null
// handle.
//
// # Safety
// `puzzle` must be null or a live handle.
char *su_render_grid(const struct SuPuzzle *puzzle);

// # Safety
// `s` must come from [`su_render_grid`] and not be freed twice.
void su_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUDOKU_UNICITY_H */
