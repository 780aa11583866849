#ifndef JUMP_TOWER_H
#define JUMP_TOWER_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum JtStatus {
  JT_STATUS_OK = 0,
  JT_STATUS_NULL_ARGUMENT = 1,
  JT_STATUS_INVALID_ARGUMENT = 2,
  JT_STATUS_PARSE_ERROR = 3,
  /**
   * The value does not fit in 64 bits.
   */
  JT_STATUS_OVERFLOW = 4,
  JT_STATUS_CONSTRUCTION_FAILED = 5,
  /**
   * A verification suite found violations.
   */
  JT_STATUS_VIOLATION = 6,
  JT_STATUS_PANIC = 7,
} JtStatus;

typedef enum JtDivergence {
  JT_DIVERGENCE_NONE = 0,
  JT_DIVERGENCE_BUDGET_EXHAUSTED = 1,
  JT_DIVERGENCE_ORACLE_OUT_OF_RANGE = 2,
  JT_DIVERGENCE_NESTING_LIMIT = 3,
} JtDivergence;

/**
 * The map `G` relative to one oracle and cap.
 */
typedef struct JtFriedberg JtFriedberg;

/**
 * An oracle.
 */
typedef struct JtOracle JtOracle;

/**
 * A program index.
 */
typedef struct JtProgram JtProgram;

/**
 * A finite string of naturals.
 */
typedef struct JtStr JtStr;

/**
 * The ω-tower over the tree of strings with at most one nonzero entry.
 */
typedef struct JtTower JtTower;

/**
 * Result of [`jt_run`].
 */
typedef struct JtRunResult {
  bool halted;
  /**
   * Whether `output` holds the output; false when it needs more than 64 bits.
   */
  bool output_fits;
  uint64_t output;
  uint64_t steps;
  uint64_t oracle_use;
  enum JtDivergence divergence;
} JtRunResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
uintptr_t jt_last_error(char *buf, uintptr_t len);

/**
 * Cantor pairing. Fails with `Overflow` when the result exceeds 64 bits.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum JtStatus jt_pair(uint64_t m, uint64_t n, uint64_t *out);

/**
 * # Safety
 * `m` and `n` must be valid for writes.
 */
enum JtStatus jt_unpair(uint64_t z, uint64_t *m, uint64_t *n);

/**
 * # Safety
 * `entries` must point to `len` values (or be null when `len` is 0).
 */
struct JtStr *jt_str_new(const uint64_t *entries, uintptr_t len);

/**
 * Parses `<a,b,...>`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` valid for writes.
 */
enum JtStatus jt_str_parse(const char *literal, struct JtStr **out);

/**
 * # Safety
 * `s` must come from this library.
 */
uintptr_t jt_str_len(const struct JtStr *s);

/**
 * Copies up to `cap` entries into `buf`; returns the string's length.
 *
 * # Safety
 * `s` must come from this library; `buf` must hold `cap` values.
 */
uintptr_t jt_str_entries(const struct JtStr *s, uint64_t *buf, uintptr_t cap);

/**
 * Writes `<a,b,...>` into `buf` (NUL-terminated, truncated); returns the
 * full length in bytes.
 *
 * # Safety
 * `s` must come from this library; `buf` null or `len` writable bytes.
 */
uintptr_t jt_str_format(const struct JtStr *s, char *buf, uintptr_t len);

/**
 * # Safety
 * `s` must come from this library; `out` valid for writes.
 */
enum JtStatus jt_str_code(const struct JtStr *s, uint64_t *out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void jt_str_free(struct JtStr *s);

struct JtOracle *jt_oracle_zeros(void);

/**
 * The oracle with the given values, then zeros.
 *
 * # Safety
 * `s` must come from this library.
 */
struct JtOracle *jt_oracle_table(const struct JtStr *s);

/**
 * `zeros`, `jump`, `jumpN` or a table literal; jumps are taken at `stage`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` valid for writes.
 */
enum JtStatus jt_oracle_named(const char *name, uint64_t stage, struct JtOracle **out);

/**
 * # Safety
 * `o` must come from this library and not be used afterwards.
 */
void jt_oracle_free(struct JtOracle *o);

/**
 * Parses program text (`inc r`, `dec r`, `jz r t`, `query r`, `halt`).
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` valid for writes.
 */
enum JtStatus jt_program_parse(const char *source, struct JtProgram **out);

/**
 * The program with a given index, in decimal or as `#<...>`.
 *
 * # Safety
 * `index` must be a NUL-terminated string; `out` valid for writes.
 */
enum JtStatus jt_program_from_index(const char *index, struct JtProgram **out);

/**
 * # Safety
 * `p` must come from this library; `out` valid for writes.
 */
enum JtStatus jt_program_index(const struct JtProgram *p, uint64_t *out);

/**
 * # Safety
 * `p` must come from this library and not be used afterwards.
 */
void jt_program_free(struct JtProgram *p);

/**
 * Runs `program` on `input` with `oracle` for at most `budget` steps.
 *
 * # Safety
 * Handles must come from this library; `out` valid for writes.
 */
enum JtStatus jt_run(const struct JtProgram *program,
                     const struct JtOracle *oracle,
                     uint64_t input,
                     uint64_t budget,
                     struct JtRunResult *out);

/**
 * `G` relative to `oracle`, searching codes below `cap`.
 *
 * # Safety
 * `oracle` must come from this library.
 */
struct JtFriedberg *jt_friedberg_new(const struct JtOracle *oracle, uint64_t cap);

/**
 * `G(σ)`.
 *
 * # Safety
 * Handles must come from this library; `out` valid for writes.
 */
enum JtStatus jt_friedberg_image(const struct JtFriedberg *g,
                                 const struct JtStr *sigma,
                                 struct JtStr **out);

/**
 * The longest `σ` with `G(σ) ⊆ τ`.
 *
 * # Safety
 * Handles must come from this library; `out` valid for writes.
 */
enum JtStatus jt_friedberg_decode(const struct JtFriedberg *g,
                                  const struct JtStr *tau,
                                  struct JtStr **out);

/**
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void jt_friedberg_free(struct JtFriedberg *g);

/**
 * Builds the tower with `levels` levels, all searches bounded by `stage`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum JtStatus jt_tower_new(uintptr_t levels, uint64_t stage, struct JtTower **out);

/**
 * `H_n(ρ)`.
 *
 * # Safety
 * Handles must come from this library; `out` valid for writes.
 */
enum JtStatus jt_tower_level_apply(const struct JtTower *t,
                                   uintptr_t n,
                                   const struct JtStr *rho,
                                   struct JtStr **out);

/**
 * `H^ω_n(ρ)`.
 *
 * # Safety
 * Handles must come from this library; `out` valid for writes.
 */
enum JtStatus jt_tower_omega_apply(const struct JtTower *t,
                                   uintptr_t n,
                                   const struct JtStr *rho,
                                   struct JtStr **out);

/**
 * # Safety
 * `t` must come from this library and not be used afterwards.
 */
void jt_tower_free(struct JtTower *t);

/**
 * Runs a named verification suite. Writes the number of violations and
 * returns `Violation` when there are any.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `violations` null or writable.
 */
enum JtStatus jt_verify(const char *suite, uintptr_t depth, uint64_t stage, uint64_t *violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JUMP_TOWER_H */
