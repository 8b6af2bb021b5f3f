#ifndef UNRUH_QFI_H
#define UNRUH_QFI_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define UQ_PARAM_THETA 0

#define UQ_PARAM_PHI 1

#define UQ_PARAM_R 2

#define UQ_NORM_NORMALIZED 0

#define UQ_NORM_AS_PUBLISHED 1

#define UQ_METHOD_ANALYTIC 0

#define UQ_METHOD_FINITE_DIFFERENCE 1

#define UQ_MODE_WSMA 0

#define UQ_MODE_BSMA 1

#define UQ_PRESET_BELL_PHI_PLUS 0

#define UQ_PRESET_BELL_PSI_MINUS 1

/**
 * Werner state; the fidelity argument of [`uq_channel_new_preset`] applies.
 */
#define UQ_PRESET_WERNER 2

/**
 * The X-state used by the figure presets, (-0.9, -0.8, -0.7).
 */
#define UQ_PRESET_FIGURE_X_STATE 3

/**
 * Result of every fallible call.
 */
typedef enum UqStatus {
  UQ_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  UQ_STATUS_NULL_POINTER = 1,
  /**
   * An enumerated code or string argument is not recognized.
   */
  UQ_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A numeric argument lies outside its domain.
   */
  UQ_STATUS_DOMAIN = 3,
  /**
   * The two-qubit state has a negative eigenvalue.
   */
  UQ_STATUS_UNPHYSICAL_CHANNEL = 4,
  /**
   * The measurement branch has zero probability.
   */
  UQ_STATUS_DEGENERATE_BRANCH = 5,
  /**
   * An internal consistency check failed (Bloch vector or Fisher value).
   */
  UQ_STATUS_NUMERICAL = 6,
  /**
   * A sweep row index is past the end.
   */
  UQ_STATUS_OUT_OF_RANGE = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  UQ_STATUS_PANIC = 8,
} UqStatus;

/**
 * Shared two-qubit state plus the mode weights of Bob's excitation.
 */
typedef struct UqChannel UqChannel;

/**
 * Evaluated figure-preset grid.
 */
typedef struct UqSweep UqSweep;

typedef struct UqComplex {
  double re;
  double im;
} UqComplex;

/**
 * Bob's state after Alice measures 00.
 */
typedef struct UqBobState {
  /**
   * Unnormalized branch state, row-major; its trace is `outcome_prob`.
   */
  struct UqComplex rho[4];
  struct UqComplex rho_normalized[4];
  double outcome_prob;
  /**
   * Bloch vector (x, y, z) of `rho_normalized`.
   */
  double bloch[3];
} UqBobState;

typedef struct UqFisherResult {
  double value;
  /**
   * The state was pure to within 1e-9 and the pure-state formula was used.
   */
  bool pure_branch_taken;
  /**
   * A rounding-level negative value was clamped to zero.
   */
  bool clamped;
} UqFisherResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *uq_version(void);

/**
 * Copies the calling thread's last error message into `buffer` (always
 * NUL-terminated when `len > 0`) and returns the full message length in
 * bytes, excluding the terminator. Pass `buffer = NULL` to query the length.
 *
 * # Safety
 * `buffer` must be NULL or point to at least `len` writable bytes.
 */
size_t uq_last_error_message(char *buffer, size_t len);

/**
 * Creates a channel from correlation coefficients, each in [-1, 1]. The
 * state is not required to be physical here; evaluation functions reject
 * unphysical channels. Mode weights start as the single-mode pair.
 *
 * # Safety
 * `out` must be NULL or a valid pointer to writable storage.
 */
enum UqStatus uq_channel_new(double c11, double c22, double c33, struct UqChannel **out);

/**
 * Creates a channel from a `UQ_PRESET_*` code. `fidelity` is only read for
 * `UQ_PRESET_WERNER`.
 *
 * # Safety
 * `out` must be NULL or a valid pointer to writable storage.
 */
enum UqStatus uq_channel_new_preset(uint32_t preset, double fidelity, struct UqChannel **out);

/**
 * Releases a channel. NULL is ignored.
 *
 * # Safety
 * `channel` must be NULL or a handle from `uq_channel_new*` not yet freed.
 */
void uq_channel_free(struct UqChannel *channel);

/**
 * Selects the single-mode (`UQ_MODE_WSMA`) or symmetric (`UQ_MODE_BSMA`) weights.
 *
 * # Safety
 * `channel` must be NULL or a live handle.
 */
enum UqStatus uq_channel_set_mode(struct UqChannel *channel, uint32_t mode_code);

/**
 * Sets explicit mode weights; |qR|^2 + |qL|^2 must be 1.
 *
 * # Safety
 * `channel` must be NULL or a live handle.
 */
enum UqStatus uq_channel_set_weights(struct UqChannel *channel,
                                     struct UqComplex q_r,
                                     struct UqComplex q_l);

/**
 * Reports whether the unaccelerated state is positive semidefinite and its
 * smallest eigenvalue.
 *
 * # Safety
 * `channel` must be NULL or a live handle; out pointers NULL or writable.
 */
enum UqStatus uq_channel_physicality(const struct UqChannel *channel,
                                     bool *physical,
                                     double *min_eigenvalue);

/**
 * Accelerated coefficients B1..B8 at Unruh parameter `r`.
 *
 * # Safety
 * `channel` must be NULL or a live handle; `out` NULL or 8 writable values.
 */
enum UqStatus uq_channel_coefficients(const struct UqChannel *channel,
                                      double r,
                                      struct UqComplex *out);

/**
 * Accelerated 4x4 density matrix at `r`, row-major in the basis
 * |00>, |01>, |10>, |11> with Alice's qubit first.
 *
 * # Safety
 * `channel` must be NULL or a live handle; `out` NULL or 16 writable values.
 */
enum UqStatus uq_channel_density(const struct UqChannel *channel, double r, struct UqComplex *out);

/**
 * Teleports cos(theta/2)|0> + sin(theta/2) e^{i phi}|1> through the channel
 * accelerated to `r` and returns Bob's state for Alice's 00 outcome.
 *
 * # Safety
 * `channel` must be NULL or a live handle; `out` NULL or writable.
 */
enum UqStatus uq_teleport(const struct UqChannel *channel,
                          double theta,
                          double phi,
                          double r,
                          struct UqBobState *out);

/**
 * Quantum Fisher information about `param_code` (`UQ_PARAM_*`) at one point.
 *
 * # Safety
 * `channel` must be NULL or a live handle; `out` NULL or writable.
 */
enum UqStatus uq_fisher(const struct UqChannel *channel,
                        double theta,
                        double phi,
                        double r,
                        uint32_t param_code,
                        uint32_t norm_code,
                        uint32_t method_code,
                        struct UqFisherResult *out);

/**
 * Unruh parameter r = arctan(exp(-pi omega c / a)); `accel = 0` gives 0.
 *
 * # Safety
 * `out` must be NULL or writable.
 */
enum UqStatus uq_r_from_acceleration(double omega, double accel, double c, double *out);

/**
 * Evaluates a figure-panel dataset. `id` is a panel such as "1a" or "6d";
 * `grid` is the point count per axis (at least 2); `norm_code` selects the
 * normalization (the figures use `UQ_NORM_AS_PUBLISHED`).
 *
 * # Safety
 * `id` must be NULL or a NUL-terminated string; `out` NULL or writable.
 */
enum UqStatus uq_figure_sweep_new(const char *id,
                                  size_t grid,
                                  uint32_t norm_code,
                                  struct UqSweep **out);

/**
 * Releases a sweep. NULL is ignored.
 *
 * # Safety
 * `sweep` must be NULL or a handle from `uq_figure_sweep_new` not yet freed.
 */
void uq_sweep_free(struct UqSweep *sweep);

/**
 * Number of rows, or 0 for NULL.
 *
 * # Safety
 * `sweep` must be NULL or a live handle.
 */
size_t uq_sweep_len(const struct UqSweep *sweep);

/**
 * Number of swept axes (coordinates per row), or 0 for NULL.
 *
 * # Safety
 * `sweep` must be NULL or a live handle.
 */
size_t uq_sweep_axes(const struct UqSweep *sweep);

/**
 * Row `index` in lexicographic axis order (outer axis first). Writes
 * `uq_sweep_axes` coordinates into `coords` (radians), the Fisher value and
 * the pure-branch flag.
 *
 * # Safety
 * `sweep` must be NULL or a live handle; `coords` NULL or room for
 * `uq_sweep_axes(sweep)` doubles; the other out pointers NULL or writable.
 */
enum UqStatus uq_sweep_row(const struct UqSweep *sweep,
                           size_t index,
                           double *coords,
                           double *fisher_value,
                           bool *pure_branch);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNRUH_QFI_H */
