#ifndef OTTO_H
#define OTTO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OttoStatus {
  OTTO_STATUS_OK = 0,
  OTTO_STATUS_NULL_POINTER = 1,
  OTTO_STATUS_INVALID_ARGUMENT = 2,
  // A matrix or operator set violates its invariants.
  OTTO_STATUS_INVALID_STATE = 3,
  OTTO_STATUS_PARSE = 4,
  OTTO_STATUS_COMPILE = 5,
  OTTO_STATUS_TOMOGRAPHY = 6,
  // Relative entropy with a support mismatch.
  OTTO_STATUS_SUPPORT = 7,
  OTTO_STATUS_IO = 8,
  OTTO_STATUS_BUFFER_TOO_SMALL = 9,
  OTTO_STATUS_INTERNAL = 10,
} OttoStatus;

// Output format for [`otto_report_emit`].
typedef enum OttoFormat {
  OTTO_FORMAT_CSV = 0,
  OTTO_FORMAT_JSON = 1,
} OttoFormat;

// A polarization or polarization ⊗ path density operator.
typedef struct OttoDensity OttoDensity;

// The snapshots of one circuit run.
typedef struct OttoExecution OttoExecution;

// A parsed circuit.
typedef struct OttoProgram OttoProgram;

// A sweep report.
typedef struct OttoReport OttoReport;

// One row of a sweep. Energies in units of ħω₀, entropies in nats.
typedef struct OttoCycle {
  double theta_v_deg;
  double kappa;
  double r;
  double w_ab;
  double q_bc;
  double w_cd;
  double q_da;
  double du_cycle;
  double w_extracted;
  double sigma_e;
  double sigma_c;
  double sigma_cycle;
  double max_delta_vs_closed_form;
} OttoCycle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *otto_last_error(void);

// Library version as a static string.
const char *otto_version(void);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void otto_string_free(char *s);

// Thermal polarization state `½(𝟙 − tanh(x) σ_y)`; `x` may be infinite.
//
// # Safety
// `out` must be valid for writes.
enum OttoStatus otto_density_thermal(double x, struct OttoDensity **out);

// Right-circular polarization `|R⟩⟨R|`.
//
// # Safety
// `out` must be valid for writes.
enum OttoStatus otto_density_right_circular(struct OttoDensity **out);

// Density operator from `2·dim²` doubles: row-major entries as
// interleaved `re, im` pairs. `dim` is 2 or 4.
//
// # Safety
// `entries` must point to `2·dim²` readable doubles; `out` must be valid
// for writes.
enum OttoStatus otto_density_from_entries(size_t dim,
                                          const double *entries,
                                          struct OttoDensity **out);

// # Safety
// `rho` must be NULL or a live handle from this library.
void otto_density_free(struct OttoDensity *rho);

// # Safety
// `rho` must be a live handle; `out` valid for writes.
enum OttoStatus otto_density_dim(const struct OttoDensity *rho, size_t *out);

// Copies the entries as interleaved `re, im` pairs, row-major. `len` is
// the buffer length in doubles and must be at least `2·dim²`.
//
// # Safety
// `rho` must be a live handle; `buffer` must be writable for `len` doubles.
enum OttoStatus otto_density_entries(const struct OttoDensity *rho, double *buffer, size_t len);

// Squared Uhlmann fidelity.
//
// # Safety
// `a`, `b` must be live handles; `out` valid for writes.
enum OttoStatus otto_fidelity(const struct OttoDensity *a,
                              const struct OttoDensity *b,
                              double *out);

// Von Neumann entropy in nats.
//
// # Safety
// `rho` must be a live handle; `out` valid for writes.
enum OttoStatus otto_entropy(const struct OttoDensity *rho, double *out);

// `D(rho ‖ sigma)` in nats.
//
// # Safety
// `rho`, `sigma` must be live handles; `out` valid for writes.
enum OttoStatus otto_relative_entropy(const struct OttoDensity *rho,
                                      const struct OttoDensity *sigma,
                                      double *out);

// Runs a polarization state through the dephasing interferometer set to
// `theta_v` radians (0 to π/4) and traces the path out.
//
// # Safety
// `rho` must be a live handle; `out` valid for writes.
enum OttoStatus otto_dephase(const struct OttoDensity *rho,
                             double theta_v,
                             struct OttoDensity **out);

// Parses circuit source text.
//
// # Safety
// `source` must be a NUL-terminated string; `out` valid for writes.
enum OttoStatus otto_program_parse(const char *source, struct OttoProgram **out);

// # Safety
// `program` must be NULL or a live handle.
void otto_program_free(struct OttoProgram *program);

// Canonical text of a program; free with [`otto_string_free`].
//
// # Safety
// `program` must be a live handle; `out` valid for writes.
enum OttoStatus otto_program_format(const struct OttoProgram *program, char **out);

// Compiles and runs a program.
//
// # Safety
// `program` must be a live handle; `out` valid for writes.
enum OttoStatus otto_program_run(const struct OttoProgram *program, struct OttoExecution **out);

// # Safety
// `execution` must be NULL or a live handle.
void otto_execution_free(struct OttoExecution *execution);

// # Safety
// `execution` must be a live handle; `out` valid for writes.
enum OttoStatus otto_execution_snapshot_count(const struct OttoExecution *execution, size_t *out);

// Copy of the snapshot tapped under `label`.
//
// # Safety
// `execution` must be a live handle, `label` a NUL-terminated string and
// `out` valid for writes.
enum OttoStatus otto_execution_snapshot(const struct OttoExecution *execution,
                                        const char *label,
                                        struct OttoDensity **out);

// Closed-form stroke energetics `W_AB, Q_BC, W_CD, Q_DA`.
//
// # Safety
// `out` must be writable for 4 doubles.
enum OttoStatus otto_closed_form(double kappa, double n, double x_c, double *out);

// One ideal cycle at `theta_v_deg` degrees with `ω₀τ = π`.
//
// # Safety
// `out` must be valid for writes.
enum OttoStatus otto_run_cycle(double theta_v_deg, double n, double x_c, struct OttoCycle *out);

// Sweeps the given θ_V values (degrees). Passing `thetas = NULL` with
// `len = 0` uses the default seven settings.
//
// # Safety
// `thetas` must be readable for `len` doubles; `out` valid for writes.
enum OttoStatus otto_sweep(const double *thetas,
                           size_t len,
                           double n,
                           double x_c,
                           double noise_sigma,
                           uint64_t seed,
                           struct OttoReport **out);

// # Safety
// `report` must be NULL or a live handle.
void otto_report_free(struct OttoReport *report);

// Number of successful rows.
//
// # Safety
// `report` must be a live handle; `out` valid for writes.
enum OttoStatus otto_report_row_count(const struct OttoReport *report, size_t *out);

// Row `index`, rows sorted by `r` ascending.
//
// # Safety
// `report` must be a live handle; `out` valid for writes.
enum OttoStatus otto_report_row(const struct OttoReport *report,
                                size_t index,
                                struct OttoCycle *out);

// Report as CSV or JSON text; free with [`otto_string_free`].
//
// # Safety
// `report` must be a live handle; `out` valid for writes.
enum OttoStatus otto_report_emit(const struct OttoReport *report,
                                 enum OttoFormat format,
                                 char **out);

// Reconstructs a polarization state from six intensities ordered
// `I_H, I_V, I_D, I_AD, I_L, I_R`. `projected` (may be NULL) is set to 1
// when the Stokes vector had to be pulled back onto the Bloch sphere.
//
// # Safety
// `intensities` must be readable for 6 doubles; `out` valid for writes;
// `projected` NULL or valid for writes.
enum OttoStatus otto_tomography_reconstruct(const double *intensities,
                                            struct OttoDensity **out,
                                            int32_t *projected);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OTTO_H */
