#ifndef LANDAU_POLARITON_H
#define LANDAU_POLARITON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum LpStatus {
  LP_STATUS_OK = 0,
  LP_STATUS_NULL_POINTER = 1,
  LP_STATUS_INVALID_PARAMETER = 2,
  LP_STATUS_INVALID_GRID = 3,
  LP_STATUS_BUFFER_TOO_SMALL = 4,
  LP_STATUS_NON_CONVERGENCE = 5,
  LP_STATUS_CONFIG = 6,
  LP_STATUS_PANIC = 7,
} LpStatus;

typedef enum LpModelKind {
  LP_MODEL_KIND_COUPLED = 0,
  LP_MODEL_KIND_HOPFIELD = 1,
} LpModelKind;

typedef enum LpBranch {
  LP_BRANCH_LOWER = 0,
  LP_BRANCH_UPPER = 1,
} LpBranch;

// Opaque parameter handle.
typedef struct LpModel LpModel;

// Both polariton branches at one field. Frequencies in Hz.
typedef struct LpBranchPoint {
  double b;
  double f_lp;
  double f_up;
  double w_phot_lp;
  double w_phot_up;
} LpBranchPoint;

// Uniform axis: start + i·(stop − start)/(count − 1).
typedef struct LpAxis {
  double start;
  double stop;
  size_t count;
} LpAxis;

typedef struct LpDecayLocus {
  uint32_t n;
  enum LpBranch branch;
  double b_star;
  double f_star;
} LpDecayLocus;

// Dispersion parameters; frequencies in Hz.
typedef struct LpDispersionParams {
  double f_cav;
  double eta;
  double m_star_ratio;
  double f_p;
} LpDispersionParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread; empty after a success. Valid
// until the next call on the same thread.
const char *lp_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *lp_version(void);

// New handle with the default CH205 parameters and the Hopfield model.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle pointer.
enum LpStatus lp_model_new_default(struct LpModel **out);

// New handle from a JSON parameter document (same keys as the CLI config).
//
// # Safety
// `json` must be a NUL-terminated string; `out` as for `lp_model_new_default`.
enum LpStatus lp_model_from_json(const char *json, struct LpModel **out);

// Release a handle. NULL is ignored.
//
// # Safety
// `model` must come from an `lp_model_*` constructor and not be used again.
void lp_model_free(struct LpModel *model);

// # Safety
// `model` must be a live handle.
enum LpStatus lp_model_set_kind(struct LpModel *model, enum LpModelKind kind);

// Override the normalized coupling η (≥ 0).
//
// # Safety
// `model` must be a live handle.
enum LpStatus lp_model_set_eta(struct LpModel *model, double eta);

// f_c = eB/(2π m*) in Hz.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum LpStatus lp_cyclotron_frequency(const struct LpModel *model, double b, double *out);

// ν = h n_s/(2eB).
//
// # Safety
// `model` must be a live handle and `out` writable.
enum LpStatus lp_filling_factor(const struct LpModel *model, double b, double *out);

// Polariton branches at field `b` (T, ≥ 0).
//
// # Safety
// `model` must be a live handle and `out` writable.
enum LpStatus lp_branches(const struct LpModel *model, double b, struct LpBranchPoint *out);

// Dark ρ_xx (Ω/sq) on a positive field axis; writes `b_axis.count` values.
//
// # Safety
// `model` must be a live handle and `out` valid for `out_len` doubles.
enum LpStatus lp_rho_xx(const struct LpModel *model,
                        struct LpAxis b_axis,
                        double *out,
                        size_t out_len);

// Transmission map, row-major over (B, f); writes `b.count·f.count` values.
//
// # Safety
// `model` must be a live handle and `out` valid for `out_len` doubles.
enum LpStatus lp_transmission_map(const struct LpModel *model,
                                  struct LpAxis b_axis,
                                  struct LpAxis f_axis,
                                  double *out,
                                  size_t out_len);

// Photo-response map with default channel amplitudes, row-major over (B, f).
//
// # Safety
// `model` must be a live handle and `out` valid for `out_len` doubles.
enum LpStatus lp_photoresponse_map(const struct LpModel *model,
                                   struct LpAxis b_axis,
                                   struct LpAxis f_axis,
                                   double *out,
                                   size_t out_len);

// Decay loci for n = 2..=n_max in [b_lo, b_hi]. `*count` receives the number
// found even when `capacity` is too small (status `BUFFER_TOO_SMALL`).
//
// # Safety
// `model` must be a live handle, `out` valid for `capacity` elements (may be
// NULL when `capacity` is 0) and `count` writable.
enum LpStatus lp_decay_loci(const struct LpModel *model,
                            uint32_t n_max,
                            double b_lo,
                            double b_hi,
                            struct LpDecayLocus *out,
                            size_t capacity,
                            size_t *count);

// Fit the dispersion to `n` points (B in T, f in Hz, weights > 0) starting
// from the handle's parameters, with the default search box and without
// bootstrap. `m_star_fixed` ≠ 0 holds m*/m_e at the handle's value.
//
// # Safety
// `model` must be a live handle, the three arrays valid for `n` doubles and
// `out` writable.
enum LpStatus lp_fit_dispersion(const struct LpModel *model,
                                const double *b,
                                const double *f,
                                const double *weight,
                                size_t n,
                                uint64_t seed,
                                int32_t m_star_fixed,
                                struct LpDispersionParams *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LANDAU_POLARITON_H */
