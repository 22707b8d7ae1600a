#ifndef MKDV_H
#define MKDV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MkdvStatus {
  MKDV_STATUS_OK = 0,
  MKDV_STATUS_NULL_POINTER = 1,
  MKDV_STATUS_INVALID_INPUT = 2,
  MKDV_STATUS_NON_HERMITIAN = 3,
  MKDV_STATUS_MISMATCHED_MODES = 4,
  /**
   * Result does not fit the output type, or a domain violation.
   */
  MKDV_STATUS_DOMAIN = 5,
  MKDV_STATUS_BLOW_UP = 6,
  MKDV_STATUS_CONFIG = 7,
  MKDV_STATUS_INTERNAL = 8,
} MkdvStatus;

/**
 * Real-valued field: Fourier coefficients on |k| ≤ max_mode.
 */
typedef struct MkdvField MkdvField;

/**
 * Time stepper with its current state.
 */
typedef struct MkdvSimulation MkdvSimulation;

/**
 * Model parameters; see `mkdv_model_default`.
 */
typedef struct MkdvModel {
  /**
   * ±1 in front of the nonlinearity.
   */
  int8_t sign;
  bool renormalized;
  size_t max_mode;
  double dt;
  double t_final;
  bool dealias;
} MkdvModel;

/**
 * Modified-energy parameters; see `mkdv_energy_config_default`.
 */
typedef struct MkdvEnergyConfig {
  double alpha;
  double beta;
  double gamma;
  double theta1;
  double theta2;
  double ll_ratio;
  int64_t k_threshold;
  int8_t sign;
} MkdvEnergyConfig;

typedef struct MkdvEnergyReport {
  int64_t k;
  double quadratic;
  double e31;
  double e32;
  double e5;
  double total;
} MkdvEnergyReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread ("" if none). Valid until
 * the next failing call on the same thread.
 */
const char *mkdv_last_error(void);

/**
 * Zero field. Free with `mkdv_field_free`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MkdvStatus mkdv_field_new(size_t max_mode, struct MkdvField **out);

/**
 * # Safety
 * `field` must come from `mkdv_field_new` (or be null) and not be used afterwards.
 */
void mkdv_field_free(struct MkdvField *field);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MkdvStatus mkdv_field_max_mode(const struct MkdvField *field, size_t *out);

/**
 * Set û(k) = re + i·im and û(−k) to its conjugate (im must be 0 for k = 0).
 *
 * # Safety
 * `field` must be valid.
 */
enum MkdvStatus mkdv_field_set(struct MkdvField *field, int64_t k, double re, double im);

/**
 * û(k); zero for |k| > max_mode.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MkdvStatus mkdv_field_get(const struct MkdvField *field, int64_t k, double *re, double *im);

/**
 * ‖u‖_{H^s} = (Σ ⟨k⟩^{2s}|û(k)|²)^{1/2}.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MkdvStatus mkdv_field_sobolev_norm(const struct MkdvField *field, double s, double *out);

/**
 * Ω₃ = −3(k₁+k₂)(k₁+k₃)(k₂+k₃); `Domain` if it does not fit in i64.
 *
 * # Safety
 * `out` must be valid.
 */
enum MkdvStatus mkdv_omega3(int64_t k1, int64_t k2, int64_t k3, int64_t *out);

struct MkdvModel mkdv_model_default(void);

/**
 * Start a simulation at t = 0 from a copy of `u0`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MkdvStatus mkdv_sim_new(const struct MkdvModel *model,
                             const struct MkdvField *u0,
                             struct MkdvSimulation **out);

/**
 * # Safety
 * `sim` must come from `mkdv_sim_new` (or be null) and not be used afterwards.
 */
void mkdv_sim_free(struct MkdvSimulation *sim);

/**
 * Advance `n` steps of size dt. On blow-up the state stays at the last
 * finite step and `BlowUp` is returned.
 *
 * # Safety
 * `sim` must be valid.
 */
enum MkdvStatus mkdv_sim_step(struct MkdvSimulation *sim, size_t n);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MkdvStatus mkdv_sim_time(const struct MkdvSimulation *sim, double *out);

/**
 * Copy the current field into `dest`, which must have the model's max_mode.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MkdvStatus mkdv_sim_copy_field(const struct MkdvSimulation *sim, struct MkdvField *dest);

struct MkdvEnergyConfig mkdv_energy_config_default(void);

/**
 * Modified energy of mode k (1 ≤ k ≤ max_mode) and its pieces.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MkdvStatus mkdv_energy_mode(const struct MkdvField *field,
                                 int64_t k,
                                 const struct MkdvEnergyConfig *config,
                                 struct MkdvEnergyReport *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MKDV_H */
