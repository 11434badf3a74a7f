#ifndef UNARYFLOW_H
#define UNARYFLOW_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UfStatus {
  UF_STATUS_OK = 0,
  UF_STATUS_INVALID_ARGUMENT = 1,
  UF_STATUS_PARSE_ERROR = 2,
  UF_STATUS_IO_ERROR = 3,
  UF_STATUS_NULL_POINTER = 4,
  UF_STATUS_PANIC = 5,
} UfStatus;

typedef enum UfGenerator {
  UF_GENERATOR_COUNTER = 0,
  UF_GENERATOR_LFSR = 1,
  UF_GENERATOR_SOBOL = 2,
  UF_GENERATOR_HALTON = 3,
} UfGenerator;

typedef enum UfMethod {
  UF_METHOD_DET = 0,
  UF_METHOD_LFSR = 1,
  UF_METHOD_SOBOL = 2,
  UF_METHOD_HALTON = 3,
} UfMethod;

typedef enum UfDomain {
  /**
   * Numerators `0..2^n-1`.
   */
  UF_DOMAIN_REGISTER = 0,
  /**
   * Numerators `0..=2^n`.
   */
  UF_DOMAIN_INCLUSIVE = 1,
} UfDomain;

/**
 * Result of one constant-length multiply.
 */
typedef struct UfMulResult UfMulResult;

/**
 * Aggregate error of an exhaustive multiply sweep.
 */
typedef struct UfReport UfReport;

/**
 * A bit stream.
 */
typedef struct UfStream UfStream;

/**
 * Cycle counts from the two-stage pipeline model.
 */
typedef struct UfLatency {
  uint64_t stage1_cycles;
  uint64_t stage2_cycles;
  uint64_t unpipelined_total;
  uint64_t pipelined_total;
  uint64_t steady_state_interval;
  uint64_t imbalance;
} UfLatency;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *uf_last_error_message(void);

/**
 * NUL-terminated library version.
 */
const char *uf_version(void);

/**
 * Generates the `2^n`-bit stream for `numerator / 2^n`. `param` is the
 * LFSR seed, Sobol dimension or Halton base; 0 selects the default.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum UfStatus uf_stream_generate(enum UfGenerator generator,
                                 uint32_t n,
                                 uint64_t numerator,
                                 uint64_t param,
                                 struct UfStream **out);

/**
 * Exact clock-division product, `2^(2n)` bits.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum UfStatus uf_clockdiv_multiply(uint64_t a, uint64_t b, uint32_t n, struct UfStream **out);

/**
 * # Safety
 * `stream` must be null or a handle from this library.
 */
void uf_stream_free(struct UfStream *stream);

/**
 * # Safety
 * `stream` must be a live handle and `out` writable.
 */
enum UfStatus uf_stream_len(const struct UfStream *stream, size_t *out);

/**
 * # Safety
 * `stream` must be a live handle and `out` writable.
 */
enum UfStatus uf_stream_popcount(const struct UfStream *stream, uint64_t *out);

/**
 * Bit `t` as 0 or 1.
 *
 * # Safety
 * `stream` must be a live handle and `out` writable.
 */
enum UfStatus uf_stream_bit(const struct UfStream *stream, size_t t, uint8_t *out);

/**
 * Writes the stream as a NUL-terminated `0`/`1` string when `capacity`
 * allows; `needed` always receives the required size including the NUL.
 *
 * # Safety
 * `stream` must be a live handle; `buf` must hold `capacity` bytes or be
 * null with `capacity` 0; `needed` must be writable.
 */
enum UfStatus uf_stream_to_string(const struct UfStream *stream,
                                  char *buf,
                                  size_t capacity,
                                  size_t *needed);

/**
 * Constant-length multiply of `a / 2^n` and `b / 2^n`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum UfStatus uf_scalable_multiply(uint64_t a, uint64_t b, uint32_t n, struct UfMulResult **out);

/**
 * # Safety
 * `result` must be null or a handle from this library.
 */
void uf_mul_result_free(struct UfMulResult *result);

/**
 * Output numerator (popcount), ideal numerator and signed error in bits.
 *
 * # Safety
 * `result` must be a live handle; the out pointers must be writable.
 */
enum UfStatus uf_mul_result_value(const struct UfMulResult *result,
                                  uint64_t *value,
                                  uint64_t *ideal,
                                  int64_t *error_bits);

/**
 * # Safety
 * `result` must be a live handle; the out pointers must be writable.
 */
enum UfStatus uf_mul_result_cycles(const struct UfMulResult *result,
                                   uint64_t *stage1,
                                   uint64_t *stage2);

/**
 * The output stream, owned by `result`; null if `result` is null.
 *
 * # Safety
 * `result` must be null or a live handle. The returned pointer must not be
 * freed and is invalid once `result` is freed.
 */
const struct UfStream *uf_mul_result_stream(const struct UfMulResult *result);

/**
 * # Safety
 * `out` must be writable.
 */
enum UfStatus uf_pipeline_model(uint64_t num_multiplies, uint32_t n, struct UfLatency *out);

/**
 * Exhaustive sweep of one method at `2^n`. `workers` 0 uses the default
 * thread pool; results do not depend on it.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum UfStatus uf_sweep_mae(enum UfMethod method,
                           uint32_t n,
                           enum UfDomain domain,
                           uint32_t workers,
                           struct UfReport **out);

/**
 * # Safety
 * `report` must be null or a handle from this library.
 */
void uf_report_free(struct UfReport *report);

/**
 * # Safety
 * `report` must be a live handle; the out pointers must be writable.
 */
enum UfStatus uf_report_summary(const struct UfReport *report, double *mae_pct, uint64_t *cases);

/**
 * Number of cases whose `|error_bits|` equals `bits`.
 *
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum UfStatus uf_report_histogram(const struct UfReport *report, uint64_t bits, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNARYFLOW_H */
