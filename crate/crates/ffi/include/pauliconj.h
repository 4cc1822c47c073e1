/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef PAULICONJ_H
#define PAULICONJ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum PcStatus {
  PC_STATUS_OK = 0,
  PC_STATUS_NULL_ARGUMENT = 1,
  PC_STATUS_INVALID_UTF8 = 2,
  PC_STATUS_PARSE = 3,
  PC_STATUS_DIMENSION = 4,
  PC_STATUS_INVALID = 5,
  PC_STATUS_BUDGET = 6,
  PC_STATUS_ORACLE_BOUND = 7,
  PC_STATUS_INTERNAL = 8,
  PC_STATUS_PANIC = 9,
} PcStatus;

/**
 * Opaque circuit handle.
 */
typedef struct PcCircuit PcCircuit;

/**
 * Opaque presentation handle.
 */
typedef struct PcPresentation PcPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *pc_last_error(void);

/**
 * Library version as a static string.
 */
const char *pc_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void pc_string_free(char *s);

/**
 * Parse a circuit in the text format ("qubits n" then one gate per line).
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out_circuit` a valid pointer.
 */
enum PcStatus pc_circuit_parse(const char *src, struct PcCircuit **out_circuit);

/**
 * # Safety
 * `c` must be NULL or a handle from this library, not freed before.
 */
void pc_circuit_free(struct PcCircuit *c);

/**
 * # Safety
 * `c` must be a live handle and `out_qubits` a valid pointer.
 */
enum PcStatus pc_circuit_qubits(const struct PcCircuit *c, size_t *out_qubits);

/**
 * # Safety
 * `c` must be a live handle and `out_depth` a valid pointer.
 */
enum PcStatus pc_circuit_t_depth(const struct PcCircuit *c, size_t *out_depth);

/**
 * # Safety
 * `c` must be a live handle and `out_text` a valid pointer.
 */
enum PcStatus pc_circuit_to_text(const struct PcCircuit *c, char **out_text);

/**
 * ENIC: `*out_answer` is true when C is not the identity up to global phase.
 * `max_chains` = 0 selects the default budget.
 *
 * # Safety
 * `c` must be a live handle and `out_answer` a valid pointer.
 */
enum PcStatus pc_decide_enic(const struct PcCircuit *c, uint64_t max_chains, bool *out_answer);

/**
 * COMMUTE: `*out_answer` is true when C P^x C† = P^x.
 *
 * # Safety
 * `c` must be a live handle, `pauli` a NUL-terminated string and `out_answer` valid.
 */
enum PcStatus pc_decide_commute(const struct PcCircuit *c,
                                const char *pauli,
                                uint64_t max_chains,
                                bool *out_answer);

/**
 * SUPPORT: `*out_answer` is true when P^x has a nonzero coefficient in C P^x C†.
 *
 * # Safety
 * As for [`pc_decide_commute`].
 */
enum PcStatus pc_decide_support(const struct PcCircuit *c,
                                const char *pauli,
                                uint64_t max_chains,
                                bool *out_answer);

/**
 * CONJUGATE: the exact coefficient of P^x in C P^x C†, written as
 * "(c0,c1,c2,c3)/sqrt2^k" for (c0 + c1 ω + c2 ω² + c3 ω³)/√2^k with ω = e^{iπ/4}.
 *
 * # Safety
 * As for [`pc_decide_commute`], with `out_value` a valid pointer.
 */
enum PcStatus pc_conjugate_value(const struct PcCircuit *c,
                                 const char *pauli,
                                 uint64_t max_chains,
                                 char **out_value);

/**
 * Presentation of C P^x C†.
 *
 * # Safety
 * `c` must be a live handle, `pauli` a NUL-terminated string and `out_presentation` valid.
 */
enum PcStatus pc_encode(const struct PcCircuit *c,
                        const char *pauli,
                        struct PcPresentation **out_presentation);

/**
 * Parse a presentation from its text form.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out_presentation` valid.
 */
enum PcStatus pc_presentation_parse(const char *src, struct PcPresentation **out_presentation);

/**
 * # Safety
 * `p` must be a live handle and `out_text` valid.
 */
enum PcStatus pc_presentation_to_text(const struct PcPresentation *p, char **out_text);

/**
 * # Safety
 * `p` must be a live handle and `out_depth` valid.
 */
enum PcStatus pc_presentation_depth(const struct PcPresentation *p, size_t *out_depth);

/**
 * A circuit C with C P^z C† equal to the presented operator.
 *
 * # Safety
 * `p` must be a live handle, `pauli` a NUL-terminated string and `out_circuit` valid.
 */
enum PcStatus pc_decode(const struct PcPresentation *p,
                        const char *pauli,
                        struct PcCircuit **out_circuit);

/**
 * # Safety
 * `p` must be NULL or a handle from this library, not freed before.
 */
void pc_presentation_free(struct PcPresentation *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PAULICONJ_H */
