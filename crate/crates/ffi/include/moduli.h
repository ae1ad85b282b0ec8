#ifndef MODULI_H
#define MODULI_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a call. The numeric values of the first six variants match
// the command line exit codes.
typedef enum ModuliStatus {
  MODULI_STATUS_OK = 0,
  MODULI_STATUS_FAILURE = 1,
  MODULI_STATUS_INVALID_INPUT = 2,
  MODULI_STATUS_TYPE_MISMATCH = 3,
  MODULI_STATUS_MONOTONICITY_VIOLATION = 4,
  MODULI_STATUS_INVALID_AUTOMORPHISM = 5,
  MODULI_STATUS_NULL_POINTER = 6,
  MODULI_STATUS_PANIC = 7,
} ModuliStatus;

// A sampled orientation preserving circle map.
typedef struct ModuliCircleMap ModuliCircleMap;

// A representation of a finitely presented group into PSL(2,R).
typedef struct ModuliRepresentation ModuliRepresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library on the same thread.
const char *moduli_last_error(void);

// Releases a string returned by the library.
//
// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void moduli_string_free(char *s);

// Parses a representation file's JSON text.
//
// # Safety
// `json` must be a nul terminated string and `out` a valid pointer.
enum ModuliStatus moduli_representation_from_json(const char *json,
                                                  struct ModuliRepresentation **out_rep);

// Builds the holonomy representation of a pants file's JSON text.
//
// # Safety
// `json` must be a nul terminated string and `out` a valid pointer.
enum ModuliStatus moduli_representation_from_pants_json(const char *json,
                                                        struct ModuliRepresentation **out_rep);

// Serializes a representation to JSON. Free the result with
// [`moduli_string_free`].
//
// # Safety
// `rep` must be a live handle and `out_json` a valid pointer.
enum ModuliStatus moduli_representation_to_json(const struct ModuliRepresentation *rep,
                                                char **out_json);

// Number of generators, or 0 for a null handle.
//
// # Safety
// `rep` must be null or a live handle.
uintptr_t moduli_representation_rank(const struct ModuliRepresentation *rep);

// # Safety
// `rep` must be null or a handle not yet freed.
void moduli_representation_free(struct ModuliRepresentation *rep);

// Distance between the characters of two representations with the
// anchors given as comma separated words, such as `"A,AB,B"`.
//
// # Safety
// Handles must be live, `anchors` nul terminated and `out_distance` valid.
enum ModuliStatus moduli_char_distance(const struct ModuliRepresentation *a,
                                       const struct ModuliRepresentation *b,
                                       const char *anchors,
                                       double *out_distance);

// Boundary map between two representations sampled on the sinks of the
// ball of radius `depth`, after checking that they agree on element types.
//
// # Safety
// Handles must be live and `out_map` valid.
enum ModuliStatus moduli_circle_map_from_ball(const struct ModuliRepresentation *base,
                                              const struct ModuliRepresentation *target,
                                              uintptr_t depth,
                                              uintptr_t budget,
                                              struct ModuliCircleMap **out_map);

// Number of samples, or 0 for a null handle.
//
// # Safety
// `map` must be null or a live handle.
uintptr_t moduli_circle_map_len(const struct ModuliCircleMap *map);

// Copies up to `capacity` sample angles into `xs` and `ys`, in radians in
// `[0, 2π)`, and reports how many were written.
//
// # Safety
// `map` must be live; `xs` and `ys` must hold `capacity` doubles.
enum ModuliStatus moduli_circle_map_samples(const struct ModuliCircleMap *map,
                                            double *xs,
                                            double *ys,
                                            uintptr_t capacity,
                                            uintptr_t *out_written);

// Image angle of `angle` under the interpolated map.
//
// # Safety
// `map` must be live and `out_angle` valid.
enum ModuliStatus moduli_circle_map_evaluate(const struct ModuliCircleMap *map,
                                             double angle,
                                             double *out_angle);

// Largest equivariance defect over the generators of the two
// representations.
//
// # Safety
// Handles must be live and `out_defect` valid.
enum ModuliStatus moduli_circle_map_equivariance(const struct ModuliCircleMap *map,
                                                 const struct ModuliRepresentation *base,
                                                 const struct ModuliRepresentation *target,
                                                 double *out_defect);

// Douady–Earle extension of the map at the disk point `(re, im)` with `n`
// quadrature nodes.
//
// # Safety
// `map` must be live and the output pointers valid.
enum ModuliStatus moduli_circle_map_extend(const struct ModuliCircleMap *map,
                                           double re,
                                           double im,
                                           uintptr_t n,
                                           double *out_re,
                                           double *out_im);

// # Safety
// `map` must be null or a handle not yet freed.
void moduli_circle_map_free(struct ModuliCircleMap *map);

// Applies the mapping class given as JSON to the marked structure
// `(reference, target)`, returning the new target and the action formula
// defect at `depth`.
//
// # Safety
// Handles must be live, `mapping_class_json` nul terminated and the
// output pointers valid.
enum ModuliStatus moduli_act(const struct ModuliRepresentation *reference,
                             const struct ModuliRepresentation *target,
                             const char *mapping_class_json,
                             uintptr_t depth,
                             struct ModuliRepresentation **out_target,
                             double *out_defect);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODULI_H */
