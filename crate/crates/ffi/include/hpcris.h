#ifndef HPCRIS_H
#define HPCRIS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HpcrisStatus {
  HPCRIS_STATUS_OK = 0,
  HPCRIS_STATUS_NULL_POINTER = 1,
  HPCRIS_STATUS_INVALID_UTF8 = 2,
  /*
   Malformed JSON or an invalid algebra or lift.
   */
  HPCRIS_STATUS_INVALID_INPUT = 3,
  /*
   A verification inside the engine failed.
   */
  HPCRIS_STATUS_MATH_FAILURE = 4,
  /*
   The output buffer is too small; the required size has been written.
   */
  HPCRIS_STATUS_BUFFER_TOO_SMALL = 5,
  HPCRIS_STATUS_PANIC = 6,
} HpcrisStatus;

typedef struct HpcrisAlgebra HpcrisAlgebra;

typedef struct HpcrisLift HpcrisLift;

typedef struct HpcrisProfile HpcrisProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Engine name and version, static.
 */
const char *hpcris_version(void);

/*
 Message of the last failed call on this thread, or null. Valid until the
 next call into the library on this thread.
 */
const char *hpcris_last_error(void);

/*
 # Safety
 `s` is null or was returned by this library and not freed yet.
 */
void hpcris_string_free(char *s);

/*
 Parses an algebra document.

 # Safety
 `json` is a nul-terminated string; `out` is writable.
 */
enum HpcrisStatus hpcris_algebra_parse(const char *json, struct HpcrisAlgebra **out);

/*
 # Safety
 `alg` is null or a live handle from [`hpcris_algebra_parse`].
 */
void hpcris_algebra_free(struct HpcrisAlgebra *alg);

/*
 Parses a lift of the differential of `alg` to `Z/p^2` and checks that it
 reduces to that differential mod `p`.

 # Safety
 `alg` is a live handle, `json` a nul-terminated string, `out` writable.
 */
enum HpcrisStatus hpcris_lift_parse(const struct HpcrisAlgebra *alg,
                                    const char *json,
                                    struct HpcrisLift **out);

/*
 # Safety
 `lift` is null or a live handle from [`hpcris_lift_parse`].
 */
void hpcris_lift_free(struct HpcrisLift *lift);

/*
 Hochschild homology per weight and degree up to `weight_max`.

 # Safety
 `alg` is a live handle; `out` is writable.
 */
enum HpcrisStatus hpcris_hh(const struct HpcrisAlgebra *alg,
                            uint32_t weight_max,
                            struct HpcrisProfile **out);

/*
 Periodic cyclic homology per weight and parity up to `weight_max`.

 # Safety
 `alg` is a live handle; `out` is writable.
 */
enum HpcrisStatus hpcris_hp(const struct HpcrisAlgebra *alg,
                            uint32_t weight_max,
                            struct HpcrisProfile **out);

/*
 Crystalline periodic cyclic homology of `alg` (over `F_p`) from `lift`.

 # Safety
 `alg` and `lift` are live handles with `lift` parsed against `alg`; `out`
 is writable.
 */
enum HpcrisStatus hpcris_hp_cris(const struct HpcrisAlgebra *alg,
                                 const struct HpcrisLift *lift,
                                 uint32_t weight_max,
                                 struct HpcrisProfile **out);

/*
 Compares the crystalline profile from `lift` with `HP` of a square-zero
 lift: `reference` when non-null, otherwise the verbatim lift. Writes 1 to
 `equal` when the profiles agree and 0 otherwise.

 # Safety
 Handles are live and parsed against `alg`; `reference` may be null;
 `equal` is writable.
 */
enum HpcrisStatus hpcris_compare_with_lift(const struct HpcrisAlgebra *alg,
                                           const struct HpcrisLift *lift,
                                           const struct HpcrisLift *reference,
                                           uint32_t weight_max,
                                           int32_t *equal);

/*
 # Safety
 `profile` is null or a live profile handle.
 */
void hpcris_profile_free(struct HpcrisProfile *profile);

/*
 The profile as JSON; free with [`hpcris_string_free`].

 # Safety
 `profile` is a live handle; `out` is writable.
 */
enum HpcrisStatus hpcris_profile_json(const struct HpcrisProfile *profile, char **out);

/*
 Exponent `e` of each cyclic summand `Z/p^e` of the group at `(weight, key)`,
 ascending, with free summands reported as the ring exponent. `key` is the
 degree for HH and the parity for HP. Writes the summand count to `len`;
 `exponents` may be null to query the count.

 # Safety
 `profile` is a live handle, `len` writable, `exponents` null or writable
 for `capacity` entries.
 */
enum HpcrisStatus hpcris_profile_group(const struct HpcrisProfile *profile,
                                       uint32_t weight,
                                       int64_t key,
                                       uint32_t *exponents,
                                       size_t capacity,
                                       size_t *len);

/*
 1 when the two profiles have the same groups everywhere, else 0; -1 on a
 null argument.

 # Safety
 Both arguments are null or live handles.
 */
int32_t hpcris_profile_equal(const struct HpcrisProfile *a, const struct HpcrisProfile *b);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HPCRIS_H */
