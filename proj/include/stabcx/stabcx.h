#ifndef STABCX_H
#define STABCX_H

/* C interface to the stabcx core. Objects are opaque handles; every call
 * returns a status code and leaves a message for stabcx_last_error() on
 * failure. Strings returned through char** are owned by the caller and
 * released with stabcx_string_free. */

#include <stdint.h>

#if defined(_WIN32)
#define STABCX_API __declspec(dllexport)
#elif defined(STABCX_BUILD)
#define STABCX_API __attribute__((visibility("default")))
#else
#define STABCX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  STABCX_OK = 0,
  STABCX_E_ARGUMENT = 1,
  STABCX_E_UNSUPPORTED = 2,
  STABCX_E_PRECONDITION = 3,
  STABCX_E_VALIDATION = 4,
  STABCX_E_PARSE = 5,
  STABCX_E_INTERNAL = 6
} stabcx_status;

typedef struct stabcx_ring stabcx_ring;
typedef struct stabcx_complex stabcx_complex;
typedef struct stabcx_module stabcx_module;

STABCX_API const char* stabcx_version(void);
/* Message of the last failed call on this thread, "" if none. */
STABCX_API const char* stabcx_last_error(void);
STABCX_API void stabcx_string_free(char* s);

/* Rings: a descriptor object or a roster name such as "ZZ" or "F2[x]/(x^2)". */
STABCX_API stabcx_status stabcx_ring_from_json(const char* json, stabcx_ring** out);
STABCX_API void stabcx_ring_free(stabcx_ring* r);
/* {"name", "flags", "descriptor"} */
STABCX_API stabcx_status stabcx_ring_describe(const stabcx_ring* r, char** json_out);

/* Complexes. The ring is taken from the fixture when r is NULL. */
STABCX_API stabcx_status stabcx_complex_from_json(const stabcx_ring* r, const char* json, stabcx_complex** out);
STABCX_API void stabcx_complex_free(stabcx_complex* x);
STABCX_API stabcx_status stabcx_complex_to_json(const stabcx_complex* x, char** json_out);
STABCX_API stabcx_status stabcx_complex_dual(const stabcx_complex* x, stabcx_complex** out);
STABCX_API stabcx_status stabcx_complex_cohomology(const stabcx_complex* x, char** json_out);
STABCX_API stabcx_status stabcx_complex_split(const stabcx_complex* x, char** json_out);

/* op is "omega", "sigma" or "approx"; n >= 1 for the towers. */
STABCX_API stabcx_status stabcx_stable(const stabcx_complex* x, const char* op, int n, int margin, char** json_out);
/* *torsion-free / *reflexive certificate; *holds receives the verdict asked for
 * by kind ("torsion-free" or "reflexive"). */
STABCX_API stabcx_status stabcx_certify(const stabcx_complex* x, const char* kind, int* holds, char** json_out);
/* Contraction and classification of a resolution fixture. */
STABCX_API stabcx_status stabcx_contract(const char* resolution_json, int margin, char** json_out);
STABCX_API stabcx_status stabcx_delta(const stabcx_complex* x, int n, int i, int margin, char** json_out);
/* Duality verdict; *ok is 0 only for an assertion-mode discrepancy. */
STABCX_API stabcx_status stabcx_duality(const stabcx_complex* x, int* ok, char** json_out);

/* Modules: {"ring", "gens", "relations"}. */
STABCX_API stabcx_status stabcx_module_from_json(const char* json, stabcx_module** out);
STABCX_API void stabcx_module_free(stabcx_module* m);
/* horizon <= 0 selects the default for the ring kind. */
STABCX_API stabcx_status stabcx_gdim(const stabcx_module* m, int horizon, char** json_out);

/* Experiments. seed_override applies when has_seed is nonzero, margin when
 * positive. *failed is set when some trial failed. */
STABCX_API stabcx_status stabcx_experiment_run(const char* config_json, int has_seed, uint64_t seed_override,
                                               int margin, int* failed, char** report_json, char** table_out);
STABCX_API stabcx_status stabcx_fixture_replay(const char* fixture_json, int* failed, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
