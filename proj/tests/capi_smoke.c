/* Exercises the C interface from plain C. */

#include <stdio.h>
#include <string.h>

#include "stabcx/stabcx.h"

static int failures = 0;

#define EXPECT(cond)                                          \
  do {                                                        \
    if (!(cond)) {                                            \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                             \
    }                                                         \
  } while (0)

static const char* complex_z2 =
    "{\"ring\": \"ZZ\", \"window\": {\"lo\": -1, \"hi\": 0, \"ranks\": [1, 1], \"d\": [[[\"2\"]]]},"
    " \"left_tail\": null, \"right_tail\": null}";

static const char* x_complex =
    "{\"ring\": \"F2[x]/(x^2)\", \"window\": {\"lo\": 0, \"hi\": 0, \"ranks\": [1], \"d\": [[[\"x\"]]]},"
    " \"left_tail\": {\"period\": 1, \"ranks\": [1], \"d\": [[[\"x\"]]]},"
    " \"right_tail\": {\"period\": 1, \"ranks\": [1], \"d\": [[[\"x\"]]]}}";

int main(void) {
  stabcx_ring* r = NULL;
  char* s = NULL;
  EXPECT(stabcx_ring_from_json("\"F2[x]/(x^2)\"", &r) == STABCX_OK);
  EXPECT(stabcx_ring_describe(r, &s) == STABCX_OK);
  EXPECT(s && strstr(s, "gorenstein") != NULL);
  stabcx_string_free(s);
  stabcx_ring_free(r);

  EXPECT(stabcx_ring_from_json("\"Z\"", &r) == STABCX_E_VALIDATION);
  EXPECT(strlen(stabcx_last_error()) > 0);
  EXPECT(stabcx_ring_from_json("{not json", &r) == STABCX_E_PARSE);

  stabcx_complex* x = NULL;
  EXPECT(stabcx_complex_from_json(NULL, complex_z2, &x) == STABCX_OK);
  int holds = -1;
  EXPECT(stabcx_certify(x, "torsion-free", &holds, &s) == STABCX_OK);
  EXPECT(holds == 0);
  stabcx_string_free(s);
  EXPECT(stabcx_certify(x, "bogus", &holds, NULL) == STABCX_E_ARGUMENT);
  int ok = 0;
  EXPECT(stabcx_duality(x, &ok, NULL) == STABCX_OK);
  EXPECT(ok == 1);
  EXPECT(stabcx_stable(x, "omega", 2, 2, &s) == STABCX_OK);
  stabcx_string_free(s);
  stabcx_complex_free(x);

  EXPECT(stabcx_complex_from_json(NULL, x_complex, &x) == STABCX_OK);
  EXPECT(stabcx_complex_cohomology(x, &s) == STABCX_OK);
  EXPECT(strstr(s, "\"acyclic\": true") != NULL);
  stabcx_string_free(s);
  EXPECT(stabcx_certify(x, "reflexive", &holds, NULL) == STABCX_OK);
  EXPECT(holds == 1);
  stabcx_complex_free(x);

  stabcx_module* m = NULL;
  EXPECT(stabcx_module_from_json("{\"ring\": \"ZZ\", \"gens\": 1, \"relations\": [[\"2\"]]}", &m) == STABCX_OK);
  EXPECT(stabcx_gdim(m, 0, &s) == STABCX_OK);
  EXPECT(strstr(s, "\"value\": 1") != NULL);
  stabcx_string_free(s);
  stabcx_module_free(m);

  int failed = 1;
  char* table = NULL;
  const char* cfg = "{\"ring\": \"ZZ\", \"trials\": 2, \"seed\": 3, \"checks\": [\"duality\"]}";
  EXPECT(stabcx_experiment_run(cfg, 0, 0, 0, &failed, &s, &table) == STABCX_OK);
  EXPECT(failed == 0);
  stabcx_string_free(s);
  stabcx_string_free(table);
  EXPECT(stabcx_experiment_run("{\"ring\": \"ZZ\", \"checks\": [\"nope\"]}", 0, 0, 0, &failed, NULL, NULL) ==
         STABCX_E_ARGUMENT);

  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("capi smoke: ok\n");
  return 0;
}
