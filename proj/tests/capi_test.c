/* Exercises the C API from C. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "gridgas/gridgas.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(int argc, char** argv) {
  if (argc < 2) return 1;
  char path[4096];
  gg_model* m = NULL;
  char *report = NULL, *csv = NULL;

  EXPECT(gg_schema_version() == 1);
  EXPECT(strlen(gg_version()) > 0);

  EXPECT(gg_model_load("{\"dim\": 2, \"grids\": [{\"c\": \"1/0\"}]}", &m) == GG_CONFIG_ERROR);
  EXPECT(strstr(gg_last_error(), "/grids/0/c") != NULL);
  EXPECT(gg_model_load(NULL, &m) == GG_INVALID_ARGUMENT);

  snprintf(path, sizeof path, "%s/three_grids.json", argv[1]);
  EXPECT(gg_model_load_file(path, &m) == GG_OK);
  if (!m) return 1;

  EXPECT(gg_analyze(m, NULL, &report) == GG_OK);
  EXPECT(report && strstr(report, "\"N\": 2") != NULL);
  gg_string_free(report);

  EXPECT(gg_model_presentation(m, &report) == GG_OK);
  {
    gg_model* again = NULL;
    char* report2 = NULL;
    EXPECT(gg_model_load(report, &again) == GG_OK);
    EXPECT(gg_model_presentation(again, &report2) == GG_OK);
    EXPECT(report2 && strcmp(report, report2) == 0);
    gg_string_free(report2);
    gg_model_free(again);
  }
  gg_string_free(report);

  EXPECT(gg_limit_tail(m, "{\"samples\": 1000, \"seed\": 1, \"xi\": \"0.5:4:log\"}", &report, &csv) == GG_OK);
  EXPECT(csv && strncmp(csv, "# gridgas-schema 1\nxi,F_raw,F_iso,stderr,n\n", 42) == 0);
  gg_string_free(report);
  gg_string_free(csv);

  EXPECT(gg_limit_tail(m, "{\"sead\": 1}", &report, &csv) == GG_CONFIG_ERROR);
  EXPECT(strstr(gg_last_error(), "sead") != NULL);
  EXPECT(gg_siegel_check(m, "{\"psi\": [7, 0]}", &report) == GG_CONFIG_ERROR);
  EXPECT(gg_simulate(m, "{\"rho\": 0.6, \"samples\": 10, \"start\": \"fixed\", \"start_point\": [0.1, 0]}", &report,
                     &csv) == GG_NUMERIC_ERROR);

  EXPECT(gg_siegel_check(m, "{\"samples\": 20000, \"seed\": 3}", &report) == GG_OK);
  gg_string_free(report);

  gg_model_free(m);
  if (failures) fprintf(stderr, "%d failures\n", failures);
  else printf("capi_test: all checks passed\n");
  return failures ? 1 : 0;
}
