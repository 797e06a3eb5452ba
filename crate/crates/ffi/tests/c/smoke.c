#include <stdio.h>
#include <string.h>
#include "g2cover.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed: %s (line %d)\n", #cond, __LINE__); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    G2Workbench *wb = NULL;
    CHECK(g2_workbench_new(3, &wb) == G2_STATUS_CONFIG);
    CHECK(wb == NULL);
    CHECK(strstr(g2_last_error_message(), "power of 2") != NULL);

    CHECK(g2_workbench_new(2, &wb) == G2_STATUS_OK);
    G2Geometry *g = NULL;
    CHECK(g2_geometry_build(wb, 1, &g) == G2_STATUS_OK);
    size_t n = 0;
    CHECK(g2_geometry_count(g, 3, &n) == G2_STATUS_OK);
    CHECK(n == 504);
    uint64_t order = 0;
    bool finite = false;
    CHECK(g2_geometry_pi1_order(g, 1000000, &order, &finite) == G2_STATUS_OK);
    CHECK(finite && order == 3);

    char *json = NULL;
    CHECK(g2_geometry_to_json(g, &json) == G2_STATUS_OK);
    G2Geometry *h = NULL;
    CHECK(g2_geometry_from_json(json, &h) == G2_STATUS_OK);
    CHECK(g2_geometry_count(h, 2, &n) == G2_STATUS_OK);
    CHECK(n == 336);
    g2_string_free(json);
    g2_geometry_free(h);
    g2_geometry_free(g);

    CHECK(g2_geometry_build(wb, 9, &g) == G2_STATUS_CONFIG);
    CHECK(g2_geometry_build(NULL, 1, &g) == G2_STATUS_NULL_POINTER);
    g2_workbench_free(wb);
    printf("ok %s\n", g2_version());
    return 0;
}
