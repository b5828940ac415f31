#include <stdio.h>
#include <string.h>

#include "ordfill.h"

int main(void) {
    OrdfillManifold *m = NULL;
    if (ordfill_manifold_bundled(&m) != ORDFILL_STATUS_OK) return 10;
    char *h = NULL;
    if (ordfill_homology(m, &h) != ORDFILL_STATUS_OK || strstr(h, "Z + Z/10") == NULL) return 11;
    ordfill_string_free(h);
    OrdfillVerdict v;
    if (ordfill_slope_verdict(m, -3, 2, &v) != ORDFILL_STATUS_OK || v != ORDFILL_VERDICT_NOT_ORDERABLE) return 12;
    const char *slopes[] = {"-2", "5"};
    char *bundle = NULL;
    if (ordfill_pipeline(m, slopes, 2, &bundle) != ORDFILL_STATUS_OK) return 13;
    if (ordfill_verify_bundle(bundle) != ORDFILL_STATUS_OK) return 14;
    ordfill_string_free(bundle);
    if (ordfill_slope_verdict(m, 1, 0, NULL) != ORDFILL_STATUS_INVALID_ARGUMENT) return 15;
    if (ordfill_last_error() == NULL) return 16;
    ordfill_manifold_free(m);
    puts("ok");
    return 0;
}
