#include <stdio.h>
#include "ct_ffi.h"

static const char *HK0 =
    "p 8 16\n"
    "e 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n"
    "e 3 5\ne 3 6\ne 4 5\ne 4 6\ne 5 6\n"
    "e 5 7\ne 5 8\ne 6 7\ne 6 8\ne 7 8\n";

int main(void) {
    CtGraph *g = NULL;
    if (ct_graph_parse(HK0, &g) != CT_STATUS_OK) return 10;
    CtResult *r = NULL;
    if (ct_solve(g, CT_MODE_AUTO, &r) != CT_STATUS_OK) return 11;
    size_t red[8];
    size_t k = ct_result_red(r, red, 8);
    if (k != ct_result_size(r) || k > ct_bound(8)) return 12;
    if (ct_result_verify(r, g) != CT_STATUS_OK) return 13;
    printf("%zu\n", k);
    ct_result_free(r);
    ct_graph_free(g);
    return 0;
}
