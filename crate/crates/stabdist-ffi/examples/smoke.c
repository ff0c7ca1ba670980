#include <stdio.h>
#include <string.h>
#include <assert.h>
#include "stabdist.h"

int main(void) {
    StabdistDistribution *d = NULL;
    assert(stabdist_distribution_new(4, 2, &d) == STABDIST_STATUS_OK);
    char buf[64];
    size_t need = 0;
    assert(stabdist_distribution_total_str(d, buf, sizeof buf, &need) == STABDIST_STATUS_OK);
    assert(strcmp(buf, "36720") == 0);
    double p = 0;
    assert(stabdist_distribution_probability_f64(d, 2, &p) == STABDIST_STATUS_OK);
    stabdist_distribution_free(d);
    unsigned e = 0;
    assert(stabdist_entanglement("XXX\nIZZ\nZZI", 2, &e) == STABDIST_STATUS_OK && e == 1);
    assert(stabdist_distribution_new(3, 9, &d) == STABDIST_STATUS_DOMAIN_ERROR);
    assert(stabdist_last_error_message(buf, sizeof buf, &need) == STABDIST_STATUS_OK);
    printf("C smoke test ok: n_tot(4)=36720, P(E=2)=%.6f, err=\"%s\"\n", p, buf);
    return 0;
}
