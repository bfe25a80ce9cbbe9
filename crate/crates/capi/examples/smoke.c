#include <assert.h>
#include <stdio.h>
#include <string.h>
#include "wangcount.h"

int main(void) {
    WcTileSet *ts = NULL;
    int rc = wc_tileset_from_catalog("I-family", &ts);
    assert(rc == WC_OK);
    WcCounts *counts = NULL;
    rc = wc_enumerate_rectangle(ts, 3, 4, 2, 32, &counts);
    assert(rc == WC_OK);
    assert(wc_counts_len(counts) == 4);
    assert(strcmp(wc_counts_get(counts, 0), "4") == 0);
    assert(strcmp(wc_counts_get(counts, 3), "2408") == 0);
    printf("C ABI smoke: widths 3, heights 1..4 -> %s %s %s %s (primes %zu)\n",
           wc_counts_get(counts, 0), wc_counts_get(counts, 1),
           wc_counts_get(counts, 2), wc_counts_get(counts, 3),
           wc_counts_primes_used(counts));
    wc_counts_free(counts);
    wc_tileset_free(ts);
    rc = wc_tileset_from_catalog("bogus", &ts);
    assert(rc == WC_ERR_INVALID);
    printf("error path: %s\n", wc_last_error());
    return 0;
}
