#ifndef WANGCOUNT_H
#define WANGCOUNT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
#define WC_OK 0

#define WC_ERR_NULL_ARG 1

#define WC_ERR_UTF8 2

#define WC_ERR_PARSE 3

#define WC_ERR_INVALID 4

#define WC_ERR_UNCONVERGED 5

#define WC_ERR_INTERNAL 6

/**
 * Exact counts from one enumeration, as decimal strings.
 */
typedef struct WcCounts WcCounts;

/**
 * An immutable weighted Wang tile set.
 */
typedef struct WcTileSet WcTileSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *wc_last_error(void);

/**
 * Loads a tile set from the built-in catalog (for example "I-family",
 * "I2", "tetrominoes", "pentominoes"). On success writes an owned
 * handle to `out`.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string and `out` a valid
 * pointer; the returned handle must be released with
 * [`wc_tileset_free`].
 */
int32_t wc_tileset_from_catalog(const char *name, struct WcTileSet **out);

/**
 * Parses the tile-set text format (`left top bottom right weight` per
 * line, `#` boundary, `%` comments).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid
 * pointer; the returned handle must be released with
 * [`wc_tileset_free`].
 */
int32_t wc_tileset_parse(const char *text, struct WcTileSet **out);

/**
 * Releases a tile set handle. A null handle is ignored.
 *
 * # Safety
 * `ts` must be a handle returned by this library, released once.
 */
void wc_tileset_free(struct WcTileSet *ts);

/**
 * Number of tiles in the set.
 *
 * # Safety
 * `ts` must be a live handle returned by this library.
 */
uintptr_t wc_tileset_len(const struct WcTileSet *ts);

/**
 * Counts tilings of the `width x h` rectangles for every height
 * `h = 1..=max_height` in one pass. `tau` is the halting threshold
 * (use 2), `word_bits` 32 or 64.
 *
 * # Safety
 * `ts` must be a live tile set handle and `out` a valid pointer; the
 * result must be released with [`wc_counts_free`].
 */
int32_t wc_enumerate_rectangle(const struct WcTileSet *ts,
                               uint32_t width,
                               uint32_t max_height,
                               uint32_t tau,
                               uint32_t word_bits,
                               struct WcCounts **out);

/**
 * Number of counts in the result.
 *
 * # Safety
 * `counts` must be a live result handle.
 */
uintptr_t wc_counts_len(const struct WcCounts *counts);

/**
 * The `index`-th count as a decimal string, or null when out of range.
 * The pointer stays valid for the lifetime of the result handle.
 *
 * # Safety
 * `counts` must be a live result handle.
 */
const char *wc_counts_get(const struct WcCounts *counts, uintptr_t index);

/**
 * How many primes the run consumed before halting.
 *
 * # Safety
 * `counts` must be a live result handle.
 */
uintptr_t wc_counts_primes_used(const struct WcCounts *counts);

/**
 * Releases a result handle. A null handle is ignored.
 *
 * # Safety
 * `counts` must be a handle returned by this library, released once.
 */
void wc_counts_free(struct WcCounts *counts);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WANGCOUNT_H */
