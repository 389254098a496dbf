#ifndef HEXTET_H
#define HEXTET_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Number of tetrahedron counts (5 through 15) in a scan histogram.
 */
#define HEXTET_SIZE_BINS 11

/**
 * Result code of every fallible call.
 */
typedef enum HextetStatus {
  HEXTET_STATUS_OK = 0,
  HEXTET_STATUS_NULL_POINTER = 1,
  HEXTET_STATUS_INVALID_ARGUMENT = 2,
  HEXTET_STATUS_IO = 3,
  HEXTET_STATUS_PARSE = 4,
  HEXTET_STATUS_NOT_FOUND = 5,
  HEXTET_STATUS_BUFFER_TOO_SMALL = 6,
  HEXTET_STATUS_PANIC = 7,
} HextetStatus;

/**
 * A catalog of triangulation classes.
 */
typedef struct HextetCatalog HextetCatalog;

/**
 * A tetrahedral mesh with its adjacency.
 */
typedef struct HextetMesh HextetMesh;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *hextet_status_message(enum HextetStatus status);

/**
 * Copies the last error message of this thread into `buf` and returns its
 * length in bytes, excluding the terminator. Truncates to fit.
 *
 * # Safety
 * `buf` is null or points to `len` writable bytes.
 */
uintptr_t hextet_last_error(char *buf, uintptr_t len);

/**
 * Enumerates the catalog searching up to `max_tets` tetrahedra.
 *
 * # Safety
 * `out` is null or a valid pointer to write the handle to.
 */
enum HextetStatus hextet_catalog_build(uintptr_t max_tets, struct HextetCatalog **out);

/**
 * Loads a catalog JSON file.
 *
 * # Safety
 * `path` is a NUL-terminated string and `out` a valid pointer.
 */
enum HextetStatus hextet_catalog_load(const char *path, struct HextetCatalog **out);

/**
 * Number of classes, or 0 for a null handle.
 *
 * # Safety
 * `catalog` is null or a live handle.
 */
uintptr_t hextet_catalog_len(const struct HextetCatalog *catalog);

/**
 * # Safety
 * `catalog` is null or a handle not yet freed.
 */
void hextet_catalog_free(struct HextetCatalog *catalog);

/**
 * Writes the class id of a labeled triangulation into `buf`. `labels`
 * holds `n_tets` groups of four template labels in 1..=8.
 *
 * # Safety
 * `catalog` is a live handle, `labels` points to `4 * n_tets` bytes and
 * `buf` to `len` writable bytes.
 */
enum HextetStatus hextet_classify(const struct HextetCatalog *catalog,
                                  const uint8_t *labels,
                                  uintptr_t n_tets,
                                  char *buf,
                                  uintptr_t len);

/**
 * Builds a mesh from `n_vertices` xyz triples and `n_tets` groups of four
 * 0-based vertex indices.
 *
 * # Safety
 * `coords` points to `3 * n_vertices` doubles, `tets` to `4 * n_tets`
 * indices, `out` is a valid pointer.
 */
enum HextetStatus hextet_mesh_new(const double *coords,
                                  uintptr_t n_vertices,
                                  const uintptr_t *tets,
                                  uintptr_t n_tets,
                                  struct HextetMesh **out);

/**
 * Loads a MEDIT `.mesh` or TetGen `.node`/`.ele` file.
 *
 * # Safety
 * `path` is a NUL-terminated string and `out` a valid pointer.
 */
enum HextetStatus hextet_mesh_load(const char *path, struct HextetMesh **out);

/**
 * # Safety
 * `mesh` is null or a handle not yet freed.
 */
void hextet_mesh_free(struct HextetMesh *mesh);

/**
 * Counts the hexahedra of `mesh` by tetrahedron count: `counts[i]` receives
 * the number with `5 + i` tetrahedra. Hexahedra failing the validity proxy
 * are counted only if `include_invalid` is set.
 *
 * # Safety
 * Handles are live and `counts` points to `HEXTET_SIZE_BINS` writable values.
 */
enum HextetStatus hextet_scan(const struct HextetCatalog *catalog,
                              const struct HextetMesh *mesh,
                              bool include_invalid,
                              uintptr_t *counts);

/**
 * Exactly re-verifies one realization given as JSON. On return `valid`
 * tells whether it passed; the reason for a rejection is available from
 * [`hextet_last_error`].
 *
 * # Safety
 * `json` is a NUL-terminated string and `valid` a valid pointer.
 */
enum HextetStatus hextet_verify_realization(const char *json, bool *valid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEXTET_H */
