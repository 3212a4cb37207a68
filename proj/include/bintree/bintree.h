/*
 * C interface to the bintree library: grammar-based compression of full
 * binary trees, tree sources and redundancy measurement.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a bt_status; on
 * failure bt_last_error() describes the problem for the calling thread.
 * Strings and buffers returned through out-parameters are allocated by the
 * library and released with bt_string_free / bt_buffer_free.
 */
#ifndef BINTREE_BINTREE_H
#define BINTREE_BINTREE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(BINTREE_BUILDING)
#define BT_API __declspec(dllexport)
#else
#define BT_API __declspec(dllimport)
#endif
#else
#define BT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bt_status {
  BT_OK = 0,
  BT_ERR_SYNTAX = 1,
  BT_ERR_TRIVIAL_TREE = 2,
  BT_ERR_BAD_PATH = 3,
  BT_ERR_CAP_EXCEEDED = 4,
  BT_ERR_CYCLIC_GRAMMAR = 5,
  BT_ERR_MALFORMED_GRAMMAR = 6,
  BT_ERR_LENGTH_MISMATCH = 7,
  BT_ERR_TRUNCATED = 8,
  BT_ERR_MALFORMED_B2 = 9,
  BT_ERR_MALFORMED_B3 = 10,
  BT_ERR_INDEX_OUT_OF_RANGE = 11,
  BT_ERR_INCONSISTENT_FREQUENCIES = 12,
  BT_ERR_DEAD_END = 13,
  BT_ERR_NOT_SIGMA2_STAR = 14,
  BT_ERR_BAD_MODEL = 15,
  BT_ERR_DOMAIN = 16,
  BT_ERR_SIZE_LIMIT = 17,
  BT_ERR_IO = 18,
  BT_ERR_INVALID_ARGUMENT = 19,
  BT_ERR_INTERNAL = 100
} bt_status;

typedef struct bt_tree bt_tree;
typedef struct bt_bits bt_bits;
typedef struct bt_model bt_model;

typedef struct bt_buffer {
  uint8_t* data;
  size_t size;
} bt_buffer;

/* Message for the most recent failure on this thread; never NULL. */
BT_API const char* bt_last_error(void);
BT_API const char* bt_status_name(bt_status status);

BT_API void bt_string_free(char* s);
BT_API void bt_buffer_free(bt_buffer* buffer);

/* ---- trees ---- */

BT_API bt_status bt_tree_parse(const char* text, size_t length, bt_tree** out);
BT_API bt_status bt_tree_clone(const bt_tree* tree, bt_tree** out);
BT_API void bt_tree_free(bt_tree* tree);
BT_API bt_status bt_tree_serialize(const bt_tree* tree, char** out);
BT_API size_t bt_tree_num_leaves(const bt_tree* tree);
BT_API size_t bt_tree_depth(const bt_tree* tree);
BT_API int bt_tree_equal(const bt_tree* a, const bt_tree* b);

/* Final subtree at a path of 'L'/'R' characters ("" is the root). */
BT_API bt_status bt_tree_subtree(const bt_tree* tree, const char* path, bt_tree** out);

typedef struct bt_tree_stats {
  size_t leaves;
  size_t depth;
  size_t distinct_subtrees;    /* N(t) */
  double representation_ratio; /* N(t) / |t| */
  size_t codeword_bits;
  double theorem1_bound;
} bt_tree_stats;

BT_API bt_status bt_tree_stats_compute(const bt_tree* tree, bt_tree_stats* out);

/* Grammar rendering, one "i -> (x,y)" rule per line. */
BT_API bt_status bt_tree_grammar_text(const bt_tree* tree, char** out);

/* Calls visit for every tree with n leaves in enumeration order; a nonzero
 * return from visit stops the walk. The tree is only valid during the call. */
typedef int (*bt_tree_visitor)(const bt_tree* tree, void* user);
BT_API bt_status bt_enumerate(size_t n, size_t cap, bt_tree_visitor visit, void* user);

/* Catalan number K_n in decimal. */
BT_API bt_status bt_catalan(uint64_t n, char** out);

/* ---- bit strings ---- */

BT_API bt_status bt_bits_from_text(const char* text, size_t length, bt_bits** out);
BT_API void bt_bits_free(bt_bits* bits);
BT_API size_t bt_bits_length(const bt_bits* bits);
BT_API bt_status bt_bits_to_text(const bt_bits* bits, char** out);
/* Packed record: 8-byte little-endian bit count, then bits MSB-first. */
BT_API bt_status bt_bits_to_packed_record(const bt_bits* bits, bt_buffer* out);
/* Parses one record at the start of data; *consumed_bytes is its size. */
BT_API bt_status bt_bits_from_packed_record(const uint8_t* data, size_t size, bt_bits** out,
                                            size_t* consumed_bytes);

/* ---- codec ---- */

BT_API bt_status bt_encode(const bt_tree* tree, bt_bits** out);
/* Decodes the codeword starting at bit offset; *consumed is its length. */
BT_API bt_status bt_decode(const bt_bits* bits, size_t offset, bt_tree** out, size_t* consumed);
BT_API bt_status bt_codeword_length(const bt_tree* tree, size_t* out);

/* ---- sources ---- */

BT_API bt_status bt_model_parse(const char* spec, bt_model** out);
BT_API void bt_model_free(bt_model* model);
BT_API int bt_model_is_depth_centric(const bt_model* model);
BT_API bt_status bt_model_log2_prob(const bt_model* model, const bt_tree* tree, double* out);
/* size is the leaf count (leaf-centric) or depth (depth-centric). */
BT_API bt_status bt_model_sample(const bt_model* model, uint64_t size, uint64_t seed,
                                 bt_tree** out);

/* ---- analysis ---- */

typedef struct bt_bench_record {
  uint64_t n;
  uint64_t samples;
  double mean_bits_per_leaf;
  double mean_info_per_leaf;
  double redundancy;
  double mean_repr_ratio;
  uint64_t seed;
} bt_bench_record;

/* Seed for trial `index` of a run seeded with `seed` at size `size`. */
BT_API uint64_t bt_trial_seed(uint64_t seed, uint64_t size, uint64_t index);

/* Fills records[0..n_sizes) ; threads = 0 uses all cores. */
BT_API bt_status bt_bench(const bt_model* model, const uint64_t* sizes, size_t n_sizes,
                          uint64_t samples, uint64_t seed, unsigned threads,
                          bt_bench_record* records);
/* CSV rendering of records, header line included. */
BT_API bt_status bt_bench_csv(const bt_bench_record* records, size_t count, char** out);

#ifdef __cplusplus
}
#endif

#endif /* BINTREE_BINTREE_H */
