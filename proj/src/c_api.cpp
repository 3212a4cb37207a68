#include "bintree/bintree.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <utility>

#include "bintree/analysis.hpp"
#include "bintree/bitstring.hpp"
#include "bintree/codec.hpp"
#include "bintree/error.hpp"
#include "bintree/grammar.hpp"
#include "bintree/sources.hpp"
#include "bintree/tree.hpp"

struct bt_tree {
  bintree::BinaryTree value;
};

struct bt_bits {
  bintree::BitString value;
};

struct bt_model {
  bintree::SourceModel value;
};

namespace {

thread_local std::string last_error;

bt_status to_status(bintree::ErrorCode code) {
  return static_cast<bt_status>(static_cast<int>(code));
}

bt_status record(bt_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename Body>
bt_status guarded(Body&& body) {
  try {
    body();
    last_error.clear();
    return BT_OK;
  } catch (const bintree::Error& e) {
    return record(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(BT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(BT_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(BT_ERR_INTERNAL, "unknown exception");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) bintree::fail(bintree::ErrorCode::kInvalidArgument, what);
}

}  // namespace

extern "C" {

const char* bt_last_error(void) { return last_error.c_str(); }

const char* bt_status_name(bt_status status) {
  switch (status) {
    case BT_OK: return "OK";
    case BT_ERR_INTERNAL: return "InternalError";
    default:
      if (status >= BT_ERR_SYNTAX && status <= BT_ERR_INVALID_ARGUMENT) {
        return bintree::error_code_name(static_cast<bintree::ErrorCode>(status)).data();
      }
      return "Unknown";
  }
}

void bt_string_free(char* s) { std::free(s); }

void bt_buffer_free(bt_buffer* buffer) {
  if (buffer == nullptr) return;
  std::free(buffer->data);
  buffer->data = nullptr;
  buffer->size = 0;
}

bt_status bt_tree_parse(const char* text, size_t length, bt_tree** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new bt_tree{bintree::parse_tree(std::string_view(text, length))};
  });
}

bt_status bt_tree_clone(const bt_tree* tree, bt_tree** out) {
  return guarded([&] {
    require(tree != nullptr && out != nullptr, "null argument");
    *out = new bt_tree{tree->value};
  });
}

void bt_tree_free(bt_tree* tree) { delete tree; }

bt_status bt_tree_serialize(const bt_tree* tree, char** out) {
  return guarded([&] {
    require(tree != nullptr && out != nullptr, "null argument");
    *out = copy_string(bintree::serialize_tree(tree->value));
  });
}

size_t bt_tree_num_leaves(const bt_tree* tree) {
  return tree == nullptr ? 0 : tree->value.num_leaves();
}

size_t bt_tree_depth(const bt_tree* tree) {
  return tree == nullptr ? 0 : bintree::depth(tree->value);
}

int bt_tree_equal(const bt_tree* a, const bt_tree* b) {
  return a != nullptr && b != nullptr && a->value == b->value ? 1 : 0;
}

bt_status bt_tree_subtree(const bt_tree* tree, const char* path, bt_tree** out) {
  return guarded([&] {
    require(tree != nullptr && path != nullptr && out != nullptr, "null argument");
    bintree::VertexRef ref;
    for (const char* c = path; *c != '\0'; ++c) {
      if (*c == 'L') {
        ref.path.push_back(bintree::Step::kLeft);
      } else if (*c == 'R') {
        ref.path.push_back(bintree::Step::kRight);
      } else {
        bintree::fail(bintree::ErrorCode::kBadPath, "paths consist of 'L' and 'R'");
      }
    }
    *out = new bt_tree{bintree::subtree_at(tree->value, ref)};
  });
}

bt_status bt_tree_stats_compute(const bt_tree* tree, bt_tree_stats* out) {
  return guarded([&] {
    require(tree != nullptr && out != nullptr, "null argument");
    const auto& t = tree->value;
    if (t.is_leaf()) bintree::fail(bintree::ErrorCode::kTrivialTree, "statistics need >= 2 leaves");
    bt_tree_stats s{};
    s.leaves = t.num_leaves();
    s.depth = bintree::depth(t);
    s.distinct_subtrees = bintree::distinct_subtree_count(t);
    s.representation_ratio = bintree::representation_ratio(t);
    s.codeword_bits = bintree::codeword_length(t);
    s.theorem1_bound = bintree::theorem1_bound(t);
    *out = s;
  });
}

bt_status bt_tree_grammar_text(const bt_tree* tree, char** out) {
  return guarded([&] {
    require(tree != nullptr && out != nullptr, "null argument");
    *out = copy_string(bintree::render_grammar(bintree::build_grammar(tree->value)));
  });
}

bt_status bt_enumerate(size_t n, size_t cap, bt_tree_visitor visit, void* user) {
  return guarded([&] {
    require(visit != nullptr, "null visitor");
    for (auto& t : bintree::enumerate_trees(n, cap)) {
      const bt_tree handle{std::move(t)};
      if (visit(&handle, user) != 0) break;
    }
  });
}

bt_status bt_catalan(uint64_t n, char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = copy_string(bintree::catalan(n).get_str());
  });
}

bt_status bt_bits_from_text(const char* text, size_t length, bt_bits** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new bt_bits{bintree::BitString::from_text(std::string_view(text, length))};
  });
}

void bt_bits_free(bt_bits* bits) { delete bits; }

size_t bt_bits_length(const bt_bits* bits) { return bits == nullptr ? 0 : bits->value.size(); }

bt_status bt_bits_to_text(const bt_bits* bits, char** out) {
  return guarded([&] {
    require(bits != nullptr && out != nullptr, "null argument");
    *out = copy_string(bits->value.to_text());
  });
}

bt_status bt_bits_to_packed_record(const bt_bits* bits, bt_buffer* out) {
  return guarded([&] {
    require(bits != nullptr && out != nullptr, "null argument");
    std::ostringstream stream;
    bintree::write_packed_record(stream, bits->value);
    const std::string bytes = stream.str();
    auto* data = static_cast<uint8_t*>(std::malloc(bytes.empty() ? 1 : bytes.size()));
    if (data == nullptr) throw std::bad_alloc();
    std::memcpy(data, bytes.data(), bytes.size());
    out->data = data;
    out->size = bytes.size();
  });
}

bt_status bt_bits_from_packed_record(const uint8_t* data, size_t size, bt_bits** out,
                                     size_t* consumed_bytes) {
  return guarded([&] {
    require(out != nullptr && consumed_bytes != nullptr, "null argument");
    require(data != nullptr || size == 0, "null data");
    std::istringstream stream(std::string(reinterpret_cast<const char*>(data), size));
    bintree::BitString bits;
    if (!bintree::read_packed_record(stream, bits)) {
      bintree::fail(bintree::ErrorCode::kTruncated, "no packed record in empty input");
    }
    *consumed_bytes = 8 + (bits.size() + 7) / 8;
    *out = new bt_bits{std::move(bits)};
  });
}

bt_status bt_encode(const bt_tree* tree, bt_bits** out) {
  return guarded([&] {
    require(tree != nullptr && out != nullptr, "null argument");
    *out = new bt_bits{bintree::encode(tree->value)};
  });
}

bt_status bt_decode(const bt_bits* bits, size_t offset, bt_tree** out, size_t* consumed) {
  return guarded([&] {
    require(bits != nullptr && out != nullptr && consumed != nullptr, "null argument");
    auto decoded = bintree::decode(bits->value, offset);
    *consumed = decoded.consumed;
    *out = new bt_tree{std::move(decoded.tree)};
  });
}

bt_status bt_codeword_length(const bt_tree* tree, size_t* out) {
  return guarded([&] {
    require(tree != nullptr && out != nullptr, "null argument");
    *out = bintree::codeword_length(tree->value);
  });
}

bt_status bt_model_parse(const char* spec, bt_model** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "null argument");
    *out = new bt_model{bintree::parse_model_spec(spec)};
  });
}

void bt_model_free(bt_model* model) { delete model; }

int bt_model_is_depth_centric(const bt_model* model) {
  return model != nullptr && bintree::is_depth_centric(model->value) ? 1 : 0;
}

bt_status bt_model_log2_prob(const bt_model* model, const bt_tree* tree, double* out) {
  return guarded([&] {
    require(model != nullptr && tree != nullptr && out != nullptr, "null argument");
    *out = bintree::log2_prob(model->value, tree->value);
  });
}

bt_status bt_model_sample(const bt_model* model, uint64_t size, uint64_t seed, bt_tree** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    *out = new bt_tree{bintree::sample(model->value, size, seed)};
  });
}

uint64_t bt_trial_seed(uint64_t seed, uint64_t size, uint64_t index) {
  return bintree::trial_seed(seed, size, index);
}

bt_status bt_bench(const bt_model* model, const uint64_t* sizes, size_t n_sizes,
                   uint64_t samples, uint64_t seed, unsigned threads, bt_bench_record* records) {
  return guarded([&] {
    require(model != nullptr && records != nullptr, "null argument");
    require(sizes != nullptr || n_sizes == 0, "null sizes");
    const auto result = bintree::redundancy_monte_carlo(
        model->value, std::span<const uint64_t>(sizes, n_sizes), samples, seed, threads);
    for (std::size_t k = 0; k < result.size(); ++k) {
      const auto& r = result[k];
      records[k] = bt_bench_record{r.n,          r.samples,         r.mean_bits_per_leaf,
                                   r.mean_info_per_leaf, r.redundancy, r.mean_repr_ratio,
                                   r.seed};
    }
  });
}

bt_status bt_bench_csv(const bt_bench_record* records, size_t count, char** out) {
  return guarded([&] {
    require(out != nullptr && (records != nullptr || count == 0), "null argument");
    std::vector<bintree::BenchRecord> rows;
    rows.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      const auto& r = records[k];
      bintree::BenchRecord b;
      b.n = r.n;
      b.samples = r.samples;
      b.mean_bits_per_leaf = r.mean_bits_per_leaf;
      b.mean_info_per_leaf = r.mean_info_per_leaf;
      b.redundancy = r.redundancy;
      b.mean_repr_ratio = r.mean_repr_ratio;
      b.seed = r.seed;
      rows.push_back(b);
    }
    std::ostringstream csv;
    bintree::write_bench_csv(csv, rows);
    *out = copy_string(csv.str());
  });
}

}  // extern "C"
