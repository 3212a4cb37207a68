#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "bintree/rng.hpp"
#include "bintree/tree.hpp"

namespace bintree {

// One (i, j) split with its probability sigma(i, j).
struct Split {
  std::uint64_t left = 0;
  std::uint64_t right = 0;
  double probability = 0.0;
};

// Rows of a model table file: "n i j p", '#' starts a comment.
struct TableRow {
  std::uint64_t n = 0;
  std::uint64_t i = 0;
  std::uint64_t j = 0;
  double p = 0.0;
};

std::vector<TableRow> read_model_table(std::istream& in);

inline constexpr double kNormalizationTolerance = 1e-9;

// Leaf-centric split function: an internal vertex with n leaves below it
// splits into (i, j) leaves, i + j = n, with probability sigma(i, j).
class LeafCentricModel {
 public:
  enum class Kind { kBisection, kUniformSplit, kTable };

  static LeafCentricModel bisection();
  // Requires 0 < a <= 1/2.
  static LeafCentricModel uniform_split(double a);
  // Rows must satisfy i + j = n and sum to 1 for every n present.
  static LeafCentricModel table(const std::vector<TableRow>& rows);

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  std::string spec() const;

  double sigma(std::uint64_t i, std::uint64_t j) const;
  // Positive-probability splits of n leaves, ascending in the left size.
  std::vector<Split> support(std::uint64_t n) const;
  // Largest n for which sigma is defined (tables are finite).
  std::uint64_t max_size() const;

  // Draws the left leaf count for a vertex with n >= 2 leaves.
  std::uint64_t draw_left(std::uint64_t n, const PathRng& rng) const;

 private:
  // Support of uniform-split at n is [lo, n - lo].
  std::uint64_t uniform_lo(std::uint64_t n) const;

  Kind kind_ = Kind::kBisection;
  double a_ = 0.0;
  std::map<std::uint64_t, std::vector<Split>> table_;
};

// Depth-centric split function: an internal vertex of depth n splits into
// children of depths (i, j), max(i, j) = n - 1, with probability sigma(i, j).
class DepthCentricModel {
 public:
  enum class Kind { kGap, kTable };

  // Gap at level n is min(m, n - 1); m >= 1.
  static DepthCentricModel gap(std::uint64_t m);
  // Rows must satisfy max(i, j) = n - 1 and sum to 1 for every n present.
  static DepthCentricModel table(const std::vector<TableRow>& rows);

  Kind kind() const { return kind_; }
  std::uint64_t m() const { return m_; }
  std::string spec() const;

  double sigma(std::uint64_t i, std::uint64_t j) const;
  std::vector<Split> support(std::uint64_t level) const;
  std::uint64_t max_level() const;

  // Draws child depths for a vertex of depth level >= 1.
  Split draw(std::uint64_t level, const PathRng& rng) const;

 private:
  Kind kind_ = Kind::kGap;
  std::uint64_t m_ = 1;
  std::map<std::uint64_t, std::vector<Split>> table_;
};

using SourceModel = std::variant<LeafCentricModel, DepthCentricModel>;

// `bisection`, `uniform-split,a=<decimal>`, `depth-gap,m=<integer>`,
// `table,file=<path>[,kind=leaf|depth]`.
SourceModel parse_model_spec(std::string_view spec);
std::string model_spec(const SourceModel& model);
bool is_depth_centric(const SourceModel& model);

// log2 P(t); -infinity when some factor is zero.
double log2_prob_leaf_centric(const LeafCentricModel& model, const BinaryTree& t);
double log2_prob_depth_centric(const DepthCentricModel& model, const BinaryTree& t);
double log2_prob(const SourceModel& model, const BinaryTree& t);

BinaryTree sample_leaf_centric(const LeafCentricModel& model, std::uint64_t n, std::uint64_t seed);
BinaryTree sample_depth_centric(const DepthCentricModel& model, std::uint64_t d,
                                std::uint64_t seed);
// `size` is the leaf count for leaf-centric models and the depth otherwise.
BinaryTree sample(const SourceModel& model, std::uint64_t size, std::uint64_t seed);

// x(0) = 1, x(n) = x(n - 1) + x(k_n) where k_n = n - 1 - gap_n.
mpz_class leaf_count_by_depth(const DepthCentricModel& model, std::uint64_t d);

struct Sigma1StarReport {
  double ratio_bound = 0.0;  // max (i + j) / min(i, j) over the support
  bool satisfied = false;    // bound stopped growing over the upper half of the range
  bool analytic = false;     // bound is exact for all n, not just n <= n_max
};

Sigma1StarReport check_sigma1_star(const LeafCentricModel& model, std::uint64_t n_max);

struct Sigma2StarReport {
  std::uint64_t gap_bound = 0;
  bool single_gap = true;
};

Sigma2StarReport check_sigma2_star(const DepthCentricModel& model, std::uint64_t n_max);

}  // namespace bintree
