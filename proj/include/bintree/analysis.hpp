#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bintree/grammar.hpp"
#include "bintree/sources.hpp"
#include "bintree/tree.hpp"

namespace bintree {

// First-order empirical distribution of a symbol sequence.
class EmpiricalDistribution {
 public:
  // Throws kDomain unless the probabilities are positive and sum to 1.
  explicit EmpiricalDistribution(std::vector<double> probabilities);
  static EmpiricalDistribution of(std::span<const Symbol> seq);

  std::span<const double> probabilities() const { return p_; }

 private:
  std::vector<double> p_;
};

double entropy(const EmpiricalDistribution& p);

// gamma(x) = -(x/2) log2(x/2), gamma(0) = 0. Throws kDomain outside [0, 1].
double gamma_fn(double x);

// 5 (N(t) - 1) + N(t) H(p_t), p_t the empirical distribution of S1(t).
double theorem1_bound(const BinaryTree& t);

inline constexpr double kBoundTolerance = 1e-9;

// A candidate dominating function lambda with its polynomial exponent K.
class DominationWitness {
 public:
  using Log2Lambda = std::function<double(const BinaryTree&)>;

  DominationWitness(std::uint64_t k, Log2Lambda log2_lambda);

  // lambda(t) = max(1 / K_n, P(t)) for t with n leaves, lambda(leaf) = 1.
  static DominationWitness for_leaf_centric(const LeafCentricModel& model, std::uint64_t k);
  static DominationWitness for_depth_centric(const DepthCentricModel& model, std::uint64_t k);
  static DominationWitness constant_one(std::uint64_t k);

  std::uint64_t k() const { return k_; }
  double log2_lambda(const BinaryTree& t) const;

 private:
  std::uint64_t k_;
  Log2Lambda log2_lambda_;
};

struct Theorem2aTerms {
  double lhs = 0.0;  // |t|^-1 (L[code(t)] + log2 lambda(t))
  double rhs = 0.0;  // (2K + 10) gamma(r(t))
};

Theorem2aTerms theorem2a_terms(const BinaryTree& t, const DominationWitness& w);
bool theorem2a_check(const BinaryTree& t, const DominationWitness& w);

struct DominationReport {
  enum class Failure { kNone, kProduct, kSumBounds };

  bool ok = true;
  Failure failure = Failure::kNone;
  std::size_t n = 0;   // size at which the first violation occurred
  std::string tree;    // offending tree for product violations
  double sum = 0.0;    // sum of lambda over T_n for sum violations
  std::string message;
};

// Checks lambda(t) <= lambda(t_L) lambda(t_R) for 2 <= |t| <= n_max and
// 1 <= sum_{T_n} lambda <= n^K for 1 <= n <= n_max.
DominationReport verify_domination(const DominationWitness& w, std::size_t n_max);
DominationReport verify_domination(const LeafCentricModel& model, std::size_t n_max,
                                   std::uint64_t k);

// Smallest K >= 1 with sum_{T_n} lambda <= n^K for all 2 <= n <= n_max.
std::uint64_t minimal_domination_exponent(const DominationWitness::Log2Lambda& log2_lambda,
                                          std::size_t n_max);

// Exact per-leaf average redundancy over T_n by enumeration.
double redundancy_exact(const LeafCentricModel& model, std::size_t n,
                        std::size_t cap = kDefaultEnumerationCap);

struct BenchRecord {
  std::uint64_t n = 0;
  std::uint64_t samples = 0;
  double mean_bits_per_leaf = 0.0;
  double mean_info_per_leaf = 0.0;
  double redundancy = 0.0;
  double mean_repr_ratio = 0.0;
  std::uint64_t seed = 0;
  double redundancy_stderr = 0.0;  // not part of the CSV rendering
};

// Seed for one trial, a pure function of (seed, size, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t size, std::uint64_t trial);

// Samples `samples` trees per size (leaf count or depth by model kind),
// encodes each, and aggregates. Trials run on `threads` workers (0 = all
// cores) and are reduced in trial order, so results do not depend on it.
std::vector<BenchRecord> redundancy_monte_carlo(const SourceModel& model,
                                                std::span<const std::uint64_t> sizes,
                                                std::uint64_t samples, std::uint64_t seed,
                                                unsigned threads = 0);

inline constexpr const char* kBenchCsvHeader =
    "n,samples,mean_bits_per_leaf,mean_info_per_leaf,redundancy,mean_repr_ratio,seed";

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records);

}  // namespace bintree
