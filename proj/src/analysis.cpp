#include "bintree/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <thread>

#include "bintree/codec.hpp"
#include "bintree/error.hpp"

namespace bintree {

namespace {

double log2_catalan(std::uint64_t n) {
  const mpz_class k = catalan(n);
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, k.get_mpz_t());
  return std::log2(mantissa) + static_cast<double>(exponent);
}

DominationWitness::Log2Lambda catalan_floor_lambda(std::function<double(const BinaryTree&)> log2_p) {
  return [log2_p = std::move(log2_p)](const BinaryTree& t) {
    if (t.is_leaf()) return 0.0;
    return std::max(-log2_catalan(t.num_leaves()), log2_p(t));
  };
}

double log2_sum_exp2(std::span<const double> values) {
  const double top = *std::max_element(values.begin(), values.end());
  if (std::isinf(top)) return top;
  double acc = 0.0;
  for (const double v : values) acc += std::exp2(v - top);
  return top + std::log2(acc);
}

std::string format12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> probabilities)
    : p_(std::move(probabilities)) {
  double sum = 0.0;
  for (const double p : p_) {
    if (!(p > 0.0 && p <= 1.0)) fail(ErrorCode::kDomain, "probabilities must lie in (0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail(ErrorCode::kDomain, "probabilities must sum to 1");
}

EmpiricalDistribution EmpiricalDistribution::of(std::span<const Symbol> seq) {
  if (seq.empty()) fail(ErrorCode::kDomain, "empirical distribution of an empty sequence");
  std::map<Symbol, std::size_t> counts;
  for (const Symbol s : seq) ++counts[s];
  std::vector<double> p;
  p.reserve(counts.size());
  for (const auto& [symbol, count] : counts) {
    p.push_back(static_cast<double>(count) / static_cast<double>(seq.size()));
  }
  return EmpiricalDistribution(std::move(p));
}

double entropy(const EmpiricalDistribution& p) {
  double h = 0.0;
  for (const double pa : p.probabilities()) h -= pa * std::log2(pa);
  return std::max(h, 0.0);
}

double gamma_fn(double x) {
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorCode::kDomain, "gamma is defined on [0, 1]");
  if (x == 0.0) return 0.0;
  return -(x / 2.0) * std::log2(x / 2.0);
}

double theorem1_bound(const BinaryTree& t) {
  const Grammar g = build_grammar(t);
  const SSequences seqs = s_sequences(g);
  const double n = static_cast<double>(g.n_vars);
  return 5.0 * (n - 1.0) + n * entropy(EmpiricalDistribution::of(seqs.s1));
}

DominationWitness::DominationWitness(std::uint64_t k, Log2Lambda log2_lambda)
    : k_(k), log2_lambda_(std::move(log2_lambda)) {
  if (k_ < 1) fail(ErrorCode::kInvalidArgument, "K must be a positive integer");
}

DominationWitness DominationWitness::for_leaf_centric(const LeafCentricModel& model,
                                                      std::uint64_t k) {
  return DominationWitness(k, catalan_floor_lambda([model](const BinaryTree& t) {
                             return log2_prob_leaf_centric(model, t);
                           }));
}

DominationWitness DominationWitness::for_depth_centric(const DepthCentricModel& model,
                                                       std::uint64_t k) {
  return DominationWitness(k, catalan_floor_lambda([model](const BinaryTree& t) {
                             return log2_prob_depth_centric(model, t);
                           }));
}

DominationWitness DominationWitness::constant_one(std::uint64_t k) {
  return DominationWitness(k, [](const BinaryTree&) { return 0.0; });
}

double DominationWitness::log2_lambda(const BinaryTree& t) const { return log2_lambda_(t); }

Theorem2aTerms theorem2a_terms(const BinaryTree& t, const DominationWitness& w) {
  if (t.is_leaf()) fail(ErrorCode::kTrivialTree, "the inequality concerns trees with >= 2 leaves");
  const double leaves = static_cast<double>(t.num_leaves());
  Theorem2aTerms terms;
  terms.lhs = (static_cast<double>(codeword_length(t)) + w.log2_lambda(t)) / leaves;
  terms.rhs = (2.0 * static_cast<double>(w.k()) + 10.0) * gamma_fn(representation_ratio(t));
  return terms;
}

bool theorem2a_check(const BinaryTree& t, const DominationWitness& w) {
  const Theorem2aTerms terms = theorem2a_terms(t, w);
  return terms.lhs <= terms.rhs + kBoundTolerance;
}

DominationReport verify_domination(const DominationWitness& w, std::size_t n_max) {
  DominationReport report;
  // lambda of the trivial tree; T_1 holds only the leaf.
  const double leaf = w.log2_lambda(BinaryTree::leaf());
  if (leaf > kBoundTolerance || leaf < -kBoundTolerance) {
    report.ok = false;
    report.failure = DominationReport::Failure::kSumBounds;
    report.n = 1;
    report.sum = std::exp2(leaf);
    report.message = "sum over T_1 must be exactly 1 for any K";
    return report;
  }
  for (std::size_t n = 2; n <= n_max; ++n) {
    const auto trees = enumerate_trees(n, std::max(n_max, kDefaultEnumerationCap));
    std::vector<double> values;
    values.reserve(trees.size());
    for (const auto& t : trees) {
      const double lt = w.log2_lambda(t);
      const double product = w.log2_lambda(t.left()) + w.log2_lambda(t.right());
      if (lt > 0.0 + kBoundTolerance || lt > product + kBoundTolerance) {
        report.ok = false;
        report.failure = DominationReport::Failure::kProduct;
        report.n = n;
        report.tree = serialize_tree(t);
        report.message = "lambda(t) > lambda(t_L) lambda(t_R) or lambda(t) > 1 at " + report.tree;
        return report;
      }
      values.push_back(lt);
    }
    const double log2_sum = log2_sum_exp2(values);
    const double log2_bound = static_cast<double>(w.k()) * std::log2(static_cast<double>(n));
    if (log2_sum < -kBoundTolerance || log2_sum > log2_bound + kBoundTolerance) {
      report.ok = false;
      report.failure = DominationReport::Failure::kSumBounds;
      report.n = n;
      report.sum = std::exp2(log2_sum);
      report.message = "sum of lambda over T_" + std::to_string(n) + " = " + format12(report.sum) +
                       " outside [1, n^" + std::to_string(w.k()) + "]";
      return report;
    }
  }
  return report;
}

DominationReport verify_domination(const LeafCentricModel& model, std::size_t n_max,
                                   std::uint64_t k) {
  return verify_domination(DominationWitness::for_leaf_centric(model, k), n_max);
}

std::uint64_t minimal_domination_exponent(const DominationWitness::Log2Lambda& log2_lambda,
                                          std::size_t n_max) {
  double needed = 1.0;
  for (std::size_t n = 2; n <= n_max; ++n) {
    const auto trees = enumerate_trees(n, std::max(n_max, kDefaultEnumerationCap));
    std::vector<double> values;
    values.reserve(trees.size());
    for (const auto& t : trees) values.push_back(log2_lambda(t));
    const double log2_sum = log2_sum_exp2(values);
    needed = std::max(needed, log2_sum / std::log2(static_cast<double>(n)));
  }
  return static_cast<std::uint64_t>(std::ceil(needed - kBoundTolerance));
}

double redundancy_exact(const LeafCentricModel& model, std::size_t n, std::size_t cap) {
  if (n < 2) fail(ErrorCode::kTrivialTree, "redundancy is defined for n >= 2");
  double total = 0.0;
  for (const auto& t : enumerate_trees(n, cap)) {
    const double lp = log2_prob_leaf_centric(model, t);
    if (std::isinf(lp)) continue;
    const double l = static_cast<double>(encode(t).size());
    total += (l + lp) / static_cast<double>(n) * std::exp2(lp);
  }
  return total;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t size, std::uint64_t trial) {
  return mix64(mix64(seed, size), trial);
}

std::vector<BenchRecord> redundancy_monte_carlo(const SourceModel& model,
                                                std::span<const std::uint64_t> sizes,
                                                std::uint64_t samples, std::uint64_t seed,
                                                unsigned threads) {
  if (sizes.empty()) fail(ErrorCode::kInvalidArgument, "at least one size is required");
  if (samples < 1) fail(ErrorCode::kInvalidArgument, "at least one sample per size is required");
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());

  struct Trial {
    double bits_per_leaf = 0.0;
    double info_per_leaf = 0.0;
    double repr_ratio = 0.0;
  };

  std::vector<BenchRecord> records;
  for (const std::uint64_t size : sizes) {
    std::vector<Trial> trials(samples);
    auto run = [&](std::uint64_t first, std::uint64_t stride) {
      for (std::uint64_t k = first; k < samples; k += stride) {
        const BinaryTree t = sample(model, size, trial_seed(seed, size, k));
        const double leaves = static_cast<double>(t.num_leaves());
        trials[k].bits_per_leaf = static_cast<double>(encode(t).size()) / leaves;
        trials[k].info_per_leaf = -log2_prob(model, t) / leaves;
        trials[k].repr_ratio = representation_ratio(t);
      }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, samples));
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            run(w, workers);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    BenchRecord r;
    r.n = size;
    r.samples = samples;
    r.seed = seed;
    double sum_sq = 0.0;
    for (const Trial& tr : trials) {
      r.mean_bits_per_leaf += tr.bits_per_leaf;
      r.mean_info_per_leaf += tr.info_per_leaf;
      r.mean_repr_ratio += tr.repr_ratio;
    }
    const double count = static_cast<double>(samples);
    r.mean_bits_per_leaf /= count;
    r.mean_info_per_leaf /= count;
    r.mean_repr_ratio /= count;
    r.redundancy = r.mean_bits_per_leaf - r.mean_info_per_leaf;
    for (const Trial& tr : trials) {
      const double dev = (tr.bits_per_leaf - tr.info_per_leaf) - r.redundancy;
      sum_sq += dev * dev;
    }
    if (samples > 1) r.redundancy_stderr = std::sqrt(sum_sq / (count - 1.0) / count);
    records.push_back(r);
  }
  return records;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << kBenchCsvHeader << '\n';
  for (const BenchRecord& r : records) {
    out << r.n << ',' << r.samples << ',' << format12(r.mean_bits_per_leaf) << ','
        << format12(r.mean_info_per_leaf) << ',' << format12(r.redundancy) << ','
        << format12(r.mean_repr_ratio) << ',' << r.seed << '\n';
  }
}

}  // namespace bintree
