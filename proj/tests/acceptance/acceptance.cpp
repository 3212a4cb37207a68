// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bintree/analysis.hpp"
#include "bintree/codec.hpp"
#include "bintree/error.hpp"
#include "bintree/grammar.hpp"
#include "bintree/sources.hpp"
#include "bintree/tree.hpp"
#include "oracles.hpp"

using namespace bintree;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  Outcome o;
  const auto start = Clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %2d: %s (%s; %.2fs)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), seconds_since(start));
  std::fflush(stdout);
}

std::vector<BinaryTree> small_trees() {
  std::vector<BinaryTree> all;
  for (std::size_t n = 2; n <= 10; ++n) {
    for (auto& t : enumerate_trees(n)) all.push_back(std::move(t));
  }
  return all;
}

Outcome reference_encoding() {
  const BinaryTree t = parse_tree(oracle::kSevenRuleTree);
  encode(t);  // warm-up
  double best = 1e9;
  CodewordParts parts;
  BitString cw;
  for (int rep = 0; rep < 5; ++rep) {
    const auto start = Clock::now();
    parts = compute_parts(build_grammar(t));
    cw = encode(t);
    best = std::min(best, seconds_since(start));
  }
  const bool exact = parts.b1.to_text() == "0000001" && parts.b2.to_text() == "11110010010000" &&
                     parts.b3.to_text() == "1011001001" && parts.b4.to_text() == "000001101" &&
                     cw.size() == 40 && cw == parts.codeword();
  const bool fast = best < 1e-3;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu bits, parts %s, best encode %.1f us", cw.size(),
                exact ? "match" : "differ", best * 1e6);
  return {exact && fast, buf};
}

Outcome reference_decoding() {
  const auto d = decode_grammar(BitString::from_text("00011101000010011000001"));
  const auto full = decode(BitString::from_text("00011101000010011000001"));
  const std::string tree = serialize_tree(full.tree);
  const std::string s = to_string(d.sequences.s);
  const bool ok = tree == oracle::kFourRuleTree && s == "(1,2,2,3,T,3,T,T)" &&
                  full.consumed == 23 && d.consumed == 23;
  return {ok, "tree " + tree + ", S=" + s + ", consumed=" + std::to_string(full.consumed)};
}

Outcome exhaustive_roundtrip(const std::vector<BinaryTree>& trees) {
  std::size_t bad = 0;
  std::map<std::size_t, double> kraft;
  std::vector<std::string> words;
  words.reserve(trees.size());
  for (const auto& t : trees) {
    const BitString cw = encode(t);
    const auto d = decode(cw);
    if (!(d.tree == t) || d.consumed != cw.size() || codeword_length(t) != cw.size()) ++bad;
    kraft[t.num_leaves()] += std::ldexp(1.0, -static_cast<int>(cw.size()));
    words.push_back(cw.to_text());
  }
  std::sort(words.begin(), words.end());
  // After sorting, any prefix pair also shows up as an adjacent pair.
  std::size_t prefix_pairs = 0;
  for (std::size_t k = 1; k < words.size(); ++k) {
    if (words[k].compare(0, words[k - 1].size(), words[k - 1]) == 0) ++prefix_pairs;
  }
  double worst = 0.0;
  for (const auto& [n, sum] : kraft) worst = std::max(worst, sum);
  const bool ok = bad == 0 && prefix_pairs == 0 && worst <= 1.0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu trees, %zu roundtrip failures, %zu prefix pairs, max Kraft sum %.6f",
                trees.size(), bad, prefix_pairs, worst);
  return {ok, buf};
}

Outcome length_bound(const std::vector<BinaryTree>& trees) {
  std::size_t violations = 0;
  std::size_t checked = 0;
  double tightest = -1e300;
  auto check = [&](const BinaryTree& t) {
    const double slack =
        static_cast<double>(codeword_length(t)) - theorem1_bound(t) - kBoundTolerance;
    tightest = std::max(tightest, slack);
    if (slack > 0.0) ++violations;
    ++checked;
  };
  for (const auto& t : trees) check(t);

  // 1000 sampled trees, log-uniform sizes up to 1e5 leaves, across all models.
  const std::vector<SourceModel> leaf_models{LeafCentricModel::bisection(),
                                             LeafCentricModel::uniform_split(0.25),
                                             LeafCentricModel::uniform_split(0.1),
                                             LeafCentricModel::uniform_split(0.5)};
  std::mt19937_64 gen(2024);
  std::size_t largest = 0;
  for (int k = 0; k < 1000; ++k) {
    BinaryTree t;
    if (k % 5 == 4) {
      const auto model = DepthCentricModel::gap(1 + static_cast<std::uint64_t>(k / 5) % 3);
      std::uint64_t d_max = 1;
      while (leaf_count_by_depth(model, d_max + 1) <= 100000) ++d_max;
      t = sample(model, 1 + gen() % d_max, gen());
    } else {
      const std::uint64_t n = k < 8 ? 100000
                                    : static_cast<std::uint64_t>(std::exp(
                                          std::uniform_real_distribution<>(std::log(2.0),
                                                                           std::log(1e5))(gen)));
      t = sample(leaf_models[static_cast<std::size_t>(k) % leaf_models.size()],
                 std::max<std::uint64_t>(n, 2), gen());
    }
    largest = std::max(largest, t.num_leaves());
    check(t);
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu trees (largest %zu leaves), %zu violations, max L - bound = %.3f",
                checked, largest, violations, tightest + kBoundTolerance);
  return {violations == 0, buf};
}

Outcome counting() {
  std::size_t mismatches = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    if (mpz_class(static_cast<unsigned long>(enumerate_trees(n).size())) != catalan(n)) ++mismatches;
  }
  const bool k16 = catalan(16) == 9694845;
  return {mismatches == 0 && k16, "n=1..12 mismatches " + std::to_string(mismatches) +
                                      ", catalan(16)=" + catalan(16).get_str()};
}

Outcome normalization() {
  double worst = 0.0;
  for (const auto& model : {LeafCentricModel::bisection(), LeafCentricModel::uniform_split(0.25)}) {
    for (std::size_t n = 2; n <= 8; ++n) {
      double sum = 0.0;
      for (const auto& t : enumerate_trees(n)) sum += std::exp2(log2_prob_leaf_centric(model, t));
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  for (const std::uint64_t m : {1, 2}) {
    const auto model = DepthCentricModel::gap(m);
    for (std::size_t d = 1; d <= 4; ++d) {
      double sum = 0.0;
      for (const auto& text : oracle::trees_depth_exactly(d)) {
        sum += std::exp2(log2_prob_depth_centric(model, parse_tree(text)));
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max |sum - 1| = %.3g", worst);
  return {worst <= 1e-9, buf};
}

Outcome minimality(const std::vector<BinaryTree>& trees) {
  std::size_t mismatches = 0;
  for (const auto& t : trees) {
    if (build_grammar(t).n_vars != oracle::distinct_subtrees(serialize_tree(t))) ++mismatches;
  }
  return {mismatches == 0,
          std::to_string(trees.size()) + " trees, " + std::to_string(mismatches) + " mismatches"};
}

Outcome rank_unrank() {
  auto to_symbols = [](const std::vector<int>& seq) {
    std::vector<Symbol> out;
    for (const int s : seq) {
      out.push_back(s == oracle::kT ? Symbol::terminal()
                                    : Symbol::nonterminal(static_cast<std::uint32_t>(s)));
    }
    return out;
  };
  auto counts_of = [](std::span<const Symbol> seq) {
    Frequencies f;
    for (const Symbol s : seq) ++f[s];
    return f;
  };
  std::mt19937_64 gen(8);
  std::size_t inverse_failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t len = 1 + gen() % 64;
    const std::size_t alphabet = 1 + gen() % 16;
    std::vector<int> seq(len);
    for (auto& s : seq) {
      const std::size_t pick = gen() % (alphabet + 1);
      s = pick == alphabet ? oracle::kT : static_cast<int>(pick + 1);
    }
    const auto symbols = to_symbols(seq);
    const mpz_class r = rank_multiset_perm(symbols);
    if (unrank_multiset_perm(r, counts_of(symbols), len) != symbols) ++inverse_failures;
  }

  // Every permutation of a spread of multisets of length <= 8.
  std::size_t listed = 0;
  std::size_t index_failures = 0;
  const int T = oracle::kT;
  for (const auto& ms : std::vector<std::vector<int>>{{1, T, T},
                                                      {2, 3, T, T, T},
                                                      {3, 4, 6, T, T, T, T, T},
                                                      {1, 2, 3, 4, 5, 6, 7, 8},
                                                      {1, 1, 2, 2, 3, 3, T, T},
                                                      {1, 1, 1, 1, T, T, T, T},
                                                      {1, 2, 2, 3, 3, 3, T},
                                                      {5, T}}) {
    const auto list = oracle::sorted_permutations(ms);
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto seq = to_symbols(list[k]);
      ++listed;
      if (rank_multiset_perm(seq) != static_cast<unsigned long>(k)) ++index_failures;
    }
  }
  const bool i13 = rank_multiset_perm(to_symbols({3, T, 4, T, 6, T, T, T})) == 13;
  const bool i1 = rank_multiset_perm(to_symbols({2, T, 3, T, T})) == 1;
  const bool ok = inverse_failures == 0 && index_failures == 0 && i13 && i1;
  return {ok, "10000 random inverse failures " + std::to_string(inverse_failures) + ", " +
                  std::to_string(listed) + " listed perms, index failures " +
                  std::to_string(index_failures) + ", I=13 " + (i13 ? "ok" : "wrong") + ", I=1 " +
                  (i1 ? "ok" : "wrong")};
}

Outcome optimality_trend() {
  const std::vector<std::uint64_t> sizes{100, 1000, 10000};
  const auto bis = redundancy_monte_carlo(LeafCentricModel::bisection(), sizes, 200, 7);
  const std::vector<std::uint64_t> depths{5, 10, 20};
  const auto gap = redundancy_monte_carlo(DepthCentricModel::gap(1), depths, 200, 7);
  const bool redundancy_drops = bis[2].redundancy < bis[0].redundancy;
  const bool bis_ratio = bis[0].mean_repr_ratio > bis[1].mean_repr_ratio &&
                         bis[1].mean_repr_ratio > bis[2].mean_repr_ratio;
  const bool gap_ratio = gap[0].mean_repr_ratio > gap[1].mean_repr_ratio &&
                         gap[1].mean_repr_ratio > gap[2].mean_repr_ratio;
  auto verdict = [](bool ok) { return ok ? "ok" : "NOT MET"; };
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "bisection redundancy at 1e2/1e3/1e4 %.4f/%.4f/%.4f [%s]; "
                "bisection mean r %.4f/%.4f/%.4f [%s]; gap(1) mean r at depth 5/10/20 "
                "%.4f/%.4f/%.4f [%s]",
                bis[0].redundancy, bis[1].redundancy, bis[2].redundancy, verdict(redundancy_drops),
                bis[0].mean_repr_ratio, bis[1].mean_repr_ratio, bis[2].mean_repr_ratio,
                verdict(bis_ratio), gap[0].mean_repr_ratio, gap[1].mean_repr_ratio,
                gap[2].mean_repr_ratio, verdict(gap_ratio));
  return {redundancy_drops && bis_ratio && gap_ratio, buf};
}

Outcome size_law() {
  std::size_t violations = 0;
  std::size_t sampled = 0;
  for (const std::uint64_t m : {1, 2, 3}) {
    const auto model = DepthCentricModel::gap(m);
    for (std::uint64_t d = 1; d <= 20; ++d) {
      const mpz_class expected = leaf_count_by_depth(model, d);
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const BinaryTree t = sample_depth_centric(model, d, seed);
        ++sampled;
        if (mpz_class(static_cast<unsigned long>(t.num_leaves())) != expected || depth(t) != d) {
          ++violations;
        }
      }
    }
  }
  return {violations == 0,
          std::to_string(sampled) + " samples, " + std::to_string(violations) + " violations"};
}

Outcome redundancy_inequality() {
  std::size_t violations = 0;
  std::size_t checked = 0;
  std::string ks;
  for (const auto& model : {LeafCentricModel::bisection(), LeafCentricModel::uniform_split(0.25)}) {
    const auto probe = DominationWitness::for_leaf_centric(model, 1);
    const std::uint64_t k = minimal_domination_exponent(
        [&](const BinaryTree& t) { return probe.log2_lambda(t); }, 8);
    const auto witness = DominationWitness::for_leaf_centric(model, k);
    const auto domination = verify_domination(witness, 8);
    if (!domination.ok) ++violations;
    ks += (ks.empty() ? "" : ", ") + model.spec() + " K=" + std::to_string(k);
    for (std::size_t n = 2; n <= 8; ++n) {
      for (const auto& t : enumerate_trees(n)) {
        ++checked;
        if (!theorem2a_check(t, witness)) ++violations;
      }
    }
  }
  return {violations == 0, ks + "; " + std::to_string(checked) + " checks, " +
                               std::to_string(violations) + " violations"};
}

}  // namespace

int main() {
  const auto trees = small_trees();
  report(1, "16-leaf reference codeword is bit-exact", reference_encoding);
  report(2, "23-bit reference codeword decodes bit-exact", reference_decoding);
  report(3, "exhaustive roundtrip, prefix-freeness and Kraft for 2-10 leaves", [&] {
    const auto start = Clock::now();
    Outcome o = exhaustive_roundtrip(trees);
    const double secs = seconds_since(start);
    if (secs >= 10.0) o.pass = false;
    return o;
  });
  report(4, "codeword length never exceeds 5(N-1) + N H(p)", [&] { return length_bound(trees); });
  report(5, "enumeration matches Catalan numbers", counting);
  report(6, "source probabilities normalize", normalization);
  report(7, "grammar size equals brute-force distinct subtree count",
         [&] { return minimality(trees); });
  report(8, "rank and unrank of multiset permutations", rank_unrank);
  report(9, "redundancy and representation ratio shrink with size", [] {
    const auto start = Clock::now();
    Outcome o = optimality_trend();
    if (seconds_since(start) >= 60.0) o.pass = false;
    return o;
  });
  report(10, "depth-gap samples obey the leaf-count recurrence", size_law);
  report(11, "per-tree redundancy inequality under the Catalan-floor witness",
         redundancy_inequality);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
