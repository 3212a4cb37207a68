#include <random>

#include "bintree/error.hpp"
#include "bintree/grammar.hpp"
#include "bintree/sources.hpp"
#include "bintree/tree.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bintree;

namespace {

constexpr Symbol T = Symbol::terminal();
Symbol nt(std::uint32_t id) { return Symbol::nonterminal(id); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

const Grammar kFourRules{5, {{nt(1), nt(2)}, {nt(2), nt(3)}, {T, nt(3)}, {T, T}}};
const Grammar kSevenRules{8,
                          {{nt(1), nt(2)},
                           {nt(3), nt(4)},
                           {nt(3), T},
                           {nt(5), nt(4)},
                           {T, nt(6)},
                           {nt(6), T},
                           {T, T}}};

}  // namespace

TEST_CASE("build_grammar on reference trees") {
  CHECK(build_grammar(parse_tree("(LL)")) == Grammar{2, {{T, T}}});
  CHECK(build_grammar(parse_tree(oracle::kFourRuleTree)) == kFourRules);
  CHECK(build_grammar(parse_tree(oracle::kSevenRuleTree)) == kSevenRules);
  CHECK(code_of([] { build_grammar(BinaryTree::leaf()); }) == ErrorCode::kTrivialTree);
  CHECK(render_grammar(kFourRules) == "0 -> (1,2)\n1 -> (2,3)\n2 -> (T,3)\n3 -> (T,T)\n");
}

TEST_CASE("expand_grammar inverts build_grammar") {
  CHECK(serialize_tree(expand_grammar(Grammar{2, {{T, T}}})) == "(LL)");
  CHECK(serialize_tree(expand_grammar(kFourRules)) == oracle::kFourRuleTree);
  CHECK(serialize_tree(expand_grammar(kSevenRules)) == oracle::kSevenRuleTree);
  for (std::size_t n = 2; n <= 10; ++n) {
    for (const auto& t : enumerate_trees(n)) REQUIRE(expand_grammar(build_grammar(t)) == t);
  }
  const auto model = LeafCentricModel::uniform_split(0.1);
  std::mt19937_64 gen(11);
  for (int k = 0; k < 1000; ++k) {
    const std::uint64_t n = 2 + gen() % 3000;
    const BinaryTree t = sample_leaf_centric(model, n, gen());
    REQUIRE(expand_grammar(build_grammar(t)) == t);
  }
}

TEST_CASE("expand_grammar rejects bad grammars") {
  CHECK(code_of([] { expand_grammar(Grammar{3, {{nt(1), T}, {nt(1), T}}}); }) ==
        ErrorCode::kCyclicGrammar);
  CHECK(code_of([] { expand_grammar(Grammar{3, {{nt(0), nt(1)}, {T, T}}}); }) ==
        ErrorCode::kCyclicGrammar);
  CHECK(code_of([] { expand_grammar(Grammar{3, {{nt(2), T}, {T, T}}}); }) ==
        ErrorCode::kMalformedGrammar);
  CHECK(code_of([] { expand_grammar(Grammar{4, {{nt(1), T}, {T, T}, {T, T}}}); }) ==
        ErrorCode::kMalformedGrammar);
  CHECK(code_of([] { expand_grammar(Grammar{3, {{T, T}}}); }) == ErrorCode::kMalformedGrammar);
  // 40 doublings give 2^40 leaves.
  Grammar chain{42, {}};
  for (std::uint32_t k = 0; k < 40; ++k) chain.rules.push_back({nt(k + 1), nt(k + 1)});
  chain.rules.push_back({T, T});
  CHECK(code_of([&] { expand_grammar(chain); }) == ErrorCode::kSizeLimit);
}

TEST_CASE("distinct subtree count and representation ratio") {
  CHECK(distinct_subtree_count(parse_tree("(LL)")) == 2);
  CHECK(distinct_subtree_count(parse_tree(oracle::kSevenRuleTree)) == 8);
  BinaryTree complete = BinaryTree::leaf();
  for (std::size_t k = 1; k <= 10; ++k) {
    complete = BinaryTree::join(complete, complete);
    CHECK(distinct_subtree_count(complete) == k + 1);
  }
  CHECK(representation_ratio(complete) == doctest::Approx(11.0 / 1024.0));
  CHECK(representation_ratio(parse_tree("(LL)")) == 1.0);
  CHECK(representation_ratio(parse_tree(oracle::kSevenRuleTree)) == 0.5);
  CHECK(code_of([] { distinct_subtree_count(BinaryTree::leaf()); }) == ErrorCode::kTrivialTree);
}

TEST_CASE("grammar size matches a brute-force count of distinct subtrees") {
  for (std::size_t n = 2; n <= 9; ++n) {
    for (const auto& t : enumerate_trees(n)) {
      const std::string text = serialize_tree(t);
      REQUIRE(build_grammar(t).n_vars == oracle::distinct_subtrees(text));
      REQUIRE(build_grammar(t).n_vars <= n);
    }
  }
}

TEST_CASE("S sequences") {
  const auto seven = s_sequences(kSevenRules);
  CHECK(to_string(seven.s) == "(1,2,3,4,3,T,5,4,T,6,6,T,T,T)");
  CHECK(to_string(seven.s1) == "(3,T,4,T,6,T,T,T)");
  CHECK(to_string(seven.s2) == "(1,2,3,4,5,6)");
  const auto two = s_sequences(Grammar{2, {{T, T}}});
  CHECK(to_string(two.s) == "(T,T)");
  CHECK(to_string(two.s1) == "(T,T)");
  CHECK(two.s2.empty());
  const auto four = s_sequences(kFourRules);
  CHECK(to_string(four.s) == "(1,2,2,3,T,3,T,T)");
  CHECK(to_string(four.s1) == "(2,T,3,T,T)");
  CHECK(to_string(four.s2) == "(1,2,3)");
  CHECK(four.first_mask == std::vector<bool>{1, 1, 0, 1, 0, 0, 0, 0});
}

TEST_CASE("S sequence invariants over enumerated trees") {
  for (std::size_t n = 2; n <= 9; ++n) {
    for (const auto& t : enumerate_trees(n)) {
      const Grammar g = build_grammar(t);
      const auto seqs = s_sequences(g);
      const std::size_t N = g.n_vars;
      REQUIRE(seqs.s.size() == 2 * N - 2);
      REQUIRE(seqs.s1.size() == N);
      REQUIRE(seqs.s2.size() == N - 2);
      std::size_t f_t = 0;
      for (const Symbol a : seqs.s) f_t += a.is_terminal();
      REQUIRE(f_t >= 2);
      REQUIRE(merge_s(seqs.s1, seqs.s2, seqs.first_mask) == seqs.s);
      REQUIRE(grammar_from_s(seqs.s) == g);
      // Rules are pairwise distinct.
      for (std::size_t a = 0; a < g.rules.size(); ++a) {
        for (std::size_t b = a + 1; b < g.rules.size(); ++b) REQUIRE(!(g.rules[a] == g.rules[b]));
      }
    }
  }
}

TEST_CASE("merge_s") {
  CHECK(merge_s(std::vector<Symbol>{T, T}, {}, {false, false}) == std::vector<Symbol>{T, T});
  const std::vector<Symbol> s1{nt(3), T, nt(4), T, nt(6), T, T, T};
  const std::vector<Symbol> s2{nt(1), nt(2), nt(3), nt(4), nt(5), nt(6)};
  std::vector<bool> mask;
  for (const char c : std::string("11110010010000")) mask.push_back(c == '1');
  CHECK(to_string(merge_s(s1, s2, mask)) == "(1,2,3,4,3,T,5,4,T,6,6,T,T,T)");
  CHECK(code_of([&] { merge_s(s1, s2, std::vector<bool>(13, true)); }) ==
        ErrorCode::kLengthMismatch);
  mask[0] = false;
  CHECK(code_of([&] { merge_s(s1, s2, mask); }) == ErrorCode::kLengthMismatch);
}

TEST_CASE("s_sequences checks first-appearance order") {
  // 0 -> (2,1) puts 2 before 1.
  CHECK(code_of([] { s_sequences(Grammar{4, {{nt(2), nt(1)}, {T, T}, {nt(1), T}}}); }) ==
        ErrorCode::kMalformedGrammar);
}
