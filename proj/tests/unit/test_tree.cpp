#include <set>
#include <sstream>

#include "bintree/error.hpp"
#include "bintree/tree.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bintree;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

BinaryTree complete_tree(std::size_t height) {
  BinaryTree t = BinaryTree::leaf();
  for (std::size_t k = 0; k < height; ++k) t = BinaryTree::join(t, t);
  return t;
}

}  // namespace

TEST_CASE("parse and serialize the small cases") {
  CHECK(parse_tree("L").is_leaf());
  const BinaryTree two = parse_tree("(LL)");
  CHECK(two == BinaryTree::join(BinaryTree::leaf(), BinaryTree::leaf()));
  CHECK(serialize_tree(BinaryTree::leaf()) == "L");
  CHECK(serialize_tree(parse_tree(" ( L\t(L L) )\n")) == "(L(LL))");
  CHECK(serialize_tree(parse_tree(oracle::kFourRuleTree)) == oracle::kFourRuleTree);
  CHECK(num_leaves(parse_tree(oracle::kFourRuleTree)) == 8);
}

TEST_CASE("parse rejects malformed text") {
  for (const char* bad : {"", "(", "(L", "(LL", "LL", "(LL))", "(L)", "(LLL)", "()", "x", "(LL)x",
                          "(L x L)"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { parse_tree(bad); }) == ErrorCode::kSyntax);
  }
}

TEST_CASE("leaf count and depth") {
  CHECK(num_leaves(BinaryTree::leaf()) == 1);
  CHECK(num_leaves(parse_tree("(LL)")) == 2);
  CHECK(num_leaves(parse_tree(oracle::kSevenRuleTree)) == 16);
  CHECK(depth(BinaryTree::leaf()) == 0);
  CHECK(depth(parse_tree("(LL)")) == 1);
  CHECK(depth(complete_tree(3)) == 3);
  CHECK(num_leaves(complete_tree(3)) == 8);
}

TEST_CASE("subtree_at walks paths") {
  const BinaryTree t = parse_tree(oracle::kFourRuleTree);
  CHECK(subtree_at(t, {}) == t);
  CHECK(serialize_tree(subtree_at(parse_tree("(L(LL))"), {{Step::kRight}})) == "(LL)");
  CHECK(serialize_tree(subtree_at(t, {{Step::kLeft, Step::kLeft}})) == "(L(LL))");
  CHECK(subtree_at(t, {{Step::kRight, Step::kLeft}}).is_leaf());
  CHECK(code_of([&] { subtree_at(t, {{Step::kRight, Step::kLeft, Step::kLeft}}); }) ==
        ErrorCode::kBadPath);
  CHECK(code_of([] { subtree_at(BinaryTree::leaf(), {{Step::kLeft}}); }) == ErrorCode::kBadPath);
}

TEST_CASE("enumeration counts and order") {
  CHECK(enumerate_trees(2).size() == 1);
  CHECK(enumerate_trees(4).size() == 5);
  CHECK(enumerate_trees(8).size() == 429);
  for (std::size_t n = 2; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(mpz_class(static_cast<unsigned long>(enumerate_trees(n).size())) == catalan(n));
  }
  for (std::size_t n = 1; n <= 9; ++n) {
    const auto ours = enumerate_trees(n);
    const auto expected = oracle::trees_with_leaves(n);
    REQUIRE(ours.size() == expected.size());
    for (std::size_t k = 0; k < ours.size(); ++k) CHECK(serialize_tree(ours[k]) == expected[k]);
  }
  CHECK(code_of([] { enumerate_trees(13); }) == ErrorCode::kCapExceeded);
  CHECK(enumerate_trees(13, 13).size() == 208012);
}

TEST_CASE("catalan numbers") {
  CHECK(catalan(1) == 1);
  CHECK(catalan(2) == 1);
  CHECK(catalan(4) == 5);
  CHECK(catalan(5) == 14);
  CHECK(catalan(16) == 9694845);
  CHECK(catalan(100).get_str() == "227508830794229349661819540395688853956041682601541047340");
}

TEST_CASE("every enumerated tree survives a text roundtrip and has n-1 internal vertices") {
  for (std::size_t n = 2; n <= 10; ++n) {
    for (const auto& t : enumerate_trees(n)) {
      const std::string text = serialize_tree(t);
      REQUIRE(parse_tree(text) == t);
      std::size_t internal = 0;
      for (const auto v : t.preorder()) internal += v;
      REQUIRE(internal == n - 1);
      REQUIRE(depth(t) == oracle::depth(text));
    }
  }
}

TEST_CASE("breadth-first vertex order") {
  CHECK(breadth_first_vertices(BinaryTree::leaf()) == std::vector<VertexRef>{{}});
  using S = Step;
  const std::vector<VertexRef> expected{
      {}, {{S::kLeft}}, {{S::kRight}}, {{S::kLeft, S::kLeft}}, {{S::kLeft, S::kRight}}};
  CHECK(breadth_first_vertices(parse_tree("((LL)L)")) == expected);
  for (std::size_t n = 2; n <= 7; ++n) {
    for (const auto& t : enumerate_trees(n)) {
      const auto refs = breadth_first_vertices(t);
      REQUIRE(refs.size() == 2 * n - 1);
      std::set<BinaryTree::Node> nodes;
      std::size_t prev_len = 0;
      for (const auto& r : refs) {
        REQUIRE(r.path.size() >= prev_len);
        prev_len = r.path.size();
        nodes.insert(node_at(t, r));
      }
      REQUIRE(nodes.size() == refs.size());
    }
  }
}

TEST_CASE("deep one-sided trees do not recurse") {
  std::vector<std::uint8_t> shape;
  const std::size_t n = 1'000'000;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    shape.push_back(1);
    shape.push_back(0);
  }
  shape.push_back(0);
  const BinaryTree t = BinaryTree::from_preorder(shape);
  CHECK(t.num_leaves() == n);
  CHECK(depth(t) == n - 1);
  const std::string text = serialize_tree(t);
  CHECK(parse_tree(text) == t);
}

TEST_CASE("tree files skip blank lines and report the failing line") {
  std::istringstream in("(LL)\n\n  \nL\n((LL)L)\n");
  const auto trees = read_tree_lines(in);
  REQUIRE(trees.size() == 3);
  CHECK(serialize_tree(trees[2]) == "((LL)L)");
  std::ostringstream out;
  write_tree_lines(out, trees);
  CHECK(out.str() == "(LL)\nL\n((LL)L)\n");

  std::istringstream bad("(LL)\n(L\n");
  try {
    read_tree_lines(bad);
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSyntax);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}
