#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace bintree {

inline constexpr std::size_t kDefaultEnumerationCap = 12;

enum class Step : std::uint8_t { kLeft, kRight };

// Address of a vertex as the left/right steps taken from the root.
struct VertexRef {
  std::vector<Step> path;

  friend bool operator==(const VertexRef&, const VertexRef&) = default;
};

// Immutable full binary tree.
//
// Vertices are stored in preorder: node 0 is the root, the left child of an
// internal node i is i + 1 and its right child is i + 1 + extent(i + 1). The
// preorder shape (1 = internal, 0 = leaf) determines a full binary tree
// uniquely, so structural equality is equality of shapes.
class BinaryTree {
 public:
  using Node = std::size_t;

  BinaryTree();  // the single leaf

  static BinaryTree leaf() { return BinaryTree(); }
  static BinaryTree join(const BinaryTree& left, const BinaryTree& right);

  // Throws Error(kSyntax) if `shape` is not a complete preorder shape.
  static BinaryTree from_preorder(std::vector<std::uint8_t> shape);

  bool is_leaf() const noexcept { return shape_.size() == 1; }
  std::size_t num_vertices() const noexcept { return shape_.size(); }
  std::size_t num_leaves() const noexcept { return (shape_.size() + 1) / 2; }

  bool is_internal(Node node) const { return shape_[node] != 0; }
  Node left_child(Node node) const { return node + 1; }
  Node right_child(Node node) const { return node + 1 + extent_[node + 1]; }
  // Vertex count of the final subtree rooted at `node`.
  std::size_t extent(Node node) const { return extent_[node]; }
  std::size_t leaves_below(Node node) const { return (extent_[node] + 1) / 2; }

  std::span<const std::uint8_t> preorder() const noexcept { return shape_; }

  BinaryTree subtree(Node node) const;
  BinaryTree left() const;
  BinaryTree right() const;

  friend bool operator==(const BinaryTree& a, const BinaryTree& b) {
    return a.shape_ == b.shape_;
  }

 private:
  std::vector<std::uint8_t> shape_;
  std::vector<std::uint32_t> extent_;
};

// Text format: tree := "L" | "(" tree tree ")", whitespace ignored.
BinaryTree parse_tree(std::string_view text);
std::string serialize_tree(const BinaryTree& t);

std::size_t num_leaves(const BinaryTree& t);
std::size_t depth(const BinaryTree& t);

BinaryTree subtree_at(const BinaryTree& t, const VertexRef& v);
BinaryTree::Node node_at(const BinaryTree& t, const VertexRef& v);

// All trees with n leaves: left leaf count ascending, then left subtree in
// recursive order, then right subtree in recursive order.
std::vector<BinaryTree> enumerate_trees(std::size_t n,
                                        std::size_t cap = kDefaultEnumerationCap);

mpz_class catalan(std::uint64_t n);

std::vector<VertexRef> breadth_first_vertices(const BinaryTree& t);
std::vector<BinaryTree::Node> breadth_first_nodes(const BinaryTree& t);

// Per-node depth d(t(v)), indexed by preorder node.
std::vector<std::uint32_t> subtree_depths(const BinaryTree& t);

// Tree files hold one serialized tree per line; blank lines are skipped.
std::vector<BinaryTree> read_tree_lines(std::istream& in);
void write_tree_lines(std::ostream& out, std::span<const BinaryTree> trees);

}  // namespace bintree
