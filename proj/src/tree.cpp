#include "bintree/tree.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <utility>

#include "bintree/error.hpp"

namespace bintree {

BinaryTree::BinaryTree() : shape_{0}, extent_{1} {}

BinaryTree BinaryTree::from_preorder(std::vector<std::uint8_t> shape) {
  if (shape.empty()) fail(ErrorCode::kSyntax, "empty preorder shape");
  if (shape.size() >= std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorCode::kSizeLimit, "tree exceeds 2^32 vertices");
  }
  // A preorder shape is complete iff the count of open slots first drops to
  // zero at the last symbol.
  std::size_t open = 1;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (open == 0) fail(ErrorCode::kSyntax, "trailing vertices after complete tree");
    if (shape[i] != 0) {
      shape[i] = 1;
      ++open;
    } else {
      --open;
    }
  }
  if (open != 0) fail(ErrorCode::kSyntax, "incomplete preorder shape");

  BinaryTree t;
  t.shape_ = std::move(shape);
  t.extent_.assign(t.shape_.size(), 1);
  for (std::size_t i = t.shape_.size(); i-- > 0;) {
    if (t.shape_[i] != 0) {
      const std::uint32_t left = t.extent_[i + 1];
      t.extent_[i] = 1 + left + t.extent_[i + 1 + left];
    }
  }
  return t;
}

BinaryTree BinaryTree::join(const BinaryTree& left, const BinaryTree& right) {
  std::vector<std::uint8_t> shape;
  shape.reserve(1 + left.shape_.size() + right.shape_.size());
  shape.push_back(1);
  shape.insert(shape.end(), left.shape_.begin(), left.shape_.end());
  shape.insert(shape.end(), right.shape_.begin(), right.shape_.end());
  return from_preorder(std::move(shape));
}

BinaryTree BinaryTree::subtree(Node node) const {
  if (node >= shape_.size()) fail(ErrorCode::kBadPath, "node index out of range");
  if (node == 0) return *this;
  BinaryTree t;
  t.shape_.assign(shape_.begin() + static_cast<std::ptrdiff_t>(node),
                  shape_.begin() + static_cast<std::ptrdiff_t>(node + extent_[node]));
  t.extent_.assign(extent_.begin() + static_cast<std::ptrdiff_t>(node),
                   extent_.begin() + static_cast<std::ptrdiff_t>(node + extent_[node]));
  return t;
}

BinaryTree BinaryTree::left() const {
  if (is_leaf()) fail(ErrorCode::kBadPath, "a leaf has no left child");
  return subtree(left_child(0));
}

BinaryTree BinaryTree::right() const {
  if (is_leaf()) fail(ErrorCode::kBadPath, "a leaf has no right child");
  return subtree(right_child(0));
}

BinaryTree parse_tree(std::string_view text) {
  std::vector<std::uint8_t> shape;
  shape.reserve(text.size());
  // For each open '(' the number of child trees completed so far.
  std::vector<int> children;
  bool root_done = false;

  auto complete_subtree = [&](std::size_t pos) {
    if (children.empty()) {
      if (root_done) {
        fail(ErrorCode::kSyntax, "trailing input at offset " + std::to_string(pos));
      }
      root_done = true;
    } else if (++children.back() > 2) {
      fail(ErrorCode::kSyntax,
           "more than two children at offset " + std::to_string(pos));
    }
  };

  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (root_done) {
      fail(ErrorCode::kSyntax, "trailing input at offset " + std::to_string(pos));
    }
    switch (c) {
      case 'L':
        shape.push_back(0);
        complete_subtree(pos);
        break;
      case '(':
        if (!children.empty() && children.back() >= 2) {
          fail(ErrorCode::kSyntax,
               "more than two children at offset " + std::to_string(pos));
        }
        shape.push_back(1);
        children.push_back(0);
        break;
      case ')':
        if (children.empty()) {
          fail(ErrorCode::kSyntax, "unbalanced ')' at offset " + std::to_string(pos));
        }
        if (children.back() != 2) {
          fail(ErrorCode::kSyntax,
               "internal vertex needs two children at offset " + std::to_string(pos));
        }
        children.pop_back();
        complete_subtree(pos);
        break;
      default:
        fail(ErrorCode::kSyntax, std::string("unexpected character '") + c +
                                     "' at offset " + std::to_string(pos));
    }
  }
  if (!root_done) {
    fail(ErrorCode::kSyntax, children.empty() ? "empty tree text" : "unbalanced '('");
  }
  return BinaryTree::from_preorder(std::move(shape));
}

std::string serialize_tree(const BinaryTree& t) {
  std::string out;
  out.reserve(2 * t.num_vertices());
  // End offsets of the internal vertices whose ')' is still pending.
  std::vector<std::size_t> ends;
  for (std::size_t i = 0; i < t.num_vertices(); ++i) {
    if (t.is_internal(i)) {
      out.push_back('(');
      ends.push_back(i + t.extent(i));
    } else {
      out.push_back('L');
    }
    while (!ends.empty() && ends.back() == i + 1) {
      out.push_back(')');
      ends.pop_back();
    }
  }
  return out;
}

std::size_t num_leaves(const BinaryTree& t) { return t.num_leaves(); }

std::vector<std::uint32_t> subtree_depths(const BinaryTree& t) {
  std::vector<std::uint32_t> d(t.num_vertices(), 0);
  for (std::size_t i = t.num_vertices(); i-- > 0;) {
    if (t.is_internal(i)) {
      d[i] = 1 + std::max(d[t.left_child(i)], d[t.right_child(i)]);
    }
  }
  return d;
}

std::size_t depth(const BinaryTree& t) { return subtree_depths(t)[0]; }

BinaryTree::Node node_at(const BinaryTree& t, const VertexRef& v) {
  BinaryTree::Node node = 0;
  for (std::size_t k = 0; k < v.path.size(); ++k) {
    if (!t.is_internal(node)) {
      fail(ErrorCode::kBadPath, "path step " + std::to_string(k) + " descends below a leaf");
    }
    node = v.path[k] == Step::kLeft ? t.left_child(node) : t.right_child(node);
  }
  return node;
}

BinaryTree subtree_at(const BinaryTree& t, const VertexRef& v) {
  return t.subtree(node_at(t, v));
}

std::vector<BinaryTree> enumerate_trees(std::size_t n, std::size_t cap) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "trees have at least one leaf");
  if (n > cap) {
    fail(ErrorCode::kCapExceeded, "n=" + std::to_string(n) +
                                      " exceeds enumeration cap " + std::to_string(cap));
  }
  std::vector<std::vector<std::vector<std::uint8_t>>> by_size(n + 1);
  by_size[1].push_back({0});
  for (std::size_t k = 2; k <= n; ++k) {
    for (std::size_t i = 1; i < k; ++i) {
      for (const auto& l : by_size[i]) {
        for (const auto& r : by_size[k - i]) {
          std::vector<std::uint8_t> shape;
          shape.reserve(1 + l.size() + r.size());
          shape.push_back(1);
          shape.insert(shape.end(), l.begin(), l.end());
          shape.insert(shape.end(), r.begin(), r.end());
          by_size[k].push_back(std::move(shape));
        }
      }
    }
  }
  std::vector<BinaryTree> out;
  out.reserve(by_size[n].size());
  for (auto& shape : by_size[n]) out.push_back(BinaryTree::from_preorder(std::move(shape)));
  return out;
}

mpz_class catalan(std::uint64_t n) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "catalan(n) needs n >= 1");
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), 2 * (n - 1), n - 1);
  return c / n;
}

std::vector<BinaryTree::Node> breadth_first_nodes(const BinaryTree& t) {
  std::vector<BinaryTree::Node> order;
  order.reserve(t.num_vertices());
  order.push_back(0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const auto node = order[head];
    if (t.is_internal(node)) {
      order.push_back(t.left_child(node));
      order.push_back(t.right_child(node));
    }
  }
  return order;
}

std::vector<VertexRef> breadth_first_vertices(const BinaryTree& t) {
  std::vector<VertexRef> refs;
  refs.reserve(t.num_vertices());
  std::deque<std::pair<BinaryTree::Node, std::size_t>> queue{{0, 0}};
  refs.push_back({});
  while (!queue.empty()) {
    auto [node, ref] = queue.front();
    queue.pop_front();
    if (!t.is_internal(node)) continue;
    for (const Step s : {Step::kLeft, Step::kRight}) {
      VertexRef child = refs[ref];
      child.path.push_back(s);
      refs.push_back(std::move(child));
      queue.emplace_back(s == Step::kLeft ? t.left_child(node) : t.right_child(node),
                         refs.size() - 1);
    }
  }
  return refs;
}

std::vector<BinaryTree> read_tree_lines(std::istream& in) {
  std::vector<BinaryTree> trees;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c) != 0; })) {
      continue;
    }
    try {
      trees.push_back(parse_tree(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return trees;
}

void write_tree_lines(std::ostream& out, std::span<const BinaryTree> trees) {
  for (const auto& t : trees) out << serialize_tree(t) << '\n';
}

}  // namespace bintree
