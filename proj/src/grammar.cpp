#include "bintree/grammar.hpp"

#include <unordered_map>
#include <utility>

#include "bintree/error.hpp"

namespace bintree {

namespace {

constexpr std::uint32_t kUnlabeled = std::numeric_limits<std::uint32_t>::max();

}  // namespace

std::string to_string(Symbol s) {
  return s.is_terminal() ? std::string("T") : std::to_string(s.id());
}

std::string to_string(std::span<const Symbol> seq) {
  std::string out = "(";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i != 0) out += ',';
    out += to_string(seq[i]);
  }
  out += ')';
  return out;
}

SubtreeClasses subtree_classes(const BinaryTree& t) {
  SubtreeClasses out;
  out.class_of.assign(t.num_vertices(), 0);
  std::unordered_map<std::uint64_t, std::uint32_t> interned;
  interned.reserve(t.num_leaves());
  std::uint32_t next = 1;
  // Children follow their parent in preorder, so a reverse scan sees both
  // children before the parent.
  for (std::size_t i = t.num_vertices(); i-- > 0;) {
    if (!t.is_internal(i)) continue;
    const std::uint64_t key =
        (std::uint64_t{out.class_of[t.left_child(i)]} << 32) | out.class_of[t.right_child(i)];
    auto [it, inserted] = interned.try_emplace(key, next);
    if (inserted) ++next;
    out.class_of[i] = it->second;
  }
  out.count = next;
  return out;
}

Grammar build_grammar(const BinaryTree& t) {
  if (t.is_leaf()) fail(ErrorCode::kTrivialTree, "cannot build a grammar for a single leaf");
  const SubtreeClasses classes = subtree_classes(t);

  std::vector<std::uint32_t> label(classes.count, kUnlabeled);
  std::vector<BinaryTree::Node> representative(classes.count - 1);
  std::uint32_t next = 0;
  for (const auto node : breadth_first_nodes(t)) {
    if (!t.is_internal(node)) continue;
    const auto c = classes.class_of[node];
    if (label[c] == kUnlabeled) {
      label[c] = next;
      representative[next] = node;
      ++next;
    }
  }

  auto symbol_of = [&](BinaryTree::Node node) {
    const auto c = classes.class_of[node];
    return c == 0 ? Symbol::terminal() : Symbol::nonterminal(label[c]);
  };

  Grammar g;
  g.n_vars = classes.count;
  g.rules.reserve(classes.count - 1);
  for (std::uint32_t i = 0; i < next; ++i) {
    const auto node = representative[i];
    g.rules.push_back({symbol_of(t.left_child(node)), symbol_of(t.right_child(node))});
  }
  return g;
}

void validate_grammar(const Grammar& g) {
  if (g.n_vars < 2) fail(ErrorCode::kMalformedGrammar, "a grammar has at least two variables");
  if (g.rules.size() != g.n_vars - 1) {
    fail(ErrorCode::kMalformedGrammar,
         "expected " + std::to_string(g.n_vars - 1) + " rules, got " +
             std::to_string(g.rules.size()));
  }
  const std::size_t nonterminals = g.rules.size();
  std::vector<bool> referenced(nonterminals, false);
  for (std::size_t i = 0; i < nonterminals; ++i) {
    for (const Symbol s : {g.rules[i].left, g.rules[i].right}) {
      if (s.is_terminal()) continue;
      if (s.id() >= nonterminals) {
        fail(ErrorCode::kMalformedGrammar,
             "rule " + std::to_string(i) + " references undefined nonterminal " + to_string(s));
      }
      referenced[s.id()] = true;
    }
  }
  for (std::size_t i = 1; i < nonterminals; ++i) {
    if (!referenced[i]) {
      fail(ErrorCode::kMalformedGrammar, "nonterminal " + std::to_string(i) + " is never used");
    }
  }

  // Iterative three-colour DFS over the rule graph.
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<std::uint8_t> colour(nonterminals, kWhite);
  std::vector<std::pair<std::uint32_t, int>> stack;
  for (std::uint32_t root = 0; root < nonterminals; ++root) {
    if (colour[root] != kWhite) continue;
    stack.emplace_back(root, 0);
    colour[root] = kGrey;
    while (!stack.empty()) {
      auto& [id, next_child] = stack.back();
      if (next_child == 2) {
        colour[id] = kBlack;
        stack.pop_back();
        continue;
      }
      const Symbol s = next_child == 0 ? g.rules[id].left : g.rules[id].right;
      ++next_child;
      if (s.is_terminal()) continue;
      if (colour[s.id()] == kGrey) {
        fail(ErrorCode::kCyclicGrammar,
             "nonterminal " + std::to_string(s.id()) + " derives itself");
      }
      if (colour[s.id()] == kWhite) {
        colour[s.id()] = kGrey;
        stack.emplace_back(s.id(), 0);
      }
    }
  }
}

BinaryTree expand_grammar(const Grammar& g, std::size_t max_vertices) {
  validate_grammar(g);
  const std::size_t nonterminals = g.rules.size();

  // Leaf counts per nonterminal, saturating at the limit so that deep
  // sharing chains cannot overflow.
  const std::size_t leaf_limit = max_vertices / 2 + 1;
  std::vector<std::size_t> leaves(nonterminals, 0);
  auto leaves_of = [&](Symbol s) { return s.is_terminal() ? std::size_t{1} : leaves[s.id()]; };
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const auto id = stack.back();
    if (leaves[id] != 0) {
      stack.pop_back();
      continue;
    }
    const Rule& r = g.rules[id];
    bool ready = true;
    for (const Symbol s : {r.left, r.right}) {
      if (!s.is_terminal() && leaves[s.id()] == 0) {
        stack.push_back(s.id());
        ready = false;
      }
    }
    if (ready) {
      leaves[id] = std::min(leaf_limit, leaves_of(r.left) + leaves_of(r.right));
      stack.pop_back();
    }
  }
  if (2 * leaves[0] - 1 > max_vertices) {
    fail(ErrorCode::kSizeLimit, "expanded tree exceeds " + std::to_string(max_vertices) +
                                    " vertices");
  }

  std::vector<std::uint8_t> shape;
  shape.reserve(2 * leaves[0] - 1);
  std::vector<Symbol> pending{Symbol::nonterminal(0)};
  while (!pending.empty()) {
    const Symbol s = pending.back();
    pending.pop_back();
    if (s.is_terminal()) {
      shape.push_back(0);
      continue;
    }
    shape.push_back(1);
    pending.push_back(g.rules[s.id()].right);
    pending.push_back(g.rules[s.id()].left);
  }
  return BinaryTree::from_preorder(std::move(shape));
}

std::size_t distinct_subtree_count(const BinaryTree& t) {
  if (t.is_leaf()) fail(ErrorCode::kTrivialTree, "N(t) is defined for trees with >= 2 leaves");
  return subtree_classes(t).count;
}

double representation_ratio(const BinaryTree& t) {
  return static_cast<double>(distinct_subtree_count(t)) / static_cast<double>(t.num_leaves());
}

SSequences s_sequences(const Grammar& g) {
  SSequences out;
  const std::size_t n = g.n_vars;
  out.s.reserve(2 * n - 2);
  for (const Rule& r : g.rules) {
    out.s.push_back(r.left);
    out.s.push_back(r.right);
  }
  out.first_mask.assign(out.s.size(), false);
  out.s1.reserve(n);
  out.s2.reserve(n - 2);
  std::vector<bool> seen(n, false);
  std::uint32_t expected = 1;
  for (std::size_t p = 0; p < out.s.size(); ++p) {
    const Symbol a = out.s[p];
    if (a.is_terminal() || seen[a.id()]) {
      out.s1.push_back(a);
      continue;
    }
    if (a.id() != expected) {
      fail(ErrorCode::kMalformedGrammar,
           "first appearance of " + to_string(a) + " precedes that of " +
               std::to_string(expected));
    }
    seen[a.id()] = true;
    out.first_mask[p] = true;
    out.s2.push_back(a);
    ++expected;
  }
  if (expected != n - 1) {
    fail(ErrorCode::kMalformedGrammar, "not every nonterminal appears in S");
  }
  return out;
}

std::vector<Symbol> merge_s(std::span<const Symbol> s1, std::span<const Symbol> s2,
                            const std::vector<bool>& first_mask) {
  if (first_mask.size() != s1.size() + s2.size()) {
    fail(ErrorCode::kLengthMismatch, "mask length differs from |S1| + |S2|");
  }
  std::vector<Symbol> s;
  s.reserve(first_mask.size());
  std::size_t i1 = 0;
  std::size_t i2 = 0;
  for (const bool flagged : first_mask) {
    if (flagged) {
      if (i2 == s2.size()) fail(ErrorCode::kLengthMismatch, "mask has more ones than |S2|");
      s.push_back(s2[i2++]);
    } else {
      if (i1 == s1.size()) fail(ErrorCode::kLengthMismatch, "mask has more zeroes than |S1|");
      s.push_back(s1[i1++]);
    }
  }
  return s;
}

Grammar grammar_from_s(std::span<const Symbol> s) {
  if (s.size() < 2 || s.size() % 2 != 0) {
    fail(ErrorCode::kMalformedGrammar, "S must have even length >= 2");
  }
  Grammar g;
  g.n_vars = s.size() / 2 + 1;
  g.rules.reserve(s.size() / 2);
  for (std::size_t p = 0; p < s.size(); p += 2) g.rules.push_back({s[p], s[p + 1]});
  return g;
}

std::string render_grammar(const Grammar& g) {
  std::string out;
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    out += std::to_string(i) + " -> (" + to_string(g.rules[i].left) + ',' +
           to_string(g.rules[i].right) + ")\n";
  }
  return out;
}

}  // namespace bintree
