#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bintree/tree.hpp"

namespace bintree {

// A grammar variable: a nonterminal id in 0..N-2, or the terminal T.
// T compares greater than every nonterminal, which is the alphabet order
// used for enumerative coding.
class Symbol {
 public:
  static constexpr std::uint32_t kTerminalValue = std::numeric_limits<std::uint32_t>::max();

  constexpr Symbol() = default;
  static constexpr Symbol terminal() { return Symbol(kTerminalValue); }
  static constexpr Symbol nonterminal(std::uint32_t id) { return Symbol(id); }

  constexpr bool is_terminal() const { return value_ == kTerminalValue; }
  constexpr std::uint32_t id() const { return value_; }

  friend constexpr auto operator<=>(Symbol, Symbol) = default;

 private:
  constexpr explicit Symbol(std::uint32_t v) : value_(v) {}
  std::uint32_t value_ = kTerminalValue;
};

std::string to_string(Symbol s);
std::string to_string(std::span<const Symbol> seq);

struct Rule {
  Symbol left;
  Symbol right;

  friend bool operator==(const Rule&, const Rule&) = default;
};

// Deterministic grammar with start variable 0; rules[i] is the right member
// of nonterminal i. n_vars counts the terminal, so rules.size() == n_vars - 1.
struct Grammar {
  std::size_t n_vars = 0;
  std::vector<Rule> rules;

  friend bool operator==(const Grammar&, const Grammar&) = default;
};

// Final-subtree classes of a tree, computed by hash-consing (left, right)
// class pairs bottom-up. Class 0 is the leaf.
struct SubtreeClasses {
  std::vector<std::uint32_t> class_of;  // indexed by preorder node
  std::size_t count = 0;
};

SubtreeClasses subtree_classes(const BinaryTree& t);

Grammar build_grammar(const BinaryTree& t);

// Throws kMalformedGrammar on wrong rule count, dangling or unused ids, and
// kCyclicGrammar if the rule graph has a cycle.
void validate_grammar(const Grammar& g);

inline constexpr std::size_t kDefaultMaxVertices = std::size_t{1} << 31;

// Throws kSizeLimit rather than materialize more than max_vertices vertices.
BinaryTree expand_grammar(const Grammar& g, std::size_t max_vertices = kDefaultMaxVertices);

std::size_t distinct_subtree_count(const BinaryTree& t);
double representation_ratio(const BinaryTree& t);

struct SSequences {
  std::vector<Symbol> s;
  std::vector<Symbol> s1;
  std::vector<Symbol> s2;
  std::vector<bool> first_mask;
};

SSequences s_sequences(const Grammar& g);

std::vector<Symbol> merge_s(std::span<const Symbol> s1, std::span<const Symbol> s2,
                            const std::vector<bool>& first_mask);

// Splits S into consecutive pairs; no validation beyond even length.
Grammar grammar_from_s(std::span<const Symbol> s);

// One rule per line as "i -> (x,y)". Debug rendering only.
std::string render_grammar(const Grammar& g);

}  // namespace bintree
