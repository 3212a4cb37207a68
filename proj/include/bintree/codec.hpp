#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "bintree/bitstring.hpp"
#include "bintree/grammar.hpp"
#include "bintree/tree.hpp"

namespace bintree {

// Occurrence counts per symbol, iterated in alphabet order 1 < 2 < ... < T.
using Frequencies = std::map<Symbol, std::size_t>;

struct CodewordParts {
  BitString b1;
  BitString b2;
  BitString b3;
  BitString b4;
  std::size_t n_vars = 0;
  Frequencies freqs;  // counts in S: f_1..f_{N-2} and f_T
  mpz_class type_class_size;
  mpz_class index;
  std::size_t m_bits = 0;

  BitString codeword() const;
};

// Requires g.n_vars >= 3; the two-variable grammar has the codeword "1".
CodewordParts compute_parts(const Grammar& g);

BitString encode(const BinaryTree& t);

struct DecodedGrammar {
  Grammar grammar;
  SSequences sequences;
  std::size_t consumed = 0;
};

struct Decoded {
  BinaryTree tree;
  std::size_t consumed = 0;
};

// Reads one codeword starting at `offset`; bits after it are left alone and
// reported through `consumed`.
DecodedGrammar decode_grammar(const BitString& bits, std::size_t offset = 0);
Decoded decode(const BitString& bits, std::size_t offset = 0,
               std::size_t max_vertices = kDefaultMaxVertices);

// N! / (f_T! * prod_i (f_i - 1)!), the number of distinct arrangements of S1.
mpz_class type_class_size(const Frequencies& freqs, std::size_t n_vars);

// Bits needed to index a set of the given size: ceil(log2(size)).
std::size_t index_width(const mpz_class& size);

// 0-based lexicographic index of `seq` among the distinct permutations of its
// multiset, by prefix counting.
mpz_class rank_multiset_perm(std::span<const Symbol> seq);

// Inverse of rank_multiset_perm for the multiset `counts` of total `length`.
std::vector<Symbol> unrank_multiset_perm(const mpz_class& index, const Frequencies& counts,
                                         std::size_t length);

std::size_t codeword_length(const BinaryTree& t);

}  // namespace bintree
