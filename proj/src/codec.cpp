#include "bintree/codec.hpp"

#include <algorithm>
#include <string>

#include "bintree/error.hpp"

namespace bintree {

namespace {

// Prefix sums over alphabet positions.
class Fenwick {
 public:
  explicit Fenwick(std::span<const std::size_t> counts) : tree_(counts.size() + 1, 0) {
    for (std::size_t i = 0; i < counts.size(); ++i) add(i, static_cast<long long>(counts[i]));
  }

  void add(std::size_t pos, long long delta) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  // Sum of counts at positions < pos.
  std::size_t prefix(std::size_t pos) const {
    long long s = 0;
    for (std::size_t i = pos; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return static_cast<std::size_t>(s);
  }

  // Position p with prefix(p) <= q < prefix(p + 1).
  std::size_t find(std::size_t q) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    long long remaining = static_cast<long long>(q);
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= remaining) {
        pos += step;
        remaining -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<long long> tree_;
};

mpz_class factorial(std::size_t n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

mpz_class multinomial(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (const auto c : counts) total += c;
  mpz_class result = factorial(total);
  for (const auto c : counts) {
    if (c > 1) mpz_divexact(result.get_mpz_t(), result.get_mpz_t(), factorial(c).get_mpz_t());
  }
  return result;
}

void mul_div_exact(mpz_class& value, std::size_t mul, std::size_t div) {
  mpz_mul_ui(value.get_mpz_t(), value.get_mpz_t(), mul);
  mpz_divexact_ui(value.get_mpz_t(), value.get_mpz_t(), div);
}

Frequencies s_frequencies(const Grammar& g) {
  Frequencies f;
  for (const Rule& r : g.rules) {
    ++f[r.left];
    ++f[r.right];
  }
  return f;
}

BitString bits_of(const mpz_class& value, std::size_t width) {
  BitString b;
  if (width == 0) return b;
  const std::string digits = value.get_str(2);
  for (std::size_t k = digits.size(); k < width; ++k) b.push_back(false);
  b.append(BitString::from_text(digits));
  return b;
}

}  // namespace

BitString CodewordParts::codeword() const {
  BitString out = b1;
  out.append(b2);
  out.append(b3);
  out.append(b4);
  return out;
}

std::size_t index_width(const mpz_class& size) {
  if (size <= 1) return 0;
  const mpz_class top = size - 1;
  return mpz_sizeinbase(top.get_mpz_t(), 2);
}

mpz_class type_class_size(const Frequencies& freqs, std::size_t n_vars) {
  if (n_vars < 2) fail(ErrorCode::kInconsistentFrequencies, "N must be at least 2");
  std::size_t total = 0;
  std::size_t f_t = 0;
  std::vector<std::size_t> s1_counts;
  std::uint32_t expected = 1;
  for (const auto& [symbol, count] : freqs) {
    total += count;
    if (symbol.is_terminal()) {
      f_t = count;
      continue;
    }
    if (symbol.id() != expected) {
      fail(ErrorCode::kInconsistentFrequencies,
           "frequency table must cover nonterminals 1.." + std::to_string(n_vars - 2) +
               " exactly, got " + to_string(symbol));
    }
    if (count < 1) {
      fail(ErrorCode::kInconsistentFrequencies,
           "nonterminal " + to_string(symbol) + " must occur at least once");
    }
    s1_counts.push_back(count - 1);
    ++expected;
  }
  if (expected != n_vars - 1) {
    fail(ErrorCode::kInconsistentFrequencies, "missing nonterminal frequencies");
  }
  if (f_t < 2) fail(ErrorCode::kInconsistentFrequencies, "f_T must be at least 2");
  if (total != 2 * n_vars - 2) {
    fail(ErrorCode::kInconsistentFrequencies,
         "frequencies sum to " + std::to_string(total) + ", expected " +
             std::to_string(2 * n_vars - 2));
  }
  s1_counts.push_back(f_t);
  return multinomial(s1_counts);
}

mpz_class rank_multiset_perm(std::span<const Symbol> seq) {
  if (seq.empty()) return 0;
  std::vector<Symbol> alphabet(seq.begin(), seq.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

  std::vector<std::size_t> position(seq.size());
  std::vector<std::size_t> counts(alphabet.size(), 0);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    position[k] = static_cast<std::size_t>(
        std::lower_bound(alphabet.begin(), alphabet.end(), seq[k]) - alphabet.begin());
    ++counts[position[k]];
  }

  Fenwick remaining(counts);
  // Permutations of the not-yet-consumed suffix multiset.
  mpz_class perms = multinomial(counts);
  mpz_class index = 0;
  mpz_class term;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const std::size_t m = seq.size() - k;
    const std::size_t p = position[k];
    const std::size_t smaller = remaining.prefix(p);
    if (smaller != 0) {
      mpz_mul_ui(term.get_mpz_t(), perms.get_mpz_t(), smaller);
      mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), m);
      index += term;
    }
    mul_div_exact(perms, counts[p], m);
    --counts[p];
    remaining.add(p, -1);
  }
  return index;
}

std::vector<Symbol> unrank_multiset_perm(const mpz_class& index, const Frequencies& counts,
                                         std::size_t length) {
  std::vector<Symbol> alphabet;
  std::vector<std::size_t> left;
  std::size_t total = 0;
  for (const auto& [symbol, count] : counts) {
    if (count == 0) continue;
    alphabet.push_back(symbol);
    left.push_back(count);
    total += count;
  }
  if (total != length) {
    fail(ErrorCode::kLengthMismatch, "multiset size " + std::to_string(total) +
                                         " differs from length " + std::to_string(length));
  }
  mpz_class perms = multinomial(left);
  if (index < 0 || index >= perms) {
    fail(ErrorCode::kIndexOutOfRange, "index " + index.get_str() +
                                          " outside type class of size " + perms.get_str());
  }

  Fenwick remaining(left);
  mpz_class rest = index;
  mpz_class scaled;
  std::vector<Symbol> seq;
  seq.reserve(length);
  for (std::size_t k = 0; k < length; ++k) {
    const std::size_t m = length - k;
    // Symbol whose completions contain `rest`: the one at cumulative rank
    // floor(rest * m / perms) within the remaining multiset.
    mpz_mul_ui(scaled.get_mpz_t(), rest.get_mpz_t(), m);
    mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), perms.get_mpz_t());
    const std::size_t q = scaled.get_ui();
    const std::size_t p = remaining.find(q);
    const std::size_t smaller = remaining.prefix(p);
    if (smaller != 0) {
      mpz_mul_ui(scaled.get_mpz_t(), perms.get_mpz_t(), smaller);
      mpz_divexact_ui(scaled.get_mpz_t(), scaled.get_mpz_t(), m);
      rest -= scaled;
    }
    mul_div_exact(perms, left[p], m);
    --left[p];
    remaining.add(p, -1);
    seq.push_back(alphabet[p]);
  }
  return seq;
}

CodewordParts compute_parts(const Grammar& g) {
  if (g.n_vars < 3) {
    fail(ErrorCode::kInvalidArgument, "compute_parts needs N >= 3; N = 2 encodes as \"1\"");
  }
  const std::size_t n = g.n_vars;
  const SSequences seqs = s_sequences(g);

  CodewordParts parts;
  parts.n_vars = n;
  parts.freqs = s_frequencies(g);

  parts.b1.append_uint(0, n - 2);
  parts.b1.push_back(true);

  for (const bool flagged : seqs.first_mask) parts.b2.push_back(flagged);

  bool bit = true;
  for (const auto& [symbol, count] : parts.freqs) {
    if (symbol.is_terminal()) break;
    for (std::size_t k = 0; k < count; ++k) parts.b3.push_back(bit);
    bit = !bit;
  }
  parts.b3.push_back(bit);

  parts.type_class_size = type_class_size(parts.freqs, n);
  parts.m_bits = index_width(parts.type_class_size);
  parts.index = rank_multiset_perm(seqs.s1);
  parts.b4 = bits_of(parts.index, parts.m_bits);
  return parts;
}

BitString encode(const BinaryTree& t) {
  const Grammar g = build_grammar(t);
  if (g.n_vars == 2) return BitString::from_text("1");
  return compute_parts(g).codeword();
}

DecodedGrammar decode_grammar(const BitString& bits, std::size_t offset) {
  std::size_t pos = offset;
  auto need = [&](std::size_t count, const char* part) {
    if (pos > bits.size() || count > bits.size() - pos) {
      fail(ErrorCode::kTruncated, std::string("input ends inside ") + part);
    }
  };

  // B1: N - 2 zeroes then a one.
  std::size_t zeroes = 0;
  while (true) {
    need(1, "B1");
    if (bits[pos++]) break;
    ++zeroes;
  }
  const std::size_t n = zeroes + 2;
  DecodedGrammar out;
  if (n == 2) {
    out.grammar = Grammar{2, {{Symbol::terminal(), Symbol::terminal()}}};
    out.sequences = s_sequences(out.grammar);
    out.consumed = pos - offset;
    return out;
  }

  // B2: 2N - 2 bits, N - 2 of them ones.
  need(2 * n - 2, "B2");
  std::vector<bool> mask(2 * n - 2);
  std::size_t ones = 0;
  for (std::size_t k = 0; k < mask.size(); ++k) {
    mask[k] = bits[pos++];
    ones += mask[k] ? 1 : 0;
  }
  if (ones != n - 2) {
    fail(ErrorCode::kMalformedB2, "B2 has " + std::to_string(ones) + " ones, expected " +
                                      std::to_string(n - 2));
  }

  // B3: N - 2 maximal alternating runs starting with ones, then one more bit.
  Frequencies s1_counts;
  std::size_t run_total = 0;
  bool expected_bit = true;
  for (std::uint32_t i = 1; i <= n - 2; ++i) {
    std::size_t run = 0;
    while (true) {
      need(1, "B3");
      if (bits[pos] != expected_bit) break;
      ++pos;
      ++run;
      if (run_total + run > 2 * n - 4) {
        fail(ErrorCode::kMalformedB3, "B3 run lengths leave f_T < 2");
      }
    }
    if (run == 0) fail(ErrorCode::kMalformedB3, "B3 must start with a run of ones");
    run_total += run;
    s1_counts[Symbol::nonterminal(i)] = run - 1;
    expected_bit = !expected_bit;
  }
  need(1, "B3");
  ++pos;  // final run of length one; its value is forced by maximality
  s1_counts[Symbol::terminal()] = 2 * n - 2 - run_total;

  // B4: ceil(log2 |type class|) bits, most significant first.
  std::vector<std::size_t> counts;
  for (const auto& [symbol, count] : s1_counts) counts.push_back(count);
  const mpz_class size = multinomial(counts);
  const std::size_t width = index_width(size);
  need(width, "B4");
  mpz_class index = 0;
  if (width > 0) {
    index.set_str(bits.slice(pos, width).to_text(), 2);
    pos += width;
  }
  if (index >= size) {
    fail(ErrorCode::kIndexOutOfRange,
         "B4 index " + index.get_str() + " >= type class size " + size.get_str());
  }

  const std::vector<Symbol> s1 = unrank_multiset_perm(index, s1_counts, n);
  std::vector<Symbol> s2;
  s2.reserve(n - 2);
  for (std::uint32_t i = 1; i <= n - 2; ++i) s2.push_back(Symbol::nonterminal(i));
  const std::vector<Symbol> s = merge_s(s1, s2, mask);

  out.grammar = grammar_from_s(s);
  out.sequences = s_sequences(out.grammar);
  if (out.sequences.first_mask != mask) {
    fail(ErrorCode::kMalformedGrammar, "B2 does not mark first appearances in S");
  }
  validate_grammar(out.grammar);
  out.consumed = pos - offset;
  return out;
}

Decoded decode(const BitString& bits, std::size_t offset, std::size_t max_vertices) {
  DecodedGrammar dg = decode_grammar(bits, offset);
  BinaryTree t = expand_grammar(dg.grammar, max_vertices);
  // A well-formed but non-minimal grammar (repeated rules, non-breadth-first
  // labels) is not the image of any tree.
  if (build_grammar(t) != dg.grammar) {
    fail(ErrorCode::kMalformedGrammar, "bits decode to a grammar that is not canonical");
  }
  return {std::move(t), dg.consumed};
}

std::size_t codeword_length(const BinaryTree& t) {
  const Grammar g = build_grammar(t);
  const std::size_t n = g.n_vars;
  if (n == 2) return 1;
  const Frequencies f = s_frequencies(g);
  std::size_t b3 = 1;
  for (const auto& [symbol, count] : f) {
    if (!symbol.is_terminal()) b3 += count;
  }
  return 3 * (n - 1) + b3 + index_width(type_class_size(f, n));
}

}  // namespace bintree
