#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bintree {

class BitString {
 public:
  BitString() = default;

  // Accepts only '0' and '1'; throws kSyntax otherwise.
  static BitString from_text(std::string_view text);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }

  void push_back(bool bit) { bits_.push_back(bit); }
  void append(const BitString& other);
  // Appends the low `width` bits of `value`, most significant first.
  void append_uint(std::uint64_t value, std::size_t width);

  BitString slice(std::size_t offset, std::size_t length) const;
  std::string to_text() const;

  // Bits packed most-significant-bit first; the final byte is zero padded.
  std::vector<std::uint8_t> pack() const;
  static BitString unpack(std::span<const std::uint8_t> bytes, std::size_t bit_count);

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString& a, const BitString& b) { return a.bits_ <=> b.bits_; }

 private:
  std::vector<bool> bits_;
};

// Packed record: 8-byte little-endian bit count, then the packed bits.
void write_packed_record(std::ostream& out, const BitString& bits);
// Returns false at a clean end of stream; throws kTruncated on a partial record.
bool read_packed_record(std::istream& in, BitString& bits);

}  // namespace bintree
