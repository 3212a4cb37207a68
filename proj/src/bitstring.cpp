#include "bintree/bitstring.hpp"

#include <array>
#include <istream>
#include <ostream>

#include "bintree/error.hpp"

namespace bintree {

BitString BitString::from_text(std::string_view text) {
  BitString b;
  b.bits_.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '0' && c != '1') {
      fail(ErrorCode::kSyntax,
           std::string("bit strings contain only 0 and 1, found '") + c + "' at offset " +
               std::to_string(i));
    }
    b.bits_.push_back(c == '1');
  }
  return b;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

void BitString::append_uint(std::uint64_t value, std::size_t width) {
  for (std::size_t k = width; k-- > 0;) bits_.push_back(k < 64 && ((value >> k) & 1U) != 0);
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
  if (offset > bits_.size() || length > bits_.size() - offset) {
    fail(ErrorCode::kTruncated, "slice past end of bit string");
  }
  BitString b;
  b.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                 bits_.begin() + static_cast<std::ptrdiff_t>(offset + length));
  return b;
}

std::string BitString::to_text() const {
  std::string s;
  s.reserve(bits_.size());
  for (const bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<std::uint8_t> BitString::pack() const {
  std::vector<std::uint8_t> bytes((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
  }
  return bytes;
}

BitString BitString::unpack(std::span<const std::uint8_t> bytes, std::size_t bit_count) {
  if (bytes.size() * 8 < bit_count) fail(ErrorCode::kTruncated, "packed data shorter than bit count");
  BitString b;
  b.bits_.reserve(bit_count);
  for (std::size_t i = 0; i < bit_count; ++i) {
    b.bits_.push_back((bytes[i / 8] & (0x80U >> (i % 8))) != 0);
  }
  return b;
}

void write_packed_record(std::ostream& out, const BitString& bits) {
  std::array<char, 8> header{};
  const std::uint64_t n = bits.size();
  for (std::size_t k = 0; k < 8; ++k) header[k] = static_cast<char>((n >> (8 * k)) & 0xFFU);
  out.write(header.data(), header.size());
  const auto bytes = bits.pack();
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

bool read_packed_record(std::istream& in, BitString& bits) {
  std::array<unsigned char, 8> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() == 0) return false;
  if (in.gcount() != static_cast<std::streamsize>(header.size())) {
    fail(ErrorCode::kTruncated, "partial packed record header");
  }
  std::uint64_t n = 0;
  for (std::size_t k = 0; k < 8; ++k) n |= std::uint64_t{header[k]} << (8 * k);
  if (n > (std::uint64_t{1} << 40)) fail(ErrorCode::kTruncated, "implausible packed record length");
  std::vector<std::uint8_t> bytes((n + 7) / 8);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    fail(ErrorCode::kTruncated, "packed record shorter than its header claims");
  }
  bits = BitString::unpack(bytes, n);
  return true;
}

}  // namespace bintree
