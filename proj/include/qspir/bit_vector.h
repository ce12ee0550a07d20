#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qspir {

// Packed, fixed-length bit string. Bit 0 is the first bit of the string.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size);

  // Parses a string of '0'/'1' characters, e.g. "1010".
  static BitVector FromString(std::string_view bits);
  // Low `size` bits of `value`, bit i of the vector = bit i of the value.
  static BitVector FromUint(std::uint64_t value, std::size_t size);
  static BitVector Unit(std::size_t size, std::size_t index);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool operator[](std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  bool at(std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  void push_back(bool value);
  void append(const BitVector& other);
  // Appends the low `width` bits of `value`, least significant first.
  void append_uint(std::uint64_t value, std::size_t width);

  BitVector slice(std::size_t pos, std::size_t len) const;
  // Reads `width` bits starting at `pos` as an integer, first bit least
  // significant.
  std::uint64_t read_uint(std::size_t pos, std::size_t width) const;

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) {
    lhs ^= rhs;
    return lhs;
  }
  bool operator==(const BitVector& other) const;
  bool operator!=(const BitVector& other) const { return !(*this == other); }
  bool operator<(const BitVector& other) const;

  std::size_t popcount() const;
  bool parity() const { return popcount() & 1U; }
  bool none() const { return popcount() == 0; }
  // Index of the first set bit, or size() when the vector is zero.
  std::size_t first_set() const;
  // Parity of the bitwise AND with `other`; lengths must match.
  bool dot(const BitVector& other) const;

  std::string to_string() const;
  // Transcript encoding "<len>:<hex>", nibble-aligned from bit 0, with the
  // first bit of each nibble as its most significant bit.
  std::string to_hex() const;
  static BitVector FromHex(std::string_view encoded);

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

}  // namespace qspir
