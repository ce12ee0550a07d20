#include "qspir/bit_vector.h"

#include <bit>
#include <stdexcept>

namespace qspir {

namespace {

std::size_t WordCount(std::size_t bits) { return (bits + 63) / 64; }

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitVector::BitVector(std::size_t size) : words_(WordCount(size), 0), size_(size) {}

BitVector BitVector::FromString(std::string_view bits) {
  BitVector out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      out.set(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
  }
  return out;
}

BitVector BitVector::FromUint(std::uint64_t value, std::size_t size) {
  if (size > 64) throw std::invalid_argument("FromUint supports at most 64 bits");
  BitVector out(size);
  if (size > 0) {
    out.words_[0] = size == 64 ? value : value & ((std::uint64_t{1} << size) - 1);
  }
  return out;
}

BitVector BitVector::Unit(std::size_t size, std::size_t index) {
  BitVector out(size);
  out.set(index, true);
  return out;
}

bool BitVector::at(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("BitVector index out of range");
  return (*this)[i];
}

void BitVector::set(std::size_t i, bool value) {
  if (i >= size_) throw std::out_of_range("BitVector index out of range");
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

void BitVector::flip(std::size_t i) {
  if (i >= size_) throw std::out_of_range("BitVector index out of range");
  words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
}

void BitVector::push_back(bool value) {
  if ((size_ & 63) == 0) words_.push_back(0);
  ++size_;
  if (value) words_[(size_ - 1) >> 6] |= std::uint64_t{1} << ((size_ - 1) & 63);
}

void BitVector::append(const BitVector& other) {
  const std::size_t shift = size_ & 63;
  if (shift == 0) {
    words_.insert(words_.end(), other.words_.begin(), other.words_.end());
    size_ += other.size_;
    return;
  }
  for (std::size_t i = 0; i < other.size_; ++i) push_back(other[i]);
}

void BitVector::append_uint(std::uint64_t value, std::size_t width) {
  for (std::size_t b = 0; b < width; ++b) push_back((value >> b) & 1U);
}

BitVector BitVector::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > size_) throw std::out_of_range("BitVector slice out of range");
  BitVector out(len);
  for (std::size_t i = 0; i < len; ++i) {
    if ((*this)[pos + i]) out.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return out;
}

std::uint64_t BitVector::read_uint(std::size_t pos, std::size_t width) const {
  if (width > 64 || pos + width > size_) {
    throw std::out_of_range("BitVector read_uint out of range");
  }
  std::uint64_t value = 0;
  for (std::size_t b = 0; b < width; ++b) {
    value |= static_cast<std::uint64_t>((*this)[pos + b]) << b;
  }
  return value;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) {
    throw std::invalid_argument("XOR of bit vectors with different lengths");
  }
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

bool BitVector::operator==(const BitVector& other) const {
  return size_ == other.size_ && words_ == other.words_;
}

bool BitVector::operator<(const BitVector& other) const {
  if (size_ != other.size_) return size_ < other.size_;
  return words_ < other.words_;
}

std::size_t BitVector::popcount() const {
  std::size_t count = 0;
  for (auto w : words_) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

std::size_t BitVector::first_set() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return size_;
}

bool BitVector::dot(const BitVector& other) const {
  if (other.size_ != size_) throw std::invalid_argument("dot of bit vectors with different lengths");
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
  return std::popcount(acc) & 1;
}

std::string BitVector::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

std::string BitVector::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = std::to_string(size_) + ":";
  for (std::size_t i = 0; i < size_; i += 4) {
    int nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      nibble <<= 1;
      if (i + b < size_ && (*this)[i + b]) nibble |= 1;
    }
    out.push_back(kDigits[nibble]);
  }
  return out;
}

BitVector BitVector::FromHex(std::string_view encoded) {
  const auto colon = encoded.find(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw std::invalid_argument("hex bit vector must look like <len>:<hex>");
  }
  std::size_t len = 0;
  for (char c : encoded.substr(0, colon)) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad bit vector length");
    len = len * 10 + static_cast<std::size_t>(c - '0');
  }
  const auto hex = encoded.substr(colon + 1);
  if (hex.size() != (len + 3) / 4) {
    throw std::invalid_argument("hex digit count does not match bit length");
  }
  BitVector out(len);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const int v = HexValue(hex[d]);
    if (v < 0) throw std::invalid_argument("invalid hex digit");
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t i = d * 4 + b;
      const bool bit = (v >> (3 - b)) & 1;
      if (i < len) {
        out.set(i, bit);
      } else if (bit) {
        throw std::invalid_argument("nonzero padding in hex bit vector");
      }
    }
  }
  return out;
}

}  // namespace qspir
