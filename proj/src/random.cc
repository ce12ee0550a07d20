#include "qspir/random.h"

#include <bit>
#include <limits>

namespace qspir {

BitVector RandomSource::bits(std::size_t count) {
  BitVector out(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (bit()) out.set(i, true);
  }
  return out;
}

bool RandomSource::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

SeededRng SeededRng::ForTrial(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return SeededRng((static_cast<std::uint64_t>(words[0]) << 32) | words[1]);
}

bool SeededRng::bit() {
  if (buffered_ == 0) {
    buffer_ = engine_();
    buffered_ = 64;
  }
  const bool b = buffer_ & 1U;
  buffer_ >>= 1;
  --buffered_;
  return b;
}

double SeededRng::uniform01() {
  // 53 high-quality bits; portable unlike std::uniform_real_distribution.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  if (n == 1) return 0;
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

bool EnumeratingSource::bit() {
  if (consumed_ >= 64) throw NotEnumerable("enumerated randomness exceeds 64 bits");
  return (state_ >> consumed_++) & 1U;
}

double EnumeratingSource::uniform01() {
  throw NotEnumerable("continuous randomness cannot be enumerated");
}

std::uint64_t EnumeratingSource::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  if (!std::has_single_bit(n)) {
    throw NotEnumerable("uniform choice among a non power-of-two range");
  }
  std::uint64_t v = 0;
  const int width = std::countr_zero(n);
  for (int b = 0; b < width; ++b) v |= static_cast<std::uint64_t>(bit()) << b;
  return v;
}

}  // namespace qspir
