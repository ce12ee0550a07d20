#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "qspir/bit_vector.h"

namespace qspir {

// Source of all protocol randomness. Implementations are either a seeded
// pseudo-random stream (simulation) or a deterministic enumerator over a
// uniform bit space (exact distribution computation).
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual bool bit() = 0;
  // Uniform on [0, 1).
  virtual double uniform01() = 0;
  // Uniform on {0, ..., n - 1}; n >= 1.
  virtual std::uint64_t below(std::uint64_t n) = 0;

  BitVector bits(std::size_t count);
  // True with probability p. p == 0 and p == 1 consume no randomness.
  bool bernoulli(double p);
};

class SeededRng final : public RandomSource {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  // Independent stream for trial `index` of a batch seeded with `seed`.
  static SeededRng ForTrial(std::uint64_t seed, std::uint64_t index);

  bool bit() override;
  double uniform01() override;
  std::uint64_t below(std::uint64_t n) override;

 private:
  std::mt19937_64 engine_;
  std::uint64_t buffer_ = 0;
  int buffered_ = 0;
};

// Thrown when an enumerated run asks for randomness that is not a uniform
// choice among a power-of-two number of values.
class NotEnumerable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Replays the bits of `state`, least significant first. Enumerating every
// state in [0, 2^b) where b = bits_consumed() visits each outcome of the
// underlying uniform bit space exactly once.
class EnumeratingSource final : public RandomSource {
 public:
  explicit EnumeratingSource(std::uint64_t state) : state_(state) {}

  bool bit() override;
  double uniform01() override;
  std::uint64_t below(std::uint64_t n) override;

  int bits_consumed() const { return consumed_; }

 private:
  std::uint64_t state_;
  int consumed_ = 0;
};

}  // namespace qspir
