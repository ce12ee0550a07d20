#pragma once

// Classical surrogate for ε-secure QKD key pairs, plus the one-time pad.
//
// A key exchange either aborts or returns two halves (s_a, s_b). Imperfection
// is modelled by two independent events on a passing exchange:
//   mismatch (prob. p_mismatch): s_b is resampled uniformly;
//   leak     (prob. p_leak):     Eve receives a copy of s_a.
// Real QKD side information is quantum; the leak event is an all-or-nothing
// stand-in whose distinguishing advantage is exactly p_leak.

#include <optional>

#include "qspir/bit_vector.h"
#include "qspir/random.h"

namespace qspir {

struct QkdModelParams {
  double p_abort = 0.0;
  double p_mismatch = 0.0;
  double p_leak = 0.0;

  void validate() const;
  double eps_cor() const { return (1.0 - p_abort) * p_mismatch; }
  double eps_sec() const { return (1.0 - p_abort) * p_leak; }
  double eps() const { return eps_cor() + eps_sec(); }
  bool ideal() const { return p_abort == 0.0 && p_mismatch == 0.0 && p_leak == 0.0; }
  bool operator==(const QkdModelParams&) const = default;
};

struct KeyPair {
  BitVector s_a;
  BitVector s_b;
  std::optional<BitVector> eve_leak;
};

// Empty optional is the abort outcome ⊥.
using KeyPairOutcome = std::optional<KeyPair>;

struct KeyHalves {
  BitVector enc;
  BitVector dec;
};

// len_bits must be positive and even.
KeyPairOutcome sample_keypair(std::size_t len_bits, const QkdModelParams& params,
                              RandomSource& rng);
// enc = first half, dec = second half.
KeyHalves split_key(const BitVector& key);
BitVector otp(const BitVector& msg, const BitVector& pad);
// Probability that at least one of three independent exchanges aborts.
double p_fail(double p1, double p2, double p3);

}  // namespace qspir
