#include "qspir/qkd_keys.h"

#include <stdexcept>
#include <string>
#include <utility>

namespace qspir {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

void QkdModelParams::validate() const {
  check_probability(p_abort, "p_abort");
  check_probability(p_mismatch, "p_mismatch");
  check_probability(p_leak, "p_leak");
}

KeyPairOutcome sample_keypair(std::size_t len_bits, const QkdModelParams& params,
                              RandomSource& rng) {
  if (len_bits == 0 || len_bits % 2 != 0) {
    throw std::invalid_argument("key length must be positive and even, got " +
                                std::to_string(len_bits));
  }
  params.validate();
  if (rng.bernoulli(params.p_abort)) return std::nullopt;
  BitVector s_a = rng.bits(len_bits);
  BitVector s_b = rng.bernoulli(params.p_mismatch) ? rng.bits(len_bits) : s_a;
  std::optional<BitVector> leak;
  if (rng.bernoulli(params.p_leak)) leak = s_a;
  return KeyPair{std::move(s_a), std::move(s_b), std::move(leak)};
}

KeyHalves split_key(const BitVector& key) {
  if (key.size() % 2 != 0) throw std::invalid_argument("cannot split an odd-length key");
  const std::size_t half = key.size() / 2;
  return {key.slice(0, half), key.slice(half, half)};
}

BitVector otp(const BitVector& msg, const BitVector& pad) {
  if (msg.size() != pad.size()) throw std::invalid_argument("message and pad lengths differ");
  return msg ^ pad;
}

double p_fail(double p1, double p2, double p3) {
  check_probability(p1, "p1");
  check_probability(p2, "p2");
  check_probability(p3, "p3");
  return 1.0 - (1.0 - p1) * (1.0 - p2) * (1.0 - p3);
}

}  // namespace qspir
