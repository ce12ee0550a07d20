#pragma once

// Relaxed two-database SPIR: the user learns exactly one XOR combination
// ⊕_x i_x·w_x of the database bits, selected by the vector i.

#include "qspir/bit_vector.h"

namespace qspir::xorp {

struct SelectorVector {
  BitVector bits;
  bool operator==(const SelectorVector&) const = default;
};

struct QueryPair {
  BitVector q1;
  BitVector q2;
};

// q1 = r, q2 = r ⊕ i.
QueryPair xor_queries(const SelectorVector& i, const BitVector& r);
// (⊕_x q_x·w_x) ⊕ k.
bool xor_answer(const BitVector& q, const BitVector& w, bool k);
bool xor_decode(bool a1, bool a2);

}  // namespace qspir::xorp
