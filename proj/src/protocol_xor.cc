#include "qspir/protocol_xor.h"

#include <stdexcept>

namespace qspir::xorp {

QueryPair xor_queries(const SelectorVector& i, const BitVector& r) {
  if (i.bits.size() != r.size()) {
    throw std::invalid_argument("selector and randomness lengths differ");
  }
  return {r, r ^ i.bits};
}

bool xor_answer(const BitVector& q, const BitVector& w, bool k) {
  if (q.size() != w.size()) throw std::invalid_argument("query and database lengths differ");
  return q.dot(w) ^ k;
}

bool xor_decode(bool a1, bool a2) { return a1 ^ a2; }

}  // namespace qspir::xorp
