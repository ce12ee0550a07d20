#include "qspir/protocol_b2.h"

#include <bit>
#include <stdexcept>
#include <string>

namespace qspir::b2 {

namespace {

SubsetMask full_mask(int m) {
  return m == 64 ? ~SubsetMask{0} : (SubsetMask{1} << m) - 1;
}

bool mask_parity(SubsetMask v) { return std::popcount(v) & 1; }

bool bit_of(SubsetMask v, int j) { return (v >> (j - 1)) & 1U; }

void check_coordinate(int v, int m, const char* what) {
  if (v < 1 || v > m) {
    throw std::invalid_argument(std::string(what) + " must lie in {1..m}, got " +
                                std::to_string(v));
  }
}

}  // namespace

void validate_side(int m) {
  if (m < kMinSide || m > kMaxSide) {
    throw std::invalid_argument("cube side m must lie in [2, 64], got " + std::to_string(m));
  }
}

CubeIndex CubeIndex::FromFlat(std::uint64_t flat, int m) {
  validate_side(m);
  const auto mm = static_cast<std::uint64_t>(m);
  if (flat >= mm * mm * mm) throw std::invalid_argument("flat index out of range");
  CubeIndex x;
  x.coord[0] = static_cast<int>(flat / (mm * mm)) + 1;
  x.coord[1] = static_cast<int>((flat / mm) % mm) + 1;
  x.coord[2] = static_cast<int>(flat % mm) + 1;
  return x;
}

std::uint64_t CubeIndex::flat(int m) const {
  validate(m);
  const auto mm = static_cast<std::uint64_t>(m);
  return static_cast<std::uint64_t>(coord[0] - 1) * mm * mm +
         static_cast<std::uint64_t>(coord[1] - 1) * mm + static_cast<std::uint64_t>(coord[2] - 1);
}

void CubeIndex::validate(int m) const {
  validate_side(m);
  for (int c : coord) check_coordinate(c, m, "cube index coordinate");
}

void Query::validate(int m) const {
  validate_side(m);
  for (int i = 0; i < 3; ++i) {
    if (sets[i] & ~full_mask(m)) throw std::invalid_argument("query set has elements beyond m");
    check_coordinate(displacement[i], m, "query displacement");
  }
}

bool CdsKey::t_parity_ok() const { return !mask_parity(t); }

CubeDatabase::CubeDatabase(const BitVector& bits, int m) : m_(m) {
  validate_side(m);
  const auto n = static_cast<std::size_t>(m) * m * m;
  if (bits.size() != n) {
    throw std::invalid_argument("database must hold exactly m^3 = " + std::to_string(n) +
                                " bits, got " + std::to_string(bits.size()));
  }
  rows_.assign(static_cast<std::size_t>(m) * m, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (bits[k]) rows_[k / m] |= SubsetMask{1} << (k % m);
  }
}

bool CubeDatabase::at(const CubeIndex& x) const {
  x.validate(m_);
  return bit_of(rows_[(x.coord[0] - 1) * m_ + (x.coord[1] - 1)], x.coord[2]);
}

SubsetMask CubeDatabase::fold(SubsetMask s1, SubsetMask s2) const {
  SubsetMask acc = 0;
  for (SubsetMask a = s1; a != 0; a &= a - 1) {
    const int row_base = std::countr_zero(a) * m_;
    for (SubsetMask b = s2; b != 0; b &= b - 1) acc ^= rows_[row_base + std::countr_zero(b)];
  }
  return acc;
}

bool CubeDatabase::subcube_parity(SubsetMask s1, SubsetMask s2, SubsetMask s3) const {
  return mask_parity(fold(s1, s2) & s3);
}

SubsetMask sym_diff(SubsetMask s, int j, int m) {
  check_coordinate(j, m, "sym_diff element");
  return s ^ (SubsetMask{1} << (j - 1));
}

int wrap_index(int j, int d, int m) {
  const int v = ((j - d) % m + m) % m;
  return v == 0 ? m : v;
}

std::pair<Query, Query> derive_queries(const CubeIndex& x, const UserRandomness& r, int m) {
  x.validate(m);
  Query q1{r.sets, r.displacement};
  q1.validate(m);
  Query q2;
  for (int i = 0; i < 3; ++i) {
    q2.sets[i] = sym_diff(r.sets[i], x.coord[i], m);
    q2.displacement[i] = wrap_index(x.coord[i], r.displacement[i], m);
  }
  return {q1, q2};
}

namespace {

// Parities of the sub-cubes obtained by toggling element j of coordinate i,
// relative to the base cube. Entry [i] is a mask over j.
struct SliceParities {
  bool base = false;
  std::array<SubsetMask, 3> slice{};
};

SliceParities slice_parities(const Query& q, const CubeDatabase& w, int m) {
  SliceParities out;
  const SubsetMask all = w.fold(q.sets[0], q.sets[1]);
  out.base = mask_parity(all & q.sets[2]);
  for (int j = 1; j <= m; ++j) {
    const SubsetMask single = SubsetMask{1} << (j - 1);
    if (mask_parity(w.fold(single, q.sets[1]) & q.sets[2])) out.slice[0] |= single;
    if (mask_parity(w.fold(q.sets[0], single) & q.sets[2])) out.slice[1] |= single;
  }
  out.slice[2] = all;
  return out;
}

SubsetMask rotate_mask(SubsetMask y, int d, int m) {
  // out bit j = y bit wrap_index(j, d, m).
  SubsetMask out = 0;
  for (int j = 1; j <= m; ++j) {
    if (bit_of(y, wrap_index(j, d, m))) out |= SubsetMask{1} << (j - 1);
  }
  return out;
}

SubsetMask broadcast(bool b, int m) { return b ? full_mask(m) : 0; }

}  // namespace

Dc1Answer answer_dc1(const Query& q, const CubeDatabase& w, const CdsKey& cds) {
  const int m = w.side();
  q.validate(m);
  const auto p = slice_parities(q, w, m);
  Dc1Answer a;
  a.a000 = p.base ^ ((cds.t >> k000) & 1U);
  for (int i = 0; i < 3; ++i) {
    const int sigma = kDc1Sigmas[i];
    a.a_single[i] = p.slice[i] ^ broadcast(p.base, m) ^
                    rotate_mask(cds.y[sigma], q.displacement[i], m) ^
                    broadcast((cds.t >> sigma) & 1U, m);
    const bool cds_bit = mask_parity(q.sets[i] & cds.z[i]) ^ ((cds.u >> i) & 1U);
    a.a_cds |= static_cast<std::uint8_t>(cds_bit << i);
    const bool extra = bit_of(cds.y[kDc2Sigmas[i]], q.displacement[i]);
    a.y_extra |= static_cast<std::uint8_t>(extra << i);
  }
  return a;
}

Dc2Answer answer_dc2(const Query& q, const CubeDatabase& w, const CdsKey& cds) {
  const int m = w.side();
  q.validate(m);
  const auto p = slice_parities(q, w, m);
  Dc2Answer a;
  a.a111 = p.base ^ ((cds.t >> k111) & 1U);
  for (int i = 0; i < 3; ++i) {
    const int sigma = kDc2Sigmas[i];
    a.a_pair[i] = p.slice[i] ^ broadcast(p.base, m) ^
                  rotate_mask(cds.y[sigma], q.displacement[i], m) ^
                  broadcast((cds.t >> sigma) & 1U, m) ^ cds.z[i];
    const bool cds_bit = mask_parity(q.sets[i] & cds.z[i]) ^ ((cds.u >> i) & 1U);
    a.a_cds |= static_cast<std::uint8_t>(cds_bit << i);
    const bool extra = bit_of(cds.y[kDc1Sigmas[i]], q.displacement[i]);
    a.y_extra |= static_cast<std::uint8_t>(extra << i);
  }
  return a;
}

bool decode(const Dc1Answer& a1, const Dc2Answer& a2, const CubeIndex& x, int m) {
  x.validate(m);
  const std::uint8_t z = a1.a_cds ^ a2.a_cds;
  bool w = a1.a000 ^ a2.a111;
  for (int i = 0; i < 3; ++i) {
    const int xi = x.coord[i];
    w ^= bit_of(a1.a_single[i], xi) ^ ((a2.y_extra >> i) & 1U);
    w ^= bit_of(a2.a_pair[i], xi) ^ ((a1.y_extra >> i) & 1U);
    w ^= (z >> i) & 1U;
  }
  return w;
}

UserRandomness random_user_randomness(RandomSource& rng, int m) {
  validate_side(m);
  UserRandomness r;
  for (auto& s : r.sets) s = rng.bits(static_cast<std::size_t>(m)).words()[0];
  for (auto& d : r.displacement) d = static_cast<int>(rng.below(static_cast<std::uint64_t>(m))) + 1;
  return r;
}

CdsKey random_cds_key(RandomSource& rng, int m) {
  return cds_key_from_bits(rng.bits(cds_key_bits(m)), 0, m);
}

std::size_t CdsKeyLayout::y(int sigma, int j) const {
  for (std::size_t k = 0; k < kYSigmas.size(); ++k) {
    if (kYSigmas[k] == sigma) return 10 + k * m_ + static_cast<std::size_t>(j - 1);
  }
  throw std::invalid_argument("sigma has no Y vector");
}

std::size_t CdsKeyLayout::z(int i, int j) const {
  return 10 + 6 * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i - 1) * m_ +
         static_cast<std::size_t>(j - 1);
}

std::size_t cds_key_bits(int m) {
  validate_side(m);
  return CdsKeyLayout(m).size();
}

CdsKey cds_key_from_bits(const BitVector& bits, std::size_t offset, int m) {
  const std::size_t need = cds_key_bits(m);
  if (offset + need > bits.size()) {
    throw std::invalid_argument("insufficient key material for a CDS key: need " +
                                std::to_string(need) + " bits");
  }
  const CdsKeyLayout layout(m);
  CdsKey key;
  key.u = static_cast<std::uint8_t>(bits.read_uint(offset + layout.u(1), 3));
  key.t = static_cast<std::uint8_t>(bits.read_uint(offset + layout.t(0), 7));
  if (!key.t_parity_ok()) key.t |= static_cast<std::uint8_t>(1U << k111);
  for (int sigma : kYSigmas) {
    key.y[sigma] = bits.read_uint(offset + layout.y(sigma, 1), static_cast<std::size_t>(m));
  }
  for (int i = 1; i <= 3; ++i) {
    key.z[i - 1] = bits.read_uint(offset + layout.z(i, 1), static_cast<std::size_t>(m));
  }
  return key;
}

BitVector cds_key_to_bits(const CdsKey& key, int m) {
  validate_side(m);
  BitVector out;
  out.append_uint(key.u, 3);
  out.append_uint(key.t, 7);
  for (int sigma : kYSigmas) out.append_uint(key.y[sigma], static_cast<std::size_t>(m));
  for (auto z : key.z) out.append_uint(z, static_cast<std::size_t>(m));
  return out;
}

std::size_t displacement_width(int m) {
  validate_side(m);
  return static_cast<std::size_t>(std::bit_width(static_cast<unsigned>(m - 1)));
}

std::size_t query_bits(int m) { return 3 * static_cast<std::size_t>(m) + 3 * displacement_width(m); }

std::size_t answer_bits(int m) {
  validate_side(m);
  return 3 * static_cast<std::size_t>(m) + 7;
}

namespace {

template <typename T>
BitVector encode_sets_and_displacements(const T& v, int m) {
  BitVector out;
  for (auto s : v.sets) out.append_uint(s, static_cast<std::size_t>(m));
  const auto width = displacement_width(m);
  for (int d : v.displacement) out.append_uint(static_cast<std::uint64_t>(d - 1), width);
  return out;
}

template <typename T>
T decode_sets_and_displacements(const BitVector& bits, int m) {
  if (bits.size() != query_bits(m)) {
    throw std::invalid_argument("query encoding must be " + std::to_string(query_bits(m)) +
                                " bits, got " + std::to_string(bits.size()));
  }
  T v;
  const auto mm = static_cast<std::size_t>(m);
  for (std::size_t i = 0; i < 3; ++i) v.sets[i] = bits.read_uint(i * mm, mm);
  const auto width = displacement_width(m);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto raw = bits.read_uint(3 * mm + i * width, width);
    v.displacement[i] = static_cast<int>(raw % mm) + 1;
  }
  return v;
}

}  // namespace

BitVector encode_query(const Query& q, int m) {
  q.validate(m);
  return encode_sets_and_displacements(q, m);
}

Query decode_query(const BitVector& bits, int m) {
  return decode_sets_and_displacements<Query>(bits, m);
}

BitVector encode_randomness(const UserRandomness& r, int m) {
  Query{r.sets, r.displacement}.validate(m);
  return encode_sets_and_displacements(r, m);
}

UserRandomness decode_randomness(const BitVector& bits, int m) {
  return decode_sets_and_displacements<UserRandomness>(bits, m);
}

namespace {

template <typename A>
BitVector encode_answer_impl(bool portion, const A& vectors, std::uint8_t cds, std::uint8_t extra,
                             int m) {
  BitVector out;
  out.push_back(portion);
  for (auto v : vectors) out.append_uint(v, static_cast<std::size_t>(m));
  out.append_uint(cds, 3);
  out.append_uint(extra, 3);
  return out;
}

void check_answer_size(const BitVector& bits, int m) {
  if (bits.size() != answer_bits(m)) {
    throw std::invalid_argument("answer encoding must be " + std::to_string(answer_bits(m)) +
                                " bits, got " + std::to_string(bits.size()));
  }
}

}  // namespace

BitVector encode_answer(const Dc1Answer& a, int m) {
  validate_side(m);
  return encode_answer_impl(a.a000, a.a_single, a.a_cds, a.y_extra, m);
}

BitVector encode_answer(const Dc2Answer& a, int m) {
  validate_side(m);
  return encode_answer_impl(a.a111, a.a_pair, a.a_cds, a.y_extra, m);
}

Dc1Answer decode_dc1_answer(const BitVector& bits, int m) {
  check_answer_size(bits, m);
  const auto mm = static_cast<std::size_t>(m);
  Dc1Answer a;
  a.a000 = bits[0];
  for (std::size_t i = 0; i < 3; ++i) a.a_single[i] = bits.read_uint(1 + i * mm, mm);
  a.a_cds = static_cast<std::uint8_t>(bits.read_uint(1 + 3 * mm, 3));
  a.y_extra = static_cast<std::uint8_t>(bits.read_uint(4 + 3 * mm, 3));
  return a;
}

Dc2Answer decode_dc2_answer(const BitVector& bits, int m) {
  check_answer_size(bits, m);
  const auto mm = static_cast<std::size_t>(m);
  Dc2Answer a;
  a.a111 = bits[0];
  for (std::size_t i = 0; i < 3; ++i) a.a_pair[i] = bits.read_uint(1 + i * mm, mm);
  a.a_cds = static_cast<std::uint8_t>(bits.read_uint(1 + 3 * mm, 3));
  a.y_extra = static_cast<std::uint8_t>(bits.read_uint(4 + 3 * mm, 3));
  return a;
}

}  // namespace qspir::b2
