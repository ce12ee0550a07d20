#pragma once

// Cube-indexed two-database SPIR with conditional disclosure of secrets, one
// bit plane at a time. The database holds n = m^3 bits addressed by a cube
// index x = (x1, x2, x3) with coordinates in {1..m}. Subsets of {1..m} are
// bit masks: bit j-1 is set iff j is a member.
//
// All subscript arithmetic is mod m with representatives {1..m} (0 maps to m).

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "qspir/bit_vector.h"
#include "qspir/random.h"

namespace qspir::b2 {

inline constexpr int kMinSide = 2;
// Subsets are stored in one machine word.
inline constexpr int kMaxSide = 64;

using SubsetMask = std::uint64_t;

// Answer-portion labels. Bit 2 of the code is the first coordinate, so "100"
// (first coordinate toggled) is code 4.
enum Sigma : int {
  k000 = 0, k001 = 1, k010 = 2, k011 = 3, k100 = 4, k101 = 5, k110 = 6, k111 = 7,
};
// Sigma labels carrying a Y vector, in key-layout order.
inline constexpr std::array<int, 6> kYSigmas = {k001, k010, k100, k011, k101, k110};
// DC1 answers A^{100}, A^{010}, A^{001}; index i toggles coordinate i+1.
inline constexpr std::array<int, 3> kDc1Sigmas = {k100, k010, k001};
// DC2 answers A^{011}, A^{101}, A^{110}.
inline constexpr std::array<int, 3> kDc2Sigmas = {k011, k101, k110};

void validate_side(int m);

struct CubeIndex {
  std::array<int, 3> coord{1, 1, 1};

  static CubeIndex FromFlat(std::uint64_t flat, int m);
  // (x1-1)·m² + (x2-1)·m + (x3-1).
  std::uint64_t flat(int m) const;
  void validate(int m) const;
  bool operator==(const CubeIndex&) const = default;
};

struct UserRandomness {
  std::array<SubsetMask, 3> sets{};
  std::array<int, 3> displacement{1, 1, 1};
  bool operator==(const UserRandomness&) const = default;
};

struct Query {
  std::array<SubsetMask, 3> sets{};
  std::array<int, 3> displacement{1, 1, 1};
  void validate(int m) const;
  bool operator==(const Query&) const = default;
};

// Shared CDS randomness (U, T, Y, Z) of the two data centres.
struct CdsKey {
  std::uint8_t u = 0;              // bit i-1 = U^i
  std::uint8_t t = 0;              // bit sigma = T^sigma
  std::array<SubsetMask, 8> y{};   // indexed by sigma; 000 and 111 unused
  std::array<SubsetMask, 3> z{};

  // XOR of all eight T bits is zero.
  bool t_parity_ok() const;
  bool operator==(const CdsKey&) const = default;
};

struct Dc1Answer {
  bool a000 = false;
  std::array<SubsetMask, 3> a_single{};  // A^{100}, A^{010}, A^{001}
  std::uint8_t a_cds = 0;                // bit i-1 = A^{CDS}_i
  std::uint8_t y_extra = 0;              // Y^{011}_{Q1d1}, Y^{101}_{Q1d2}, Y^{110}_{Q1d3}
  bool operator==(const Dc1Answer&) const = default;
};

struct Dc2Answer {
  bool a111 = false;
  std::array<SubsetMask, 3> a_pair{};    // A^{011}, A^{101}, A^{110}
  std::uint8_t a_cds = 0;                // bit i-1 = A^{CDS'}_i
  std::uint8_t y_extra = 0;              // Y^{100}_{Q2d1}, Y^{010}_{Q2d2}, Y^{001}_{Q2d3}
  bool operator==(const Dc2Answer&) const = default;
};

// One bit plane of an m³ database.
class CubeDatabase {
 public:
  // |bits| must equal m³; entry order is the flat cube index.
  CubeDatabase(const BitVector& bits, int m);

  int side() const { return m_; }
  bool at(const CubeIndex& x) const;
  // XOR of all entries in the sub-cube s1 × s2 × s3.
  bool subcube_parity(SubsetMask s1, SubsetMask s2, SubsetMask s3) const;
  // XOR of rows (a, b) over a ∈ s1, b ∈ s2, as a mask over the third coordinate.
  SubsetMask fold(SubsetMask s1, SubsetMask s2) const;

 private:
  int m_;
  std::vector<SubsetMask> rows_;  // rows_[(x1-1)·m + (x2-1)] over x3
};

// s △ {j}.
SubsetMask sym_diff(SubsetMask s, int j, int m);
// ((j - d) mod m) in {1..m}.
int wrap_index(int j, int d, int m);

std::pair<Query, Query> derive_queries(const CubeIndex& x, const UserRandomness& r, int m);
Dc1Answer answer_dc1(const Query& q, const CubeDatabase& w, const CdsKey& cds);
Dc2Answer answer_dc2(const Query& q, const CubeDatabase& w, const CdsKey& cds);
// Recovers Z^i_{x^i} from the CDS portions, then XORs the eight answer
// portions selected by x with their Y corrections. Only x is needed beyond
// the answers: the Y corrections ride along in y_extra.
bool decode(const Dc1Answer& a1, const Dc2Answer& a2, const CubeIndex& x, int m);

UserRandomness random_user_randomness(RandomSource& rng, int m);
CdsKey random_cds_key(RandomSource& rng, int m);

// Free-bit layout of a CdsKey: U (3) | T^000..T^110 (7) | Y in kYSigmas order
// (6m) | Z^1..Z^3 (3m). T^111 is the parity bit and is never stored.
class CdsKeyLayout {
 public:
  explicit CdsKeyLayout(int m) : m_(m) {}
  std::size_t size() const { return 10 + 9 * static_cast<std::size_t>(m_); }
  std::size_t u(int i) const { return static_cast<std::size_t>(i - 1); }
  // sigma in [0, 6].
  std::size_t t(int sigma) const { return 3 + static_cast<std::size_t>(sigma); }
  std::size_t y(int sigma, int j) const;
  std::size_t z(int i, int j) const;

 private:
  int m_;
};

std::size_t cds_key_bits(int m);
CdsKey cds_key_from_bits(const BitVector& bits, std::size_t offset, int m);
BitVector cds_key_to_bits(const CdsKey& key, int m);

// Wire format. Queries: the three sets (m bits each, element j at bit j-1)
// followed by the three displacements, each stored as (d-1) in
// displacement_width(m) bits. Decoding reduces out-of-range displacements
// mod m, so any bit string of the right length is a well-formed query.
std::size_t displacement_width(int m);
std::size_t query_bits(int m);
std::size_t answer_bits(int m);  // 3m + 7

BitVector encode_query(const Query& q, int m);
Query decode_query(const BitVector& bits, int m);
BitVector encode_randomness(const UserRandomness& r, int m);
UserRandomness decode_randomness(const BitVector& bits, int m);

// Answers: portion bit, the three m-bit vectors, the three CDS bits, the
// three extra Y bits.
BitVector encode_answer(const Dc1Answer& a, int m);
BitVector encode_answer(const Dc2Answer& a, int m);
Dc1Answer decode_dc1_answer(const BitVector& bits, int m);
Dc2Answer decode_dc2_answer(const BitVector& bits, int m);

}  // namespace qspir::b2
