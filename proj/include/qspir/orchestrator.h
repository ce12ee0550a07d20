#pragma once

// End-to-end execution of the one-round two-database SPIR flow over QKD-style
// keys: three key exchanges, OTP query transport, answers, OTP answer
// transport, decoding. Every intermediate value is recorded so that each
// party's view can be projected afterwards.
//
// Key pair naming follows the data centres and user:
//   U↔D1: S1 (DC1, s_a) / S2 (user, s_b)
//   U↔D2: S3 (DC2, s_a) / S4 (user, s_b)
//   D1↔D2: S5 (DC1, s_a) / S6 (DC2, s_b)
// Each user-link key is split into an upstream half (first) and a downstream
// half (second). The user encrypts with upstream and decrypts with
// downstream; the data centre does the opposite, so S2^enc and S1^dec name
// the same half and a mismatch shows up as q̃1 = q1 ⊕ (S2^enc ⊕ S1^dec).

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qspir/bit_vector.h"
#include "qspir/protocol_b2.h"
#include "qspir/protocol_xor.h"
#include "qspir/qkd_keys.h"
#include "qspir/random.h"

namespace qspir {

enum class Protocol { kB2, kXor };
std::string_view protocol_name(Protocol p);
Protocol parse_protocol(std::string_view name);

enum class Link { kUserDc1 = 0, kUserDc2 = 1, kDc1Dc2 = 2 };
inline constexpr std::array<Link, 3> kAllLinks = {Link::kUserDc1, Link::kUserDc2, Link::kDc1Dc2};
// Exchanges run in this order; an abort stops the run immediately.
inline constexpr std::array<Link, 3> kExchangeOrder = {Link::kDc1Dc2, Link::kUserDc1,
                                                       Link::kUserDc2};
std::string_view link_name(Link link);

// L bit planes of n entries each.
struct Database {
  std::vector<BitVector> planes;

  static Database Random(RandomSource& rng, std::size_t n, int entry_bits);
  // Entry k of the result is bit k of `bits` (single plane).
  static Database SinglePlane(BitVector bits);
  std::size_t entries() const { return planes.empty() ? 0 : planes.front().size(); }
  int entry_bits() const { return static_cast<int>(planes.size()); }
  BitVector entry(std::size_t index) const;
  // Planes concatenated in order.
  BitVector flatten() const;
  static Database Unflatten(const BitVector& bits, int entry_bits);
};

using QueryTarget = std::variant<b2::CubeIndex, xorp::SelectorVector>;

struct DishonestUser {
  // Produces (q̄1, q̄2) in wire format.
  std::function<std::pair<BitVector, BitVector>(RandomSource&)> queries;
  // Index the user decodes for; defaults to the run's target.
  std::optional<QueryTarget> decode_as;
};

struct DishonestDc {
  int which = 1;
  // (received query, honest answer) -> answer actually sent.
  std::function<BitVector(const BitVector&, const BitVector&)> answer;
};

struct AdversarySpec {
  std::variant<std::monostate, DishonestUser, DishonestDc> role;

  bool honest() const { return std::holds_alternative<std::monostate>(role); }
  std::string_view role_name() const;
  static AdversarySpec FixedQueries(BitVector q1, BitVector q2,
                                    std::optional<QueryTarget> decode_as = std::nullopt);
};

struct RunConfig {
  Protocol protocol = Protocol::kB2;
  int m = 2;            // cube side (B2)
  std::size_t n = 0;    // entry count (XOR)
  int entry_bits = 1;   // L
  std::array<QkdModelParams, 3> links{};  // indexed by Link
  AdversarySpec adversary;
  std::uint64_t seed = 0;

  QkdModelParams& link(Link l) { return links[static_cast<std::size_t>(l)]; }
  const QkdModelParams& link(Link l) const { return links[static_cast<std::size_t>(l)]; }

  void validate() const;
  std::size_t database_size() const;
  std::size_t query_bits() const;
  // Both answer directions carry this many bits (all planes).
  std::size_t answer_bits() const;
  // Key length requested on each user link.
  std::size_t user_key_bits() const;
  // Key length requested on the data-centre link.
  std::size_t dc_key_bits() const;
};

// Pinned randomness. Anything left empty is drawn from the RandomSource.
struct RunInputs {
  std::optional<BitVector> user_randomness;
  std::array<std::optional<KeyPairOutcome>, 3> keys{};  // indexed by Link
};

enum class Outcome { kAborted, kDecoded };

struct RunRecord {
  std::uint64_t trial = 0;
  Protocol protocol = Protocol::kB2;
  int m = 0;
  std::size_t n = 0;
  int entry_bits = 1;
  std::string adversary = "none";

  Outcome outcome = Outcome::kAborted;
  std::optional<BitVector> decoded;

  BitVector x;  // encoded target
  BitVector w;  // planes concatenated

  // user
  std::optional<BitVector> r, q1, q2, a1_tilde, a2_tilde, s2, s4;
  // data centre 1
  std::optional<BitVector> q1_tilde, a1, s1, s5;
  // data centre 2
  std::optional<BitVector> q2_tilde, a2, s3, s6;
  // eavesdropper
  std::optional<BitVector> c_q1, c_q2, c_a1, c_a2;
  std::array<std::optional<BitVector>, 3> leaks{};  // indexed by Link

  // Names of the steps that actually executed, in order.
  std::vector<std::string> steps;
};

BitVector encode_target(const QueryTarget& x, const RunConfig& cfg);
QueryTarget decode_target(const BitVector& bits, Protocol protocol, int m);
// The value an honest run must decode to: w_x (B2) or ⊕_x i_x w_x (XOR),
// one bit per plane.
BitVector expected_output(const RunRecord& record);
bool decode_correct(const RunRecord& record);

KeyHalves user_halves(const BitVector& key);
KeyHalves dc_halves(const BitVector& key);

// Slices per-plane CDS keys from a data-centre key: plane p uses bits
// [p·(9m+10), (p+1)·(9m+10)) in the CdsKeyLayout order.
std::vector<b2::CdsKey> derive_cds_from_key(const BitVector& key, int m, int entry_bits);

RunRecord run_protocol(const RunConfig& cfg, const Database& w, const QueryTarget& x,
                       RandomSource& rng, const RunInputs& inputs = {});

struct TrialInputs {
  Database w;
  QueryTarget x;
};
using InputGenerator = std::function<TrialInputs(std::uint64_t trial, RandomSource& rng)>;

// Trial t draws from SeededRng::ForTrial(cfg.seed, t): first its inputs, then
// the run. Records are returned in trial order.
RunRecord run_trial(const RunConfig& cfg, std::uint64_t trial, const InputGenerator& inputs);
std::vector<RunRecord> run_batch(const RunConfig& cfg, std::uint64_t trials,
                                 const InputGenerator& inputs);
InputGenerator fixed_inputs(Database w, QueryTarget x);
InputGenerator random_inputs(const RunConfig& cfg);

enum class Party { kUserEve, kDc1Eve, kDc2Eve, kEve };
std::string_view party_name(Party p);
Party parse_party(std::string_view name);

struct View {
  std::vector<std::pair<std::string, std::optional<BitVector>>> fields;

  const std::optional<BitVector>* find(std::string_view name) const;
  std::size_t present_count() const;
  // Canonical string form; equal views serialize identically.
  std::string serialize() const;
  View restrict_to(const std::vector<std::string>& names) const;
};

View view_of(const RunRecord& record, Party party);

}  // namespace qspir
