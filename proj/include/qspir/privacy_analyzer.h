#pragma once

// Executable versions of the security definitions: correctness, user
// privacy, database privacy and protocol secrecy. Small instances are
// checked exactly, either by enumerating randomness or through the GF(2)
// structure of the answers; large batches are compared statistically
// against the bounds for imperfect keys.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qspir/gf2.h"
#include "qspir/orchestrator.h"
#include "qspir/transcript.h"

namespace qspir::analysis {

// Finite distribution over string outcomes. Count-backed distributions
// (from enumeration or sampling) keep exact integer weights so that
// tv_distance between them is exact.
class Distribution {
 public:
  Distribution() = default;
  // Probabilities must be non-negative and sum to 1 within 1e-12.
  static Distribution FromProbabilities(std::map<std::string, double> probs);
  static Distribution FromCounts(std::map<std::string, std::uint64_t> counts);
  static Distribution PointMass(const std::string& outcome);

  double probability(const std::string& outcome) const;
  std::size_t support_size() const;
  bool count_backed() const { return total_ > 0; }
  std::uint64_t total() const { return total_; }
  const std::map<std::string, std::uint64_t>& counts() const { return counts_; }
  const std::map<std::string, double>& probabilities() const { return probs_; }

 private:
  std::map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::map<std::string, double> probs_;
};

// ½ Σ |p(y) − q(y)|.
double tv_distance(const Distribution& p, const Distribution& q);

inline constexpr int kMaxEnumerationBits = 24;

class EnumerationTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DistributionOptions {
  bool exact = true;
  std::uint64_t samples = 0;  // sampling mode
  std::uint64_t seed = 0;
};

// Distribution of view_of(run, party), optionally restricted to `fields`,
// over all randomness not pinned in `fixed`. Exact mode enumerates the
// uniform bit space consumed by the run (at most 2^24 states); randomness
// that is not a power-of-two uniform choice needs sampling mode.
Distribution view_distribution(const RunConfig& cfg, const Database& w, const QueryTarget& x,
                               Party party, const std::vector<std::string>& fields,
                               const RunInputs& fixed, const DistributionOptions& options);

// Answers (DC1 encoding then DC2 encoding) as M·k ⊕ D·w ⊕ c over the free
// CDS key bits k and database bits w.
struct AffineSystem {
  gf2::Matrix key_matrix;
  gf2::Matrix db_matrix;
  BitVector constant;

  BitVector evaluate(const BitVector& keys, const BitVector& w) const;
  // True iff the answer distributions over uniform keys coincide for w, w2.
  bool indistinguishable(const BitVector& w, const BitVector& w2) const;
};

AffineSystem build_affine_system(const b2::Query& q1, const b2::Query& q2, int m);
AffineSystem xor_affine_system(const BitVector& q1, const BitVector& q2);

using gf2::colspace_member;

struct ComplianceReport {
  bool compliant = false;
  // Entry the user may learn (first index when nothing is learned).
  std::optional<std::size_t> witness;
  // XOR protocol: the combination the user learns.
  std::optional<BitVector> witness_selector;
  // Basis of the database functionals the user can recover.
  std::vector<BitVector> recoverable;
  // Non-compliant: two databases equal at the best candidate entry that the
  // user can still tell apart.
  std::optional<std::pair<BitVector, BitVector>> offending;
};

// Functionals φ with φ·w fixed by the answer coset.
std::vector<BitVector> recoverable_functionals(const AffineSystem& sys);
// Compliant iff the recoverable space is {0} or spanned by one unit vector.
ComplianceReport affine_compliance(const AffineSystem& sys);
ComplianceReport db_privacy_check(const b2::Query& q1, const b2::Query& q2, int m);
// Relaxed notion: compliant whenever the user learns one XOR combination,
// which is always the case; the witness selector is q1 ⊕ q2.
ComplianceReport xor_privacy_check(const BitVector& q1, const BitVector& q2);

// Honest-run view distribution of a data-centre coalition with the user-link
// pads left uniform. For fixed user randomness the view is an affine
// function of the pads, so it is uniform on a coset of one subspace V; the
// distribution is the multiset of canonical coset representatives over all
// user randomness.
struct CosetDistribution {
  gf2::Basis subspace{0};
  Distribution representatives;
};

CosetDistribution coset_view_distribution(const RunConfig& cfg, Party party, const Database& w,
                                          const QueryTarget& x, const KeyPair& dc_keys);
// Exact; throws std::invalid_argument if the subspaces differ.
double coset_tv_distance(const CosetDistribution& a, const CosetDistribution& b);

inline constexpr double kAlpha = 1e-3;
// sqrt(ln(2/α) / (2N)).
double hoeffding_margin(std::uint64_t n, double alpha = kAlpha);

struct SecurityParameters {
  double eps_cor = 0.0;
  double eps = 0.0;

  // Worst link.
  static SecurityParameters FromLinks(const std::array<QkdModelParams, 3>& links);
  // (3ε_cor, 2ε, 2ε, 4ε): correctness, user privacy, database privacy,
  // secrecy.
  std::array<double, 4> spir_targets() const;
};

// "%.6g".
std::string format_parameter(double v);

// Discretized view: leak pattern plus whatever the coalition can infer
// with help of leaked keys (index, unmasked parities, decoded value), and
// the user's own output. Without leaks this is constant across inputs with
// equal output, so ideal keys give zero advantage.
std::string view_features(const RunRecord& record, Party party);

struct BoundCheck {
  std::string name;
  double empirical = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  std::uint64_t samples = 0;
  bool applicable = false;
  bool pass = true;
  std::string note;
};

struct BoundsReport {
  SecurityParameters params;
  std::uint64_t runs = 0;
  std::uint64_t aborted = 0;
  std::vector<BoundCheck> checks;
  bool pass = true;
};

// Streams records. Runs are grouped by their (x, w) input; distinguishing
// advantages are estimated between groups.
class BoundsAccumulator {
 public:
  static constexpr std::size_t kMaxGroups = 16;

  void add(const RunRecord& record);
  std::uint64_t runs() const { return runs_; }
  BoundsReport finish(const SecurityParameters& params) const;

  BoundCheck correctness(double bound) const;
  BoundCheck user_privacy(double bound) const;
  BoundCheck db_privacy(double bound) const;
  BoundCheck secrecy(double bound) const;

 private:
  struct Group {
    BitVector x;
    BitVector w;
    BitVector output;
    std::uint64_t count = 0;
    std::array<std::map<std::string, std::uint64_t>, 4> features;  // by Party
  };
  enum class Pairing { kSameDatabase, kSameOutput, kAny };
  BoundCheck compare(const std::string& name, Party party, Pairing pairing, double bound) const;

  std::uint64_t runs_ = 0;
  std::uint64_t aborted_ = 0;
  std::uint64_t failures_ = 0;
  bool honest_ = true;
  Protocol protocol_ = Protocol::kB2;
  std::vector<Group> groups_;
  std::map<std::pair<BitVector, BitVector>, std::size_t> group_index_;
};

BoundsReport check_theorem_bounds(const std::vector<RunRecord>& batch,
                                  const SecurityParameters& params);

Json check_to_json(const BoundCheck& check);
Json bounds_report_to_json(const BoundsReport& report);

}  // namespace qspir::analysis
