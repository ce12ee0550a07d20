#include "qspir/privacy_analyzer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace qspir::analysis {

__extension__ typedef unsigned __int128 Wide;

// ---- distributions --------------------------------------------------------

Distribution Distribution::FromProbabilities(std::map<std::string, double> probs) {
  double sum = 0.0;
  for (const auto& [k, p] : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("negative or non-finite probability");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("distribution is not normalized");
  Distribution d;
  d.probs_ = std::move(probs);
  return d;
}

Distribution Distribution::FromCounts(std::map<std::string, std::uint64_t> counts) {
  Distribution d;
  for (const auto& [k, c] : counts) d.total_ += c;
  if (d.total_ == 0) throw std::invalid_argument("distribution has no mass");
  for (const auto& [k, c] : counts) d.probs_[k] = static_cast<double>(c) / static_cast<double>(d.total_);
  d.counts_ = std::move(counts);
  return d;
}

Distribution Distribution::PointMass(const std::string& outcome) { return FromCounts({{outcome, 1}}); }

double Distribution::probability(const std::string& outcome) const {
  const auto it = probs_.find(outcome);
  return it == probs_.end() ? 0.0 : it->second;
}

std::size_t Distribution::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(probs_.begin(), probs_.end(), [](const auto& kv) { return kv.second > 0.0; }));
}

double tv_distance(const Distribution& p, const Distribution& q) {
  if (p.probabilities().empty() || q.probabilities().empty()) {
    throw std::invalid_argument("tv_distance of an empty distribution");
  }
  std::set<std::string> keys;
  for (const auto& kv : p.probabilities()) keys.insert(kv.first);
  for (const auto& kv : q.probabilities()) keys.insert(kv.first);
  if (p.count_backed() && q.count_backed()) {
    // Σ |c_p·N_q − c_q·N_p| / (2·N_p·N_q), in integers.
    Wide num = 0;
    for (const auto& k : keys) {
      const auto cp = p.counts().count(k) ? p.counts().at(k) : 0;
      const auto cq = q.counts().count(k) ? q.counts().at(k) : 0;
      const Wide a = static_cast<Wide>(cp) * q.total();
      const Wide b = static_cast<Wide>(cq) * p.total();
      num += a > b ? a - b : b - a;
    }
    if (num == 0) return 0.0;
    const long double den = 2.0L * static_cast<long double>(p.total()) * static_cast<long double>(q.total());
    return static_cast<double>(static_cast<long double>(num) / den);
  }
  double sum = 0.0;
  for (const auto& k : keys) sum += std::fabs(p.probability(k) - q.probability(k));
  return 0.5 * sum;
}

// ---- view distributions ---------------------------------------------------

namespace {

std::string view_key(const RunRecord& rec, Party party, const std::vector<std::string>& fields) {
  View v = view_of(rec, party);
  if (!fields.empty()) v = v.restrict_to(fields);
  return v.serialize();
}

}  // namespace

Distribution view_distribution(const RunConfig& cfg, const Database& w, const QueryTarget& x,
                               Party party, const std::vector<std::string>& fields,
                               const RunInputs& fixed, const DistributionOptions& options) {
  std::map<std::string, std::uint64_t> counts;
  if (!options.exact) {
    if (options.samples == 0) throw std::invalid_argument("sampling mode needs a sample count");
    for (std::uint64_t i = 0; i < options.samples; ++i) {
      SeededRng rng = SeededRng::ForTrial(options.seed, i);
      ++counts[view_key(run_protocol(cfg, w, x, rng, fixed), party, fields)];
    }
    return Distribution::FromCounts(std::move(counts));
  }
  int bits = 0;
  try {
    EnumeratingSource probe(0);
    run_protocol(cfg, w, x, probe, fixed);
    bits = probe.bits_consumed();
  } catch (const NotEnumerable& e) {
    throw EnumerationTooLarge(std::string("randomness cannot be enumerated exactly (") + e.what() +
                              "); use sampling mode");
  }
  if (bits > kMaxEnumerationBits) {
    throw EnumerationTooLarge("run consumes " + std::to_string(bits) + " random bits, more than 2^" +
                              std::to_string(kMaxEnumerationBits) +
                              " states; use sampling mode");
  }
  for (std::uint64_t state = 0; state < (std::uint64_t{1} << bits); ++state) {
    EnumeratingSource src(state);
    const auto rec = run_protocol(cfg, w, x, src, fixed);
    if (src.bits_consumed() != bits) {
      throw EnumerationTooLarge("randomness consumption depends on the drawn values; use sampling mode");
    }
    ++counts[view_key(rec, party, fields)];
  }
  return Distribution::FromCounts(std::move(counts));
}

// ---- affine systems -------------------------------------------------------

BitVector AffineSystem::evaluate(const BitVector& keys, const BitVector& w) const {
  return key_matrix.multiply(keys) ^ db_matrix.multiply(w) ^ constant;
}

bool AffineSystem::indistinguishable(const BitVector& w, const BitVector& w2) const {
  return colspace_member(key_matrix, db_matrix.multiply(w ^ w2));
}

namespace {

int wrap(int v, int m) { return ((v - 1) % m + m) % m + 1; }

bool member_of(b2::SubsetMask s, int j) { return (s >> (j - 1)) & 1U; }

void mark_subcube(gf2::Matrix& d, std::size_t row, std::array<b2::SubsetMask, 3> s, int m) {
  for (int a = 1; a <= m; ++a) {
    if (!member_of(s[0], a)) continue;
    for (int b = 1; b <= m; ++b) {
      if (!member_of(s[1], b)) continue;
      for (int c = 1; c <= m; ++c) {
        if (member_of(s[2], c)) d.flip(row, static_cast<std::size_t>(((a - 1) * m + (b - 1)) * m + (c - 1)));
      }
    }
  }
}

// Rows of one data centre's answer, starting at `base`.
void add_answer_rows(gf2::Matrix& keys, gf2::Matrix& db, std::size_t base, const b2::Query& q,
                     int m, bool second) {
  const b2::CdsKeyLayout layout(m);
  const auto& own = second ? b2::kDc2Sigmas : b2::kDc1Sigmas;
  const auto& other = second ? b2::kDc1Sigmas : b2::kDc2Sigmas;
  mark_subcube(db, base, q.sets, m);
  if (second) {
    for (int sigma = 0; sigma < 7; ++sigma) keys.flip(base, layout.t(sigma));  // T^111 = ⊕ others
  } else {
    keys.flip(base, layout.t(b2::k000));
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 1; j <= m; ++j) {
      const std::size_t row = base + 1 + static_cast<std::size_t>(i * m + j - 1);
      auto sets = q.sets;
      sets[i] ^= b2::SubsetMask{1} << (j - 1);
      mark_subcube(db, row, sets, m);
      keys.flip(row, layout.y(own[i], wrap(j - q.displacement[i], m)));
      keys.flip(row, layout.t(own[i]));
      if (second) keys.flip(row, layout.z(i + 1, j));
    }
    const std::size_t cds_row = base + 1 + static_cast<std::size_t>(3 * m + i);
    for (int j = 1; j <= m; ++j) {
      if (member_of(q.sets[i], j)) keys.flip(cds_row, layout.z(i + 1, j));
    }
    keys.flip(cds_row, layout.u(i + 1));
    keys.flip(base + 4 + static_cast<std::size_t>(3 * m + i), layout.y(other[i], wrap(q.displacement[i], m)));
  }
}

}  // namespace

AffineSystem build_affine_system(const b2::Query& q1, const b2::Query& q2, int m) {
  q1.validate(m);
  q2.validate(m);
  const std::size_t per = b2::answer_bits(m);
  const std::size_t n = static_cast<std::size_t>(m) * m * m;
  AffineSystem sys{gf2::Matrix(2 * per, b2::cds_key_bits(m)), gf2::Matrix(2 * per, n), BitVector(2 * per)};
  add_answer_rows(sys.key_matrix, sys.db_matrix, 0, q1, m, false);
  add_answer_rows(sys.key_matrix, sys.db_matrix, per, q2, m, true);
  return sys;
}

AffineSystem xor_affine_system(const BitVector& q1, const BitVector& q2) {
  if (q1.size() != q2.size()) throw std::invalid_argument("query lengths differ");
  AffineSystem sys{gf2::Matrix(2, 1), gf2::Matrix(2, q1.size()), BitVector(2)};
  sys.key_matrix.set(0, 0, true);
  sys.key_matrix.set(1, 0, true);
  sys.db_matrix.row(0) = q1;
  sys.db_matrix.row(1) = q2;
  return sys;
}

std::vector<BitVector> recoverable_functionals(const AffineSystem& sys) {
  const std::size_t kc = sys.key_matrix.cols();
  const std::size_t dc = sys.db_matrix.cols();
  if (sys.key_matrix.rows() != sys.db_matrix.rows()) throw std::invalid_argument("row counts differ");
  // Echelon form of [M | D] with key columns leading: rows whose lead lies
  // in the database part span the left kernel of M mapped through D.
  gf2::Basis rows(kc + dc);
  for (std::size_t r = 0; r < sys.key_matrix.rows(); ++r) {
    BitVector v = sys.key_matrix.row(r);
    v.append(sys.db_matrix.row(r));
    rows.insert(std::move(v));
  }
  gf2::Basis functionals(dc);
  for (const auto& v : rows.vectors()) {
    if (v.first_set() >= kc) functionals.insert(v.slice(kc, dc));
  }
  return functionals.vectors();
}

ComplianceReport affine_compliance(const AffineSystem& sys) {
  ComplianceReport rep;
  rep.recoverable = recoverable_functionals(sys);
  const std::size_t n = sys.db_matrix.cols();
  if (rep.recoverable.empty()) {
    rep.compliant = true;
    rep.witness = 0;
    return rep;
  }
  const BitVector& g = rep.recoverable.front();
  if (rep.recoverable.size() == 1 && g.popcount() == 1) {
    rep.compliant = true;
    rep.witness = g.first_set();
    return rep;
  }
  const std::size_t candidate = g.first_set();
  std::size_t other = n;
  if (rep.recoverable.size() > 1) {
    other = rep.recoverable[1].first_set();
  } else {
    for (std::size_t k = candidate + 1; k < n; ++k) {
      if (g[k]) {
        other = k;
        break;
      }
    }
  }
  rep.offending = std::make_pair(BitVector(n), BitVector::Unit(n, other));
  return rep;
}

ComplianceReport db_privacy_check(const b2::Query& q1, const b2::Query& q2, int m) {
  return affine_compliance(build_affine_system(q1, q2, m));
}

ComplianceReport xor_privacy_check(const BitVector& q1, const BitVector& q2) {
  ComplianceReport rep;
  rep.recoverable = recoverable_functionals(xor_affine_system(q1, q2));
  const BitVector selector = q1 ^ q2;
  rep.compliant = true;
  rep.witness_selector = selector;
  if (selector.popcount() == 1) rep.witness = selector.first_set();
  return rep;
}

// ---- exact user privacy via cosets ----------------------------------------

namespace {

struct ViewBits {
  std::string presence;
  BitVector bits;
};

ViewBits flatten_view(const View& v) {
  ViewBits out;
  for (const auto& [name, value] : v.fields) {
    out.presence += value ? '1' : '0';
    if (value) out.bits.append(*value);
  }
  return out;
}

std::vector<BitVector> all_user_randomness(const RunConfig& cfg) {
  std::vector<BitVector> out;
  if (cfg.protocol == Protocol::kXor) {
    if (cfg.n > 20) throw EnumerationTooLarge("too many user randomness values to enumerate");
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << cfg.n); ++r) out.push_back(BitVector::FromUint(r, cfg.n));
    return out;
  }
  const int m = cfg.m;
  const std::uint64_t sets = std::uint64_t{1} << (3 * m);
  const std::uint64_t disps = static_cast<std::uint64_t>(m) * m * m;
  if (3 * m > 20 || sets * disps > (std::uint64_t{1} << 22)) {
    throw EnumerationTooLarge("too many user randomness values to enumerate");
  }
  const b2::SubsetMask full = (b2::SubsetMask{1} << m) - 1;
  for (std::uint64_t s = 0; s < sets; ++s) {
    for (std::uint64_t d = 0; d < disps; ++d) {
      b2::UserRandomness r;
      for (int i = 0; i < 3; ++i) r.sets[i] = (s >> (i * m)) & full;
      r.displacement = {static_cast<int>(d / (m * m)) + 1, static_cast<int>((d / m) % m) + 1,
                        static_cast<int>(d % m) + 1};
      out.push_back(b2::encode_randomness(r, m));
    }
  }
  return out;
}

}  // namespace

CosetDistribution coset_view_distribution(const RunConfig& cfg, Party party, const Database& w,
                                          const QueryTarget& x, const KeyPair& dc_keys) {
  if (!cfg.adversary.honest()) throw std::invalid_argument("coset view distribution needs honest parties");
  const std::size_t klen = cfg.user_key_bits();
  const std::size_t pads = 2 * klen;
  SeededRng unused(0);

  auto view_at = [&](const BitVector& r, const BitVector& pad) {
    RunInputs in;
    in.user_randomness = r;
    const BitVector k1 = pad.slice(0, klen);
    const BitVector k2 = pad.slice(klen, klen);
    in.keys[static_cast<std::size_t>(Link::kUserDc1)] = KeyPairOutcome(KeyPair{k1, k1, std::nullopt});
    in.keys[static_cast<std::size_t>(Link::kUserDc2)] = KeyPairOutcome(KeyPair{k2, k2, std::nullopt});
    in.keys[static_cast<std::size_t>(Link::kDc1Dc2)] = KeyPairOutcome(dc_keys);
    return flatten_view(view_of(run_protocol(cfg, w, x, unused, in), party));
  };

  const auto randomness = all_user_randomness(cfg);
  const BitVector zero(pads);
  const ViewBits origin = view_at(randomness.front(), zero);
  std::vector<BitVector> columns;
  columns.reserve(pads);
  for (std::size_t i = 0; i < pads; ++i) columns.push_back(view_at(randomness.front(), BitVector::Unit(pads, i)).bits ^ origin.bits);

  CosetDistribution out;
  out.subspace = gf2::Basis(origin.bits.size());
  for (const auto& c : columns) out.subspace.insert(c);

  SeededRng probe(0x5eed);
  std::map<std::string, std::uint64_t> counts;
  for (std::size_t idx = 0; idx < randomness.size(); ++idx) {
    const BitVector& r = randomness[idx];
    const ViewBits base = view_at(r, zero);
    if (base.presence != origin.presence) throw std::logic_error("view shape depends on user randomness");
    if (idx < 4) {
      for (std::size_t i = 0; i < pads; ++i) {
        if ((view_at(r, BitVector::Unit(pads, i)).bits ^ base.bits) != columns[i]) {
          throw std::logic_error("view is not affine in the pads with a fixed linear part");
        }
      }
    } else {
      const BitVector pad = probe.bits(pads);
      BitVector predicted = base.bits;
      for (std::size_t i = 0; i < pads; ++i) {
        if (pad[i]) predicted ^= columns[i];
      }
      if (view_at(r, pad).bits != predicted) throw std::logic_error("view is not affine in the pads");
    }
    ++counts[out.subspace.reduce(base.bits).to_hex()];
  }
  out.representatives = Distribution::FromCounts(std::move(counts));
  return out;
}

double coset_tv_distance(const CosetDistribution& a, const CosetDistribution& b) {
  if (!(a.subspace == b.subspace)) throw std::invalid_argument("coset distributions over different subspaces");
  return tv_distance(a.representatives, b.representatives);
}

// ---- bounds ---------------------------------------------------------------

double hoeffding_margin(std::uint64_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("margin needs at least one sample");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

SecurityParameters SecurityParameters::FromLinks(const std::array<QkdModelParams, 3>& links) {
  SecurityParameters p;
  for (const auto& l : links) {
    p.eps_cor = std::max(p.eps_cor, l.eps_cor());
    p.eps = std::max(p.eps, l.eps());
  }
  return p;
}

std::array<double, 4> SecurityParameters::spir_targets() const {
  return {3.0 * eps_cor, 2.0 * eps, 2.0 * eps, 4.0 * eps};
}

std::string format_parameter(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

struct Known {
  std::optional<BitVector> value;
  bool leaked = false;
};

void learn(Known& k, std::optional<BitVector> v) {
  if (!k.value && v) {
    k.value = std::move(v);
    k.leaked = true;
  }
}

std::string bits_string(const BitVector& v) { return v.to_string(); }

}  // namespace

std::string view_features(const RunRecord& rec, Party party) {
  const auto& leak_u1 = rec.leaks[static_cast<std::size_t>(Link::kUserDc1)];
  const auto& leak_u2 = rec.leaks[static_cast<std::size_t>(Link::kUserDc2)];
  const auto& leak_dc = rec.leaks[static_cast<std::size_t>(Link::kDc1Dc2)];
  std::string f = rec.outcome == Outcome::kAborted ? "A" : "L";
  f += leak_u1 ? '1' : '0';
  f += leak_u2 ? '1' : '0';
  f += leak_dc ? '1' : '0';
  if (party == Party::kUserEve) f += rec.decoded ? "|O" + bits_string(*rec.decoded) : "|O-";
  if (rec.outcome == Outcome::kAborted) return f;

  Known q1, q2, a1, a2, cds;
  switch (party) {
    case Party::kUserEve:
      q1.value = rec.q1;
      q2.value = rec.q2;
      a1.value = rec.a1_tilde;
      a2.value = rec.a2_tilde;
      break;
    case Party::kDc1Eve:
      q1.value = rec.q1_tilde;
      a1.value = rec.a1;
      cds.value = rec.s5;
      break;
    case Party::kDc2Eve:
      q2.value = rec.q2_tilde;
      a2.value = rec.a2;
      cds.value = rec.s6;
      break;
    case Party::kEve:
      break;
  }
  const std::size_t ql = rec.c_q1->size();
  const std::size_t al = rec.c_a1->size();
  if (leak_u1) {
    const auto h = dc_halves(*leak_u1);
    learn(q1, *rec.c_q1 ^ h.dec.slice(0, ql));
    learn(a1, *rec.c_a1 ^ h.enc.slice(0, al));
  }
  if (leak_u2) {
    const auto h = dc_halves(*leak_u2);
    learn(q2, *rec.c_q2 ^ h.dec.slice(0, ql));
    learn(a2, *rec.c_a2 ^ h.enc.slice(0, al));
  }
  if (leak_dc) learn(cds, leak_dc);

  const int planes = rec.entry_bits;
  const int m = rec.m;

  // Index implied by the two queries.
  std::optional<QueryTarget> index;
  if (q1.value && q2.value && (q1.leaked || q2.leaked)) {
    if (rec.protocol == Protocol::kXor) {
      const BitVector sel = *q1.value ^ *q2.value;
      f += "|I" + bits_string(sel);
      index = xorp::SelectorVector{sel};
    } else {
      const auto a = b2::decode_query(*q1.value, m);
      const auto b = b2::decode_query(*q2.value, m);
      f += "|I";
      b2::CubeIndex x;
      bool valid = true;
      for (int i = 0; i < 3; ++i) {
        const auto diff = a.sets[i] ^ b.sets[i];
        const int sum = wrap(a.displacement[i] + b.displacement[i], m);
        f += std::to_string(diff) + "/" + std::to_string(sum) + ",";
        valid = valid && __builtin_popcountll(diff) == 1 && __builtin_ctzll(diff) + 1 == sum;
        x.coord[i] = sum;
      }
      if (valid) index = x;
    }
  }

  // Answer portions with their CDS masks removed.
  auto unmasked = [&](const Known& q, const Known& a, bool second) {
    if (!cds.value || !q.value || !a.value || !(q.leaked || a.leaked || cds.leaked)) return;
    std::string bits;
    if (rec.protocol == Protocol::kXor) {
      for (int p = 0; p < planes; ++p) bits += ((*a.value)[p] ^ (*cds.value)[p]) ? '1' : '0';
    } else {
      const auto keys = derive_cds_from_key(*cds.value, m, planes);
      const std::size_t per = b2::answer_bits(m);
      for (int p = 0; p < planes; ++p) {
        const bool t = (keys[p].t >> (second ? b2::k111 : b2::k000)) & 1U;
        bits += ((*a.value)[p * per] ^ t) ? '1' : '0';
      }
    }
    f += (second ? "|P2" : "|P1") + bits;
  };
  unmasked(q1, a1, false);
  unmasked(q2, a2, true);

  if (party != Party::kUserEve && index && a1.value && a2.value) {
    std::string bits;
    if (rec.protocol == Protocol::kXor) {
      for (int p = 0; p < planes; ++p) bits += ((*a1.value)[p] ^ (*a2.value)[p]) ? '1' : '0';
    } else {
      const std::size_t per = b2::answer_bits(m);
      const auto& x = std::get<b2::CubeIndex>(*index);
      for (int p = 0; p < planes; ++p) {
        const auto d1 = b2::decode_dc1_answer(a1.value->slice(p * per, per), m);
        const auto d2 = b2::decode_dc2_answer(a2.value->slice(p * per, per), m);
        bits += b2::decode(d1, d2, x, m) ? '1' : '0';
      }
    }
    f += "|D" + bits;
  }
  return f;
}

void BoundsAccumulator::add(const RunRecord& rec) {
  ++runs_;
  protocol_ = rec.protocol;
  if (rec.adversary != "none") honest_ = false;
  if (rec.outcome == Outcome::kAborted) ++aborted_;
  if (rec.outcome == Outcome::kDecoded && rec.adversary == "none" && !decode_correct(rec)) ++failures_;

  auto key = std::make_pair(rec.x, rec.w);
  auto it = group_index_.find(key);
  if (it == group_index_.end()) {
    if (groups_.size() >= kMaxGroups) return;
    Group g;
    g.x = rec.x;
    g.w = rec.w;
    g.output = expected_output(rec);
    groups_.push_back(std::move(g));
    it = group_index_.emplace(std::move(key), groups_.size() - 1).first;
  }
  Group& g = groups_[it->second];
  ++g.count;
  for (Party p : {Party::kUserEve, Party::kDc1Eve, Party::kDc2Eve, Party::kEve}) {
    ++g.features[static_cast<std::size_t>(p)][view_features(rec, p)];
  }
}

namespace {

bool within(double empirical, double bound, double margin) {
  return bound == 0.0 ? empirical == 0.0 : empirical <= bound + margin;
}

}  // namespace

BoundCheck BoundsAccumulator::compare(const std::string& name, Party party, Pairing pairing,
                                      double bound) const {
  BoundCheck c;
  c.name = name;
  c.bound = bound;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < groups_.size(); ++a) {
    for (std::size_t b = a + 1; b < groups_.size(); ++b) {
      const Group& ga = groups_[a];
      const Group& gb = groups_[b];
      bool ok = false;
      switch (pairing) {
        case Pairing::kSameDatabase:
          ok = ga.w == gb.w && ga.x != gb.x;
          break;
        case Pairing::kSameOutput:
          ok = ga.x == gb.x && ga.w != gb.w && ga.output == gb.output;
          break;
        case Pairing::kAny:
          ok = true;
          break;
      }
      if (ok) pairs.emplace_back(a, b);
    }
  }
  if (pairs.empty()) {
    c.note = "no pair of input groups matches this definition";
    return c;
  }
  c.applicable = true;
  double worst = -1e300;
  const double alpha = kAlpha / static_cast<double>(pairs.size());
  for (const auto& [a, b] : pairs) {
    const Group& ga = groups_[a];
    const Group& gb = groups_[b];
    const auto p = static_cast<std::size_t>(party);
    const double emp = tv_distance(Distribution::FromCounts(ga.features[p]), Distribution::FromCounts(gb.features[p]));
    const std::uint64_t n = std::min(ga.count, gb.count);
    const double margin = hoeffding_margin(n, alpha);
    const double excess = within(emp, bound, margin) ? emp - bound - margin : 1e300;
    if (excess > worst) {
      worst = excess;
      c.empirical = emp;
      c.margin = margin;
      c.samples = n;
      c.pass = within(emp, bound, margin);
      c.note = "groups " + std::to_string(a) + " vs " + std::to_string(b);
    }
  }
  return c;
}

BoundCheck BoundsAccumulator::correctness(double bound) const {
  BoundCheck c;
  c.name = "correctness";
  c.bound = bound;
  if (runs_ == 0 || !honest_) {
    c.note = runs_ == 0 ? "no runs" : "transcript has adversarial runs";
    return c;
  }
  c.applicable = true;
  c.samples = runs_;
  c.empirical = static_cast<double>(failures_) / static_cast<double>(runs_);
  c.margin = hoeffding_margin(runs_);
  c.pass = within(c.empirical, bound, c.margin);
  c.note = std::to_string(failures_) + " wrong outputs";
  return c;
}

BoundCheck BoundsAccumulator::user_privacy(double bound) const {
  auto a = compare("user_privacy", Party::kDc1Eve, Pairing::kSameDatabase, bound);
  auto b = compare("user_privacy", Party::kDc2Eve, Pairing::kSameDatabase, bound);
  a.note = "dc1: " + a.note;
  b.note = "dc2: " + b.note;
  if (!a.applicable) return a;
  if (!a.pass) return a;
  if (!b.pass) return b;
  return a.empirical - a.margin >= b.empirical - b.margin ? a : b;
}

BoundCheck BoundsAccumulator::db_privacy(double bound) const {
  return compare("db_privacy", Party::kUserEve, Pairing::kSameOutput, bound);
}

BoundCheck BoundsAccumulator::secrecy(double bound) const {
  return compare("secrecy", Party::kEve, Pairing::kAny, bound);
}

BoundsReport BoundsAccumulator::finish(const SecurityParameters& params) const {
  BoundsReport r;
  r.params = params;
  r.runs = runs_;
  r.aborted = aborted_;
  const auto t = params.spir_targets();
  r.checks = {correctness(t[0]), user_privacy(t[1]), db_privacy(t[2]), secrecy(t[3])};
  for (const auto& c : r.checks) r.pass = r.pass && c.pass;
  return r;
}

BoundsReport check_theorem_bounds(const std::vector<RunRecord>& batch, const SecurityParameters& params) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  BoundsAccumulator acc;
  for (const auto& rec : batch) acc.add(rec);
  return acc.finish(params);
}

Json check_to_json(const BoundCheck& c) {
  Json j;
  j["name"] = c.name;
  j["applicable"] = c.applicable;
  j["pass"] = c.pass;
  j["empirical"] = c.empirical;
  j["bound"] = format_parameter(c.bound);
  j["margin"] = c.margin;
  j["samples"] = c.samples;
  j["note"] = c.note;
  return j;
}

Json bounds_report_to_json(const BoundsReport& r) {
  const auto t = r.params.spir_targets();
  Json j;
  j["eps_cor"] = format_parameter(r.params.eps_cor);
  j["eps"] = format_parameter(r.params.eps);
  j["spir_parameters"] = "(" + format_parameter(t[0]) + ", " + format_parameter(t[1]) + ", " +
                         format_parameter(t[2]) + ", " + format_parameter(t[3]) + ")";
  Json targets;
  targets["correctness"] = format_parameter(t[0]);
  targets["user_privacy"] = format_parameter(t[1]);
  targets["db_privacy"] = format_parameter(t[2]);
  targets["secrecy"] = format_parameter(t[3]);
  j["targets"] = std::move(targets);
  j["alpha"] = kAlpha;
  j["runs"] = r.runs;
  j["aborted"] = r.aborted;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(check_to_json(c));
  j["checks"] = std::move(checks);
  j["pass"] = r.pass;
  return j;
}

}  // namespace qspir::analysis
