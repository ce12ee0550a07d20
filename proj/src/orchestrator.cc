#include "qspir/orchestrator.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qspir {

namespace {

std::size_t round_up_even(std::size_t v) { return v + (v & 1U); }

std::size_t index(Link l) { return static_cast<std::size_t>(l); }

// Key pair roles: s_a goes to the first-named holder.
struct LinkHolders {
  std::optional<BitVector> RunRecord::*a;
  std::optional<BitVector> RunRecord::*b;
};

LinkHolders holders(Link l) {
  switch (l) {
    case Link::kUserDc1:
      return {&RunRecord::s1, &RunRecord::s2};
    case Link::kUserDc2:
      return {&RunRecord::s3, &RunRecord::s4};
    case Link::kDc1Dc2:
      return {&RunRecord::s5, &RunRecord::s6};
  }
  throw std::logic_error("unknown link");
}

}  // namespace

std::string_view protocol_name(Protocol p) { return p == Protocol::kB2 ? "b2" : "xor"; }

Protocol parse_protocol(std::string_view name) {
  if (name == "b2" || name == "B2") return Protocol::kB2;
  if (name == "xor" || name == "XOR") return Protocol::kXor;
  throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

std::string_view link_name(Link link) {
  switch (link) {
    case Link::kUserDc1:
      return "u_d1";
    case Link::kUserDc2:
      return "u_d2";
    case Link::kDc1Dc2:
      return "d1_d2";
  }
  return "?";
}

Database Database::Random(RandomSource& rng, std::size_t n, int entry_bits) {
  Database db;
  for (int p = 0; p < entry_bits; ++p) db.planes.push_back(rng.bits(n));
  return db;
}

Database Database::SinglePlane(BitVector bits) {
  Database db;
  db.planes.push_back(std::move(bits));
  return db;
}

BitVector Database::entry(std::size_t index) const {
  BitVector out(planes.size());
  for (std::size_t p = 0; p < planes.size(); ++p) out.set(p, planes[p].at(index));
  return out;
}

BitVector Database::flatten() const {
  BitVector out;
  for (const auto& p : planes) out.append(p);
  return out;
}

Database Database::Unflatten(const BitVector& bits, int entry_bits) {
  if (entry_bits < 1 || bits.size() % static_cast<std::size_t>(entry_bits) != 0) {
    throw std::invalid_argument("database bits do not divide into planes");
  }
  const std::size_t n = bits.size() / static_cast<std::size_t>(entry_bits);
  Database db;
  for (int p = 0; p < entry_bits; ++p) db.planes.push_back(bits.slice(p * n, n));
  return db;
}

std::string_view AdversarySpec::role_name() const {
  if (std::holds_alternative<DishonestUser>(role)) return "dishonest_user";
  if (const auto* dc = std::get_if<DishonestDc>(&role)) {
    return dc->which == 1 ? "dishonest_dc1" : "dishonest_dc2";
  }
  return "none";
}

AdversarySpec AdversarySpec::FixedQueries(BitVector q1, BitVector q2,
                                          std::optional<QueryTarget> decode_as) {
  DishonestUser user;
  user.queries = [q1 = std::move(q1), q2 = std::move(q2)](RandomSource&) {
    return std::make_pair(q1, q2);
  };
  user.decode_as = std::move(decode_as);
  return AdversarySpec{std::move(user)};
}

void RunConfig::validate() const {
  if (protocol == Protocol::kB2) {
    b2::validate_side(m);
  } else if (n < 1) {
    throw std::invalid_argument("n: XOR protocol needs at least one entry");
  }
  if (entry_bits < 1) throw std::invalid_argument("entry_bits: must be at least 1");
  for (Link l : kAllLinks) {
    try {
      link(l).validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("links." + std::string(link_name(l)) + ": " + e.what());
    }
  }
  if (const auto* user = std::get_if<DishonestUser>(&adversary.role)) {
    if (!user->queries) throw std::invalid_argument("adversary: dishonest user has no queries");
  }
  if (const auto* dc = std::get_if<DishonestDc>(&adversary.role)) {
    if (dc->which != 1 && dc->which != 2) {
      throw std::invalid_argument("adversary.which: must be 1 or 2");
    }
    if (!dc->answer) throw std::invalid_argument("adversary: dishonest data centre has no answer");
  }
}

std::size_t RunConfig::database_size() const {
  if (protocol == Protocol::kB2) {
    b2::validate_side(m);
    return static_cast<std::size_t>(m) * m * m;
  }
  return n;
}

std::size_t RunConfig::query_bits() const {
  return protocol == Protocol::kB2 ? b2::query_bits(m) : n;
}

std::size_t RunConfig::answer_bits() const {
  const auto planes = static_cast<std::size_t>(entry_bits);
  return protocol == Protocol::kB2 ? planes * b2::answer_bits(m) : planes;
}

std::size_t RunConfig::user_key_bits() const { return 2 * std::max(query_bits(), answer_bits()); }

std::size_t RunConfig::dc_key_bits() const {
  const auto planes = static_cast<std::size_t>(entry_bits);
  return round_up_even(protocol == Protocol::kB2 ? planes * b2::cds_key_bits(m) : planes);
}

BitVector encode_target(const QueryTarget& x, const RunConfig& cfg) {
  if (cfg.protocol == Protocol::kB2) {
    const auto* idx = std::get_if<b2::CubeIndex>(&x);
    if (idx == nullptr) throw std::invalid_argument("B2 runs need a cube index target");
    idx->validate(cfg.m);
    BitVector out;
    const auto width = b2::displacement_width(cfg.m);
    for (int c : idx->coord) out.append_uint(static_cast<std::uint64_t>(c - 1), width);
    return out;
  }
  const auto* sel = std::get_if<xorp::SelectorVector>(&x);
  if (sel == nullptr) throw std::invalid_argument("XOR runs need a selector vector target");
  if (sel->bits.size() != cfg.n) throw std::invalid_argument("selector length must equal n");
  return sel->bits;
}

QueryTarget decode_target(const BitVector& bits, Protocol protocol, int m) {
  if (protocol == Protocol::kXor) return xorp::SelectorVector{bits};
  const auto width = b2::displacement_width(m);
  if (bits.size() != 3 * width) throw std::invalid_argument("cube index encoding has wrong length");
  b2::CubeIndex x;
  for (std::size_t i = 0; i < 3; ++i) {
    x.coord[i] = static_cast<int>(bits.read_uint(i * width, width)) + 1;
  }
  x.validate(m);
  return x;
}

BitVector expected_output(const RunRecord& record) {
  const Database db = Database::Unflatten(record.w, record.entry_bits);
  const QueryTarget x = decode_target(record.x, record.protocol, record.m);
  if (record.protocol == Protocol::kB2) {
    return db.entry(std::get<b2::CubeIndex>(x).flat(record.m));
  }
  const auto& sel = std::get<xorp::SelectorVector>(x).bits;
  BitVector out(db.planes.size());
  for (std::size_t p = 0; p < db.planes.size(); ++p) out.set(p, sel.dot(db.planes[p]));
  return out;
}

bool decode_correct(const RunRecord& record) {
  return record.outcome == Outcome::kDecoded && record.decoded &&
         *record.decoded == expected_output(record);
}

KeyHalves user_halves(const BitVector& key) { return split_key(key); }

KeyHalves dc_halves(const BitVector& key) {
  auto halves = split_key(key);
  return {std::move(halves.dec), std::move(halves.enc)};
}

std::vector<b2::CdsKey> derive_cds_from_key(const BitVector& key, int m, int entry_bits) {
  const std::size_t per_plane = b2::cds_key_bits(m);
  const std::size_t need = per_plane * static_cast<std::size_t>(entry_bits);
  if (key.size() < need) {
    throw std::invalid_argument("insufficient key material: CDS keys need " +
                                std::to_string(need) + " bits, key has " +
                                std::to_string(key.size()));
  }
  std::vector<b2::CdsKey> keys;
  keys.reserve(static_cast<std::size_t>(entry_bits));
  for (int p = 0; p < entry_bits; ++p) {
    keys.push_back(b2::cds_key_from_bits(key, static_cast<std::size_t>(p) * per_plane, m));
  }
  return keys;
}

namespace {

BitVector prefix(const BitVector& v, std::size_t len) { return v.slice(0, len); }

BitVector b2_answers(int dc, const BitVector& query_bits, const Database& w,
                     const BitVector& key, const RunConfig& cfg) {
  const auto q = b2::decode_query(query_bits, cfg.m);
  const auto cds = derive_cds_from_key(key, cfg.m, cfg.entry_bits);
  BitVector out;
  for (int p = 0; p < cfg.entry_bits; ++p) {
    const b2::CubeDatabase plane(w.planes[p], cfg.m);
    if (dc == 1) {
      out.append(b2::encode_answer(b2::answer_dc1(q, plane, cds[p]), cfg.m));
    } else {
      out.append(b2::encode_answer(b2::answer_dc2(q, plane, cds[p]), cfg.m));
    }
  }
  return out;
}

BitVector xor_answers(const BitVector& query_bits, const Database& w, const BitVector& key,
                      const RunConfig& cfg) {
  BitVector out(static_cast<std::size_t>(cfg.entry_bits));
  for (int p = 0; p < cfg.entry_bits; ++p) {
    out.set(p, xorp::xor_answer(query_bits, w.planes[p], key[p]));
  }
  return out;
}

BitVector decode_answers(const BitVector& a1, const BitVector& a2, const QueryTarget& x,
                         const RunConfig& cfg) {
  BitVector out(static_cast<std::size_t>(cfg.entry_bits));
  if (cfg.protocol == Protocol::kXor) {
    for (int p = 0; p < cfg.entry_bits; ++p) out.set(p, xorp::xor_decode(a1[p], a2[p]));
    return out;
  }
  const auto& idx = std::get<b2::CubeIndex>(x);
  const std::size_t len = b2::answer_bits(cfg.m);
  for (int p = 0; p < cfg.entry_bits; ++p) {
    const auto d1 = b2::decode_dc1_answer(a1.slice(p * len, len), cfg.m);
    const auto d2 = b2::decode_dc2_answer(a2.slice(p * len, len), cfg.m);
    out.set(p, b2::decode(d1, d2, idx, cfg.m));
  }
  return out;
}

}  // namespace

RunRecord run_protocol(const RunConfig& cfg, const Database& w, const QueryTarget& x,
                       RandomSource& rng, const RunInputs& inputs) {
  cfg.validate();
  if (w.entry_bits() != cfg.entry_bits || w.entries() != cfg.database_size()) {
    throw std::invalid_argument("database shape does not match the run configuration");
  }
  for (const auto& plane : w.planes) {
    if (plane.size() != cfg.database_size()) throw std::invalid_argument("ragged database planes");
  }

  RunRecord rec;
  rec.protocol = cfg.protocol;
  rec.m = cfg.protocol == Protocol::kB2 ? cfg.m : 0;
  rec.n = cfg.database_size();
  rec.entry_bits = cfg.entry_bits;
  rec.adversary = std::string(cfg.adversary.role_name());
  rec.x = encode_target(x, cfg);
  rec.w = w.flatten();

  // Key exchanges.
  for (Link l : kExchangeOrder) {
    const std::size_t len = l == Link::kDc1Dc2 ? cfg.dc_key_bits() : cfg.user_key_bits();
    const auto& pinned = inputs.keys[index(l)];
    KeyPairOutcome outcome = pinned ? *pinned : sample_keypair(len, cfg.link(l), rng);
    rec.steps.push_back("qkd:" + std::string(link_name(l)));
    if (!outcome) {
      rec.outcome = Outcome::kAborted;
      return rec;
    }
    if (outcome->s_a.size() != len || outcome->s_b.size() != len) {
      throw std::invalid_argument("pinned key for link " + std::string(link_name(l)) +
                                  " must be " + std::to_string(len) + " bits");
    }
    const auto h = holders(l);
    rec.*(h.a) = std::move(outcome->s_a);
    rec.*(h.b) = std::move(outcome->s_b);
    rec.leaks[index(l)] = std::move(outcome->eve_leak);
  }

  // Queries.
  const std::size_t qlen = cfg.query_bits();
  QueryTarget decode_for = x;
  if (const auto* user = std::get_if<DishonestUser>(&cfg.adversary.role)) {
    auto [q1, q2] = user->queries(rng);
    if (q1.size() != qlen || q2.size() != qlen) {
      throw std::invalid_argument("adversarial queries must be " + std::to_string(qlen) + " bits");
    }
    rec.q1 = std::move(q1);
    rec.q2 = std::move(q2);
    if (user->decode_as) decode_for = *user->decode_as;
    encode_target(decode_for, cfg);
  } else if (cfg.protocol == Protocol::kB2) {
    const auto r = inputs.user_randomness ? b2::decode_randomness(*inputs.user_randomness, cfg.m)
                                          : b2::random_user_randomness(rng, cfg.m);
    const auto [q1, q2] = b2::derive_queries(std::get<b2::CubeIndex>(x), r, cfg.m);
    rec.r = b2::encode_randomness(r, cfg.m);
    rec.q1 = b2::encode_query(q1, cfg.m);
    rec.q2 = b2::encode_query(q2, cfg.m);
  } else {
    BitVector r = inputs.user_randomness ? *inputs.user_randomness : rng.bits(cfg.n);
    if (r.size() != cfg.n) throw std::invalid_argument("pinned user randomness must be n bits");
    auto qp = xorp::xor_queries(std::get<xorp::SelectorVector>(x), r);
    rec.r = std::move(r);
    rec.q1 = std::move(qp.q1);
    rec.q2 = std::move(qp.q2);
  }
  rec.steps.emplace_back("query");

  // OTP user -> data centres.
  rec.c_q1 = otp(*rec.q1, prefix(user_halves(*rec.s2).enc, qlen));
  rec.q1_tilde = otp(*rec.c_q1, prefix(dc_halves(*rec.s1).dec, qlen));
  rec.c_q2 = otp(*rec.q2, prefix(user_halves(*rec.s4).enc, qlen));
  rec.q2_tilde = otp(*rec.c_q2, prefix(dc_halves(*rec.s3).dec, qlen));
  rec.steps.emplace_back("otp:queries");

  // Answers.
  if (cfg.protocol == Protocol::kB2) {
    rec.a1 = b2_answers(1, *rec.q1_tilde, w, *rec.s5, cfg);
    rec.a2 = b2_answers(2, *rec.q2_tilde, w, *rec.s6, cfg);
  } else {
    rec.a1 = xor_answers(*rec.q1_tilde, w, *rec.s5, cfg);
    rec.a2 = xor_answers(*rec.q2_tilde, w, *rec.s6, cfg);
  }
  if (const auto* dc = std::get_if<DishonestDc>(&cfg.adversary.role)) {
    auto& target = dc->which == 1 ? rec.a1 : rec.a2;
    const auto& received = dc->which == 1 ? *rec.q1_tilde : *rec.q2_tilde;
    BitVector forged = dc->answer(received, *target);
    if (forged.size() != cfg.answer_bits()) {
      throw std::invalid_argument("adversarial answer must be " +
                                  std::to_string(cfg.answer_bits()) + " bits");
    }
    target = std::move(forged);
  }
  rec.steps.emplace_back("answer");

  // OTP data centres -> user.
  const std::size_t alen = cfg.answer_bits();
  rec.c_a1 = otp(*rec.a1, prefix(dc_halves(*rec.s1).enc, alen));
  rec.a1_tilde = otp(*rec.c_a1, prefix(user_halves(*rec.s2).dec, alen));
  rec.c_a2 = otp(*rec.a2, prefix(dc_halves(*rec.s3).enc, alen));
  rec.a2_tilde = otp(*rec.c_a2, prefix(user_halves(*rec.s4).dec, alen));
  rec.steps.emplace_back("otp:answers");

  rec.decoded = decode_answers(*rec.a1_tilde, *rec.a2_tilde, decode_for, cfg);
  rec.outcome = Outcome::kDecoded;
  rec.steps.emplace_back("decode");
  return rec;
}

RunRecord run_trial(const RunConfig& cfg, std::uint64_t trial, const InputGenerator& inputs) {
  SeededRng rng = SeededRng::ForTrial(cfg.seed, trial);
  const TrialInputs in = inputs(trial, rng);
  RunRecord rec = run_protocol(cfg, in.w, in.x, rng);
  rec.trial = trial;
  return rec;
}

std::vector<RunRecord> run_batch(const RunConfig& cfg, std::uint64_t trials,
                                 const InputGenerator& inputs) {
  cfg.validate();
  std::vector<RunRecord> out;
  out.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) out.push_back(run_trial(cfg, t, inputs));
  return out;
}

InputGenerator fixed_inputs(Database w, QueryTarget x) {
  return [w = std::move(w), x = std::move(x)](std::uint64_t, RandomSource&) {
    return TrialInputs{w, x};
  };
}

InputGenerator random_inputs(const RunConfig& cfg) {
  return [cfg](std::uint64_t, RandomSource& rng) {
    TrialInputs in;
    const std::size_t n = cfg.database_size();
    in.w = Database::Random(rng, n, cfg.entry_bits);
    if (cfg.protocol == Protocol::kB2) {
      in.x = b2::CubeIndex::FromFlat(rng.below(n), cfg.m);
    } else {
      in.x = xorp::SelectorVector{BitVector::Unit(n, rng.below(n))};
    }
    return in;
  };
}

std::string_view party_name(Party p) {
  switch (p) {
    case Party::kUserEve:
      return "user_eve";
    case Party::kDc1Eve:
      return "dc1_eve";
    case Party::kDc2Eve:
      return "dc2_eve";
    case Party::kEve:
      return "eve";
  }
  return "?";
}

Party parse_party(std::string_view name) {
  for (Party p : {Party::kUserEve, Party::kDc1Eve, Party::kDc2Eve, Party::kEve}) {
    if (party_name(p) == name) return p;
  }
  throw std::invalid_argument("unknown party '" + std::string(name) + "'");
}

const std::optional<BitVector>* View::find(std::string_view name) const {
  for (const auto& [k, v] : fields) {
    if (k == name) return &v;
  }
  return nullptr;
}

std::size_t View::present_count() const {
  return static_cast<std::size_t>(
      std::count_if(fields.begin(), fields.end(), [](const auto& f) { return f.second.has_value(); }));
}

std::string View::serialize() const {
  std::string out;
  for (const auto& [k, v] : fields) {
    out += k;
    out += '=';
    out += v ? v->to_hex() : std::string("\xE2\x8A\xA5");  // ⊥
    out += ';';
  }
  return out;
}

View View::restrict_to(const std::vector<std::string>& names) const {
  View out;
  for (const auto& name : names) {
    const auto* f = find(name);
    if (f == nullptr) throw std::invalid_argument("view has no field '" + name + "'");
    out.fields.emplace_back(name, *f);
  }
  return out;
}

View view_of(const RunRecord& rec, Party party) {
  View v;
  auto add = [&v](std::string name, const std::optional<BitVector>& value) {
    v.fields.emplace_back(std::move(name), value);
  };
  switch (party) {
    case Party::kUserEve:
      add("x", rec.x);
      add("r", rec.r);
      add("q1", rec.q1);
      add("q2", rec.q2);
      add("a1_tilde", rec.a1_tilde);
      add("a2_tilde", rec.a2_tilde);
      add("s2", rec.s2);
      add("s4", rec.s4);
      break;
    case Party::kDc1Eve:
      add("w", rec.w);
      add("q1_tilde", rec.q1_tilde);
      add("a1", rec.a1);
      add("s1", rec.s1);
      add("s5", rec.s5);
      break;
    case Party::kDc2Eve:
      add("w", rec.w);
      add("q2_tilde", rec.q2_tilde);
      add("a2", rec.a2);
      add("s3", rec.s3);
      add("s6", rec.s6);
      break;
    case Party::kEve:
      break;
  }
  add("c_q1", rec.c_q1);
  add("c_q2", rec.c_q2);
  add("c_a1", rec.c_a1);
  add("c_a2", rec.c_a2);
  for (Link l : kAllLinks) add("leak_" + std::string(link_name(l)), rec.leaks[index(l)]);
  return v;
}

}  // namespace qspir
