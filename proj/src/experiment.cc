#include "qspir/experiment.h"

#include <set>

namespace qspir {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

void check_keys(const Json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where.empty() ? "config" : where, "must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(where.empty() ? key : where + "." + key, "unknown field");
  }
}

std::string path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

double probability(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "must be a number");
  const double p = j.get<double>();
  if (!(p >= 0.0 && p <= 1.0)) fail(field, "must lie in [0, 1]");
  return p;
}

std::int64_t integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "must be an integer");
  return j.get<std::int64_t>();
}

BitVector hex_bits(const Json& j, const std::string& field, std::size_t expected) {
  if (!j.is_string()) fail(field, "must be a hex bit vector string");
  BitVector v;
  try {
    v = BitVector::FromHex(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  }
  if (v.size() != expected) {
    fail(field, "expected " + std::to_string(expected) + " bits, got " + std::to_string(v.size()));
  }
  return v;
}

bool is_random(const Json& j) { return j.is_string() && j.get<std::string>() == "random"; }

QueryTarget parse_target(const Json& j, const RunConfig& cfg, const std::string& field) {
  if (cfg.protocol == Protocol::kB2) {
    if (!j.is_array() || j.size() != 3) fail(field, "must be a cube index [x1, x2, x3]");
    b2::CubeIndex x;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto c = integer(j[i], field + "[" + std::to_string(i) + "]");
      if (c < 1 || c > cfg.m) fail(field, "coordinates must lie in 1.." + std::to_string(cfg.m));
      x.coord[i] = static_cast<int>(c);
    }
    return x;
  }
  if (j.is_number_integer()) {
    const auto k = j.get<std::int64_t>();
    if (k < 1 || static_cast<std::size_t>(k) > cfg.n) {
      fail(field, "entry number must lie in 1.." + std::to_string(cfg.n));
    }
    return xorp::SelectorVector{BitVector::Unit(cfg.n, static_cast<std::size_t>(k - 1))};
  }
  return xorp::SelectorVector{hex_bits(j, field, cfg.n)};
}

InputSpec parse_input(const Json& j, const RunConfig& cfg, const std::string& where) {
  check_keys(j, where, {"database", "index"});
  InputSpec in;
  if (j.contains("database") && !is_random(j["database"])) {
    const auto bits = hex_bits(j["database"], path(where, "database"),
                               cfg.database_size() * static_cast<std::size_t>(cfg.entry_bits));
    in.database = Database::Unflatten(bits, cfg.entry_bits);
  }
  if (j.contains("index") && !is_random(j["index"])) {
    in.target = parse_target(j["index"], cfg, path(where, "index"));
  }
  return in;
}

AdversarySpec parse_adversary(const Json& j, const RunConfig& cfg) {
  if (!j.is_object() || !j.contains("role") || !j["role"].is_string()) {
    fail("adversary.role", "must be one of none, dishonest_user, dishonest_dc");
  }
  const auto role = j["role"].get<std::string>();
  if (role == "none") {
    check_keys(j, "adversary", {"role"});
    return {};
  }
  if (role == "dishonest_user") {
    check_keys(j, "adversary", {"role", "q1", "q2", "decode_as"});
    const std::size_t qlen = cfg.query_bits();
    std::optional<BitVector> q1, q2;
    for (const char* name : {"q1", "q2"}) {
      const std::string field = std::string("adversary.") + name;
      if (!j.contains(name)) fail(field, "required for a dishonest user");
      if (!is_random(j[name])) (name[1] == '1' ? q1 : q2) = hex_bits(j[name], field, qlen);
    }
    DishonestUser user;
    user.queries = [q1, q2, qlen](RandomSource& rng) {
      BitVector a = q1 ? *q1 : rng.bits(qlen);
      BitVector b = q2 ? *q2 : rng.bits(qlen);
      return std::make_pair(std::move(a), std::move(b));
    };
    if (j.contains("decode_as")) user.decode_as = parse_target(j["decode_as"], cfg, "adversary.decode_as");
    return AdversarySpec{std::move(user)};
  }
  if (role == "dishonest_dc") {
    check_keys(j, "adversary", {"role", "which", "flip", "answer"});
    DishonestDc dc;
    if (!j.contains("which")) fail("adversary.which", "required for a dishonest data centre");
    const auto which = integer(j["which"], "adversary.which");
    if (which != 1 && which != 2) fail("adversary.which", "must be 1 or 2");
    dc.which = static_cast<int>(which);
    const std::size_t alen = cfg.answer_bits();
    if (j.contains("flip") == j.contains("answer")) {
      fail("adversary", "give exactly one of 'flip' or 'answer'");
    }
    if (j.contains("flip")) {
      const auto mask = hex_bits(j["flip"], "adversary.flip", alen);
      dc.answer = [mask](const BitVector&, const BitVector& honest) { return honest ^ mask; };
    } else {
      const auto fixed = hex_bits(j["answer"], "adversary.answer", alen);
      dc.answer = [fixed](const BitVector&, const BitVector&) { return fixed; };
    }
    return AdversarySpec{std::move(dc)};
  }
  fail("adversary.role", "unknown role '" + role + "'");
}

}  // namespace

ExperimentConfig parse_experiment(const Json& j) {
  check_keys(j, "", {"protocol", "m", "n", "entry_bits", "links", "adversary", "inputs", "database",
                     "index", "seed", "trials", "eps_cor", "eps"});
  ExperimentConfig out;
  out.source = j;
  RunConfig& cfg = out.run;

  if (!j.contains("protocol") || !j["protocol"].is_string()) fail("protocol", "must be \"b2\" or \"xor\"");
  try {
    cfg.protocol = parse_protocol(j["protocol"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail("protocol", e.what());
  }
  if (cfg.protocol == Protocol::kB2) {
    if (!j.contains("m")) fail("m", "required for b2");
    if (j.contains("n")) fail("n", "b2 configs give the cube side m instead");
    const auto m = integer(j["m"], "m");
    if (m < b2::kMinSide || m > b2::kMaxSide) {
      fail("m", "must lie in " + std::to_string(b2::kMinSide) + ".." + std::to_string(b2::kMaxSide));
    }
    cfg.m = static_cast<int>(m);
  } else {
    if (!j.contains("n")) fail("n", "required for xor");
    if (j.contains("m")) fail("m", "xor configs give the entry count n instead");
    const auto n = integer(j["n"], "n");
    if (n < 1) fail("n", "must be at least 1");
    cfg.n = static_cast<std::size_t>(n);
  }
  if (j.contains("entry_bits")) {
    const auto l = integer(j["entry_bits"], "entry_bits");
    if (l < 1 || l > 4096) fail("entry_bits", "must lie in 1..4096");
    cfg.entry_bits = static_cast<int>(l);
  }
  if (j.contains("links")) {
    const Json& links = j["links"];
    check_keys(links, "links", {"u_d1", "u_d2", "d1_d2"});
    for (Link l : kAllLinks) {
      const std::string name(link_name(l));
      if (!links.contains(name)) continue;
      const std::string where = "links." + name;
      const Json& lj = links[name];
      check_keys(lj, where, {"p_abort", "p_mismatch", "p_leak"});
      auto& p = cfg.link(l);
      if (lj.contains("p_abort")) p.p_abort = probability(lj["p_abort"], where + ".p_abort");
      if (lj.contains("p_mismatch")) p.p_mismatch = probability(lj["p_mismatch"], where + ".p_mismatch");
      if (lj.contains("p_leak")) p.p_leak = probability(lj["p_leak"], where + ".p_leak");
    }
  }
  if (j.contains("adversary")) cfg.adversary = parse_adversary(j["adversary"], cfg);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("trials")) {
    const auto t = integer(j["trials"], "trials");
    if (t < 1) fail("trials", "must be at least 1");
    out.trials = static_cast<std::uint64_t>(t);
  }
  for (const char* name : {"eps_cor", "eps"}) {
    if (!j.contains(name)) continue;
    const double v = probability(j[name], name);
    (name[3] == '_' ? out.eps_cor : out.eps) = v;
  }

  if (j.contains("inputs")) {
    if (j.contains("database") || j.contains("index")) {
      fail("inputs", "give either 'inputs' or top-level 'database'/'index', not both");
    }
    const Json& list = j["inputs"];
    if (!list.is_array() || list.empty()) fail("inputs", "must be a non-empty array");
    out.inputs.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.inputs.push_back(parse_input(list[i], cfg, "inputs[" + std::to_string(i) + "]"));
    }
  } else {
    Json single = Json::object();
    if (j.contains("database")) single["database"] = j["database"];
    if (j.contains("index")) single["index"] = j["index"];
    out.inputs = {parse_input(single, cfg, "")};
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return out;
}

InputGenerator ExperimentConfig::generator() const {
  return [inputs = inputs, cfg = run](std::uint64_t trial, RandomSource& rng) {
    const InputSpec& spec = inputs[trial % inputs.size()];
    if (spec.database && spec.target) return TrialInputs{*spec.database, *spec.target};
    TrialInputs in;
    in.w = spec.database ? *spec.database
                         : Database::Random(rng, cfg.database_size(), cfg.entry_bits);
    if (spec.target) {
      in.x = *spec.target;
    } else {
      const auto n = cfg.database_size();
      if (cfg.protocol == Protocol::kB2) {
        in.x = b2::CubeIndex::FromFlat(rng.below(n), cfg.m);
      } else {
        in.x = xorp::SelectorVector{BitVector::Unit(n, rng.below(n))};
      }
    }
    return in;
  };
}

}  // namespace qspir
