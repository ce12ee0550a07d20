#include "qspir/transcript.h"

#include <cstdio>
#include <stdexcept>

#include "qspir/version.h"

namespace qspir {

namespace {

using Field = std::optional<BitVector> RunRecord::*;

struct NamedField {
  const char* name;
  Field field;
};

constexpr NamedField kUserFields[] = {
    {"r", &RunRecord::r},           {"q1", &RunRecord::q1}, {"q2", &RunRecord::q2},
    {"a1_tilde", &RunRecord::a1_tilde}, {"a2_tilde", &RunRecord::a2_tilde},
    {"s2", &RunRecord::s2},         {"s4", &RunRecord::s4},
};
constexpr NamedField kDc1Fields[] = {
    {"q1_tilde", &RunRecord::q1_tilde}, {"a1", &RunRecord::a1},
    {"s1", &RunRecord::s1}, {"s5", &RunRecord::s5},
};
constexpr NamedField kDc2Fields[] = {
    {"q2_tilde", &RunRecord::q2_tilde}, {"a2", &RunRecord::a2},
    {"s3", &RunRecord::s3}, {"s6", &RunRecord::s6},
};
constexpr NamedField kEveFields[] = {
    {"c_q1", &RunRecord::c_q1}, {"c_q2", &RunRecord::c_q2},
    {"c_a1", &RunRecord::c_a1}, {"c_a2", &RunRecord::c_a2},
};

template <std::size_t N>
Json group_to_json(const RunRecord& rec, const NamedField (&fields)[N]) {
  Json j = Json::object();
  for (const auto& f : fields) j[f.name] = bits_to_json(rec.*(f.field));
  return j;
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <std::size_t N>
void group_from_json(const Json& j, const char* group, RunRecord& rec,
                     const NamedField (&fields)[N]) {
  const Json& g = member(j, group);
  for (const auto& f : fields) {
    rec.*(f.field) = bits_from_json(member(g, f.name), std::string(group) + "." + f.name);
  }
}

BitVector required_bits(const Json& j, const char* key) {
  auto v = bits_from_json(member(j, key), key);
  if (!v) throw std::invalid_argument(std::string("field '") + key + "' may not be absent");
  return *v;
}

}  // namespace

Json bits_to_json(const std::optional<BitVector>& v) {
  return v ? Json(v->to_hex()) : Json(std::string(kAbsent));
}

std::optional<BitVector> bits_from_json(const Json& j, std::string_view field) {
  if (!j.is_string()) {
    throw std::invalid_argument("field '" + std::string(field) + "' must be a string");
  }
  const auto& s = j.get_ref<const std::string&>();
  if (s == kAbsent) return std::nullopt;
  try {
    return BitVector::FromHex(s);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("field '" + std::string(field) + "': " + e.what());
  }
}

Json record_to_json(const RunRecord& rec) {
  Json j;
  j["type"] = "run";
  j["trial"] = rec.trial;
  j["protocol"] = protocol_name(rec.protocol);
  j["m"] = rec.m;
  j["n"] = rec.n;
  j["entry_bits"] = rec.entry_bits;
  j["adversary"] = rec.adversary;
  j["outcome"] = rec.outcome == Outcome::kDecoded ? "decoded" : "aborted";
  j["decoded"] = bits_to_json(rec.decoded);
  j["x"] = rec.x.to_hex();
  j["w"] = rec.w.to_hex();
  j["user"] = group_to_json(rec, kUserFields);
  j["dc1"] = group_to_json(rec, kDc1Fields);
  j["dc2"] = group_to_json(rec, kDc2Fields);
  Json eve = group_to_json(rec, kEveFields);
  Json leaks = Json::object();
  for (Link l : kAllLinks) leaks[std::string(link_name(l))] = bits_to_json(rec.leaks[static_cast<std::size_t>(l)]);
  eve["leaks"] = std::move(leaks);
  j["eve"] = std::move(eve);
  j["steps"] = rec.steps;
  return j;
}

RunRecord record_from_json(const Json& j) {
  if (member(j, "type") != "run") throw std::invalid_argument("expected a run record");
  RunRecord rec;
  try {
    rec.trial = member(j, "trial").get<std::uint64_t>();
    rec.protocol = parse_protocol(member(j, "protocol").get<std::string>());
    rec.m = member(j, "m").get<int>();
    rec.n = member(j, "n").get<std::size_t>();
    rec.entry_bits = member(j, "entry_bits").get<int>();
    rec.adversary = member(j, "adversary").get<std::string>();
    const auto outcome = member(j, "outcome").get<std::string>();
    if (outcome != "decoded" && outcome != "aborted") {
      throw std::invalid_argument("outcome must be 'decoded' or 'aborted'");
    }
    rec.outcome = outcome == "decoded" ? Outcome::kDecoded : Outcome::kAborted;
    for (const auto& s : member(j, "steps")) rec.steps.push_back(s.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad record field: ") + e.what());
  }
  rec.decoded = bits_from_json(member(j, "decoded"), "decoded");
  if ((rec.outcome == Outcome::kDecoded) != rec.decoded.has_value()) {
    throw std::invalid_argument("decoded value must be present exactly when outcome is 'decoded'");
  }
  rec.x = required_bits(j, "x");
  rec.w = required_bits(j, "w");
  group_from_json(j, "user", rec, kUserFields);
  group_from_json(j, "dc1", rec, kDc1Fields);
  group_from_json(j, "dc2", rec, kDc2Fields);
  group_from_json(j, "eve", rec, kEveFields);
  const Json& leaks = member(member(j, "eve"), "leaks");
  for (Link l : kAllLinks) {
    const std::string name(link_name(l));
    rec.leaks[static_cast<std::size_t>(l)] = bits_from_json(member(leaks, name.c_str()), "eve.leaks." + name);
  }
  if (rec.entry_bits < 1 || rec.w.size() != rec.n * static_cast<std::size_t>(rec.entry_bits)) {
    throw std::invalid_argument("database length does not match n and entry_bits");
  }
  if (rec.protocol == Protocol::kB2) {
    b2::validate_side(rec.m);
    if (rec.n != static_cast<std::size_t>(rec.m) * rec.m * rec.m) {
      throw std::invalid_argument("n must equal m^3 for b2 records");
    }
  }
  decode_target(rec.x, rec.protocol, rec.m);
  return rec;
}

std::string config_digest(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json transcript_header(const Json& config, std::uint64_t seed) {
  Json h;
  h["type"] = "header";
  h["version"] = kVersion;
  h["seed"] = seed;
  h["config_digest"] = config_digest(config);
  h["config"] = config;
  return h;
}

void write_line(std::ostream& out, const Json& j) {
  out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict) << '\n';
}

Json read_transcript(std::istream& in, const std::function<void(RunRecord&&)>& sink) {
  std::string line;
  std::size_t lineno = 0;
  Json header;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw TranscriptError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!have_header) {
      if (!j.is_object() || j.value("type", "") != "header") {
        throw TranscriptError(lineno, "transcript must start with a header line");
      }
      header = std::move(j);
      have_header = true;
      continue;
    }
    RunRecord rec;
    try {
      rec = record_from_json(j);
    } catch (const std::invalid_argument& e) {
      throw TranscriptError(lineno, e.what());
    }
    sink(std::move(rec));
  }
  if (!have_header) throw TranscriptError(lineno, "empty transcript");
  return header;
}

}  // namespace qspir
