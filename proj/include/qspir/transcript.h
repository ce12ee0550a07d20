#pragma once

// Line-delimited JSON transcripts. The first line is a header carrying the
// seed, the experiment config, its digest and the tool version; every other
// line is one run record. Bit vectors are "<len>:<hex>" strings and an
// absent value is the string "⊥".

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qspir/orchestrator.h"

namespace qspir {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kAbsent = "\xE2\x8A\xA5";

class TranscriptError : public std::runtime_error {
 public:
  TranscriptError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Json bits_to_json(const std::optional<BitVector>& v);
// Throws std::invalid_argument naming `field` on malformed input.
std::optional<BitVector> bits_from_json(const Json& j, std::string_view field);

Json record_to_json(const RunRecord& record);
RunRecord record_from_json(const Json& j);

// 64-bit FNV-1a of the compact dump, as 16 hex digits.
std::string config_digest(const Json& config);
Json transcript_header(const Json& config, std::uint64_t seed);

void write_line(std::ostream& out, const Json& j);

// Reads the header, then hands each record to `sink` in file order.
// Malformed lines raise TranscriptError with a 1-based line number.
Json read_transcript(std::istream& in, const std::function<void(RunRecord&&)>& sink);

}  // namespace qspir
