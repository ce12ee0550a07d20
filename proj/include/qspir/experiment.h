#pragma once

// JSON experiment configs: protocol shape, per-link key model, adversary,
// the inputs each trial uses, and optional security-parameter overrides.
//
//   {
//     "protocol": "b2", "m": 2, "entry_bits": 1,
//     "links": {"u_d1": {"p_abort": 0, "p_mismatch": 0.01, "p_leak": 0}, ...},
//     "adversary": {"role": "none"},
//     "inputs": [{"database": "random", "index": [1, 2, 1]}],
//     "seed": 7, "trials": 100
//   }
//
// Trial t uses inputs[t mod |inputs|]. "database" is "random" or a hex bit
// vector of the L planes concatenated. "index" is "random", a cube index
// [x1, x2, x3] (b2), or a hex selector / 1-based entry number (xor).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qspir/orchestrator.h"
#include "qspir/transcript.h"

namespace qspir {

// Message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct InputSpec {
  std::optional<Database> database;   // empty = random per trial
  std::optional<QueryTarget> target;  // empty = random per trial
};

struct ExperimentConfig {
  RunConfig run;
  std::vector<InputSpec> inputs{InputSpec{}};
  std::uint64_t trials = 1;
  std::optional<double> eps_cor;
  std::optional<double> eps;
  // Normalized config, as recorded in transcript headers.
  Json source;

  InputGenerator generator() const;
};

ExperimentConfig parse_experiment(const Json& j);

}  // namespace qspir
