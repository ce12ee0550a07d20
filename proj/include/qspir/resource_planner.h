#pragma once

// Resource accounting: finite-key length per measurement outcome, error
// correction leakage, communication cost of both protocols, usage scenarios
// and feasibility curves (largest entry size for given key budgets).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qspir/orchestrator.h"
#include "qspir/transcript.h"

namespace qspir::planner {

// −x log₂ x − (1−x) log₂(1−x); x in [0, 1].
double binary_entropy(double x);
// 1.16 · n_t · h(e_t); e_t in [0, 0.5].
double ec_leakage(double n_t, double e_t);

struct BlockStats {
  double n_t0 = 0;  // zero-photon events
  double n_t1 = 0;  // one-photon events
  double e_t1 = 0;  // one-photon phase error
  double n_t = 0;   // sifted key
  double e_t = 0;   // observed error
  void validate() const;
};

struct EpsilonBudget {
  double eps_cor = 1e-15;
  double eps_prime = 1e-10;
  double eps_hat = 1e-10;
  double eps_pa = 1e-10;
  void validate() const;
};

// Unclamped, unfloored expression for one outcome.
double key_length_raw(const BlockStats& stats, const EpsilonBudget& eps);
// floor(raw) clamped at 0.
std::uint64_t key_length(const BlockStats& stats, const EpsilonBudget& eps);

// ⌈n^{1/3}⌉, exact.
std::uint64_t cube_side(std::uint64_t n);
// ⌈log₂ m⌉; 0 for m = 1.
std::uint64_t ceil_log2(std::uint64_t m);

struct CostBreakdown {
  std::uint64_t per_link_bits = 0;
  std::uint64_t inter_dc_key_bits = 0;
  bool operator==(const CostBreakdown&) const = default;
};

// B2: per link 7L + 3⌈log₂ m⌉ + (3 + 3L)m, inter-DC 9Lm + 10L, m = ⌈n^{1/3}⌉.
// XOR: per link n + L, inter-DC L. Throws std::overflow_error past 64 bits.
CostBreakdown comm_cost(Protocol protocol, std::uint64_t n, std::uint64_t entry_bits);

// Largest L with comm_cost(protocol, n, L) within both budgets; 0 if none.
std::uint64_t max_entry_size(Protocol protocol, std::uint64_t n, std::uint64_t per_link_budget,
                             std::uint64_t inter_dc_budget);

struct Scenario {
  std::string name;
  std::uint64_t n = 0;
  std::uint64_t entry_bits = 0;
  std::string note;
};

const std::vector<Scenario>& scenario_presets();
// Case-insensitive lookup; throws std::invalid_argument for unknown names.
const Scenario& find_scenario(const std::string& name);

struct CurvePoint {
  std::uint64_t n = 0;
  std::uint64_t l_max = 0;
  CostBreakdown cost;  // at l_max; zero when l_max is 0
};

// n_grid must be non-empty, ascending, entries ≥ 1.
std::vector<CurvePoint> feasibility_curve(Protocol protocol, std::uint64_t per_link_budget,
                                          std::uint64_t inter_dc_budget,
                                          const std::vector<std::uint64_t>& n_grid);
// 1, 2, 5 × 10^k for 10 ≤ n ≤ 10^10.
std::vector<std::uint64_t> default_grid();

// Columns: n,L_max,per_link_cost,inter_dc_cost.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);
Json curve_to_json(const std::vector<CurvePoint>& curve);
Json cost_to_json(const CostBreakdown& cost);

}  // namespace qspir::planner
