#include "qspir/resource_planner.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace qspir::planner {

namespace {

__extension__ typedef unsigned __int128 Wide;

void check_fraction(double v, double hi, const char* what) {
  if (!(v >= 0.0 && v <= hi)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, " + (hi == 1.0 ? "1" : "0.5") + "]");
  }
}

void check_count(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be a non-negative count");
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("cost exceeds 64 bits");
  return r;
}

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("cost exceeds 64 bits");
  return r;
}

// Cost as slope·L + offset in each budget.
struct Linear {
  std::uint64_t link_slope, link_offset, dc_slope, dc_offset;
};

Linear linear_cost(Protocol protocol, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (protocol == Protocol::kXor) return {1, n, 1, 0};
  const std::uint64_t m = cube_side(n);
  return {add(7, mul(3, m)), add(mul(3, ceil_log2(m)), mul(3, m)), add(mul(9, m), 10), 0};
}

std::uint64_t fit(std::uint64_t budget, std::uint64_t slope, std::uint64_t offset) {
  return budget < offset ? 0 : (budget - offset) / slope;
}

}  // namespace

double binary_entropy(double x) {
  check_fraction(x, 1.0, "entropy argument");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double ec_leakage(double n_t, double e_t) {
  check_count(n_t, "n_t");
  check_fraction(e_t, 0.5, "e_t");
  return 1.16 * n_t * binary_entropy(e_t);
}

void BlockStats::validate() const {
  check_count(n_t0, "n_t0");
  check_count(n_t1, "n_t1");
  check_count(n_t, "n_t");
  check_fraction(e_t1, 0.5, "e_t1");
  check_fraction(e_t, 0.5, "e_t");
}

void EpsilonBudget::validate() const {
  for (double v : {eps_cor, eps_prime, eps_hat, eps_pa}) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("epsilons must lie in (0, 1]");
  }
}

double key_length_raw(const BlockStats& s, const EpsilonBudget& e) {
  s.validate();
  e.validate();
  return s.n_t0 + s.n_t1 * (1.0 - binary_entropy(s.e_t1)) - ec_leakage(s.n_t, s.e_t) -
         std::log2(8.0 / e.eps_cor) - 2.0 * std::log2(2.0 / (e.eps_prime * e.eps_hat)) -
         2.0 * std::log2(1.0 / (2.0 * e.eps_pa));
}

std::uint64_t key_length(const BlockStats& stats, const EpsilonBudget& eps) {
  const double raw = key_length_raw(stats, eps);
  if (raw <= 0.0) return 0;
  if (raw >= 18446744073709551615.0) throw std::overflow_error("key length exceeds 64 bits");
  return static_cast<std::uint64_t>(std::floor(raw));
}

std::uint64_t cube_side(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  auto cube = [](std::uint64_t m) { return static_cast<Wide>(m) * m * m; };
  std::uint64_t m = static_cast<std::uint64_t>(std::llround(std::cbrt(static_cast<double>(n))));
  while (cube(m) < n) ++m;
  while (m > 1 && cube(m - 1) >= n) --m;
  return m;
}

std::uint64_t ceil_log2(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("log of zero");
  std::uint64_t k = 0;
  while ((std::uint64_t{1} << k) < m) ++k;
  return k;
}

CostBreakdown comm_cost(Protocol protocol, std::uint64_t n, std::uint64_t entry_bits) {
  if (entry_bits == 0) throw std::invalid_argument("entry bits must be at least 1");
  const Linear c = linear_cost(protocol, n);
  return {add(mul(c.link_slope, entry_bits), c.link_offset), add(mul(c.dc_slope, entry_bits), c.dc_offset)};
}

std::uint64_t max_entry_size(Protocol protocol, std::uint64_t n, std::uint64_t per_link_budget,
                             std::uint64_t inter_dc_budget) {
  const Linear c = linear_cost(protocol, n);
  return std::min(fit(per_link_budget, c.link_slope, c.link_offset), fit(inter_dc_budget, c.dc_slope, c.dc_offset));
}

const std::vector<Scenario>& scenario_presets() {
  static const std::vector<Scenario> presets = {
      {"itunes", 60'000'000, 80'000'000, "60 million songs of about 10 MB"},
      {"ehr", 5'700'000, 40'000'000, "5.7 million patient records of about 5 MB"},
      {"fingerprint", 7'700'000'000, 4'000, "7.7 billion people, minutiae of about 500 bytes"},
      {"genome", 19'116, 9'880'000, "19116 protein-coding genes of about 1.235 MB"},
  };
  return presets;
}

const Scenario& find_scenario(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (const auto& s : scenario_presets()) {
    if (s.name == lower) return s;
  }
  throw std::invalid_argument("unknown scenario '" + name + "' (itunes, ehr, fingerprint, genome)");
}

std::vector<CurvePoint> feasibility_curve(Protocol protocol, std::uint64_t per_link_budget,
                                          std::uint64_t inter_dc_budget,
                                          const std::vector<std::uint64_t>& n_grid) {
  if (n_grid.empty()) throw std::invalid_argument("empty n grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) throw std::invalid_argument("n grid must be ascending");
  std::vector<CurvePoint> out;
  out.reserve(n_grid.size());
  for (std::uint64_t n : n_grid) {
    CurvePoint p;
    p.n = n;
    p.l_max = max_entry_size(protocol, n, per_link_budget, inter_dc_budget);
    if (p.l_max > 0) p.cost = comm_cost(protocol, n, p.l_max);
    out.push_back(p);
  }
  return out;
}

std::vector<std::uint64_t> default_grid() {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t decade = 10; decade <= 1'000'000'000; decade *= 10) {
    for (std::uint64_t k : {1, 2, 5}) grid.push_back(k * decade);
  }
  grid.push_back(10'000'000'000);
  return grid;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "n,L_max,per_link_cost,inter_dc_cost\n";
  for (const auto& p : curve) {
    out << p.n << ',' << p.l_max << ',' << p.cost.per_link_bits << ',' << p.cost.inter_dc_key_bits << '\n';
  }
}

Json cost_to_json(const CostBreakdown& cost) {
  Json j;
  j["per_link_bits"] = cost.per_link_bits;
  j["inter_dc_key_bits"] = cost.inter_dc_key_bits;
  return j;
}

Json curve_to_json(const std::vector<CurvePoint>& curve) {
  Json arr = Json::array();
  for (const auto& p : curve) {
    Json j;
    j["n"] = p.n;
    j["L_max"] = p.l_max;
    j["per_link_cost"] = p.cost.per_link_bits;
    j["inter_dc_cost"] = p.cost.inter_dc_key_bits;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace qspir::planner
