// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "cli.h"
#include "planner_oracle.h"
#include "qspir/experiment.h"
#include "qspir/privacy_analyzer.h"
#include "qspir/resource_planner.h"

namespace qspir {
namespace {

using analysis::BoundsAccumulator;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RunConfig b2_config(int m = 2) {
  RunConfig cfg;
  cfg.protocol = Protocol::kB2;
  cfg.m = m;
  return cfg;
}

// ---- AC1 ------------------------------------------------------------------

Verdict exact_correctness() {
  const auto start = Clock::now();
  constexpr int m = 2;
  constexpr int kKeysPerCase = 100;
  SeededRng rng(0xac1);
  std::vector<b2::CdsKey> pool(4093);
  for (auto& k : pool) k = b2::random_cds_key(rng, m);

  std::vector<std::pair<b2::Query, b2::Query>> queries;
  std::vector<b2::CubeIndex> targets;
  for (std::uint64_t flat = 0; flat < 8; ++flat) {
    const auto x = b2::CubeIndex::FromFlat(flat, m);
    for (std::uint64_t r = 0; r < 512; ++r) {
      queries.push_back(b2::derive_queries(x, b2::decode_randomness(BitVector::FromUint(r, 9), m), m));
      targets.push_back(x);
    }
  }
  std::uint64_t checked = 0, failures = 0, cursor = 0;
  for (std::uint64_t w = 0; w < 256; ++w) {
    const b2::CubeDatabase db(BitVector::FromUint(w, 8), m);
    for (std::size_t c = 0; c < queries.size(); ++c) {
      const bool want = db.at(targets[c]);
      for (int k = 0; k < kKeysPerCase; ++k) {
        const auto& key = pool[cursor++ % pool.size()];
        const auto a1 = b2::answer_dc1(queries[c].first, db, key);
        const auto a2 = b2::answer_dc2(queries[c].second, db, key);
        failures += b2::decode(a1, a2, targets[c], m) != want;
        ++checked;
      }
    }
  }
  const double secs = seconds_since(start);
  return {failures == 0 && checked == 256ULL * 8 * 512 * 100 && secs < 300.0,
          std::to_string(failures) + " failures in " + std::to_string(checked) + " decodes, " +
              fmt("%.1f s", secs)};
}

// ---- AC2 ------------------------------------------------------------------

Verdict exact_user_privacy() {
  const auto cfg = b2_config();
  SeededRng rng(0xac2);
  std::uint64_t comparisons = 0;
  double worst = 0.0;
  for (int sample = 0; sample < 10; ++sample) {
    const auto w = Database::Random(rng, 8, 1);
    const auto s = rng.bits(cfg.dc_key_bits());
    const KeyPair dc{s, s, std::nullopt};
    for (Party p : {Party::kDc1Eve, Party::kDc2Eve}) {
      std::vector<analysis::CosetDistribution> dists;
      for (std::uint64_t flat = 0; flat < 8; ++flat) {
        dists.push_back(analysis::coset_view_distribution(cfg, p, w, b2::CubeIndex::FromFlat(flat, 2), dc));
      }
      for (std::size_t a = 0; a < dists.size(); ++a) {
        for (std::size_t b = a + 1; b < dists.size(); ++b) {
          worst = std::max(worst, analysis::coset_tv_distance(dists[a], dists[b]));
          ++comparisons;
        }
      }
    }
  }
  return {worst == 0.0 && comparisons == 10 * 2 * 28,
          std::to_string(comparisons) + " index pairs, max tv " + fmt("%g", worst)};
}

// ---- AC3 ------------------------------------------------------------------

// Key-space enumeration over machine words: rows ≤ 64, key columns ≤ 16,
// database entries ≤ 8.
struct ToySystem {
  std::size_t rows, key_cols, entries;
  std::vector<std::uint64_t> key_columns;  // column c as a row mask
  std::vector<std::uint64_t> db_columns;
};

ToySystem to_toy(const analysis::AffineSystem& sys) {
  ToySystem t{sys.key_matrix.rows(), sys.key_matrix.cols(), sys.db_matrix.cols(), {}, {}};
  auto col = [](const gf2::Matrix& mtx, std::size_t c) {
    std::uint64_t v = 0;
    for (std::size_t r = 0; r < mtx.rows(); ++r) v |= std::uint64_t{mtx.get(r, c)} << r;
    return v;
  };
  for (std::size_t c = 0; c < t.key_cols; ++c) t.key_columns.push_back(col(sys.key_matrix, c));
  for (std::size_t c = 0; c < t.entries; ++c) t.db_columns.push_back(col(sys.db_matrix, c));
  return t;
}

// Distribution class of every database: databases share a class iff their
// answer multisets over all keys coincide.
std::vector<int> enumerate_classes(const ToySystem& t) {
  std::vector<std::uint64_t> base;
  base.reserve(std::size_t{1} << t.key_cols);
  std::uint64_t acc = 0;
  base.push_back(0);
  for (std::uint64_t g = 1; g < (std::uint64_t{1} << t.key_cols); ++g) {
    acc ^= t.key_columns[static_cast<std::size_t>(__builtin_ctzll(g))];  // Gray code step
    base.push_back(acc);
  }
  std::map<std::vector<std::uint64_t>, int> ids;
  std::vector<int> cls;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << t.entries); ++w) {
    std::uint64_t shift = 0;
    for (std::size_t e = 0; e < t.entries; ++e) {
      if ((w >> e) & 1U) shift ^= t.db_columns[e];
    }
    std::vector<std::uint64_t> outs(base);
    for (auto& v : outs) v ^= shift;
    std::sort(outs.begin(), outs.end());
    cls.push_back(ids.emplace(std::move(outs), static_cast<int>(ids.size())).first->second);
  }
  return cls;
}

bool class_depends_only_on(const std::vector<int>& cls, std::size_t entry) {
  std::array<int, 2> seen{-1, -1};
  for (std::size_t w = 0; w < cls.size(); ++w) {
    int& s = seen[(w >> entry) & 1U];
    if (s == -1) s = cls[w];
    if (s != cls[w]) return false;
  }
  return true;
}

// Returns disagreements between the analyzer and enumeration.
int cross_check(const analysis::AffineSystem& sys, int& noncompliant) {
  const ToySystem toy = to_toy(sys);
  const auto cls = enumerate_classes(toy);
  bool brute = false;
  for (std::size_t e = 0; e < toy.entries && !brute; ++e) brute = class_depends_only_on(cls, e);
  const auto rep = analysis::affine_compliance(sys);
  int bad = rep.compliant != brute;
  if (rep.compliant && rep.witness && !class_depends_only_on(cls, *rep.witness)) ++bad;
  if (!rep.compliant) {
    ++noncompliant;
    const auto& [a, b] = *rep.offending;
    bad += cls[a.read_uint(0, toy.entries)] == cls[b.read_uint(0, toy.entries)];
  }
  // Coset test against distribution equality on every pair from zero.
  for (std::uint64_t w = 1; w < cls.size(); ++w) {
    bad += sys.indistinguishable(BitVector(toy.entries), BitVector::FromUint(w, toy.entries)) != (cls[w] == cls[0]);
  }
  return bad;
}

Verdict exact_db_privacy() {
  constexpr int m = 2;
  const std::size_t qlen = b2::query_bits(m);
  std::uint64_t pairs = 0, compliant = 0, invalid_witness = 0;
  for (std::uint64_t a = 0; a < (1U << qlen); ++a) {
    const auto q1 = b2::decode_query(BitVector::FromUint(a, qlen), m);
    for (std::uint64_t b = 0; b < (1U << qlen); ++b) {
      const auto q2 = b2::decode_query(BitVector::FromUint(b, qlen), m);
      const auto sys = analysis::build_affine_system(q1, q2, m);
      const auto rep = analysis::affine_compliance(sys);
      ++pairs;
      if (!rep.compliant || !rep.witness) continue;
      ++compliant;
      // Every change away from the witness entry must be invisible.
      bool ok = true;
      for (std::size_t e = 0; e < 8 && ok; ++e) {
        if (e != *rep.witness) ok = sys.indistinguishable(BitVector(8), BitVector::Unit(8, e));
      }
      invalid_witness += !ok;
    }
  }

  SeededRng rng(0xac3);
  int toys = 0, disagreements = 0, noncompliant = 0;
  // Sub-systems of the side-2 system: random rows, key bits beyond a random
  // subset pinned to zero.
  for (int i = 0; i < 24; ++i) {
    const auto x = b2::CubeIndex::FromFlat(rng.below(8), m);
    auto [q1, q2] = b2::derive_queries(x, b2::random_user_randomness(rng, m), m);
    if (i % 2) q2 = b2::decode_query(rng.bits(qlen), m);
    const auto full = analysis::build_affine_system(q1, q2, m);
    const std::size_t kc = 10 + rng.below(7);
    std::vector<std::size_t> keep_cols(full.key_matrix.cols());
    for (std::size_t c = 0; c < keep_cols.size(); ++c) keep_cols[c] = c;
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < full.key_matrix.rows(); ++r) {
      if (rng.below(4) != 0) rows.push_back(r);
    }
    for (std::size_t c = keep_cols.size(); c > 1; --c) std::swap(keep_cols[c - 1], keep_cols[rng.below(c)]);
    keep_cols.resize(kc);
    analysis::AffineSystem sub{gf2::Matrix(rows.size(), kc), gf2::Matrix(rows.size(), 8), BitVector(rows.size())};
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < kc; ++c) sub.key_matrix.set(r, c, full.key_matrix.get(rows[r], keep_cols[c]));
      sub.db_matrix.row(r) = full.db_matrix.row(rows[r]);
    }
    disagreements += cross_check(sub, noncompliant);
    ++toys;
  }
  // Random small systems.
  for (int i = 0; i < 24; ++i) {
    const std::size_t r = 2 + rng.below(10), kc = 1 + rng.below(12), n = 2 + rng.below(5);
    analysis::AffineSystem sys{gf2::Matrix(r, kc), gf2::Matrix(r, n), BitVector(r)};
    for (std::size_t row = 0; row < r; ++row) {
      sys.key_matrix.row(row) = rng.bits(kc);
      sys.db_matrix.row(row) = rng.bits(n);
    }
    disagreements += cross_check(sys, noncompliant);
    ++toys;
  }
  return {compliant == pairs && pairs == 512ULL * 512 && invalid_witness == 0 && disagreements == 0 && toys >= 20,
          std::to_string(compliant) + "/" + std::to_string(pairs) + " query pairs compliant, " +
              std::to_string(invalid_witness) + " invalid witnesses; " + std::to_string(toys) + " toy systems (" +
              std::to_string(noncompliant) + " non-compliant), " + std::to_string(disagreements) + " disagreements"};
}

// ---- AC4 / AC5 --------------------------------------------------------------

InputGenerator alternating(std::vector<TrialInputs> inputs) {
  return [inputs = std::move(inputs)](std::uint64_t t, RandomSource&) { return inputs[t % inputs.size()]; };
}

BoundsAccumulator accumulate(const RunConfig& cfg, std::uint64_t trials, const InputGenerator& gen) {
  BoundsAccumulator acc;
  for (std::uint64_t t = 0; t < trials; ++t) acc.add(run_trial(cfg, t, gen));
  return acc;
}

Verdict correctness_bound() {
  const auto start = Clock::now();
  auto cfg = b2_config();
  for (Link l : kAllLinks) cfg.link(l).p_mismatch = 0.01;
  cfg.seed = 0xac4;
  const auto acc = accumulate(cfg, 100000, random_inputs(cfg));
  const auto params = analysis::SecurityParameters::FromLinks(cfg.links);
  const auto c = acc.correctness(params.spir_targets()[0]);
  const double secs = seconds_since(start);
  return {c.applicable && c.pass && c.samples == 100000 && secs < 600.0,
          "failure rate " + fmt("%.5f", c.empirical) + " <= " + fmt("%g", c.bound) + " + " + fmt("%.4f", c.margin) +
              ", " + fmt("%.1f s", secs)};
}

Verdict secrecy_bounds() {
  constexpr std::uint64_t kRuns = 200000;
  SeededRng rng(0xac5);
  const auto w = Database::Random(rng, 8, 1);
  auto w2 = w;
  w2.planes[0].flip(5);  // differs away from entry 0
  const b2::CubeIndex x0 = b2::CubeIndex::FromFlat(0, 2);
  const b2::CubeIndex x1 = b2::CubeIndex::FromFlat(6, 2);

  std::vector<std::string> parts;
  bool pass = true;
  auto record = [&](const std::string& what, const analysis::BoundCheck& c) {
    pass = pass && c.applicable && c.pass && c.samples == kRuns / 2;
    parts.push_back(what + " " + fmt("%.4f", c.empirical) + " <= " + fmt("%g", c.bound) + " + " + fmt("%.4f", c.margin));
  };

  auto cfg = b2_config();
  cfg.seed = 0xac51;
  cfg.link(Link::kUserDc2).p_leak = 0.02;
  auto params = analysis::SecurityParameters::FromLinks(cfg.links);
  // Eve: (x0, w) against (x1, w2).
  auto acc = accumulate(cfg, kRuns, alternating({{w, x0}, {w2, x1}}));
  record("secrecy", acc.secrecy(params.spir_targets()[3]));
  // Data centres: same database, different index.
  cfg.seed = 0xac52;
  acc = accumulate(cfg, kRuns, alternating({{w, x0}, {w, x1}}));
  record("user-privacy", acc.user_privacy(params.spir_targets()[1]));
  // User: same index and output, different database.
  cfg = b2_config();
  cfg.seed = 0xac53;
  cfg.link(Link::kDc1Dc2).p_leak = 0.02;
  params = analysis::SecurityParameters::FromLinks(cfg.links);
  acc = accumulate(cfg, kRuns, alternating({{w, x0}, {w2, x0}}));
  record("db-privacy", acc.db_privacy(params.spir_targets()[2]));

  std::string detail;
  for (const auto& p : parts) detail += (detail.empty() ? "" : "; ") + p;
  return {pass, detail};
}

// ---- AC6 ------------------------------------------------------------------

Verdict xor_protocol() {
  constexpr std::size_t n = 4;
  std::uint64_t runs = 0, wrong = 0, leak_violations = 0, witness_mismatch = 0;
  // Answer-pair class of every database for a query pair, over the shared key.
  auto classes = [&](const BitVector& q1, const BitVector& q2) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> cls;
    for (std::uint64_t wv = 0; wv < 16; ++wv) {
      const auto w = BitVector::FromUint(wv, n);
      std::vector<int> outs;
      for (int k = 0; k < 2; ++k) outs.push_back(2 * xorp::xor_answer(q1, w, k) + xorp::xor_answer(q2, w, k));
      std::sort(outs.begin(), outs.end());
      cls.push_back(ids.emplace(outs, static_cast<int>(ids.size())).first->second);
    }
    return cls;
  };
  // The classes are exactly the values of selector·w.
  auto reveals_exactly = [&](const std::vector<int>& cls, const BitVector& selector) {
    for (std::uint64_t a = 0; a < 16; ++a) {
      for (std::uint64_t b = 0; b < 16; ++b) {
        const bool same_value = selector.dot(BitVector::FromUint(a, n)) == selector.dot(BitVector::FromUint(b, n));
        if ((cls[a] == cls[b]) != same_value) return false;
      }
    }
    return true;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const xorp::SelectorVector sel{BitVector::Unit(n, i)};
    for (std::uint64_t rv = 0; rv < 16; ++rv) {
      const auto q = xorp::xor_queries(sel, BitVector::FromUint(rv, n));
      const auto rep = analysis::xor_privacy_check(q.q1, q.q2);
      leak_violations += !rep.compliant || rep.witness != i || !reveals_exactly(classes(q.q1, q.q2), sel.bits);
      for (int k = 0; k < 2; ++k) {
        for (std::uint64_t wv = 0; wv < 16; ++wv) {
          const auto w = BitVector::FromUint(wv, n);
          const bool out = xorp::xor_decode(xorp::xor_answer(q.q1, w, k), xorp::xor_answer(q.q2, w, k));
          wrong += out != w[i];
          ++runs;
        }
      }
    }
  }
  std::uint64_t adversarial = 0;
  for (std::uint64_t a = 0; a < 16; ++a) {
    for (std::uint64_t b = 0; b < 16; ++b) {
      const auto q1 = BitVector::FromUint(a, n), q2 = BitVector::FromUint(b, n);
      const auto rep = analysis::xor_privacy_check(q1, q2);
      witness_mismatch += !rep.compliant || rep.witness_selector != (q1 ^ q2) ||
                          !reveals_exactly(classes(q1, q2), *rep.witness_selector);
      ++adversarial;
    }
  }
  return {runs == 4 * 16 * 2 * 16 && wrong == 0 && leak_violations == 0 && adversarial == 256 && witness_mismatch == 0,
          std::to_string(wrong) + " wrong of " + std::to_string(runs) + " runs, " + std::to_string(leak_violations) +
              " leakage violations, " + std::to_string(witness_mismatch) + "/" + std::to_string(adversarial) +
              " adversarial witness mismatches"};
}

// ---- AC7 / AC8 ------------------------------------------------------------

Verdict planner_fidelity() {
  using planner::comm_cost;
  bool ok = comm_cost(Protocol::kB2, 8, 1) == planner::CostBreakdown{22, 28};
  SeededRng rng(0xac7);
  for (int i = 0; i < 1000 && ok; ++i) {
    const auto n = 1 + rng.below(1ULL << 40), l = 1 + rng.below(1ULL << 20);
    ok = comm_cost(Protocol::kXor, n, l).per_link_bits == n + l;
  }
  const bool costs = ok;
  int within = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const planner::BlockStats s{std::floor(rng.uniform01() * 1e6), std::floor(rng.uniform01() * 1e7),
                                rng.uniform01() * 0.5, std::floor(rng.uniform01() * 1e7), rng.uniform01() * 0.5};
    const planner::EpsilonBudget e{std::pow(10.0, -1 - 19 * rng.uniform01()), std::pow(10.0, -1 - 19 * rng.uniform01()),
                                   std::pow(10.0, -1 - 19 * rng.uniform01()), std::pow(10.0, -1 - 19 * rng.uniform01())};
    const auto ref = testing::ref_key_length(s, e);
    const double expect = ref <= 0 ? 0.0 : boost::multiprecision::floor(ref).convert_to<double>();
    const double diff = std::fabs(static_cast<double>(planner::key_length(s, e)) - expect);
    worst = std::max(worst, diff);
    within += diff <= 1.0;
  }
  const auto& p = planner::scenario_presets();
  const bool presets = p.size() == 4 && p[0].n == 60'000'000 && p[0].entry_bits == 80'000'000 &&
                       p[1].n == 5'700'000 && p[1].entry_bits == 40'000'000 && p[2].n == 7'700'000'000 &&
                       p[2].entry_bits == 4000 && p[3].n == 19116 && p[3].entry_bits == 9'880'000;
  return {costs && within == 100 && presets,
          std::string("cost formulas ") + (costs ? "exact" : "WRONG") + ", key length " + std::to_string(within) +
              "/100 within 1 bit (max diff " + fmt("%g", worst) + "), presets " + (presets ? "exact" : "WRONG")};
}

Verdict scaling() {
  std::string detail;
  bool pass = true;
  for (std::uint64_t n : {1'000'000ULL, 1'000'000'000ULL}) {
    const double ratio = static_cast<double>(planner::comm_cost(Protocol::kB2, 8 * n, 1'000'000).per_link_bits) /
                         static_cast<double>(planner::comm_cost(Protocol::kB2, n, 1'000'000).per_link_bits);
    pass = pass && ratio >= 1.9 && ratio <= 2.1;
    detail += (detail.empty() ? "" : ", ") + std::string("n=") + fmt("%g", static_cast<double>(n)) + " ratio " +
              fmt("%.5f", ratio);
  }
  return {pass, detail};
}

// ---- AC9 / AC10 -------------------------------------------------------------

std::filesystem::path work_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "qspir_acceptance";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run_cli(args, o, e);
  if (out) *out = o.str();
  return code;
}

Verdict parameter_propagation() {
  const auto dir = work_dir();
  const auto cfg = dir / "eps.json";
  std::ofstream(cfg) << R"({"protocol": "b2", "m": 2, "trials": 50, "seed": 9, "eps_cor": 1e-15, "eps": 1e-10})";
  const auto transcript = (dir / "eps.jsonl").string();
  std::string report;
  if (cli({"run", "--config", cfg.string(), "--out", transcript}) != 0 ||
      cli({"analyze", transcript, "--mode", "bounds"}, &report) != 0) {
    return {false, "cli failed"};
  }
  const auto j = Json::parse(report);
  const std::string printed = j["spir_parameters"].get<std::string>();
  return {printed == "(3e-15, 2e-10, 2e-10, 4e-10)", "report prints " + printed};
}

Verdict reproducibility() {
  const auto dir = work_dir();
  const auto cfg = dir / "repro.json";
  std::ofstream(cfg) << R"({"protocol": "b2", "m": 2, "trials": 2000, "seed": 31,
    "links": {"u_d1": {"p_abort": 0.1, "p_mismatch": 0.02, "p_leak": 0.05}, "d1_d2": {"p_leak": 0.05}},
    "inputs": [{"database": "random", "index": [1, 2, 1]}, {"database": "8:c3", "index": "random"}]})";
  bool same = true;
  std::vector<std::string> transcripts, reports;
  for (int pass = 0; pass < 2; ++pass) {
    const auto t = (dir / ("repro_" + std::to_string(pass) + ".jsonl")).string();
    const auto r = (dir / ("report_" + std::to_string(pass) + ".json")).string();
    if (cli({"run", "--config", cfg.string(), "--out", t}) != 0 || cli({"analyze", t, "--out", r}) != 0) {
      return {false, "cli failed"};
    }
    transcripts.push_back(slurp(t));
    reports.push_back(slurp(r));
  }
  same = transcripts[0] == transcripts[1] && reports[0] == reports[1] && !transcripts[0].empty();
  std::string plan_a, plan_b;
  cli({"plan", "--curve", "--per-link-budget", "1000000000", "--inter-dc-budget", "3000000000", "--format", "csv"},
      &plan_a);
  cli({"plan", "--curve", "--per-link-budget", "1000000000", "--inter-dc-budget", "3000000000", "--format", "csv"},
      &plan_b);
  same = same && plan_a == plan_b;
  return {same, std::to_string(transcripts[0].size()) + "-byte transcript, " + std::to_string(reports[0].size()) +
                    "-byte report, curve: " + (same ? "identical" : "DIFFER")};
}

}  // namespace
}  // namespace qspir

int main() {
  using Criterion = std::pair<const char*, std::function<qspir::Verdict()>>;
  const std::vector<Criterion> criteria = {
      {"AC1 exact correctness (m=2, all databases, indices, randomness)", qspir::exact_correctness},
      {"AC2 exact user privacy (coset view distributions)", qspir::exact_user_privacy},
      {"AC3 exact database privacy (all query pairs, toy enumeration)", qspir::exact_db_privacy},
      {"AC4 correctness bound under key mismatch", qspir::correctness_bound},
      {"AC5 secrecy and privacy bounds under key leakage", qspir::secrecy_bounds},
      {"AC6 XOR protocol correctness and one-bit leakage", qspir::xor_protocol},
      {"AC7 planner formula fidelity", qspir::planner_fidelity},
      {"AC8 per-link cost scaling", qspir::scaling},
      {"AC9 security parameter propagation", qspir::parameter_propagation},
      {"AC10 reproducibility", qspir::reproducibility},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    qspir::Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
