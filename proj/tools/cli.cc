#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "qspir/experiment.h"
#include "qspir/privacy_analyzer.h"
#include "qspir/resource_planner.h"
#include "qspir/transcript.h"
#include "qspir/version.h"

namespace qspir::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
}

// "-" is stdout.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw DataError(path + ": cannot open for writing");
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }
  void finish(const std::string& path) {
    stream_->flush();
    if (!*stream_) throw DataError((path.empty() ? std::string("-") : path) + ": write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

Json artifact_header(const std::string& command, std::uint64_t seed, const std::string& digest) {
  Json j;
  j["tool"] = "qspir";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["config_digest"] = digest;
  return j;
}

// ---- run ------------------------------------------------------------------

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> protocol;
  std::optional<std::uint64_t> n;
  std::optional<int> entry_bits;
  std::string out = "-";
  std::string format = "json";
};

int cmd_run(const RunOptions& o, std::ostream& stdout_) {
  if (o.format != "json") throw UsageError("run writes line-delimited JSON only");
  Json j = load_json(o.config);
  if (!j.is_object()) throw DataError(o.config + ": config must be a JSON object");
  if (o.seed) j["seed"] = *o.seed;
  if (o.trials) j["trials"] = *o.trials;
  if (o.protocol) j["protocol"] = *o.protocol;
  if (o.n) j["n"] = *o.n;
  if (o.entry_bits) j["entry_bits"] = *o.entry_bits;
  ExperimentConfig ex;
  try {
    ex = parse_experiment(j);
  } catch (const ConfigError& e) {
    throw DataError(o.config + ": " + e.what());
  }
  const auto gen = ex.generator();
  Output out(o.out, stdout_);
  write_line(out.get(), transcript_header(ex.source, ex.run.seed));
  for (std::uint64_t t = 0; t < ex.trials; ++t) write_line(out.get(), record_to_json(run_trial(ex.run, t, gen)));
  out.finish(o.out);
  return kExitOk;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeOptions {
  std::string transcript;
  std::string mode = "bounds";
  std::string out = "-";
  std::string format = "json";
};

struct QueryAudit {
  std::uint64_t checked = 0;
  std::uint64_t compliant = 0;
  std::optional<std::uint64_t> first_offending_trial;
  std::map<std::pair<BitVector, BitVector>, bool> cache;

  void add(const RunRecord& rec) {
    if (!rec.q1_tilde || !rec.q2_tilde) return;
    ++checked;
    const auto key = std::make_pair(*rec.q1_tilde, *rec.q2_tilde);
    auto it = cache.find(key);
    if (it == cache.end()) {
      bool ok;
      if (rec.protocol == Protocol::kXor) {
        ok = analysis::xor_privacy_check(key.first, key.second).compliant;
      } else {
        ok = analysis::db_privacy_check(b2::decode_query(key.first, rec.m), b2::decode_query(key.second, rec.m), rec.m)
                 .compliant;
      }
      it = cache.emplace(key, ok).first;
    }
    if (it->second) {
      ++compliant;
    } else if (!first_offending_trial) {
      first_offending_trial = rec.trial;
    }
  }

  Json to_json() const {
    Json j;
    j["checked"] = checked;
    j["compliant"] = compliant;
    j["non_compliant"] = checked - compliant;
    j["distinct_pairs"] = cache.size();
    j["first_offending_trial"] = first_offending_trial ? Json(*first_offending_trial) : Json(nullptr);
    return j;
  }
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& stdout_) {
  if (o.format != "json") throw UsageError("analyze writes JSON reports only");
  std::ifstream in(o.transcript, std::ios::binary);
  if (!in) throw DataError(o.transcript + ": cannot open");
  analysis::BoundsAccumulator acc;
  QueryAudit audit;
  const bool audit_queries = o.mode == "db-privacy";
  Json header;
  try {
    header = read_transcript(in, [&](RunRecord&& rec) {
      acc.add(rec);
      if (audit_queries) audit.add(rec);
    });
  } catch (const TranscriptError& e) {
    throw DataError(o.transcript + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(o.transcript + ": " + e.what());
  }
  if (!header.contains("config") || !header.contains("config_digest") || !header.contains("seed") ||
      !header["seed"].is_number_unsigned()) {
    throw DataError(o.transcript + ": line 1: header lacks seed, config or config_digest");
  }
  if (config_digest(header["config"]) != header["config_digest"]) {
    throw DataError(o.transcript + ": line 1: config digest does not match the embedded config");
  }
  ExperimentConfig ex;
  try {
    ex = parse_experiment(header["config"]);
  } catch (const ConfigError& e) {
    throw DataError(o.transcript + ": line 1: config: " + e.what());
  }
  if (acc.runs() == 0) throw DataError(o.transcript + ": transcript has no run records");

  auto params = analysis::SecurityParameters::FromLinks(ex.run.links);
  if (ex.eps_cor) params.eps_cor = *ex.eps_cor;
  if (ex.eps) params.eps = *ex.eps;

  analysis::BoundsReport report = acc.finish(params);
  static const std::map<std::string, std::size_t> kCheckIndex = {
      {"correctness", 0}, {"user-privacy", 1}, {"db-privacy", 2}, {"secrecy", 3}};
  if (o.mode != "bounds") {
    const auto check = report.checks[kCheckIndex.at(o.mode)];
    report.checks = {check};
    report.pass = check.pass;
  }
  Json j = artifact_header("analyze", header["seed"].get<std::uint64_t>(), header["config_digest"].get<std::string>());
  j["mode"] = o.mode;
  const Json body = analysis::bounds_report_to_json(report);
  for (const auto& [k, v] : body.items()) j[k] = v;
  if (audit_queries) {
    j["query_pairs"] = audit.to_json();
    j["pass"] = j["pass"].get<bool>() && audit.compliant == audit.checked;
  }
  Output out(o.out, stdout_);
  out.get() << j.dump(2) << '\n';
  out.finish(o.out);
  return kExitOk;
}

// ---- plan -----------------------------------------------------------------

struct PlanOptions {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scenario;
  std::optional<std::string> protocol;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> entry_bits;
  std::optional<std::uint64_t> per_link_budget;
  std::optional<std::uint64_t> inter_dc_budget;
  bool curve = false;
  std::string out = "-";
  std::string format = "json";
};

template <typename T>
std::optional<T> json_field(const Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DataError(std::string(key) + ": wrong type");
  }
}

planner::BlockStats parse_block_stats(const Json& j) {
  const std::set<std::string> keys = {"n_t0", "n_t1", "e_t1", "n_t", "e_t"};
  if (!j.is_object()) throw DataError("block_stats: must be an object");
  planner::BlockStats s;
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw DataError("block_stats." + k + ": unknown field");
    if (!v.is_number()) throw DataError("block_stats." + k + ": must be a number");
  }
  for (const auto& k : keys) {
    if (!j.contains(k)) throw DataError("block_stats." + k + ": required");
  }
  s = {j["n_t0"].get<double>(), j["n_t1"].get<double>(), j["e_t1"].get<double>(), j["n_t"].get<double>(),
       j["e_t"].get<double>()};
  return s;
}

planner::EpsilonBudget parse_eps_budget(const Json& j) {
  if (!j.is_object()) throw DataError("eps_budget: must be an object");
  planner::EpsilonBudget e;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw DataError("eps_budget." + k + ": must be a number");
    if (k == "eps_cor") e.eps_cor = v.get<double>();
    else if (k == "eps_prime") e.eps_prime = v.get<double>();
    else if (k == "eps_hat") e.eps_hat = v.get<double>();
    else if (k == "eps_pa") e.eps_pa = v.get<double>();
    else throw DataError("eps_budget." + k + ": unknown field");
  }
  return e;
}

int cmd_plan(const PlanOptions& o, std::ostream& stdout_) {
  if (o.format != "json" && o.format != "csv") throw UsageError("--format must be json or csv");
  Json cfg = Json::object();
  if (o.config) {
    cfg = load_json(*o.config);
    if (!cfg.is_object()) throw DataError(*o.config + ": config must be a JSON object");
    const std::set<std::string> allowed = {"protocol", "scenario", "n", "entry_bits", "per_link_budget",
                                           "inter_dc_budget", "n_grid", "curve", "block_stats", "eps_budget",
                                           "seed"};
    for (const auto& [k, v] : cfg.items()) {
      if (!allowed.count(k)) throw DataError(*o.config + ": " + k + ": unknown field");
    }
  }
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.protocol) cfg["protocol"] = *o.protocol;
  if (o.scenario) cfg["scenario"] = *o.scenario;
  if (o.n) cfg["n"] = *o.n;
  if (o.entry_bits) cfg["entry_bits"] = *o.entry_bits;
  if (o.per_link_budget) cfg["per_link_budget"] = *o.per_link_budget;
  if (o.inter_dc_budget) cfg["inter_dc_budget"] = *o.inter_dc_budget;
  if (o.curve) cfg["curve"] = true;

  const auto protocol_name = json_field<std::string>(cfg, "protocol").value_or("b2");
  Protocol protocol;
  try {
    protocol = parse_protocol(protocol_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--protocol: ") + e.what());
  }
  cfg["protocol"] = protocol_name;
  const auto scenario_name = json_field<std::string>(cfg, "scenario");
  auto n = json_field<std::uint64_t>(cfg, "n");
  auto l = json_field<std::uint64_t>(cfg, "entry_bits");
  const auto link_budget = json_field<std::uint64_t>(cfg, "per_link_budget");
  const auto dc_budget = json_field<std::uint64_t>(cfg, "inter_dc_budget");
  const bool curve = json_field<bool>(cfg, "curve").value_or(false);
  const std::uint64_t seed = json_field<std::uint64_t>(cfg, "seed").value_or(0);

  std::optional<planner::Scenario> scenario;
  if (scenario_name) {
    if (n || l) throw UsageError("give either a scenario or explicit --n/--entry-bits, not both");
    try {
      scenario = planner::find_scenario(*scenario_name);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--scenario: ") + e.what());
    }
    n = scenario->n;
    l = scenario->entry_bits;
  }
  if (curve && (n || l)) throw UsageError("--curve sweeps n itself; drop --n/--entry-bits/--scenario");
  if (n && *n == 0) throw UsageError("--n must be at least 1");
  if (l && *l == 0) throw UsageError("--entry-bits must be at least 1");
  if (l && !n) throw UsageError("--entry-bits needs --n");
  if (o.format == "csv" && !curve) throw UsageError("csv output is for feasibility curves; add --curve");
  const bool have_stats = cfg.contains("block_stats");
  if (!curve && !n && !have_stats) throw UsageError("nothing to plan: give --scenario, --n, --curve or block_stats");

  Json report = artifact_header("plan", seed, config_digest(cfg));
  report["inputs"] = cfg;
  try {
    if (scenario) {
      Json s;
      s["name"] = scenario->name;
      s["n"] = scenario->n;
      s["entry_bits"] = scenario->entry_bits;
      s["note"] = scenario->note;
      report["scenario"] = s;
    }
    if (n) {
      if (protocol == Protocol::kB2) {
        report["cube_side"] = planner::cube_side(*n);
      }
      if (l) report["cost"] = planner::cost_to_json(planner::comm_cost(protocol, *n, *l));
      if (link_budget || dc_budget) {
        report["l_max"] = planner::max_entry_size(protocol, *n, link_budget.value_or(0), dc_budget.value_or(0));
      }
    }
    if (have_stats) {
      const auto stats = parse_block_stats(cfg["block_stats"]);
      const auto eps = cfg.contains("eps_budget") ? parse_eps_budget(cfg["eps_budget"]) : planner::EpsilonBudget{};
      report["key_length"] = planner::key_length(stats, eps);
      report["key_length_raw"] = planner::key_length_raw(stats, eps);
    }
    std::vector<planner::CurvePoint> points;
    if (curve) {
      std::vector<std::uint64_t> grid = planner::default_grid();
      if (cfg.contains("n_grid")) {
        try {
          grid = cfg["n_grid"].get<std::vector<std::uint64_t>>();
        } catch (const nlohmann::json::exception&) {
          throw DataError("n_grid: must be an array of positive integers");
        }
      }
      points = planner::feasibility_curve(protocol, link_budget.value_or(0), dc_budget.value_or(0), grid);
      report["curve"] = planner::curve_to_json(points);
    }
    Output out(o.out, stdout_);
    if (o.format == "csv") {
      out.get() << "# qspir " << kVersion << " seed=" << seed << " config_digest=" << report["config_digest"].get<std::string>()
                << '\n';
      planner::write_curve_csv(out.get(), points);
    } else {
      out.get() << report.dump(2) << '\n';
    }
    out.finish(o.out);
  } catch (const std::overflow_error& e) {
    throw DataError(e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-database symmetric PIR over QKD-style keys: simulate, analyze, plan", "qspir"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run protocol trials and write a transcript");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--seed", run.seed, "Override the config seed");
  run_cmd->add_option("--trials", run.trials, "Override the trial count");
  run_cmd->add_option("--protocol", run.protocol, "Override the protocol (b2, xor)");
  run_cmd->add_option("--n", run.n, "Override the entry count (xor)");
  run_cmd->add_option("--entry-bits", run.entry_bits, "Override the entry size L");
  run_cmd->add_option("--out", run.out, "Transcript path, - for stdout");
  run_cmd->add_option("--format", run.format, "Output format (json)");

  AnalyzeOptions an;
  auto* an_cmd = app.add_subcommand("analyze", "Check a transcript against the security definitions");
  an_cmd->add_option("transcript", an.transcript, "Transcript path")->required();
  an_cmd->add_option("--mode", an.mode, "correctness, user-privacy, db-privacy, secrecy or bounds")
      ->check(CLI::IsMember({"correctness", "user-privacy", "db-privacy", "secrecy", "bounds"}));
  an_cmd->add_option("--out", an.out, "Report path, - for stdout");
  an_cmd->add_option("--format", an.format, "Output format (json)");

  PlanOptions pl;
  auto* pl_cmd = app.add_subcommand("plan", "Key lengths, communication cost and feasibility curves");
  pl_cmd->add_option("--config", pl.config, "Planner inputs (JSON)");
  pl_cmd->add_option("--seed", pl.seed, "Recorded in the output");
  pl_cmd->add_option("--scenario", pl.scenario, "itunes, ehr, fingerprint or genome");
  pl_cmd->add_option("--protocol", pl.protocol, "b2 (default) or xor");
  pl_cmd->add_option("--n", pl.n, "Entry count");
  pl_cmd->add_option("--entry-bits", pl.entry_bits, "Entry size L in bits");
  pl_cmd->add_option("--per-link-budget", pl.per_link_budget, "Key bits per user link");
  pl_cmd->add_option("--inter-dc-budget", pl.inter_dc_budget, "Key bits between the data centres");
  pl_cmd->add_flag("--curve", pl.curve, "Emit L_max over a grid of n");
  pl_cmd->add_option("--out", pl.out, "Output path, - for stdout");
  pl_cmd->add_option("--format", pl.format, "json or csv");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(run_cmd)) return cmd_run(run, out);
    if (app.got_subcommand(an_cmd)) return cmd_analyze(an, out);
    return cmd_plan(pl, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace qspir::cli
