#include "cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qspir/experiment.h"
#include "qspir/transcript.h"

namespace qspir::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / "qspir_cli_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string write_file(const std::string& name, const std::string& body) {
  const auto path = temp_path(name);
  std::ofstream(path, std::ios::binary) << body;
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

const char* kIdeal = R"({"protocol": "b2", "m": 2, "inputs": [{"database": "random", "index": "random"}],
                         "seed": 5, "trials": 100})";

TEST(CliRun, IdealTranscript) {
  const auto cfg = write_file("ideal.json", kIdeal);
  const auto out = temp_path("ideal.jsonl");
  const auto r = cli({"run", "--config", cfg, "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = lines(read_file(out));
  ASSERT_EQ(text.size(), 101U);
  std::istringstream in(read_file(out));
  int decoded = 0;
  const auto header = read_transcript(in, [&](RunRecord&& rec) {
    EXPECT_EQ(rec.outcome, Outcome::kDecoded);
    EXPECT_TRUE(decode_correct(rec));
    ++decoded;
  });
  EXPECT_EQ(decoded, 100);
  EXPECT_EQ(header["seed"], 5);
  EXPECT_EQ(header["version"], "0.1.0");
  EXPECT_EQ(header["config_digest"], config_digest(header["config"]));
}

TEST(CliRun, AbortsAreValidOutcomes) {
  const auto cfg = write_file("abort.json", R"({"protocol": "b2", "m": 2, "trials": 100,
      "links": {"u_d1": {"p_abort": 1}}})");
  const auto r = cli({"run", "--config", cfg});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = lines(r.out);
  ASSERT_EQ(text.size(), 101U);
  for (std::size_t i = 1; i < text.size(); ++i) {
    EXPECT_NE(text[i].find("\"outcome\":\"aborted\""), std::string::npos);
  }
}

TEST(CliRun, SameSeedSameBytes) {
  const auto cfg = write_file("repro.json", kIdeal);
  const auto a = cli({"run", "--config", cfg, "--seed", "9"});
  const auto b = cli({"run", "--config", cfg, "--seed", "9"});
  const auto c = cli({"run", "--config", cfg, "--seed", "10"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_NE(a.out.find("\"seed\":9"), std::string::npos);
}

TEST(CliRun, FlagsOverrideConfig) {
  const auto cfg = write_file("override.json", R"({"protocol": "xor", "n": 4, "trials": 3})");
  const auto r = cli({"run", "--config", cfg, "--trials", "7", "--n", "6", "--entry-bits", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = lines(r.out);
  ASSERT_EQ(text.size(), 8U);
  const auto rec = record_from_json(Json::parse(text[1]));
  EXPECT_EQ(rec.n, 6U);
  EXPECT_EQ(rec.entry_bits, 2);
}

TEST(CliRun, ConfigErrorsNameTheField) {
  const auto bad = write_file("bad.json", R"({"protocol": "b2", "m": 2, "links": {"u_d1": {"p_abort": 2}}})");
  auto r = cli({"run", "--config", bad});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("links.u_d1.p_abort"), std::string::npos) << r.err;

  const auto unknown = write_file("unknown.json", R"({"protocol": "b2", "m": 2, "colour": 1})");
  r = cli({"run", "--config", unknown});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("colour"), std::string::npos);

  const auto broken = write_file("broken.json", "{");
  EXPECT_EQ(cli({"run", "--config", broken}).code, kExitData);
  EXPECT_EQ(cli({"run", "--config", temp_path("missing.json")}).code, kExitData);
  EXPECT_EQ(cli({"run"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "--config", broken, "--format", "csv"}).code, kExitUsage);
}

TEST(CliAnalyze, IdealPassesWithZeroAdvantage) {
  const auto cfg = write_file("fixed.json", R"({"protocol": "b2", "m": 2, "seed": 3, "trials": 800,
      "inputs": [{"database": "8:a5", "index": [1, 1, 1]}, {"database": "8:a5", "index": [2, 2, 2]},
                 {"database": "8:a4", "index": [1, 1, 1]}, {"database": "8:25", "index": [1, 1, 1]}]})");
  const auto path = temp_path("fixed.jsonl");
  ASSERT_EQ(cli({"run", "--config", cfg, "--out", path}).code, kExitOk);
  const auto r = cli({"analyze", path, "--mode", "bounds"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["seed"], 3);
  ASSERT_EQ(j["checks"].size(), 4U);
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c["applicable"].get<bool>()) << c.dump();
    EXPECT_EQ(c["empirical"].get<double>(), 0.0) << c.dump();
  }
  for (const char* mode : {"correctness", "user-privacy", "db-privacy", "secrecy"}) {
    const auto m = cli({"analyze", path, "--mode", mode});
    ASSERT_EQ(m.code, kExitOk);
    const auto jm = Json::parse(m.out);
    EXPECT_EQ(jm["checks"].size(), 1U);
    EXPECT_TRUE(jm["pass"].get<bool>()) << mode;
  }
  const auto db = Json::parse(cli({"analyze", path, "--mode", "db-privacy"}).out);
  EXPECT_EQ(db["query_pairs"]["non_compliant"], 0);
  EXPECT_EQ(db["query_pairs"]["checked"], 800);
}

TEST(CliAnalyze, InjectedDecodeCorruptionFailsCorrectness) {
  const auto cfg = write_file("corrupt.json", kIdeal);
  const auto r = cli({"run", "--config", cfg});
  auto text = lines(r.out);
  std::string body = text[0] + "\n";
  for (std::size_t i = 1; i < text.size(); ++i) {
    auto j = Json::parse(text[i]);
    if (i % 10 == 0) {
      auto bits = BitVector::FromHex(j["decoded"].get<std::string>());
      bits.flip(0);
      j["decoded"] = bits.to_hex();
    }
    body += j.dump() + "\n";
  }
  const auto path = write_file("corrupt.jsonl", body);
  const auto a = cli({"analyze", path, "--mode", "correctness"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const auto j = Json::parse(a.out);
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_DOUBLE_EQ(j["checks"][0]["empirical"].get<double>(), 0.1);
}

TEST(CliAnalyze, MalformedLineCitesLineNumber) {
  const auto cfg = write_file("short.json", kIdeal);
  auto text = lines(cli({"run", "--config", cfg, "--trials", "4"}).out);
  text[2] = "{\"type\": \"run\", \"trial\": ";
  std::string body;
  for (const auto& l : text) body += l + "\n";
  const auto path = write_file("malformed.jsonl", body);
  const auto r = cli({"analyze", path});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

  text[2] = "{\"type\": \"run\"}";
  body.clear();
  for (const auto& l : text) body += l + "\n";
  const auto r2 = cli({"analyze", write_file("missing_field.jsonl", body)});
  EXPECT_EQ(r2.code, kExitData);
  EXPECT_NE(r2.err.find("line 3"), std::string::npos) << r2.err;

  EXPECT_EQ(cli({"analyze", write_file("empty.jsonl", "")}).code, kExitData);
  EXPECT_EQ(cli({"analyze", path, "--mode", "vibes"}).code, kExitUsage);
}

TEST(CliAnalyze, TamperedHeaderRejected) {
  const auto cfg = write_file("tamper.json", kIdeal);
  auto text = lines(cli({"run", "--config", cfg, "--trials", "2"}).out);
  auto header = Json::parse(text[0]);
  header["config"]["trials"] = 3;
  text[0] = header.dump();
  std::string body;
  for (const auto& l : text) body += l + "\n";
  const auto r = cli({"analyze", write_file("tamper.jsonl", body)});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("digest"), std::string::npos);
}

TEST(CliAnalyze, MismatchBatchUsesCorrectnessTarget) {
  const auto cfg = write_file("mismatch.json", R"({"protocol": "b2", "m": 2, "trials": 3000, "seed": 1,
      "links": {"u_d1": {"p_mismatch": 0.05}, "u_d2": {"p_mismatch": 0.05}, "d1_d2": {"p_mismatch": 0.05}}})");
  const auto path = temp_path("mismatch.jsonl");
  ASSERT_EQ(cli({"run", "--config", cfg, "--out", path}).code, kExitOk);
  const auto j = Json::parse(cli({"analyze", path}).out);
  EXPECT_EQ(j["targets"]["correctness"], "0.15");
  EXPECT_EQ(j["checks"][0]["bound"], "0.15");
  EXPECT_GT(j["checks"][0]["empirical"].get<double>(), 0.0);
  EXPECT_TRUE(j["checks"][0]["pass"].get<bool>());
}

TEST(CliAnalyze, ReportsAreReproducible) {
  const auto cfg = write_file("rep.json", kIdeal);
  const auto path = temp_path("rep.jsonl");
  ASSERT_EQ(cli({"run", "--config", cfg, "--out", path}).code, kExitOk);
  EXPECT_EQ(cli({"analyze", path}).out, cli({"analyze", path}).out);
}

TEST(CliPlan, Examples) {
  auto r = cli({"plan", "--scenario", "fingerprint", "--protocol", "b2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["cost"]["per_link_bits"], 23733958);
  EXPECT_EQ(j["cube_side"], 1975);
  EXPECT_EQ(j["seed"], 0);
  EXPECT_EQ(j["version"], "0.1.0");
  EXPECT_EQ(j["config_digest"].get<std::string>().size(), 16U);

  r = cli({"plan", "--protocol", "xor", "--n", "4", "--entry-bits", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["cost"]["per_link_bits"], 5);

  r = cli({"plan", "--n", "8", "--per-link-budget", "22", "--inter-dc-budget", "28"});
  EXPECT_EQ(Json::parse(r.out)["l_max"], 1);
}

TEST(CliPlan, ZeroBudgetCurve) {
  const auto r = cli({"plan", "--curve", "--format", "csv", "--seed", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = lines(r.out);
  ASSERT_GT(text.size(), 3U);
  EXPECT_EQ(text[0].rfind("# qspir 0.1.0 seed=4 config_digest=", 0), 0U);
  EXPECT_EQ(text[1], "n,L_max,per_link_cost,inter_dc_cost");
  for (std::size_t i = 2; i < text.size(); ++i) {
    std::istringstream row(text[i]);
    std::string n, lmax;
    std::getline(row, n, ',');
    std::getline(row, lmax, ',');
    EXPECT_EQ(lmax, "0") << text[i];
  }
}

TEST(CliPlan, KeyLengthFromConfig) {
  const auto cfg = write_file("plan.json", R"({"block_stats": {"n_t0": 1000, "n_t1": 5000, "e_t1": 0.05,
      "n_t": 6000, "e_t": 0.02}, "eps_budget": {"eps_cor": 1e-15}})");
  const auto r = cli({"plan", "--config", cfg});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["key_length"], 3331);
}

TEST(CliPlan, InconsistentInputs) {
  EXPECT_EQ(cli({"plan", "--scenario", "genome", "--n", "5"}).code, kExitUsage);
  EXPECT_EQ(cli({"plan", "--scenario", "mars"}).code, kExitUsage);
  EXPECT_EQ(cli({"plan"}).code, kExitUsage);
  EXPECT_EQ(cli({"plan", "--n", "8", "--entry-bits", "1", "--format", "csv"}).code, kExitUsage);
  EXPECT_EQ(cli({"plan", "--curve", "--n", "8"}).code, kExitUsage);
  EXPECT_EQ(cli({"plan", "--n", "0", "--entry-bits", "1"}).code, kExitUsage);
  EXPECT_EQ(cli({"plan", "--n", "abc"}).code, kExitUsage);
  const auto bad = write_file("plan_bad.json", R"({"block_stats": {"n_t0": 1}})");
  EXPECT_EQ(cli({"plan", "--config", bad}).code, kExitData);
}

TEST(Cli, UsageAndHelp) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"launch"}).code, kExitUsage);
  const auto help = cli({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("analyze"), std::string::npos);
  EXPECT_EQ(cli({"--version"}).out, "0.1.0\n");
}

TEST(Transcript, RecordRoundTrip) {
  RunConfig cfg;
  cfg.m = 3;
  cfg.entry_bits = 2;
  cfg.link(Link::kUserDc2).p_leak = 0.5;
  cfg.link(Link::kUserDc1).p_abort = 0.2;
  cfg.seed = 12;
  for (const auto& rec : run_batch(cfg, 50, random_inputs(cfg))) {
    const auto j = record_to_json(rec);
    EXPECT_EQ(record_to_json(record_from_json(j)).dump(), j.dump());
  }
}

TEST(Experiment, InputsCycleAndDigestIsStable) {
  const auto j = Json::parse(R"({"protocol": "xor", "n": 3, "inputs": [{"index": 1}, {"index": "3:c"}]})");
  const auto ex = parse_experiment(j);
  ASSERT_EQ(ex.inputs.size(), 2U);
  const auto gen = ex.generator();
  SeededRng rng(1);
  EXPECT_EQ(std::get<xorp::SelectorVector>(gen(0, rng).x).bits, BitVector::FromString("100"));
  EXPECT_EQ(std::get<xorp::SelectorVector>(gen(1, rng).x).bits, BitVector::FromString("110"));
  EXPECT_EQ(std::get<xorp::SelectorVector>(gen(2, rng).x).bits, BitVector::FromString("100"));
  EXPECT_EQ(config_digest(j), config_digest(Json::parse(j.dump())));
  EXPECT_THROW(parse_experiment(Json::parse(R"({"protocol": "b2"})")), ConfigError);
  EXPECT_THROW(parse_experiment(Json::parse(R"({"protocol": "b2", "m": 65})")), ConfigError);
  EXPECT_THROW(parse_experiment(Json::parse(R"({"protocol": "b2", "m": 2, "index": [1, 3, 1]})")), ConfigError);
}

}  // namespace
}  // namespace qspir::cli
