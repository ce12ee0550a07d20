// qspir._core: JSON in, JSON out. The Python package wraps these with
// json.loads/dumps.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qspir/experiment.h"
#include "qspir/privacy_analyzer.h"
#include "qspir/resource_planner.h"

namespace py = pybind11;

namespace {

using namespace qspir;

ExperimentConfig load(const std::string& config) { return parse_experiment(Json::parse(config)); }

std::vector<std::string> run_experiment(const std::string& config) {
  const auto ex = load(config);
  const auto gen = ex.generator();
  std::vector<std::string> out;
  out.reserve(ex.trials);
  for (std::uint64_t t = 0; t < ex.trials; ++t) out.push_back(record_to_json(run_trial(ex.run, t, gen)).dump());
  return out;
}

std::string check_bounds(const std::string& config) {
  const auto ex = load(config);
  const auto gen = ex.generator();
  auto params = analysis::SecurityParameters::FromLinks(ex.run.links);
  if (ex.eps_cor) params.eps_cor = *ex.eps_cor;
  if (ex.eps) params.eps = *ex.eps;
  analysis::BoundsAccumulator acc;
  for (std::uint64_t t = 0; t < ex.trials; ++t) acc.add(run_trial(ex.run, t, gen));
  return analysis::bounds_report_to_json(acc.finish(params)).dump();
}

std::string digest(const std::string& config) { return config_digest(load(config).source); }

bool db_privacy_compliant(const std::string& q1, const std::string& q2, int m) {
  const auto a = b2::decode_query(BitVector::FromString(q1), m);
  const auto b = b2::decode_query(BitVector::FromString(q2), m);
  return analysis::db_privacy_check(a, b, m).compliant;
}

std::pair<std::uint64_t, std::uint64_t> comm_cost(const std::string& protocol, std::uint64_t n, std::uint64_t l) {
  const auto c = planner::comm_cost(parse_protocol(protocol), n, l);
  return {c.per_link_bits, c.inter_dc_key_bits};
}

std::string feasibility_curve(const std::string& protocol, std::uint64_t per_link, std::uint64_t inter_dc,
                              std::vector<std::uint64_t> grid) {
  if (grid.empty()) grid = planner::default_grid();
  return planner::curve_to_json(planner::feasibility_curve(parse_protocol(protocol), per_link, inter_dc, grid)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Two-database SPIR over QKD-style keys";
  mod.attr("__version__") = "0.1.0";

  py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);

  mod.def("run_experiment", &run_experiment, py::arg("config"),
          "Run every trial of a JSON config; returns one JSON record per trial.");
  mod.def("check_bounds", &check_bounds, py::arg("config"), "Run a config and return the bounds report as JSON.");
  mod.def("config_digest", &digest, py::arg("config"));
  mod.def("db_privacy_compliant", &db_privacy_compliant, py::arg("q1"), py::arg("q2"), py::arg("m"),
          "Wire-format queries as 0/1 strings.");
  mod.def("comm_cost", &comm_cost, py::arg("protocol"), py::arg("n"), py::arg("entry_bits"));
  mod.def("max_entry_size", [](const std::string& p, std::uint64_t n, std::uint64_t a, std::uint64_t b) {
    return planner::max_entry_size(parse_protocol(p), n, a, b);
  }, py::arg("protocol"), py::arg("n"), py::arg("per_link_budget"), py::arg("inter_dc_budget"));
  mod.def("feasibility_curve", &feasibility_curve, py::arg("protocol"), py::arg("per_link_budget"),
          py::arg("inter_dc_budget"), py::arg("n_grid") = std::vector<std::uint64_t>{});
  mod.def("key_length", [](double n_t0, double n_t1, double e_t1, double n_t, double e_t, double eps_cor,
                           double eps_prime, double eps_hat, double eps_pa) {
    return planner::key_length({n_t0, n_t1, e_t1, n_t, e_t}, {eps_cor, eps_prime, eps_hat, eps_pa});
  }, py::arg("n_t0"), py::arg("n_t1"), py::arg("e_t1"), py::arg("n_t"), py::arg("e_t"), py::arg("eps_cor") = 1e-15,
     py::arg("eps_prime") = 1e-10, py::arg("eps_hat") = 1e-10, py::arg("eps_pa") = 1e-10);
  mod.def("binary_entropy", &planner::binary_entropy, py::arg("x"));
  mod.def("cube_side", &planner::cube_side, py::arg("n"));
}
