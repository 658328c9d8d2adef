#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "sclkin/config.hpp"
#include "sclkin/report.hpp"

using namespace sclkin;

// ============================================================================
// Config parsing
// ============================================================================

TEST_CASE("defaults round-trip through JSON") {
  const ExperimentConfig def;
  const auto parsed = config_from_json_text(config_to_json_text(def));
  CHECK(config_to_json_text(parsed) == config_to_json_text(def));
  CHECK(parsed.kernel.lambda == 1.0);
  CHECK(parsed.montecarlo.M == 100000);
}

TEST_CASE("unknown keys are rejected with their location") {
  CHECK_THROWS_WITH_AS(config_from_json_text(R"({"solver":{"Dt":0.1}})"),
                       doctest::Contains("solver.Dt"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text(R"({"solvers":{}})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("not json"), std::invalid_argument);
}

TEST_CASE("overrides use dotted paths and JSON values") {
  const auto cfg = load_config(
      "", {"montecarlo.seed=42", "domain.T=0.25", "kernel.generator=uniform_up",
           "grid.states=[0,0.5,2]", "output.formats=[\"json\"]"});
  CHECK(cfg.montecarlo.seed == 42);
  CHECK(cfg.domain.T == 0.25);
  CHECK(cfg.kernel.generator == "uniform_up");
  CHECK(cfg.grid.states == std::vector<double>{0.0, 0.5, 2.0});
  CHECK(cfg.output.formats == std::vector<std::string>{"json"});
  CHECK_THROWS_AS(load_config("", {"montecarlo.seed"}), std::invalid_argument);
}

TEST_CASE("model builders honor the config") {
  ExperimentConfig cfg;
  const auto h = make_hamiltonian(cfg);
  CHECK(h.value(1.0) == doctest::Approx(0.5));
  const auto grid = make_grid(cfg);
  CHECK(grid.size() == 3);
  const auto g = make_kernel(cfg, grid);
  CHECK(g(0, 1) == 1.0);
  CHECK(g(2, 2) == 1.0);

  cfg.kernel.generator = "custom_matrix";
  cfg.kernel.matrix = {{0, 1, 0}, {0, 0, 1}, {0, 0, 1}};
  const auto gc = make_kernel(cfg, grid);
  CHECK(gc(1, 2) == 1.0);
  cfg.kernel.matrix = {{0, 1}, {0, 0}};
  CHECK_THROWS_AS(make_kernel(cfg, grid), std::invalid_argument);
}

TEST_CASE("validation rejects assumption violations before any run") {
  ExperimentConfig cfg;
  CHECK(validate_config(cfg).empty());

  ExperimentConfig concave = cfg;
  concave.hamiltonian.kind = "polynomial";
  concave.hamiltonian.coefficients = {0.0, 0.0, -1.0};
  CHECK_FALSE(validate_config(concave).empty());

  ExperimentConfig bad_rows = cfg;
  bad_rows.kernel.generator = "custom_matrix";
  bad_rows.kernel.matrix = {{0, 1, 0}, {0, 0, 2}, {0, 0, 1}};
  CHECK_FALSE(validate_config(bad_rows).empty());

  ExperimentConfig bad_coupling = cfg;
  bad_coupling.coupling.L1 = 12.0;
  CHECK_FALSE(validate_config(bad_coupling).empty());
}

// ============================================================================
// Reports
// ============================================================================

namespace {

ExperimentReport sample_report() {
  ExperimentReport r;
  r.experiment = "demo";
  r.parameters_json = R"({"lambda":1.0})";
  r.seed = 77;
  r.paths = 1000;
  StatisticRecord s;
  s.name = "stat";
  s.kind = "z";
  s.estimate = 0.125;
  s.std_error = 0.5;
  s.reference = 0.0;
  s.score = 0.25;
  s.pass = true;
  r.statistics.push_back(s);
  r.warnings.push_back("warning text");
  r.notes.push_back("note text");
  r.pass = true;
  r.wall_seconds = 1.5;
  return r;
}

}  // namespace

TEST_CASE("reports round-trip through JSON, wall time excluded") {
  const auto r = sample_report();
  const std::string text = report_to_json(r);
  CHECK(text.find("wall") == std::string::npos);
  const auto back = report_from_json(text);
  CHECK(back.equivalent(r));
  CHECK(report_to_json(back) == text);
}

TEST_CASE("empty statistics serialize to a valid report") {
  ExperimentReport r;
  r.experiment = "empty";
  const auto back = report_from_json(report_to_json(r));
  CHECK(back.statistics.empty());
  CHECK(back.equivalent(r));
}

TEST_CASE("summary CSV has one row per statistic") {
  const auto csv = report_summary_csv(sample_report());
  std::size_t rows = 0;
  for (char c : csv) rows += c == '\n';
  CHECK(rows == 2);  // header + one record
  CHECK(csv.find("demo,stat,z,0.125") != std::string::npos);
}
