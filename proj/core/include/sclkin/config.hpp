#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sclkin/experiments.hpp"
#include "sclkin/hamiltonian.hpp"
#include "sclkin/kinetic_solver.hpp"
#include "sclkin/state_space.hpp"

namespace sclkin {

/// Resolved experiment configuration.  JSON schema mirrors the nested
/// structs; command-line overrides address fields by dotted path
/// (e.g. montecarlo.seed=7).
struct ExperimentConfig {
  struct Ham {
    std::string kind = "quadratic";  // quadratic | scaled_quadratic | polynomial
    std::vector<double> coefficients;  // scaled_quadratic: {c}; polynomial: ascending
    double P = 2.0;
  } hamiltonian;

  struct Grid {
    std::size_t K = 2;
    std::vector<double> states;  // optional explicit states (overrides K)
  } grid;

  struct Kernel {
    std::string generator = "single_step";  // single_step | uniform_up | custom_matrix
    double step_size = 1.0;
    double lambda = 1.0;
    std::vector<std::vector<double>> matrix;  // custom_matrix rows
  } kernel;

  struct Domain {
    double L = 5.0;
    double T = 1.0;
  } domain;

  struct Solver {
    std::string scheme = "rk4";  // rk4 | rescaled_euler
    double dt = 1e-3;
    int substeps_per_output = 1;
  } solver;

  struct MonteCarlo {
    std::size_t M = 100000;
    std::uint64_t seed = 123456789;
    int workers = 0;  // 0 = hardware concurrency
  } montecarlo;

  struct Propagation {
    int num_test_functions = 10;
    double z_threshold = 4.0;
    int min_pass = 9;
    double chi2_min_p = 1e-3;
  } propagation;

  struct Coupling {
    double L1 = 5.0;
    double L2 = 10.0;
  } coupling;

  struct Lemma5 {
    std::vector<std::vector<std::size_t>> chains = {{0, 1}, {0, 1, 2}};
    std::vector<double> probe_times = {0.0, 0.5};
    double dt_fd = 0.02;
    double solver_dt = 1e-4;
  } lemma5;

  struct Convergence {
    std::vector<int> n_values = {64, 128, 256, 512};
  } convergence;

  struct Burgers {
    double jump_size = 1.0;
    std::size_t K = 40;
    double P = 40.0;
    double t_max = 0.2;
    std::vector<double> s_grid = {-2.0, -1.75, -1.5, -1.25, -1.0, -0.75, -0.5, -0.25};
    double budget_factor = 10.0;
    double dt = 1e-3;
  } burgers;

  struct Output {
    std::string directory = "out";
    std::vector<std::string> formats = {"json", "csv"};
    bool events = false;
  } output;
};

/// Parse a config JSON document over the defaults; unknown keys are
/// config errors.  Throws std::invalid_argument with the key location.
ExperimentConfig config_from_json_text(const std::string& text);

/// Canonical resolved form (every field present).
std::string config_to_json_text(const ExperimentConfig& cfg, int indent = -1);

/// Load defaults, optionally merge a config file, then apply
/// key=value overrides addressed by dotted path.  Values parse as JSON
/// when possible, otherwise as strings.
ExperimentConfig load_config(const std::string& config_path,
                             const std::vector<std::string>& overrides);

Hamiltonian make_hamiltonian(const ExperimentConfig& cfg);
StateGrid make_grid(const ExperimentConfig& cfg);
RateKernel make_kernel(const ExperimentConfig& cfg, const StateGrid& grid);

/// Named kernel generators.
RateKernel kernel_single_step(const StateGrid& grid, double lambda, double step_size);
RateKernel kernel_uniform_up(const StateGrid& grid, double lambda);

SolverScheme make_scheme(const ExperimentConfig::Solver& s);

/// Pre-run validation: Hamiltonian structure, kernel structure, and
/// parameter sanity.  Empty result means the configuration is runnable.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

}  // namespace sclkin
