#include "sclkin/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sclkin {

using nlohmann::json;

namespace {

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["hamiltonian"] = {{"kind", c.hamiltonian.kind},
                      {"coefficients", c.hamiltonian.coefficients},
                      {"P", c.hamiltonian.P}};
  j["grid"] = {{"K", c.grid.K}, {"states", c.grid.states}};
  j["kernel"] = {{"generator", c.kernel.generator},
                 {"step_size", c.kernel.step_size},
                 {"lambda", c.kernel.lambda},
                 {"matrix", c.kernel.matrix}};
  j["domain"] = {{"L", c.domain.L}, {"T", c.domain.T}};
  j["solver"] = {{"scheme", c.solver.scheme},
                 {"dt", c.solver.dt},
                 {"substeps_per_output", c.solver.substeps_per_output}};
  j["montecarlo"] = {{"M", c.montecarlo.M},
                     {"seed", c.montecarlo.seed},
                     {"workers", c.montecarlo.workers}};
  j["propagation"] = {{"num_test_functions", c.propagation.num_test_functions},
                      {"z_threshold", c.propagation.z_threshold},
                      {"min_pass", c.propagation.min_pass},
                      {"chi2_min_p", c.propagation.chi2_min_p}};
  j["coupling"] = {{"L1", c.coupling.L1}, {"L2", c.coupling.L2}};
  j["lemma5"] = {{"chains", c.lemma5.chains},
                 {"probe_times", c.lemma5.probe_times},
                 {"dt_fd", c.lemma5.dt_fd},
                 {"solver_dt", c.lemma5.solver_dt}};
  j["convergence"] = {{"n_values", c.convergence.n_values}};
  j["burgers"] = {{"jump_size", c.burgers.jump_size},
                  {"K", c.burgers.K},
                  {"P", c.burgers.P},
                  {"t_max", c.burgers.t_max},
                  {"s_grid", c.burgers.s_grid},
                  {"budget_factor", c.burgers.budget_factor},
                  {"dt", c.burgers.dt}};
  j["output"] = {{"directory", c.output.directory},
                 {"formats", c.output.formats},
                 {"events", c.output.events}};
  return j;
}

// Deep-merge src over dst, rejecting keys absent from the defaults.
void merge_checked(json& dst, const json& src, const std::string& where) {
  if (!src.is_object())
    throw std::invalid_argument("config: expected object at " + (where.empty() ? "root" : where));
  for (const auto& [key, value] : src.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!dst.contains(key)) throw std::invalid_argument("config: unknown key " + path);
    if (dst[key].is_object() && !dst[key].empty()) {
      merge_checked(dst[key], value, path);
    } else {
      dst[key] = value;
    }
  }
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  json full = config_to_json(c);
  merge_checked(full, j, "");
  try {
    const auto& h = full.at("hamiltonian");
    c.hamiltonian.kind = h.at("kind").get<std::string>();
    c.hamiltonian.coefficients = h.at("coefficients").get<std::vector<double>>();
    c.hamiltonian.P = h.at("P").get<double>();
    const auto& gr = full.at("grid");
    c.grid.K = gr.at("K").get<std::size_t>();
    c.grid.states = gr.at("states").get<std::vector<double>>();
    const auto& k = full.at("kernel");
    c.kernel.generator = k.at("generator").get<std::string>();
    c.kernel.step_size = k.at("step_size").get<double>();
    c.kernel.lambda = k.at("lambda").get<double>();
    c.kernel.matrix = k.at("matrix").get<std::vector<std::vector<double>>>();
    const auto& d = full.at("domain");
    c.domain.L = d.at("L").get<double>();
    c.domain.T = d.at("T").get<double>();
    const auto& s = full.at("solver");
    c.solver.scheme = s.at("scheme").get<std::string>();
    c.solver.dt = s.at("dt").get<double>();
    c.solver.substeps_per_output = s.at("substeps_per_output").get<int>();
    const auto& mc = full.at("montecarlo");
    c.montecarlo.M = mc.at("M").get<std::size_t>();
    c.montecarlo.seed = mc.at("seed").get<std::uint64_t>();
    c.montecarlo.workers = mc.at("workers").get<int>();
    const auto& pr = full.at("propagation");
    c.propagation.num_test_functions = pr.at("num_test_functions").get<int>();
    c.propagation.z_threshold = pr.at("z_threshold").get<double>();
    c.propagation.min_pass = pr.at("min_pass").get<int>();
    c.propagation.chi2_min_p = pr.at("chi2_min_p").get<double>();
    const auto& cp = full.at("coupling");
    c.coupling.L1 = cp.at("L1").get<double>();
    c.coupling.L2 = cp.at("L2").get<double>();
    const auto& l5 = full.at("lemma5");
    c.lemma5.chains = l5.at("chains").get<std::vector<std::vector<std::size_t>>>();
    c.lemma5.probe_times = l5.at("probe_times").get<std::vector<double>>();
    c.lemma5.dt_fd = l5.at("dt_fd").get<double>();
    c.lemma5.solver_dt = l5.at("solver_dt").get<double>();
    const auto& cv = full.at("convergence");
    c.convergence.n_values = cv.at("n_values").get<std::vector<int>>();
    const auto& b = full.at("burgers");
    c.burgers.jump_size = b.at("jump_size").get<double>();
    c.burgers.K = b.at("K").get<std::size_t>();
    c.burgers.P = b.at("P").get<double>();
    c.burgers.t_max = b.at("t_max").get<double>();
    c.burgers.s_grid = b.at("s_grid").get<std::vector<double>>();
    c.burgers.budget_factor = b.at("budget_factor").get<double>();
    c.burgers.dt = b.at("dt").get<double>();
    const auto& o = full.at("output");
    c.output.directory = o.at("directory").get<std::string>();
    c.output.formats = o.at("formats").get<std::vector<std::string>>();
    c.output.events = o.at("events").get<bool>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: parse error: ") + e.what());
  }
  return config_from_json(j);
}

std::string config_to_json_text(const ExperimentConfig& cfg, int indent) {
  return config_to_json(cfg).dump(indent);
}

ExperimentConfig load_config(const std::string& config_path,
                             const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("config: cannot open " + config_path);
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw std::invalid_argument("config: parse error in " + config_path + ": " + e.what());
    }
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: override must be key=value: " + ov);
    const std::string path = ov.substr(0, eq);
    const std::string text = ov.substr(eq + 1);
    json value;
    try {
      value = json::parse(text);
    } catch (const json::exception&) {
      value = text;  // bare strings are fine
    }
    json* node = &doc;
    std::istringstream keys(path);
    std::string key, next;
    if (!std::getline(keys, key, '.'))
      throw std::invalid_argument("config: empty override key");
    while (std::getline(keys, next, '.')) {
      node = &((*node)[key]);
      key = next;
    }
    (*node)[key] = value;
  }
  return config_from_json(doc);
}

Hamiltonian make_hamiltonian(const ExperimentConfig& cfg) {
  const auto& h = cfg.hamiltonian;
  if (h.kind == "quadratic") return Hamiltonian::quadratic(h.P);
  if (h.kind == "scaled_quadratic") {
    if (h.coefficients.size() != 1)
      throw std::invalid_argument("config: scaled_quadratic needs coefficients = [c]");
    return Hamiltonian::scaled_quadratic(h.coefficients[0], h.P);
  }
  if (h.kind == "polynomial") {
    if (h.coefficients.empty())
      throw std::invalid_argument("config: polynomial needs coefficients");
    return Hamiltonian::polynomial(h.coefficients, h.P);
  }
  throw std::invalid_argument("config: unknown hamiltonian.kind " + h.kind);
}

StateGrid make_grid(const ExperimentConfig& cfg) {
  if (!cfg.grid.states.empty()) {
    StateGrid g(cfg.grid.states);
    if (g.P() != cfg.hamiltonian.P)
      throw std::invalid_argument("config: grid.states must end at hamiltonian.P");
    return g;
  }
  return StateGrid::uniform(cfg.grid.K, cfg.hamiltonian.P);
}

RateKernel kernel_single_step(const StateGrid& grid, double lambda, double step_size) {
  const std::size_t K = grid.max_index();
  const double tol = 1e-9 * std::max(1.0, grid.P());
  RateKernel g(grid.size());
  for (std::size_t i = 0; i < K; ++i) {
    const double target = grid.state(i) + step_size;
    std::size_t j = K;
    if (target < grid.P() - tol) {
      // Nearest grid state within a roundoff tolerance.
      double best = tol;
      bool found = false;
      for (std::size_t m = i + 1; m <= K; ++m) {
        const double d = std::abs(grid.state(m) - target);
        if (d <= best) {
          best = d;
          j = m;
          found = true;
        }
      }
      if (!found) {
        std::ostringstream os;
        os << "single_step: state " << grid.state(i) << " + " << step_size
           << " is not a grid state";
        throw std::invalid_argument(os.str());
      }
    }
    g(i, j) = lambda;
  }
  g(K, K) = lambda;
  return g;
}

RateKernel kernel_uniform_up(const StateGrid& grid, double lambda) {
  const std::size_t K = grid.max_index();
  RateKernel g(grid.size());
  for (std::size_t i = 0; i < K; ++i) {
    const double w = lambda / static_cast<double>(K - i);
    for (std::size_t j = i + 1; j <= K; ++j) g(i, j) = w;
  }
  g(K, K) = lambda;
  return g;
}

RateKernel make_kernel(const ExperimentConfig& cfg, const StateGrid& grid) {
  const auto& k = cfg.kernel;
  if (k.generator == "single_step") return kernel_single_step(grid, k.lambda, k.step_size);
  if (k.generator == "uniform_up") return kernel_uniform_up(grid, k.lambda);
  if (k.generator == "custom_matrix") {
    if (k.matrix.size() != grid.size())
      throw std::invalid_argument("config: kernel.matrix must be (K+1)x(K+1)");
    RateKernel g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (k.matrix[i].size() != grid.size())
        throw std::invalid_argument("config: kernel.matrix must be (K+1)x(K+1)");
      for (std::size_t j = 0; j < grid.size(); ++j) g(i, j) = k.matrix[i][j];
    }
    return g;
  }
  throw std::invalid_argument("config: unknown kernel.generator " + k.generator);
}

SolverScheme make_scheme(const ExperimentConfig::Solver& s) {
  SolverScheme scheme;
  if (s.scheme == "rk4") scheme.kind = SolverScheme::Kind::rk4;
  else if (s.scheme == "rescaled_euler") scheme.kind = SolverScheme::Kind::rescaled_euler;
  else throw std::invalid_argument("config: unknown solver.scheme " + s.scheme);
  scheme.dt = s.dt;
  scheme.substeps_per_output = s.substeps_per_output;
  return scheme;
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  auto guard = [&](const char* what, auto&& fn) -> bool {
    try {
      fn();
      return true;
    } catch (const std::exception& e) {
      errors.push_back(std::string(what) + ": " + e.what());
      return false;
    }
  };

  Hamiltonian h = Hamiltonian::quadratic(1.0);
  if (!guard("hamiltonian", [&] { h = make_hamiltonian(cfg); })) return errors;
  {
    const auto v = validate_hamiltonian(h, 101);
    for (const auto& viol : v.violations) {
      errors.push_back("hamiltonian " + viol.check + " at p = " + std::to_string(viol.location) +
                       ": " + viol.detail);
    }
  }
  StateGrid grid = StateGrid::uniform(1, 1.0);
  if (!guard("grid", [&] { grid = make_grid(cfg); })) return errors;
  RateKernel g(grid.size());
  if (!guard("kernel", [&] { g = make_kernel(cfg, grid); })) return errors;
  {
    const auto v = validate_rate_kernel(g, cfg.kernel.lambda);
    for (const auto& viol : v.violations) errors.push_back("kernel " + viol);
  }
  if (!(cfg.domain.L > 0.0)) errors.push_back("domain.L must be positive");
  if (!(cfg.domain.T >= 0.0)) errors.push_back("domain.T must be nonnegative");
  if (!(cfg.solver.dt > 0.0)) errors.push_back("solver.dt must be positive");
  if (cfg.montecarlo.M < 2) errors.push_back("montecarlo.M must be at least 2");
  if (cfg.propagation.num_test_functions < 1 ||
      cfg.propagation.num_test_functions > static_cast<int>(TestFunction::default_family().size()))
    errors.push_back("propagation.num_test_functions out of range");
  if (!(cfg.coupling.L1 < cfg.coupling.L2)) errors.push_back("coupling requires L1 < L2");
  return errors;
}

}  // namespace sclkin
