#include "sclkin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sclkin/estimators.hpp"
#include "sclkin/sampling.hpp"
#include "sclkin/stats_math.hpp"

namespace sclkin {

using nlohmann::json;

namespace {

MarginalMeasure clamp_nonneg(const MarginalMeasure& m) {
  MarginalMeasure out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = std::max(m[i], 0.0);
  return out;
}

RateKernel clamp_nonneg(const RateKernel& k) {
  RateKernel out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j) out(i, j) = std::max(k(i, j), 0.0);
  return out;
}

double two_sample_z(const MeanEstimate& a, const MeanEstimate& b) {
  const double denom = std::hypot(a.std_error, b.std_error);
  if (denom == 0.0) {
    if (a.mean == b.mean) return 0.0;
    return a.mean > b.mean ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
  }
  return (a.mean - b.mean) / denom;
}

std::string describe(const TestFunction& J) {
  std::ostringstream os;
  os << J.alpha() << "*exp(-" << J.beta() << "x)+" << J.gamma();
  return os.str();
}

}  // namespace

ExperimentReport verify_propagation(const RateKernel& g, double lambda,
                                    const StateGrid& grid, const Hamiltonian& h,
                                    const PropagationParams& params,
                                    const RandomStreamPolicy& streams) {
  const std::size_t M = params.paths;
  if (M < 2) throw std::invalid_argument("verify_propagation: need at least 2 paths");
  if (params.test_functions.empty())
    throw std::invalid_argument("verify_propagation: empty test function family");

  KineticSolution kin = solve_kinetic(g, lambda, grid, h, params.T, params.scheme);
  MarginalSolution mar = solve_marginal(kin.trajectory, grid, h, params.T, params.scheme);

  const MarginalMeasure ell_T = clamp_nonneg(mar.trajectory.values.back());
  const RateKernel f_T = clamp_nonneg(kin.trajectory.kernel(kin.trajectory.size() - 1));

  const std::size_t n_J = params.test_functions.size();
  std::vector<std::vector<double>> side_a(n_J, std::vector<double>(M));
  std::vector<std::vector<double>> side_b(n_J, std::vector<double>(M));
  std::vector<std::size_t> evolved_state(M);

  for_each_path(M, params.workers, [&](std::size_t i) {
    PathRng rng = streams.stream(i);
    Configuration q = sample_initial_path(g, lambda, grid, params.L, h, rng);
    q = simulate_pdmp(std::move(q), h, kin.trajectory, grid, 0.0, params.T, rng);
    for (std::size_t j = 0; j < n_J; ++j) {
      side_a[j][i] = laplace_functional(q, params.test_functions[j]);
    }
    evolved_state[i] = grid.index_of(q.rho(0));
  });
  for_each_path(M, params.workers, [&](std::size_t i) {
    PathRng rng = streams.stream(M + i);
    Configuration q = sample_candidate(ell_T, f_T, lambda, grid, params.L, h, rng);
    for (std::size_t j = 0; j < n_J; ++j) {
      side_b[j][i] = laplace_functional(q, params.test_functions[j]);
    }
  });

  ExperimentReport report;
  report.experiment = "propagation";
  report.seed = streams.master_seed;
  report.paths = M;
  {
    json p;
    p["lambda"] = lambda;
    p["L"] = params.L;
    p["T"] = params.T;
    p["paths_per_side"] = M;
    p["z_threshold"] = params.z_threshold;
    p["min_pass"] = params.min_pass;
    p["chi2_min_p"] = params.chi2_min_p;
    p["dt"] = params.scheme.dt;
    p["test_functions"] = json::array();
    for (const auto& J : params.test_functions) p["test_functions"].push_back(describe(J));
    report.parameters_json = p.dump();
  }

  int n_pass = 0;
  for (std::size_t j = 0; j < n_J; ++j) {
    const MeanEstimate ea = mean_and_stderr(side_a[j]);
    const MeanEstimate eb = mean_and_stderr(side_b[j]);
    const double z = two_sample_z(ea, eb);
    StatisticRecord rec;
    rec.name = "laplace[" + describe(params.test_functions[j]) + "]";
    rec.kind = "z";
    rec.estimate = ea.mean - eb.mean;
    rec.std_error = std::hypot(ea.std_error, eb.std_error);
    rec.reference = 0.0;
    rec.score = z;
    rec.pass = std::abs(z) <= params.z_threshold;
    if (rec.pass) ++n_pass;
    report.statistics.push_back(std::move(rec));
  }
  const bool family_pass = n_pass >= std::min<int>(params.min_pass, static_cast<int>(n_J));

  std::vector<double> observed(grid.size(), 0.0), expected(grid.size(), 0.0);
  for (std::size_t i = 0; i < M; ++i) observed[evolved_state[i]] += 1.0;
  const double ell_total = ell_T.total();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    expected[k] = static_cast<double>(M) * (ell_total > 0.0 ? ell_T[k] / ell_total : 0.0);
    StatisticRecord rec;
    rec.name = "x0_count[" + std::to_string(k) + "]";
    rec.kind = "count";
    rec.estimate = observed[k];
    rec.reference = expected[k];
    rec.pass = true;
    report.statistics.push_back(std::move(rec));
  }
  const ChiSquareResult chi2 = chi_square_gof(observed, expected);
  {
    StatisticRecord rec;
    rec.name = "x0_distribution_chi2";
    rec.kind = "p";
    rec.estimate = chi2.statistic;
    rec.reference = chi2.df;
    rec.score = chi2.p_value;
    rec.pass = chi2.p_value > params.chi2_min_p;
    report.statistics.push_back(std::move(rec));
  }

  if (kin.row_sum_flagged) {
    std::ostringstream os;
    os << "kinetic row-sum drift " << kin.max_row_sum_drift << " exceeded 1e-6";
    report.warnings.push_back(os.str());
  }
  {
    std::ostringstream os;
    os << n_pass << "/" << n_J << " Laplace functionals within |z| <= "
       << params.z_threshold << "; x0 chi2 p = " << chi2.p_value;
    report.notes.push_back(os.str());
  }
  report.pass = family_pass && report.statistics.back().pass;
  return report;
}

ExperimentReport verify_coupling(const RateKernel& g, double lambda, const StateGrid& grid,
                                 const Hamiltonian& h, const CouplingParams& params,
                                 const RandomStreamPolicy& streams) {
  if (!(params.L1 < params.L2))
    throw std::invalid_argument("verify_coupling: need L1 < L2");
  const double hp = max_speed(h);
  if (!(params.T * hp < params.L1))
    throw std::invalid_argument("verify_coupling: need T * H'(P) < L1");
  const std::size_t M = params.paths;
  if (M < 1) throw std::invalid_argument("verify_coupling: need at least 1 path");

  KineticSolution kin;
  if (params.T > 0.0) {
    kin = solve_kinetic(g, lambda, grid, h, params.T, params.scheme);
  } else {
    kin.lambda = lambda;
    kin.trajectory.push_back(0.0, g);
  }
  const double window = params.L1 - params.T * hp;
  const double edge = window - params.edge_guard;

  std::vector<unsigned char> violated(M, 0);
  for_each_path(M, params.workers, [&](std::size_t i) {
    PathRng rng_init = streams.stream(i);
    Configuration wide = sample_initial_path(g, lambda, grid, params.L2, h, rng_init);

    std::vector<double> xs, vals;
    for (std::size_t j = 0; j < wide.size(); ++j) {
      const double x = wide.jump_position(j);
      if (x <= params.L1) {
        xs.push_back(x);
        vals.push_back(wide.rho(j + 1));
      }
    }
    Configuration narrow(params.L1, wide.rho(0), xs, vals, h);

    PathRng rng_b1 = streams.stream(M + i);
    PathRng rng_b2 = streams.stream(2 * M + i);
    const Configuration q1 =
        simulate_pdmp(std::move(narrow), h, kin.trajectory, grid, 0.0, params.T, rng_b1);
    const Configuration q2 =
        simulate_pdmp(std::move(wide), h, kin.trajectory, grid, 0.0, params.T, rng_b2);

    // Bitwise agreement of the step functions on [0, window): same left
    // value, identical jump positions and values below the guard band.
    bool ok = (q1.rho(0) == q2.rho(0));
    std::size_t j1 = 0, j2 = 0;
    while (ok) {
      const bool in1 = j1 < q1.size() && q1.jump_position(j1) < edge;
      const bool in2 = j2 < q2.size() && q2.jump_position(j2) < edge;
      if (!in1 && !in2) break;
      if (in1 != in2) {
        ok = false;
        break;
      }
      ok = q1.jump_position(j1) == q2.jump_position(j2) && q1.rho(j1 + 1) == q2.rho(j2 + 1);
      ++j1;
      ++j2;
    }
    violated[i] = ok ? 0 : 1;
  });

  double total_violations = 0.0;
  for (auto v : violated) total_violations += v;

  ExperimentReport report;
  report.experiment = "coupling";
  report.seed = streams.master_seed;
  report.paths = M;
  {
    json p;
    p["lambda"] = lambda;
    p["L1"] = params.L1;
    p["L2"] = params.L2;
    p["T"] = params.T;
    p["paths"] = M;
    p["window"] = window;
    p["dt"] = params.scheme.dt;
    report.parameters_json = p.dump();
  }
  StatisticRecord rec;
  rec.name = "window_violations";
  rec.kind = "count";
  rec.estimate = total_violations;
  rec.reference = 0.0;
  rec.score = total_violations;
  rec.pass = total_violations == 0.0;
  report.statistics.push_back(rec);
  {
    std::ostringstream os;
    os << "evolved step functions compared bitwise on [0," << window << ")";
    report.notes.push_back(os.str());
  }
  report.pass = rec.pass;
  return report;
}

ExperimentReport verify_lstar(const RateKernel& g, double lambda, const StateGrid& grid,
                              const Hamiltonian& h, const LstarParams& params) {
  if (params.chains.empty()) throw std::invalid_argument("verify_lstar: no chains");
  if (!(params.dt_fd > 0.0)) throw std::invalid_argument("verify_lstar: dt_fd must be positive");

  SolverScheme scheme = params.scheme;
  scheme.substeps_per_output = 1;  // dense storage for index-exact differencing
  const double pad = 2.0 * params.dt_fd;
  KineticSolution kin = solve_kinetic(g, lambda, grid, h, params.T + pad, scheme);
  MarginalSolution mar = solve_marginal(kin.trajectory, grid, h, params.T + pad, scheme);

  const std::size_t half = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(0.5 * params.dt_fd / scheme.dt)));
  const std::size_t full = 2 * half;

  ExperimentReport report;
  report.experiment = "lstar";
  {
    json p;
    p["lambda"] = lambda;
    p["T"] = params.T;
    p["dt_fd"] = params.dt_fd;
    p["dt"] = scheme.dt;
    p["probe_times"] = params.probe_times;
    p["chains"] = params.chains;
    report.parameters_json = p.dump();
  }

  auto density = [&](std::size_t k, const std::vector<std::size_t>& chain) {
    double d = mar.trajectory.values[k][chain[0]];
    const RateKernel& f = kin.trajectory.kernel(k);
    for (std::size_t c = 1; c < chain.size(); ++c) d *= f(chain[c - 1], chain[c]);
    return d;
  };

  double max_err_full = 0.0, max_err_half = 0.0;
  for (const auto& chain : params.chains) {
    for (double t : params.probe_times) {
      const std::size_t k0 =
          static_cast<std::size_t>(std::llround(t / scheme.dt));
      if (k0 + full >= kin.trajectory.size()) {
        report.warnings.push_back("probe beyond solved range; skipped");
        continue;
      }
      std::ostringstream label;
      label << "chain(";
      for (std::size_t c = 0; c < chain.size(); ++c)
        label << (c ? "," : "") << chain[c];
      label << ")@t=" << kin.trajectory.time(k0);

      double weight;
      try {
        weight = lstar_weight(chain, mar.trajectory.values[k0],
                              kin.trajectory.kernel(k0), grid, h);
      } catch (const std::domain_error& e) {
        report.warnings.push_back(label.str() + ": " + e.what() + "; skipped");
        continue;
      }
      const double d0 = density(k0, chain);
      const double model = weight * d0;

      auto fd = [&](std::size_t steps) {
        const double dt_eff = kin.trajectory.time(k0 + steps) - kin.trajectory.time(k0);
        return (density(k0 + steps, chain) - d0) / dt_eff;
      };
      const double denom = std::max(std::abs(model), 1e-12);
      const double err_full = std::abs(fd(full) - model) / denom;
      const double err_half = std::abs(fd(half) - model) / denom;
      max_err_full = std::max(max_err_full, err_full);
      max_err_half = std::max(max_err_half, err_half);

      StatisticRecord rec;
      rec.name = label.str();
      rec.kind = "value";
      rec.estimate = fd(full);
      rec.reference = model;
      rec.score = err_full;
      rec.pass = true;
      report.statistics.push_back(std::move(rec));
    }
  }

  if (max_err_half == 0.0) {
    StatisticRecord rec;
    rec.name = "error_ratio";
    rec.kind = "value";
    rec.estimate = 0.0;
    rec.reference = 2.0;
    rec.pass = max_err_full == 0.0;
    report.statistics.push_back(rec);
    report.pass = rec.pass;
    return report;
  }

  const double ratio = max_err_full / max_err_half;
  const double lo = 2.0 * (1.0 - params.ratio_tol);
  const double hi = 2.0 * (1.0 + params.ratio_tol);
  {
    StatisticRecord rec;
    rec.name = "max_rel_error_dt";
    rec.kind = "value";
    rec.estimate = max_err_full;
    rec.pass = true;
    report.statistics.push_back(rec);
    rec.name = "max_rel_error_dt_half";
    rec.estimate = max_err_half;
    report.statistics.push_back(rec);
    rec.name = "error_ratio";
    rec.estimate = ratio;
    rec.reference = 2.0;
    rec.score = ratio;
    rec.pass = ratio >= lo && ratio <= hi;
    report.statistics.push_back(rec);
    report.pass = rec.pass;
  }
  return report;
}

ExperimentReport burgers_closure_check(const BurgersParams& params, const Hamiltonian& h) {
  const auto coeffs = h.coefficients();
  const bool quadratic = coeffs.size() == 3 && coeffs[0] == 0.0 && coeffs[1] == 0.0 &&
                         coeffs[2] > 0.0;
  if (!quadratic)
    throw std::invalid_argument("burgers_closure_check: requires H(p) = c p^2");
  const double P = h.upper_bound();
  const std::size_t K = params.K;
  if (K < 8) throw std::invalid_argument("burgers_closure_check: K too small");
  const double spacing = P / static_cast<double>(K);
  const long step_idx = std::lround(params.jump_size / spacing);
  if (step_idx < 1 || std::abs(spacing * static_cast<double>(step_idx) - params.jump_size) > 1e-12)
    throw std::invalid_argument("burgers_closure_check: jump size must be a grid multiple");

  const StateGrid grid = StateGrid::uniform(K, P);
  RateKernel g(grid.size());
  for (std::size_t i = 0; i < K; ++i) {
    g(i, std::min(i + static_cast<std::size_t>(step_idx), K)) = params.lambda;
  }
  g(K, K) = params.lambda;

  SolverScheme scheme = params.scheme;
  scheme.substeps_per_output = 1;
  KineticSolution kin = solve_kinetic(g, params.lambda, grid, h, params.t_max, scheme);
  const std::size_t n_t = kin.trajectory.size();
  const std::size_t n_s = params.s_grid.size();
  if (n_t < 5)
    throw std::invalid_argument("burgers_closure_check: need at least 5 output times");

  ExperimentReport report;
  report.experiment = "burgers";
  {
    json p;
    p["lambda"] = params.lambda;
    p["jump_size"] = params.jump_size;
    p["K"] = K;
    p["P"] = P;
    p["t_max"] = params.t_max;
    p["dt"] = scheme.dt;
    p["s_grid"] = params.s_grid;
    p["budget_factor"] = params.budget_factor;
    report.parameters_json = p.dump();
  }

  const double c_rate = params.lambda * max_speed(h);
  const double curvature = h.second_derivative(0.0);

  // Row-0 tail mass within 5 grid steps of P, per stored time.
  std::vector<double> tail5(n_t, 0.0);
  bool trunc_warned = false;
  for (std::size_t k = 0; k < n_t; ++k) {
    const RateKernel& f = kin.trajectory.kernel(k);
    for (std::size_t j = K >= 5 ? K - 5 : 0; j <= K; ++j) tail5[k] += std::max(f(0, j), 0.0);
    if (!trunc_warned && tail5[k] > 1e-6) {
      std::ostringstream os;
      os << "truncation: row-0 mass within 5 grid steps of P reached " << tail5[k]
         << " at t = " << kin.trajectory.time(k);
      report.warnings.push_back(os.str());
      trunc_warned = true;
    }
  }

  // Homogeneity of interior rows as increment laws.
  const std::size_t i_max = K / 2;
  double hom_residual = 0.0, hom_budget = 0.0;
  for (std::size_t k = 0; k < n_t; ++k) {
    const RateKernel& f = kin.trajectory.kernel(k);
    double worst = 0.0;
    for (std::size_t i = 1; i <= i_max; ++i) {
      double acc = 0.0;
      for (std::size_t u = 0; u <= K; ++u) {
        const double row_i = (i + u <= K) ? f(i, i + u) : 0.0;
        acc += std::abs(row_i - f(0, u));
      }
      worst = std::max(worst, acc);
    }
    hom_residual = std::max(hom_residual, worst);
    double interior_tail = 0.0;
    for (std::size_t u = K - i_max; u <= K; ++u) interior_tail += std::max(f(0, u), 0.0);
    const double steps_so_far = kin.trajectory.time(k) / scheme.dt;
    const double float_floor =
        1e-12 * params.lambda * (1.0 + c_rate * kin.trajectory.time(k) * steps_so_far);
    hom_budget = std::max(hom_budget, 3.0 * interior_tail + float_floor);
  }

  // Laplace exponent of the row-0 increment law and its exact s-derivative.
  std::vector<std::vector<double>> psi(n_t, std::vector<double>(n_s, 0.0));
  std::vector<std::vector<double>> psi_s(n_t, std::vector<double>(n_s, 0.0));
  for (std::size_t k = 0; k < n_t; ++k) {
    const RateKernel& f = kin.trajectory.kernel(k);
    for (std::size_t si = 0; si < n_s; ++si) {
      const double s = params.s_grid[si];
      double a = 0.0, b = 0.0;
      for (std::size_t u = 1; u <= K; ++u) {
        const double inc = grid.state(u);
        const double w = f(0, u);
        if (w == 0.0) continue;
        const double e = std::exp(s * inc);
        a += (e - 1.0) * w;
        b += inc * e * w;
      }
      psi[k][si] = a;
      psi_s[k][si] = b;
    }
  }

  auto dt_at = [&](std::size_t k) {
    return kin.trajectory.time(k + 1) - kin.trajectory.time(k);
  };

  // Orientation sign from the first interior time.
  double sign = 1.0;
  {
    double plus = 0.0, minus = 0.0;
    const std::size_t k = 1;
    const double span = kin.trajectory.time(2) - kin.trajectory.time(0);
    for (std::size_t si = 0; si < n_s; ++si) {
      const double fd = (psi[2][si] - psi[0][si]) / span;
      const double adv = curvature * psi[k][si] * psi_s[k][si];
      plus += std::abs(fd - adv);
      minus += std::abs(fd + adv);
    }
    sign = (plus <= minus) ? 1.0 : -1.0;
  }
  {
    std::ostringstream os;
    os << "orientation sign " << (sign > 0 ? "+1" : "-1")
       << " (residual = psi_t - sign * H'' * psi * psi_s)";
    report.notes.push_back(os.str());
  }

  double pde_residual = 0.0, pde_budget = 0.0, worst_ratio = 0.0;
  for (std::size_t k = 1; k + 1 < n_t; ++k) {
    const double span = kin.trajectory.time(k + 1) - kin.trajectory.time(k - 1);
    const double dt_loc = dt_at(k);
    for (std::size_t si = 0; si < n_s; ++si) {
      const double fd = (psi[k + 1][si] - psi[k - 1][si]) / span;
      const double resid = fd - sign * curvature * psi[k][si] * psi_s[k][si];

      // Third-derivative estimate for the central-difference budget.
      std::size_t kl = std::max<std::size_t>(2, std::min(k, n_t - 3));
      const double d3 = (psi[kl + 2][si] - 2.0 * psi[kl + 1][si] + 2.0 * psi[kl - 1][si] -
                         psi[kl - 2][si]) /
                        (2.0 * dt_loc * dt_loc * dt_loc);
      const double diff_budget = dt_loc * dt_loc / 6.0 * std::abs(d3) +
                                 4e-16 * std::abs(psi[k][si]) / dt_loc;
      const double s = params.s_grid[si];
      const double trunc_budget =
          3.0 * c_rate * (1.0 + std::abs(s) * P * std::exp(std::max(s, 0.0) * P)) * tail5[k];
      const double budget = diff_budget + trunc_budget;

      pde_residual = std::max(pde_residual, std::abs(resid));
      pde_budget = std::max(pde_budget, budget);
      if (budget > 0.0) worst_ratio = std::max(worst_ratio, std::abs(resid) / budget);
    }
  }

  {
    StatisticRecord rec;
    rec.name = "homogeneity_residual";
    rec.kind = "residual";
    rec.estimate = hom_residual;
    rec.reference = params.budget_factor * hom_budget;
    rec.score = hom_budget > 0.0 ? hom_residual / hom_budget : 0.0;
    rec.pass = hom_residual <= params.budget_factor * hom_budget;
    report.statistics.push_back(rec);
  }
  {
    StatisticRecord rec;
    rec.name = "pde_residual";
    rec.kind = "residual";
    rec.estimate = pde_residual;
    rec.reference = params.budget_factor * pde_budget;
    rec.score = worst_ratio;
    rec.pass = worst_ratio <= params.budget_factor;
    report.statistics.push_back(rec);
  }
  {
    StatisticRecord rec;
    rec.name = "psi0_exact";
    rec.kind = "residual";
    double worst = 0.0;
    for (std::size_t si = 0; si < n_s; ++si) {
      const double expect =
          params.lambda * (std::exp(params.s_grid[si] * params.jump_size) - 1.0);
      worst = std::max(worst, std::abs(psi[0][si] - expect));
    }
    rec.estimate = worst;
    rec.reference = 1e-12;
    rec.pass = worst <= 1e-12;
    report.statistics.push_back(rec);
  }

  report.pass = true;
  for (const auto& s : report.statistics) report.pass = report.pass && s.pass;
  return report;
}

}  // namespace sclkin
