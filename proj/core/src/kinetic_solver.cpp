#include "sclkin/kinetic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sclkin {

RateKernel apply_kinetic_operator(const RateKernel& f, const DividedDifferenceTable& dd,
                                  KineticForm form) {
  const std::size_t n = f.size();
  if (dd.size() != n)
    throw std::invalid_argument("apply_kinetic_operator: dimension mismatch");

  // Per-row precomputation: R_i = sum_m H[v_i,v_m] f(i,m), S_i = row sum.
  std::vector<double> R(n, 0.0), S(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0, s = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double fim = f(i, m);
      r += dd(i, m) * fim;
      s += fim;
    }
    R[i] = r;
    S[i] = s;
  }

  RateKernel out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double gain = 0.0;
      for (std::size_t m = i; m <= j; ++m) {
        const double w = f(i, m) * f(m, j);
        if (w != 0.0) gain += (dd(m, j) - dd(i, m)) * w;
      }
      const double fij = f(i, j);
      double loss;
      if (form == KineticForm::direct) {
        loss = (R[j] - R[i]) * fij;
      } else {
        loss = (R[j] - R[i] - dd(i, j) * (S[j] - S[i])) * fij;
      }
      out(i, j) = gain - loss;
    }
  }
  return out;
}

RateKernel apply_kinetic_operator(const RateKernel& f, const StateGrid& grid,
                                  const Hamiltonian& h, KineticForm form) {
  if (f.size() != grid.size())
    throw std::invalid_argument("apply_kinetic_operator: kernel/grid dimension mismatch");
  DividedDifferenceTable dd(h, grid.states());
  return apply_kinetic_operator(f, dd, form);
}

std::vector<double> apply_marginal_operator(const MarginalMeasure& ell,
                                            const RateKernel& f,
                                            const DividedDifferenceTable& dd) {
  const std::size_t n = ell.size();
  if (f.size() != n || dd.size() != n)
    throw std::invalid_argument("apply_marginal_operator: dimension mismatch");
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double gain = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double w = ell[m] * f(m, j);
      if (w != 0.0) gain += dd(m, j) * w;
    }
    double rate_out = 0.0;
    for (std::size_t m = 0; m < n; ++m) rate_out += dd(j, m) * f(j, m);
    out[j] = gain - rate_out * ell[j];
  }
  return out;
}

std::vector<double> apply_marginal_operator(const MarginalMeasure& ell,
                                            const RateKernel& f, const StateGrid& grid,
                                            const Hamiltonian& h) {
  DividedDifferenceTable dd(h, grid.states());
  return apply_marginal_operator(ell, f, dd);
}

namespace {

struct StepPlan {
  std::size_t steps;
  double dt;
  double T;
  double time(std::size_t k) const {
    return (k == steps) ? T : dt * static_cast<double>(k);
  }
  double step_size(std::size_t k) const { return time(k + 1) - time(k); }
};

StepPlan make_plan(double T, double dt) {
  if (!(T > 0.0)) throw std::invalid_argument("solver: T must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
  std::size_t steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
  if (steps == 0) steps = 1;
  return {steps, dt, T};
}

void check_scheme(const SolverScheme& scheme, double c) {
  if (!(scheme.dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
  if (scheme.substeps_per_output < 1)
    throw std::invalid_argument("solver: substeps_per_output must be >= 1");
  if (scheme.kind == SolverScheme::Kind::rescaled_euler && c > 0.0 &&
      scheme.dt > 0.5 / c + 1e-15) {
    std::ostringstream os;
    os << "rescaled_euler: dt = " << scheme.dt << " violates the stability bound 1/(2c) = "
       << 0.5 / c;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

KineticSolution solve_kinetic(const RateKernel& g, double lambda, const StateGrid& grid,
                              const Hamiltonian& h, double T, const SolverScheme& scheme) {
  if (g.size() != grid.size())
    throw std::invalid_argument("solve_kinetic: kernel/grid dimension mismatch");
  {
    auto v = validate_rate_kernel(g, lambda);
    if (!v.valid())
      throw std::invalid_argument("solve_kinetic: invalid initial kernel: " +
                                  v.violations.front());
  }
  const double c = lambda * max_speed(h);
  check_scheme(scheme, c);
  const StepPlan plan = make_plan(T, scheme.dt);
  DividedDifferenceTable dd(h, grid.states());

  KineticSolution sol;
  sol.lambda = lambda;
  sol.min_entry = 0.0;

  auto record = [&](double t, RateKernel f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      sol.max_row_sum_drift = std::max(sol.max_row_sum_drift, std::abs(f.row_sum(i) - lambda));
      for (std::size_t j = 0; j < f.size(); ++j) sol.min_entry = std::min(sol.min_entry, f(i, j));
    }
    sol.trajectory.push_back(t, std::move(f));
  };

  record(0.0, g);

  if (scheme.kind == SolverScheme::Kind::rk4) {
    RateKernel f = g;
    for (std::size_t k = 0; k < plan.steps; ++k) {
      const double dt = plan.step_size(k);
      RateKernel k1 = apply_kinetic_operator(f, dd);
      RateKernel y = f;
      y.add_scaled(k1, 0.5 * dt);
      RateKernel k2 = apply_kinetic_operator(y, dd);
      y = f;
      y.add_scaled(k2, 0.5 * dt);
      RateKernel k3 = apply_kinetic_operator(y, dd);
      y = f;
      y.add_scaled(k3, dt);
      RateKernel k4 = apply_kinetic_operator(y, dd);
      f.add_scaled(k1, dt / 6.0);
      f.add_scaled(k2, dt / 3.0);
      f.add_scaled(k3, dt / 3.0);
      f.add_scaled(k4, dt / 6.0);
      if ((k + 1) % static_cast<std::size_t>(scheme.substeps_per_output) == 0 ||
          k + 1 == plan.steps) {
        record(plan.time(k + 1), f);
      }
    }
  } else {
    RateKernel hker = g;  // h(t) = exp(ct) f(t)
    for (std::size_t k = 0; k < plan.steps; ++k) {
      const double t_k = plan.time(k);
      const double dt = plan.step_size(k);
      RateKernel lk = apply_kinetic_operator(hker, dd);
      RateKernel next = hker;
      next.add_scaled(lk, dt * std::exp(-c * t_k));
      next.add_scaled(hker, dt * c);
      hker = std::move(next);
      if ((k + 1) % static_cast<std::size_t>(scheme.substeps_per_output) == 0 ||
          k + 1 == plan.steps) {
        RateKernel f = hker;
        f.scale(std::exp(-c * plan.time(k + 1)));
        record(plan.time(k + 1), std::move(f));
      }
    }
  }

  sol.row_sum_flagged = sol.max_row_sum_drift > 1e-6;
  return sol;
}

const MarginalMeasure& MarginalTrajectory::at_left(double t) const {
  if (times.empty()) throw std::out_of_range("MarginalTrajectory: empty");
  if (t < times.front() - 1e-9 || t > times.back() + 1e-9)
    throw std::out_of_range("MarginalTrajectory: query time outside stored range");
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t idx = (it == times.begin()) ? 0 : static_cast<std::size_t>(it - times.begin() - 1);
  return values[idx];
}

MarginalSolution solve_marginal(const KernelTrajectory& f_traj, const StateGrid& grid,
                                const Hamiltonian& h, double T, const SolverScheme& scheme) {
  if (f_traj.empty() || !f_traj.covers(0.0, T))
    throw std::invalid_argument("solve_marginal: kernel trajectory does not cover [0,T]");
  if (f_traj.kernel(0).size() != grid.size())
    throw std::invalid_argument("solve_marginal: kernel/grid dimension mismatch");
  const double c = f_traj.max_kernel_norm() * max_speed(h);
  check_scheme(scheme, c);
  const StepPlan plan = make_plan(T, scheme.dt);
  DividedDifferenceTable dd(h, grid.states());
  const std::size_t n = grid.size();

  MarginalSolution sol;
  sol.min_entry = 0.0;

  auto record = [&](double t, MarginalMeasure m) {
    sol.max_mass_drift = std::max(sol.max_mass_drift, std::abs(m.total() - 1.0));
    for (std::size_t i = 0; i < m.size(); ++i) sol.min_entry = std::min(sol.min_entry, m[i]);
    sol.trajectory.times.push_back(t);
    sol.trajectory.values.push_back(std::move(m));
  };

  MarginalMeasure ell = MarginalMeasure::point_mass(n, 0);
  record(0.0, ell);

  auto rhs = [&](const MarginalMeasure& m, double t) {
    return apply_marginal_operator(m, f_traj.at_left(t), dd);
  };
  auto axpy = [](MarginalMeasure m, const std::vector<double>& d, double s) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += s * d[i];
    return m;
  };

  if (scheme.kind == SolverScheme::Kind::rk4) {
    for (std::size_t k = 0; k < plan.steps; ++k) {
      const double t = plan.time(k);
      const double dt = plan.step_size(k);
      auto k1 = rhs(ell, t);
      auto k2 = rhs(axpy(ell, k1, 0.5 * dt), t + 0.5 * dt);
      auto k3 = rhs(axpy(ell, k2, 0.5 * dt), t + 0.5 * dt);
      auto k4 = rhs(axpy(ell, k3, dt), t + dt);
      for (std::size_t i = 0; i < n; ++i) {
        ell[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
      if ((k + 1) % static_cast<std::size_t>(scheme.substeps_per_output) == 0 ||
          k + 1 == plan.steps) {
        record(plan.time(k + 1), ell);
      }
    }
  } else {
    MarginalMeasure hm = ell;  // h(t) = exp(ct) ell(t)
    for (std::size_t k = 0; k < plan.steps; ++k) {
      const double t_k = plan.time(k);
      const double dt = plan.step_size(k);
      auto lk = rhs(hm, t_k);
      MarginalMeasure next = hm;
      const double w = dt * std::exp(-c * t_k);
      for (std::size_t i = 0; i < n; ++i) next[i] += w * lk[i] + dt * c * hm[i];
      hm = std::move(next);
      if ((k + 1) % static_cast<std::size_t>(scheme.substeps_per_output) == 0 ||
          k + 1 == plan.steps) {
        MarginalMeasure out = hm;
        const double r = std::exp(-c * plan.time(k + 1));
        for (std::size_t i = 0; i < n; ++i) out[i] *= r;
        record(plan.time(k + 1), std::move(out));
      }
    }
  }
  return sol;
}

double lstar_weight(std::span<const std::size_t> chain, const MarginalMeasure& ell,
                    const RateKernel& f, const StateGrid& grid, const Hamiltonian& h,
                    LstarForm form) {
  if (chain.empty()) throw std::invalid_argument("lstar_weight: empty chain");
  const std::size_t n = grid.size();
  if (ell.size() != n || f.size() != n)
    throw std::invalid_argument("lstar_weight: dimension mismatch");
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    if (chain[k] > chain[k + 1])
      throw std::invalid_argument("lstar_weight: chain must be nondecreasing");
  }
  for (std::size_t idx : chain) {
    if (idx >= n) throw std::invalid_argument("lstar_weight: chain index out of range");
  }
  if (ell[chain[0]] == 0.0) {
    std::ostringstream os;
    os << "lstar_weight: zero marginal density at chain position 0 (state index "
       << chain[0] << ")";
    throw std::domain_error(os.str());
  }
  for (std::size_t k = 1; k < chain.size(); ++k) {
    if (f(chain[k - 1], chain[k]) == 0.0) {
      std::ostringstream os;
      os << "lstar_weight: zero kernel density at chain link " << k - 1 << " -> " << k
         << " (state indices " << chain[k - 1] << " -> " << chain[k] << ")";
      throw std::domain_error(os.str());
    }
  }

  DividedDifferenceTable dd(h, grid.states());

  if (form == LstarForm::full) {
    const RateKernel lf = apply_kinetic_operator(f, dd, KineticForm::direct);
    const auto lm = apply_marginal_operator(ell, f, dd);
    double w = lm[chain[0]] / ell[chain[0]];
    for (std::size_t k = 1; k < chain.size(); ++k) {
      w += lf(chain[k - 1], chain[k]) / f(chain[k - 1], chain[k]);
    }
    return w;
  }

  // Telescoped form: the loss terms along the chain collapse to the single
  // total rate out of the final state.
  const std::size_t first = chain[0];
  const std::size_t last = chain[chain.size() - 1];
  double w = 0.0;
  {
    double gain = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double x = ell[m] * f(m, first);
      if (x != 0.0) gain += dd(m, first) * x;
    }
    w += gain / ell[first];
  }
  for (std::size_t m = 0; m < n; ++m) w -= dd(last, m) * f(last, m);
  for (std::size_t k = 1; k < chain.size(); ++k) {
    const std::size_t i = chain[k - 1], j = chain[k];
    double gain = 0.0;
    for (std::size_t m = i; m <= j; ++m) {
      const double x = f(i, m) * f(m, j);
      if (x != 0.0) gain += (dd(m, j) - dd(i, m)) * x;
    }
    w += gain / f(i, j);
  }
  return w;
}

std::vector<ConvergenceRow> convergence_study(const RateKernel& g, double lambda,
                                              const StateGrid& grid, const Hamiltonian& h,
                                              double T, std::span<const int> n_values) {
  if (n_values.size() < 2)
    throw std::invalid_argument("convergence_study: need at least 2 step counts");
  const double c = lambda * max_speed(h);
  DividedDifferenceTable dd(h, grid.states());

  // h^n(T): forward Euler on the rescaled path with dt = T/n.
  auto run = [&](int n) {
    RateKernel hker = g;
    const double dt = T / static_cast<double>(n);
    for (int k = 0; k < n; ++k) {
      const double t_k = dt * static_cast<double>(k);
      RateKernel lk = apply_kinetic_operator(hker, dd);
      RateKernel next = hker;
      next.add_scaled(lk, dt * std::exp(-c * t_k));
      next.add_scaled(hker, dt * c);
      hker = std::move(next);
    }
    return hker;
  };

  std::vector<ConvergenceRow> rows;
  RateKernel prev = run(n_values[0]);
  double prev_diff = 0.0;
  for (std::size_t k = 1; k < n_values.size(); ++k) {
    RateKernel cur = run(n_values[k]);
    ConvergenceRow row;
    row.n = n_values[k - 1];
    row.dt = T / static_cast<double>(n_values[k - 1]);
    row.diff = kernel_diff_norm(prev, cur);
    row.ratio = (k >= 2 && row.diff > 0.0) ? prev_diff / row.diff : 0.0;
    rows.push_back(row);
    prev = std::move(cur);
    prev_diff = row.diff;
  }
  return rows;
}

}  // namespace sclkin
