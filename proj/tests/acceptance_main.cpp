// Acceptance suite: one self-contained check per criterion, each printing a
// single PASS/FAIL line.  Run with no arguments for all criteria or with a
// list of criterion numbers.  Exit code 0 iff every selected criterion
// passes.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sclkin/config.hpp"
#include "sclkin/experiments.hpp"
#include "sclkin/kinetic_solver.hpp"
#include "sclkin/random.hpp"
#include "sclkin/report.hpp"

using namespace sclkin;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  void note(const std::string& text) {
    if (ok) detail = text;
  }
};

const Hamiltonian& quad2() {
  static Hamiltonian h = Hamiltonian::quadratic(2.0);
  return h;
}

const StateGrid& grid3() {
  static StateGrid g({0.0, 1.0, 2.0});
  return g;
}

RateKernel g3() {
  RateKernel g(3);
  g(0, 1) = 1.0;
  g(1, 2) = 1.0;
  g(2, 2) = 1.0;
  return g;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// Criterion 1: conservation.  Three-state example, rk4 with dt = 1e-3 to
// T = 1; every kernel row sum stays at 1 within 1e-8 and the marginal mass
// stays at 1 within 1e-8 at all output times.
Check criterion_conservation() {
  Check c;
  SolverScheme scheme;  // rk4, dt = 1e-3, dense output
  const auto kin = solve_kinetic(g3(), 1.0, grid3(), quad2(), 1.0, scheme);
  c.require(kin.max_row_sum_drift <= 1e-8,
            "row-sum drift " + fmt(kin.max_row_sum_drift));
  const auto mar = solve_marginal(kin.trajectory, grid3(), quad2(), 1.0, scheme);
  c.require(mar.max_mass_drift <= 1e-8, "marginal mass drift " + fmt(mar.max_mass_drift));
  c.note("row-sum drift " + fmt(kin.max_row_sum_drift) + ", mass drift " +
         fmt(mar.max_mass_drift));
  return c;
}

// Criterion 2: positivity and support.  The positivity-preserving scheme at
// dt <= 1/(2 lambda H'(P)) keeps every entry exactly nonnegative and the
// zero pattern (lower triangle; top-state column when the initial kernel
// has it empty) survives every step exactly.
Check criterion_positivity_support() {
  Check c;
  const double cc = 1.0 * max_speed(quad2());
  SolverScheme scheme;
  scheme.kind = SolverScheme::Kind::rescaled_euler;
  scheme.dt = 0.5 / cc;
  const auto sol = solve_kinetic(g3(), 1.0, grid3(), quad2(), 1.0, scheme);
  c.require(sol.min_entry >= 0.0, "negative entry " + fmt(sol.min_entry));
  for (std::size_t k = 0; k < sol.trajectory.size(); ++k) {
    const auto& f = sol.trajectory.kernel(k);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        c.require(f(i, j) == 0.0, "lower-triangle fill-in");
  }

  // Top-state column: no constant-rate kernel on a finite grid can leave
  // the column at P entirely empty (the state just below P has no other
  // admissible target), so the preservation claim is exercised
  // structurally: the same Euler update, expanded-loss form, on an
  // upper-triangular kernel with empty top column and non-constant rows.
  const auto grid = StateGrid::uniform(4, 2.0);
  const auto h = Hamiltonian::quadratic(2.0);
  PathRng rng(1, 0);
  RateKernel f(5);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) f(i, j) = rng.uniform01();
  const double ce = kernel_norm(f) * max_speed(h);
  const double dt = 0.5 / ce;
  for (int step = 0; step < 64; ++step) {
    const auto lf = apply_kinetic_operator(f, grid, h, KineticForm::loss_expanded);
    RateKernel next = f;
    next.add_scaled(lf, dt * std::exp(-ce * dt * step));
    next.add_scaled(f, dt * ce);
    f = next;
    for (std::size_t i = 0; i < 5; ++i) {
      c.require(f(i, 4) == 0.0, "top-state column fill-in");
      for (std::size_t j = 0; j < i; ++j) c.require(f(i, j) == 0.0, "lower fill-in");
      for (std::size_t j = i; j < 5; ++j)
        c.require(f(i, j) >= 0.0, "negative entry in structural run");
    }
  }
  c.note("min entry " + fmt(sol.min_entry) + ", zero patterns exact");
  return c;
}

// Criterion 3: scheme convergence.  Successive scheme differences at
// n in {64,...,512} halve within 20% as n doubles.
Check criterion_convergence() {
  Check c;
  const int ns[] = {64, 128, 256, 512};
  const auto rows = convergence_study(g3(), 1.0, grid3(), quad2(), 1.0, ns);
  std::string detail = "ratios";
  for (std::size_t k = 1; k < rows.size(); ++k) {
    c.require(rows[k].ratio >= 1.6 && rows[k].ratio <= 2.4,
              "ratio " + fmt(rows[k].ratio) + " outside [1.6,2.4]");
    detail += " " + fmt(rows[k].ratio);
  }
  c.note(detail);
  return c;
}

// Criterion 4: operator identities at 1e-12: (a) the two loss forms agree
// under constant row sums, (b) the expanded form conserves arbitrary row
// sums, (c) the full and telescoped chain weights coincide on 100 random
// chains.
Check criterion_operator_identities() {
  Check c;
  PathRng rng(2, 0);
  const auto grid = StateGrid::uniform(6, 3.0);
  const auto h = Hamiltonian::polynomial({0.0, 0.15, 0.35, 0.03}, 3.0);

  auto random_constant = [&](double lambda) {
    RateKernel k(grid.size());
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      double total = 0.0;
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        k(i, j) = 0.05 + rng.uniform01();
        total += k(i, j);
      }
      for (std::size_t j = i + 1; j < grid.size(); ++j) k(i, j) *= lambda / total;
    }
    k(grid.size() - 1, grid.size() - 1) = lambda;
    return k;
  };

  for (int it = 0; it < 25; ++it) {
    const auto f = random_constant(0.5 + rng.uniform01());
    const auto a = apply_kinetic_operator(f, grid, h, KineticForm::direct);
    const auto b = apply_kinetic_operator(f, grid, h, KineticForm::loss_expanded);
    c.require(kernel_diff_norm(a, b) <= 1e-12, "form mismatch " + fmt(kernel_diff_norm(a, b)));
  }
  for (int it = 0; it < 25; ++it) {
    RateKernel f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = i + (i + 1 < grid.size() ? 1 : 0); j < grid.size(); ++j)
        f(i, j) = rng.uniform01();
    const auto lf = apply_kinetic_operator(f, grid, h, KineticForm::loss_expanded);
    for (std::size_t i = 0; i < grid.size(); ++i)
      c.require(std::abs(lf.row_sum(i)) <= 1e-12, "row sum " + fmt(lf.row_sum(i)));
  }
  int chains_tested = 0;
  while (chains_tested < 100) {
    const auto f = random_constant(0.5 + rng.uniform01());
    MarginalMeasure ell(grid.size());
    for (std::size_t i = 0; i < ell.size(); ++i) ell[i] = 0.05 + rng.uniform01();
    std::vector<std::size_t> chain{rng.next_u64() % 3};
    while (chain.back() + 1 < grid.size() && chain.size() < 5 && rng.uniform01() < 0.75) {
      chain.push_back(chain.back() + 1 +
                      rng.next_u64() % (grid.size() - chain.back() - 1));
    }
    bool usable = true;
    for (std::size_t k = 1; k < chain.size(); ++k)
      usable = usable && f(chain[k - 1], chain[k]) > 0.0;
    if (!usable) continue;
    const double tele = lstar_weight(chain, ell, f, grid, h, LstarForm::telescoped);
    const double full = lstar_weight(chain, ell, f, grid, h, LstarForm::full);
    c.require(std::abs(tele - full) <= 1e-12 * std::max(1.0, std::abs(tele)),
              "telescoping gap " + fmt(std::abs(tele - full)));
    ++chains_tested;
  }
  c.note("forms, conservation, and 100 chain telescopes at 1e-12");
  return c;
}

// Criterion 5: chain-density derivative vs generator weight, first-order
// in the differencing step; halving the step halves the worst error
// within 30%.
Check criterion_lstar() {
  Check c;
  LstarParams params;
  params.scheme.dt = 1e-4;
  const auto report = verify_lstar(g3(), 1.0, grid3(), quad2(), params);
  c.require(report.pass, "error ratio outside [1.4,2.6]");
  for (const auto& s : report.statistics)
    if (s.name == "error_ratio") c.note("error ratio " + fmt(s.estimate));
  return c;
}

// Criterion 6: the main statistical comparison at full scale.
Check criterion_propagation() {
  Check c;
  PropagationParams params;  // L = 5, T = 1, 10 functionals, |z| <= 4, 9/10
  params.paths = 100000;
  params.workers = 0;
  const auto report =
      verify_propagation(g3(), 1.0, grid3(), quad2(), params, RandomStreamPolicy{20240817});
  c.require(report.pass, "propagation report failed");
  for (const auto& s : report.statistics)
    if (s.kind == "p") c.note("chi2 p " + fmt(s.score));
  return c;
}

// Criterion 7: finite-speed coupling with 1e4 paired paths, exact window
// agreement.
Check criterion_coupling() {
  Check c;
  const auto grid = StateGrid::uniform(2, 1.0);
  const auto h = Hamiltonian::quadratic(1.0);  // H'(P) = 1
  const auto g = kernel_single_step(grid, 1.0, 0.5);
  CouplingParams params;  // L1 = 5, L2 = 10, T = 1
  params.paths = 10000;
  params.workers = 0;
  const auto report = verify_coupling(g, 1.0, grid, h, params, RandomStreamPolicy{424242});
  c.require(report.pass, "window violations");
  for (const auto& s : report.statistics)
    c.note("violations " + fmt(s.estimate) + " on [0,4)");
  return c;
}

// Criterion 8: degenerate exactness of criterion 6: lambda = 0 gives
// z identically zero; a vanishing horizon stays within |z| <= 4.
Check criterion_degenerate() {
  Check c;
  PropagationParams params;
  params.paths = 10000;
  params.workers = 0;
  const auto zero = verify_propagation(RateKernel(3), 0.0, grid3(), quad2(), params,
                                       RandomStreamPolicy{31});
  c.require(zero.pass, "zero-rate run failed");
  for (const auto& s : zero.statistics)
    if (s.kind == "z") c.require(s.score == 0.0, "nonzero z " + fmt(s.score));

  params.T = 1e-6;
  const auto tiny =
      verify_propagation(g3(), 1.0, grid3(), quad2(), params, RandomStreamPolicy{32});
  c.require(tiny.pass, "vanishing-horizon run failed");
  for (const auto& s : tiny.statistics)
    if (s.kind == "z") c.require(std::abs(s.score) <= 4.0, "|z| " + fmt(std::abs(s.score)));
  c.note("zero-rate z == 0 exactly; vanishing horizon within |z| <= 4");
  return c;
}

// Criterion 9: quadratic-flux closure at K = P = 40, t <= 0.2; residuals
// within the self-computed truncation-plus-differencing budget.
Check criterion_burgers() {
  Check c;
  BurgersParams params;  // jump 1, K 40, t_max 0.2, factor 10
  const auto report = burgers_closure_check(params, Hamiltonian::quadratic(40.0));
  c.require(report.pass, "residual above budget");
  std::string detail;
  for (const auto& s : report.statistics) {
    if (s.kind == "residual" && s.name != "psi0_exact")
      detail += s.name + " " + fmt(s.estimate) + " <= " + fmt(s.reference) + "; ";
  }
  c.note(detail);
  return c;
}

// Criterion 10: bitwise reproducibility of criteria 6 and 7 reports across
// worker counts at a fixed seed.
Check criterion_reproducibility() {
  Check c;
  {
    PropagationParams params;
    params.paths = 100000;
    params.workers = 1;
    const auto a =
        verify_propagation(g3(), 1.0, grid3(), quad2(), params, RandomStreamPolicy{20240817});
    params.workers = 6;
    const auto b =
        verify_propagation(g3(), 1.0, grid3(), quad2(), params, RandomStreamPolicy{20240817});
    c.require(report_to_json(a) == report_to_json(b), "propagation reports differ");
  }
  {
    const auto grid = StateGrid::uniform(2, 1.0);
    const auto h = Hamiltonian::quadratic(1.0);
    const auto g = kernel_single_step(grid, 1.0, 0.5);
    CouplingParams params;
    params.paths = 10000;
    params.workers = 1;
    const auto a = verify_coupling(g, 1.0, grid, h, params, RandomStreamPolicy{424242});
    params.workers = 5;
    const auto b = verify_coupling(g, 1.0, grid, h, params, RandomStreamPolicy{424242});
    c.require(report_to_json(a) == report_to_json(b), "coupling reports differ");
  }
  c.note("reports byte-identical at 1 vs 6 and 1 vs 5 workers");
  return c;
}

struct Criterion {
  int number;
  const char* name;
  std::function<Check()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "conservation", criterion_conservation},
      {2, "positivity and support", criterion_positivity_support},
      {3, "scheme convergence", criterion_convergence},
      {4, "operator identities", criterion_operator_identities},
      {5, "chain-density derivative", criterion_lstar},
      {6, "propagation of chaos", criterion_propagation},
      {7, "finite-speed coupling", criterion_coupling},
      {8, "degenerate exactness", criterion_degenerate},
      {9, "quadratic-flux closure", criterion_burgers},
      {10, "reproducibility", criterion_reproducibility},
  };

  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));

  bool all_ok = true;
  for (const auto& crit : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), crit.number) == selected.end())
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    Check result;
    try {
      result = crit.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (result.ok ? "[PASS]" : "[FAIL]") << " criterion " << crit.number << " ("
              << crit.name << "): " << result.detail << " [" << fmt(secs) << "s]\n";
    all_ok = all_ok && result.ok;
  }
  return all_ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
