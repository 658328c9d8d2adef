#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sclkin/hamiltonian.hpp"
#include "sclkin/state_space.hpp"

namespace sclkin {

/// Two algebraically equivalent writings of the loss term of the kernel
/// evolution operator.  They coincide whenever the kernel has constant
/// row sums; the expanded form conserves row sums even without that
/// hypothesis.
enum class KineticForm { direct, loss_expanded };

struct SolverScheme {
  enum class Kind { rescaled_euler, rk4 };
  Kind kind = Kind::rk4;
  double dt = 1e-3;
  int substeps_per_output = 1;
};

/// Kernel evolution operator L^k applied entrywise:
///   gain(i,j) = sum_m (H[v_m,v_j] - H[v_i,v_m]) f(i,m) f(m,j)
/// minus the selected loss form.  Output is signed, upper-triangular, and
/// zero rows map to zero rows.
RateKernel apply_kinetic_operator(const RateKernel& f, const StateGrid& grid,
                                  const Hamiltonian& h,
                                  KineticForm form = KineticForm::direct);
RateKernel apply_kinetic_operator(const RateKernel& f, const DividedDifferenceTable& dd,
                                  KineticForm form = KineticForm::direct);

/// Marginal evolution operator L^0:
///   out[j] = sum_m H[v_m,v_j] ell[m] f(m,j) - (sum_m H[v_j,v_m] f(j,m)) ell[j].
/// Total of the output is zero (mass conservation, exact up to rounding).
std::vector<double> apply_marginal_operator(const MarginalMeasure& ell,
                                            const RateKernel& f, const StateGrid& grid,
                                            const Hamiltonian& h);
std::vector<double> apply_marginal_operator(const MarginalMeasure& ell,
                                            const RateKernel& f,
                                            const DividedDifferenceTable& dd);

struct KineticSolution {
  KernelTrajectory trajectory;
  double lambda = 0.0;
  double max_row_sum_drift = 0.0;  // max over outputs and rows of |sum - lambda|
  double min_entry = 0.0;          // min kernel entry seen on outputs
  bool row_sum_flagged = false;    // drift exceeded 1e-6 (reported, not fatal)
};

/// Integrate f' = L^k f on [0,T] from a validated initial kernel g.
///
/// rk4 integrates f directly.  rescaled_euler integrates the rescaled path
/// h(t) = exp(ct) f(t) with forward Euler steps
///   h_{j+1} = h_j + dt * (exp(-c t_j) L^k(h_j) + c h_j),   c = lambda H'(P),
/// which keeps every entry nonnegative; it requires dt <= 1/(2c).
KineticSolution solve_kinetic(const RateKernel& g, double lambda, const StateGrid& grid,
                              const Hamiltonian& h, double T, const SolverScheme& scheme);

/// Marginal trajectory with the same piecewise-constant-left contract as
/// KernelTrajectory.
struct MarginalTrajectory {
  std::vector<double> times;
  std::vector<MarginalMeasure> values;

  const MarginalMeasure& at_left(double t) const;
  double t_end() const { return times.back(); }
};

struct MarginalSolution {
  MarginalTrajectory trajectory;
  double max_mass_drift = 0.0;  // max over outputs of |total - 1|
  double min_entry = 0.0;
};

/// Integrate ell' = L^0 ell on [0,T] with ell(0) = delta_0, reading the
/// time-dependent kernel from f_traj.
MarginalSolution solve_marginal(const KernelTrajectory& f_traj, const StateGrid& grid,
                                const Hamiltonian& h, double T, const SolverScheme& scheme);

enum class LstarForm { telescoped, full };

/// Scalar weight multiplying the density of a value chain
/// rho_0 <= ... <= rho_n (given as grid indices) in the time derivative of
/// the n-particle candidate measure:
///   telescoped: marginal gain ratio + chain gain ratios - total rate out
///               of the chain end;
///   full:       L^0 ell / ell + sum_i L^k f / f along the chain (the two
///               agree when row sums are constant; the loss terms
///               telescope).
/// Requires positive density along the chain.
double lstar_weight(std::span<const std::size_t> chain, const MarginalMeasure& ell,
                    const RateKernel& f, const StateGrid& grid, const Hamiltonian& h,
                    LstarForm form = LstarForm::telescoped);

struct ConvergenceRow {
  int n = 0;            // steps over [0,T] for the coarser path
  double dt = 0.0;
  double diff = 0.0;    // ||h^n(T) - h^{n'}(T)|| against the next listed n'
  double ratio = 0.0;   // previous diff / this diff (0 for the first row)
};

/// Successive differences of the positivity-preserving Euler scheme at
/// resolutions n_values; first-order convergence shows as ratio ~= 2 when
/// n doubles.
std::vector<ConvergenceRow> convergence_study(const RateKernel& g, double lambda,
                                              const StateGrid& grid, const Hamiltonian& h,
                                              double T, std::span<const int> n_values);

}  // namespace sclkin
