#pragma once

#include <utility>
#include <vector>

#include "sclkin/particle_system.hpp"

namespace sclkin {

/// Continuous nonnegative test function J(x) = alpha e^{-beta x} + gamma
/// with alpha, beta, gamma >= 0.
class TestFunction {
 public:
  TestFunction(double alpha, double beta, double gamma);

  double operator()(double x) const;
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

  /// Ten triples spanning slow to fast decay; the Laplace functionals over
  /// this family separate the path laws at the scales used here.
  static std::vector<TestFunction> default_family();

 private:
  double alpha_, beta_, gamma_;
};

/// Jump measure of a configuration: (0, rho_0) followed by
/// (x_i, rho_i - rho_{i-1}).  Masses are nonnegative and sum to rho_n.
std::vector<std::pair<double, double>> path_measure(const Configuration& q);

/// Right-continuous step function value at x in [0,L].
double evaluate_solution(const Configuration& q, double x);

/// exp(-rho_0 J(0) - sum_i (rho_i - rho_{i-1}) J(x_i)), in (0,1] for J >= 0.
double laplace_functional(const Configuration& q, const TestFunction& J);

}  // namespace sclkin
