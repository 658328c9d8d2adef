#include "sclkin/observables.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sclkin {

TestFunction::TestFunction(double alpha, double beta, double gamma)
    : alpha_(alpha), beta_(beta), gamma_(gamma) {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
    throw std::invalid_argument("TestFunction: coefficients must be nonnegative");
}

double TestFunction::operator()(double x) const {
  return alpha_ * std::exp(-beta_ * x) + gamma_;
}

std::vector<TestFunction> TestFunction::default_family() {
  return {
      TestFunction(1.0, 0.25, 0.0), TestFunction(1.0, 0.5, 0.0),
      TestFunction(1.0, 1.0, 0.0),  TestFunction(1.0, 2.0, 0.0),
      TestFunction(1.0, 4.0, 0.0),  TestFunction(1.0, 8.0, 0.0),
      TestFunction(2.0, 1.0, 0.0),  TestFunction(0.5, 0.5, 0.1),
      TestFunction(1.0, 2.0, 0.05), TestFunction(0.25, 0.0, 0.25),
  };
}

std::vector<std::pair<double, double>> path_measure(const Configuration& q) {
  std::vector<std::pair<double, double>> out;
  out.reserve(q.size() + 1);
  out.emplace_back(0.0, q.rho(0));
  for (std::size_t j = 0; j < q.size(); ++j) {
    out.emplace_back(q.jump_position(j), q.rho(j + 1) - q.rho(j));
  }
  return out;
}

double evaluate_solution(const Configuration& q, double x) {
  if (!(x >= 0.0 && x <= q.L())) {
    std::ostringstream os;
    os << "evaluate_solution: x = " << x << " outside [0," << q.L() << "]";
    throw std::domain_error(os.str());
  }
  double value = q.rho(0);
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q.jump_position(j) <= x) value = q.rho(j + 1);
    else break;
  }
  return value;
}

double laplace_functional(const Configuration& q, const TestFunction& J) {
  double exponent = q.rho(0) * J(0.0);
  for (std::size_t j = 0; j < q.size(); ++j) {
    exponent += (q.rho(j + 1) - q.rho(j)) * J(q.jump_position(j));
  }
  return std::exp(-exponent);
}

}  // namespace sclkin
