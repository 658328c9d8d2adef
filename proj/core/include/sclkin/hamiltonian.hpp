#pragma once

#include <span>
#include <string>
#include <vector>

namespace sclkin {

/// Convex flux function H on [0,P], realized as a polynomial in p.
/// All shock velocities and collision rates in the model are divided
/// differences of H, so this type is the single source of velocities.
class Hamiltonian {
 public:
  /// H(p) = p^2 / 2.
  static Hamiltonian quadratic(double P);
  /// H(p) = c * p^2.
  static Hamiltonian scaled_quadratic(double c, double P);
  /// H(p) = sum_k coefficients[k] * p^k (ascending order).
  static Hamiltonian polynomial(std::vector<double> coefficients, double P);

  double value(double p) const;
  double derivative(double p) const;
  double second_derivative(double p) const;

  /// Upper state bound P.
  double upper_bound() const { return P_; }

  std::span<const double> coefficients() const { return coefficients_; }

 private:
  Hamiltonian(std::vector<double> coefficients, double P);

  std::vector<double> coefficients_;
  double P_;
};

/// H'(P), the bound on every shock speed and the thinning envelope factor.
double max_speed(const Hamiltonian& h);

/// Divided difference of H through 1 to 3 points in [0,P].  Repeated
/// points take the confluent limit (derivative values), e.g.
/// H[a,a] = H'(a) and H[a,a,a] = H''(a)/2.
double divided_difference(const Hamiltonian& h, std::span<const double> points);
double divided_difference(const Hamiltonian& h, double a, double b);
double divided_difference(const Hamiltonian& h, double a, double b, double c);

/// Precomputed first-order divided differences over a set of states;
/// entry (i,j) is H[v_i, v_j].  Used in the O(K^3) operator loops.
class DividedDifferenceTable {
 public:
  DividedDifferenceTable(const Hamiltonian& h, std::span<const double> states);

  double operator()(std::size_t i, std::size_t j) const {
    return table_[i * n_ + j];
  }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> table_;
};

struct HamiltonianViolation {
  std::string check;   // "convexity" | "derivative_at_zero" | "finite"
  double location;
  std::string detail;
};

struct HamiltonianValidation {
  std::vector<HamiltonianViolation> violations;
  bool valid() const { return violations.empty(); }
};

/// Sampled check of the structural assumptions on H: convexity via second
/// divided differences on an equispaced grid, H'(0) >= -tol, and finite
/// values/derivatives.  Reports every violation instead of throwing.
HamiltonianValidation validate_hamiltonian(const Hamiltonian& h, int samples,
                                           double tol = 1e-9);

}  // namespace sclkin
