#include "sclkin/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sclkin {

namespace {

double horner(std::span<const double> c, double p) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * p + c[k];
  return acc;
}

std::vector<double> differentiate(std::span<const double> c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  return d;
}

}  // namespace

Hamiltonian::Hamiltonian(std::vector<double> coefficients, double P)
    : coefficients_(std::move(coefficients)), P_(P) {
  if (!(P > 0.0)) throw std::invalid_argument("Hamiltonian: P must be positive");
  for (double c : coefficients_) {
    if (!std::isfinite(c)) throw std::invalid_argument("Hamiltonian: non-finite coefficient");
  }
}

Hamiltonian Hamiltonian::quadratic(double P) { return Hamiltonian({0.0, 0.0, 0.5}, P); }

Hamiltonian Hamiltonian::scaled_quadratic(double c, double P) {
  return Hamiltonian({0.0, 0.0, c}, P);
}

Hamiltonian Hamiltonian::polynomial(std::vector<double> coefficients, double P) {
  return Hamiltonian(std::move(coefficients), P);
}

double Hamiltonian::value(double p) const { return horner(coefficients_, p); }

double Hamiltonian::derivative(double p) const {
  return horner(differentiate(coefficients_), p);
}

double Hamiltonian::second_derivative(double p) const {
  auto d1 = differentiate(coefficients_);
  return horner(differentiate(d1), p);
}

double max_speed(const Hamiltonian& h) { return h.derivative(h.upper_bound()); }

namespace {

void check_domain(const Hamiltonian& h, std::span<const double> points) {
  if (points.empty())
    throw std::invalid_argument("divided_difference: empty point list");
  if (points.size() > 3)
    throw std::invalid_argument("divided_difference: at most 3 points supported");
  for (double p : points) {
    if (!(p >= 0.0 && p <= h.upper_bound())) {
      std::ostringstream os;
      os << "divided_difference: point " << p << " outside [0," << h.upper_bound() << "]";
      throw std::domain_error(os.str());
    }
  }
}

double dd2_sorted(const Hamiltonian& h, double a, double b) {
  if (a == b) return h.derivative(a);
  return (h.value(b) - h.value(a)) / (b - a);
}

}  // namespace

double divided_difference(const Hamiltonian& h, std::span<const double> points) {
  check_domain(h, points);
  switch (points.size()) {
    case 1:
      return h.value(points[0]);
    case 2: {
      double a = points[0], b = points[1];
      if (a > b) std::swap(a, b);
      return dd2_sorted(h, a, b);
    }
    default: {
      double p[3] = {points[0], points[1], points[2]};
      std::sort(p, p + 3);
      if (p[0] == p[2]) return 0.5 * h.second_derivative(p[0]);
      // H[p0,p1,p2] = (H[p1,p2] - H[p0,p1]) / (p2 - p0); confluent pairs
      // reduce to derivative values inside dd2_sorted.
      return (dd2_sorted(h, p[1], p[2]) - dd2_sorted(h, p[0], p[1])) / (p[2] - p[0]);
    }
  }
}

double divided_difference(const Hamiltonian& h, double a, double b) {
  const double pts[2] = {a, b};
  return divided_difference(h, std::span<const double>(pts, 2));
}

double divided_difference(const Hamiltonian& h, double a, double b, double c) {
  const double pts[3] = {a, b, c};
  return divided_difference(h, std::span<const double>(pts, 3));
}

DividedDifferenceTable::DividedDifferenceTable(const Hamiltonian& h,
                                               std::span<const double> states)
    : n_(states.size()), table_(states.size() * states.size()) {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      table_[i * n_ + j] = divided_difference(h, states[i], states[j]);
    }
  }
}

HamiltonianValidation validate_hamiltonian(const Hamiltonian& h, int samples, double tol) {
  if (samples < 3) throw std::invalid_argument("validate_hamiltonian: samples must be >= 3");
  HamiltonianValidation report;
  const double P = h.upper_bound();

  auto sample_point = [&](int k) { return P * static_cast<double>(k) / (samples - 1); };

  for (int k = 0; k < samples; ++k) {
    const double p = sample_point(k);
    const double v = h.value(p);
    const double d = h.derivative(p);
    if (!std::isfinite(v) || !std::isfinite(d)) {
      report.violations.push_back({"finite", p, "non-finite value or derivative"});
    }
  }
  if (!report.violations.empty()) return report;  // numeric failure first

  if (h.derivative(0.0) < -tol) {
    std::ostringstream os;
    os << "H'(0) = " << h.derivative(0.0) << " < 0";
    report.violations.push_back({"derivative_at_zero", 0.0, os.str()});
  }
  if (!std::isfinite(max_speed(h))) {
    report.violations.push_back({"finite", P, "H'(P) not finite"});
  }

  for (int k = 0; k + 2 < samples; ++k) {
    const double p1 = sample_point(k), p2 = sample_point(k + 1), p3 = sample_point(k + 2);
    const double dd = divided_difference(h, p1, p2, p3);
    if (dd < -tol) {
      std::ostringstream os;
      os << "H[" << p1 << "," << p2 << "," << p3 << "] = " << dd;
      report.violations.push_back({"convexity", p2, os.str()});
    }
  }
  return report;
}

}  // namespace sclkin
