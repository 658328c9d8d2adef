#include "sclkin/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sclkin {

StateGrid::StateGrid(std::vector<double> states) : states_(std::move(states)) {
  if (states_.size() < 2) throw std::invalid_argument("StateGrid: need at least 2 states");
  if (states_.front() != 0.0)
    throw std::invalid_argument("StateGrid: first state must be exactly 0");
  if (!(states_.back() > 0.0)) throw std::invalid_argument("StateGrid: P must be positive");
  for (std::size_t i = 0; i + 1 < states_.size(); ++i) {
    if (!(states_[i] < states_[i + 1]))
      throw std::invalid_argument("StateGrid: states must be strictly increasing");
  }
  for (double v : states_) {
    if (!std::isfinite(v)) throw std::invalid_argument("StateGrid: non-finite state");
  }
}

StateGrid StateGrid::uniform(std::size_t K, double P) {
  if (K < 1) throw std::invalid_argument("StateGrid::uniform: K must be >= 1");
  std::vector<double> s(K + 1);
  for (std::size_t i = 0; i <= K; ++i) {
    s[i] = P * static_cast<double>(i) / static_cast<double>(K);
  }
  s[0] = 0.0;
  s[K] = P;
  return StateGrid(std::move(s));
}

std::size_t StateGrid::index_of(double value) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), value);
  if (it == states_.end() || *it != value) {
    std::ostringstream os;
    os << "StateGrid: value " << value << " is not a grid state";
    throw std::invalid_argument(os.str());
  }
  return static_cast<std::size_t>(it - states_.begin());
}

MarginalMeasure MarginalMeasure::point_mass(std::size_t size, std::size_t index) {
  MarginalMeasure m(size);
  m[index] = 1.0;
  return m;
}

double MarginalMeasure::total() const {
  double s = 0.0;
  for (double w : w_) s += w;
  return s;
}

double RateKernel::row_sum(std::size_t i) const {
  double s = 0.0;
  for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j];
  return s;
}

void RateKernel::add_scaled(const RateKernel& other, double s) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += s * other.a_[k];
}

void RateKernel::scale(double s) {
  for (double& x : a_) x *= s;
}

double tv_norm(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w)) throw std::domain_error("tv_norm: non-finite entry");
    s += std::abs(w);
  }
  return s;
}

double tv_norm(const MarginalMeasure& m) { return tv_norm(m.weights()); }

double kernel_norm(const RateKernel& k) {
  double best = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) best = std::max(best, tv_norm(k.row(i)));
  return best;
}

double kernel_diff_norm(const RateKernel& a, const RateKernel& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("kernel_diff_norm: dimension mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double d = a(i, j) - b(i, j);
      if (!std::isfinite(d)) throw std::domain_error("kernel_diff_norm: non-finite entry");
      row += std::abs(d);
    }
    best = std::max(best, row);
  }
  return best;
}

KernelValidation validate_rate_kernel(const RateKernel& g, double lambda,
                                      bool strict_support, double rate_tol) {
  KernelValidation report;
  const std::size_t n = g.size();
  const std::size_t K = n - 1;
  auto add = [&](const std::string& msg) { report.violations.push_back(msg); };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = g(i, j);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite entry at (" << i << "," << j << ")";
        add(os.str());
        continue;
      }
      if (v < 0.0) {
        std::ostringstream os;
        os << "negative rate " << v << " at (" << i << "," << j << ")";
        add(os.str());
      }
      if (j < i && v != 0.0) {
        std::ostringstream os;
        os << "lower-triangle entry " << v << " at (" << i << "," << j << ")";
        add(os.str());
      }
    }
  }
  for (std::size_t i = 0; i < K; ++i) {
    const double s = g.row_sum(i);
    if (std::abs(s - lambda) > rate_tol) {
      std::ostringstream os;
      os << "row " << i << " total rate " << s << " != lambda " << lambda;
      add(os.str());
    }
  }
  if (strict_support) {
    for (std::size_t i = 0; i < K; ++i) {
      if (g(i, K) != 0.0) {
        std::ostringstream os;
        os << "strict support: entry (" << i << "," << K << ") = " << g(i, K)
           << " targets the top state";
        add(os.str());
      }
    }
  }
  return report;
}

void KernelTrajectory::push_back(double t, RateKernel k) {
  if (times_.empty()) {
    if (t != 0.0) throw std::invalid_argument("KernelTrajectory: times must start at 0");
  } else {
    if (!(t > times_.back()))
      throw std::invalid_argument("KernelTrajectory: times must be strictly increasing");
    if (k.size() != kernels_.front().size())
      throw std::invalid_argument("KernelTrajectory: kernel dimension mismatch");
  }
  max_norm_ = std::max(max_norm_, kernel_norm(k));
  times_.push_back(t);
  kernels_.push_back(std::move(k));
}

const RateKernel& KernelTrajectory::at_left(double t) const {
  if (empty()) throw std::out_of_range("KernelTrajectory: empty");
  if (t < times_.front() - 1e-9 || t > times_.back() + 1e-9)
    throw std::out_of_range("KernelTrajectory: query time outside stored range");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t idx = (it == times_.begin()) ? 0 : static_cast<std::size_t>(it - times_.begin() - 1);
  return kernels_[idx];
}

bool KernelTrajectory::covers(double s, double t, double tol) const {
  if (empty()) return false;
  return s >= times_.front() - tol && t <= times_.back() + tol;
}

}  // namespace sclkin
