#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sclkin {

/// Finite ordered set of state values v_0 < ... < v_K with v_0 = 0 and
/// v_K = P.  Every measure, kernel and particle value in the model lives
/// on such a grid.
class StateGrid {
 public:
  explicit StateGrid(std::vector<double> states);
  static StateGrid uniform(std::size_t K, double P);

  std::size_t size() const { return states_.size(); }         // K + 1
  std::size_t max_index() const { return states_.size() - 1; }  // K
  double state(std::size_t i) const { return states_[i]; }
  double operator[](std::size_t i) const { return states_[i]; }
  double P() const { return states_.back(); }
  std::span<const double> states() const { return states_; }

  /// Index of an exact grid value (values are only ever copied, never
  /// recomputed, so exact lookup is well defined).  Throws if absent.
  std::size_t index_of(double value) const;

 private:
  std::vector<double> states_;
};

/// Weights over grid states; nonnegative for measures, arbitrary sign for
/// operator outputs handled as raw vectors.
class MarginalMeasure {
 public:
  explicit MarginalMeasure(std::size_t size) : w_(size, 0.0) {}
  explicit MarginalMeasure(std::vector<double> weights) : w_(std::move(weights)) {}
  static MarginalMeasure point_mass(std::size_t size, std::size_t index);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  double& operator[](std::size_t i) { return w_[i]; }
  std::span<const double> weights() const { return w_; }
  double total() const;

 private:
  std::vector<double> w_;
};

/// Dense (K+1)x(K+1) rate matrix, row = source state, column = target.
/// Valid kernels are upper-triangular; the row at P carries the
/// conventional self-rate entry (K,K) so that total rates stay constant.
class RateKernel {
 public:
  explicit RateKernel(std::size_t size) : n_(size), a_(size * size, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(a_).subspan(i * n_, n_);
  }
  double row_sum(std::size_t i) const;

  void add_scaled(const RateKernel& other, double s);  // *this += s * other
  void scale(double s);

 private:
  std::size_t n_;
  std::vector<double> a_;
};

/// Total variation norm of a weight vector (sum of absolute values).
/// Non-finite entries are a numeric error.
double tv_norm(std::span<const double> weights);
double tv_norm(const MarginalMeasure& m);

/// Kernel norm: max over rows of the row's TV norm.
double kernel_norm(const RateKernel& k);

/// kernel_norm of the difference a - b.
double kernel_diff_norm(const RateKernel& a, const RateKernel& b);

struct KernelValidation {
  std::vector<std::string> violations;
  bool valid() const { return violations.empty(); }
};

/// Structural checks for an initial rate kernel: nonnegativity, upper
/// triangularity (self-rate at the top state exempt), constant total rate
/// lambda on every row below P, and optionally zero column at P below the
/// top row.
KernelValidation validate_rate_kernel(const RateKernel& g, double lambda,
                                      bool strict_support = false,
                                      double rate_tol = 1e-10);

/// Time-indexed kernels with a piecewise-constant-left interpolation
/// contract: a query between stored times reads the kernel at the greatest
/// stored time <= t.
class KernelTrajectory {
 public:
  void push_back(double t, RateKernel k);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double time(std::size_t i) const { return times_[i]; }
  const RateKernel& kernel(std::size_t i) const { return kernels_[i]; }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }

  const RateKernel& at_left(double t) const;
  bool covers(double s, double t, double tol = 1e-9) const;

  /// Max kernel_norm over stored kernels (the thinning envelope uses it).
  double max_kernel_norm() const { return max_norm_; }

 private:
  std::vector<double> times_;
  std::vector<RateKernel> kernels_;
  double max_norm_ = 0.0;
};

}  // namespace sclkin
