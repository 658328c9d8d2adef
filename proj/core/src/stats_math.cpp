#include "sclkin/stats_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace sclkin {

double chi_square_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  if (df <= 0.0) throw std::invalid_argument("chi_square_sf: df must be positive");
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double kolmogorov_sf(double scaled_statistic) {
  const double x = scaled_statistic;
  if (x <= 0.0) return 1.0;
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * ((j % 2 == 1) ? 1.0 : -1.0) *
                        std::exp(-2.0 * j * j * x * x);
    s += term;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

namespace {

// Pool cells left-to-right until each pooled cell's expected count reaches
// the floor; remainder merges into the last pooled cell.
void pool_cells(std::span<const double> observed, std::span<const double> expected,
                double min_expected, std::vector<double>& obs_out,
                std::vector<double>& exp_out) {
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    o_acc += observed[k];
    e_acc += expected[k];
    if (e_acc >= min_expected) {
      obs_out.push_back(o_acc);
      exp_out.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (!exp_out.empty()) {
      obs_out.back() += o_acc;
      exp_out.back() += e_acc;
    } else {
      obs_out.push_back(o_acc);
      exp_out.push_back(e_acc);
    }
  }
}

}  // namespace

ChiSquareResult chi_square_gof(std::span<const double> observed,
                               std::span<const double> expected, double min_expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  std::vector<double> obs, exp;
  pool_cells(observed, expected, min_expected, obs, exp);
  ChiSquareResult r;
  if (obs.size() < 2) return r;  // everything pooled into one cell: no test
  for (std::size_t k = 0; k < obs.size(); ++k) {
    const double d = obs[k] - exp[k];
    r.statistic += d * d / exp[k];
  }
  r.df = static_cast<double>(obs.size() - 1);
  r.p_value = chi_square_sf(r.statistic, r.df);
  return r;
}

ChiSquareResult chi_square_two_sample(std::span<const double> counts_a,
                                      std::span<const double> counts_b,
                                      double min_expected) {
  if (counts_a.size() != counts_b.size())
    throw std::invalid_argument("chi_square_two_sample: size mismatch");
  const std::size_t n = counts_a.size();
  double total_a = 0.0, total_b = 0.0;
  std::vector<double> col(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    total_a += counts_a[k];
    total_b += counts_b[k];
    col[k] = counts_a[k] + counts_b[k];
  }
  const double total = total_a + total_b;
  if (!(total > 0.0)) return {};

  // Pool on expected column mass under homogeneity, tracking both rows.
  std::vector<double> a_pool, b_pool;
  double a_acc = 0.0, b_acc = 0.0, c_acc = 0.0;
  const double scale = std::min(total_a, total_b) / total;
  for (std::size_t k = 0; k < n; ++k) {
    a_acc += counts_a[k];
    b_acc += counts_b[k];
    c_acc += col[k];
    if (c_acc * scale >= min_expected) {
      a_pool.push_back(a_acc);
      b_pool.push_back(b_acc);
      a_acc = b_acc = c_acc = 0.0;
    }
  }
  if (c_acc > 0.0) {
    if (!a_pool.empty()) {
      a_pool.back() += a_acc;
      b_pool.back() += b_acc;
    } else {
      a_pool.push_back(a_acc);
      b_pool.push_back(b_acc);
    }
  }

  ChiSquareResult r;
  if (a_pool.size() < 2) return r;
  for (std::size_t k = 0; k < a_pool.size(); ++k) {
    const double colsum = a_pool[k] + b_pool[k];
    const double ea = colsum * total_a / total;
    const double eb = colsum * total_b / total;
    const double da = a_pool[k] - ea;
    const double db = b_pool[k] - eb;
    r.statistic += da * da / ea + db * db / eb;
  }
  r.df = static_cast<double>(a_pool.size() - 1);
  r.p_value = chi_square_sf(r.statistic, r.df);
  return r;
}

double ks_two_sample_p(std::span<const double> sorted_a, std::span<const double> sorted_b) {
  const std::size_t na = sorted_a.size(), nb = sorted_b.size();
  if (na == 0 || nb == 0) return 1.0;
  double d = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < na && ib < nb) {
    const double x = std::min(sorted_a[ia], sorted_b[ib]);
    while (ia < na && sorted_a[ia] <= x) ++ia;
    while (ib < nb && sorted_b[ib] <= x) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  const double n_eff = static_cast<double>(na) * static_cast<double>(nb) /
                       static_cast<double>(na + nb);
  return kolmogorov_sf(std::sqrt(n_eff) * d);
}

}  // namespace sclkin
