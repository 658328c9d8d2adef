#pragma once

#include <cstddef>
#include <span>

namespace sclkin {

/// Chi-square survival function P(X > x) with df degrees of freedom.
double chi_square_sf(double x, double df);

/// Asymptotic Kolmogorov distribution survival function for the scaled
/// statistic sqrt(n) * D_n.
double kolmogorov_sf(double scaled_statistic);

struct ChiSquareResult {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

/// Goodness of fit of observed counts against expected counts (same
/// total).  Cells with expected count below min_expected are pooled into
/// their left neighbor.
ChiSquareResult chi_square_gof(std::span<const double> observed,
                               std::span<const double> expected,
                               double min_expected = 5.0);

/// Two-sample chi-square homogeneity test on count vectors.
ChiSquareResult chi_square_two_sample(std::span<const double> counts_a,
                                      std::span<const double> counts_b,
                                      double min_expected = 5.0);

/// Two-sample Kolmogorov-Smirnov p-value from sorted samples.
double ks_two_sample_p(std::span<const double> sorted_a, std::span<const double> sorted_b);

}  // namespace sclkin
