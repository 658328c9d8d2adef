#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <vector>

#include "sclkin/estimators.hpp"
#include "sclkin/stats_math.hpp"

using namespace sclkin;

// ============================================================================
// Estimators
// ============================================================================

TEST_CASE("constant functionals have zero standard error") {
  RandomStreamPolicy streams{1};
  const auto est = estimate_mean([](PathRng&) { return 3.25; }, 1000, streams);
  CHECK(est.mean == doctest::Approx(3.25));
  CHECK(est.std_error == 0.0);
}

TEST_CASE("indicator estimate lands within four standard errors") {
  // P(no arrival in [0,2]) for a unit-rate exponential clock = exp(-2).
  RandomStreamPolicy streams{2};
  const std::size_t M = 100000;
  const auto est = estimate_mean(
      [](PathRng& rng) { return rng.exponential(1.0) > 2.0 ? 1.0 : 0.0; }, M, streams);
  const double p = std::exp(-2.0);
  CHECK(std::abs(est.mean - p) <= 4 * est.std_error);
  CHECK(est.std_error == doctest::Approx(std::sqrt(p * (1 - p) / M)).epsilon(0.05));
}

TEST_CASE("standard error scales like the inverse square root of M") {
  RandomStreamPolicy streams{3};
  auto f = [](PathRng& rng) { return rng.uniform01(); };
  const auto small = estimate_mean(f, 20000, streams);
  const auto big = estimate_mean(f, 80000, streams);
  CHECK(small.std_error / big.std_error == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("estimates are bitwise identical across worker counts") {
  RandomStreamPolicy streams{4};
  auto f = [](PathRng& rng) { return rng.uniform01() + rng.exponential(2.0); };
  const auto w1 = estimate_mean(f, 20001, streams, 17, 1);
  const auto w4 = estimate_mean(f, 20001, streams, 17, 4);
  const auto w7 = estimate_mean(f, 20001, streams, 17, 7);
  CHECK(w1.mean == w4.mean);
  CHECK(w1.std_error == w4.std_error);
  CHECK(w1.mean == w7.mean);
  CHECK(w1.std_error == w7.std_error);
}

TEST_CASE("too few paths is an argument error") {
  RandomStreamPolicy streams{5};
  CHECK_THROWS_AS(estimate_mean([](PathRng&) { return 0.0; }, 1, streams),
                  std::invalid_argument);
}

TEST_CASE("pairwise summation agrees with long double accumulation") {
  std::vector<double> v(100001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.01 * i) * 1e-3 + 1.0;
  long double acc = 0.0L;
  for (double x : v) acc += x;
  CHECK(pairwise_sum(v) == doctest::Approx(static_cast<double>(acc)).epsilon(1e-13));
}

TEST_CASE("for_each_path covers every index exactly once") {
  std::vector<std::atomic<int>> hits(1000);
  for_each_path(1000, 8, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) CHECK(h.load() == 1);
}

// ============================================================================
// Tail probabilities
// ============================================================================

TEST_CASE("chi-square survival reference values") {
  CHECK(chi_square_sf(0.0, 1.0) == 1.0);
  CHECK(chi_square_sf(3.841, 1.0) == doctest::Approx(0.05).epsilon(1e-2));
  CHECK(chi_square_sf(18.307, 10.0) == doctest::Approx(0.05).epsilon(1e-2));
}

TEST_CASE("Kolmogorov survival reference values") {
  CHECK(kolmogorov_sf(0.0) == 1.0);
  CHECK(kolmogorov_sf(1.36) == doctest::Approx(0.049).epsilon(0.02));
  CHECK(kolmogorov_sf(5.0) < 1e-10);
}

TEST_CASE("chi-square goodness of fit accepts matching counts") {
  const std::vector<double> obs = {480, 310, 210};
  const std::vector<double> exp = {500, 300, 200};
  const auto r = chi_square_gof(obs, exp);
  CHECK(r.df == 2.0);
  CHECK(r.p_value > 0.05);
}

TEST_CASE("chi-square goodness of fit pools sparse cells") {
  const std::vector<double> obs = {500, 300, 1, 0, 2};
  const std::vector<double> exp = {500, 300, 1.5, 0.5, 1.0};
  const auto r = chi_square_gof(obs, exp);
  CHECK(r.df == 1.0);  // tail cells pooled into the last full cell
}

TEST_CASE("two-sample chi-square detects a shifted distribution") {
  const std::vector<double> a = {5000, 3000, 2000};
  const std::vector<double> b = {3000, 3000, 4000};
  CHECK(chi_square_two_sample(a, b).p_value < 1e-6);
  CHECK(chi_square_two_sample(a, a).p_value == doctest::Approx(1.0));
}
