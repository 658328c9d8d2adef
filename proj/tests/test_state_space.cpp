#include <doctest.h>

#include <vector>

#include "sclkin/config.hpp"
#include "sclkin/random.hpp"
#include "sclkin/state_space.hpp"

using namespace sclkin;

namespace {

RateKernel three_state_example() {
  // Grid {0,1,2}, unit rate single step, self-rate at the top state.
  RateKernel g(3);
  g(0, 1) = 1.0;
  g(1, 2) = 1.0;
  g(2, 2) = 1.0;
  return g;
}

RateKernel random_upper_triangular(PathRng& rng, std::size_t n, bool constant_rows,
                                   double lambda = 1.0) {
  RateKernel k(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double total = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      k(i, j) = rng.uniform01();
      total += k(i, j);
    }
    if (constant_rows) {
      for (std::size_t j = i + 1; j < n; ++j) k(i, j) *= lambda / total;
    }
  }
  k(n - 1, n - 1) = constant_rows ? lambda : rng.uniform01();
  return k;
}

}  // namespace

// ============================================================================
// Norms
// ============================================================================

TEST_CASE("tv norm") {
  CHECK(tv_norm(std::vector<double>{0.5, 0.5, 0.0}) == doctest::Approx(1.0));
  CHECK(tv_norm(std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
  CHECK(tv_norm(std::vector<double>{0.5, -0.25, 0.0}) == doctest::Approx(0.75));
  CHECK_THROWS_AS(tv_norm(std::vector<double>{1.0, std::nan("")}), std::domain_error);
}

TEST_CASE("kernel norm") {
  CHECK(kernel_norm(three_state_example()) == doctest::Approx(1.0));
  CHECK(kernel_norm(RateKernel(3)) == 0.0);
  RateKernel k(3);
  k(0, 1) = 1.0;
  k(1, 2) = 2.0;
  CHECK(kernel_norm(k) == doctest::Approx(2.0));
}

TEST_CASE("kernel norm homogeneity and triangle inequality") {
  PathRng rng(5, 0);
  for (int it = 0; it < 200; ++it) {
    auto a = random_upper_triangular(rng, 4, false);
    auto b = random_upper_triangular(rng, 4, false);
    const double s = 4.0 * rng.uniform01() - 2.0;
    RateKernel sa = a;
    sa.scale(s);
    CHECK(kernel_norm(sa) == doctest::Approx(std::abs(s) * kernel_norm(a)).epsilon(1e-12));
    RateKernel sum = a;
    sum.add_scaled(b, 1.0);
    CHECK(kernel_norm(sum) <= kernel_norm(a) + kernel_norm(b) + 1e-12);
  }
}

// ============================================================================
// Grid
// ============================================================================

TEST_CASE("state grid invariants") {
  CHECK_THROWS_AS(StateGrid({0.5, 1.0}), std::invalid_argument);   // must start at 0
  CHECK_THROWS_AS(StateGrid({0.0, 1.0, 1.0}), std::invalid_argument);
  const auto grid = StateGrid::uniform(4, 2.0);
  CHECK(grid.size() == 5);
  CHECK(grid.state(0) == 0.0);
  CHECK(grid.P() == 2.0);
  CHECK(grid.index_of(1.5) == 3);
  CHECK_THROWS_AS(grid.index_of(0.7), std::invalid_argument);
}

// ============================================================================
// Kernel validation
// ============================================================================

TEST_CASE("validation accepts the three-state example") {
  CHECK(validate_rate_kernel(three_state_example(), 1.0).valid());
}

TEST_CASE("validation rejects a lower-triangle entry") {
  auto g = three_state_example();
  g(1, 0) = 0.5;
  const auto v = validate_rate_kernel(g, 1.0);
  REQUIRE_FALSE(v.valid());
  CHECK(v.violations.front().find("lower-triangle") != std::string::npos);
}

TEST_CASE("validation rejects non-constant row totals") {
  RateKernel g(3);
  g(0, 1) = 1.0;
  g(1, 2) = 2.0;
  g(2, 2) = 1.0;
  CHECK_FALSE(validate_rate_kernel(g, 1.0).valid());
}

TEST_CASE("strict support flags the top-state column") {
  const auto v = validate_rate_kernel(three_state_example(), 1.0, /*strict_support=*/true);
  REQUIRE_FALSE(v.valid());
  CHECK(v.violations.front().find("strict support") != std::string::npos);
}

TEST_CASE("validation accepts every named generator") {
  for (std::size_t K : {2u, 5u, 17u}) {
    const auto grid = StateGrid::uniform(K, 2.0);
    for (double lambda : {0.5, 1.0, 3.0}) {
      CHECK(validate_rate_kernel(kernel_single_step(grid, lambda, 2.0 / K), lambda).valid());
      CHECK(validate_rate_kernel(kernel_uniform_up(grid, lambda), lambda).valid());
    }
  }
}

// ============================================================================
// Trajectory
// ============================================================================

TEST_CASE("trajectory interpolation is piecewise-constant-left") {
  KernelTrajectory traj;
  RateKernel a(2), b(2);
  a(0, 1) = 1.0;
  b(0, 1) = 2.0;
  traj.push_back(0.0, a);
  traj.push_back(1.0, b);
  CHECK(traj.at_left(0.0)(0, 1) == 1.0);
  CHECK(traj.at_left(0.5)(0, 1) == 1.0);
  CHECK(traj.at_left(1.0)(0, 1) == 2.0);
  CHECK(traj.max_kernel_norm() == doctest::Approx(2.0));
  CHECK(traj.covers(0.0, 1.0));
  CHECK_FALSE(traj.covers(0.0, 1.5));
  CHECK_THROWS_AS(traj.at_left(2.0), std::out_of_range);
  CHECK_THROWS_AS(traj.push_back(0.5, a), std::invalid_argument);
}

TEST_CASE("trajectory must start at time zero") {
  KernelTrajectory traj;
  CHECK_THROWS_AS(traj.push_back(0.5, RateKernel(2)), std::invalid_argument);
}
