#include <doctest.h>

#include <cmath>

#include "sclkin/config.hpp"
#include "sclkin/observables.hpp"
#include "sclkin/sampling.hpp"

using namespace sclkin;

namespace {

const Hamiltonian& quad4() {
  static Hamiltonian h = Hamiltonian::quadratic(4.0);
  return h;
}

Configuration step_config() {
  const double xs[] = {1.0, 2.0};
  const double vals[] = {1.0, 3.0};
  return Configuration(10.0, 0.0, xs, vals, quad4());
}

}  // namespace

TEST_CASE("path measure lists the left mass and the jump masses") {
  const auto pm = path_measure(step_config());
  REQUIRE(pm.size() == 3);
  CHECK(pm[0] == std::pair{0.0, 0.0});
  CHECK(pm[1] == std::pair{1.0, 1.0});
  CHECK(pm[2] == std::pair{2.0, 2.0});

  const auto flat = path_measure(Configuration(10.0, 0.5));
  REQUIRE(flat.size() == 1);
  CHECK(flat[0] == std::pair{0.0, 0.5});
}

TEST_CASE("path measure masses sum to the top value") {
  const auto grid = StateGrid::uniform(4, 2.0);
  const auto g = kernel_uniform_up(grid, 1.5);
  for (std::uint64_t i = 0; i < 100; ++i) {
    PathRng rng(77, i);
    const auto q = sample_initial_path(g, 1.5, grid, 6.0, quad4(), rng);
    double total = 0.0;
    for (const auto& [x, mass] : path_measure(q)) {
      CHECK(mass >= 0.0);
      total += mass;
    }
    CHECK(total == doctest::Approx(q.last_value()).epsilon(1e-12));
  }
}

TEST_CASE("solution evaluation is a right-continuous step function") {
  const auto q = step_config();
  CHECK(evaluate_solution(q, 0.5) == 0.0);
  CHECK(evaluate_solution(q, 1.0) == 1.0);  // right-continuous at the jump
  CHECK(evaluate_solution(q, 2.0) == 3.0);
  CHECK(evaluate_solution(q, 10.0) == 3.0);
  CHECK_THROWS_AS(evaluate_solution(q, -0.1), std::domain_error);
  CHECK_THROWS_AS(evaluate_solution(q, 10.1), std::domain_error);
}

TEST_CASE("evaluation equals the left value plus the jump mass up to x") {
  const auto grid = StateGrid::uniform(4, 4.0);  // integer grid: exact sums
  const auto g = kernel_uniform_up(grid, 1.0);
  for (std::uint64_t i = 0; i < 100; ++i) {
    PathRng rng(78, i);
    const auto q = sample_initial_path(g, 1.0, grid, 6.0, quad4(), rng);
    const auto pm = path_measure(q);
    for (double x : {0.0, 0.7, 2.5, 6.0}) {
      double acc = 0.0;
      for (const auto& [loc, mass] : pm)
        if (loc <= x) acc += mass;
      CHECK(evaluate_solution(q, x) == acc);
    }
  }
}

TEST_CASE("Laplace functional frozen values") {
  CHECK(laplace_functional(step_config(), TestFunction(0.0, 0.0, 0.0)) == 1.0);
  CHECK(laplace_functional(Configuration(10.0, 0.3), TestFunction(0.0, 0.0, 1.0)) ==
        doctest::Approx(std::exp(-0.3)).epsilon(1e-12));

  const double xs[] = {1.0};
  const double vals[] = {1.0};
  const Configuration q(10.0, 0.0, xs, vals, quad4());
  CHECK(laplace_functional(q, TestFunction(1.0, 1.0, 0.0)) ==
        doctest::Approx(std::exp(-std::exp(-1.0))).epsilon(1e-12));
}

TEST_CASE("Laplace functional lies in (0,1] and decreases in J") {
  const auto grid = StateGrid::uniform(4, 2.0);
  const auto g = kernel_uniform_up(grid, 1.0);
  for (std::uint64_t i = 0; i < 200; ++i) {
    PathRng rng(79, i);
    const auto q = sample_initial_path(g, 1.0, grid, 5.0, quad4(), rng);
    const double a = rng.uniform01(), b = rng.uniform01(), c = 0.5 * rng.uniform01();
    const TestFunction small(a, b, c);
    const TestFunction large(a + rng.uniform01(), b, c + rng.uniform01());
    const double gs = laplace_functional(q, small);
    const double gl = laplace_functional(q, large);
    CHECK(gs > 0.0);
    CHECK(gs <= 1.0);
    CHECK(gl <= gs + 1e-15);
  }
}

TEST_CASE("test function family") {
  CHECK(TestFunction::default_family().size() == 10);
  CHECK_THROWS_AS(TestFunction(-1.0, 0.0, 0.0), std::invalid_argument);
  const TestFunction J(2.0, 1.0, 0.5);
  CHECK(J(0.0) == doctest::Approx(2.5));
  CHECK(J(100.0) == doctest::Approx(0.5).epsilon(1e-9));
}
