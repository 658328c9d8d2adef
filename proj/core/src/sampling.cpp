#include "sclkin/sampling.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sclkin {

Configuration sample_initial_path(const RateKernel& g, double lambda,
                                  const StateGrid& grid, double L,
                                  const Hamiltonian& h, PathRng& rng) {
  if (g.size() != grid.size())
    throw std::invalid_argument("sample_initial_path: kernel/grid dimension mismatch");
  std::vector<double> xs, values;
  std::size_t state = 0;
  double x = 0.0;
  for (;;) {
    x += rng.exponential(lambda);
    if (!(x <= L)) break;
    const std::size_t next = rng.categorical(g.row(state));
    xs.push_back(x);
    values.push_back(grid.state(next));
    state = next;
  }
  return Configuration(L, grid.state(0), xs, values, h);
}

Configuration sample_candidate(const MarginalMeasure& ell_t, const RateKernel& f_t,
                               double lambda, const StateGrid& grid, double L,
                               const Hamiltonian& h, PathRng& rng) {
  if (ell_t.size() != grid.size() || f_t.size() != grid.size())
    throw std::invalid_argument("sample_candidate: dimension mismatch");
  const std::size_t n_jumps = static_cast<std::size_t>(rng.poisson(lambda * L));
  std::vector<double> xs(n_jumps);
  for (double& x : xs) x = L * rng.uniform01();
  std::sort(xs.begin(), xs.end());

  std::size_t state = rng.categorical(ell_t.weights());
  const double rho0 = grid.state(state);
  std::vector<double> values(n_jumps);
  for (std::size_t j = 0; j < n_jumps; ++j) {
    std::size_t next;
    try {
      next = rng.categorical(f_t.row(state));
    } catch (const std::runtime_error&) {
      std::ostringstream os;
      os << "sample_candidate: zero rate row at state index " << state << " with "
         << (n_jumps - j) << " draws remaining";
      throw std::runtime_error(os.str());
    }
    values[j] = grid.state(next);
    state = next;
  }
  return Configuration(L, rho0, xs, values, h);
}

}  // namespace sclkin
