#include "sclkin/particle_system.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sclkin {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Configuration::Configuration(double L, double rho0) : L_(L), rho0_(rho0) {
  if (!(L > 0.0)) throw std::invalid_argument("Configuration: L must be positive");
  if (!(rho0 >= 0.0)) throw std::invalid_argument("Configuration: rho0 must be >= 0");
}

Configuration::Configuration(double L, double rho0, std::span<const double> positions,
                             std::span<const double> values, const Hamiltonian& h)
    : Configuration(L, rho0) {
  if (positions.size() != values.size())
    throw std::invalid_argument("Configuration: positions/values size mismatch");
  double prev_x = 0.0;
  double prev_v = rho0;
  parts_.reserve(positions.size());
  for (std::size_t j = 0; j < positions.size(); ++j) {
    const double x = positions[j];
    const double v = values[j];
    if (!(x > prev_x))
      throw std::invalid_argument("Configuration: positions must be strictly increasing in (0,L]");
    if (!(x <= L))
      throw std::invalid_argument("Configuration: position beyond L");
    if (!(v >= prev_v))
      throw std::invalid_argument("Configuration: values must be nondecreasing");
    const double vel = -divided_difference(h, prev_v, v);
    parts_.push_back({x, vel, v});  // clock starts at 0, intercept = position
    prev_x = x;
    prev_v = v;
  }
}

double Configuration::rho(std::size_t i) const {
  if (i == 0) return rho0_;
  return parts_[i - 1].value;
}

const char* event_kind_name(Event::Kind k) {
  switch (k) {
    case Event::Kind::exit_at_zero: return "exit_at_zero";
    case Event::Kind::collision: return "collision";
    case Event::Kind::boundary_entry: return "boundary_entry";
    case Event::Kind::horizon: return "horizon";
  }
  return "?";
}

std::vector<double> shock_velocities(const Configuration& q, const Hamiltonian& h) {
  std::vector<double> v;
  v.reserve(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    v.push_back(-divided_difference(h, q.rho(j), q.rho(j + 1)));
  }
  return v;
}

/// Internal mutating operations; kept out of the public value-type surface.
class ParticleOps {
 public:
  static Event next_event(const Configuration& q, double horizon_abs) {
    Event best;
    best.kind = Event::Kind::horizon;
    best.time = horizon_abs;

    if (!q.parts_.empty()) {
      const auto& first = q.parts_.front();
      if (first.velocity < 0.0) {
        const double t_exit = std::max(-first.intercept / first.velocity, q.now_);
        if (t_exit < best.time ||
            (t_exit == best.time && best.kind == Event::Kind::horizon)) {
          best.kind = Event::Kind::exit_at_zero;
          best.time = t_exit;
          best.index = 0;
        }
      }
    }
    for (std::size_t j = 0; j + 1 < q.parts_.size(); ++j) {
      const auto& a = q.parts_[j];
      const auto& b = q.parts_[j + 1];
      if (!(a.velocity > b.velocity)) continue;  // not approaching
      const double t_c =
          std::max((b.intercept - a.intercept) / (a.velocity - b.velocity), q.now_);
      // Ties: an event at the horizon still fires; exit beats collision
      // (checked first, never displaced by an equal-time collision);
      // ascending j keeps the smallest colliding index.
      if (t_c < best.time || (t_c == best.time && best.kind == Event::Kind::horizon)) {
        best.kind = Event::Kind::collision;
        best.time = t_c;
        best.index = j;
      }
    }
    return best;
  }

  static void apply_exit(Configuration& q) {
    q.rho0_ = q.parts_.front().value;
    q.parts_.erase(q.parts_.begin());
  }

  static void apply_collision(Configuration& q, std::size_t j, double t_c,
                              const Hamiltonian& h) {
    auto& survivor = q.parts_[j + 1];
    const double pos = survivor.intercept + survivor.velocity * t_c;
    const double left = q.rho(j);  // value left of the annihilated jump
    survivor.velocity = -divided_difference(h, left, survivor.value);
    survivor.intercept = pos - survivor.velocity * t_c;
    q.parts_.erase(q.parts_.begin() + static_cast<std::ptrdiff_t>(j));
  }

  // Advance to an absolute clock value.  The clock is assigned, never
  // accumulated, so runs that interleave extra stops (boundary proposals,
  // far-away events) still land on bitwise-identical final times.
  static void advance_to(Configuration& q, const Hamiltonian& h, double target,
                         std::vector<Event>* log) {
    if (target < q.now_)
      throw std::invalid_argument("advance_deterministic: dt must be >= 0");
    for (;;) {
      Event e = next_event(q, target);
      if (e.kind == Event::Kind::horizon) {
        q.now_ = target;
        return;
      }
      q.now_ = e.time;
      if (log) log->push_back(e);
      if (e.kind == Event::Kind::exit_at_zero) {
        apply_exit(q);
      } else {
        apply_collision(q, e.index, e.time, h);
      }
      assert_valid(q);
    }
  }

  static void insert(Configuration& q, double rho_plus, const Hamiltonian& h) {
    if (!(rho_plus > q.last_value())) {
      std::ostringstream os;
      os << "insert_particle: entering value " << rho_plus
         << " must exceed the current top value " << q.last_value();
      throw std::invalid_argument(os.str());
    }
    if (!q.parts_.empty() && q.jump_position(q.size() - 1) >= q.L_) {
      throw std::logic_error("insert_particle: a particle already sits at x = L; advance first");
    }
    const double vel = -divided_difference(h, q.last_value(), rho_plus);
    q.parts_.push_back({q.L_ - vel * q.now_, vel, rho_plus});
    assert_valid(q);
  }

  static void assert_valid(const Configuration& q) {
#ifndef NDEBUG
    for (std::size_t j = 0; j + 1 <= q.size(); ++j) {
      assert(q.rho(j) <= q.rho(j + 1) && "values must stay nondecreasing");
    }
    for (std::size_t j = 0; j + 1 < q.size(); ++j) {
      assert(q.jump_position(j) <= q.jump_position(j + 1) + 1e-9 * q.L_ &&
             "positions must stay ordered");
    }
#else
    (void)q;
#endif
  }
};

Event next_deterministic_event(const Configuration& q, const Hamiltonian& h,
                               double horizon) {
  (void)h;  // velocities are already baked into the particle state
  if (horizon < 0.0)
    throw std::invalid_argument("next_deterministic_event: horizon must be >= 0");
  return ParticleOps::next_event(q, q.time() + horizon);
}

Configuration advance_deterministic(Configuration q, const Hamiltonian& h, double dt,
                                    std::vector<Event>* log) {
  if (dt < 0.0) throw std::invalid_argument("advance_deterministic: dt must be >= 0");
  ParticleOps::advance_to(q, h, q.time() + dt, log);
  return q;
}

Configuration insert_particle(Configuration q, double rho_plus, const Hamiltonian& h) {
  ParticleOps::insert(q, rho_plus, h);
  return q;
}

double boundary_entry_rate(std::size_t state_index, const RateKernel& f,
                           const StateGrid& grid, const Hamiltonian& h) {
  double s = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double w = f(state_index, m);
    if (w != 0.0) s += divided_difference(h, grid.state(state_index), grid.state(m)) * w;
  }
  return s;
}

Configuration simulate_pdmp(Configuration q, const Hamiltonian& h,
                            const KernelTrajectory& f_traj, const StateGrid& grid,
                            double s, double t, PathRng& rng, std::vector<Event>* log) {
  if (!(s <= t)) throw std::invalid_argument("simulate_pdmp: need s <= t");
  if (!f_traj.covers(s, t))
    throw std::invalid_argument("simulate_pdmp: kernel trajectory does not cover [s,t]");

  // Kernel time = configuration clock + delta; zero when a fresh
  // configuration is evolved from s = 0, the common case.
  const double delta = s - q.time();
  const double q_end = t - delta;

  const double envelope = f_traj.max_kernel_norm() * max_speed(h);
  if (!(envelope > 0.0)) {
    ParticleOps::advance_to(q, h, q_end, log);
    return q;
  }

  DividedDifferenceTable dd(h, grid.states());
  const std::size_t n = grid.size();
  std::vector<double> weights(n);

  for (;;) {
    const double tau_q = q.time() + rng.exponential(envelope);
    if (tau_q >= q_end) {
      ParticleOps::advance_to(q, h, q_end, log);
      return q;
    }
    ParticleOps::advance_to(q, h, tau_q, log);

    const std::size_t row = grid.index_of(q.last_value());
    const RateKernel& f = f_traj.at_left(tau_q + delta);
    double total = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double w = std::max(dd(row, m) * f(row, m), 0.0);
      weights[m] = w;
      total += w;
    }
    if (total <= 0.0) continue;
    if (rng.uniform01() * envelope >= total) continue;  // thinned away

    const std::size_t target = rng.categorical(weights);
    if (target == row) continue;  // self-jump at the top state: no-op
    if (target < row)
      throw std::logic_error("simulate_pdmp: proposal below the boundary value");
    ParticleOps::insert(q, grid.state(target), h);
    if (log) {
      Event e;
      e.kind = Event::Kind::boundary_entry;
      e.time = q.time();
      e.value = grid.state(target);
      log->push_back(e);
    }
  }
}

}  // namespace sclkin
