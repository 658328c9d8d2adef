#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sclkin/hamiltonian.hpp"
#include "sclkin/random.hpp"
#include "sclkin/state_space.hpp"

namespace sclkin {

/// Monotone step function on [0,L] encoded as a particle configuration:
/// jump locations 0 < x_1 < ... < x_n <= L and values
/// rho_0 <= rho_1 <= ... <= rho_n (rho_0 is the value left of every jump).
///
/// Particles are stored as (intercept, velocity) pairs against the
/// configuration clock, so a particle's position is one fused expression
/// from its last merge event.  Two coupled runs that share a particle's
/// event history therefore report bitwise-identical positions for it.
class Configuration {
 public:
  Configuration(double L, double rho0);
  Configuration(double L, double rho0, std::span<const double> positions,
                std::span<const double> values, const Hamiltonian& h);

  double L() const { return L_; }
  double time() const { return now_; }
  std::size_t size() const { return parts_.size(); }  // number of jumps n

  /// rho_i for i in [0, n].
  double rho(std::size_t i) const;
  double left_value() const { return rho0_; }
  double last_value() const { return parts_.empty() ? rho0_ : parts_.back().value; }

  /// Position of jump j (j in [0, n)), evaluated at the current clock.
  double jump_position(std::size_t j) const {
    const Particle& p = parts_[j];
    return p.intercept + p.velocity * now_;
  }
  double jump_velocity(std::size_t j) const { return parts_[j].velocity; }

  /// Total increment rho_n - rho_0.
  double total_increment() const { return last_value() - rho0_; }

 private:
  struct Particle {
    double intercept;
    double velocity;
    double value;
  };

  double L_;
  double rho0_;
  double now_ = 0.0;
  std::vector<Particle> parts_;

  friend class ParticleOps;
};

struct Event {
  enum class Kind { exit_at_zero, collision, boundary_entry, horizon };
  Kind kind = Kind::horizon;
  double time = 0.0;        // absolute in the configuration clock
  std::size_t index = 0;    // collision: index of the annihilated (left) jump
  double value = 0.0;       // boundary_entry: inserted value
};

const char* event_kind_name(Event::Kind k);

/// Shock velocities -H[rho_{i-1}, rho_i] for i = 1..n.
std::vector<double> shock_velocities(const Configuration& q, const Hamiltonian& h);

/// Earliest of: first jump reaching x = 0, an adjacent pair meeting, or
/// the horizon (a duration from the current clock).  Ties: exit before
/// collision, then smallest index.
Event next_deterministic_event(const Configuration& q, const Hamiltonian& h,
                               double horizon);

/// Deterministic sticky-particle flow for a duration dt: jumps translate
/// at their shock velocities; a pair that meets loses its left member (the
/// survivor takes velocity -H[rho_{i-1}, rho_{i+1}]); a jump reaching
/// x = 0 is absorbed (rho_0 becomes rho_1).
Configuration advance_deterministic(Configuration q, const Hamiltonian& h, double dt,
                                    std::vector<Event>* log = nullptr);

/// Append a jump at x = L with value rho_plus > rho_n.  A particle already
/// sitting at L is a state error; advance first.
Configuration insert_particle(Configuration q, double rho_plus, const Hamiltonian& h);

/// Total entry rate sum_m H[v_i, v_m] f(i, m) at boundary state index i
/// (the thinning acceptance numerator).
double boundary_entry_rate(std::size_t state_index, const RateKernel& f,
                           const StateGrid& grid, const Hamiltonian& h);

/// Random evolution on [s,t]: deterministic flow interrupted by boundary
/// entries at x = L.  Entry times are thinned from a Poisson stream at the
/// envelope rate ||f|| H'(P); a proposal at time tau is accepted with
/// probability sum_m H[rho_n, v_m] f(tau, rho_n, v_m) / envelope and the
/// entering value is drawn proportional to H[rho_n, v_m] f(tau, rho_n, v_m).
/// Self-jumps at the top state are discarded as no-ops.
Configuration simulate_pdmp(Configuration q, const Hamiltonian& h,
                            const KernelTrajectory& f_traj, const StateGrid& grid,
                            double s, double t, PathRng& rng,
                            std::vector<Event>* log = nullptr);

}  // namespace sclkin
