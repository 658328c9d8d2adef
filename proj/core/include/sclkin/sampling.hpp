#pragma once

#include "sclkin/particle_system.hpp"
#include "sclkin/random.hpp"
#include "sclkin/state_space.hpp"

namespace sclkin {

/// Sample the initial data: a pure-jump path started at state 0, with
/// Exponential(lambda) gaps between jump locations truncated at L and jump
/// targets drawn row-wise from g/lambda.
Configuration sample_initial_path(const RateKernel& g, double lambda,
                                  const StateGrid& grid, double L,
                                  const Hamiltonian& h, PathRng& rng);

/// Sample the product-form candidate law at one time: Poisson(lambda L)
/// many uniform jump locations, the left value from ell_t, and the value
/// chain from successive rows of f_t / lambda.  Hitting an all-zero row
/// with draws remaining is a sampling error (possible only at the top
/// state when the self-rate convention is absent).
Configuration sample_candidate(const MarginalMeasure& ell_t, const RateKernel& f_t,
                               double lambda, const StateGrid& grid, double L,
                               const Hamiltonian& h, PathRng& rng);

}  // namespace sclkin
