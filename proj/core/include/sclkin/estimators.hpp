#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "sclkin/random.hpp"

namespace sclkin {

/// Pairwise (tree) summation; deterministic for a fixed ordering and
/// accurate enough that reductions agree to ~1e-12 relative.
double pairwise_sum(std::span<const double> values);

/// Run body(path_index) for indices [0, M) across a worker pool.  Results
/// must be written into per-index slots so the outcome is independent of
/// the worker count.  workers <= 0 selects the hardware concurrency.
void for_each_path(std::size_t M, int workers, const std::function<void(std::size_t)>& body);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Monte Carlo mean and standard error of a path functional over M
/// independent per-path streams: functional(rng_i) with
/// rng_i = streams.stream(stream_offset + i).
MeanEstimate estimate_mean(const std::function<double(PathRng&)>& functional, std::size_t M,
                           const RandomStreamPolicy& streams, std::uint64_t stream_offset = 0,
                           int workers = 1);

/// Mean and standard error of precomputed per-path values.
MeanEstimate mean_and_stderr(std::span<const double> values);

}  // namespace sclkin
