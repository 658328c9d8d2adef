#include "sclkin/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sclkin {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 32) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

void for_each_path(std::size_t M, int workers, const std::function<void(std::size_t)>& body) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(M, 1));
  if (w <= 1 || M == 0) {
    for (std::size_t i = 0; i < M; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  const std::size_t chunk = (M + w - 1) / w;
  for (std::size_t k = 0; k < w; ++k) {
    const std::size_t lo = k * chunk;
    const std::size_t hi = std::min(M, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

MeanEstimate mean_and_stderr(std::span<const double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("mean_and_stderr: need at least 2 samples");
  const std::size_t M = values.size();
  const double mean = pairwise_sum(values) / static_cast<double>(M);
  std::vector<double> sq(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(M - 1);
  return {mean, std::sqrt(var / static_cast<double>(M)), M};
}

MeanEstimate estimate_mean(const std::function<double(PathRng&)>& functional, std::size_t M,
                           const RandomStreamPolicy& streams, std::uint64_t stream_offset,
                           int workers) {
  if (M < 2) throw std::invalid_argument("estimate_mean: need at least 2 paths");
  std::vector<double> values(M);
  for_each_path(M, workers, [&](std::size_t i) {
    PathRng rng = streams.stream(stream_offset + i);
    values[i] = functional(rng);
  });
  return mean_and_stderr(values);
}

}  // namespace sclkin
