#include "mls/rng.hpp"

#include <cmath>
#include <numbers>

#include "mls/errors.hpp"

namespace mls {

GaussianStream::GaussianStream(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

GaussianStream GaussianStream::derive(std::uint64_t seed, std::uint32_t tag,
                                      std::uint32_t trial,
                                      std::uint32_t chain) {
  GaussianStream s(0);
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), tag, trial, chain};
  s.engine_.seed(seq);
  return s;
}

double GaussianStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianStream::gaussian() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  have_cached_ = true;
  return r * std::cos(theta);
}

Eigen::VectorXd GaussianStream::gaussians(int n) {
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = gaussian();
  return out;
}

std::uint64_t GaussianStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw EmptyError("uniform_index: n must be positive");
  const std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

}  // namespace mls
