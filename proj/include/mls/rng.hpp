#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace mls {

// Deterministic scalar noise stream owned by exactly one consumer (one
// chain, one oracle caller).  Streams are derived from
// (master seed, tag, trial, chain) via std::seed_seq, so independent
// consumers never share draws and chain execution order cannot change
// any chain's trajectory.
//
// Gaussians are produced by Box-Muller on 53-bit uniforms from
// mt19937_64; both are fully specified by the standard, so a given
// stream replays bit-identically.  The Box-Muller pair cache is part of
// the stream state.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed);

  static GaussianStream derive(std::uint64_t seed, std::uint32_t tag,
                               std::uint32_t trial, std::uint32_t chain);

  double gaussian();
  Eigen::VectorXd gaussians(int n);

  // Uniform on [0, 1).
  double uniform();

  // Uniform on {0, ..., n-1}, modulo-bias free.
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace mls
