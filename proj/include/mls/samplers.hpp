#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mls/mirror.hpp"
#include "mls/potentials.hpp"
#include "mls/rng.hpp"

namespace mls {

enum class SamplerKind { MLA, ULA, PLA };

struct SamplerConfig {
  double step_size = 0.0;   // eta, in diffusion time units
  int inner_steps = 1;      // Euler-Maruyama substeps of the diffusion phase
  long iterations = 1;      // outer iterations N
  std::uint64_t seed = 0;

  // step_size > 0, inner_steps >= 1, iterations >= 1.  A zero step size
  // is rejected here but the step functions below accept eta = 0 so
  // tests can assert the identity property.
  void validate() const;
};

struct ChainState {
  Vector primal;    // X_k, strictly interior for barrier maps
  Vector dual;      // cached grad phi(X_k)
  long step_index = 0;
};

struct Trajectory {
  std::vector<Vector> states;  // X_0, ..., X_N

  long step_count() const { return static_cast<long>(states.size()) - 1; }
};

// Mirror-descent half step: the Bregman proximal point
//   argmin_x [ <eta grad V(x_k), x> + D_phi(x, x_k) ],
// realized in closed form through the dual identity
//   grad phi(x_{k+1/2}) = grad phi(x_k) - eta grad V(x_k).
// The stationarity residual of the returned point is checked at runtime.
Vector mla_half_step(const MirrorMap& map, const Potential& p, const Vector& x,
                     double eta);

// Diffusion phase: starting from W = grad phi(x_half), performs `inner`
// Euler-Maruyama substeps of step h = eta / inner,
//   W <- W + sqrt(2h) C(X) xi,   X = dual_grad(W),  C C^T = hess phi(X),
// and returns dual_grad(W).  Consumes exactly inner * d Gaussians.
Vector mla_diffusion_step(const MirrorMap& map, const Vector& x_half,
                          double eta, int inner, GaussianStream& noise);

// One full mirror-Langevin step (half step, then diffusion).  The half
// step consumes no noise; the diffusion consumes inner * d Gaussians.
ChainState mla_step(const MirrorMap& map, const Potential& p,
                    const ChainState& state, const SamplerConfig& cfg,
                    GaussianStream& noise);

// Unadjusted Langevin: x - eta grad V(x) + sqrt(2 eta) xi.
Vector ula_step(const Potential& p, const Vector& x, double eta,
                GaussianStream& noise);

using Projection = std::function<Vector(const Vector&)>;

// Projected Langevin: a ULA step followed by Euclidean projection onto
// the constraint set.
Vector pla_step(const Potential& p, const Projection& proj, const Vector& x,
                double eta, GaussianStream& noise);

// Per-coordinate clamp to [-1, 1].
Vector project_box(const Vector& x);

// Euclidean projection onto {x >= 0, sum x <= 1}: clip to the orthant;
// if the clipped sum exceeds 1, apply the sort-and-threshold rule for
// the unit-sum simplex.
Vector project_simplex(const Vector& x);

// Step size and iteration count for the weakly convex guarantee:
//   eta = min{eps / (2 beta' d), 1 / beta'},
//   N >= (4 beta' d cost / eps^2) max{1, eps / (2d)}.
double step_size_weak(double eps, double beta_prime, int dim);
long iterations_weak(double eps, double beta_prime, int dim,
                     double initial_cost);

// Strongly relatively convex case:
//   eta = min{alpha eps / (2 beta' d), 1 / beta'},
//   N >= (2 beta' d / (alpha^2 eps)) ln(2 cost / eps) max{1, alpha eps / (2d)}.
// Throw AlphaError when alpha <= 0.
double step_size_strong(double eps, double alpha, double beta_prime, int dim);
long iterations_strong(double eps, double alpha, double beta_prime, int dim,
                       double initial_cost);

// Runs one chain for cfg.iterations steps from x0 and records every
// iterate.  Deterministic given the stream (the seed-only overload
// derives the stream from cfg.seed).  Step failures are rethrown with
// the failing step index.  PLA projects onto the domain matching the
// map kind.
Trajectory run_chain(const MirrorMap& map, const Potential& p,
                     SamplerKind sampler, const Vector& x0,
                     const SamplerConfig& cfg, GaussianStream& noise);
Trajectory run_chain(const MirrorMap& map, const Potential& p,
                     SamplerKind sampler, const Vector& x0,
                     const SamplerConfig& cfg);

// Draws X_K with K uniform on {1, ..., N}; X_0 is never returned.
Vector sample_from_mixture(const Trajectory& traj, GaussianStream& noise);

}  // namespace mls
