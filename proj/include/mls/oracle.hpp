#pragma once

#include <cstdint>
#include <functional>

#include "mls/potentials.hpp"
#include "mls/rng.hpp"

namespace mls {

// Gamma(shape) variate for shape >= 1 (Marsaglia-Tsang squeeze).
// Consumes (gaussian, uniform) pairs until acceptance.
double sample_gamma(double shape, GaussianStream& noise);

// Exact draw from the density proportional to
// (1 - sum x)^{a_0} prod_i x_i^{a_i} on the open filled simplex: gamma
// variates G_i ~ Gamma(a_i + 1) for i = 0..d, returning
// (G_1, ..., G_d) / sum G.  Weights a_0 first; a_i >= 0 allowed (the
// a = 0 boundary gives the uniform simplex law), negative weights throw.
Vector sample_dirichlet_gamma(const Vector& weights, GaussianStream& noise);

// d independent Uniform(-1, 1) coordinates.
Vector sample_uniform_box(int dim, GaussianStream& noise);

// Uniform draw from the closed unit l1 ball: normalized exponential
// spacings give a uniform point on the simplex, random signs pick the
// orthant, and a U^{1/d} factor sets the radius.  Consumes d
// exponentials, d signs, then one radial uniform.
Vector sample_uniform_l1_ball(int dim, GaussianStream& noise);

// Rejection sampler spec: propose uniformly on [lower, upper], accept a
// feasible proposal x with probability exp(-V(x)) / envelope.
struct RejectionSpec {
  Potential potential;
  Vector lower;
  Vector upper;
  double envelope = 1.0;
  std::function<bool(const Vector&)> feasible;

  // Spot-checks exp(-V) <= envelope on a coarse grid over the box.
  void validate() const;

  // The quadratic-on-the-filled-simplex target: box [0, 1]^d, M = 1
  // (V >= 0 since A is PSD).
  static RejectionSpec simplex_quadratic(Eigen::MatrixXd a);
};

// Exact sample from the density proportional to exp(-V) restricted to
// the feasible set.  Throws BudgetError after 10^6 rejected proposals.
// When `proposals` is given it accumulates the number of proposals made.
Vector rejection_sample(const RejectionSpec& spec, GaussianStream& noise,
                        std::uint64_t* proposals = nullptr);

}  // namespace mls
