#include "mls/oracle.hpp"

#include <cmath>

namespace mls {

double sample_gamma(double shape, GaussianStream& noise) {
  if (shape < 1.0) {
    throw WeightError("sample_gamma: shape must be >= 1");
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = noise.gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = noise.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

Vector sample_dirichlet_gamma(const Vector& weights, GaussianStream& noise) {
  if (weights.size() < 2) {
    throw WeightError("sample_dirichlet_gamma: need a_0 plus >= 1 weight");
  }
  if (weights.minCoeff() < 0.0) {
    throw WeightError("sample_dirichlet_gamma: weights must be nonnegative");
  }
  const int d = static_cast<int>(weights.size()) - 1;
  double total = sample_gamma(weights[0] + 1.0, noise);
  Vector g(d);
  for (int i = 0; i < d; ++i) {
    g[i] = sample_gamma(weights[i + 1] + 1.0, noise);
    total += g[i];
  }
  return g / total;
}

Vector sample_uniform_box(int dim, GaussianStream& noise) {
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x[i] = 2.0 * noise.uniform() - 1.0;
  return x;
}

Vector sample_uniform_l1_ball(int dim, GaussianStream& noise) {
  Vector e(dim);
  double total = 0.0;
  for (int i = 0; i < dim; ++i) {
    e[i] = -std::log1p(-noise.uniform());  // Exp(1)
    total += e[i];
  }
  if (total <= 0.0) total = 1.0;
  Vector x = e / total;
  for (int i = 0; i < dim; ++i) {
    if (noise.uniform() < 0.5) x[i] = -x[i];
  }
  const double radius =
      std::pow(noise.uniform(), 1.0 / static_cast<double>(dim));
  return radius * x;
}

void RejectionSpec::validate() const {
  if (lower.size() != upper.size() ||
      lower.size() != potential.dimension()) {
    throw SizeError("rejection spec: box bounds must match the potential");
  }
  if ((upper - lower).minCoeff() <= 0.0) {
    throw ValidationError("rejection spec: box must have positive extent");
  }
  if (!(envelope > 0.0)) {
    throw ValidationError("rejection spec: envelope must be positive");
  }
  // Coarse per-axis grid spot-check of the envelope bound.
  const int d = static_cast<int>(lower.size());
  const int steps = d <= 3 ? 9 : 4;
  Vector x = 0.5 * (lower + upper);
  for (int axis = 0; axis < d; ++axis) {
    for (int s = 0; s <= steps; ++s) {
      Vector probe = x;
      probe[axis] =
          lower[axis] + (upper[axis] - lower[axis]) * s / double(steps);
      if (feasible && !feasible(probe)) continue;
      if (std::exp(-potential.value(probe)) > envelope * (1.0 + 1e-12)) {
        throw ValidationError(
            "rejection spec: envelope is below exp(-V) on the grid");
      }
    }
  }
}

RejectionSpec RejectionSpec::simplex_quadratic(Eigen::MatrixXd a) {
  const int d = static_cast<int>(a.rows());
  RejectionSpec spec{Potential::quadratic(std::move(a)), Vector::Zero(d),
                     Vector::Ones(d), 1.0,
                     [](const Vector& x) {
                       return x.minCoeff() > 0.0 && x.sum() < 1.0;
                     }};
  spec.validate();
  return spec;
}

Vector rejection_sample(const RejectionSpec& spec, GaussianStream& noise,
                        std::uint64_t* proposals) {
  const int d = static_cast<int>(spec.lower.size());
  constexpr std::uint64_t kBudget = 1000000;
  for (std::uint64_t attempt = 0; attempt < kBudget; ++attempt) {
    Vector x(d);
    for (int i = 0; i < d; ++i) {
      x[i] = spec.lower[i] + (spec.upper[i] - spec.lower[i]) * noise.uniform();
    }
    const double u = noise.uniform();
    if (proposals) ++*proposals;
    if (spec.feasible && !spec.feasible(x)) continue;
    if (u < std::exp(-spec.potential.value(x)) / spec.envelope) return x;
  }
  throw BudgetError(
      "rejection_sample: 10^6 proposals rejected; envelope is too loose");
}

}  // namespace mls
