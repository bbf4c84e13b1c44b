#include "mls/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mls {

void SamplerConfig::validate() const {
  if (!(step_size > 0.0))
    throw ValidationError("sampler config: step_size must be positive");
  if (inner_steps < 1)
    throw ValidationError("sampler config: inner_steps must be >= 1");
  if (iterations < 1)
    throw ValidationError("sampler config: iterations must be >= 1");
}

Vector mla_half_step(const MirrorMap& map, const Potential& p, const Vector& x,
                     double eta) {
  if (eta == 0.0) return x;
  const Vector target = map.grad(x) - eta * p.grad(x);
  Vector out = map.dual_grad(target);
  const double residual = (map.grad(out) - target).cwiseAbs().maxCoeff();
  const double tol =
      1e-8 * std::max(1.0, target.cwiseAbs().maxCoeff());
  if (residual > tol) {
    throw ConvergenceError("mla half step: stationarity residual " +
                           std::to_string(residual) + " exceeds tolerance");
  }
  return out;
}

Vector mla_diffusion_step(const MirrorMap& map, const Vector& x_half,
                          double eta, int inner, GaussianStream& noise) {
  if (eta == 0.0) return x_half;
  const double h = eta / inner;
  const double scale = std::sqrt(2.0 * h);
  Vector w = map.grad(x_half);
  for (int j = 0; j < inner; ++j) {
    const Vector xi = noise.gaussians(map.dimension());
    const Vector x = map.dual_grad(w);
    w += scale * map.hessian_factor(x).apply(xi);
  }
  return map.dual_grad(w);
}

ChainState mla_step(const MirrorMap& map, const Potential& p,
                    const ChainState& state, const SamplerConfig& cfg,
                    GaussianStream& noise) {
  const Vector half =
      mla_half_step(map, p, state.primal, cfg.step_size);
  ChainState next;
  next.primal = mla_diffusion_step(map, half, cfg.step_size, cfg.inner_steps,
                                   noise);
  next.dual = map.grad(next.primal);
  next.step_index = state.step_index + 1;
  return next;
}

Vector ula_step(const Potential& p, const Vector& x, double eta,
                GaussianStream& noise) {
  return x - eta * p.grad(x) +
         std::sqrt(2.0 * eta) * noise.gaussians(static_cast<int>(x.size()));
}

Vector pla_step(const Potential& p, const Projection& proj, const Vector& x,
                double eta, GaussianStream& noise) {
  return proj(ula_step(p, x, eta, noise));
}

Vector project_box(const Vector& x) {
  return x.cwiseMax(-1.0).cwiseMin(1.0);
}

Vector project_simplex(const Vector& x) {
  Vector clipped = x.cwiseMax(0.0);
  if (clipped.sum() <= 1.0) return clipped;
  // Sort-and-threshold projection onto the unit-sum simplex.
  std::vector<double> sorted(clipped.data(), clipped.data() + clipped.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) tau = candidate;
  }
  return (clipped.array() - tau).max(0.0).matrix();
}

double step_size_weak(double eps, double beta_prime, int dim) {
  return std::min(eps / (2.0 * beta_prime * dim), 1.0 / beta_prime);
}

long iterations_weak(double eps, double beta_prime, int dim,
                     double initial_cost) {
  const double n = 4.0 * beta_prime * dim * initial_cost / (eps * eps) *
                   std::max(1.0, eps / (2.0 * dim));
  return static_cast<long>(std::ceil(n));
}

double step_size_strong(double eps, double alpha, double beta_prime,
                        int dim) {
  if (alpha <= 0.0) throw AlphaError("step_size_strong: alpha must be > 0");
  return std::min(alpha * eps / (2.0 * beta_prime * dim), 1.0 / beta_prime);
}

long iterations_strong(double eps, double alpha, double beta_prime, int dim,
                       double initial_cost) {
  if (alpha <= 0.0) throw AlphaError("iterations_strong: alpha must be > 0");
  const double log_term = std::log(2.0 * initial_cost / eps);
  if (log_term <= 0.0) return 0;
  const double n = 2.0 * beta_prime * dim / (alpha * alpha * eps) * log_term *
                   std::max(1.0, alpha * eps / (2.0 * dim));
  return static_cast<long>(std::ceil(n));
}

namespace {

Projection projection_for(const MirrorMap& map) {
  switch (map.kind()) {
    case MapKind::Euclidean:
      return [](const Vector& v) { return v; };
    case MapKind::BoxLogBarrier:
      return project_box;
    case MapKind::SimplexBarrier:
    case MapKind::WeightedSimplexBarrier:
      return project_simplex;
  }
  return [](const Vector& v) { return v; };
}

}  // namespace

Trajectory run_chain(const MirrorMap& map, const Potential& p,
                     SamplerKind sampler, const Vector& x0,
                     const SamplerConfig& cfg, GaussianStream& noise) {
  cfg.validate();
  if (sampler == SamplerKind::MLA && !map.interior(x0)) {
    throw DomainError("run_chain: MLA start must be strictly interior");
  }
  Trajectory traj;
  traj.states.reserve(cfg.iterations + 1);
  traj.states.push_back(x0);

  const Projection proj = projection_for(map);
  ChainState state{x0, sampler == SamplerKind::MLA ? map.grad(x0) : Vector(),
                   0};
  Vector x = x0;
  for (long k = 0; k < cfg.iterations; ++k) {
    try {
      switch (sampler) {
        case SamplerKind::MLA:
          state = mla_step(map, p, state, cfg, noise);
          if (!map.interior(state.primal)) {
            throw DomainError("run_chain: MLA iterate left the domain");
          }
          x = state.primal;
          break;
        case SamplerKind::ULA:
          x = ula_step(p, x, cfg.step_size, noise);
          break;
        case SamplerKind::PLA:
          x = pla_step(p, proj, x, cfg.step_size, noise);
          break;
      }
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string(e.what()) + " (step " +
                             std::to_string(k + 1) + ")");
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " (step " +
                        std::to_string(k + 1) + ")");
    }
    traj.states.push_back(x);
  }
  return traj;
}

Trajectory run_chain(const MirrorMap& map, const Potential& p,
                     SamplerKind sampler, const Vector& x0,
                     const SamplerConfig& cfg) {
  GaussianStream noise(cfg.seed);
  return run_chain(map, p, sampler, x0, cfg, noise);
}

Vector sample_from_mixture(const Trajectory& traj, GaussianStream& noise) {
  const long n = traj.step_count();
  if (n < 1) throw EmptyError("sample_from_mixture: no post-initial states");
  const std::uint64_t k = noise.uniform_index(static_cast<std::uint64_t>(n));
  return traj.states[static_cast<std::size_t>(k + 1)];
}

}  // namespace mls
