#include "mls/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "mls/harness.hpp"
#include "mls/oracle.hpp"
#include "mls/samplers.hpp"
#include "mls/transport.hpp"

namespace mls {

namespace {

struct Suite {
  int failures = 0;

  void check(const char* name, bool ok, double observed) {
    std::printf("  %-52s %s (%.3g)\n", name, ok ? "ok" : "FAIL", observed);
    if (!ok) ++failures;
  }
};

Vector interior_box_point(int d, double margin, GaussianStream& rng) {
  Vector x(d);
  for (int i = 0; i < d; ++i)
    x[i] = (1.0 - margin) * (2.0 * rng.uniform() - 1.0);
  return x;
}

// Uniform on the filled simplex (normalized exponentials), pulled toward
// the barycenter so every barrier inequality keeps margin
// shrink / (d + 1).
Vector interior_simplex_point(int d, double shrink, GaussianStream& rng) {
  Vector e(d + 1);
  for (int i = 0; i <= d; ++i) e[i] = -std::log1p(-rng.uniform());
  const Vector p = e.head(d) / e.sum();
  return (1.0 - shrink) * p + Vector::Constant(d, shrink / (d + 1));
}

Vector random_direction(int d, GaussianStream& rng) {
  Vector u = rng.gaussians(d);
  const double n = u.norm();
  return n > 0 ? Vector(u / n) : Vector::Unit(d, 0);
}

Vector interior_point(const MirrorMap& map, GaussianStream& rng) {
  switch (map.kind()) {
    case MapKind::Euclidean:
      return 2.0 * rng.gaussians(map.dimension());
    case MapKind::BoxLogBarrier:
      return interior_box_point(map.dimension(), 1e-3, rng);
    case MapKind::SimplexBarrier:
    case MapKind::WeightedSimplexBarrier:
      return interior_simplex_point(map.dimension(), 1e-3, rng);
  }
  return Vector::Zero(map.dimension());
}

// Analytic Hessian quadratic forms, independent of HessianFactor.
double analytic_quadratic_form(const MirrorMap& map, const Vector& x,
                               const Vector& u) {
  switch (map.kind()) {
    case MapKind::Euclidean:
      return u.squaredNorm();
    case MapKind::BoxLogBarrier: {
      double q = 0.0;
      for (int i = 0; i < x.size(); ++i) {
        const double a = 1.0 - x[i];
        const double b = 1.0 + x[i];
        q += u[i] * u[i] * (1.0 / (a * a) + 1.0 / (b * b));
      }
      return q;
    }
    case MapKind::SimplexBarrier: {
      double q = 0.0;
      for (int i = 0; i < x.size(); ++i) q += u[i] * u[i] / (x[i] * x[i]);
      const double slack = 1.0 - x.sum();
      const double s = u.sum();
      return q + s * s / (slack * slack);
    }
    case MapKind::WeightedSimplexBarrier: {
      const Vector& w = map.weights();
      double q = 0.0;
      for (int i = 0; i < x.size(); ++i)
        q += w[i + 1] * u[i] * u[i] / (x[i] * x[i]);
      const double slack = 1.0 - x.sum();
      const double s = u.sum();
      return q + w[0] * s * s / (slack * slack);
    }
  }
  return 0.0;
}

std::vector<MirrorMap> all_maps() {
  Vector w(7);
  w << 2.0, 0.5, 1.0, 2.5, 4.0, 1.5, 0.75;
  return {MirrorMap::euclidean(6), MirrorMap::box_log_barrier(6),
          MirrorMap::simplex_barrier(6),
          MirrorMap::weighted_simplex_barrier(w)};
}

int geometry_suite() {
  Suite s;
  GaussianStream rng(2024);

  double worst_rt = 0.0;
  for (const auto& map : all_maps()) {
    for (int i = 0; i < 1000; ++i) {
      const Vector x = interior_point(map, rng);
      const Vector back = map.dual_grad(map.grad(x));
      worst_rt = std::max(worst_rt, (back - x).cwiseAbs().maxCoeff());
    }
  }
  s.check("dual-gradient round trip <= 1e-9", worst_rt <= 1e-9, worst_rt);

  double min_breg = 0.0;
  double worst_self = 0.0;
  for (const auto& map : all_maps()) {
    for (int i = 0; i < 200; ++i) {
      const Vector x = interior_point(map, rng);
      const Vector y = interior_point(map, rng);
      min_breg = std::min(min_breg, map.bregman(x, y));
      worst_self = std::max(worst_self, std::abs(map.bregman(x, x)));
    }
  }
  s.check("bregman divergence nonnegative", min_breg >= 0.0, min_breg);
  s.check("bregman(x, x) = 0 within 1e-12", worst_self <= 1e-12, worst_self);

  double worst_factor = 0.0;
  for (const auto& map : all_maps()) {
    for (int i = 0; i < 200; ++i) {
      const Vector x = interior_point(map, rng);
      const Vector u = random_direction(map.dimension(), rng);
      const double exact = analytic_quadratic_form(map, x, u);
      const double got = map.hessian_factor(x).quadratic_form(u);
      worst_factor =
          std::max(worst_factor, std::abs(got - exact) / std::max(1.0, exact));
    }
  }
  s.check("hessian factor reproduces quadratic form (1e-10)",
          worst_factor <= 1e-10, worst_factor);

  Vector w3(4);
  w3 << 2.0, 1.0, 3.0, 0.5;
  const std::vector<MirrorMap> barrier_maps = {
      MirrorMap::box_log_barrier(3), MirrorMap::simplex_barrier(2),
      MirrorMap::weighted_simplex_barrier(w3)};
  double worst_res = 0.0;
  for (const auto& map : barrier_maps) {
    for (int i = 0; i < 100; ++i) {
      Vector x;
      if (map.kind() == MapKind::BoxLogBarrier) {
        x = interior_box_point(map.dimension(), 0.1, rng);
      } else {
        x = interior_simplex_point(map.dimension(), 0.4, rng);
      }
      const Vector u = random_direction(map.dimension(), rng);
      const double res = map.self_concordance_residual(x, u, 1e-5);
      worst_res = std::min(worst_res, res);
    }
  }
  s.check("self-concordance residual >= -1e-4", worst_res >= -1e-4,
          worst_res);
  return s.failures;
}

int samplers_suite() {
  Suite s;
  GaussianStream rng(77);

  // MLA under the Euclidean map is exactly ULA given a shared stream.
  {
    const int d = 5;
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(d, d) * 0.7;
    const Potential pot = Potential::quadratic(a);
    const MirrorMap map = MirrorMap::euclidean(d);
    SamplerConfig cfg;
    cfg.step_size = 0.05;
    cfg.inner_steps = 1;
    cfg.iterations = 1000;
    GaussianStream s1 = GaussianStream::derive(9, 1, 1, 1);
    GaussianStream s2 = GaussianStream::derive(9, 1, 1, 1);
    const Vector x0 = Vector::Constant(d, 0.3);
    const Trajectory mla = run_chain(map, pot, SamplerKind::MLA, x0, cfg, s1);
    const Trajectory ula = run_chain(map, pot, SamplerKind::ULA, x0, cfg, s2);
    double worst = 0.0;
    for (std::size_t k = 0; k < mla.states.size(); ++k) {
      worst = std::max(
          worst, (mla.states[k] - ula.states[k]).cwiseAbs().maxCoeff());
    }
    s.check("euclidean MLA matches ULA to 1e-12", worst <= 1e-12, worst);
  }

  // Half-step stationarity and the Bregman proximal inequality.
  {
    const int d = 4;
    const MirrorMap map = MirrorMap::simplex_barrier(d);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(d, d) * 0.5;
    const Potential pot = Potential::quadratic(a);
    double min_slack = 0.0;
    double worst_res = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vector x = interior_simplex_point(d, 0.05, rng);
      const Vector y = interior_simplex_point(d, 0.05, rng);
      const double eta = 0.01 + 0.3 * rng.uniform();
      const Vector g = pot.grad(x);
      const Vector x_plus = mla_half_step(map, pot, x, eta);
      worst_res = std::max(
          worst_res, (map.grad(x_plus) - map.grad(x) + eta * g)
                         .cwiseAbs()
                         .maxCoeff());
      const double lhs = eta * g.dot(x_plus) - eta * g.dot(y);
      const double rhs = map.bregman(y, x) - map.bregman(y, x_plus) -
                         map.bregman(x_plus, x);
      min_slack = std::min(min_slack, rhs - lhs);
    }
    s.check("half-step stationarity residual <= 1e-8", worst_res <= 1e-8,
            worst_res);
    s.check("bregman proximal inequality slack >= -1e-8",
            min_slack >= -1e-8, min_slack);
  }

  // Zero step size leaves the state untouched, bitwise.
  {
    const int d = 3;
    const MirrorMap map = MirrorMap::box_log_barrier(d);
    const Potential pot = Potential::zero(d);
    const Vector x = Vector::Constant(d, 0.25);
    const Vector half = mla_half_step(map, pot, x, 0.0);
    const Vector diff = mla_diffusion_step(map, x, 0.0, 3, rng);
    const bool ok = half == x && diff == x;
    s.check("eta = 0 is the exact identity", ok, 0.0);
  }

  // Domain confinement over a short run.
  {
    const int d = 5;
    SamplerConfig cfg;
    cfg.step_size = 0.01;
    cfg.inner_steps = 10;
    cfg.iterations = 10000;
    const Potential pot = Potential::zero(d);
    bool confined = true;
    {
      GaussianStream chain = GaussianStream::derive(5, 2, 1, 0);
      const MirrorMap map = MirrorMap::box_log_barrier(d);
      const Trajectory t = run_chain(map, pot, SamplerKind::MLA,
                                     Vector::Zero(d), cfg, chain);
      for (const auto& st : t.states) confined = confined && map.interior(st);
    }
    {
      GaussianStream chain = GaussianStream::derive(5, 2, 1, 1);
      const MirrorMap map = MirrorMap::simplex_barrier(d);
      const Trajectory t =
          run_chain(map, pot, SamplerKind::MLA,
                    Vector::Constant(d, 1.0 / (d + 1)), cfg, chain);
      for (const auto& st : t.states) confined = confined && map.interior(st);
    }
    s.check("MLA iterates stay strictly interior (10^4 steps)", confined,
            confined ? 1.0 : 0.0);
  }

  // Dual-increment covariance is 2h hess(x) entrywise.
  {
    const int d = 3;
    const MirrorMap map = MirrorMap::simplex_barrier(d);
    Vector x(d);
    x << 0.2, 0.3, 0.1;
    const double h = 0.05;
    const HessianFactor f = map.hessian_factor(x);
    const int reps = 100000;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (int r = 0; r < reps; ++r) {
      const Vector dw = std::sqrt(2.0 * h) * f.apply(rng.gaussians(d));
      cov += dw * dw.transpose();
    }
    cov /= reps;
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        Vector ei = Vector::Unit(d, i);
        Vector ej = Vector::Unit(d, j);
        const double target =
            2.0 * h *
            0.25 *
            (analytic_quadratic_form(map, x, ei + ej) -
             analytic_quadratic_form(map, x, ei - ej));
        worst = std::max(worst, std::abs(cov(i, j) - target) /
                                    std::abs(target));
      }
    }
    s.check("dual noise covariance within 5% of 2h hess", worst <= 0.05,
            worst);
  }

  // Mixture sampling is uniform over {1..N}.
  {
    Trajectory traj;
    for (int k = 0; k <= 5; ++k)
      traj.states.push_back(Vector::Constant(1, static_cast<double>(k)));
    std::vector<int> counts(6, 0);
    const int reps = 50000;
    for (int r = 0; r < reps; ++r) {
      const int k =
          static_cast<int>(sample_from_mixture(traj, rng)[0]);
      counts[static_cast<std::size_t>(k)]++;
    }
    const double p = 1.0 / 5.0;
    const double sigma = std::sqrt(p * (1 - p) * reps);
    bool ok = counts[0] == 0;
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k) {
      const double z = std::abs(counts[k] - p * reps) / sigma;
      worst = std::max(worst, z);
      ok = ok && z <= 3.0;
    }
    s.check("mixture draws uniform over {1..N}, X_0 never", ok, worst);
  }
  return s.failures;
}

double brute_force_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += cost(i, idx[i]);
    best = std::min(best, total);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

int transport_suite() {
  Suite s;
  GaussianStream rng(99);

  double worst_gap = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::MatrixXd cost(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) cost(i, j) = rng.uniform();
    const double exact = brute_force_assignment(cost);
    const double got = min_cost_assignment(cost).total_cost;
    worst_gap = std::max(worst_gap, std::abs(got - exact));
  }
  s.check("assignment matches brute force on 6x6", worst_gap <= 1e-12,
          worst_gap);

  {
    double worst_sym = 0.0;
    double worst_tri = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::MatrixXd pa(12, 3), pb(12, 3), pc(12, 3);
      for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 3; ++j) {
          pa(i, j) = rng.gaussian();
          pb(i, j) = rng.gaussian();
          pc(i, j) = rng.gaussian();
        }
      const EmpiricalMeasure a(pa), b(pb), c(pc);
      const double ab = empirical_w2_sq(a, b);
      const double ba = empirical_w2_sq(b, a);
      worst_sym = std::max(worst_sym, std::abs(ab - ba));
      const double w_ab = std::sqrt(ab);
      const double w_ac = std::sqrt(empirical_w2_sq(a, c));
      const double w_cb = std::sqrt(empirical_w2_sq(c, b));
      worst_tri = std::max(worst_tri, w_ab - (w_ac + w_cb));
    }
    s.check("W2 symmetry within 1e-12", worst_sym <= 1e-12, worst_sym);
    s.check("W2 triangle inequality", worst_tri <= 1e-12, worst_tri);
  }

  {
    const MirrorMap map = MirrorMap::box_log_barrier(1);
    bool sorted_optimal = true;
    for (int rep = 0; rep < 30; ++rep) {
      const int m = 2 + static_cast<int>(rng.uniform_index(7));
      std::vector<double> xs(m), ys(m);
      for (int i = 0; i < m; ++i) {
        xs[i] = 0.95 * (2.0 * rng.uniform() - 1.0);
        ys[i] = 0.95 * (2.0 * rng.uniform() - 1.0);
      }
      Eigen::MatrixXd cost(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          cost(i, j) = map.bregman(Vector::Constant(1, xs[i]),
                                   Vector::Constant(1, ys[j]));
      const double opt = min_cost_assignment(cost).total_cost;
      std::sort(xs.begin(), xs.end());
      std::sort(ys.begin(), ys.end());
      double sorted_cost = 0.0;
      for (int i = 0; i < m; ++i)
        sorted_cost += map.bregman(Vector::Constant(1, xs[i]),
                                   Vector::Constant(1, ys[i]));
      sorted_optimal =
          sorted_optimal && sorted_cost <= opt + 1e-10 * std::max(1.0, opt);
    }
    s.check("1-D bregman optimum is the sorted matching", sorted_optimal,
            sorted_optimal ? 1.0 : 0.0);
  }
  return s.failures;
}

int oracle_suite() {
  Suite s;
  GaussianStream rng(123);

  {
    const int d = 10;
    const Vector w = Vector::Constant(d + 1, 2.0);
    const int n = 100000;
    Eigen::MatrixXd draws(n, d);
    for (int i = 0; i < n; ++i)
      draws.row(i) = sample_dirichlet_gamma(w, rng).transpose();
    const Moments m = per_coordinate_moments(draws);
    const double mean_target = 3.0 / 33.0;
    const double var_target = mean_target * (1.0 - mean_target) / 34.0;
    double worst = 0.0;
    for (int j = 0; j < d; ++j) {
      const double se_mean = std::sqrt(m.variance[j] / n);
      worst = std::max(worst, std::abs(m.mean[j] - mean_target) / se_mean);
    }
    s.check("dirichlet means within 3 se of 1/11", worst <= 3.0, worst);
    double worst_var = 0.0;
    for (int j = 0; j < d; ++j) {
      // se of the sample variance via the fourth-moment formula.
      const double centered4 =
          (draws.col(j).array() - m.mean[j]).pow(4).mean();
      const double se_var = std::sqrt(
          (centered4 - m.variance[j] * m.variance[j]) / n);
      worst_var =
          std::max(worst_var, std::abs(m.variance[j] - var_target) / se_var);
    }
    s.check("dirichlet variances within 3 se of formula", worst_var <= 3.0,
            worst_var);
  }

  {
    const int n = 100000;
    Eigen::MatrixXd draws(n, 2);
    for (int i = 0; i < n; ++i)
      draws.row(i) = sample_uniform_box(2, rng).transpose();
    const Moments m = per_coordinate_moments(draws);
    double worst = 0.0;
    for (int j = 0; j < 2; ++j) {
      worst = std::max(worst,
                       std::abs(m.mean[j]) / std::sqrt(m.variance[j] / n));
      const double var_z = std::abs(m.variance[j] - 1.0 / 3.0) /
                           std::sqrt((1.0 / 5.0 - 1.0 / 9.0) / n);
      worst = std::max(worst, var_z);
      const double skew =
          (draws.col(j).array() - m.mean[j]).pow(3).mean() /
          std::pow(m.variance[j], 1.5);
      worst = std::max(worst, std::abs(skew) / std::sqrt(6.0 / n));
    }
    s.check("uniform box moments and skewness within 3 sigma", worst <= 3.0,
            worst);
  }

  {
    bool inside = true;
    for (int i = 0; i < 10000; ++i) {
      const Vector x = sample_uniform_l1_ball(5, rng);
      inside = inside && x.cwiseAbs().sum() <= 1.0 + 1e-15;
    }
    s.check("l1-ball draws satisfy |x|_1 <= 1", inside, inside ? 1.0 : 0.0);
  }

  {
    // 1-D target exp(-2x^2) on [-1, 1]: KS statistic against the
    // numerically integrated CDF.
    Eigen::MatrixXd a(1, 1);
    a << 4.0;
    RejectionSpec spec{Potential::quadratic(a), Vector::Constant(1, -1.0),
                       Vector::Constant(1, 1.0), 1.0,
                       [](const Vector&) { return true; }};
    spec.validate();
    const int n = 10000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = rejection_sample(spec, rng)[0];
    std::sort(xs.begin(), xs.end());
    const int grid = 200000;
    std::vector<double> cdf(grid + 1, 0.0);
    double total = 0.0;
    for (int g = 1; g <= grid; ++g) {
      const double x0 = -1.0 + 2.0 * (g - 1) / grid;
      const double x1 = -1.0 + 2.0 * g / grid;
      total += 0.5 * (std::exp(-2.0 * x0 * x0) + std::exp(-2.0 * x1 * x1)) *
               (x1 - x0);
      cdf[g] = total;
    }
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = (xs[i] + 1.0) / 2.0 * grid;
      const double f = cdf[static_cast<int>(std::clamp(g, 0.0, double(grid)))] / total;
      ks = std::max(ks, std::abs(f - (i + 1.0) / n));
      ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    }
    const double crit = 1.6276 / std::sqrt(static_cast<double>(n));
    s.check("rejection sampler KS below the 1% critical value", ks < crit,
            ks);
  }

  {
    // Acceptance rate equals integral(exp(-V)) / (M * volume).
    Eigen::MatrixXd a(1, 1);
    a << 4.0;
    RejectionSpec spec{Potential::quadratic(a), Vector::Constant(1, -1.0),
                       Vector::Constant(1, 1.0), 1.0,
                       [](const Vector&) { return true; }};
    const int n = 20000;
    std::uint64_t proposals = 0;
    for (int i = 0; i < n; ++i) rejection_sample(spec, rng, &proposals);
    const double rate = static_cast<double>(n) / proposals;
    const int grid = 200000;
    double integral = 0.0;
    for (int g = 1; g <= grid; ++g) {
      const double x0 = -1.0 + 2.0 * (g - 1) / grid;
      const double x1 = -1.0 + 2.0 * g / grid;
      integral += 0.5 *
                  (std::exp(-2.0 * x0 * x0) + std::exp(-2.0 * x1 * x1)) *
                  (x1 - x0);
    }
    const double target = integral / 2.0;
    const double se =
        std::sqrt(target * (1.0 - target) / static_cast<double>(proposals));
    const double z = std::abs(rate - target) / se;
    s.check("acceptance rate matches the integral identity (3 sigma)",
            z <= 3.0, z);
  }
  return s.failures;
}

}  // namespace

int run_suite(const std::string& name) {
  if (name == "geometry") return geometry_suite();
  if (name == "samplers") return samplers_suite();
  if (name == "transport") return transport_suite();
  if (name == "oracle") return oracle_suite();
  throw ValidationError("unknown suite '" + name +
                        "' (expected geometry|samplers|transport|oracle)");
}

}  // namespace mls
