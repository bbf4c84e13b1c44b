#include "mls/mirror.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mls {

namespace {

constexpr double kBoundaryMargin = 1e-14;
constexpr int kRootFindCap = 200;

}  // namespace

// ---------------------------------------------------------------------------
// HessianFactor

HessianFactor HessianFactor::identity(int dim) {
  return HessianFactor(Structure::Identity, dim);
}

HessianFactor HessianFactor::diagonal(const Vector& hess_diag) {
  HessianFactor f(Structure::Diagonal, static_cast<int>(hess_diag.size()));
  f.diag_ = hess_diag.cwiseSqrt();
  return f;
}

HessianFactor HessianFactor::diagonal_plus_rank_one(const Vector& hess_diag,
                                                    double rank_one_scale) {
  const int d = static_cast<int>(hess_diag.size());
  HessianFactor f(Structure::DiagonalPlusRankOne, d);
  f.diag_.resize(d);
  f.sub_.resize(d);
  double q = rank_one_scale;
  for (int j = 0; j < d; ++j) {
    const double dj = hess_diag[j];
    f.diag_[j] = std::sqrt(dj + q);
    f.sub_[j] = q / f.diag_[j];
    q = q * dj / (dj + q);
  }
  return f;
}

Vector HessianFactor::apply(const Vector& xi) const {
  switch (structure_) {
    case Structure::Identity:
      return xi;
    case Structure::Diagonal:
      return diag_.cwiseProduct(xi);
    case Structure::DiagonalPlusRankOne: {
      Vector out(dim_);
      double prefix = 0.0;  // sum_{j<i} b_j xi_j
      for (int i = 0; i < dim_; ++i) {
        out[i] = diag_[i] * xi[i] + prefix;
        prefix += sub_[i] * xi[i];
      }
      return out;
    }
  }
  return xi;
}

Vector HessianFactor::apply_transpose(const Vector& u) const {
  switch (structure_) {
    case Structure::Identity:
      return u;
    case Structure::Diagonal:
      return diag_.cwiseProduct(u);
    case Structure::DiagonalPlusRankOne: {
      Vector out(dim_);
      double suffix = 0.0;  // sum_{i>j} u_i
      for (int j = dim_ - 1; j >= 0; --j) {
        out[j] = diag_[j] * u[j] + sub_[j] * suffix;
        suffix += u[j];
      }
      return out;
    }
  }
  return u;
}

Vector HessianFactor::solve(const Vector& u) const {
  switch (structure_) {
    case Structure::Identity:
      return u;
    case Structure::Diagonal:
      return u.cwiseQuotient(diag_);
    case Structure::DiagonalPlusRankOne: {
      Vector z(dim_);
      double prefix = 0.0;  // sum_{j<i} b_j z_j
      for (int i = 0; i < dim_; ++i) {
        z[i] = (u[i] - prefix) / diag_[i];
        prefix += sub_[i] * z[i];
      }
      return z;
    }
  }
  return u;
}

double HessianFactor::quadratic_form(const Vector& u) const {
  return apply_transpose(u).squaredNorm();
}

double HessianFactor::dual_quadratic_form(const Vector& u) const {
  return solve(u).squaredNorm();
}

// ---------------------------------------------------------------------------
// MirrorMap construction

MirrorMap MirrorMap::euclidean(int dim) {
  return MirrorMap(MapKind::Euclidean, dim, Vector(), 0.0);
}

MirrorMap MirrorMap::box_log_barrier(int dim) {
  return MirrorMap(MapKind::BoxLogBarrier, dim, Vector(), 1.0);
}

MirrorMap MirrorMap::simplex_barrier(int dim) {
  return MirrorMap(MapKind::SimplexBarrier, dim, Vector(), 1.0);
}

MirrorMap MirrorMap::weighted_simplex_barrier(const Vector& weights) {
  if (weights.size() < 2) {
    throw WeightError("weighted_simplex_barrier: need a_0 plus >= 1 weight");
  }
  if (weights.minCoeff() <= 0.0) {
    throw WeightError("weighted_simplex_barrier: weights must be positive");
  }
  const double m_phi = 1.0 / std::sqrt(weights.minCoeff());
  return MirrorMap(MapKind::WeightedSimplexBarrier,
                   static_cast<int>(weights.size()) - 1, weights, m_phi);
}

// ---------------------------------------------------------------------------
// Domain checks

bool MirrorMap::interior(const Vector& x) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case MapKind::Euclidean:
      return true;
    case MapKind::BoxLogBarrier:
      for (int i = 0; i < dim_; ++i) {
        if (!(1.0 - x[i] > kBoundaryMargin) || !(1.0 + x[i] > kBoundaryMargin))
          return false;
      }
      return true;
    case MapKind::SimplexBarrier:
    case MapKind::WeightedSimplexBarrier: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        if (!(x[i] > kBoundaryMargin)) return false;
        s += x[i];
      }
      return 1.0 - s > kBoundaryMargin;
    }
  }
  return false;
}

void MirrorMap::require_dimension(const Vector& x, const char* where) const {
  if (x.size() != dim_) {
    throw SizeError(std::string(where) + ": expected dimension " +
                    std::to_string(dim_) + ", got " +
                    std::to_string(x.size()));
  }
}

void MirrorMap::require_interior(const Vector& x, const char* where) const {
  require_dimension(x, where);
  if (!interior(x)) {
    throw DomainError(std::string(where) +
                      ": point not strictly interior to the map domain");
  }
}

// ---------------------------------------------------------------------------
// Value / gradient

double MirrorMap::value(const Vector& x) const {
  require_interior(x, "mirror value");
  switch (kind_) {
    case MapKind::Euclidean:
      return 0.5 * x.squaredNorm();
    case MapKind::BoxLogBarrier: {
      double v = 0.0;
      for (int i = 0; i < dim_; ++i)
        v -= std::log1p(-x[i]) + std::log1p(x[i]);
      return v;
    }
    case MapKind::SimplexBarrier: {
      double v = -std::log1p(-x.sum());
      for (int i = 0; i < dim_; ++i) v -= std::log(x[i]);
      return v;
    }
    case MapKind::WeightedSimplexBarrier: {
      double v = -weights_[0] * std::log1p(-x.sum());
      for (int i = 0; i < dim_; ++i) v -= weights_[i + 1] * std::log(x[i]);
      return v;
    }
  }
  return 0.0;
}

Vector MirrorMap::grad(const Vector& x) const {
  require_interior(x, "mirror gradient");
  switch (kind_) {
    case MapKind::Euclidean:
      return x;
    case MapKind::BoxLogBarrier: {
      Vector g(dim_);
      for (int i = 0; i < dim_; ++i)
        g[i] = 1.0 / (1.0 - x[i]) - 1.0 / (1.0 + x[i]);
      return g;
    }
    case MapKind::SimplexBarrier: {
      const double c = 1.0 / (1.0 - x.sum());
      Vector g(dim_);
      for (int i = 0; i < dim_; ++i) g[i] = c - 1.0 / x[i];
      return g;
    }
    case MapKind::WeightedSimplexBarrier: {
      const double c = weights_[0] / (1.0 - x.sum());
      Vector g(dim_);
      for (int i = 0; i < dim_; ++i) g[i] = c - weights_[i + 1] / x[i];
      return g;
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// Inverse gradient

namespace {

// Solves g(c) = sum_i a_i/(c - y_i) + a0/c = 1 on (max(0, max y), inf),
// where g is strictly decreasing from +inf to 0 so the root is unique.
// Returns the upper bracket end after convergence, which guarantees
// g(c) < 1 and hence sum_i a_i/(c - y_i) < 1 - a0/c strictly: the
// reconstructed point stays inside the open simplex.
double solve_simplex_dual_scale(const Vector& y, const Vector& a, double a0) {
  const double lo = std::max(0.0, y.maxCoeff());
  const auto g = [&](double c) {
    double s = a0 / c;
    for (int i = 0; i < y.size(); ++i) s += a[i] / (c - y[i]);
    return s;
  };
  const auto gprime = [&](double c) {
    double s = -a0 / (c * c);
    for (int i = 0; i < y.size(); ++i) {
      const double t = c - y[i];
      s -= a[i] / (t * t);
    }
    return s;
  };

  int budget = kRootFindCap;

  // Lower bracket: g(lo + t) > 1 holds for small enough t.
  double t = 1.0;
  while (g(lo + t) <= 1.0) {
    t *= 0.5;
    if (--budget <= 0)
      throw ConvergenceError("dual gradient: lower bracket not found");
  }
  double lo_b = lo + t;

  // Upper bracket: double the offset until g < 1.
  double hi_b = lo + std::max(2.0 * t, 1.0);
  while (g(hi_b) > 1.0) {
    hi_b = lo + 2.0 * (hi_b - lo);
    if (--budget <= 0)
      throw ConvergenceError("dual gradient: upper bracket not found");
  }

  // Bisection with Newton polishing inside the bracket.
  double c = 0.5 * (lo_b + hi_b);
  while (budget-- > 0) {
    const double gc = g(c);
    if (gc > 1.0) {
      lo_b = c;
    } else {
      hi_b = c;
    }
    if (hi_b - lo_b <= 1e-12 * std::max(1.0, hi_b)) return hi_b;
    const double newton = c - (gc - 1.0) / gprime(c);
    c = (newton > lo_b && newton < hi_b) ? newton : 0.5 * (lo_b + hi_b);
  }
  throw ConvergenceError("dual gradient: root find exceeded 200 iterations");
}

}  // namespace

Vector MirrorMap::dual_grad(const Vector& y) const {
  require_dimension(y, "dual gradient");
  switch (kind_) {
    case MapKind::Euclidean:
      return y;
    case MapKind::BoxLogBarrier: {
      Vector x(dim_);
      for (int i = 0; i < dim_; ++i)
        x[i] = y[i] / (std::hypot(1.0, y[i]) + 1.0);
      return x;
    }
    case MapKind::SimplexBarrier: {
      const Vector ones = Vector::Ones(dim_);
      const double c = solve_simplex_dual_scale(y, ones, 1.0);
      Vector x(dim_);
      for (int i = 0; i < dim_; ++i) x[i] = 1.0 / (c - y[i]);
      return x;
    }
    case MapKind::WeightedSimplexBarrier: {
      const Vector a = weights_.tail(dim_);
      const double c = solve_simplex_dual_scale(y, a, weights_[0]);
      Vector x(dim_);
      for (int i = 0; i < dim_; ++i) x[i] = a[i] / (c - y[i]);
      return x;
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// Bregman divergence, Hessian, norms

double MirrorMap::bregman(const Vector& x, const Vector& y) const {
  require_interior(x, "bregman divergence");
  require_interior(y, "bregman divergence");
  return value(x) - value(y) - grad(y).dot(x - y);
}

HessianFactor MirrorMap::hessian_factor(const Vector& x) const {
  require_interior(x, "hessian factor");
  switch (kind_) {
    case MapKind::Euclidean:
      return HessianFactor::identity(dim_);
    case MapKind::BoxLogBarrier: {
      Vector h(dim_);
      for (int i = 0; i < dim_; ++i) {
        const double a = 1.0 - x[i];
        const double b = 1.0 + x[i];
        h[i] = 1.0 / (a * a) + 1.0 / (b * b);
      }
      return HessianFactor::diagonal(h);
    }
    case MapKind::SimplexBarrier: {
      Vector h(dim_);
      for (int i = 0; i < dim_; ++i) h[i] = 1.0 / (x[i] * x[i]);
      const double slack = 1.0 - x.sum();
      return HessianFactor::diagonal_plus_rank_one(h, 1.0 / (slack * slack));
    }
    case MapKind::WeightedSimplexBarrier: {
      Vector h(dim_);
      for (int i = 0; i < dim_; ++i)
        h[i] = weights_[i + 1] / (x[i] * x[i]);
      const double slack = 1.0 - x.sum();
      return HessianFactor::diagonal_plus_rank_one(
          h, weights_[0] / (slack * slack));
    }
  }
  return HessianFactor::identity(dim_);
}

double MirrorMap::local_norm(const Vector& x, const Vector& u) const {
  require_dimension(u, "local norm");
  return std::sqrt(hessian_factor(x).quadratic_form(u));
}

double MirrorMap::local_dual_norm(const Vector& x, const Vector& u) const {
  require_dimension(u, "local dual norm");
  return std::sqrt(hessian_factor(x).dual_quadratic_form(u));
}

// ---------------------------------------------------------------------------
// Self-concordance check

double MirrorMap::self_concordance_residual(const Vector& x, const Vector& u,
                                            double fd_step) const {
  require_interior(x, "self-concordance residual");
  require_dimension(u, "self-concordance residual");
  if (!interior(x + 10.0 * fd_step * u) || !interior(x - 10.0 * fd_step * u)) {
    throw DomainError(
        "self-concordance residual: finite-difference stencil exits the "
        "domain");
  }
  const double q_plus = hessian_factor(x + fd_step * u).quadratic_form(u);
  const double q_minus = hessian_factor(x - fd_step * u).quadratic_form(u);
  const double third = (q_plus - q_minus) / (2.0 * fd_step);
  const double local = local_norm(x, u);
  return 2.0 * m_phi_ * local * local * local - std::abs(third);
}

}  // namespace mls
