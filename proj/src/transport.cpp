#include "mls/transport.hpp"

#include <cmath>
#include <limits>

#include "mls/errors.hpp"

namespace mls {

EmpiricalMeasure EmpiricalMeasure::from_states(
    const std::vector<Vector>& states) {
  if (states.empty()) throw EmptyError("empirical measure: no points");
  Eigen::MatrixXd pts(states.size(), states.front().size());
  for (std::size_t i = 0; i < states.size(); ++i)
    pts.row(i) = states[i].transpose();
  return EmpiricalMeasure(std::move(pts));
}

Assignment min_cost_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) {
    throw ShapeError("min_cost_assignment: cost matrix must be square");
  }
  const int n = static_cast<int>(cost.rows());
  if (n == 0) throw EmptyError("min_cost_assignment: empty cost matrix");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(cost(i, j)) || cost(i, j) < 0.0) {
        throw ValidationError(
            "min_cost_assignment: entries must be finite and nonnegative");
      }
    }
  }

  // Shortest-augmenting-path method with row/column potentials
  // (1-based sentinel column 0).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.perm.assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j] != 0) out.perm[match[j] - 1] = j - 1;
  }
  for (int i = 0; i < n; ++i) out.total_cost += cost(i, out.perm[i]);
  return out;
}

namespace {

void require_equal_sizes(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                         const char* where) {
  if (a.size() != b.size()) {
    throw SizeError(std::string(where) + ": clouds must have equal sizes");
  }
  if (a.dimension() != b.dimension()) {
    throw SizeError(std::string(where) + ": clouds must share dimension");
  }
  if (a.size() == 0) throw EmptyError(std::string(where) + ": empty clouds");
}

}  // namespace

double empirical_w2_sq(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  require_equal_sizes(a, b, "empirical_w2_sq");
  const int m = a.size();
  Eigen::MatrixXd cost(m, m);
  for (int i = 0; i < m; ++i) {
    cost.row(i) = (b.points.rowwise() - a.points.row(i))
                      .rowwise()
                      .squaredNorm()
                      .transpose();
  }
  return min_cost_assignment(cost).total_cost / m;
}

double empirical_bregman_cost(const MirrorMap& map, const EmpiricalMeasure& a,
                              const EmpiricalMeasure& b) {
  require_equal_sizes(a, b, "empirical_bregman_cost");
  const int m = a.size();
  // D(a_i, b_j) = phi(a_i) + [<grad phi(b_j), b_j> - phi(b_j)]
  //               - <grad phi(b_j), a_i>.
  Vector phi_a(m), offset_b(m);
  Eigen::MatrixXd grad_b(m, a.dimension());
  for (int i = 0; i < m; ++i) phi_a[i] = map.value(a.points.row(i));
  for (int j = 0; j < m; ++j) {
    const Vector bj = b.points.row(j);
    const Vector g = map.grad(bj);
    grad_b.row(j) = g.transpose();
    offset_b[j] = g.dot(bj) - map.value(bj);
  }
  Eigen::MatrixXd cost = -(a.points * grad_b.transpose());
  cost.colwise() += phi_a;
  cost.rowwise() += offset_b.transpose();
  cost = cost.cwiseMax(0.0);  // clear rounding-level negatives
  return min_cost_assignment(cost).total_cost / m;
}

double posterior_mean_error(const Eigen::MatrixXd& samples,
                            const Vector& theta_star, int burn_in) {
  if (burn_in < 0 || burn_in >= samples.rows()) {
    throw EmptyError("posterior_mean_error: burn-in leaves no samples");
  }
  const auto tail = samples.bottomRows(samples.rows() - burn_in);
  const Vector mean = tail.colwise().mean().transpose();
  if (mean.size() != theta_star.size()) {
    throw SizeError("posterior_mean_error: theta_star dimension mismatch");
  }
  return (mean - theta_star).norm();
}

double posterior_mean_error(const std::vector<Vector>& samples,
                            const Vector& theta_star, int burn_in) {
  if (samples.empty()) throw EmptyError("posterior_mean_error: no samples");
  return posterior_mean_error(EmpiricalMeasure::from_states(samples).points,
                              theta_star, burn_in);
}

Moments per_coordinate_moments(const Eigen::MatrixXd& samples) {
  const long n = samples.rows();
  if (n < 2) throw EmptyError("per_coordinate_moments: need >= 2 samples");
  Moments m;
  m.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - m.mean.transpose();
  m.variance =
      (centered.colwise().squaredNorm() / static_cast<double>(n - 1))
          .transpose();
  return m;
}

}  // namespace mls
