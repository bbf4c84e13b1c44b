#pragma once

#include <vector>

#include <Eigen/Core>

#include "mls/mirror.hpp"

namespace mls {

// Equal-weight point cloud (rows are points).
struct EmpiricalMeasure {
  Eigen::MatrixXd points;  // m x d

  EmpiricalMeasure() = default;
  explicit EmpiricalMeasure(Eigen::MatrixXd pts) : points(std::move(pts)) {}
  static EmpiricalMeasure from_states(const std::vector<Vector>& states);

  int size() const { return static_cast<int>(points.rows()); }
  int dimension() const { return static_cast<int>(points.cols()); }
};

struct Assignment {
  std::vector<int> perm;  // row i is matched to column perm[i]
  double total_cost = 0.0;
};

// Exact minimum-cost perfect matching on a square cost matrix
// (Jonker-Volgenant shortest augmenting paths, O(m^3)).
Assignment min_cost_assignment(const Eigen::MatrixXd& cost);

// Squared 2-Wasserstein distance between equal-size clouds:
// (1/m) min over permutations of the squared-Euclidean matching cost.
double empirical_w2_sq(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

// Bregman transport cost with entries D_phi(a_i, b_j): the first
// argument's points play the X role of the coupling, so the cost is
// asymmetric except under the Euclidean map.
double empirical_bregman_cost(const MirrorMap& map, const EmpiricalMeasure& a,
                              const EmpiricalMeasure& b);

// |mean of rows[burn_in..] - theta_star|_2.
double posterior_mean_error(const Eigen::MatrixXd& samples,
                            const Vector& theta_star, int burn_in);
double posterior_mean_error(const std::vector<Vector>& samples,
                            const Vector& theta_star, int burn_in);

struct Moments {
  Vector mean;
  Vector variance;  // unbiased, n-1 denominator
};

Moments per_coordinate_moments(const Eigen::MatrixXd& samples);

}  // namespace mls
