#pragma once

#include <Eigen/Core>

#include "mls/errors.hpp"
#include "mls/mirror.hpp"

namespace mls {

enum class PotentialKind {
  Zero,
  Quadratic,
  LogisticRegression,
  WeightedBarrier,
};

// Observed pairs for Bayesian logistic regression: feature rows X_i and
// binary labels Y_i.
struct LogisticDataset {
  Eigen::MatrixXd features;  // n x d
  Eigen::VectorXd labels;    // n entries in {0, 1}

  int count() const { return static_cast<int>(features.rows()); }
  int dimension() const { return static_cast<int>(features.cols()); }
  void validate() const;
};

// Target potential V (negative log-density up to an additive constant).
//
//   Zero                V = 0 (uniform target on a constrained domain)
//   Quadratic           V(x) = <x, A x>/2, A symmetric PSD
//   LogisticRegression  V(t) = sum_i [-Y_i <t, X_i> + softplus(<t, X_i>)]
//   WeightedBarrier     V = the weighted simplex barrier (Dirichlet target)
class Potential {
 public:
  static Potential zero(int dim);
  // Validates symmetry (1e-12) and positive semidefiniteness (smallest
  // eigenvalue >= -1e-10).
  static Potential quadratic(Eigen::MatrixXd a);
  static Potential logistic_regression(LogisticDataset ds);
  // weights = (a_0, ..., a_d), boundary weight first.
  static Potential weighted_barrier(const Vector& weights);

  PotentialKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const LogisticDataset& dataset() const { return dataset_; }
  const Vector& weights() const { return barrier_.weights(); }

  double value(const Vector& x) const;
  Vector grad(const Vector& x) const;

 private:
  Potential(PotentialKind kind, int dim)
      : kind_(kind), dim_(dim), barrier_(MirrorMap::euclidean(0)) {}

  PotentialKind kind_;
  int dim_;
  Eigen::MatrixXd matrix_;
  LogisticDataset dataset_;
  MirrorMap barrier_;  // weighted-barrier case delegates here
};

// Constants feeding the theorem-driven step-size rules: relative
// convexity alpha, relative smoothness beta, relative Lipschitz constant,
// and the composite rate beta' = beta + 2 M_phi L.
struct ConvexityProfile {
  double alpha = 0.0;
  double beta = 0.0;
  double lipschitz = 0.0;
  double beta_prime = 0.0;
};

// lambda_max(sum_i X_i X_i^T) by power iteration (relative tol 1e-8,
// deterministic all-ones start, 1000-iteration cap; zero matrix gives 0).
double logistic_smoothness_bound(const LogisticDataset& ds);

// Upper bound sum_i |X_i|_2 on sup |grad V|, valid since every
// coefficient |Y_i - sigma(<t, X_i>)| is at most 1.
double logistic_lipschitz_bound(const LogisticDataset& ds);

// Profile for logistic regression under the box log-barrier: the barrier
// is 2-strongly convex, so V is beta/2-relatively smooth and
// L/sqrt(2)-relatively Lipschitz, with M_phi = 1.
ConvexityProfile profile_blr(double beta, double lipschitz);

struct DirichletProfile {
  ConvexityProfile profile;
  // The closed-form upper bound 3 sqrt(d) sqrt(a_max / a_min), for display.
  double beta_prime_bound = 0.0;
};

// Profile for the Dirichlet target with phi = V: alpha = beta = 1,
// L = sqrt(sum a_i), M_phi = max a_i^{-1/2}.
DirichletProfile profile_dirichlet(const Vector& weights);

}  // namespace mls
