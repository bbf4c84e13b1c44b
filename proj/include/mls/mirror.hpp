#pragma once

#include <Eigen/Core>

#include "mls/errors.hpp"

namespace mls {

using Vector = Eigen::VectorXd;

enum class MapKind {
  Euclidean,
  BoxLogBarrier,
  SimplexBarrier,
  WeightedSimplexBarrier,
};

// Structured factor C of a mirror-map Hessian H(x), with C C^T = H.
// Every map here yields an identity, diagonal, or diagonal-plus-rank-one
// Hessian, so building, applying, and solving the factor are all O(d).
//
// For H = diag(D) + c 11^T the factor is lower triangular with diagonal
// l and constant subdiagonal columns (C_ij = b_j for i > j), computed by
// the recurrence
//   q_1 = c,  l_j = sqrt(D_j + q_j),  b_j = q_j / l_j,
//   q_{j+1} = q_j D_j / (D_j + q_j).
class HessianFactor {
 public:
  enum class Structure { Identity, Diagonal, DiagonalPlusRankOne };

  static HessianFactor identity(int dim);
  static HessianFactor diagonal(const Vector& hess_diag);
  static HessianFactor diagonal_plus_rank_one(const Vector& hess_diag,
                                              double rank_one_scale);

  Structure structure() const { return structure_; }
  int dimension() const { return dim_; }

  Vector apply(const Vector& xi) const;            // C xi
  Vector apply_transpose(const Vector& u) const;   // C^T u
  Vector solve(const Vector& u) const;             // C^{-1} u

  // <u, H u> = |C^T u|^2
  double quadratic_form(const Vector& u) const;
  // <u, H^{-1} u> = |C^{-1} u|^2
  double dual_quadratic_form(const Vector& u) const;

 private:
  HessianFactor(Structure s, int dim) : structure_(s), dim_(dim) {}

  Structure structure_;
  int dim_;
  Vector diag_;  // diagonal of C
  Vector sub_;   // constant below-diagonal column values (rank-one case)
};

// A Legendre-type mirror map on R^d: strictly convex on the interior of
// its domain, gradient blowing up at the boundary, so grad() is a
// bijection onto R^d (identity domain for the Euclidean map) with
// inverse dual_grad().  Immutable and shareable across chains.
//
// Kinds:
//   Euclidean               |x|^2 / 2 on R^d
//   BoxLogBarrier           -sum log(1 - x_i^2) on (-1, 1)^d
//   SimplexBarrier          -sum log x_i - log(1 - sum x) on the open
//                           filled simplex {x > 0, sum x < 1}
//   WeightedSimplexBarrier  the a_i-weighted analogue, boundary weight
//                           a_0 first
class MirrorMap {
 public:
  static MirrorMap euclidean(int dim);
  static MirrorMap box_log_barrier(int dim);
  static MirrorMap simplex_barrier(int dim);
  // weights = (a_0, a_1, ..., a_d), all positive; dimension is d.
  static MirrorMap weighted_simplex_barrier(const Vector& weights);

  MapKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  // Self-concordance constant: 0 (Euclidean), 1 (box, simplex),
  // max_i a_i^{-1/2} (weighted).
  double self_concordance() const { return m_phi_; }
  const Vector& weights() const { return weights_; }

  // Strict interiority with an absolute margin of 1e-14 per barrier
  // inequality, so 1/x-style terms cannot overflow downstream.
  bool interior(const Vector& x) const;

  double value(const Vector& x) const;
  Vector grad(const Vector& x) const;

  // Inverse gradient map.  Closed form for Euclidean and box; for the
  // simplex barriers solves sum_i a_i/(c - y_i) + a_0/c = 1 for
  // c = a_0/(1 - sum x) by bracketing plus safeguarded Newton, then
  // x_i = a_i/(c - y_i).  Throws ConvergenceError past 200 iterations.
  Vector dual_grad(const Vector& y) const;

  // D_phi(x, y) = phi(x) - phi(y) - <grad(y), x - y>  (>= 0).
  double bregman(const Vector& x, const Vector& y) const;

  HessianFactor hessian_factor(const Vector& x) const;

  // |u|_{H(x)} and |u|_{H(x)^{-1}}.
  double local_norm(const Vector& x, const Vector& u) const;
  double local_dual_norm(const Vector& x, const Vector& u) const;

  // Central finite-difference check of the self-concordance inequality:
  // returns 2 M |u|^3_{H(x)} - |d/dt <u, H(x + t u) u> at t=0|, which is
  // nonnegative for a correct map up to finite-difference error.
  // Requires margin >= 10 * fd_step from the boundary along u.
  double self_concordance_residual(const Vector& x, const Vector& u,
                                   double fd_step) const;

 private:
  MirrorMap(MapKind kind, int dim, Vector weights, double m_phi)
      : kind_(kind), dim_(dim), weights_(std::move(weights)), m_phi_(m_phi) {}

  void require_interior(const Vector& x, const char* where) const;
  void require_dimension(const Vector& x, const char* where) const;

  MapKind kind_;
  int dim_;
  Vector weights_;  // (a_0, ..., a_d) for the weighted barrier, else empty
  double m_phi_;
};

}  // namespace mls
