#include "mls/potentials.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace mls {

namespace {

// ln(1 + e^t) without overflow.
double softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

void LogisticDataset::validate() const {
  if (features.rows() < 1) throw EmptyError("logistic dataset: n must be >= 1");
  if (labels.size() != features.rows()) {
    throw SizeError("logistic dataset: label count does not match rows");
  }
  for (int i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0.0 && labels[i] != 1.0) {
      throw ValidationError("logistic dataset: labels must be 0 or 1");
    }
  }
}

Potential Potential::zero(int dim) {
  return Potential(PotentialKind::Zero, dim);
}

Potential Potential::quadratic(Eigen::MatrixXd a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("quadratic potential: matrix must be square");
  }
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("quadratic potential: matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a,
                                                    Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw ValidationError(
        "quadratic potential: matrix must be positive semidefinite");
  }
  Potential p(PotentialKind::Quadratic, static_cast<int>(a.rows()));
  p.matrix_ = std::move(a);
  return p;
}

Potential Potential::logistic_regression(LogisticDataset ds) {
  ds.validate();
  Potential p(PotentialKind::LogisticRegression, ds.dimension());
  p.dataset_ = std::move(ds);
  return p;
}

Potential Potential::weighted_barrier(const Vector& weights) {
  MirrorMap barrier = MirrorMap::weighted_simplex_barrier(weights);
  Potential p(PotentialKind::WeightedBarrier, barrier.dimension());
  p.barrier_ = std::move(barrier);
  return p;
}

double Potential::value(const Vector& x) const {
  if (x.size() != dim_) throw SizeError("potential value: wrong dimension");
  switch (kind_) {
    case PotentialKind::Zero:
      return 0.0;
    case PotentialKind::Quadratic:
      return 0.5 * x.dot(matrix_ * x);
    case PotentialKind::LogisticRegression: {
      const Vector t = dataset_.features * x;
      double v = 0.0;
      for (int i = 0; i < t.size(); ++i)
        v += -dataset_.labels[i] * t[i] + softplus(t[i]);
      return v;
    }
    case PotentialKind::WeightedBarrier:
      return barrier_.value(x);
  }
  return 0.0;
}

Vector Potential::grad(const Vector& x) const {
  if (x.size() != dim_) throw SizeError("potential gradient: wrong dimension");
  switch (kind_) {
    case PotentialKind::Zero:
      return Vector::Zero(dim_);
    case PotentialKind::Quadratic:
      return matrix_ * x;
    case PotentialKind::LogisticRegression: {
      const Vector t = dataset_.features * x;
      Vector coeff(t.size());
      for (int i = 0; i < t.size(); ++i)
        coeff[i] = sigmoid(t[i]) - dataset_.labels[i];
      return dataset_.features.transpose() * coeff;
    }
    case PotentialKind::WeightedBarrier:
      return barrier_.grad(x);
  }
  return Vector::Zero(dim_);
}

double logistic_smoothness_bound(const LogisticDataset& ds) {
  ds.validate();
  const Eigen::MatrixXd m = ds.features.transpose() * ds.features;
  const int d = static_cast<int>(m.rows());
  Vector v = Vector::Ones(d);
  if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Vector w = m * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = w.dot(m * w);
    const bool done = std::abs(next - lambda) <= 1e-8 * std::max(1.0, next);
    lambda = next;
    v = w;
    if (done && it > 0) break;
  }
  return lambda;
}

double logistic_lipschitz_bound(const LogisticDataset& ds) {
  ds.validate();
  double s = 0.0;
  for (int i = 0; i < ds.count(); ++i) s += ds.features.row(i).norm();
  return s;
}

ConvexityProfile profile_blr(double beta, double lipschitz) {
  ConvexityProfile p;
  p.alpha = 0.0;
  p.beta = 0.5 * beta;
  p.lipschitz = lipschitz / std::sqrt(2.0);
  // M_phi = 1 for the box log-barrier, so beta' = beta/2 + sqrt(2) L.
  p.beta_prime = 0.5 * beta + std::sqrt(2.0) * lipschitz;
  return p;
}

DirichletProfile profile_dirichlet(const Vector& weights) {
  if (weights.size() < 2) {
    throw WeightError("dirichlet profile: need a_0 plus >= 1 weight");
  }
  if (weights.minCoeff() <= 0.0) {
    throw WeightError("dirichlet profile: weights must be positive");
  }
  const int d = static_cast<int>(weights.size()) - 1;
  const double m_phi = 1.0 / std::sqrt(weights.minCoeff());
  DirichletProfile out;
  out.profile.alpha = 1.0;
  out.profile.beta = 1.0;
  out.profile.lipschitz = std::sqrt(weights.sum());
  out.profile.beta_prime = 1.0 + 2.0 * m_phi * out.profile.lipschitz;
  out.beta_prime_bound =
      3.0 * std::sqrt(static_cast<double>(d)) *
      std::sqrt(weights.maxCoeff() / weights.minCoeff());
  return out;
}

}  // namespace mls
