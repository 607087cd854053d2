#include "dvs/dual_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace dvs {

namespace {

double pivot_floor(const Matrix& g) {
  const double scale = g.rows() > 0 ? g.diagonal().cwiseAbs().maxCoeff() : 0.0;
  return kPivotRelFloor * std::max(1.0, scale);
}

void check_dims(const BinaryQP& q, const DualPoint& d) {
  if (d.sigma.size() != static_cast<Eigen::Index>(q.m()) ||
      d.tau.size() != static_cast<Eigen::Index>(q.n()) ||
      d.mu.size() != static_cast<Eigen::Index>(q.K))
    throw DimensionError("dual point has sizes (" + std::to_string(d.sigma.size()) + ", " +
                         std::to_string(d.tau.size()) + ", " + std::to_string(d.mu.size()) +
                         "), expected (" + std::to_string(q.m()) + ", " +
                         std::to_string(q.n()) + ", " + std::to_string(q.K) + ")");
}

}  // namespace

std::optional<GFactorization> GFactorization::cholesky(Matrix g, kernels::Exec exec) {
  GFactorization f;
  f.exec_ = exec;
  if (!kernels::cholesky(g, f.l_, pivot_floor(g), exec)) return std::nullopt;
  f.g_ = std::move(g);
  f.kind_ = FactorKind::CholeskyPD;
  return f;
}

GFactorization GFactorization::factor(Matrix g, kernels::Exec exec) {
  if (auto chol = cholesky(g, exec)) return std::move(*chol);
  GFactorization f;
  f.exec_ = exec;
  f.kind_ = FactorKind::EigenPSD;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  f.eigvals_ = es.eigenvalues();
  f.eigvecs_ = es.eigenvectors();
  const double top = f.eigvals_.size() > 0 ? f.eigvals_.cwiseAbs().maxCoeff() : 0.0;
  f.cutoff_ = kPinvRelTol * top;
  f.g_ = std::move(g);
  return f;
}

Matrix GFactorization::apply_pinv(const Matrix& rhs) const {
  if (kind_ == FactorKind::CholeskyPD) {
    Matrix x = rhs;
    kernels::forward_solve(l_, x, exec_);
    kernels::backward_solve(l_, x, exec_);
    return x;
  }
  Matrix coeffs = eigvecs_.transpose() * rhs;
  for (Eigen::Index i = 0; i < eigvals_.size(); ++i) {
    const double lam = eigvals_[i];
    if (std::abs(lam) <= cutoff_ || lam == 0.0)
      coeffs.row(i).setZero();
    else
      coeffs.row(i) /= lam;
  }
  return eigvecs_ * coeffs;
}

Vector GFactorization::apply_pinv(const Vector& rhs) const {
  Matrix m = rhs;
  return apply_pinv(m).col(0);
}

Matrix GFactorization::half_solve(Matrix rhs) const {
  if (kind_ != FactorKind::CholeskyPD)
    throw NotPositiveDefinite("half_solve needs a Cholesky factorization");
  kernels::forward_solve(l_, rhs, exec_);
  return rhs;
}

double GFactorization::min_eig() const {
  if (kind_ == FactorKind::EigenPSD) return eigvals_.size() ? eigvals_.minCoeff() : 0.0;
  if (g_.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix g_matrix(const BinaryQP& q, const Vector& mu) {
  if (mu.size() != static_cast<Eigen::Index>(q.K))
    throw DimensionError("g_matrix: mu has " + std::to_string(mu.size()) +
                         " entries, expected " + std::to_string(q.K));
  Matrix g = q.B;
  g.diagonal() += 2.0 * mu;
  return g;
}

Vector f_vector(const BinaryQP& q, const DualPoint& d) {
  check_dims(q, d);
  Vector f = q.h + d.mu;
  if (q.m() > 0) f -= q.D.transpose() * d.sigma;
  f -= q.H.transpose() * d.tau;
  return f;
}

Recovery recover_y(const GFactorization& fac, const Vector& F) {
  Recovery r;
  r.y = fac.apply_pinv(F);
  r.residual = (fac.matrix() * r.y - F).norm() / std::max(1.0, F.norm());
  r.outside_range = r.residual > kPinvRelTol;
  return r;
}

namespace {

double value_at(const BinaryQP& q, const DualPoint& d, const Vector& F, const Vector& y) {
  return -0.5 * F.dot(y) - d.sigma.dot(q.b) - d.tau.sum();
}

}  // namespace

double dual_value(const BinaryQP& q, const DualPoint& d) {
  const Vector F = f_vector(q, d);
  const auto fac = GFactorization::factor(g_matrix(q, d.mu));
  const Recovery r = recover_y(fac, F);
  return value_at(q, d, F, r.y);
}

Vector DualGradient::stacked() const {
  Vector z(sigma.size() + tau.size() + mu.size());
  z << sigma, tau, mu;
  return z;
}

namespace {

Vector gradient_at(const BinaryQP& q, const Vector& y) {
  const Eigen::Index m = static_cast<Eigen::Index>(q.m());
  const Eigen::Index n = static_cast<Eigen::Index>(q.n());
  const Eigen::Index K = static_cast<Eigen::Index>(q.K);
  Vector g(m + n + K);
  if (m > 0) g.head(m) = q.D * y - q.b;
  g.segment(m, n) = q.H * y - Vector::Ones(n);
  g.tail(K) = y.cwiseProduct(y - Vector::Ones(K));
  return g;
}

}  // namespace

DualGradient dual_gradient(const BinaryQP& q, const DualPoint& d) {
  auto e = evaluate_dual(q, d);
  if (!e) throw NotPositiveDefinite("dual_gradient: G(mu) is not positive definite");
  const Eigen::Index m = static_cast<Eigen::Index>(q.m());
  const Eigen::Index n = static_cast<Eigen::Index>(q.n());
  const Eigen::Index K = static_cast<Eigen::Index>(q.K);
  return {e->gradient.head(m), e->gradient.segment(m, n), e->gradient.tail(K)};
}

double total_complementary(const BinaryQP& q, const Vector& y, const DualPoint& d) {
  if (y.size() != static_cast<Eigen::Index>(q.K))
    throw DimensionError("total_complementary: y has " + std::to_string(y.size()) +
                         " entries, expected " + std::to_string(q.K));
  const Vector F = f_vector(q, d);
  const Matrix G = g_matrix(q, d.mu);
  return 0.5 * y.dot(G * y) - F.dot(y) - d.sigma.dot(q.b) - d.tau.sum();
}

ConeVerdict in_dual_cone(const BinaryQP& q, const DualPoint& d, double mu_min) {
  ConeVerdict v;
  try {
    check_dims(q, d);
  } catch (const DimensionError&) {
    return v;
  }
  v.sigma_nonnegative = (d.sigma.array() >= 0.0).all() && d.sigma.allFinite();
  v.mu_above_floor = (d.mu.array() >= mu_min).all() && d.mu.allFinite();
  if (d.tau.allFinite())
    v.g_positive_definite = GFactorization::cholesky(g_matrix(q, d.mu)).has_value();
  return v;
}

std::optional<DualEvaluation> evaluate_dual(const BinaryQP& q, const DualPoint& d,
                                            kernels::Exec exec) {
  check_dims(q, d);
  auto fac = GFactorization::cholesky(g_matrix(q, d.mu), exec);
  if (!fac) return std::nullopt;
  const Vector F = f_vector(q, d);
  Vector y = fac->apply_pinv(F);
  if (!y.allFinite()) return std::nullopt;
  const double value = value_at(q, d, F, y);
  if (!std::isfinite(value)) return std::nullopt;
  Vector grad = gradient_at(q, y);
  return DualEvaluation{value, std::move(y), std::move(grad), std::move(*fac)};
}

Matrix dual_curvature(const BinaryQP& q, const DualEvaluation& e, kernels::Exec exec) {
  const Eigen::Index m = static_cast<Eigen::Index>(q.m());
  const Eigen::Index n = static_cast<Eigen::Index>(q.n());
  const Eigen::Index K = static_cast<Eigen::Index>(q.K);
  Matrix jt = Matrix::Zero(K, m + n + K);
  if (m > 0) jt.leftCols(m) = q.D.transpose();
  jt.middleCols(m, n) = q.H.transpose();
  for (Eigen::Index a = 0; a < K; ++a) jt(a, m + n + a) = 2.0 * e.y[a] - 1.0;
  const Matrix w = e.factorization.half_solve(std::move(jt));
  return kernels::gram(w, exec);
}

Vector stack(const DualPoint& d) {
  Vector z(d.sigma.size() + d.tau.size() + d.mu.size());
  z << d.sigma, d.tau, d.mu;
  return z;
}

DualPoint unstack(const Vector& z, std::size_t m, std::size_t n, std::size_t K) {
  const auto mm = static_cast<Eigen::Index>(m);
  const auto nn = static_cast<Eigen::Index>(n);
  const auto kk = static_cast<Eigen::Index>(K);
  if (z.size() != mm + nn + kk) throw DimensionError("unstack: wrong stacked length");
  return {z.head(mm), z.segment(mm, nn), z.tail(kk)};
}

}  // namespace dvs
