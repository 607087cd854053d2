#pragma once

// Canonical dual algebra of the lifted 0-1 problem.
//
//   G(mu)             = B + 2 Diag(mu)
//   F(sigma, tau, mu) = h - D'sigma - H'tau + mu
//   P^d               = -1/2 F' G^+ F - sigma'b - tau'e_n
//
// The ascent gradient of P^d at y = G^+ F is (Dy - b, Hy - e_n, y o (y - e_K))
// and its Hessian is -J G^-1 J' with J = [D; H; Diag(2y - e_K)]. Both hold
// only where G is positive definite.

#include <cstddef>

#include "dvs/kernels.hpp"
#include "dvs/problem_model.hpp"

namespace dvs {

/// Cholesky of G(mu) failed where positive definiteness was required.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// Relative pivot floor for the Cholesky positive-definiteness test.
inline constexpr double kPivotRelFloor = 1e-14;
/// Eigenvalues with |lambda| <= kPinvRelTol * max|lambda| are dropped by G^+.
inline constexpr double kPinvRelTol = 1e-10;

enum class FactorKind { CholeskyPD, EigenPSD };

/// Factorization of a symmetric G sufficient to apply G^+.
class GFactorization {
 public:
  /// Tries Cholesky first, falls back to a symmetric eigendecomposition.
  static GFactorization factor(Matrix g, kernels::Exec exec = kernels::Exec::Parallel);

  /// Cholesky only; nullopt when G is not (numerically) positive definite.
  static std::optional<GFactorization> cholesky(Matrix g,
                                                kernels::Exec exec = kernels::Exec::Parallel);

  FactorKind kind() const { return kind_; }
  const Matrix& matrix() const { return g_; }
  /// Lower factor; only meaningful for CholeskyPD.
  const kernels::RowMatrix& lower() const { return l_; }

  /// G^+ applied to each column of rhs.
  Matrix apply_pinv(const Matrix& rhs) const;
  Vector apply_pinv(const Vector& rhs) const;
  /// L^-1 rhs; requires CholeskyPD.
  Matrix half_solve(Matrix rhs) const;

  /// Smallest eigenvalue (computed on demand for CholeskyPD).
  double min_eig() const;

 private:
  GFactorization() = default;

  Matrix g_;
  FactorKind kind_ = FactorKind::CholeskyPD;
  kernels::RowMatrix l_;
  Vector eigvals_;
  Matrix eigvecs_;
  double cutoff_ = 0.0;
  kernels::Exec exec_ = kernels::Exec::Parallel;
};

Matrix g_matrix(const BinaryQP& q, const Vector& mu);

Vector f_vector(const BinaryQP& q, const DualPoint& d);

struct Recovery {
  Vector y;
  /// ||G y - F|| / max(1, ||F||).
  double residual = 0.0;
  /// residual > kPinvRelTol, i.e. F is not in the column space of G.
  bool outside_range = false;
};

Recovery recover_y(const GFactorization& fac, const Vector& F);

double dual_value(const BinaryQP& q, const DualPoint& d);

struct DualGradient {
  Vector sigma;
  Vector tau;
  Vector mu;

  /// (sigma, tau, mu) stacked.
  Vector stacked() const;
};

/// Requires G(mu) positive definite; throws NotPositiveDefinite otherwise.
DualGradient dual_gradient(const BinaryQP& q, const DualPoint& d);

/// 1/2 y'G(mu)y - F'y - sigma'b - tau'e_n.
double total_complementary(const BinaryQP& q, const Vector& y, const DualPoint& d);

struct ConeVerdict {
  bool sigma_nonnegative = false;
  bool mu_above_floor = false;
  bool g_positive_definite = false;

  bool inside() const { return sigma_nonnegative && mu_above_floor && g_positive_definite; }
};

/// sigma >= 0, mu >= mu_min and Cholesky of G(mu) succeeds.
ConeVerdict in_dual_cone(const BinaryQP& q, const DualPoint& d, double mu_min);

/// Everything the ascent needs at one dual point; G must be positive definite.
struct DualEvaluation {
  double value = 0.0;
  Vector y;
  Vector gradient;  // stacked (sigma, tau, mu)
  GFactorization factorization;
};

std::optional<DualEvaluation> evaluate_dual(const BinaryQP& q, const DualPoint& d,
                                            kernels::Exec exec = kernels::Exec::Parallel);

/// J G^-1 J', the negated Hessian of P^d in stacked (sigma, tau, mu) order.
Matrix dual_curvature(const BinaryQP& q, const DualEvaluation& e,
                      kernels::Exec exec = kernels::Exec::Parallel);

/// Stacks and splits dual points as one (sigma, tau, mu) vector.
Vector stack(const DualPoint& d);
DualPoint unstack(const Vector& z, std::size_t m, std::size_t n, std::size_t K);

}  // namespace dvs
