#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dvs/dual_core.hpp"
#include "dvs/kernels.hpp"
#include "dvs/problem_model.hpp"

namespace dvs {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct SolverConfig {
  double tol_grad = 1e-8;
  double tol_gap = 1e-6;
  /// Threshold for the KKT residuals of the certificate.
  double tol_kkt = 1e-6;
  double mu_min = 1e-8;
  std::size_t max_iter = 5000;
  double round_threshold = 0.5;
  bool fallback_oracle = false;
  std::size_t fallback_oracle_max_K = 24;
  /// Accepted and reported; the ascent has no randomized component.
  std::uint64_t seed = 0;
  kernels::Exec exec = kernels::Exec::Parallel;

  /// Throws ConfigError.
  void validate() const;
};

/// sigma = 0, tau = 0, mu_i = max(mu_min, delta0 - lambda_min(B)/2) with
/// delta0 = 1e-3 (1 + ||B||_inf).
DualPoint initial_point(const BinaryQP& q, double mu_min = SolverConfig{}.mu_min);

struct AscentResult {
  DualPoint point;
  double value = 0.0;
  /// G(mu)^-1 F at the returned point.
  Vector y;
  /// Dual value at the start and after every accepted step.
  std::vector<double> trace;
  std::size_t iterations = 0;
  Termination termination = Termination::Converged;
  /// ||projected gradient||_inf at the returned point.
  double projected_gradient = 0.0;
};

/// Projected Newton ascent with Levenberg-Marquardt damping on
/// {sigma >= 0, mu >= mu_min, G(mu) > 0}.
///
/// Every trial point is factored first; a step that leaves the cone or fails
/// the ratio test is rejected and the damping raised. The dual value never
/// decreases along the trace.
AscentResult maximize_dual(const BinaryQP& q, const SolverConfig& cfg);

struct Rounding {
  Vector y01;
  std::vector<std::size_t> low_confidence_blocks;
};

/// Argmax per block, lowest index on ties. Blocks whose maximum is below
/// `threshold` are flagged.
Rounding round_binary(const Vector& y, const std::vector<Block>& blocks, double threshold);

/// Residuals are reported as follows.
///   primal: max of (Dy - b)_r / (1 + |b_r|), |Hy - e|, y o (y - e), clipped at 0
///   dual:   max of -sigma, -mu, clipped at 0
///   comp:   max of |sigma'(Dy - b)|, |mu'(y o (y - e))|
///   gap:    |P(y) - P^d(d)|
/// CertifiedGlobal needs the cone test, primal <= kFeasibilityTol,
/// dual <= tol, comp <= tol (1 + |P|) and gap <= tol_gap (1 + |P|).
Certificate verify_kkt(const BinaryQP& q, const Vector& y01, const DualPoint& d, double tol,
                       double tol_gap = SolverConfig{}.tol_gap,
                       double mu_min = SolverConfig{}.mu_min);

/// Lift, ascend, round, decode and certify. With cfg.fallback_oracle and
/// K <= fallback_oracle_max_K an uncertified answer is replaced by the
/// oracle's; the certificate is then recomputed for the reported x.
SolveReport solve(const DiscreteQP& p, const SolverConfig& cfg = {});

}  // namespace dvs
