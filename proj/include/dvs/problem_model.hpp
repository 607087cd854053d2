#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace dvs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ValueSets = std::vector<std::vector<double>>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Absolute tolerance used when matching a value against a member of U_i.
inline constexpr double kMembershipTol = 1e-9;

/// Feasibility tolerance for Ax <= b, applied per row as tol * (1 + |b_r|).
/// Shared by the oracle, the certificate and `check` so they agree on
/// boundary cases.
inline constexpr double kFeasibilityTol = 1e-9;

/// Quadratic objective over discrete value sets with linear inequalities:
///
///   minimize  1/2 x'Qx - c'x   subject to  Ax <= b,  x_i in U_i.
///
/// Q is symmetrized as (Q + Q')/2 on construction. Immutable afterwards.
class DiscreteQP {
 public:
  /// Validates dimensions and value sets. Throws DimensionError or
  /// SchemaError.
  DiscreteQP(Matrix Q, Vector c, Matrix A, Vector b, ValueSets U);

  std::size_t n() const { return static_cast<std::size_t>(c_.size()); }
  std::size_t m() const { return static_cast<std::size_t>(b_.size()); }
  const Matrix& Q() const { return Q_; }
  const Vector& c() const { return c_; }
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const ValueSets& U() const { return U_; }
  const std::vector<double>& U(std::size_t i) const { return U_[i]; }

  /// Number of selections, prod K_i; nullopt if it overflows 64 bits.
  std::optional<unsigned long long> combination_count() const;

 private:
  Matrix Q_;
  Vector c_;
  Matrix A_;
  Vector b_;
  ValueSets U_;
};

/// Coordinate range of one variable's one-hot block inside the lifted vector.
struct Block {
  std::size_t offset = 0;
  std::size_t size = 0;

  std::size_t end() const { return offset + size; }
  friend bool operator==(const Block&, const Block&) = default;
};

/// Lifted 0-1 problem produced by `lift`:
///
///   minimize 1/2 y'By - h'y  s.t.  Dy <= b,  Hy = e_n,  y o (y - e_K) <= 0.
///
/// Coordinates are block-major; every module indexes through `blocks`.
struct BinaryQP {
  std::size_t K = 0;
  Matrix B;   // K x K
  Vector h;   // K
  Matrix D;   // m x K
  Matrix H;   // n x K, block selector
  Vector b;   // m
  std::vector<Block> blocks;
  Vector u_flat;  // u_{i,j} in block order

  std::size_t n() const { return blocks.size(); }
  std::size_t m() const { return static_cast<std::size_t>(b.size()); }
};

/// Dual variables: sigma for Dy <= b, tau for Hy = e_n, mu for the
/// Hadamard constraint.
struct DualPoint {
  Vector sigma;
  Vector tau;
  Vector mu;

  static DualPoint zeros(std::size_t m, std::size_t n, std::size_t K) {
    return {Vector::Zero(static_cast<Eigen::Index>(m)),
            Vector::Zero(static_cast<Eigen::Index>(n)),
            Vector::Zero(static_cast<Eigen::Index>(K))};
  }
};

enum class CertificateStatus { CertifiedGlobal, KKTOnly, NoCertificate };

std::string_view to_string(CertificateStatus s);
CertificateStatus certificate_status_from_string(std::string_view s);

struct Certificate {
  double primal_feas_residual = 0.0;
  double dual_feas_residual = 0.0;
  double complementarity_residual = 0.0;
  double gap = 0.0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  bool in_cone = false;
  CertificateStatus status = CertificateStatus::NoCertificate;
};

/// How the solver stopped.
enum class Termination { Converged, MaxIterations, LineSearchStall };

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

/// Where the reported x came from.
enum class Source { Dual, OracleFallback };

std::string_view to_string(Source s);
Source source_from_string(std::string_view s);

struct SolveReport {
  Vector x;
  double objective = 0.0;
  Certificate certificate;
  DualPoint dual_point;
  Vector y;  // recovered G^+ F before rounding
  std::size_t iterations = 0;
  Termination termination = Termination::Converged;
  Source source = Source::Dual;
  std::vector<std::size_t> low_confidence_blocks;
  std::vector<double> trace;
  double seconds = 0.0;
};

/// 1/2 x'Qx - c'x.
double objective(const DiscreteQP& p, const Vector& x);

/// Ax <= b + tol componentwise and every x_i within tol of a member of U_i.
bool is_feasible(const DiscreteQP& p, const Vector& x, double tol);

/// Row-scaled constraint check used by the oracle and the certificate:
/// (Ax - b)_r <= kFeasibilityTol * (1 + |b_r|).
bool satisfies_constraints(const Matrix& A, const Vector& b, const Vector& x);

/// 1/2 y'By - h'y.
double binary_objective(const BinaryQP& q, const Vector& y);

}  // namespace dvs
