#include "dvs/problem_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dvs {

namespace {

std::string dims(Eigen::Index r, Eigen::Index c) {
  std::ostringstream os;
  os << r << "x" << c;
  return os.str();
}

}  // namespace

DiscreteQP::DiscreteQP(Matrix Q, Vector c, Matrix A, Vector b, ValueSets U)
    : c_(std::move(c)), b_(std::move(b)), U_(std::move(U)) {
  const Eigen::Index n = c_.size();
  const Eigen::Index m = b_.size();
  if (n == 0) throw DimensionError("problem has no variables");
  if (Q.rows() != n || Q.cols() != n)
    throw DimensionError("Q: expected " + dims(n, n) + ", got " +
                         dims(Q.rows(), Q.cols()));
  if (A.rows() != m || A.cols() != n)
    throw DimensionError("A: expected " + dims(m, n) + ", got " +
                         dims(A.rows(), A.cols()));
  if (static_cast<Eigen::Index>(U_.size()) != n)
    throw DimensionError("U: expected " + std::to_string(n) + " value sets, got " +
                         std::to_string(U_.size()));
  for (std::size_t i = 0; i < U_.size(); ++i) {
    const auto& set = U_[i];
    if (set.empty()) throw SchemaError("U[" + std::to_string(i) + "] is empty");
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (!std::isfinite(set[j]))
        throw SchemaError("U[" + std::to_string(i) + "][" + std::to_string(j) +
                          "] is not finite");
      for (std::size_t k = 0; k < j; ++k)
        if (set[k] == set[j])
          throw SchemaError("U[" + std::to_string(i) + "] has duplicate value " +
                            std::to_string(set[j]));
    }
  }
  if (!Q.allFinite() || !c_.allFinite() || !A.allFinite() || !b_.allFinite())
    throw SchemaError("problem data contains non-finite numbers");
  Q_ = 0.5 * (Q + Q.transpose());
  A_ = std::move(A);
}

std::optional<unsigned long long> DiscreteQP::combination_count() const {
  unsigned long long total = 1;
  for (const auto& set : U_) {
    const auto k = static_cast<unsigned long long>(set.size());
    if (total > std::numeric_limits<unsigned long long>::max() / k) return std::nullopt;
    total *= k;
  }
  return total;
}

std::string_view to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::CertifiedGlobal: return "CertifiedGlobal";
    case CertificateStatus::KKTOnly: return "KKTOnly";
    case CertificateStatus::NoCertificate: return "NoCertificate";
  }
  return "NoCertificate";
}

CertificateStatus certificate_status_from_string(std::string_view s) {
  if (s == "CertifiedGlobal") return CertificateStatus::CertifiedGlobal;
  if (s == "KKTOnly") return CertificateStatus::KKTOnly;
  if (s == "NoCertificate") return CertificateStatus::NoCertificate;
  throw SchemaError("unknown certificate status '" + std::string(s) + "'");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::MaxIterations: return "MaxIterations";
    case Termination::LineSearchStall: return "LineSearchStall";
  }
  return "Converged";
}

Termination termination_from_string(std::string_view s) {
  if (s == "Converged") return Termination::Converged;
  if (s == "MaxIterations") return Termination::MaxIterations;
  if (s == "LineSearchStall") return Termination::LineSearchStall;
  throw SchemaError("unknown termination '" + std::string(s) + "'");
}

std::string_view to_string(Source s) {
  return s == Source::Dual ? "Dual" : "OracleFallback";
}

Source source_from_string(std::string_view s) {
  if (s == "Dual") return Source::Dual;
  if (s == "OracleFallback") return Source::OracleFallback;
  throw SchemaError("unknown source '" + std::string(s) + "'");
}

double objective(const DiscreteQP& p, const Vector& x) {
  if (x.size() != static_cast<Eigen::Index>(p.n()))
    throw DimensionError("objective: x has " + std::to_string(x.size()) +
                         " entries, expected " + std::to_string(p.n()));
  return 0.5 * x.dot(p.Q() * x) - p.c().dot(x);
}

bool is_feasible(const DiscreteQP& p, const Vector& x, double tol) {
  if (x.size() != static_cast<Eigen::Index>(p.n()))
    throw DimensionError("is_feasible: x has " + std::to_string(x.size()) +
                         " entries, expected " + std::to_string(p.n()));
  if (p.m() > 0) {
    const Vector slack = p.A() * x - p.b();
    if ((slack.array() > tol).any()) return false;
  }
  for (std::size_t i = 0; i < p.n(); ++i) {
    bool member = false;
    for (double u : p.U(i))
      if (std::abs(x[static_cast<Eigen::Index>(i)] - u) <= tol) {
        member = true;
        break;
      }
    if (!member) return false;
  }
  return true;
}

bool satisfies_constraints(const Matrix& A, const Vector& b, const Vector& x) {
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    double lhs = 0.0;
    for (Eigen::Index j = 0; j < A.cols(); ++j) lhs += A(r, j) * x[j];
    if (lhs - b[r] > kFeasibilityTol * (1.0 + std::abs(b[r]))) return false;
  }
  return true;
}

double binary_objective(const BinaryQP& q, const Vector& y) {
  if (y.size() != static_cast<Eigen::Index>(q.K))
    throw DimensionError("binary_objective: y has " + std::to_string(y.size()) +
                         " entries, expected " + std::to_string(q.K));
  return 0.5 * y.dot(q.B * y) - q.h.dot(y);
}

}  // namespace dvs
