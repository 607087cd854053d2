#pragma once

// Double-well example
//
//   Pi(x)     = 1/2 alpha (1/2 |x|^2 - lambda)^2 - x'f
//   Pi^d(sig) = -|f|^2 / (2 sig) - sig^2 / (2 alpha) - lambda sig
//
// whose dual critical points solve sig^3 + alpha lambda sig^2 - alpha |f|^2 / 2 = 0.

#include <string>
#include <vector>

#include "dvs/problem_model.hpp"

namespace dvs {

class DegenerateF : public Error {
 public:
  DegenerateF() : Error("f = 0: the minimizers form a sphere") {}
};

struct ToyInstance {
  double alpha = 1.0;
  double lambda = 2.0;
  Vector f;

  /// Throws Error unless alpha > 0, lambda > 0 and f is finite.
  void validate() const;
};

double toy_primal(const ToyInstance& t, const Vector& x);
double toy_dual(const ToyInstance& t, double sigma);

/// Relative residual |p(s)| / (|s|^3 + alpha lambda s^2 + alpha |f|^2 / 2).
double cubic_residual(const ToyInstance& t, double sigma);

/// Real roots of the cubic, sorted descending, at most three.
std::vector<double> toy_dual_roots(const ToyInstance& t);

struct ToySolution {
  Vector x;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double sigma1 = 0.0;
};

/// x = f / sigma_1 with sigma_1 the positive root. Throws DegenerateF.
ToySolution toy_solve(const ToyInstance& t);

struct CurveSample {
  enum class Kind { Primal, Dual } kind;
  double abscissa;
  double value;
};

/// `steps` evenly spaced samples of Pi on [lo, hi] and of Pi^d on the same
/// grid minus sigma = 0, plus the points (x_1, Pi(x_1)) and
/// (sigma_1, Pi^d(sigma_1)) merged in abscissa order. 1-D instances only.
std::vector<CurveSample> toy_curves(const ToyInstance& t, double lo, double hi,
                                    std::size_t steps);

/// Header `kind,abscissa,value`, values with 17 significant digits.
std::string curves_to_csv(const std::vector<CurveSample>& rows);

}  // namespace dvs
