#include "dvs/toy_demo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace dvs {

void ToyInstance::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("toy: alpha must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("toy: lambda must be positive");
  if (f.size() == 0) throw DimensionError("toy: f is empty");
  if (!f.allFinite()) throw Error("toy: f must be finite");
}

double toy_primal(const ToyInstance& t, const Vector& x) {
  const double xi = 0.5 * x.squaredNorm() - t.lambda;
  return 0.5 * t.alpha * xi * xi - x.dot(t.f);
}

double toy_dual(const ToyInstance& t, double sigma) {
  return -t.f.squaredNorm() / (2.0 * sigma) - sigma * sigma / (2.0 * t.alpha) - t.lambda * sigma;
}

namespace {

struct Cubic {
  double a2;  // alpha lambda
  double a0;  // -alpha |f|^2 / 2

  double value(double s) const { return ((s + a2) * s) * s + a0; }
  double slope(double s) const { return (3.0 * s + 2.0 * a2) * s; }
  double scale(double s) const { return std::abs(s * s * s) + a2 * s * s + std::abs(a0); }
};

Cubic cubic_of(const ToyInstance& t) {
  return {t.alpha * t.lambda, -0.5 * t.alpha * t.f.squaredNorm()};
}

}  // namespace

double cubic_residual(const ToyInstance& t, double sigma) {
  const Cubic p = cubic_of(t);
  const double s = p.scale(sigma);
  return s > 0.0 ? std::abs(p.value(sigma)) / s : 0.0;
}

std::vector<double> toy_dual_roots(const ToyInstance& t) {
  t.validate();
  const Cubic p = cubic_of(t);
  if (p.a0 == 0.0) return {0.0, 0.0, -p.a2};

  // p is monotone between its critical points -2 a2 / 3 and 0, and every
  // real root lies within the Cauchy bound.
  const double bound = 1.0 + std::max(p.a2, std::abs(p.a0));
  const double crit = -2.0 * p.a2 / 3.0;
  const double knots[] = {-bound, crit, 0.0, bound};

  std::vector<double> roots;
  for (int k = 0; k < 3; ++k) {
    double lo = knots[k];
    double hi = knots[k + 1];
    double vlo = p.value(lo);
    const double vhi = p.value(hi);
    if (vhi == 0.0 && k < 2) continue;  // counted by the next interval
    if (vlo == 0.0) {
      roots.push_back(lo);
      continue;
    }
    if ((vlo < 0.0) == (vhi < 0.0)) continue;
    while (true) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double vm = p.value(mid);
      if (vm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((vm < 0.0) == (vlo < 0.0)) {
        lo = mid;
        vlo = vm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(std::abs(p.value(lo)) <= std::abs(p.value(hi)) ? lo : hi);
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

ToySolution toy_solve(const ToyInstance& t) {
  t.validate();
  if (t.f.squaredNorm() == 0.0) throw DegenerateF();
  const auto roots = toy_dual_roots(t);
  if (roots.empty() || !(roots.front() > 0.0))
    throw Error("toy: no positive dual root found");
  ToySolution s;
  s.sigma1 = roots.front();
  s.x = t.f / s.sigma1;
  s.primal_value = toy_primal(t, s.x);
  s.dual_value = toy_dual(t, s.sigma1);
  return s;
}

std::vector<CurveSample> toy_curves(const ToyInstance& t, double lo, double hi, std::size_t steps) {
  t.validate();
  if (t.f.size() != 1) throw DimensionError("toy_curves needs a 1-D instance");
  if (!(lo < hi)) throw Error("toy_curves: range must satisfy lo < hi");
  std::vector<CurveSample> primal;
  std::vector<CurveSample> dual;
  if (steps == 0) return {};

  for (std::size_t k = 0; k < steps; ++k) {
    const double v =
        steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
    primal.push_back({CurveSample::Kind::Primal, v, toy_primal(t, Vector::Constant(1, v))});
    if (v != 0.0) dual.push_back({CurveSample::Kind::Dual, v, toy_dual(t, v)});
  }

  if (t.f[0] != 0.0) {
    const ToySolution s = toy_solve(t);
    if (s.x[0] >= lo && s.x[0] <= hi)
      primal.push_back({CurveSample::Kind::Primal, s.x[0], s.primal_value});
    if (s.sigma1 >= lo && s.sigma1 <= hi)
      dual.push_back({CurveSample::Kind::Dual, s.sigma1, s.dual_value});
  }
  auto by_abscissa = [](const CurveSample& a, const CurveSample& b) {
    return a.abscissa < b.abscissa;
  };
  std::stable_sort(primal.begin(), primal.end(), by_abscissa);
  std::stable_sort(dual.begin(), dual.end(), by_abscissa);
  primal.insert(primal.end(), dual.begin(), dual.end());
  return primal;
}

std::string curves_to_csv(const std::vector<CurveSample>& rows) {
  std::string out = "kind,abscissa,value\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g\n",
                  r.kind == CurveSample::Kind::Primal ? "primal" : "dual", r.abscissa, r.value);
    out += buf;
  }
  return out;
}

}  // namespace dvs
