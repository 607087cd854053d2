#include "dvs/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dvs/rng.hpp"

namespace dvs {

void GenSpec::validate() const {
  if (n == 0) throw Error("GenSpec: n must be at least 1");
  if (m == 0) throw Error("GenSpec: m must be at least 1");
  if (value_set.empty()) throw Error("GenSpec: value_set is empty");
  std::vector<double> sorted = value_set;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error("GenSpec: value_set has duplicates");
  auto check = [](const Interval& iv, const char* name) {
    if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw Error(std::string("GenSpec: ") + name + " must satisfy lo < hi");
  };
  check(coeff_range, "coeff_range");
  if (linear_range) check(*linear_range, "linear_range");
}

DiscreteQP generate(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto m = static_cast<Eigen::Index>(spec.m);
  const Interval lin = spec.linear_range.value_or(spec.coeff_range);

  Matrix Q(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      Q(i, j) = rng.uniform(spec.coeff_range.lo, spec.coeff_range.hi);
  Matrix A(m, n);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index j = 0; j < n; ++j)
      A(r, j) = rng.uniform(spec.coeff_range.lo, spec.coeff_range.hi);
  Vector c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = rng.uniform(lin.lo, lin.hi);

  Matrix S(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) S(i, j) = 0.5 * (Q(i, j) + Q(j, i));
  if (spec.dominance_boost) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double off = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) off += std::abs(S(i, j));
      S(i, i) = off + 1.0;
    }
  }

  const auto [lo_it, hi_it] = std::minmax_element(spec.value_set.begin(), spec.value_set.end());
  const double l = *lo_it;
  const double u = *hi_it;
  Vector b(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    double al = 0.0;
    double au = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      al += A(r, j) * l;
      au += A(r, j) * u;
    }
    b[r] = al + 0.5 * (au - al);
  }

  return DiscreteQP(std::move(S), std::move(c), std::move(A), std::move(b),
                    ValueSets(spec.n, spec.value_set));
}

std::vector<DiscreteQP> scaling_suite(const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                      std::uint64_t seed, const std::vector<double>& value_set) {
  std::vector<DiscreteQP> out;
  out.reserve(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    GenSpec spec;
    spec.n = sizes[k].first;
    spec.m = sizes[k].second;
    spec.seed = seed + k;
    spec.value_set = value_set;
    out.push_back(generate(spec));
  }
  return out;
}

}  // namespace dvs
