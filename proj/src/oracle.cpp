#include "dvs/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <omp.h>

namespace dvs {

TooLarge::TooLarge(std::optional<unsigned long long> count)
    : Error(count ? "enumeration over " + std::to_string(*count) +
                        " selections exceeds the limit"
                  : std::string("enumeration count overflows 64 bits")),
      count_(count) {}

namespace {

struct Best {
  double value = std::numeric_limits<double>::infinity();
  unsigned long long index = std::numeric_limits<unsigned long long>::max();
  unsigned long long feasible = 0;
  bool found = false;

  void offer(double v, unsigned long long idx) {
    ++feasible;
    if (!found || v < value || (v == value && idx < index)) {
      value = v;
      index = idx;
      found = true;
    }
  }

  void merge(const Best& other) {
    feasible += other.feasible;
    if (!other.found) return;
    if (!found || other.value < value || (other.value == value && other.index < index)) {
      value = other.value;
      index = other.index;
      found = true;
    }
  }
};

void decode(unsigned long long idx, const std::vector<std::size_t>& radix,
            std::vector<std::size_t>& digits) {
  for (std::size_t i = radix.size(); i-- > 0;) {
    digits[i] = static_cast<std::size_t>(idx % radix[i]);
    idx /= radix[i];
  }
}

void increment(const std::vector<std::size_t>& radix, std::vector<std::size_t>& digits) {
  for (std::size_t i = radix.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return;
    digits[i] = 0;
  }
}

// Evaluator: bool operator()(const digits&, double& value) returning feasibility.
template <class MakeEvaluator>
Best search(const std::vector<std::size_t>& radix, unsigned long long total,
            const EnumerateOptions& opts, MakeEvaluator make_eval) {
  if (opts.order == EnumOrder::Reverse) {
    auto eval = make_eval();
    std::vector<std::size_t> digits(radix.size());
    Best best;
    double v = 0.0;
    for (unsigned long long idx = total; idx-- > 0;) {
      decode(idx, radix, digits);
      if (eval(digits, v)) best.offer(v, idx);
    }
    return best;
  }

  const bool par = opts.exec == kernels::Exec::Parallel && total >= 4096;
  Best best;
#pragma omp parallel if (par)
  {
    const auto threads = static_cast<unsigned long long>(omp_get_num_threads());
    const auto tid = static_cast<unsigned long long>(omp_get_thread_num());
    const unsigned long long chunk = (total + threads - 1) / threads;
    const unsigned long long begin = std::min(total, tid * chunk);
    const unsigned long long end = std::min(total, begin + chunk);
    Best local;
    if (begin < end) {
      auto eval = make_eval();
      std::vector<std::size_t> digits(radix.size());
      decode(begin, radix, digits);
      double v = 0.0;
      for (unsigned long long idx = begin; idx < end; ++idx) {
        if (eval(digits, v)) local.offer(v, idx);
        increment(radix, digits);
      }
    }
#pragma omp critical(dvs_oracle_merge)
    best.merge(local);
  }
  return best;
}

unsigned long long checked_total(const std::vector<std::size_t>& radix,
                                 unsigned long long limit) {
  unsigned long long total = 1;
  for (auto k : radix) {
    if (total > std::numeric_limits<unsigned long long>::max() / k)
      throw TooLarge(std::nullopt);
    total *= k;
  }
  if (total > limit) throw TooLarge(total);
  return total;
}

}  // namespace

OracleResult enumerate(const DiscreteQP& p, const EnumerateOptions& opts) {
  const std::size_t n = p.n();
  std::vector<std::size_t> radix(n);
  for (std::size_t i = 0; i < n; ++i) radix[i] = p.U(i).size();
  const unsigned long long total = checked_total(radix, opts.limit);

  const Matrix& Q = p.Q();
  const Vector& c = p.c();
  auto make_eval = [&] {
    return [&, x = Vector(static_cast<Eigen::Index>(n))](
               const std::vector<std::size_t>& digits, double& value) mutable {
      for (std::size_t i = 0; i < n; ++i)
        x[static_cast<Eigen::Index>(i)] = p.U(i)[digits[i]];
      if (!satisfies_constraints(p.A(), p.b(), x)) return false;
      double v = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        double qx = 0.0;
        for (Eigen::Index k = 0; k < x.size(); ++k) qx += Q(i, k) * x[k];
        v += x[i] * (0.5 * qx - c[i]);
      }
      value = v;
      return true;
    };
  };

  const Best best = search(radix, total, opts, make_eval);
  if (!best.found) throw Infeasible();

  OracleResult r;
  std::vector<std::size_t> digits(n);
  decode(best.index, radix, digits);
  r.x.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) r.x[static_cast<Eigen::Index>(i)] = p.U(i)[digits[i]];
  r.value = objective(p, r.x);
  r.feasible_count = best.feasible;
  r.total_count = total;
  r.best_index = best.index;
  return r;
}

BinaryOracleResult enumerate_binary(const BinaryQP& q, const EnumerateOptions& opts) {
  const std::size_t n = q.n();
  std::vector<std::size_t> radix(n);
  for (std::size_t i = 0; i < n; ++i) radix[i] = q.blocks[i].size;
  const unsigned long long total = checked_total(radix, opts.limit);
  const auto m = static_cast<Eigen::Index>(q.m());

  auto make_eval = [&] {
    return [&, sel = std::vector<Eigen::Index>(n)](const std::vector<std::size_t>& digits,
                                                   double& value) mutable {
      for (std::size_t i = 0; i < n; ++i)
        sel[i] = static_cast<Eigen::Index>(q.blocks[i].offset + digits[i]);
      for (Eigen::Index r = 0; r < m; ++r) {
        double lhs = 0.0;
        for (auto a : sel) lhs += q.D(r, a);
        if (lhs - q.b[r] > kFeasibilityTol * (1.0 + std::abs(q.b[r]))) return false;
      }
      double quad = 0.0;
      double lin = 0.0;
      for (auto a : sel) {
        for (auto b : sel) quad += q.B(a, b);
        lin += q.h[a];
      }
      value = 0.5 * quad - lin;
      return true;
    };
  };

  const Best best = search(radix, total, opts, make_eval);
  if (!best.found) throw Infeasible();

  BinaryOracleResult r;
  std::vector<std::size_t> digits(n);
  decode(best.index, radix, digits);
  r.y = Vector::Zero(static_cast<Eigen::Index>(q.K));
  for (std::size_t i = 0; i < n; ++i)
    r.y[static_cast<Eigen::Index>(q.blocks[i].offset + digits[i])] = 1.0;
  r.value = binary_objective(q, r.y);
  r.best_index = best.index;
  return r;
}

}  // namespace dvs
