#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dvs/problem_model.hpp"

namespace dvs {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct GenSpec {
  std::size_t n = 5;
  std::size_t m = 5;
  std::uint64_t seed = 0;
  std::vector<double> value_set{1, 2, 3, 4, 5};
  /// Range of q_ij and a_ij.
  Interval coeff_range{};
  /// Range of c_i; coeff_range when unset.
  std::optional<Interval> linear_range;
  /// Reset the diagonal to make Q strictly diagonally dominant.
  bool dominance_boost = true;

  /// Throws dvs::Error on n = 0, m = 0, an empty or
  /// duplicated value set, or an empty interval.
  void validate() const;
};

/// Random instance. Draw order is Q (row-major), A (row-major), c.
///   Q <- (Q + Q')/2, then q_ii = sum_{j != i} |q_ij| + 1 under dominance_boost
///   b_r = sum_j a_rj l + 0.5 (sum_j a_rj u - sum_j a_rj l)
/// with l and u the smallest and largest member of value_set.
DiscreteQP generate(const GenSpec& spec);

/// One instance per (n, m), seeded seed + index.
std::vector<DiscreteQP> scaling_suite(const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                      std::uint64_t seed,
                                      const std::vector<double>& value_set = {1, 2, 3, 4, 5});

}  // namespace dvs
