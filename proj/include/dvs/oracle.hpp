#pragma once

// Exhaustive enumeration over prod U_i. No pruning and no incremental
// updates: every selection is decoded and evaluated from scratch.

#include <cstdint>

#include "dvs/kernels.hpp"
#include "dvs/problem_model.hpp"

namespace dvs {

inline constexpr unsigned long long kDefaultEnumerationLimit = 20'000'000ULL;

class TooLarge : public Error {
 public:
  explicit TooLarge(std::optional<unsigned long long> count);
  /// nullopt when the count overflows 64 bits.
  std::optional<unsigned long long> count() const { return count_; }

 private:
  std::optional<unsigned long long> count_;
};

class Infeasible : public Error {
 public:
  Infeasible() : Error("no selection satisfies Ax <= b") {}
};

/// Visiting order. Reverse walks indices from the last selection back to the
/// first; the answer must not depend on it.
enum class EnumOrder { Forward, Reverse };

struct EnumerateOptions {
  unsigned long long limit = kDefaultEnumerationLimit;
  kernels::Exec exec = kernels::Exec::Parallel;
  EnumOrder order = EnumOrder::Forward;
};

struct OracleResult {
  Vector x;
  double value = 0.0;
  unsigned long long feasible_count = 0;
  unsigned long long total_count = 0;
  /// Mixed-radix selection index (first variable most significant).
  unsigned long long best_index = 0;
};

/// Lexicographic block order, ties broken toward the smallest selection
/// index. Throws TooLarge or Infeasible.
OracleResult enumerate(const DiscreteQP& p, const EnumerateOptions& opts = {});

struct BinaryOracleResult {
  Vector y;
  double value = 0.0;
  unsigned long long best_index = 0;
};

/// Enumerates one-hot y with Dy <= b and minimizes 1/2 y'By - h'y.
BinaryOracleResult enumerate_binary(const BinaryQP& q, const EnumerateOptions& opts = {});

}  // namespace dvs
