#pragma once

#include <cstddef>

#include "dvs/kernels.hpp"
#include "dvs/problem_model.hpp"

namespace dvs {

/// Some block of a 0/1 vector does not select exactly one coordinate.
class BlockViolation : public Error {
 public:
  BlockViolation(std::size_t block, std::size_t selected);
  std::size_t block() const { return block_; }

 private:
  std::size_t block_;
};

/// A value is not a member of its variable's value set.
class ValueNotInSet : public Error {
 public:
  explicit ValueNotInSet(std::size_t index);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Substitutes x_i = sum_j u_ij y_ij. B_{(i,j),(k,l)} = q_ik u_ij u_kl,
/// h_(i,j) = c_i u_ij, D_{r,(i,j)} = a_ri u_ij, H the block selector.
BinaryQP lift(const DiscreteQP& p, kernels::Exec exec = kernels::Exec::Parallel);

/// x_i = sum_j u_ij y_ij for a vector with one 1 per block (entries must be
/// exactly 0 or 1). Throws BlockViolation.
Vector recover_x(const BinaryQP& q, const Vector& y01);

/// One-hot encoding of x; picks the first member within kMembershipTol.
/// Throws ValueNotInSet.
Vector encode_y(const DiscreteQP& p, const Vector& x);

}  // namespace dvs
