#include "dvs/lift.hpp"

#include <cmath>
#include <string>

namespace dvs {

BlockViolation::BlockViolation(std::size_t block, std::size_t selected)
    : Error("block " + std::to_string(block) + " selects " + std::to_string(selected) +
            " coordinates, expected exactly one"),
      block_(block) {}

ValueNotInSet::ValueNotInSet(std::size_t index)
    : Error("x[" + std::to_string(index) + "] is not a member of U[" +
            std::to_string(index) + "]"),
      index_(index) {}

BinaryQP lift(const DiscreteQP& p, kernels::Exec exec) {
  BinaryQP q;
  const std::size_t n = p.n();
  q.blocks.reserve(n);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < n; ++i) {
    q.blocks.push_back({offset, p.U(i).size()});
    offset += p.U(i).size();
  }
  q.K = offset;
  const auto K = static_cast<Eigen::Index>(q.K);
  const auto m = static_cast<Eigen::Index>(p.m());

  q.u_flat.resize(K);
  q.h.resize(K);
  q.D.resize(m, K);
  q.H = Matrix::Zero(static_cast<Eigen::Index>(n), K);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const Block& blk = q.blocks[i];
    for (std::size_t j = 0; j < blk.size; ++j) {
      const auto a = static_cast<Eigen::Index>(blk.offset + j);
      const double u = p.U(i)[j];
      q.u_flat[a] = u;
      q.h[a] = p.c()[ii] * u;
      for (Eigen::Index r = 0; r < m; ++r) q.D(r, a) = p.A()(r, ii) * u;
      q.H(ii, a) = 1.0;
    }
  }
  q.B = kernels::lift_quadratic(p.Q(), q.blocks, q.u_flat, exec);
  q.b = p.b();
  return q;
}

Vector recover_x(const BinaryQP& q, const Vector& y01) {
  if (y01.size() != static_cast<Eigen::Index>(q.K))
    throw DimensionError("recover_x: y has " + std::to_string(y01.size()) +
                         " entries, expected " + std::to_string(q.K));
  Vector x(static_cast<Eigen::Index>(q.n()));
  for (std::size_t i = 0; i < q.n(); ++i) {
    const Block& blk = q.blocks[i];
    std::size_t selected = 0;
    double xi = 0.0;
    for (std::size_t a = blk.offset; a < blk.end(); ++a) {
      const double v = y01[static_cast<Eigen::Index>(a)];
      if (v == 1.0) {
        ++selected;
        xi = q.u_flat[static_cast<Eigen::Index>(a)];
      } else if (v != 0.0) {
        throw BlockViolation(i, selected);
      }
    }
    if (selected != 1) throw BlockViolation(i, selected);
    x[static_cast<Eigen::Index>(i)] = xi;
  }
  return x;
}

Vector encode_y(const DiscreteQP& p, const Vector& x) {
  if (x.size() != static_cast<Eigen::Index>(p.n()))
    throw DimensionError("encode_y: x has " + std::to_string(x.size()) +
                         " entries, expected " + std::to_string(p.n()));
  Eigen::Index K = 0;
  for (const auto& set : p.U()) K += static_cast<Eigen::Index>(set.size());
  Vector y = Vector::Zero(K);
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    const auto& set = p.U(i);
    bool found = false;
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (std::abs(x[static_cast<Eigen::Index>(i)] - set[j]) <= kMembershipTol) {
        y[offset + static_cast<Eigen::Index>(j)] = 1.0;
        found = true;
        break;
      }
    }
    if (!found) throw ValueNotInSet(i);
    offset += static_cast<Eigen::Index>(set.size());
  }
  return y;
}

}  // namespace dvs
