#pragma once

// Dense numeric kernels with a serial reference and an OpenMP version.
//
// The parallel versions split work only across independent outputs (rows,
// columns, index ranges) and keep every inner reduction in the same order as
// the serial code, so both produce bit-identical results for any thread count.

#include <cstddef>
#include <span>

#include "dvs/problem_model.hpp"

namespace dvs::kernels {

enum class Exec { Serial, Parallel };

/// Work below this many rows runs serially even under Exec::Parallel.
inline constexpr Eigen::Index kParallelMinRows = 64;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Lower Cholesky factor of a symmetric matrix (only the lower triangle of
/// `a` is read). Returns false if a pivot is not finite or falls at or below
/// `pivot_floor`; `l` is then unspecified.
bool cholesky(const Matrix& a, RowMatrix& l, double pivot_floor, Exec exec);

/// Solves L X = rhs in place for every column of rhs.
void forward_solve(const RowMatrix& l, Matrix& rhs, Exec exec);

/// Solves L' X = rhs in place for every column of rhs.
void backward_solve(const RowMatrix& l, Matrix& rhs, Exec exec);

/// W'W, exactly symmetric.
Matrix gram(const Matrix& w, Exec exec);

/// Lifted quadratic term B_{(i,j),(k,l)} = q_ik u_ij u_kl.
Matrix lift_quadratic(const Matrix& Q, std::span<const Block> blocks,
                      const Vector& u_flat, Exec exec);

}  // namespace dvs::kernels
