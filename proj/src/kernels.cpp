#include "dvs/kernels.hpp"

#include <cmath>
#include <vector>

namespace dvs::kernels {

namespace {

bool use_threads(Exec exec, Eigen::Index rows) {
  return exec == Exec::Parallel && rows >= kParallelMinRows;
}

}  // namespace

bool cholesky(const Matrix& a, RowMatrix& l, double pivot_floor, Exec exec) {
  const Eigen::Index n = a.rows();
  l.setZero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* lj = l.row(j).data();
    double s = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) s -= lj[k] * lj[k];
    if (!std::isfinite(s) || s <= pivot_floor) return false;
    const double d = std::sqrt(s);
    l(j, j) = d;
    const bool par = use_threads(exec, n - j);
#pragma omp parallel for schedule(static) if (par)
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double* li = l.row(i).data();
      double t = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) t -= li[k] * lj[k];
      li[j] = t / d;
    }
  }
  return true;
}

void forward_solve(const RowMatrix& l, Matrix& rhs, Exec exec) {
  const Eigen::Index n = l.rows();
  const Eigen::Index cols = rhs.cols();
  const bool par = use_threads(exec, cols);
#pragma omp parallel for schedule(static) if (par)
  for (Eigen::Index c = 0; c < cols; ++c) {
    double* x = rhs.col(c).data();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double* li = l.row(i).data();
      double t = x[i];
      for (Eigen::Index k = 0; k < i; ++k) t -= li[k] * x[k];
      x[i] = t / li[i];
    }
  }
}

void backward_solve(const RowMatrix& l, Matrix& rhs, Exec exec) {
  const Eigen::Index n = l.rows();
  const Eigen::Index cols = rhs.cols();
  const bool par = use_threads(exec, cols);
#pragma omp parallel for schedule(static) if (par)
  for (Eigen::Index c = 0; c < cols; ++c) {
    double* x = rhs.col(c).data();
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      double t = x[i];
      for (Eigen::Index k = i + 1; k < n; ++k) t -= l(k, i) * x[k];
      x[i] = t / l(i, i);
    }
  }
}

Matrix gram(const Matrix& w, Exec exec) {
  const Eigen::Index p = w.cols();
  const Eigen::Index rows = w.rows();
  Matrix out(p, p);
  const bool par = use_threads(exec, p);
#pragma omp parallel for schedule(dynamic, 8) if (par)
  for (Eigen::Index i = 0; i < p; ++i) {
    const double* wi = w.col(i).data();
    for (Eigen::Index j = i; j < p; ++j) {
      const double* wj = w.col(j).data();
      double s = 0.0;
      for (Eigen::Index k = 0; k < rows; ++k) s += wi[k] * wj[k];
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

Matrix lift_quadratic(const Matrix& Q, std::span<const Block> blocks,
                      const Vector& u_flat, Exec exec) {
  const Eigen::Index K = u_flat.size();
  std::vector<Eigen::Index> owner(static_cast<std::size_t>(K));
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t a = blocks[i].offset; a < blocks[i].end(); ++a)
      owner[a] = static_cast<Eigen::Index>(i);

  Matrix B(K, K);
  const bool par = use_threads(exec, K);
  // q_ik * (u_a * u_b): the product of u values commutes exactly and Q is
  // exactly symmetric, so B comes out exactly symmetric.
#pragma omp parallel for schedule(static) if (par)
  for (Eigen::Index b = 0; b < K; ++b) {
    const Eigen::Index k = owner[static_cast<std::size_t>(b)];
    for (Eigen::Index a = 0; a < K; ++a)
      B(a, b) = Q(owner[static_cast<std::size_t>(a)], k) * (u_flat[a] * u_flat[b]);
  }
  return B;
}

}  // namespace dvs::kernels
