#include "doctest.h"

#include <omp.h>

#include <Eigen/Cholesky>

#include "dvs/kernels.hpp"
#include "dvs/rng.hpp"

using dvs::Matrix;
using dvs::Vector;
namespace k = dvs::kernels;

namespace {

Matrix random_matrix(dvs::Rng& rng, Eigen::Index r, Eigen::Index c) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.uniform(-1, 1);
  return m;
}

Matrix random_spd(dvs::Rng& rng, Eigen::Index n) {
  const Matrix w = random_matrix(rng, n, n);
  Matrix a = w.transpose() * w;
  a.diagonal().array() += 0.1;
  return 0.5 * (a + a.transpose());
}

// Forces several threads even on a single-core machine.
struct Threads {
  int saved;
  explicit Threads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("cholesky reproduces the matrix and matches Eigen") {
    dvs::Rng rng(1);
    for (Eigen::Index n : {1, 5, 20, 90}) {
      const Matrix a = random_spd(rng, n);
      k::RowMatrix l;
      REQUIRE(k::cholesky(a, l, 1e-14, k::Exec::Serial));
      CHECK((Matrix(l) * Matrix(l).transpose() - a).cwiseAbs().maxCoeff() <= 1e-12 * n);
      Eigen::LLT<Matrix> ref(a);
      CHECK((Matrix(l) - Matrix(ref.matrixL())).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  TEST_CASE("cholesky rejects indefinite and singular matrices") {
    Matrix a(2, 2);
    a << 1, 2, 2, 1;
    k::RowMatrix l;
    CHECK_FALSE(k::cholesky(a, l, 1e-14, k::Exec::Serial));
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1;
    CHECK_FALSE(k::cholesky(s, l, 1e-14, k::Exec::Serial));
  }

  TEST_CASE("triangular solves invert the factor") {
    dvs::Rng rng(2);
    const Matrix a = random_spd(rng, 70);
    k::RowMatrix l;
    REQUIRE(k::cholesky(a, l, 1e-14, k::Exec::Serial));
    const Matrix rhs = random_matrix(rng, 70, 80);
    Matrix x = rhs;
    k::forward_solve(l, x, k::Exec::Serial);
    CHECK((Matrix(l) * x - rhs).cwiseAbs().maxCoeff() <= 1e-10);
    Matrix y = rhs;
    k::backward_solve(l, y, k::Exec::Serial);
    CHECK((Matrix(l).transpose() * y - rhs).cwiseAbs().maxCoeff() <= 1e-10);
  }

  TEST_CASE("gram is W'W and exactly symmetric") {
    dvs::Rng rng(3);
    const Matrix w = random_matrix(rng, 30, 75);
    const Matrix g = k::gram(w, k::Exec::Serial);
    CHECK(g == g.transpose());
    CHECK((g - w.transpose() * w).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("parallel kernels are bit-identical to serial") {
    Threads t(4);
    dvs::Rng rng(4);
    const Matrix a = random_spd(rng, 150);
    k::RowMatrix ls, lp;
    REQUIRE(k::cholesky(a, ls, 1e-14, k::Exec::Serial));
    REQUIRE(k::cholesky(a, lp, 1e-14, k::Exec::Parallel));
    CHECK(ls == lp);

    const Matrix rhs = random_matrix(rng, 150, 130);
    Matrix fs = rhs, fp = rhs;
    k::forward_solve(ls, fs, k::Exec::Serial);
    k::forward_solve(ls, fp, k::Exec::Parallel);
    CHECK(fs == fp);
    k::backward_solve(ls, fs, k::Exec::Serial);
    k::backward_solve(ls, fp, k::Exec::Parallel);
    CHECK(fs == fp);

    CHECK(k::gram(rhs, k::Exec::Serial) == k::gram(rhs, k::Exec::Parallel));

    const Matrix q = 0.5 * (random_matrix(rng, 30, 30) + random_matrix(rng, 30, 30).transpose());
    const Matrix qs = 0.5 * (q + q.transpose());
    std::vector<dvs::Block> blocks;
    Vector u(150);
    for (std::size_t i = 0; i < 30; ++i) blocks.push_back({5 * i, 5});
    for (Eigen::Index a2 = 0; a2 < 150; ++a2) u[a2] = rng.uniform(-3, 3);
    CHECK(k::lift_quadratic(qs, blocks, u, k::Exec::Serial) ==
          k::lift_quadratic(qs, blocks, u, k::Exec::Parallel));
  }
}
