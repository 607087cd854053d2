#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "dvs/lift.hpp"
#include "dvs/rng.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "sweep.hpp"

using dvs::Matrix;
using dvs::Vector;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

const Vector kEx1Y = vec({0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 0});

}  // namespace

TEST_SUITE("problem_model") {
  TEST_CASE("construction validates dimensions and value sets") {
    const Matrix I2 = Matrix::Identity(2, 2);
    const Vector c = Vector::Zero(2);
    const Matrix A = Matrix::Ones(1, 2);
    const Vector b = Vector::Ones(1);
    CHECK_NOTHROW(dvs::DiscreteQP(I2, c, A, b, {{1}, {1, 2}}));
    CHECK_THROWS_AS(dvs::DiscreteQP(Matrix::Identity(3, 3), c, A, b, {{1}, {1}}),
                    dvs::DimensionError);
    CHECK_THROWS_AS(dvs::DiscreteQP(I2, c, Matrix::Ones(1, 3), b, {{1}, {1}}),
                    dvs::DimensionError);
    CHECK_THROWS_AS(dvs::DiscreteQP(I2, c, A, Vector::Ones(2), {{1}, {1}}), dvs::DimensionError);
    CHECK_THROWS_AS(dvs::DiscreteQP(I2, c, A, b, {{1}}), dvs::DimensionError);
    CHECK_THROWS_AS(dvs::DiscreteQP(I2, c, A, b, {{1}, {}}), dvs::SchemaError);
    CHECK_THROWS_AS(dvs::DiscreteQP(I2, c, A, b, {{1, 2, 1}, {1}}), dvs::SchemaError);
    Matrix bad = I2;
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS(dvs::DiscreteQP(bad, c, A, b, {{1}, {1}}), dvs::SchemaError);
    CHECK_THROWS_AS(dvs::DiscreteQP(Matrix(0, 0), Vector(0), Matrix(0, 0), Vector(0), {}),
                    dvs::DimensionError);
  }

  TEST_CASE("constraints may be absent") {
    const dvs::DiscreteQP p(Matrix::Identity(1, 1), Vector::Ones(1), Matrix(0, 1), Vector(0),
                            {{0, 1}});
    CHECK(p.m() == 0);
    CHECK(dvs::is_feasible(p, Vector::Ones(1), 1e-9));
  }

  TEST_CASE("Q is symmetrized on ingest") {
    Matrix Q(2, 2);
    Q << 1, 2, 0, 1;
    const dvs::DiscreteQP p(Q, Vector::Zero(2), Matrix(0, 2), Vector(0), {{1}, {1}});
    CHECK(p.Q()(0, 1) == 1.0);
    CHECK(p.Q()(1, 0) == 1.0);
    CHECK(p.Q() == p.Q().transpose());
  }

  TEST_CASE("objective on hand examples") {
    const auto p = fixtures::two_by_two();
    CHECK(dvs::objective(p, vec({2, 1})) == doctest::Approx(-5.0).epsilon(1e-15));
    CHECK(dvs::objective(p, Vector::Zero(2)) == 0.0);
    const auto ex1 = fixtures::example1();
    CHECK(std::abs(dvs::objective(ex1, vec({5, 2, 5, 2, 2})) + 227.87) <= 0.5);
  }

  TEST_CASE("objective matches the reference on random points") {
    dvs::Rng rng(11);
    for (const auto& p : sweep::instances(40)) {
      Vector x(static_cast<Eigen::Index>(p.n()));
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(-5, 5);
      const double want = ref::objective(p.Q(), p.c(), x);
      CHECK(std::abs(dvs::objective(p, x) - want) <= 1e-12 * (1 + std::abs(want)));
    }
  }

  TEST_CASE("is_feasible") {
    const auto ex1 = fixtures::example1();
    CHECK(dvs::is_feasible(ex1, vec({5, 2, 5, 2, 2}), 1e-9));
    CHECK_FALSE(dvs::is_feasible(ex1, vec({4, 2, 5, 2, 2}), 1e-9));
    const auto p = fixtures::two_by_two();
    CHECK_FALSE(dvs::is_feasible(p, vec({2, 2}), 1e-9));
    CHECK(dvs::is_feasible(p, vec({2, 1}), 1e-9));
  }

  TEST_CASE("is_feasible is monotone in tol") {
    const auto p = fixtures::two_by_two();
    const Vector x = vec({2 + 1e-6, 1});
    bool prev = false;
    for (double tol : {1e-9, 1e-7, 1e-6, 1e-5, 1e-3}) {
      const bool now = dvs::is_feasible(p, x, tol);
      CHECK((!prev || now));
      prev = now;
    }
    CHECK(prev);
  }

  TEST_CASE("combination count") {
    CHECK(fixtures::example1().combination_count() == 243ULL);
    CHECK(fixtures::example2().combination_count() == 9765625ULL);
    const std::size_t n = 50;
    const dvs::DiscreteQP big(Matrix::Identity(n, n), Vector::Zero(n), Matrix(0, n), Vector(0),
                              dvs::ValueSets(n, {1, 2, 3, 4, 5}));
    CHECK_FALSE(big.combination_count().has_value());
  }

  TEST_CASE("enum names round trip") {
    using dvs::CertificateStatus;
    for (auto s : {CertificateStatus::CertifiedGlobal, CertificateStatus::KKTOnly,
                   CertificateStatus::NoCertificate})
      CHECK(dvs::certificate_status_from_string(dvs::to_string(s)) == s);
    for (auto t : {dvs::Termination::Converged, dvs::Termination::MaxIterations,
                   dvs::Termination::LineSearchStall})
      CHECK(dvs::termination_from_string(dvs::to_string(t)) == t);
    for (auto s : {dvs::Source::Dual, dvs::Source::OracleFallback})
      CHECK(dvs::source_from_string(dvs::to_string(s)) == s);
    CHECK_THROWS_AS(dvs::certificate_status_from_string("Certified"), dvs::SchemaError);
  }

  TEST_CASE("binary objective agrees with the objective on every selection") {
    for (const auto& p : sweep::instances(60)) {
      const auto q = dvs::lift(p);
      CHECK(dvs::binary_objective(q, Vector::Zero(static_cast<Eigen::Index>(q.K))) == 0.0);
      std::vector<std::size_t> digit(p.n(), 0);
      while (true) {
        Vector x(static_cast<Eigen::Index>(p.n()));
        for (std::size_t i = 0; i < p.n(); ++i) x[static_cast<Eigen::Index>(i)] = p.U(i)[digit[i]];
        const double a = dvs::objective(p, x);
        const double b = dvs::binary_objective(q, dvs::encode_y(p, x));
        CHECK(std::abs(a - b) <= 1e-9 * (1 + std::abs(a)));
        std::size_t i = p.n();
        while (i-- > 0 && ++digit[i] == p.U(i).size()) digit[i] = 0;
        if (i == static_cast<std::size_t>(-1)) break;
      }
    }
  }

  TEST_CASE("binary objective of the Example 1 minimizer") {
    const auto q = dvs::lift(fixtures::example1());
    CHECK(std::abs(dvs::binary_objective(q, kEx1Y) + 227.87) <= 0.5);
  }
}

TEST_SUITE("lift") {
  TEST_CASE("Example 1 entries follow the formula") {
    const auto q = dvs::lift(fixtures::example1());
    CHECK(q.K == 15);
    CHECK(q.B(0, 0) == doctest::Approx(3.43 * 4).epsilon(1e-15));
    CHECK(std::abs(q.B(0, 0) - 13.71) <= 0.02);
    CHECK(q.h[0] == doctest::Approx(38.97 * 2).epsilon(1e-15));
    CHECK(std::abs(q.h[0] - 77.95) <= 0.02);
    CHECK(q.D(0, 2) == doctest::Approx(0.94 * 5).epsilon(1e-15));
  }

  TEST_CASE("lift matches the M Q M' construction") {
    for (const auto& p : sweep::instances(80)) {
      const auto q = dvs::lift(p);
      const auto r = ref::lift(p);
      const double scale = 1.0 + r.B.cwiseAbs().maxCoeff();
      CHECK((q.B - r.B).cwiseAbs().maxCoeff() <= 1e-13 * scale);
      CHECK((q.h - r.h).cwiseAbs().maxCoeff() <= 1e-13 * (1 + r.h.cwiseAbs().maxCoeff()));
      if (p.m() > 0) CHECK((q.D - r.D).cwiseAbs().maxCoeff() <= 1e-13 * (1 + r.D.cwiseAbs().maxCoeff()));
      CHECK(q.H == r.H);
      CHECK(q.b == p.b());
    }
  }

  TEST_CASE("structure: symmetry, selector rows and block sizes") {
    for (const auto& p : sweep::instances(60)) {
      const auto q = dvs::lift(p);
      CHECK(q.B == q.B.transpose());
      std::size_t total = 0;
      for (std::size_t i = 0; i < q.n(); ++i) {
        CHECK(q.blocks[i].offset == total);
        CHECK(q.blocks[i].size == p.U(i).size());
        total += q.blocks[i].size;
        for (std::size_t a = 0; a < q.K; ++a) {
          const bool inside = a >= q.blocks[i].offset && a < q.blocks[i].end();
          CHECK(q.H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) ==
                (inside ? 1.0 : 0.0));
        }
      }
      CHECK(q.K == total);
    }
  }

  TEST_CASE("singleton lift is the identity") {
    const dvs::DiscreteQP p(Matrix::Constant(1, 1, 3.0), Vector::Constant(1, -2.0), Matrix(0, 1),
                            Vector(0), {{1}});
    const auto q = dvs::lift(p);
    CHECK(q.K == 1);
    CHECK(q.B(0, 0) == 3.0);
    CHECK(q.h[0] == -2.0);
    CHECK(q.H(0, 0) == 1.0);
  }

  TEST_CASE("PSD Q gives PSD B") {
    dvs::Rng rng(3);
    for (int t = 0; t < 30; ++t) {
      const auto p = sweep::hand_built(100 + t, 4, 2);
      const auto q = dvs::lift(p);
      Eigen::SelfAdjointEigenSolver<Matrix> es(q.B, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() >= -1e-8);
    }
  }

  TEST_CASE("recover and encode") {
    const auto ex1 = fixtures::example1();
    const auto q1 = dvs::lift(ex1);
    CHECK(dvs::recover_x(q1, kEx1Y) == vec({5, 2, 5, 2, 2}));
    CHECK(dvs::encode_y(ex1, vec({5, 2, 5, 2, 2})) == kEx1Y);
    CHECK_THROWS_AS(dvs::encode_y(ex1, vec({2.5, 2, 5, 2, 2})), dvs::ValueNotInSet);
    try {
      dvs::encode_y(ex1, vec({2, 2, 2, 2.5, 2}));
    } catch (const dvs::ValueNotInSet& e) {
      CHECK(e.index() == 3);
    }

    const auto ex2 = fixtures::example2();
    const auto q2 = dvs::lift(ex2);
    Vector y2 = Vector::Zero(50);
    for (int i = 0; i < 10; ++i) y2[5 * i] = 1.0;
    CHECK(dvs::recover_x(q2, y2) == Vector::Ones(10));
    CHECK(q2.H * y2 == Vector::Ones(10));

    Vector two = kEx1Y;
    two[1] = 1.0;
    CHECK_THROWS_AS(dvs::recover_x(q1, two), dvs::BlockViolation);
    Vector frac = kEx1Y;
    frac[2] = 0.5;
    CHECK_THROWS_AS(dvs::recover_x(q1, frac), dvs::BlockViolation);
  }

  TEST_CASE("encode and recover are inverse") {
    dvs::Rng rng(8);
    for (const auto& p : sweep::instances(50)) {
      const auto q = dvs::lift(p);
      Vector x(static_cast<Eigen::Index>(p.n()));
      for (std::size_t i = 0; i < p.n(); ++i)
        x[static_cast<Eigen::Index>(i)] = p.U(i)[rng.below(p.U(i).size())];
      const Vector y = dvs::encode_y(p, x);
      CHECK(dvs::recover_x(q, y) == x);
      CHECK(q.H * y == Vector::Ones(static_cast<Eigen::Index>(p.n())));
    }
  }

  TEST_CASE("serial and parallel lifts are identical") {
    dvs::GenSpec spec;
    spec.n = 40;
    spec.m = 3;
    spec.seed = 5;
    const auto p = dvs::generate(spec);
    const auto a = dvs::lift(p, dvs::kernels::Exec::Serial);
    const auto b = dvs::lift(p, dvs::kernels::Exec::Parallel);
    CHECK(a.B == b.B);
    CHECK(a.D == b.D);
  }
}
