#include "dvs/dual_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "dvs/lift.hpp"
#include "dvs/log.hpp"
#include "dvs/oracle.hpp"

namespace dvs {

void SolverConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string(name) + " must be a positive finite number");
  };
  positive(tol_grad, "tol_grad");
  positive(tol_gap, "tol_gap");
  positive(tol_kkt, "tol_kkt");
  positive(mu_min, "mu_min");
  if (max_iter == 0) throw ConfigError("max_iter must be at least 1");
  if (!(round_threshold > 0.0 && round_threshold < 1.0))
    throw ConfigError("round_threshold must lie in (0, 1)");
}

DualPoint initial_point(const BinaryQP& q, double mu_min) {
  DualPoint d = DualPoint::zeros(q.m(), q.n(), q.K);
  if (q.K == 0) return d;
  const double norm_inf = q.B.cwiseAbs().rowwise().sum().maxCoeff();
  const double delta0 = 1e-3 * (1.0 + norm_inf);
  Eigen::SelfAdjointEigenSolver<Matrix> es(q.B, Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues().minCoeff();
  d.mu.setConstant(std::max(mu_min, delta0 - 0.5 * lam_min));
  return d;
}

namespace {

constexpr double kInitialDamping = 1e-3;
constexpr double kMinDamping = 1e-12;
constexpr double kMaxDamping = 1e12;
constexpr double kAcceptRatio = 1e-4;

// Centering: before the plain ascent, a few stages maximize
// P^d + eps log det G(mu) with eps shrinking tenfold per stage.
constexpr int kCenteringStages = 8;
constexpr double kCenteringWeight = 1e-2;
constexpr double kCenteringTol = 1e-6;

struct Stage {
  const BinaryQP& q;
  const SolverConfig& cfg;
  Eigen::Index m, n, K, N;
  Vector lb;

  bool bounded(Eigen::Index i) const { return i < m || i >= m + n; }

  Vector projected(const Vector& z, const Vector& g) const {
    Vector pg = g;
    for (Eigen::Index i = 0; i < N; ++i)
      if (bounded(i)) pg[i] = std::max(z[i] + g[i], lb[i]) - z[i];
    return pg;
  }
};

// Dual evaluation plus the centering term.
struct Point {
  DualEvaluation e;
  double phi = 0.0;
  Vector grad;
};

std::optional<Point> evaluate(const Stage& st, const Vector& z, double eps) {
  auto e = evaluate_dual(st.q, unstack(z, st.q.m(), st.q.n(), st.q.K), st.cfg.exec);
  if (!e) return std::nullopt;
  Point p{std::move(*e), 0.0, Vector()};
  p.phi = p.e.value;
  p.grad = p.e.gradient;
  if (eps > 0.0) {
    const auto& l = p.e.factorization.lower();
    double logdet = 0.0;
    for (Eigen::Index a = 0; a < st.K; ++a) logdet += 2.0 * std::log(l(a, a));
    p.phi += eps * logdet;
    const Matrix ginv = p.e.factorization.apply_pinv(Matrix(Matrix::Identity(st.K, st.K)));
    p.grad.tail(st.K) += 2.0 * eps * ginv.diagonal();
  }
  return p;
}

Matrix curvature(const Stage& st, const Point& p, double eps) {
  Matrix curv = dual_curvature(st.q, p.e, st.cfg.exec);
  if (eps > 0.0) {
    const Matrix ginv = p.e.factorization.apply_pinv(Matrix(Matrix::Identity(st.K, st.K)));
    curv.bottomRightCorner(st.K, st.K) += 4.0 * eps * ginv.cwiseProduct(ginv);
  }
  return curv;
}

// Projected Levenberg-Marquardt Newton on phi = P^d + eps log det G. A step
// is taken only if phi passes the ratio test and P^d does not decrease.
Termination ascend(const Stage& st, Vector& z, Point& cur, double eps, double tol,
                   AscentResult& out) {
  const Eigen::Index N = st.N;
  double lam = kInitialDamping;
  while (true) {
    const Vector pg = st.projected(z, cur.grad);
    if (pg.cwiseAbs().maxCoeff() <= tol) return Termination::Converged;
    if (out.iterations >= st.cfg.max_iter) return Termination::MaxIterations;

    const Vector& g = cur.grad;
    const Matrix curv = curvature(st, cur, eps);

    std::vector<Eigen::Index> free;
    free.reserve(static_cast<std::size_t>(N));
    for (Eigen::Index i = 0; i < N; ++i)
      if (!(st.bounded(i) && z[i] <= st.lb[i] && g[i] <= 0.0)) free.push_back(i);
    const auto nf = static_cast<Eigen::Index>(free.size());

    Matrix hff(nf, nf);
    Vector gf(nf);
    double diag_scale = 0.0;
    for (Eigen::Index a = 0; a < nf; ++a) {
      gf[a] = g[free[a]];
      for (Eigen::Index b = 0; b < nf; ++b) hff(a, b) = curv(free[a], free[b]);
      diag_scale = std::max(diag_scale, hff(a, a));
    }
    const double diag_floor = 1e-12 * (1.0 + diag_scale);

    while (true) {
      if (lam > kMaxDamping) return Termination::LineSearchStall;
      Matrix sys = hff;
      for (Eigen::Index a = 0; a < nf; ++a) sys(a, a) += lam * std::max(hff(a, a), diag_floor);
      Eigen::LLT<Matrix> llt(sys);
      if (llt.info() != Eigen::Success) {
        lam *= 4.0;
        continue;
      }
      const Vector df = llt.solve(gf);

      Vector zn = z;
      for (Eigen::Index a = 0; a < nf; ++a) zn[free[a]] += df[a];
      for (Eigen::Index i = 0; i < N; ++i)
        if (st.bounded(i)) zn[i] = std::max(zn[i], st.lb[i]);
      const Vector s = zn - z;
      if (s.cwiseAbs().maxCoeff() <= 1e-16 * (1.0 + z.cwiseAbs().maxCoeff()))
        return Termination::LineSearchStall;
      const double pred = g.dot(s) - 0.5 * s.dot(curv * s);

      auto trial = evaluate(st, zn, eps);
      if (!trial || !(pred > 0.0) || trial->phi < cur.phi || trial->e.value < cur.e.value) {
        lam *= 4.0;
        continue;
      }
      const double rho = (trial->phi - cur.phi) / pred;
      if (rho < kAcceptRatio) {
        lam *= 4.0;
        continue;
      }
      if (rho > 0.75)
        lam = std::max(lam / 3.0, kMinDamping);
      else if (rho < 0.25)
        lam *= 2.0;
      z = std::move(zn);
      cur = std::move(*trial);
      break;
    }
    ++out.iterations;
    out.trace.push_back(cur.e.value);
    if (log::level() >= log::Level::Trace)
      log::trace("iter " + std::to_string(out.iterations) + " eps " + std::to_string(eps) +
                 " value " + std::to_string(cur.e.value) + " lam " + std::to_string(lam));
  }
}

}  // namespace

AscentResult maximize_dual(const BinaryQP& q, const SolverConfig& cfg) {
  cfg.validate();
  const auto m = static_cast<Eigen::Index>(q.m());
  const auto n = static_cast<Eigen::Index>(q.n());
  const auto K = static_cast<Eigen::Index>(q.K);
  Stage st{q, cfg, m, n, K, m + n + K, Vector()};
  // sigma >= 0, tau free, mu >= mu_min.
  st.lb = Vector::Constant(st.N, -std::numeric_limits<double>::infinity());
  st.lb.head(m).setZero();
  st.lb.tail(K).setConstant(cfg.mu_min);

  Vector z = stack(initial_point(q, cfg.mu_min));
  auto start = evaluate(st, z, 0.0);
  if (!start) throw NotPositiveDefinite("initial dual point is outside the cone");
  Point cur = std::move(*start);

  AscentResult out;
  out.trace.push_back(cur.e.value);
  const double b_scale = 1.0 + (m > 0 ? q.b.cwiseAbs().maxCoeff() : 0.0);

  double eps = K > 0 ? kCenteringWeight * (1.0 + q.B.cwiseAbs().maxCoeff()) : 0.0;
  for (int k = 0; k < kCenteringStages && eps > 0.0; ++k, eps *= 0.1) {
    auto p = evaluate(st, z, eps);
    if (!p) break;
    cur = std::move(*p);
    if (ascend(st, z, cur, eps, kCenteringTol * b_scale, out) == Termination::MaxIterations)
      break;
  }
  cur = std::move(*evaluate(st, z, 0.0));
  out.termination = ascend(st, z, cur, 0.0, cfg.tol_grad * b_scale, out);

  out.point = unstack(z, q.m(), q.n(), q.K);
  out.value = cur.e.value;
  out.y = cur.e.y;
  out.projected_gradient = st.projected(z, cur.grad).cwiseAbs().maxCoeff();
  return out;
}

Rounding round_binary(const Vector& y, const std::vector<Block>& blocks, double threshold) {
  Rounding r;
  r.y01 = Vector::Zero(y.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& blk = blocks[i];
    if (blk.size == 0) continue;
    auto best = static_cast<Eigen::Index>(blk.offset);
    for (std::size_t a = blk.offset + 1; a < blk.end(); ++a)
      if (y[static_cast<Eigen::Index>(a)] > y[best]) best = static_cast<Eigen::Index>(a);
    r.y01[best] = 1.0;
    if (!(y[best] >= threshold)) r.low_confidence_blocks.push_back(i);
  }
  return r;
}

Certificate verify_kkt(const BinaryQP& q, const Vector& y01, const DualPoint& d, double tol,
                       double tol_gap, double mu_min) {
  const auto m = static_cast<Eigen::Index>(q.m());
  const auto K = static_cast<Eigen::Index>(q.K);
  if (y01.size() != K)
    throw DimensionError("verify_kkt: y has " + std::to_string(y01.size()) +
                         " entries, expected " + std::to_string(q.K));
  Certificate c;

  const Vector slack = m > 0 ? Vector(q.D * y01 - q.b) : Vector(0);
  const Vector hy = q.H * y01 - Vector::Ones(static_cast<Eigen::Index>(q.n()));
  const Vector had = y01.cwiseProduct(y01 - Vector::Ones(K));

  double primal = 0.0;
  for (Eigen::Index r = 0; r < m; ++r)
    primal = std::max(primal, slack[r] / (1.0 + std::abs(q.b[r])));
  if (hy.size() > 0) primal = std::max(primal, hy.cwiseAbs().maxCoeff());
  if (K > 0) primal = std::max(primal, had.maxCoeff());
  c.primal_feas_residual = primal;

  double dual = 0.0;
  if (d.sigma.size() > 0) dual = std::max(dual, (-d.sigma).maxCoeff());
  if (d.mu.size() > 0) dual = std::max(dual, (-d.mu).maxCoeff());
  c.dual_feas_residual = dual;

  const double comp_sigma = m > 0 ? std::abs(d.sigma.dot(slack)) : 0.0;
  const double comp_mu = std::abs(d.mu.dot(had));
  c.complementarity_residual = std::max(comp_sigma, comp_mu);

  c.primal_value = binary_objective(q, y01);
  c.dual_value = dual_value(q, d);
  c.gap = std::abs(c.primal_value - c.dual_value);
  c.in_cone = in_dual_cone(q, d, mu_min).inside();

  const double scale = 1.0 + std::abs(c.primal_value);
  const bool residuals_ok = std::isfinite(c.dual_value) && primal <= kFeasibilityTol &&
                            dual <= tol && c.complementarity_residual <= tol * scale;
  const bool gap_ok = c.gap <= tol_gap * scale;
  if (residuals_ok && gap_ok && c.in_cone)
    c.status = CertificateStatus::CertifiedGlobal;
  else if (residuals_ok && !c.in_cone)
    c.status = CertificateStatus::KKTOnly;
  else
    c.status = CertificateStatus::NoCertificate;
  return c;
}

SolveReport solve(const DiscreteQP& p, const SolverConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  const BinaryQP q = lift(p, cfg.exec);
  AscentResult asc = maximize_dual(q, cfg);
  Rounding rnd = round_binary(asc.y, q.blocks, cfg.round_threshold);

  SolveReport r;
  r.x = recover_x(q, rnd.y01);
  r.certificate = verify_kkt(q, rnd.y01, asc.point, cfg.tol_kkt, cfg.tol_gap, cfg.mu_min);
  r.dual_point = asc.point;
  r.y = asc.y;
  r.iterations = asc.iterations;
  r.termination = asc.termination;
  r.low_confidence_blocks = std::move(rnd.low_confidence_blocks);
  r.trace = std::move(asc.trace);
  log::info("ascent " + std::string(to_string(r.termination)) + " after " +
            std::to_string(r.iterations) + " iterations, status " +
            std::string(to_string(r.certificate.status)));

  if (r.certificate.status != CertificateStatus::CertifiedGlobal && cfg.fallback_oracle &&
      q.K <= cfg.fallback_oracle_max_K) {
    log::info("falling back to enumeration");
    EnumerateOptions opts;
    opts.exec = cfg.exec;
    const OracleResult o = enumerate(p, opts);
    r.x = o.x;
    r.source = Source::OracleFallback;
    r.certificate =
        verify_kkt(q, encode_y(p, r.x), asc.point, cfg.tol_kkt, cfg.tol_gap, cfg.mu_min);
  }
  r.objective = objective(p, r.x);
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace dvs
