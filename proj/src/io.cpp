#include "dvs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "dvs/lift.hpp"

namespace dvs::io {

using Json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- writing

std::string format_real(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void write(std::string& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        write(out, val, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(out, j[i], depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(out, j[i], depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

std::string dump(const Json& j) {
  std::string out;
  write(out, j, 0);
  out += "\n";
  return out;
}

Json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(real(v[i]));
  return a;
}

Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(real(m(r, c)));
    a.push_back(std::move(row));
  }
  return a;
}

// ---------------------------------------------------------------- reading

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

Json parse_json(std::string_view bytes) {
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    schema("$", std::string("invalid JSON (") + e.what() + ")");
  }
}

const Json& field(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(path, std::string("missing key '") + key + "'");
  return *it;
}

double get_real(const Json& j, const std::string& path) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

std::size_t get_count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    schema(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) schema(path, "expected a boolean");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_list(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(get_real(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

Vector get_vector(const Json& j, const std::string& path) {
  const auto v = get_list(j, path);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Matrix get_matrix(const Json& j, const std::string& path, std::size_t rows, std::size_t cols) {
  if (!j.is_array()) schema(path, "expected an array of rows");
  if (j.size() != rows)
    throw DimensionError(path + ": expected " + std::to_string(rows) + " rows, got " +
                         std::to_string(j.size()));
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const auto row = get_list(j[r], rp);
    if (row.size() != cols)
      throw DimensionError(rp + ": expected " + std::to_string(cols) + " columns, got " +
                           std::to_string(row.size()));
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  return m;
}

void reject_unknown(const Json& obj, const std::string& path,
                    std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) schema(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) schema(path + "." + key, "unknown key");
  }
}

void expect_size(const Vector& v, std::size_t n, const std::string& path) {
  if (v.size() != static_cast<Eigen::Index>(n))
    throw DimensionError(path + ": expected " + std::to_string(n) + " entries, got " +
                         std::to_string(v.size()));
}

std::string claim_of(const SolveReport& r) {
  if (r.source == Source::OracleFallback) return "oracle minimizer";
  switch (r.certificate.status) {
    case CertificateStatus::CertifiedGlobal:
      return "certified global minimizer";
    case CertificateStatus::KKTOnly:
      return "KKT point, not certified";
    case CertificateStatus::NoCertificate:
      break;
  }
  return "best found";
}

}  // namespace

DiscreteQP parse_problem(std::string_view bytes) {
  const Json j = parse_json(bytes);
  reject_unknown(j, "$", {"n", "m", "Q", "c", "A", "b", "U"});
  const std::size_t n = get_count(field(j, "$", "n"), "$.n");
  const std::size_t m = get_count(field(j, "$", "m"), "$.m");
  Matrix Q = get_matrix(field(j, "$", "Q"), "$.Q", n, n);
  Vector c = get_vector(field(j, "$", "c"), "$.c");
  expect_size(c, n, "$.c");
  Matrix A = get_matrix(field(j, "$", "A"), "$.A", m, n);
  Vector b = get_vector(field(j, "$", "b"), "$.b");
  expect_size(b, m, "$.b");

  const Json& uj = field(j, "$", "U");
  if (!uj.is_array()) schema("$.U", "expected an array of value sets");
  if (uj.size() != n)
    throw DimensionError("$.U: expected " + std::to_string(n) + " value sets, got " +
                         std::to_string(uj.size()));
  ValueSets U;
  for (std::size_t i = 0; i < n; ++i) U.push_back(get_list(uj[i], "$.U[" + std::to_string(i) + "]"));

  try {
    return DiscreteQP(std::move(Q), std::move(c), std::move(A), std::move(b), std::move(U));
  } catch (const SchemaError& e) {
    throw SchemaError(std::string("$.") + e.what());
  }
}

std::string problem_to_json(const DiscreteQP& p) {
  Json j;
  j["n"] = p.n();
  j["m"] = p.m();
  j["Q"] = to_json(p.Q());
  j["c"] = to_json(p.c());
  j["A"] = to_json(p.A());
  j["b"] = to_json(p.b());
  Json u = Json::array();
  for (const auto& set : p.U()) u.push_back(to_json(Vector(Eigen::Map<const Vector>(
      set.data(), static_cast<Eigen::Index>(set.size())))));
  j["U"] = std::move(u);
  return dump(j);
}

std::string lifted_to_json(const BinaryQP& q) {
  Json j;
  j["K"] = q.K;
  j["n"] = q.n();
  j["m"] = q.m();
  j["B"] = to_json(q.B);
  j["h"] = to_json(q.h);
  j["D"] = to_json(q.D);
  j["H"] = to_json(q.H);
  j["b"] = to_json(q.b);
  Json blocks = Json::array();
  for (const auto& blk : q.blocks) blocks.push_back(Json::array({blk.offset, blk.size}));
  j["blocks"] = std::move(blocks);
  j["u_flat"] = to_json(q.u_flat);
  return dump(j);
}

std::string emit_report(const SolveReport& r, const SolverConfig& cfg,
                        const ReportOptions& opts) {
  Json j;
  j["version"] = kVersion;
  j["command"] = "solve";
  j["status"] = to_string(r.certificate.status);
  j["source"] = to_string(r.source);
  j["claim"] = claim_of(r);
  j["x"] = to_json(r.x);
  j["objective"] = real(r.objective);

  Json cert;
  cert["primal_value"] = real(r.certificate.primal_value);
  cert["dual_value"] = real(r.certificate.dual_value);
  cert["gap"] = real(r.certificate.gap);
  cert["in_cone"] = r.certificate.in_cone;
  cert["residuals"] = {{"primal_feas", real(r.certificate.primal_feas_residual)},
                       {"dual_feas", real(r.certificate.dual_feas_residual)},
                       {"complementarity", real(r.certificate.complementarity_residual)}};
  j["certificate"] = std::move(cert);

  j["termination"] = to_string(r.termination);
  j["iterations"] = r.iterations;
  j["low_confidence_blocks"] = r.low_confidence_blocks;
  j["dual_point"] = {{"sigma", to_json(r.dual_point.sigma)},
                     {"tau", to_json(r.dual_point.tau)},
                     {"mu", to_json(r.dual_point.mu)}};
  j["y"] = to_json(r.y);
  j["config"] = {{"tol_grad", cfg.tol_grad},
                 {"tol_gap", cfg.tol_gap},
                 {"tol_kkt", cfg.tol_kkt},
                 {"mu_min", cfg.mu_min},
                 {"max_iter", cfg.max_iter},
                 {"round_threshold", cfg.round_threshold},
                 {"fallback_oracle", cfg.fallback_oracle},
                 {"fallback_oracle_max_K", cfg.fallback_oracle_max_K},
                 {"seed", cfg.seed}};
  if (opts.include_trace) {
    Json t = Json::array();
    for (double v : r.trace) t.push_back(real(v));
    j["trace"] = std::move(t);
  }
  if (opts.include_timing) j["seconds"] = r.seconds;
  return dump(j);
}

ParsedReport parse_report(std::string_view bytes) {
  const Json j = parse_json(bytes);
  reject_unknown(j, "$",
                 {"version", "command", "status", "source", "claim", "x", "objective",
                  "certificate", "termination", "iterations", "low_confidence_blocks",
                  "dual_point", "y", "config", "trace", "seconds"});
  if (get_string(field(j, "$", "command"), "$.command") != "solve")
    schema("$.command", "expected \"solve\"");

  ParsedReport out;
  SolveReport& r = out.report;
  r.certificate.status =
      certificate_status_from_string(get_string(field(j, "$", "status"), "$.status"));
  r.source = source_from_string(get_string(field(j, "$", "source"), "$.source"));
  r.x = get_vector(field(j, "$", "x"), "$.x");
  r.objective = get_real(field(j, "$", "objective"), "$.objective");

  const Json& cert = field(j, "$", "certificate");
  reject_unknown(cert, "$.certificate",
                 {"primal_value", "dual_value", "gap", "in_cone", "residuals"});
  r.certificate.primal_value =
      get_real(field(cert, "$.certificate", "primal_value"), "$.certificate.primal_value");
  r.certificate.dual_value =
      get_real(field(cert, "$.certificate", "dual_value"), "$.certificate.dual_value");
  r.certificate.gap = get_real(field(cert, "$.certificate", "gap"), "$.certificate.gap");
  r.certificate.in_cone =
      get_bool(field(cert, "$.certificate", "in_cone"), "$.certificate.in_cone");
  const Json& res = field(cert, "$.certificate", "residuals");
  const std::string rp = "$.certificate.residuals";
  reject_unknown(res, rp, {"primal_feas", "dual_feas", "complementarity"});
  r.certificate.primal_feas_residual =
      get_real(field(res, rp, "primal_feas"), rp + ".primal_feas");
  r.certificate.dual_feas_residual = get_real(field(res, rp, "dual_feas"), rp + ".dual_feas");
  r.certificate.complementarity_residual =
      get_real(field(res, rp, "complementarity"), rp + ".complementarity");

  r.termination = termination_from_string(get_string(field(j, "$", "termination"), "$.termination"));
  r.iterations = get_count(field(j, "$", "iterations"), "$.iterations");
  const Json& low = field(j, "$", "low_confidence_blocks");
  if (!low.is_array()) schema("$.low_confidence_blocks", "expected an array");
  for (std::size_t i = 0; i < low.size(); ++i)
    r.low_confidence_blocks.push_back(
        get_count(low[i], "$.low_confidence_blocks[" + std::to_string(i) + "]"));

  const Json& dp = field(j, "$", "dual_point");
  reject_unknown(dp, "$.dual_point", {"sigma", "tau", "mu"});
  r.dual_point.sigma = get_vector(field(dp, "$.dual_point", "sigma"), "$.dual_point.sigma");
  r.dual_point.tau = get_vector(field(dp, "$.dual_point", "tau"), "$.dual_point.tau");
  r.dual_point.mu = get_vector(field(dp, "$.dual_point", "mu"), "$.dual_point.mu");
  r.y = get_vector(field(j, "$", "y"), "$.y");

  const Json& cj = field(j, "$", "config");
  const std::string cp = "$.config";
  reject_unknown(cj, cp,
                 {"tol_grad", "tol_gap", "tol_kkt", "mu_min", "max_iter", "round_threshold",
                  "fallback_oracle", "fallback_oracle_max_K", "seed"});
  SolverConfig& cfg = out.config;
  cfg.tol_grad = get_real(field(cj, cp, "tol_grad"), cp + ".tol_grad");
  cfg.tol_gap = get_real(field(cj, cp, "tol_gap"), cp + ".tol_gap");
  cfg.tol_kkt = get_real(field(cj, cp, "tol_kkt"), cp + ".tol_kkt");
  cfg.mu_min = get_real(field(cj, cp, "mu_min"), cp + ".mu_min");
  cfg.max_iter = get_count(field(cj, cp, "max_iter"), cp + ".max_iter");
  cfg.round_threshold = get_real(field(cj, cp, "round_threshold"), cp + ".round_threshold");
  cfg.fallback_oracle = get_bool(field(cj, cp, "fallback_oracle"), cp + ".fallback_oracle");
  cfg.fallback_oracle_max_K =
      get_count(field(cj, cp, "fallback_oracle_max_K"), cp + ".fallback_oracle_max_K");
  const Json& seed = field(cj, cp, "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer())
    schema(cp + ".seed", "expected an integer");
  cfg.seed = seed.get<std::uint64_t>();

  if (auto it = j.find("trace"); it != j.end()) {
    out.options.include_trace = true;
    for (double v : get_list(*it, "$.trace")) r.trace.push_back(v);
  }
  if (auto it = j.find("seconds"); it != j.end()) {
    out.options.include_timing = true;
    r.seconds = get_real(*it, "$.seconds");
  } else {
    out.options.include_timing = false;
  }
  return out;
}

std::string emit_oracle_report(const OracleResult& r, double seconds, const ReportOptions& opts) {
  Json j;
  j["version"] = kVersion;
  j["command"] = "oracle";
  j["x"] = to_json(r.x);
  j["value"] = real(r.value);
  j["feasible_count"] = r.feasible_count;
  j["total_count"] = r.total_count;
  j["best_index"] = r.best_index;
  if (opts.include_timing) j["seconds"] = seconds;
  return dump(j);
}

std::string emit_toy_report(const ToyInstance& t, const std::vector<double>& roots,
                            const ToySolution& s) {
  Json j;
  j["version"] = kVersion;
  j["command"] = "toy";
  j["alpha"] = t.alpha;
  j["lambda"] = t.lambda;
  j["f"] = to_json(t.f);
  Json rs = Json::array();
  Json res = Json::array();
  for (double v : roots) {
    rs.push_back(real(v));
    res.push_back(real(cubic_residual(t, v)));
  }
  j["roots"] = std::move(rs);
  j["root_residuals"] = std::move(res);
  j["sigma1"] = real(s.sigma1);
  j["x"] = to_json(s.x);
  j["primal_value"] = real(s.primal_value);
  j["dual_value"] = real(s.dual_value);
  return dump(j);
}

std::string CheckResult::summary() const {
  std::string out;
  for (const auto& p : passed) out += "PASS " + p + "\n";
  for (const auto& f : failed) out += "FAIL " + f + "\n";
  out += ok() ? "PASS\n" : "FAIL\n";
  return out;
}

CheckResult check(const DiscreteQP& p, std::string_view report_bytes) {
  CheckResult cr;
  const Json j = parse_json(report_bytes);
  const std::string command = j.contains("command") && j["command"].is_string()
                                  ? j["command"].get<std::string>()
                                  : std::string();
  if (command != "solve" && command != "oracle") {
    cr.failed.push_back("report: unknown command '" + command + "'");
    return cr;
  }

  Vector x;
  try {
    x = get_vector(field(j, "$", "x"), "$.x");
    expect_size(x, p.n(), "$.x");
  } catch (const Error& e) {
    cr.failed.push_back(std::string("x: ") + e.what());
    return cr;
  }

  bool members = x.allFinite();
  for (std::size_t i = 0; members && i < p.n(); ++i) {
    bool hit = false;
    for (double u : p.U(i)) hit = hit || std::abs(x[static_cast<Eigen::Index>(i)] - u) <= kMembershipTol;
    members = hit;
  }
  if (members)
    cr.passed.push_back("membership");
  else
    cr.failed.push_back("membership: some x_i is not in U_i");

  if (members && satisfies_constraints(p.A(), p.b(), x))
    cr.passed.push_back("feasibility");
  else
    cr.failed.push_back("feasibility: Ax <= b violated");

  const char* value_key = command == "solve" ? "objective" : "value";
  const double claimed = j.contains(value_key) && j[value_key].is_number()
                             ? j[value_key].get<double>()
                             : std::numeric_limits<double>::quiet_NaN();
  const double actual = objective(p, x);
  if (std::abs(claimed - actual) <= 1e-9 * (1.0 + std::abs(actual)))
    cr.passed.push_back("objective");
  else
    cr.failed.push_back("objective mismatch: report " + format_real(claimed) + ", recomputed " +
                        format_real(actual));

  if (command == "solve") {
    try {
      const ParsedReport pr = parse_report(report_bytes);
      const CertificateStatus claimed_status = pr.report.certificate.status;
      if (claimed_status == CertificateStatus::NoCertificate) {
        cr.passed.push_back("certificate (none claimed)");
      } else if (!members) {
        cr.failed.push_back("certificate: x is not decodable");
      } else {
        const BinaryQP q = lift(p);
        const Certificate c = verify_kkt(q, encode_y(p, x), pr.report.dual_point,
                                         pr.config.tol_kkt, pr.config.tol_gap, pr.config.mu_min);
        if (c.status == claimed_status)
          cr.passed.push_back("certificate");
        else
          cr.failed.push_back("certificate: claimed " + std::string(to_string(claimed_status)) +
                              ", re-verified " + std::string(to_string(c.status)));
      }
    } catch (const Error& e) {
      cr.failed.push_back(std::string("certificate: ") + e.what());
    }
  }
  return cr;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  if (path == "-") {
    std::cout << bytes;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << bytes;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace dvs::io
