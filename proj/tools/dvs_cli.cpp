#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dvs/dual_solver.hpp"
#include "dvs/instance_gen.hpp"
#include "dvs/io.hpp"
#include "dvs/lift.hpp"
#include "dvs/log.hpp"
#include "dvs/oracle.hpp"
#include "dvs/toy_demo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitUncertified = 3;
constexpr int kExitCheckFail = 4;

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw dvs::Error(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw dvs::Error(std::string(what) + ": empty list");
  return out;
}

dvs::Interval parse_range(const std::string& s, const char* what) {
  const auto colon = s.find(':', 1);
  if (colon == std::string::npos) throw dvs::Error(std::string(what) + ": expected LO:HI");
  try {
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw dvs::Error(std::string(what) + ": cannot parse '" + s + "'");
  }
}

dvs::DiscreteQP load_problem(const std::string& path) {
  return dvs::io::parse_problem(dvs::io::read_file(path));
}

dvs::kernels::Exec exec_of(bool serial) {
  return serial ? dvs::kernels::Exec::Serial : dvs::kernels::Exec::Parallel;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete value selection QP solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dvs::io::kVersion));

  // solve
  std::string solve_in, solve_out = "-";
  dvs::SolverConfig cfg;
  bool solve_trace = false, solve_no_timing = false, solve_serial = false;
  auto* solve = app.add_subcommand("solve", "Maximize the dual and certify the rounded point");
  solve->add_option("problem", solve_in, "Problem JSON")->required();
  solve->add_option("--out", solve_out, "Report path ('-' for stdout)");
  solve->add_option("--tol-grad", cfg.tol_grad, "Projected gradient tolerance");
  solve->add_option("--tol-gap", cfg.tol_gap, "Relative duality gap tolerance");
  solve->add_option("--tol-kkt", cfg.tol_kkt, "KKT residual tolerance");
  solve->add_option("--mu-min", cfg.mu_min, "Lower bound on mu");
  solve->add_option("--max-iter", cfg.max_iter, "Iteration limit");
  solve->add_option("--seed", cfg.seed, "Seed (recorded in the report)");
  solve->add_flag("--fallback-oracle", cfg.fallback_oracle,
                  "Enumerate when uncertified and K <= 24");
  solve->add_flag("--trace", solve_trace, "Include the dual value trace");
  solve->add_flag("--no-timing", solve_no_timing, "Omit wall-clock seconds");
  solve->add_flag("--serial", solve_serial, "Use the serial kernels");

  // oracle
  std::string oracle_in, oracle_out = "-";
  unsigned long long oracle_limit = dvs::kDefaultEnumerationLimit;
  bool oracle_no_timing = false, oracle_serial = false, oracle_reverse = false;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive enumeration");
  oracle->add_option("problem", oracle_in, "Problem JSON")->required();
  oracle->add_option("--out", oracle_out, "Report path ('-' for stdout)");
  oracle->add_option("--limit", oracle_limit, "Maximum number of selections");
  oracle->add_flag("--no-timing", oracle_no_timing, "Omit wall-clock seconds");
  oracle->add_flag("--serial", oracle_serial, "Single-threaded enumeration");
  oracle->add_flag("--reverse", oracle_reverse, "Visit selections in reverse order");

  // gen
  dvs::GenSpec spec;
  std::string gen_values = "1,2,3,4,5", gen_coeff = "0:1", gen_linear, gen_out = "-";
  bool gen_no_dominance = false;
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", spec.n, "Number of variables")->required();
  gen->add_option("--m", spec.m, "Number of constraints")->required();
  gen->add_option("--seed", spec.seed, "Seed")->required();
  gen->add_option("--values", gen_values, "Value set, comma separated");
  gen->add_option("--coeff-range", gen_coeff, "Range of q_ij and a_ij, LO:HI");
  gen->add_option("--linear-range", gen_linear, "Range of c_i, LO:HI");
  gen->add_flag("--no-dominance", gen_no_dominance, "Keep the symmetrized Q as drawn");
  gen->add_option("--out", gen_out, "Problem path ('-' for stdout)");

  // lift
  std::string lift_in, lift_out = "-";
  auto* lift = app.add_subcommand("lift", "Write the lifted 0-1 problem");
  lift->add_option("problem", lift_in, "Problem JSON")->required();
  lift->add_option("--out", lift_out, "Output path ('-' for stdout)");

  // toy
  dvs::ToyInstance toy;
  std::string toy_f = "0.5", toy_curves, toy_range = "-5:5", toy_out = "-";
  std::size_t toy_steps = 1000;
  auto* toyc = app.add_subcommand("toy", "Double-well example");
  toyc->add_option("--alpha", toy.alpha, "alpha > 0");
  toyc->add_option("--lambda", toy.lambda, "lambda > 0");
  toyc->add_option("--f", toy_f, "f, comma separated");
  toyc->add_option("--curves", toy_curves, "CSV output for the sampled curves");
  toyc->add_option("--range", toy_range, "Sampling range LO:HI (use --range=-5:5)");
  toyc->add_option("--steps", toy_steps, "Samples per curve");
  toyc->add_option("--out", toy_out, "Summary path ('-' for stdout)");

  // check
  std::string check_problem, check_report;
  auto* checkc = app.add_subcommand("check", "Re-verify a report against its problem");
  checkc->add_option("problem", check_problem, "Problem JSON")->required();
  checkc->add_option("report", check_report, "Report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*solve) {
      cfg.exec = exec_of(solve_serial);
      const auto p = load_problem(solve_in);
      const auto r = dvs::solve(p, cfg);
      dvs::io::ReportOptions opts{solve_trace, !solve_no_timing};
      dvs::io::write_file(solve_out, dvs::io::emit_report(r, cfg, opts));
      const bool good = r.certificate.status == dvs::CertificateStatus::CertifiedGlobal ||
                        r.source == dvs::Source::OracleFallback;
      return good ? kExitOk : kExitUncertified;
    }
    if (*oracle) {
      const auto p = load_problem(oracle_in);
      dvs::EnumerateOptions opts;
      opts.limit = oracle_limit;
      opts.exec = exec_of(oracle_serial);
      opts.order = oracle_reverse ? dvs::EnumOrder::Reverse : dvs::EnumOrder::Forward;
      const auto start = std::chrono::steady_clock::now();
      const auto r = dvs::enumerate(p, opts);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      dvs::io::write_file(oracle_out,
                          dvs::io::emit_oracle_report(r, secs, {false, !oracle_no_timing}));
      return kExitOk;
    }
    if (*gen) {
      spec.value_set = parse_list(gen_values, "--values");
      spec.coeff_range = parse_range(gen_coeff, "--coeff-range");
      if (!gen_linear.empty()) spec.linear_range = parse_range(gen_linear, "--linear-range");
      spec.dominance_boost = !gen_no_dominance;
      dvs::io::write_file(gen_out, dvs::io::problem_to_json(dvs::generate(spec)));
      return kExitOk;
    }
    if (*lift) {
      const auto p = load_problem(lift_in);
      dvs::io::write_file(lift_out, dvs::io::lifted_to_json(dvs::lift(p)));
      return kExitOk;
    }
    if (*toyc) {
      const auto f = parse_list(toy_f, "--f");
      toy.f = Eigen::Map<const dvs::Vector>(f.data(), static_cast<Eigen::Index>(f.size()));
      const auto roots = dvs::toy_dual_roots(toy);
      const auto sol = dvs::toy_solve(toy);
      dvs::io::write_file(toy_out, dvs::io::emit_toy_report(toy, roots, sol));
      if (!toy_curves.empty()) {
        const auto range = parse_range(toy_range, "--range");
        dvs::io::write_file(toy_curves, dvs::curves_to_csv(dvs::toy_curves(
                                            toy, range.lo, range.hi, toy_steps)));
      }
      return kExitOk;
    }
    if (*checkc) {
      const auto p = load_problem(check_problem);
      const auto verdict = dvs::io::check(p, dvs::io::read_file(check_report));
      std::cout << verdict.summary();
      return verdict.ok() ? kExitOk : kExitCheckFail;
    }
  } catch (const dvs::Infeasible& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUncertified;
  } catch (const dvs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
