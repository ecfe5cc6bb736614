#include "bubblecorr/balance.hpp"
#include "bubblecorr/integrals.hpp"
#include "bubblecorr/json_io.hpp"
#include "bubblecorr/profile.hpp"
#include "bubblecorr/reduction.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace bc;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitObstruction = 2;

struct RunConfig {
  int n = 0;
  int ell = 0;
  std::string input;
  std::string output;
  std::string method = "closed_form";
  double tol_exact = 0.0;
  std::optional<double> tol_float;
  std::optional<double> tol_quad;
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  bool general = false;
  double radius = 1.0;
};

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.output.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(cfg.output, content);
  }
}

Polynomial input_polynomial(const RunConfig& cfg) {
  if (cfg.input.empty()) throw InputError("--input is required");
  return polynomial_from_json(read_json_file(cfg.input));
}

int cmd_solve(const RunConfig& cfg) {
  const Polynomial p = input_polynomial(cfg);
  try {
    const CorrectionSolution s = cfg.general ? solve_general(p) : solve_gamma(p);
    Json j;
    j["status"] = "solved";
    j["solution"] = solution_to_json(s);
    emit(cfg, dump_json(j));
    return kExitOk;
  } catch (const ResidueObstruction& e) {
    Json j;
    j["status"] = "obstruction";
    j["message"] = e.what();
    j["residue"] = polynomial_to_json(e.residue);
    emit(cfg, dump_json(j));
    std::cerr << "obstruction: " << e.what() << "\n";
    return kExitObstruction;
  } catch (const UnsolvableError& e) {
    Json j;
    j["status"] = "unsolvable";
    j["message"] = e.what();
    emit(cfg, dump_json(j));
    std::cerr << "unsolvable: " << e.what() << "\n";
    return kExitObstruction;
  }
}

int cmd_table(const RunConfig& cfg) {
  try {
    emit(cfg, dump_json(table_to_json(coefficient_table(cfg.n, cfg.ell))));
    return kExitOk;
  } catch (const GuardError& e) {
    Json j;
    j["status"] = "guard";
    j["cell"] = Json{{"j", e.j}, {"k", e.k}};
    j["root"] = e.root;
    j["message"] = e.what();
    emit(cfg, dump_json(j));
    std::cerr << "guard: " << e.what() << "\n";
    return kExitObstruction;
  }
}

int cmd_integrate(const RunConfig& cfg) {
  IntegralMethod m;
  if (cfg.method == "closed_form") {
    m = IntegralMethod::closed_form;
  } else if (cfg.method == "quadrature") {
    m = IntegralMethod::quadrature;
  } else {
    throw InputError("--method must be closed_form or quadrature");
  }
  emit(cfg, dump_json(integral_to_json(moment_integral(input_polynomial(cfg), m))));
  return kExitOk;
}

int cmd_balance(const RunConfig& cfg) {
  if (cfg.input.empty()) throw InputError("--input is required");
  const Json in = read_json_file(cfg.input);
  Json out;
  bool pass = true;
  Json checks = Json::array();
  if (in.contains("points")) {
    const BlowupConfiguration c = configuration_from_json(in);
    const BalanceReport r = multi_point_balance(c, cfg.tol_float.value_or(1e-10));
    for (const auto& g : r.groups) checks.push_back(violation_to_json(g));
    pass = r.pass();
    if (c.n > 6) {
      const ViolationReport inter = interference_check(c.n, {c.flex_exponents.begin() + 1, c.flex_exponents.end()});
      out["interference"] = violation_to_json(inter);
    }
    out["mode"] = "multi_point";
  } else if (in.contains("polynomial") && in.contains("x")) {
    const Polynomial p = polynomial_from_json(in.at("polynomial"));
    RationalPoint x;
    for (const Json& c : in.at("x")) x.push_back(rational_from_json(c));
    const SinglePointReport r = single_point_constraints(p, x);
    const Rational slack = rational_from_double(cfg.tol_exact);
    for (auto v : r.checks) {
      if (v.residual_exact) v.pass = abs(*v.residual_exact) <= slack;
      v.tolerance = cfg.tol_exact;
      pass = pass && v.pass;
      checks.push_back(violation_to_json(v));
    }
    out["mode"] = "single_point";
    out["hypothesis_flags"] = r.hypothesis_flags;
  } else {
    throw InputError("balance input needs a configuration (\"points\", ...) or \"polynomial\" with \"x\"");
  }
  out["pass"] = pass;
  out["checks"] = checks;
  emit(cfg, dump_json(out));
  return pass ? kExitOk : kExitObstruction;
}

int cmd_residual_scan(const RunConfig& cfg) {
  const Polynomial p = input_polynomial(cfg);
  std::optional<CorrectionSolution> s;
  try {
    s = solve_gamma(p);
  } catch (const ResidueObstruction& e) {
    Json j;
    j["status"] = "obstruction";
    j["residue"] = polynomial_to_json(e.residue);
    emit(cfg, dump_json(j));
    std::cerr << "obstruction: " << e.what() << "\n";
    return kExitObstruction;
  }
  const double tol = cfg.tol_float.value_or(1e-9);
  const ResidualReport r = linearized_residual(s->gamma, p, cfg.samples, cfg.seed);
  Json j;
  j["status"] = "scanned";
  j["gamma"] = polynomial_to_json(s->gamma);
  j["report"] = residual_report_to_json(r);
  j["tolerance"] = tol;
  j["pass"] = r.max_abs < tol;
  emit(cfg, dump_json(j));
  return r.max_abs < tol ? kExitOk : kExitObstruction;
}

int cmd_green_check(const RunConfig& cfg) {
  if (cfg.n < 3) throw InputError("--n must be at least 3");
  const GreenCheckReport r = green_check(cfg.n, cfg.radius, {0.1, 0.3}, cfg.samples, cfg.seed);
  const double tol_quad = cfg.tol_quad.value_or(1e-4);
  bool pass = r.dirichlet_max < 1e-8;
  for (double v : r.poisson_normalization) pass = pass && std::abs(v - 1.0) <= tol_quad;
  Json j = green_report_to_json(r);
  j["pass"] = pass;
  emit(cfg, dump_json(j));
  return pass ? kExitOk : kExitObstruction;
}

int cmd_profile(const RunConfig& cfg) {
  if (cfg.input.empty()) throw InputError("--input is required");
  const Json in = read_json_file(cfg.input);
  const RefinedProfile prof(profile_spec_from_json(in));
  const int n = prof.spec().n;
  const double radius = in.value("sample_radius", 2.0 * prof.spec().lambda);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::string csv;
  for (int i = 0; i < n; ++i) csv += "y" + std::to_string(i + 1) + ",";
  csv += "bubble,correction,harmonic_group,total\n";
  char buf[64];
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Point y(n);
    for (int i = 0; i < n; ++i) y[i] = prof.spec().xi[i] + radius * unif(rng);
    const ProfileComponents c = prof.components(y);
    for (double v : y) {
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      csv += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g,", c.bubble);
    csv += buf;
    std::snprintf(buf, sizeof buf, "%.17g,", c.correction);
    csv += buf;
    std::snprintf(buf, sizeof buf, "%.17g,", c.harmonic_group);
    csv += buf;
    std::snprintf(buf, sizeof buf, "%.17g\n", c.total);
    csv += buf;
  }
  emit(cfg, csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduction solver, moment integrals and balance checks for the linearized bubble equation"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "Dimension");
    sub->add_option("--ell", cfg.ell, "Degree");
    sub->add_option("--input", cfg.input, "Input JSON file");
    sub->add_option("--output", cfg.output, "Output file (stdout when omitted)");
    sub->add_option("--tol-exact", cfg.tol_exact, "Slack on exact residues (default 0)")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol-float", cfg.tol_float, "Tolerance for float constraints")->check(CLI::PositiveNumber);
    sub->add_option("--tol-quad", cfg.tol_quad, "Tolerance for quadrature-backed checks")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--samples", cfg.samples, "Sample count")->check(CLI::PositiveNumber);
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve the linear equation for a homogeneous polynomial");
  add_common(solve);
  solve->add_flag("--general", cfg.general, "Add the radial completion when the residue is nonzero");
  CLI::App* table = app.add_subcommand("table", "Dump the coefficient table");
  add_common(table);
  CLI::App* integrate = app.add_subcommand("integrate", "Moment integral against the bubble weight");
  add_common(integrate);
  integrate->add_option("--method", cfg.method, "closed_form or quadrature");
  CLI::App* balance = app.add_subcommand("balance", "Single- or multi-point balance constraints");
  add_common(balance);
  CLI::App* residual = app.add_subcommand("residual-scan", "Sampled residual of the solved correction");
  add_common(residual);
  CLI::App* green = app.add_subcommand("green-check", "Green's function and Poisson kernel checks");
  add_common(green);
  green->add_option("--radius", cfg.radius, "Ball radius")->check(CLI::PositiveNumber);
  CLI::App* profile = app.add_subcommand("profile", "Sample the refined profile to CSV");
  add_common(profile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve) return cmd_solve(cfg);
    if (*table) return cmd_table(cfg);
    if (*integrate) return cmd_integrate(cfg);
    if (*balance) return cmd_balance(cfg);
    if (*residual) return cmd_residual_scan(cfg);
    if (*green) return cmd_green_check(cfg);
    if (*profile) return cmd_profile(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
