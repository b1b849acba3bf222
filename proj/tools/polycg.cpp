// SPDX-License-Identifier: Apache-2.0
//
// Benchmark harness: generate or load SPD problems, run instrumented
// polynomial-preconditioned CG solves, and emit machine-readable reports.

#include "polycg/eigenest.hpp"
#include "polycg/linop.hpp"
#include "polycg/matrix_market.hpp"
#include "polycg/pcg.hpp"
#include "polycg/polyprec.hpp"
#include "polycg/scaling.hpp"
#include "polycg/spectrum.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace polycg;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// --- spec parsing ----------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

// "key=value,key=value" tail of a spec string.
std::map<std::string, std::string> parse_kv(const std::string& s) {
  std::map<std::string, std::string> kv;
  if (s.empty()) return kv;
  for (const auto& part : split(s, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("expected key=value, got '" + part + "'");
    }
    kv[part.substr(0, eq)] = part.substr(eq + 1);
  }
  return kv;
}

struct ProblemSpec {
  bool generated = false;
  StencilKind kind = StencilKind::lap2d;
  Index nx = 0;
  OperatorForm form = OperatorForm::stencil;
  std::string matrix_path;
};

ProblemSpec parse_gen(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw CLI::ValidationError("--gen expects kind:nx, e.g. lap2d:78");
  ProblemSpec spec;
  spec.generated = true;
  if (parts[0] == "lap2d") spec.kind = StencilKind::lap2d;
  else if (parts[0] == "lap3d") spec.kind = StencilKind::lap3d;
  else throw CLI::ValidationError("--gen kind must be lap2d or lap3d");
  spec.nx = std::stoll(parts[1]);
  if (spec.nx < 1) throw CLI::ValidationError("--gen nx must be >= 1");
  return spec;
}

struct PrecSpec {
  std::string form = "none";  // none | newton | chebyshev
  int nlev = 0;
  int m = 0;
  double scale = 1.0;
};

PrecSpec parse_prec(const std::string& s) {
  PrecSpec spec;
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const auto kv = parse_kv(colon == std::string::npos ? "" : s.substr(colon + 1));
  auto get = [&](const char* key, double dflt) {
    const auto it = kv.find(key);
    return it == kv.end() ? dflt : std::stod(it->second);
  };
  if (head == "none") {
    spec.form = "none";
  } else if (head == "jacobi") {
    // Jacobi-equivalent: degree-0 polynomial on the scaled system.
    spec.form = "chebyshev";
    spec.m = 0;
    spec.scale = get("scale", 1.0);
  } else if (head == "newton") {
    spec.form = "newton";
    spec.nlev = static_cast<int>(get("nlev", 0));
    spec.m = (1 << spec.nlev) - 1;
    spec.scale = get("scale", 1.0);
  } else if (head == "chebyshev") {
    spec.form = "chebyshev";
    spec.m = static_cast<int>(get("m", 0));
    spec.scale = get("scale", 1.0);
  } else {
    throw CLI::ValidationError("--prec must be none, jacobi, newton:nlev=L[,scale=S] or "
                               "chebyshev:m=M[,scale=S]");
  }
  return spec;
}

struct EigSpec {
  std::string mode;  // analytic | power+dacg (empty: default per problem)
  EigOptions power{1e-4, 200, 20240801};
  EigOptions dacg{1e-2, 5000, 20240801};
};

EigSpec parse_eigs(const std::string& s) {
  EigSpec spec;
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const auto kv = parse_kv(colon == std::string::npos ? "" : s.substr(colon + 1));
  if (head == "analytic") {
    spec.mode = "analytic";
  } else if (head == "power+dacg") {
    spec.mode = "power+dacg";
    for (const auto& [key, value] : kv) {
      if (key == "ptol") spec.power.tol = std::stod(value);
      else if (key == "pmaxit") spec.power.maxit = std::stoi(value);
      else if (key == "dtol") spec.dacg.tol = std::stod(value);
      else if (key == "dmaxit") spec.dacg.maxit = std::stoi(value);
      else if (key == "seed") spec.power.seed = spec.dacg.seed = std::stoull(value);
      else throw CLI::ValidationError("--eigs: unknown key '" + key + "'");
    }
  } else {
    throw CLI::ValidationError("--eigs must be analytic or power+dacg[:k=v,...]");
  }
  return spec;
}

struct RhsSpec {
  SolutionKind kind = SolutionKind::ones;
  std::uint64_t seed = 20240801;
};

RhsSpec parse_rhs(const std::string& s) {
  RhsSpec spec;
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const auto kv = parse_kv(colon == std::string::npos ? "" : s.substr(colon + 1));
  if (head == "ones") spec.kind = SolutionKind::ones;
  else if (head == "flat") spec.kind = SolutionKind::flat;
  else if (head == "random") spec.kind = SolutionKind::random;
  else throw CLI::ValidationError("--rhs must be ones, flat or random[:seed=N]");
  const auto it = kv.find("seed");
  if (it != kv.end()) spec.seed = std::stoull(it->second);
  return spec;
}

std::string rhs_to_string(const RhsSpec& r) {
  switch (r.kind) {
    case SolutionKind::ones: return "ones";
    case SolutionKind::flat: return "flat";
    case SolutionKind::random: return "random:seed=" + std::to_string(r.seed);
  }
  return "ones";
}

// --- experiment pipeline ---------------------------------------------------

struct Problem {
  std::unique_ptr<LinearOperator> inner;
  std::unique_ptr<ScaledOperator> scaled;
  Vector inv_sqrt_diag;
  ProblemSpec spec;
};

Problem build_problem(const ProblemSpec& spec) {
  Problem problem;
  problem.spec = spec;
  if (spec.generated) {
    problem.inner = fd_laplacian(spec.kind, spec.nx, spec.form);
  } else {
    problem.inner = std::make_unique<CsrMatrix>(load_matrix_market(spec.matrix_path));
  }
  auto [scaled, inv_sqrt] = jacobi_scale(*problem.inner);
  problem.scaled = std::make_unique<ScaledOperator>(std::move(scaled));
  problem.inv_sqrt_diag = std::move(inv_sqrt);
  return problem;
}

struct BoundsResult {
  double alpha0 = 0.0;
  double beta0 = 0.0;
  json detail;
};

BoundsResult resolve_bounds(const Problem& problem, const EigSpec& eigs) {
  BoundsResult res;
  std::string mode = eigs.mode;
  if (mode.empty()) mode = problem.spec.generated ? "analytic" : "power+dacg";
  if (mode == "analytic") {
    if (!problem.spec.generated) {
      throw std::invalid_argument("--eigs analytic requires a generated problem");
    }
    const auto [a0, b0] = analytic_extremes(problem.spec.kind, problem.spec.nx, true);
    res.alpha0 = a0;
    res.beta0 = b0;
    res.detail = {{"mode", "analytic"}, {"alpha0", a0}, {"beta0", b0}};
  } else {
    const SpectralBounds bounds = estimate_bounds(*problem.scaled, eigs.power, eigs.dacg);
    res.alpha0 = bounds.alpha0;
    res.beta0 = bounds.beta0;
    res.detail = {{"mode", "power+dacg"},
                  {"alpha0", bounds.alpha0},
                  {"beta0", bounds.beta0},
                  {"alpha_iters", bounds.alpha_iters},
                  {"beta_iters", bounds.beta_iters},
                  {"matvecs", bounds.matvecs},
                  {"alpha_converged", bounds.alpha_converged},
                  {"beta_converged", bounds.beta_converged},
                  {"power_tol", eigs.power.tol},
                  {"dacg_tol", eigs.dacg.tol},
                  {"seed", eigs.power.seed}};
  }
  return res;
}

std::unique_ptr<Preconditioner> build_prec(const PrecSpec& spec, double alpha0, double beta0,
                                           json* params_json) {
  if (spec.form == "none") {
    if (params_json) *params_json = nullptr;
    return nullptr;
  }
  if (spec.form == "newton") {
    NewtonParams params = newton_params(alpha0, beta0, spec.nlev, spec.scale);
    if (params_json) {
      *params_json = {{"form", "newton"}, {"nlev", params.nlev}, {"degree", params.degree()},
                      {"scale", params.scale}, {"zeta", params.zeta}};
    }
    return std::make_unique<NewtonPreconditioner>(std::move(params));
  }
  ChebyshevParams params = cheb_params(alpha0, beta0, spec.m, spec.scale);
  if (params_json) {
    *params_json = {{"form", "chebyshev"}, {"m", params.m},     {"scale", params.scale},
                    {"theta", params.theta}, {"delta", params.delta}, {"sigma", params.sigma},
                    {"rho", params.rho}};
  }
  return std::make_unique<ChebyshevPreconditioner>(std::move(params));
}

Vector make_solution(const Problem& problem, const RhsSpec& rhs) {
  const Index n = problem.scaled->size();
  switch (rhs.kind) {
    case SolutionKind::ones: return Vector::Ones(n);
    case SolutionKind::flat:
      if (!problem.spec.generated) {
        throw std::invalid_argument("--rhs flat requires a generated problem");
      }
      return flat_spectrum_vector(problem.spec.kind, problem.spec.nx);
    case SolutionKind::random: return random_uniform_vector(n, rhs.seed);
  }
  return Vector::Ones(n);
}

json problem_json(const ProblemSpec& spec, Index n) {
  json j;
  if (spec.generated) {
    j["generator"] = spec.kind == StencilKind::lap2d ? "lap2d" : "lap3d";
    j["nx"] = spec.nx;
    j["form"] = spec.form == OperatorForm::stencil ? "stencil" : "assembled";
  } else {
    j["matrix"] = spec.matrix_path;
  }
  j["n"] = n;
  j["jacobi_scaled"] = true;
  return j;
}

json report_json(const SolveReport& report) {
  return {{"iters", report.iters},
          {"ddot", report.ddot},
          {"matvec", report.matvec},
          {"prec_applies", report.prec_applies},
          {"rel_res", report.rel_res},
          {"true_rel_res", report.true_rel_res},
          {"wall_time", report.wall_time},
          {"converged", report.converged}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
}

// --- subcommand state ------------------------------------------------------

struct SolveArgs {
  std::string gen, matrix, prec = "none", eigs, rhs = "ones", out, from_report;
  std::string form = "stencil";
  double tol = 1e-8;
  int maxit = 20000;
  int repeat = 1;
  int threads = 0;
};

int run_solve(const SolveArgs& args);

int run_solve_from_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open report");
  json j = json::parse(in);
  if (!j.contains("config") || !j.contains("problem")) {
    throw std::runtime_error(path + ": report carries no embedded config");
  }
  SolveArgs args;
  const auto& p = j["problem"];
  if (p.contains("generator")) {
    args.gen = p["generator"].get<std::string>() + ":" + std::to_string(p["nx"].get<Index>());
    args.form = p.value("form", "stencil");
  } else {
    args.matrix = p["matrix"].get<std::string>();
  }
  const auto& c = j["config"];
  args.prec = c["prec_spec"].get<std::string>();
  args.eigs = c["eigs_spec"].get<std::string>();
  args.rhs = c["rhs"].get<std::string>();
  args.tol = c["tol"].get<double>();
  args.maxit = c["maxit"].get<int>();
  args.threads = c.value("threads", 1);
  return run_solve(args);
}

int run_solve(const SolveArgs& args) {
  if (!args.from_report.empty()) return run_solve_from_report(args.from_report);
  if (args.gen.empty() == args.matrix.empty()) {
    throw CLI::ValidationError("solve needs exactly one of --gen or --matrix");
  }
  if (args.threads > 0) set_apply_threads(args.threads);

  ProblemSpec pspec;
  if (!args.gen.empty()) {
    pspec = parse_gen(args.gen);
    pspec.form = args.form == "assembled" ? OperatorForm::assembled : OperatorForm::stencil;
  } else {
    pspec.matrix_path = args.matrix;
  }
  const PrecSpec prec_spec = parse_prec(args.prec);
  const EigSpec eig_spec = args.eigs.empty() ? EigSpec{} : parse_eigs(args.eigs);
  const RhsSpec rhs_spec = parse_rhs(args.rhs);

  Problem problem = build_problem(pspec);
  const BoundsResult bounds =
      prec_spec.form == "none" ? BoundsResult{0, 0, {{"mode", "unused"}}}
                               : resolve_bounds(problem, eig_spec);

  json params_json;
  auto prec = build_prec(prec_spec, bounds.alpha0, bounds.beta0, &params_json);

  const Vector exact = make_solution(problem, rhs_spec);
  const Vector b = problem.scaled->apply(exact);

  SolveOptions opts;
  opts.tol = args.tol;
  opts.maxit = args.maxit;

  SolveReport report;
  Vector x;
  std::vector<double> wall_times;
  for (int rep = 0; rep < std::max(1, args.repeat); ++rep) {
    auto [sol, rep_report] = pcg_solve(*problem.scaled, b, opts, prec.get());
    x = std::move(sol);
    report = rep_report;
    wall_times.push_back(rep_report.wall_time);
  }
  const double err_inf = (x - exact).lpNorm<Eigen::Infinity>();

  std::string eigs_spec_str = args.eigs;
  if (eigs_spec_str.empty()) eigs_spec_str = pspec.generated ? "analytic" : "power+dacg";

  json j;
  j["schema"] = 1;
  j["command"] = "solve";
  j["problem"] = problem_json(pspec, problem.scaled->size());
  j["config"] = {{"tol", args.tol},
                 {"maxit", args.maxit},
                 {"prec_spec", args.prec},
                 {"eigs_spec", eigs_spec_str},
                 {"rhs", rhs_to_string(rhs_spec)},
                 {"threads", apply_threads()},
                 {"repeat", std::max(1, args.repeat)}};
  j["eigs"] = bounds.detail;
  j["params"] = params_json;
  j["result"] = report_json(report);
  j["result"]["solution_error_inf"] = err_inf;
  j["result"]["wall_times"] = wall_times;

  if (!args.out.empty()) write_text(args.out, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";

  if (!report.converged) {
    std::cerr << "solve: not converged after " << report.iters
              << " iterations (rel_res = " << report.rel_res << ")\n";
    return kExitNumerical;
  }
  return 0;
}

std::string table1_csv(Index nx, double scale, double tol, const RhsSpec& rhs) {
  TableOptions opts;
  opts.tol = tol;
  opts.solution = rhs.kind;
  opts.seed = rhs.seed;
  const std::vector<int> degrees = {0, 1, 3, 7, 15, 31};

  std::ostringstream out;
  out << "# table1 nx=" << nx << " tol=" << tol << " rhs=" << rhs_to_string(rhs) << "\n";
  for (const double block_scale : {1.0, scale}) {
    out << "# block: " << (block_scale == 1.0 ? "original" : "theta-scaled")
        << " scale=" << block_scale << "\n";
    out << "m,iter,mu_max,mu_min,l,kappa\n";
    for (const auto& row : spectrum_table(nx, degrees, block_scale, opts)) {
      out << row.m << "," << row.iters << "," << fmt17(row.mu_max) << "," << fmt17(row.mu_min)
          << "," << row.l << "," << fmt17(row.kappa) << "\n";
    }
  }
  return out.str();
}

struct SweepArgs {
  std::string gen, matrix, degrees = "0,1,3,7,15,31,63", nlevs, eigs, rhs = "ones", out;
  std::string form = "stencil";
  double scale = 1.001;
  double tol = 1e-8;
  int maxit = 100000;
  int threads = 0;
};

int run_sweep(const SweepArgs& args) {
  if (args.gen.empty() == args.matrix.empty()) {
    throw CLI::ValidationError("sweep needs exactly one of --gen or --matrix");
  }
  if (args.threads > 0) set_apply_threads(args.threads);

  ProblemSpec pspec;
  if (!args.gen.empty()) {
    pspec = parse_gen(args.gen);
    pspec.form = args.form == "assembled" ? OperatorForm::assembled : OperatorForm::stencil;
  } else {
    pspec.matrix_path = args.matrix;
  }
  std::vector<int> degrees;
  if (!args.nlevs.empty()) {
    for (const auto& part : split(args.nlevs, ',')) degrees.push_back((1 << std::stoi(part)) - 1);
  } else {
    for (const auto& part : split(args.degrees, ',')) degrees.push_back(std::stoi(part));
  }

  Problem problem = build_problem(pspec);
  const EigSpec eig_spec = args.eigs.empty() ? EigSpec{} : parse_eigs(args.eigs);
  const BoundsResult bounds = resolve_bounds(problem, eig_spec);
  const RhsSpec rhs_spec = parse_rhs(args.rhs);
  const Vector exact = make_solution(problem, rhs_spec);
  const Vector b = problem.scaled->apply(exact);

  SolveOptions opts;
  opts.tol = args.tol;
  opts.maxit = args.maxit;

  std::ostringstream csv;
  csv << "m,iter,ddot,matvec,true_rel_res,time\n";
  bool all_converged = true;
  for (const int m : degrees) {
    ChebyshevPreconditioner prec(cheb_params(bounds.alpha0, bounds.beta0, m, args.scale));
    const auto [x, report] = pcg_solve(*problem.scaled, b, opts, &prec);
    all_converged = all_converged && report.converged;
    csv << m << "," << report.iters << "," << report.ddot << "," << report.matvec << ","
        << fmt17(report.true_rel_res) << "," << report.wall_time << "\n";
    std::cerr << "sweep: m=" << m << " iters=" << report.iters
              << (report.converged ? "" : " (NOT CONVERGED)") << "\n";
  }
  if (!args.out.empty()) write_text(args.out, csv.str());
  else std::cout << csv.str();
  return all_converged ? 0 : kExitNumerical;
}

int run_scaling(const std::vector<std::string>& recs, const std::string& out) {
  std::vector<ScalingRecord> records;
  int n0 = 0;
  double t_n0 = 0.0;
  for (const auto& r : recs) {
    const auto parts = split(r, ':');
    if (parts.size() != 2) throw CLI::ValidationError("scaling record must be p:T");
    const int p = std::stoi(parts[0]);
    const double t = std::stod(parts[1]);
    if (records.empty()) {
      n0 = p;
      t_n0 = t;
    }
    records.push_back({p, t, n0, t_n0});
  }
  const std::vector<ScalingPoint> points = compute_scaling(records);
  std::ostringstream csv;
  csv << "p,T_p,S_p,E_p\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    csv << points[k].p << "," << records[k].t_p << "," << fmt17(points[k].speedup) << ","
        << fmt17(points[k].efficiency) << "\n";
  }
  if (!out.empty()) write_text(out, csv.str());
  else std::cout << csv.str();
  return 0;
}

int run_weak(const std::vector<std::string>& recs, const std::string& out) {
  std::vector<WeakPoint> points;
  for (const auto& r : recs) {
    const auto parts = split(r, ':');
    if (parts.size() != 3) throw CLI::ValidationError("weak record must be nx:p:T");
    points.push_back({std::stoll(parts[0]), std::stoi(parts[1]), std::stod(parts[2])});
  }
  std::ostringstream csv;
  csv << "nx_from,p_from,nx_to,p_to,T_from,T_to,observed_ratio,ideal_ratio\n";
  for (const auto& rr : weak_scaling_check(points)) {
    csv << rr.from.nx << "," << rr.from.p << "," << rr.to.nx << "," << rr.to.p << ","
        << rr.from.t << "," << rr.to.t << "," << fmt17(rr.observed) << "," << fmt17(rr.ideal)
        << "\n";
  }
  if (!out.empty()) write_text(out, csv.str());
  else std::cout << csv.str();
  return 0;
}

int run_spectrum(Index nx, const std::string& degrees, double scale, const std::string& prefix) {
  const auto [alpha0, beta0] = analytic_extremes(StencilKind::lap2d, nx, true);
  const Vector eigs = analytic_spectrum(StencilKind::lap2d, nx, true);
  for (const auto& part : split(degrees, ',')) {
    const int m = std::stoi(part);
    const ChebyshevParams params = cheb_params(alpha0, beta0, m, scale);
    const std::string path = prefix + "_m" + std::to_string(m) + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "s,lambda,mu\n";
    for (Index s = 0; s < eigs.size(); ++s) {
      const double lam = eigs[s];
      out << (s + 1) << "," << fmt17(lam) << "," << fmt17(lam * eval_poly(params, lam)) << "\n";
    }
    std::cout << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newton-Chebyshev polynomial-preconditioned CG benchmark harness"};
  app.require_subcommand(1);

  const char* env_threads = std::getenv("POLYCG_THREADS");
  if (env_threads) set_apply_threads(std::atoi(env_threads));

  // solve
  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "run one configured solve, emit a JSON report");
  solve->add_option("--gen", solve_args.gen, "generated problem, kind:nx (lap2d:78)");
  solve->add_option("--matrix", solve_args.matrix, "MatrixMarket .mtx file");
  solve->add_option("--form", solve_args.form, "stencil|assembled (generated problems)")
      ->check(CLI::IsMember({"stencil", "assembled"}));
  solve->add_option("--prec", solve_args.prec,
                    "none|jacobi|newton:nlev=L[,scale=S]|chebyshev:m=M[,scale=S]");
  solve->add_option("--eigs", solve_args.eigs, "analytic|power+dacg[:ptol=,dtol=,seed=,...]");
  solve->add_option("--rhs", solve_args.rhs, "exact solution: ones|flat|random[:seed=N]");
  solve->add_option("--tol", solve_args.tol, "relative residual tolerance");
  solve->add_option("--maxit", solve_args.maxit, "iteration cap");
  solve->add_option("--repeat", solve_args.repeat, "solve repetitions (sequential)");
  solve->add_option("--threads", solve_args.threads, "threads for apply kernels");
  solve->add_option("--out", solve_args.out, "write the JSON report here");
  solve->add_option("--from-report", solve_args.from_report,
                    "rerun the embedded config of a previous report");

  // table1
  Index t1_nx = 78;
  double t1_scale = 1.01, t1_tol = 1e-8;
  std::string t1_out, t1_rhs = "ones";
  auto* table1 = app.add_subcommand("table1", "degree table for the scaled 2D Laplacian, "
                                              "original and theta-scaled blocks");
  table1->add_option("--nx", t1_nx, "interior subdivisions (default 78)");
  table1->add_option("--scale", t1_scale, "theta multiplier of the second block");
  table1->add_option("--tol", t1_tol, "solver tolerance");
  table1->add_option("--rhs", t1_rhs, "exact solution: ones|flat|random[:seed=N]");
  table1->add_option("--out", t1_out, "write CSV here (default stdout)");

  // sweep
  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "degree sweep with counter columns");
  sweep->add_option("--gen", sweep_args.gen, "generated problem, kind:nx");
  sweep->add_option("--matrix", sweep_args.matrix, "MatrixMarket .mtx file");
  sweep->add_option("--form", sweep_args.form, "stencil|assembled")
      ->check(CLI::IsMember({"stencil", "assembled"}));
  sweep->add_option("--degrees", sweep_args.degrees, "comma list of polynomial degrees");
  sweep->add_option("--nlevs", sweep_args.nlevs, "comma list of Newton levels (m = 2^l - 1)");
  sweep->add_option("--scale", sweep_args.scale, "theta multiplier (default 1.001)");
  sweep->add_option("--tol", sweep_args.tol, "solver tolerance");
  sweep->add_option("--maxit", sweep_args.maxit, "iteration cap");
  sweep->add_option("--eigs", sweep_args.eigs, "analytic|power+dacg[:...]");
  sweep->add_option("--rhs", sweep_args.rhs, "exact solution: ones|flat|random[:seed=N]");
  sweep->add_option("--threads", sweep_args.threads, "threads for apply kernels");
  sweep->add_option("--out", sweep_args.out, "write CSV here (default stdout)");

  // scaling
  std::vector<std::string> scaling_recs;
  std::string scaling_out;
  auto* scaling = app.add_subcommand("scaling", "pseudo speedup/efficiency from timings; "
                                                "first record p:T is the baseline");
  scaling->add_option("records", scaling_recs, "p:T pairs")->required()->expected(-1);
  scaling->add_option("--out", scaling_out, "write CSV here");

  // weak
  std::vector<std::string> weak_recs;
  std::string weak_out;
  auto* weak = app.add_subcommand("weak", "weak-scaling ratio report for nx:p:T triples");
  weak->add_option("records", weak_recs, "nx:p:T triples")->required()->expected(-1);
  weak->add_option("--out", weak_out, "write CSV here");

  // gen
  std::string gen_kind = "lap2d", gen_out;
  Index gen_nx = 10;
  auto* gen = app.add_subcommand("gen", "write an assembled FD Laplacian as MatrixMarket");
  gen->add_option("--kind", gen_kind, "lap2d|lap3d")->check(CLI::IsMember({"lap2d", "lap3d"}));
  gen->add_option("--nx", gen_nx, "interior subdivisions")->required();
  gen->add_option("--out", gen_out, "output .mtx path")->required();

  // spectrum
  Index sp_nx = 78;
  double sp_scale = 1.0;
  std::string sp_degrees = "0,1,3,7,15,31", sp_prefix = "spectrum";
  auto* spectrum = app.add_subcommand("spectrum", "CSV of (s, lambda, mu) per degree");
  spectrum->add_option("--nx", sp_nx, "interior subdivisions (default 78)");
  spectrum->add_option("--degrees", sp_degrees, "comma list of degrees");
  spectrum->add_option("--scale", sp_scale, "theta multiplier");
  spectrum->add_option("--out", sp_prefix, "output prefix (files <prefix>_mM.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (table1->parsed()) {
      const std::string csv = table1_csv(t1_nx, t1_scale, t1_tol, parse_rhs(t1_rhs));
      if (!t1_out.empty()) write_text(t1_out, csv);
      else std::cout << csv;
      return 0;
    }
    if (sweep->parsed()) return run_sweep(sweep_args);
    if (scaling->parsed()) return run_scaling(scaling_recs, scaling_out);
    if (weak->parsed()) return run_weak(weak_recs, weak_out);
    if (gen->parsed()) {
      const CsrMatrix m = assemble_laplacian(gen_kind == "lap3d" ? StencilKind::lap3d
                                                                 : StencilKind::lap2d,
                                             gen_nx);
      save_matrix_market(m, gen_out);
      std::cout << gen_out << ": n=" << m.size() << " nnz=" << m.nnz() << "\n";
      return 0;
    }
    if (spectrum->parsed()) return run_spectrum(sp_nx, sp_degrees, sp_scale, sp_prefix);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
