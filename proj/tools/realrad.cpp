// realrad: truncated real radicals via facial reduction and Douglas-Rachford.

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "realrad/examples.hpp"
#include "realrad/facial_reduction.hpp"
#include "realrad/moment_problem.hpp"
#include "realrad/parse.hpp"
#include "realrad/real_radical.hpp"
#include "realrad/report.hpp"

namespace {

using namespace realrad;

struct Options {
  std::string system_file;
  std::size_t nvars = 0;
  unsigned degree = 0;
  std::vector<std::string> overrides;
  std::string format = "table";
  std::string trace_file;
  bool positive_dim = false;
  bool prolong_system = false;
  SolverConfig cfg;
};

std::map<int, std::vector<Eigen::Index>> parse_overrides(const std::vector<std::string>& specs) {
  std::map<int, std::vector<Eigen::Index>> out;
  for (const auto& s : specs) {
    int step = 0;
    long rank = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d:%ld%c", &step, &rank, &tail) != 2)
      throw std::invalid_argument("bad --rank-override '" + s + "', expected STEP:R");
    out[step].push_back(rank);
  }
  return out;
}

std::vector<Polynomial> read_system(const Options& o) {
  std::ifstream in(o.system_file);
  if (!in) throw std::invalid_argument("cannot read " + o.system_file);
  std::stringstream ss;
  ss << in.rdbuf();
  auto F = parse_system(ss.str(), o.nvars);
  if (F.empty()) throw std::invalid_argument(o.system_file + ": empty polynomial system");
  return F;
}

unsigned degree_for(const Options& o, const std::vector<Polynomial>& F) {
  if (o.degree) return o.degree;
  return static_cast<unsigned>(std::max(1, max_degree(F)));
}

void write_trace(const std::string& path, const std::vector<StageRun>& runs) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out.precision(17);
  out << "iter,residual\n";
  long it = 0;
  for (const auto& r : runs)
    for (double v : r.history) out << ++it << ',' << v << '\n';
}

SolverConfig finish_config(const Options& o, unsigned d) {
  SolverConfig cfg = o.cfg;
  cfg.degree = d;
  cfg.rank_overrides = parse_overrides(o.overrides);
  cfg.validate();
  return cfg;
}

int run_radical(const Options& o) {
  auto F = read_system(o);
  const unsigned d = degree_for(o, F);
  SolverConfig cfg = finish_config(o, d);
  RadicalReport rep = real_radical(F, d, cfg, o.positive_dim);
  std::vector<StageRun> runs;
  for (const auto& t : rep.fr_trace) runs.insert(runs.end(), t.runs.begin(), t.runs.end());
  write_trace(o.trace_file, runs);
  if (o.format == "json")
    std::cout << json(rep).dump(2) << '\n';
  else
    write_table(std::cout, rep);
  return 0;
}

MomentProblem problem_for(const Options& o, const std::vector<Polynomial>& F, unsigned d) {
  return build_moment_problem(o.prolong_system ? prolong(F, d) : F, d);
}

int run_maxrank(const Options& o) {
  auto F = read_system(o);
  const unsigned d = degree_for(o, F);
  SolverConfig cfg = finish_config(o, d);
  MaxRankSolution sol = solve_max_rank(problem_for(o, F, d), cfg);
  write_trace(o.trace_file, sol.trace.runs);
  Eigen::VectorXd ev = eigen_decompose(sol.X).values;
  if (o.format == "json") {
    json j = sol.trace;
    j["eigenvalues"] = std::vector<double>(ev.data(), ev.data() + ev.size());
    std::cout << j.dump(2) << '\n';
  } else {
    write_table(std::cout, {{"maxrank", sol.trace}});
    std::cout << "\neigenvalues:";
    for (Eigen::Index i = 0; i < ev.size(); ++i) std::cout << ' ' << detail::sci(ev(i));
    std::cout << '\n';
  }
  return 0;
}

// One auxiliary solve on the face left by the B B^T step.
int run_aux(const Options& o) {
  auto F = read_system(o);
  const unsigned d = degree_for(o, F);
  SolverConfig cfg = finish_config(o, d);
  MomentProblem problem = problem_for(o, F, d);
  Eigen::MatrixXd V = numerical_nullspace(first_exposing_vector(problem.B), cfg.nullspace_tol);
  if (V.cols() == 0) throw SolverError("face collapsed to {0} at step 1: the problem is infeasible");
  LinearOperator op = restrict_operator(problem.op, V);
  auto it = cfg.rank_overrides.find(2);
  ExposureSearch search =
      find_exposing_vector(op, cfg, it == cfg.rank_overrides.end() ? std::vector<Eigen::Index>{} : it->second, 2);
  write_trace(o.trace_file, search.runs);

  json j{{"face_size", V.cols()}, {"found", search.exposure.has_value()}, {"wasted_iterations", search.wasted_iterations}};
  json attempts = json::array();
  for (const auto& r : search.runs)
    attempts.push_back({{"rank", r.rank},
                        {"iterations", r.iterations},
                        {"residual", r.residual},
                        {"status", to_string(r.status)}});
  j["attempts"] = attempts;
  if (search.exposure) {
    const Exposure& ex = *search.exposure;
    j["residual"] = ex.residual;
    j["iterations"] = ex.iterations;
    j["rank"] = ex.rank;
    j["reduced_face_size"] = numerical_nullspace(ex.Z, cfg.nullspace_tol).cols();
  }
  if (o.format == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "face size after B B^T: " << V.cols() << '\n';
    for (const auto& a : j["attempts"])
      std::cout << "  rank " << a["rank"] << ": " << a["status"].get<std::string>() << ", residual "
                << detail::sci(a["residual"].get<double>()) << " after " << a["iterations"] << " iterations\n";
    if (search.exposure)
      std::cout << "exposing vector of rank " << j["rank"] << " reduces the face to " << j["reduced_face_size"] << '\n';
    else
      std::cout << "no exposing vector found: the face is minimal\n";
  }
  return 0;
}

struct ExampleRun {
  const BuiltinExample* ex;
  MaxRankSolution maxrank;
  RadicalReport radical;
};

int run_examples(const Options& o) {
  std::vector<std::future<ExampleRun>> jobs;
  for (const auto& ex : builtin_examples()) {
    jobs.push_back(std::async(std::launch::async, [&ex, &o] {
      SolverConfig cfg = finish_config(o, ex.degree);
      auto F = ex.polynomials();
      ExampleRun run{&ex, solve_max_rank(build_moment_problem(F, ex.degree), cfg), {}};
      run.radical = real_radical(F, ex.degree, cfg, o.positive_dim);
      return run;
    }));
  }
  std::vector<ExampleRun> runs;
  for (auto& j : jobs) runs.push_back(j.get());

  if (o.format == "json") {
    json out = json::array();
    for (const auto& r : runs)
      out.push_back({{"name", r.ex->name},
                     {"system", r.ex->system},
                     {"reference_face_sizes", r.ex->face_sizes},
                     {"reference_rank", r.ex->rank},
                     {"maxrank", r.maxrank.trace},
                     {"radical", r.radical}});
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  std::vector<TableRow> rows;
  for (const auto& r : runs) rows.push_back({r.ex->name, r.maxrank.trace});
  write_table(std::cout, rows);
  std::cout << '\n';
  for (const auto& r : runs) {
    const bool faces = r.maxrank.trace.face_sizes == r.ex->face_sizes;
    std::cout << r.ex->name << ": " << r.ex->system << "  (d = " << r.ex->degree << ")\n"
              << "  reference face sizes " << detail::joined(r.ex->face_sizes, [](auto v) { return std::to_string(v); })
              << ", rank " << r.ex->rank << (faces && r.maxrank.trace.final_rank == r.ex->rank ? ": match" : ": differ")
              << "\n  real radical generators:";
    for (const auto& g : r.radical.generators) std::cout << "  " << g;
    std::cout << '\n';
  }
  return 0;
}

void add_common(CLI::App* sub, Options& o, bool needs_system) {
  if (needs_system) {
    sub->add_option("--system", o.system_file, "polynomial system file")->required();
    sub->add_option("--nvars", o.nvars, "number of variables")->required()->check(CLI::PositiveNumber);
    sub->add_option("--degree", o.degree, "moment degree d (default: system degree)")->check(CLI::PositiveNumber);
    sub->add_option("--trace", o.trace_file, "write per-iteration residuals as CSV iter,residual");
  }
  sub->add_option("--tol", o.cfg.res_tol, "DR residual tolerance");
  sub->add_option("--polish-tol", o.cfg.polish_tol, "DR iterates toward this before stopping");
  sub->add_option("--max-iters", o.cfg.max_dr_iters, "DR iteration budget per run");
  sub->add_option("--stall-window", o.cfg.stall_window, "stall detection window");
  sub->add_option("--stall-factor", o.cfg.stall_factor, "required relative decrease per window");
  sub->add_option("--seed", o.cfg.seed, "random seed");
  sub->add_option("--gap-factor", o.cfg.gap_factor, "relative eigenvalue drop for rank cuts");
  sub->add_option("--abs-floor", o.cfg.abs_floor, "eigenvalues below this times the largest are zero");
  sub->add_option("--nullspace-tol", o.cfg.nullspace_tol, "nullspace threshold of exposing vectors");
  sub->add_option("--ker-tol", o.cfg.ker_tol, "moment matrix kernel threshold");
  sub->add_option("--pd-tol", o.cfg.pd_tol, "positive definiteness threshold on the minimal face");
  sub->add_option("--span-tol", o.cfg.span_tol, "linear dependence threshold for polynomial spans");
  sub->add_option("--max-rank-cuts", o.cfg.max_rank_cuts, "rank cuts per exposing-vector search");
  sub->add_option("--max-outer", o.cfg.max_outer, "outer iterations of the radical loop");
  sub->add_option("--rank-override", o.overrides, "STEP:R, rank tried at facial reduction step STEP (repeatable)");
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"table", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated real radicals via facial reduction and Douglas-Rachford"};
  app.require_subcommand(1);
  Options o;

  auto* radical = app.add_subcommand("radical", "real radical to degree d");
  add_common(radical, o, true);
  radical->add_flag("--positive-dim", o.positive_dim, "the real variety is known to be positive dimensional");

  auto* maxrank = app.add_subcommand("maxrank", "maximum-rank moment matrix by facial reduction");
  add_common(maxrank, o, true);
  maxrank->add_flag("--prolong", o.prolong_system, "prolong the system to degree d first");

  auto* aux = app.add_subcommand("aux", "one auxiliary solve after the B B^T step");
  add_common(aux, o, true);
  aux->add_flag("--prolong", o.prolong_system, "prolong the system to degree d first");

  auto* examples = app.add_subcommand("examples", "run the four built-in examples");
  add_common(examples, o, false);
  examples->add_flag("--positive-dim", o.positive_dim, "run the completeness check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*radical) return run_radical(o);
    if (*maxrank) return run_maxrank(o);
    if (*aux) return run_aux(o);
    return run_examples(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "realrad: input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "realrad: solver failure: " << e.what() << '\n';
    return 1;
  }
}
