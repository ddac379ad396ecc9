#pragma once

// Facial reduction on the primal: shrink the PSD cone to the minimal face
// containing the feasible set by repeated exposing vectors, then solve the
// strictly feasible reduced problem for a maximum-rank point.

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "realrad/config.hpp"
#include "realrad/douglas_rachford.hpp"
#include "realrad/errors.hpp"
#include "realrad/linear_operator.hpp"
#include "realrad/moment_problem.hpp"
#include "realrad/projections.hpp"

namespace realrad {

/// The face { U M U^T : M psd } of the PSD cone; U has orthonormal columns.
struct Face {
  Eigen::MatrixXd U;
  Eigen::Index dim() const { return U.cols(); }
};

/// One Douglas-Rachford run inside facial reduction.
struct StageRun {
  int step = 0;            // facial reduction step (0 = final primal solve, -1 = polish)
  Eigen::Index rank = 0;   // rank used in the PSD projection
  int iterations = 0;      // total DR steps taken
  int iterations_to_tol = 0;  // first step whose residual was <= res_tol (0: never)
  double residual = 0.0;
  DRStatus status = DRStatus::budget_exhausted;
  std::vector<double> history;

  bool accepted() const { return iterations_to_tol > 0; }
};

inline StageRun make_stage_run(int step, Eigen::Index rank, DRResult res, double res_tol) {
  StageRun run{step, rank, res.iterations, 0, res.residual, res.status, std::move(res.history)};
  for (std::size_t i = 0; i < run.history.size(); ++i)
    if (run.history[i] <= res_tol) {
      run.iterations_to_tol = static_cast<int>(i) + 1;
      break;
    }
  return run;
}

struct FRTrace {
  std::vector<Eigen::Index> face_sizes;  // k, then the face size after each reduction
  std::vector<double> aux_residuals;     // one per auxiliary-found exposing vector
  std::vector<int> aux_iterations;
  std::vector<Eigen::Index> aux_ranks;
  double primal_residual = 0.0;          // ||A(X) - b|| of the lifted solution
  int primal_iterations = 0;
  int polish_iterations = 0;             // rank-limited DR on the full operator after the reduced solve
  Eigen::Index final_rank = 0;
  int search_iterations = 0;             // DR steps spent on unsuccessful searches
  std::vector<StageRun> runs;            // every DR run, in order (not serialized)

  int reductions() const { return face_sizes.empty() ? 0 : static_cast<int>(face_sizes.size()) - 1; }
  /// Upper bound on the singularity degree after the B B^T step: the number
  /// of auxiliary reductions this run needed.
  int singularity_degree_bound() const { return static_cast<int>(aux_ranks.size()); }
  int productive_iterations() const {
    int s = primal_iterations + polish_iterations;
    for (int i : aux_iterations) s += i;
    return s;
  }

  bool operator==(const FRTrace& o) const {
    return face_sizes == o.face_sizes && aux_residuals == o.aux_residuals && aux_iterations == o.aux_iterations &&
           aux_ranks == o.aux_ranks && primal_residual == o.primal_residual &&
           primal_iterations == o.primal_iterations &&
           polish_iterations == o.polish_iterations && final_rank == o.final_rank &&
           search_iterations == o.search_iterations;
  }
};

/// op restricted to the face: constraint matrices U^T A_i U, same rhs.
inline LinearOperator restrict_operator(const LinearOperator& op, const Eigen::MatrixXd& U) {
  if (U.rows() != op.dim()) throw std::invalid_argument("restrict_operator: U has wrong row count");
  const Eigen::Index r = U.cols();
  Eigen::MatrixXd rep(op.size(), r * r);
  for (Eigen::Index i = 0; i < op.size(); ++i)
    rep.row(i) = vec(symmetrized(U.transpose() * op.constraint(i) * U)).transpose();
  return LinearOperator(std::move(rep), op.rhs());
}

/// Z = B B^T, which exposes the face {X : B^T X = 0}.
inline Eigen::MatrixXd first_exposing_vector(const Eigen::MatrixXd& B) {
  if (B.size() == 0 || B.isZero(0.0)) throw std::invalid_argument("first_exposing_vector: B is zero");
  return B * B.transpose();
}

/// The auxiliary problem {Z : L vec(Z) = R, Z psd} with
/// L = [b^T (A^T)^+ ; I - A^T (A^T)^+ ; vec(I)^T] and R = [0; 0; 1]:
/// Z lies in range(A*), the multiplier y = (A^T)^+ vec(Z) has b^T y = 0, and
/// trace(Z) = 1.
inline LinearOperator build_auxiliary(const LinearOperator& op) {
  const Eigen::Index r = op.dim();
  const Eigen::Index n2 = r * r;
  const auto& P = op.projector();
  Eigen::MatrixXd L(n2 + 2, n2);
  L.row(0) = (P.pinv * op.rhs()).transpose();  // b^T (A^T)^+ = (A^+ b)^T
  L.middleRows(1, n2) = Eigen::MatrixXd::Identity(n2, n2) - P.Q * P.Q.transpose();
  L.row(n2 + 1) = vec(Eigen::MatrixXd::Identity(r, r)).transpose();
  Eigen::VectorXd R = Eigen::VectorXd::Zero(n2 + 2);
  R(n2 + 1) = 1.0;
  return LinearOperator(std::move(L), std::move(R));
}

struct Exposure {
  Eigen::MatrixXd Z;  // psd, trace 1, in the coordinates of the searched face
  double residual = 0.0;
  int iterations = 0;
  Eigen::Index rank = 0;
};

struct ExposureSearch {
  std::optional<Exposure> exposure;
  int wasted_iterations = 0;
  std::vector<StageRun> runs;
};

/// Looks for a nonzero exposing vector of the face on which `op` lives.
///
/// Starts at the first override rank (or full rank); after each failed DR
/// run the rank is cut to the next override, or else to the gap rank of the
/// best iterate's spectrum (at least one below the current rank). Gives up
/// after cfg.max_rank_cuts cuts: the face is then taken as minimal.
inline ExposureSearch find_exposing_vector(const LinearOperator& op, const SolverConfig& cfg,
                                           const std::vector<Eigen::Index>& overrides = {}, int step = 0) {
  ExposureSearch out;
  const Eigen::Index r = op.dim();
  if (r == 0) return out;
  const LinearOperator aux = build_auxiliary(op);

  std::size_t next_override = 0;
  Eigen::Index rank = r;
  if (!overrides.empty()) rank = std::min(overrides[next_override++], r);

  for (int attempt = 0; attempt <= cfg.max_rank_cuts; ++attempt) {
    DRResult res = dr_solve(aux, cfg.dr(rank, 1000u * static_cast<unsigned>(step) + static_cast<unsigned>(attempt)),
                            Eigen::MatrixXd::Identity(r, r) / static_cast<double>(r));
    Eigen::MatrixXd Y = std::move(res.Y);
    StageRun run = make_stage_run(step, rank, std::move(res), cfg.res_tol);
    const bool ok = run.accepted();
    out.runs.push_back(std::move(run));
    if (ok) {
      out.exposure = Exposure{std::move(Y), out.runs.back().residual, out.runs.back().iterations_to_tol, rank};
      return out;
    }
    out.wasted_iterations += out.runs.back().iterations;
    Eigen::Index next;
    if (next_override < overrides.size()) {
      next = std::min(overrides[next_override++], r);
    } else {
      auto ed = eigen_decompose(Y);
      Eigen::VectorXd vals = ed.values.cwiseMax(0.0);
      next = std::min(numerical_rank(vals, cfg.gap_factor, cfg.abs_floor), rank - 1);
    }
    if (next < 1) break;
    rank = next;
  }
  return out;
}

struct ReducedProblem {
  Face face;
  LinearOperator op;  // the moment operator restricted to the face
  FRTrace trace;
};

inline Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& M) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(M.rows(), M.cols());
  // Keep the orientation of M's columns.
  for (Eigen::Index j = 0; j < Q.cols(); ++j)
    if (Q.col(j).dot(M.col(j)) < 0) Q.col(j) *= -1.0;
  return Q;
}

/// Computes the minimal face of the PSD cone containing the feasible set.
/// Step 1 uses Z = B B^T; later steps solve the auxiliary problem until it
/// has no solution.
inline ReducedProblem reduce_to_minimal_face(const MomentProblem& problem, const SolverConfig& cfg) {
  cfg.validate();
  const Eigen::Index k = problem.op.dim();
  ReducedProblem out;
  out.trace.face_sizes.push_back(k);
  Eigen::MatrixXd U = Eigen::MatrixXd::Identity(k, k);

  Eigen::MatrixXd V = numerical_nullspace(first_exposing_vector(problem.B), cfg.nullspace_tol);
  if (V.cols() == 0) throw SolverError("face collapsed to {0} at step 1: the problem is infeasible");
  U = V;
  out.trace.face_sizes.push_back(U.cols());
  LinearOperator op = restrict_operator(problem.op, U);

  for (int step = 2; step <= k; ++step) {
    auto it = cfg.rank_overrides.find(step);
    ExposureSearch search =
        find_exposing_vector(op, cfg, it == cfg.rank_overrides.end() ? std::vector<Eigen::Index>{} : it->second, step);
    out.trace.search_iterations += search.wasted_iterations;
    for (auto& run : search.runs) out.trace.runs.push_back(std::move(run));
    if (!search.exposure) break;

    const Exposure& ex = *search.exposure;
    V = numerical_nullspace(ex.Z, cfg.nullspace_tol);
    if (V.cols() == 0)
      throw SolverError("face collapsed to {0} at step " + std::to_string(step) + ": the problem is infeasible");
    if (V.cols() == U.cols()) break;  // numerically zero exposing vector: no progress
    out.trace.aux_residuals.push_back(ex.residual);
    out.trace.aux_iterations.push_back(ex.iterations);
    out.trace.aux_ranks.push_back(ex.rank);
    U = orthonormalize(U * V);
    out.trace.face_sizes.push_back(U.cols());
    op = restrict_operator(problem.op, U);
  }
  out.face = Face{std::move(U)};
  out.op = std::move(op);
  return out;
}

struct MaxRankSolution {
  Eigen::MatrixXd X;  // the moment matrix U P U^T
  Eigen::MatrixXd P;  // positive definite point of the reduced problem
  Face face;
  FRTrace trace;
};

/// Maximum-rank feasible point: reduce to the minimal face, then solve the
/// reduced problem at full rank and require P to be positive definite.
/// If the lifted X = U P U^T misses res_tol on the original operator, it is
/// polished by rank-r DR on that operator, started from X.
inline MaxRankSolution solve_max_rank(const MomentProblem& problem, const SolverConfig& cfg) {
  ReducedProblem red = reduce_to_minimal_face(problem, cfg);
  const Eigen::Index r = red.face.dim();
  DRResult res = dr_solve(red.op, cfg.dr(std::nullopt, 7u));
  Eigen::MatrixXd Y = std::move(res.Y);
  red.trace.runs.push_back(make_stage_run(0, r, std::move(res), cfg.res_tol));
  {
    const StageRun& run = red.trace.runs.back();
    red.trace.primal_iterations = run.accepted() ? run.iterations_to_tol : run.iterations;
  }

  const std::vector<Eigen::Index> faces = red.trace.face_sizes;
  auto sizes = [&] {
    std::ostringstream os;
    for (auto s : faces) os << s << ' ';
    return os.str();
  };
  auto ed = eigen_decompose(Y);
  const double lmax = ed.values(0), lmin = ed.values(ed.values.size() - 1);
  if (!(lmin >= cfg.pd_tol * lmax)) {
    std::ostringstream os;
    os << "reduced solution is not positive definite (lambda_min " << lmin << ", lambda_max " << lmax
       << ", face sizes " << sizes() << "); a face cut may have been premature";
    throw SolverError(os.str());
  }
  MaxRankSolution out;
  out.X = symmetrized(red.face.U * Y * red.face.U.transpose());
  out.P = std::move(Y);
  out.trace = std::move(red.trace);
  out.trace.final_rank = r;
  out.trace.primal_residual = residual(problem.op, out.X);

  if (out.trace.primal_residual > cfg.res_tol) {
    DRResult pol = dr_solve(problem.op, cfg.dr(r, 9u), out.X);
    Eigen::MatrixXd Xp = symmetrized(pol.Y);
    auto pe = eigen_decompose(Xp);
    const bool keeps_rank = pe.values(r - 1) >= cfg.pd_tol * pe.values(0) &&
                            (r == pe.values.size() || pe.values(r) < cfg.abs_floor * pe.values(0));
    out.trace.runs.push_back(make_stage_run(-1, r, std::move(pol), cfg.res_tol));
    const StageRun& prun = out.trace.runs.back();
    if (prun.residual < out.trace.primal_residual && keeps_rank) {
      out.trace.polish_iterations = prun.accepted() ? prun.iterations_to_tol : prun.iterations;
      out.X = std::move(Xp);
      out.P = symmetrized(red.face.U.transpose() * out.X * red.face.U);
      out.trace.primal_residual = prun.residual;
    }
  }
  if (!(out.trace.primal_residual <= cfg.res_tol)) {
    std::ostringstream os;
    os << "primal solve stopped at residual " << out.trace.primal_residual << " > " << cfg.res_tol
       << " (face sizes " << sizes() << ")";
    throw SolverError(os.str());
  }
  out.face = std::move(red.face);
  return out;
}

}  // namespace realrad
