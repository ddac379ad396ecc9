#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "realrad/douglas_rachford.hpp"

namespace realrad {

/// Every tolerance, budget and rank heuristic used by the pipeline.
struct SolverConfig {
  unsigned degree = 0;

  // Douglas-Rachford
  double res_tol = 1e-13;         // a DR stage succeeds when its best residual is <= res_tol
  double polish_tol = 1e-15;      // DR stages keep iterating toward this before stopping
  int max_dr_iters = 20000;
  int stall_window = 500;
  double stall_factor = 0.5;
  std::uint64_t seed = 0;

  // Spectral decisions
  double gap_factor = 1e-3;      // rank cut on a relative eigenvalue drop
  double abs_floor = 1e-8;       // eigenvalues below abs_floor * lambda_max count as zero
  double nullspace_tol = 1e-8;   // nullspace of exposing vectors
  double ker_tol = 1e-6;         // kernel of the final moment matrix
  double pd_tol = 1e-7;          // lambda_min(P) >= pd_tol * lambda_max(P) on the minimal face
  double span_tol = 1e-6;        // linear (in)dependence of kernel polynomials
  int max_rank_cuts = 6;         // retries per exposing-vector search
  int max_outer = 10;            // outer iterations of the radical loop

  /// Facial-reduction step (1 = the B B^T step) -> ranks tried in order for
  /// the auxiliary solve of that step, before any automatic cut.
  std::map<int, std::vector<Eigen::Index>> rank_overrides;

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
    };
    positive(res_tol, "res_tol");
    positive(polish_tol, "polish_tol");
    positive(gap_factor, "gap_factor");
    positive(abs_floor, "abs_floor");
    positive(nullspace_tol, "nullspace_tol");
    positive(ker_tol, "ker_tol");
    positive(pd_tol, "pd_tol");
    positive(span_tol, "span_tol");
    if (max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");
    if (max_rank_cuts < 0) throw std::invalid_argument("max_rank_cuts must be non-negative");
    for (const auto& [step, ranks] : rank_overrides) {
      if (step < 2) throw std::invalid_argument("rank overrides apply to steps >= 2");
      for (auto r : ranks)
        if (r < 1) throw std::invalid_argument("override rank must be positive");
    }
    dr(std::nullopt, 0).validate();
  }

  DRConfig dr(std::optional<Eigen::Index> rank, std::uint64_t salt) const {
    DRConfig c;
    c.max_iters = max_dr_iters;
    c.res_tol = std::min(polish_tol, res_tol);
    c.stall_window = stall_window;
    c.stall_factor = stall_factor;
    c.rank = rank;
    c.seed = seed + salt;
    return c;
  }
};

}  // namespace realrad
