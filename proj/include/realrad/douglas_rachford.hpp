#pragma once

// Douglas-Rachford reflect-reflect-average iteration between the rank-limited
// PSD cone and the affine set {X : op(X) = b}.

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "realrad/linear_operator.hpp"
#include "realrad/projections.hpp"

namespace realrad {

struct DRConfig {
  int max_iters = 20000;
  double res_tol = 1e-13;
  int stall_window = 500;
  double stall_factor = 0.5;
  std::optional<Eigen::Index> rank;  // empty: full rank
  std::uint64_t seed = 0;

  void validate() const {
    if (!(res_tol > 0.0)) throw std::invalid_argument("res_tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (stall_window < 1) throw std::invalid_argument("stall_window must be at least 1");
    if (!(stall_factor > 0.0 && stall_factor < 1.0)) throw std::invalid_argument("stall_factor must lie in (0, 1)");
    if (rank && *rank < 0) throw std::invalid_argument("rank must be non-negative");
  }
};

enum class DRStatus { converged, stalled, budget_exhausted };

inline std::string to_string(DRStatus s) {
  switch (s) {
    case DRStatus::converged: return "converged";
    case DRStatus::stalled: return "stalled";
    case DRStatus::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

struct DRResult {
  Eigen::MatrixXd Y;  // PSD-side iterate with the smallest residual seen
  double residual = 0.0;
  int iterations = 0;
  DRStatus status = DRStatus::budget_exhausted;
  std::vector<double> history;  // residual of the PSD-side iterate at each step
};

struct DRStep {
  Eigen::MatrixXd X_new;
  Eigen::MatrixXd Y;  // P_psd(X, r)
};

/// One step: R = 2 P_psd(X, r) - X, Z = 2 P_aff(R) - R, X_new = (X + Z) / 2.
inline DRStep dr_step(const Eigen::MatrixXd& X, const LinearOperator& op, Eigen::Index r) {
  op.check_dim(X);
  Eigen::MatrixXd Y = project_psd(X, r);
  Eigen::MatrixXd R = 2.0 * Y - X;
  Eigen::MatrixXd Z = 2.0 * project_affine(R, op) - R;
  return {symmetrized(0.5 * (X + Z)), std::move(Y)};
}

/// Identity plus a seeded random symmetric matrix of unit Frobenius norm.
inline Eigen::MatrixXd default_start(Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd N(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) N(i, j) = N(j, i) = gauss(rng);
  double nrm = N.norm();
  if (nrm > 0) N /= nrm;
  return Eigen::MatrixXd::Identity(k, k) + N;
}

inline DRResult dr_solve(const LinearOperator& op, const DRConfig& cfg,
                         std::optional<Eigen::MatrixXd> X0 = std::nullopt) {
  cfg.validate();
  const Eigen::Index k = op.dim();
  const Eigen::Index r = cfg.rank ? std::min(*cfg.rank, k) : k;
  Eigen::MatrixXd X = X0 ? symmetrized(*X0) : default_start(k, cfg.seed);
  op.check_dim(X);

  DRResult out;
  out.residual = std::numeric_limits<double>::infinity();
  std::vector<double> best;  // best residual after each iteration
  best.reserve(static_cast<std::size_t>(std::min(cfg.max_iters, 100000)));

  for (int it = 1; it <= cfg.max_iters; ++it) {
    auto step = dr_step(X, op, r);
    X = std::move(step.X_new);
    const double res = residual(op, step.Y);
    out.history.push_back(res);
    if (res < out.residual) {
      out.residual = res;
      out.Y = std::move(step.Y);
    }
    out.iterations = it;
    best.push_back(out.residual);
    if (out.residual <= cfg.res_tol) {
      out.status = DRStatus::converged;
      return out;
    }
    if (it > cfg.stall_window) {
      const double before = best[static_cast<std::size_t>(it - 1 - cfg.stall_window)];
      if (out.residual > (1.0 - cfg.stall_factor) * before) {
        out.status = DRStatus::stalled;
        return out;
      }
    }
  }
  out.status = DRStatus::budget_exhausted;
  return out;
}

}  // namespace realrad
