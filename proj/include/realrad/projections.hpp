#pragma once

// Projections onto the (rank-limited) PSD cone and onto affine subspaces,
// plus spectral rank and nullspace helpers.

#include <algorithm>
#include <span>

#include <Eigen/Dense>

#include "realrad/linear_operator.hpp"

namespace realrad {

/// Eigenpairs of a symmetric matrix, eigenvalues sorted descending.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  Eigen::MatrixXd reconstruct() const { return vectors * values.asDiagonal() * vectors.transpose(); }
};

inline EigenDecomposition eigen_decompose(const Eigen::MatrixXd& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(X));
  if (es.info() != Eigen::Success) throw SolverError("symmetric eigensolver failed");
  // Eigen returns ascending order.
  return {es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
}

/// Nearest PSD matrix of rank <= r: keep the r largest positive eigenvalues.
/// Eigenvalues exactly tied with the r-th kept one are kept as well.
inline Eigen::MatrixXd project_psd(const Eigen::MatrixXd& X, Eigen::Index r) {
  if (r < 0 || r > X.rows()) throw std::invalid_argument("project_psd: rank out of range");
  auto ed = eigen_decompose(X);
  Eigen::Index keep = 0;
  while (keep < ed.values.size() && keep < r && ed.values(keep) > 0.0) ++keep;
  while (keep > 0 && keep < ed.values.size() && ed.values(keep) == ed.values(keep - 1)) ++keep;
  const auto V = ed.vectors.leftCols(keep);
  Eigen::MatrixXd P = V * ed.values.head(keep).asDiagonal() * V.transpose();
  return symmetrized(P);
}

/// argmin ||X - Xbar||_F subject to op(X) = b, via the operator's cached
/// pseudoinverse.
inline Eigen::MatrixXd project_affine(const Eigen::MatrixXd& X, const LinearOperator& op) {
  op.check_dim(X);
  return symmetrized(unvec(op.projector().apply(vec(X)), op.dim()));
}

/// Orthonormal eigenvectors of Z with eigenvalue < tol * max(1, lambda_max).
inline Eigen::MatrixXd numerical_nullspace(const Eigen::MatrixXd& Z, double tol) {
  auto ed = eigen_decompose(Z);
  if (ed.values.size() == 0) return Eigen::MatrixXd(0, 0);
  const double cut = tol * std::max(1.0, ed.values(0));
  Eigen::Index first = 0;
  while (first < ed.values.size() && ed.values(first) >= cut) ++first;
  return ed.vectors.rightCols(ed.values.size() - first);
}

/// Rank by spectral gap: the largest r with values[r-1] >= abs_floor *
/// values[0] and no ratio values[i] / values[i-1] < gap_factor for i < r.
/// `values` must be sorted descending.
inline Eigen::Index numerical_rank(std::span<const double> values, double gap_factor, double abs_floor) {
  if (values.empty() || !(values[0] > 0.0)) return 0;
  Eigen::Index r = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < abs_floor * values[0]) break;
    if (values[i] / values[i - 1] < gap_factor) break;
    r = static_cast<Eigen::Index>(i) + 1;
  }
  return r;
}

inline Eigen::Index numerical_rank(const Eigen::VectorXd& values, double gap_factor, double abs_floor) {
  return numerical_rank(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())),
                        gap_factor, abs_floor);
}

}  // namespace realrad
