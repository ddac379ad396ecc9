#pragma once

// Linear maps X -> [<A_1, X>, ..., <A_l, X>] over symmetric k x k matrices,
// stored by their matrix representation (row i = row-major vec(A_i)).

#include <cmath>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "realrad/errors.hpp"

namespace realrad {

/// Row-major vectorization [a11, a12, ..., a1k, a21, ..., akk].
inline Eigen::VectorXd vec(const Eigen::MatrixXd& H) {
  Eigen::VectorXd v(H.size());
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < H.rows(); ++i)
    for (Eigen::Index j = 0; j < H.cols(); ++j) v(p++) = H(i, j);
  return v;
}

/// Inverse of vec() for a k x k matrix.
inline Eigen::MatrixXd unvec(const Eigen::Ref<const Eigen::VectorXd>& v, Eigen::Index k) {
  if (v.size() != k * k) throw std::invalid_argument("unvec: length is not k^2");
  Eigen::MatrixXd H(k, k);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) H(i, j) = v(p++);
  return H;
}

inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& X) { return 0.5 * (X + X.transpose()); }

/// Singular-value cutoff for the cached pseudoinverse, relative to sigma_max.
inline constexpr double kPinvRelativeCutoff = 1e-11;

/// Orthogonal projector onto {x : A x = b} in least-squares form:
/// P(x) = x + A^+(b - A x) = x - Q (Q^T x - q0), with Q an orthonormal basis
/// of range(A^T) and q0 = Q^T A^+ b.
struct AffineProjector {
  Eigen::MatrixXd Q;
  Eigen::VectorXd q0;
  Eigen::MatrixXd pinv;  // A^+ (k^2 x l)
  Eigen::Index rank = 0;
  double sigma_max = 0.0;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return x - Q * (Q.transpose() * x - q0); }
};

namespace detail {

inline AffineProjector make_projector(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  AffineProjector P;
  if (A.rows() == 0) throw SolverError("pseudoinverse failure: operator has no constraints");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  P.sigma_max = s.size() ? s(0) : 0.0;
  if (!(P.sigma_max > 0.0)) throw SolverError("pseudoinverse failure: all singular values vanish");
  const double cut = kPinvRelativeCutoff * P.sigma_max;
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  P.rank = r;
  P.Q = svd.matrixV().leftCols(r);
  Eigen::VectorXd inv_s = s.head(r).cwiseInverse();
  Eigen::MatrixXd Ur = svd.matrixU().leftCols(r);
  P.q0 = inv_s.asDiagonal() * (Ur.transpose() * b);
  P.pinv = P.Q * inv_s.asDiagonal() * Ur.transpose();
  return P;
}

struct ProjectorCache {
  std::once_flag once;
  AffineProjector value;
};

}  // namespace detail

class LinearOperator {
 public:
  LinearOperator() = default;

  /// `rep` is l x k^2 with row i = vec(A_i); each A_i is symmetrized.
  LinearOperator(Eigen::MatrixXd rep, Eigen::VectorXd rhs) : rep_(std::move(rep)), b_(std::move(rhs)) {
    if (rep_.rows() != b_.size()) throw std::invalid_argument("operator/rhs length mismatch");
    k_ = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(rep_.cols()))));
    if (k_ * k_ != rep_.cols()) throw std::invalid_argument("operator column count is not a square");
    for (Eigen::Index i = 0; i < rep_.rows(); ++i) rep_.row(i) = vec(symmetrized(unvec(rep_.row(i).transpose(), k_)));
  }

  static LinearOperator from_matrices(std::span<const Eigen::MatrixXd> As, Eigen::VectorXd rhs, Eigen::Index k) {
    Eigen::MatrixXd rep(static_cast<Eigen::Index>(As.size()), k * k);
    for (std::size_t i = 0; i < As.size(); ++i) {
      if (As[i].rows() != k || As[i].cols() != k) throw std::invalid_argument("constraint matrix has wrong size");
      rep.row(static_cast<Eigen::Index>(i)) = vec(As[i]).transpose();
    }
    return LinearOperator(std::move(rep), std::move(rhs));
  }

  Eigen::Index dim() const { return k_; }
  Eigen::Index size() const { return rep_.rows(); }

  const Eigen::MatrixXd& matrix_rep() const { return rep_; }
  const Eigen::VectorXd& rhs() const { return b_; }
  Eigen::MatrixXd constraint(Eigen::Index i) const { return unvec(rep_.row(i).transpose(), k_); }

  Eigen::VectorXd apply(const Eigen::MatrixXd& X) const {
    check_dim(X);
    return rep_ * vec(X);
  }

  Eigen::MatrixXd adjoint(const Eigen::VectorXd& y) const {
    if (y.size() != size()) throw std::invalid_argument("adjoint: multiplier length mismatch");
    return unvec(rep_.transpose() * y, k_);
  }

  /// Initialized once per operator (shared by copies).
  const AffineProjector& projector() const {
    std::call_once(cache_->once, [this] { cache_->value = detail::make_projector(rep_, b_); });
    return cache_->value;
  }

  void check_dim(const Eigen::MatrixXd& X) const {
    if (X.rows() != k_ || X.cols() != k_)
      throw std::invalid_argument("matrix is " + std::to_string(X.rows()) + "x" + std::to_string(X.cols()) +
                                  ", operator expects " + std::to_string(k_) + "x" + std::to_string(k_));
  }

 private:
  Eigen::MatrixXd rep_;
  Eigen::VectorXd b_;
  Eigen::Index k_ = 0;
  std::shared_ptr<detail::ProjectorCache> cache_ = std::make_shared<detail::ProjectorCache>();
};

/// l x k^2 matrix representation A with A vec(X) = op(X).
inline const Eigen::MatrixXd& matrix_rep(const LinearOperator& op) { return op.matrix_rep(); }

/// ||op(X) - b||_2.
inline double residual(const LinearOperator& op, const Eigen::MatrixXd& X) {
  return (op.apply(X) - op.rhs()).norm();
}

}  // namespace realrad
