#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's numerical kernels (SVD, eigen, DR).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "realrad/polynomial.hpp"

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using RationalRow = std::vector<Rational>;

/// Rank by Gaussian elimination with partial pivoting.
inline Eigen::Index gauss_rank(Eigen::MatrixXd A, double tol = 1e-9) {
  Eigen::Index rank = 0;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (Eigen::Index c = 0; c < A.cols() && rank < A.rows(); ++c) {
    Eigen::Index p = rank;
    for (Eigen::Index r = rank; r < A.rows(); ++r)
      if (std::abs(A(r, c)) > std::abs(A(p, c))) p = r;
    if (std::abs(A(p, c)) <= tol * scale) continue;
    A.row(p).swap(A.row(rank));
    for (Eigen::Index r = rank + 1; r < A.rows(); ++r) A.row(r) -= (A(r, c) / A(rank, c)) * A.row(rank);
    ++rank;
  }
  return rank;
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index k, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) X(i, j) = X(j, i) = g(rng);
  return X;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(rows, cols);
  for (Eigen::Index i = 0; i < X.size(); ++i) X(i) = g(rng);
  return X;
}

/// Random PSD matrix of rank r.
inline Eigen::MatrixXd random_psd(Eigen::Index k, Eigen::Index r, std::mt19937_64& rng) {
  Eigen::MatrixXd G = random_matrix(k, r, rng);
  return G * G.transpose();
}

/// k x r matrix with orthonormal columns (Gram-Schmidt on a random matrix).
inline Eigen::MatrixXd random_orthonormal(Eigen::Index k, Eigen::Index r, std::mt19937_64& rng) {
  Eigen::MatrixXd U = random_matrix(k, r, rng);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) U.col(j) -= U.col(i).dot(U.col(j)) * U.col(i);
    U.col(j).normalize();
  }
  return U;
}

/// Best rank <= r PSD approximation error by trying every subset of at most
/// r eigenpairs: min over S of || X - sum_{i in S} max(l_i, 0) v_i v_i^T ||_F.
inline double best_psd_error(const Eigen::MatrixXd& X, Eigen::Index r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
  const auto& l = es.eigenvalues();
  const Eigen::Index k = l.size();
  double best = INFINITY;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    if (std::popcount(mask) > r) continue;
    double err2 = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double kept = (mask >> i & 1u) ? std::max(l(i), 0.0) : 0.0;
      err2 += (l(i) - kept) * (l(i) - kept);
    }
    best = std::min(best, std::sqrt(err2));
  }
  return best;
}

/// argmin ||x - x0|| s.t. A x = b from the KKT system [I A^T; A 0], solved
/// with full-pivot LU; requires A of full row rank.
inline Eigen::VectorXd kkt_projection(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x0) {
  const Eigen::Index n = A.cols(), m = A.rows();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
  K.topLeftCorner(n, n).setIdentity();
  K.topRightCorner(n, m) = A.transpose();
  K.bottomLeftCorner(m, n) = A;
  Eigen::VectorXd rhs(n + m);
  rhs << x0, b;
  return K.fullPivLu().solve(rhs).head(n);
}

/// Number of monomials of degree exactly d in n variables, by enumeration.
inline std::size_t count_degree_exactly(std::size_t n, unsigned d) {
  std::size_t count = 0;
  std::vector<unsigned> e(n, 0);
  // odometer over [0, d]^n
  while (true) {
    unsigned s = 0;
    for (auto v : e) s += v;
    if (s == d) ++count;
    std::size_t j = 0;
    while (j < n && e[j] == d) e[j++] = 0;
    if (j == n) break;
    ++e[j];
  }
  return count;
}

// ---- exact closure --------------------------------------------------------

/// Reduced echelon form over Q with pivots on the last nonzero column
/// (the highest monomial in basis order); zero rows removed.
inline std::vector<RationalRow> echelon_last(std::vector<RationalRow> rows) {
  std::vector<RationalRow> out;
  if (rows.empty()) return out;
  const std::size_t k = rows.front().size();
  std::size_t top = 0;
  for (std::size_t c = k; c-- > 0 && top < rows.size();) {
    std::size_t p = top;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[top]);
    const Rational piv = rows[top][c];
    for (auto& v : rows[top]) v /= piv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == top || rows[r][c] == 0) continue;
      const Rational f = rows[r][c];
      for (std::size_t j = 0; j < k; ++j) rows[r][j] -= f * rows[top][j];
    }
    ++top;
  }
  rows.resize(top);
  return rows;
}

/// Dimension of the degree-d ideal closure of span(rows), by enumerating
/// every monomial multiple x^g * p of every span member p of degree
/// deg p + |g| <= d, with exact row reduction after each round.
inline std::size_t exact_closure_dim(const std::vector<RationalRow>& rows, const realrad::MonomialBasis& basis) {
  std::vector<RationalRow> E = echelon_last(rows);
  while (true) {
    std::vector<RationalRow> all = E;
    for (const auto& row : E) {
      // The highest monomial of an echelon row is its pivot, so rows with a
      // pivot of degree e < d span the members of degree <= e.
      std::size_t lead = row.size();
      while (lead-- > 0 && row[lead] == 0) {
      }
      const unsigned e = basis[lead].degree();
      if (e >= basis.degree()) continue;
      realrad::MonomialBasis mult(basis.nvars(), basis.degree() - e);
      for (const auto& g : mult.monomials()) {
        RationalRow shifted(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
          if (row[i] != 0) shifted[basis.index_of(basis[i] * g)] = row[i];
        all.push_back(std::move(shifted));
      }
    }
    std::vector<RationalRow> next = echelon_last(std::move(all));
    if (next.size() == E.size()) return E.size();
    E = std::move(next);
  }
}

}  // namespace oracle
