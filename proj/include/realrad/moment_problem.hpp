#pragma once

// The SDP feasibility set {X : A(X) = b, B^T X = 0, X psd} whose points are
// truncated moment matrices annihilated by a polynomial system.

#include <map>
#include <ostream>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "realrad/linear_operator.hpp"
#include "realrad/polynomial.hpp"

namespace realrad {

struct ConstraintCounts {
  Eigen::Index normalization = 0;
  Eigen::Index structure = 0;
  Eigen::Index kernel = 0;
};

struct MomentProblem {
  LinearOperator op;
  MonomialBasis basis;
  Eigen::MatrixXd B;  // coefficient matrix of the system, kept for the first reduction
  ConstraintCounts counts;
};

namespace detail {

// vec((E_ij + E_ji) / 2)
inline void add_sym_unit(Eigen::Ref<Eigen::RowVectorXd> row, Eigen::Index k, Eigen::Index i, Eigen::Index j,
                         double s) {
  row(i * k + j) += 0.5 * s;
  row(j * k + i) += 0.5 * s;
}

struct RowLess {
  bool operator()(const std::vector<double>& a, const std::vector<double>& b) const { return a < b; }
};

}  // namespace detail

/// Builds the moment operator at degree d for the system F.
///
/// Constraint order: u_00 = 1 first; then, for every upper-triangular cell
/// in row-major order whose monomial product was already seen, one equation
/// tying it to the first cell carrying that moment; then, for each column
/// b_j of B and each basis index beta, <sym(b_j e_beta^T), X> = 0.
/// Exactly repeated kernel rows are dropped.
inline MomentProblem build_moment_problem(const std::vector<Polynomial>& F, unsigned d) {
  if (F.empty()) throw std::invalid_argument("empty polynomial system");
  const std::size_t n = F.front().nvars();
  if (max_degree(F) > static_cast<int>(d))
    throw std::invalid_argument("system degree " + std::to_string(max_degree(F)) + " exceeds moment degree " +
                                std::to_string(d));

  MonomialBasis basis(n, d);
  Eigen::MatrixXd B = coeff_matrix(F, basis);
  const auto k = static_cast<Eigen::Index>(basis.size());

  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  ConstraintCounts counts;

  Eigen::RowVectorXd r0 = Eigen::RowVectorXd::Zero(k * k);
  r0(0) = 1.0;
  rows.push_back(r0);
  rhs.push_back(1.0);
  counts.normalization = 1;

  std::map<Monomial, std::pair<Eigen::Index, Eigen::Index>, GradedLexLess> canonical;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      Monomial g = basis[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(j)];
      auto [it, fresh] = canonical.emplace(g, std::make_pair(i, j));
      if (fresh) continue;
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(k * k);
      detail::add_sym_unit(r, k, i, j, 1.0);
      detail::add_sym_unit(r, k, it->second.first, it->second.second, -1.0);
      rows.push_back(std::move(r));
      rhs.push_back(0.0);
      ++counts.structure;
    }
  }

  std::set<std::vector<double>, detail::RowLess> seen;
  for (Eigen::Index c = 0; c < B.cols(); ++c) {
    if (B.col(c).isZero(0.0)) continue;
    for (Eigen::Index beta = 0; beta < k; ++beta) {
      Eigen::MatrixXd E = Eigen::MatrixXd::Zero(k, k);
      E.col(beta) = B.col(c);
      Eigen::RowVectorXd r = vec(symmetrized(E)).transpose();
      std::vector<double> key(r.data(), r.data() + r.size());
      if (!seen.insert(std::move(key)).second) continue;
      rows.push_back(std::move(r));
      rhs.push_back(0.0);
      ++counts.kernel;
    }
  }

  Eigen::MatrixXd rep(static_cast<Eigen::Index>(rows.size()), k * k);
  for (std::size_t i = 0; i < rows.size(); ++i) rep.row(static_cast<Eigen::Index>(i)) = rows[i];
  Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return MomentProblem{LinearOperator(std::move(rep), std::move(b)), std::move(basis), std::move(B), counts};
}

/// Debug dump: one CSV line per constraint, the k^2 entries of vec(A_i)
/// followed by b_i.
inline void write_operator_csv(std::ostream& os, const LinearOperator& op) {
  os.precision(17);
  const auto& A = op.matrix_rep();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) os << A(i, j) << ',';
    os << op.rhs()(i) << '\n';
  }
}

}  // namespace realrad
