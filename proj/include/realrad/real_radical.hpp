#pragma once

// The outer real radical loop: solve for a maximum-rank moment matrix,
// read off its kernel as polynomials, close the kernel under degree-bounded
// multiplication, and repeat until the closure adds nothing.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "realrad/config.hpp"
#include "realrad/errors.hpp"
#include "realrad/facial_reduction.hpp"
#include "realrad/moment_problem.hpp"
#include "realrad/polynomial.hpp"
#include "realrad/projections.hpp"

namespace realrad {

/// A set of polynomials of degree <= degree in nvars variables.
struct KernelBasis {
  std::size_t nvars = 0;
  unsigned degree = 0;
  std::vector<Polynomial> polys;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(polys.size()); }
  MonomialBasis basis() const { return MonomialBasis(nvars, degree); }
  /// k x dim matrix of coefficient vectors.
  Eigen::MatrixXd matrix() const { return coeff_matrix(polys, basis()); }

  bool operator==(const KernelBasis&) const = default;
};

struct ClosureResult {
  KernelBasis closure;
  bool grew = false;
};

/// Eigenvectors of M with eigenvalue < ker_tol * lambda_max, as polynomials.
inline KernelBasis extract_kernel(const Eigen::MatrixXd& M, const MonomialBasis& basis, double ker_tol) {
  if (M.rows() != static_cast<Eigen::Index>(basis.size()) || M.cols() != M.rows())
    throw std::invalid_argument("extract_kernel: matrix size does not match the basis");
  KernelBasis out{basis.nvars(), basis.degree(), {}};
  auto ed = eigen_decompose(M);
  const double cut = ker_tol * std::max(0.0, ed.values.size() ? ed.values(0) : 0.0);
  for (Eigen::Index i = 0; i < ed.values.size(); ++i)
    if (ed.values(i) < cut || ed.values(0) <= 0.0) out.polys.push_back(poly_of(ed.vectors.col(i), basis));
  return out;
}

namespace detail {

/// Orthonormal basis of range(W), singular values above tol.
inline Eigen::MatrixXd range_basis(const Eigen::MatrixXd& W, double tol) {
  if (W.cols() == 0 || W.rows() == 0) return Eigen::MatrixXd(W.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(W, Eigen::ComputeThinU);
  Eigen::Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > tol) ++r;
  return svd.matrixU().leftCols(r);
}

/// Orthonormal basis of {c : W c = 0}, singular values at most tol.
inline Eigen::MatrixXd null_basis(const Eigen::MatrixXd& W, double tol) {
  if (W.rows() == 0 || W.cols() == 0) return Eigen::MatrixXd::Identity(W.cols(), W.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(W, Eigen::ComputeFullV);
  Eigen::Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > tol) ++r;
  return svd.matrixV().rightCols(W.cols() - r);
}

/// k x k matrix of multiplication by x_j, restricted to degree < d inputs.
inline Eigen::MatrixXd shift_matrix(const MonomialBasis& basis, std::size_t j) {
  const auto k = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(k, k);
  const Monomial xj = Monomial::variable(basis.nvars(), j);
  for (std::size_t c = 0; c < basis.size(); ++c) {
    if (basis[c].degree() >= basis.degree()) break;
    S(static_cast<Eigen::Index>(basis.index_of(basis[c] * xj)), static_cast<Eigen::Index>(c)) = 1.0;
  }
  return S;
}

inline KernelBasis to_kernel_basis(const Eigen::MatrixXd& W, const MonomialBasis& basis) {
  KernelBasis out{basis.nvars(), basis.degree(), {}};
  for (Eigen::Index c = 0; c < W.cols(); ++c) out.polys.push_back(poly_of(W.col(c), basis));
  return out;
}

/// Orthonormal basis of the smallest subspace containing W that is closed
/// under multiplication by each variable within degree d.
inline Eigen::MatrixXd close_span(const Eigen::MatrixXd& W0, const MonomialBasis& basis, double tol) {
  const Eigen::Index low = static_cast<Eigen::Index>(basis.prefix_size(basis.degree() - 1));
  const Eigen::Index k = static_cast<Eigen::Index>(basis.size());
  std::vector<Eigen::MatrixXd> shifts;
  for (std::size_t j = 0; j < basis.nvars(); ++j) shifts.push_back(shift_matrix(basis, j));

  Eigen::MatrixXd W = range_basis(W0, tol);
  if (basis.degree() == 0 || W.cols() == 0) return W;
  while (true) {
    // Members of the span with degree < d.
    Eigen::MatrixXd C = null_basis(W.bottomRows(k - low), tol);
    Eigen::MatrixXd lower = W * C;
    lower.bottomRows(k - low).setZero();
    Eigen::MatrixXd grown(k, W.cols() + lower.cols() * static_cast<Eigen::Index>(shifts.size()));
    grown.leftCols(W.cols()) = W;
    for (std::size_t j = 0; j < shifts.size(); ++j)
      grown.middleCols(W.cols() + lower.cols() * static_cast<Eigen::Index>(j), lower.cols()) = shifts[j] * lower;
    Eigen::MatrixXd next = range_basis(grown, tol);
    if (next.cols() == W.cols()) return W;
    W = std::move(next);
  }
}

/// Reduced row echelon form of the span's rows, pivoting on the highest
/// monomial of each row. Rows come back in ascending pivot order with the
/// pivot coefficient equal to 1.
inline Eigen::MatrixXd echelon_highest(const Eigen::MatrixXd& W, double tol) {
  Eigen::MatrixXd R = W.transpose();  // one polynomial per row
  const Eigen::Index m = R.rows(), k = R.cols();
  Eigen::Index row = 0;
  for (Eigen::Index col = k - 1; col >= 0 && row < m; --col) {
    Eigen::Index best;
    const double mag = R.col(col).tail(m - row).cwiseAbs().maxCoeff(&best);
    if (mag <= tol) continue;
    R.row(row).swap(R.row(row + best));
    R.row(row) /= R(row, col);
    for (Eigen::Index i = 0; i < m; ++i)
      if (i != row) R.row(i) -= R(i, col) * R.row(row);
    ++row;
  }
  Eigen::MatrixXd out(row, k);
  for (Eigen::Index i = 0; i < row; ++i) out.row(i) = R.row(row - 1 - i);
  return out.transpose();
}

}  // namespace detail

/// Degree-bounded ideal closure of span(K): repeatedly adds x_j * p for every
/// member p of degree < d until the dimension is stable. Linear dependence
/// is decided by singular values above span_tol.
inline ClosureResult ideal_closure(const KernelBasis& K, unsigned d, double span_tol = 1e-6) {
  if (K.degree != d) throw std::invalid_argument("ideal_closure: kernel basis has degree " + std::to_string(K.degree));
  if (K.polys.empty()) return {K, false};
  const MonomialBasis basis = K.basis();
  Eigen::MatrixXd W0 = K.matrix();
  const Eigen::Index start = detail::range_basis(W0, span_tol).cols();
  Eigen::MatrixXd W = detail::close_span(W0, basis, span_tol);
  return {detail::to_kernel_basis(W, basis), W.cols() > start};
}

/// Lowest-degree polynomials of span(K) whose degree-d closure is span(K).
/// Candidates are the rows of the echelon form pivoting on the highest
/// monomial, scanned by ascending leading monomial; each is kept only when
/// it is not already in the closure of the ones kept before. Leading
/// coefficients are 1 and coefficients below span_tol are dropped.
inline std::vector<Polynomial> reduced_generators(const KernelBasis& K, double span_tol = 1e-6) {
  std::vector<Polynomial> out;
  if (K.polys.empty()) return out;
  const MonomialBasis basis = K.basis();
  Eigen::MatrixXd W = detail::range_basis(K.matrix(), span_tol);
  Eigen::MatrixXd E = detail::echelon_highest(W, span_tol);
  E = E.unaryExpr([span_tol](double c) { return std::abs(c) < span_tol ? 0.0 : c; });

  Eigen::MatrixXd kept(W.rows(), 0), closed(W.rows(), 0);
  for (Eigen::Index c = 0; c < E.cols() && closed.cols() < W.cols(); ++c) {
    Eigen::VectorXd v = E.col(c);
    Eigen::VectorXd rest = v - closed * (closed.transpose() * v);
    if (rest.norm() <= span_tol * std::max(1.0, v.norm())) continue;
    kept.conservativeResize(Eigen::NoChange, kept.cols() + 1);
    kept.rightCols(1) = v;
    closed = detail::close_span(kept, basis, span_tol);
    out.push_back(poly_of(v, basis));
  }
  return out;
}

/// Count of linearly independent degree-d leading forms in span(G) closed to
/// degree d, and the threshold binom(d+n-1, n-1) - 1 at which a positive
/// dimensional real variety forces G to generate the whole real radical.
struct Completeness {
  std::size_t s = 0;
  std::size_t threshold = 0;
  std::optional<bool> complete;  // true when the criterion applies; empty means no conclusion

  bool operator==(const Completeness&) const = default;
};

inline std::size_t completeness_threshold(unsigned d, std::size_t n) { return binomial(d + n - 1, n - 1) - 1; }

inline Completeness completeness_check(const std::vector<Polynomial>& G, unsigned d, std::size_t n, bool positive_dim,
                                       double span_tol = 1e-6) {
  Completeness out;
  out.threshold = completeness_threshold(d, n);
  if (G.empty()) return out;
  const MonomialBasis basis(n, d);
  Eigen::MatrixXd W = detail::close_span(coeff_matrix(G, basis), basis, span_tol);
  const Eigen::Index low = static_cast<Eigen::Index>(basis.prefix_size(d == 0 ? 0 : d - 1));
  const Eigen::Index top = d == 0 ? W.rows() : W.rows() - low;
  out.s = static_cast<std::size_t>(detail::range_basis(W.bottomRows(top), span_tol).cols());
  if (positive_dim && out.s == out.threshold) out.complete = true;
  return out;
}

struct RadicalReport {
  std::vector<Polynomial> generators;  // reduced generators, leading coefficient 1
  KernelBasis span;                    // orthonormal basis of the truncated real radical
  std::vector<FRTrace> fr_trace;       // one per outer iteration
  int outer_iterations = 0;
  bool ideal_like = false;
  std::optional<Completeness> completeness;
  Eigen::MatrixXd moment;              // final moment matrix (not serialized)

  bool operator==(const RadicalReport& o) const {
    return generators == o.generators && span == o.span && fr_trace == o.fr_trace &&
           outer_iterations == o.outer_iterations && ideal_like == o.ideal_like && completeness == o.completeness;
  }
};

/// Truncated real radical of <F> at degree d.
///
/// Rank overrides in cfg apply to the first outer iteration only. Solver
/// failures are rethrown as SolverError naming the outer iteration.
inline RadicalReport real_radical(const std::vector<Polynomial>& F, unsigned d, const SolverConfig& cfg,
                                  bool positive_dim = false) {
  cfg.validate();
  if (F.empty()) throw std::invalid_argument("empty polynomial system");
  if (d < 1) throw std::invalid_argument("degree must be at least 1");
  std::vector<Polynomial> current = prolong(F, d);
  if (current.empty()) throw std::invalid_argument("polynomial system is identically zero");
  const std::size_t n = F.front().nvars();

  RadicalReport out;
  SolverConfig iter_cfg = cfg;
  std::optional<MonomialBasis> basis;
  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    MomentProblem problem = build_moment_problem(current, d);
    MaxRankSolution sol;
    try {
      sol = solve_max_rank(problem, iter_cfg);
    } catch (const SolverError& e) {
      throw SolverError("outer iteration " + std::to_string(outer) + ": " + e.what());
    }
    if (!basis) basis = problem.basis;
    iter_cfg.rank_overrides.clear();
    out.fr_trace.push_back(std::move(sol.trace));
    out.outer_iterations = outer;

    KernelBasis K = extract_kernel(sol.X, *basis, cfg.ker_tol);
    ClosureResult cl = ideal_closure(K, d, cfg.span_tol);
    out.moment = std::move(sol.X);
    out.span = std::move(cl.closure);
    if (!cl.grew) {
      out.ideal_like = true;
      break;
    }
    current = out.span.polys;
    if (current.empty()) break;
  }
  if (!out.ideal_like)
    throw SolverError("kernel did not become ideal-like within " + std::to_string(cfg.max_outer) + " outer iterations");

  out.generators = reduced_generators(out.span, cfg.span_tol);
  if (positive_dim) out.completeness = completeness_check(out.generators, d, n, true, cfg.span_tol);
  return out;
}

}  // namespace realrad
