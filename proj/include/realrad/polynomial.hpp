#pragma once

// Sparse multivariate polynomials over the reals, the graded-lex monomial
// basis used to index moment matrices, prolongation, and coefficient matrices.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "realrad/errors.hpp"

namespace realrad {

/// Coefficients with magnitude below this are treated as structural zeros.
inline constexpr double kDropTolerance = 1e-12;

/// Exponent vector x^alpha of a monomial in n variables.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<unsigned> exps) : exps_(std::move(exps)) {}

  static Monomial variable(std::size_t nvars, std::size_t j) {
    Monomial m(nvars);
    m.exps_.at(j) = 1;
    return m;
  }

  std::size_t nvars() const { return exps_.size(); }
  unsigned degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0u); }
  unsigned operator[](std::size_t j) const { return exps_[j]; }
  const std::vector<unsigned>& exponents() const { return exps_; }

  Monomial operator*(const Monomial& o) const {
    if (o.nvars() != nvars()) throw std::invalid_argument("monomial arity mismatch");
    Monomial r(*this);
    for (std::size_t j = 0; j < exps_.size(); ++j) r.exps_[j] += o.exps_[j];
    return r;
  }

  bool operator==(const Monomial&) const = default;

 private:
  std::vector<unsigned> exps_;
};

/// Graded lexicographic order with x1 > x2 > ... > xn, arranged so that
/// "less" means "earlier in the moment-matrix basis": lower total degree
/// first, then lexicographically larger exponent vectors first.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const unsigned da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return std::lexicographical_compare(b.exponents().begin(), b.exponents().end(),
                                        a.exponents().begin(), a.exponents().end());
  }
};

/// Human-readable variable names: x,y,z for n <= 3, x1..xn otherwise.
inline std::string variable_name(std::size_t nvars, std::size_t j) {
  if (nvars <= 3) return std::string(1, "xyz"[j]);
  return "x" + std::to_string(j + 1);
}

class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, GradedLexLess>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, double c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars), c);
    return p;
  }
  static Polynomial monomial(const Monomial& m, double c = 1.0) {
    Polynomial p(m.nvars());
    p.add_term(m, c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
    return d;
  }

  double coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
  }

  void add_term(const Monomial& m, double c) {
    if (m.nvars() != nvars_) throw std::invalid_argument("monomial arity mismatch");
    double& slot = terms_[m];
    slot += c;
    if (std::abs(slot) < kDropTolerance) terms_.erase(m);
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(double s) {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) r.add_term(m, c * s);
    return *this = std::move(r);
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_arity(b);
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  Polynomial times(const Monomial& m) const {
    Polynomial r(nvars_);
    for (const auto& [t, c] : terms_) r.terms_.emplace(t * m, c);
    return r;
  }

  double evaluate(const std::vector<double>& point) const {
    if (point.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
    double s = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = c;
      for (std::size_t j = 0; j < nvars_; ++j) t *= std::pow(point[j], m[j]);
      s += t;
    }
    return s;
  }

  /// Exact term-map equality.
  bool operator==(const Polynomial&) const = default;

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (const auto& [m, c] : terms_) {
      double mag = std::abs(c);
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      std::ostringstream num;
      num.precision(os.precision());
      num << mag;
      bool unit = m.degree() > 0 && num.str() == "1";
      if (!unit) os << num.str();
      bool need_star = !unit;
      for (std::size_t j = 0; j < nvars_; ++j) {
        if (m[j] == 0) continue;
        if (need_star) os << "*";
        os << variable_name(nvars_, j);
        if (m[j] > 1) os << "^" << m[j];
        need_star = true;
      }
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

 private:
  void check_arity(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial arity mismatch");
  }

  std::size_t nvars_ = 0;
  TermMap terms_;
};

/// All monomials of degree <= d in n variables, in graded-lex order.
/// Position 0 is the constant monomial.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t nvars, unsigned degree) : nvars_(nvars), degree_(degree) {
    if (nvars == 0) throw std::invalid_argument("monomial basis needs at least one variable");
    for (unsigned e = 0; e <= degree; ++e) {
      // Exponent vectors of total degree e, lexicographically descending.
      std::vector<unsigned> exps(nvars, 0);
      emit_degree(exps, 0, e);
    }
    for (std::size_t i = 0; i < monos_.size(); ++i) index_.emplace(monos_[i], i);
  }

  std::size_t nvars() const { return nvars_; }
  unsigned degree() const { return degree_; }
  std::size_t size() const { return monos_.size(); }
  const Monomial& operator[](std::size_t i) const { return monos_[i]; }
  const std::vector<Monomial>& monomials() const { return monos_; }

  bool contains(const Monomial& m) const { return index_.count(m) != 0; }
  std::size_t index_of(const Monomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) throw std::invalid_argument("monomial outside basis");
    return it->second;
  }

  /// Number of basis entries with total degree <= e (a prefix of the basis).
  std::size_t prefix_size(unsigned e) const {
    std::size_t n = 0;
    while (n < monos_.size() && monos_[n].degree() <= e) ++n;
    return n;
  }

 private:
  void emit_degree(std::vector<unsigned>& exps, std::size_t j, unsigned remaining) {
    if (j + 1 == nvars_) {
      exps[j] = remaining;
      monos_.emplace_back(exps);
      return;
    }
    for (unsigned a = remaining + 1; a-- > 0;) {
      exps[j] = a;
      emit_degree(exps, j + 1, remaining - a);
    }
    exps[j] = 0;
  }

  std::size_t nvars_;
  unsigned degree_;
  std::vector<Monomial> monos_;
  std::map<Monomial, std::size_t, GradedLexLess> index_;
};

/// binom(n, k) for small arguments.
inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Coefficient vector of p in the given basis.
inline Eigen::VectorXd vec_of(const Polynomial& p, const MonomialBasis& basis) {
  if (p.nvars() != basis.nvars()) throw std::invalid_argument("polynomial arity differs from basis");
  if (p.degree() > static_cast<int>(basis.degree()))
    throw std::invalid_argument("polynomial degree " + std::to_string(p.degree()) +
                                " exceeds basis degree " + std::to_string(basis.degree()));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (const auto& [m, c] : p.terms()) v(static_cast<Eigen::Index>(basis.index_of(m))) = c;
  return v;
}

/// The polynomial sum_alpha v_alpha x^alpha.
inline Polynomial poly_of(const Eigen::Ref<const Eigen::VectorXd>& v, const MonomialBasis& basis) {
  if (static_cast<std::size_t>(v.size()) != basis.size())
    throw std::invalid_argument("coefficient vector length " + std::to_string(v.size()) +
                                " does not match basis size " + std::to_string(basis.size()));
  Polynomial p(basis.nvars());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= kDropTolerance) p.add_term(basis[static_cast<std::size_t>(i)], v(i));
  return p;
}

inline int max_degree(const std::vector<Polynomial>& F) {
  int d = -1;
  for (const auto& f : F) d = std::max(d, f.degree());
  return d;
}

/// { x^gamma * f : f in F, |gamma| + deg f <= d }, f-index major and gamma in
/// basis order, with exact duplicates removed. Zero polynomials are skipped.
inline std::vector<Polynomial> prolong(const std::vector<Polynomial>& F, unsigned d) {
  if (max_degree(F) > static_cast<int>(d))
    throw std::invalid_argument("prolongation degree " + std::to_string(d) +
                                " is below the system degree " + std::to_string(max_degree(F)));
  std::vector<Polynomial> out;
  for (const auto& f : F) {
    if (f.is_zero()) continue;
    MonomialBasis multipliers(f.nvars(), d - static_cast<unsigned>(f.degree()));
    for (const auto& g : multipliers.monomials()) {
      Polynomial h = f.times(g);
      if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(std::move(h));
    }
  }
  return out;
}

/// k x m matrix whose column j is vec_of(F[j]).
inline Eigen::MatrixXd coeff_matrix(const std::vector<Polynomial>& F, const MonomialBasis& basis) {
  Eigen::MatrixXd B(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(F.size()));
  for (std::size_t j = 0; j < F.size(); ++j) B.col(static_cast<Eigen::Index>(j)) = vec_of(F[j], basis);
  return B;
}

}  // namespace realrad
