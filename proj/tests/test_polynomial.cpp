#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "realrad/parse.hpp"
#include "realrad/polynomial.hpp"

using namespace realrad;

namespace {

Polynomial P(const char* s, std::size_t n) { return parse_polynomial(s, n); }

std::vector<std::string> names(const MonomialBasis& b) {
  std::vector<std::string> out;
  for (const auto& m : b.monomials()) out.push_back(Polynomial::monomial(m).to_string());
  return out;
}

}  // namespace

TEST(MonomialBasis, GradedLexOrderTwoVariablesDegreeThree) {
  MonomialBasis b(2, 3);
  std::vector<std::string> want = {"1", "x", "y", "x^2", "x*y", "y^2", "x^3", "x^2*y", "x*y^2", "y^3"};
  EXPECT_EQ(names(b), want);
}

TEST(MonomialBasis, ThreeVariablesDegreeTwo) {
  std::vector<std::string> want = {"1", "x", "y", "z", "x^2", "x*y", "x*z", "y^2", "y*z", "z^2"};
  EXPECT_EQ(names(MonomialBasis(3, 2)), want);
}

TEST(MonomialBasis, SizeMatchesEnumeration) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (unsigned d = 0; d <= 6; ++d) {
      std::size_t count = 0;
      for (unsigned e = 0; e <= d; ++e) count += oracle::count_degree_exactly(n, e);
      EXPECT_EQ(MonomialBasis(n, d).size(), count) << "n=" << n << " d=" << d;
      EXPECT_EQ(binomial(n + d, n), count);
    }
}

TEST(MonomialBasis, LowerDegreeBasisIsAPrefix) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (unsigned d = 1; d <= 5; ++d) {
      MonomialBasis big(n, d), small(n, d - 1);
      ASSERT_EQ(big.prefix_size(d - 1), small.size());
      for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(big[i], small[i]);
    }
}

TEST(MonomialBasis, IndexOfInvertsPosition) {
  MonomialBasis b(3, 4);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.index_of(b[i]), i);
  EXPECT_THROW(b.index_of(Monomial(std::vector<unsigned>{5, 0, 0})), std::invalid_argument);
}

TEST(Polynomial, ProductExpands) {
  Polynomial f = P("(x+y)*(x^2+y^2+2)", 2);
  Polynomial want = P("2*x + 2*y + x^3 + x^2*y + x*y^2 + y^3", 2);
  EXPECT_EQ(f, want);
  EXPECT_EQ(f.degree(), 3);
  EXPECT_DOUBLE_EQ(f.evaluate({1.0, -1.0}), 0.0);
}

TEST(Polynomial, ZeroHasNegativeDegree) {
  Polynomial z(2);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.degree(), -1);
  EXPECT_EQ(z.to_string(), "0");
  EXPECT_TRUE((P("x", 2) - P("x", 2)).is_zero());
}

TEST(VecOf, ExampleOneCoefficientVector) {
  Eigen::VectorXd v = vec_of(P("(x+y)*(x^2+y^2+2)", 2), MonomialBasis(2, 3));
  Eigen::VectorXd want(10);
  want << 0, 2, 2, 0, 0, 0, 1, 1, 1, 1;
  EXPECT_EQ(v, want);
}

TEST(VecOf, ZeroPolynomialGivesZeroVector) {
  EXPECT_TRUE(vec_of(Polynomial(2), MonomialBasis(2, 3)).isZero(0.0));
}

TEST(VecOf, DegreeOverflowThrows) {
  EXPECT_THROW(vec_of(P("x^4", 2), MonomialBasis(2, 3)), std::invalid_argument);
}

TEST(PolyOf, UnitVectorsAndLengthCheck) {
  MonomialBasis b(2, 2);
  Eigen::VectorXd e0 = Eigen::VectorXd::Unit(6, 0);
  EXPECT_EQ(poly_of(e0, b), Polynomial::constant(2, 1.0));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
  v(1) = v(2) = 1;
  EXPECT_EQ(poly_of(v, b), P("x + y", 2));
  EXPECT_THROW(poly_of(Eigen::VectorXd::Zero(5), b), std::invalid_argument);
}

TEST(PolyOf, RoundTripOnRandomPolynomials) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (std::size_t n = 1; n <= 3; ++n) {
    MonomialBasis b(n, 4);
    for (int t = 0; t < 20; ++t) {
      Polynomial p(n);
      for (const auto& m : b.monomials())
        if (rng() % 2) p.add_term(m, u(rng));
      EXPECT_EQ(poly_of(vec_of(p, b), b), p);
    }
  }
  MonomialBasis b(2, 3);
  EXPECT_EQ(poly_of(vec_of(P("x^2*y", 2), b), b), P("x^2*y", 2));
}

TEST(Prolong, LinearToDegreeTwo) {
  auto out = prolong({P("x+y", 2)}, 2);
  std::vector<Polynomial> want = {P("x+y", 2), P("x^2+x*y", 2), P("x*y+y^2", 2)};
  EXPECT_EQ(out, want);
}

TEST(Prolong, NoRoomAtSystemDegree) {
  Polynomial f = P("(x+y)*(x^2+y^2+2)", 2);
  EXPECT_EQ(prolong({f}, 3), std::vector<Polynomial>{f});
}

TEST(Prolong, ExampleFourHasThirteenPolynomials) {
  auto F = parse_system("2*y*z - y; 2*y^2 + y; x*y; 4*x^2*z + 4*z^3 + y", 3);
  EXPECT_EQ(prolong(F, 3).size(), 13u);
}

TEST(Prolong, BelowSystemDegreeThrows) {
  EXPECT_THROW(prolong({P("x^3", 2)}, 2), std::invalid_argument);
}

TEST(Prolong, RemovesExactDuplicatesAndZeros) {
  auto out = prolong({P("x", 2), P("x", 2), Polynomial(2)}, 1);
  EXPECT_EQ(out, std::vector<Polynomial>{P("x", 2)});
}

TEST(Prolong, SpansAllMonomialMultiples) {
  auto F = parse_system("x^2 - y; x*y + 1", 2);
  const unsigned d = 4;
  MonomialBasis basis(2, d);
  std::vector<Polynomial> multiples;
  for (const auto& f : F)
    for (const auto& g : basis.monomials())
      if (static_cast<int>(g.degree()) + f.degree() <= static_cast<int>(d)) multiples.push_back(f.times(g));
  Eigen::MatrixXd A = coeff_matrix(multiples, basis), B = coeff_matrix(prolong(F, d), basis);
  Eigen::MatrixXd both(A.rows(), A.cols() + B.cols());
  both << A, B;
  EXPECT_EQ(oracle::gauss_rank(B), oracle::gauss_rank(A));
  EXPECT_EQ(oracle::gauss_rank(both), oracle::gauss_rank(A));
}

TEST(CoeffMatrix, ShapesAndRank) {
  MonomialBasis b(2, 3);
  Eigen::MatrixXd B = coeff_matrix({P("(x+y)*(x^2+y^2+2)", 2)}, b);
  EXPECT_EQ(B.rows(), 10);
  EXPECT_EQ(B.cols(), 1);
  EXPECT_EQ(coeff_matrix({}, b).cols(), 0);

  auto F = parse_system("2*y*z - y; 2*y^2 + y; x*y; 4*x^2*z + 4*z^3 + y", 3);
  MonomialBasis b3(3, 3);
  Eigen::MatrixXd C = coeff_matrix(prolong(F, 3), b3);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
  EXPECT_EQ(lu.rank(), oracle::gauss_rank(C));
  EXPECT_EQ(oracle::gauss_rank(C), 10);
}

TEST(Polynomial, VariableNames) {
  EXPECT_EQ(variable_name(3, 2), "z");
  EXPECT_EQ(variable_name(4, 3), "x4");
  EXPECT_EQ(P("x1*x4^2 - 3", 4).to_string(), "-3 + x1*x4^2");
}
