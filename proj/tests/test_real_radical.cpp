#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "properties.hpp"
#include "realrad/parse.hpp"
#include "realrad/real_radical.hpp"

using namespace realrad;

namespace {

// Distance from p (normalized) to span(K).
double distance_to_span(const Polynomial& p, const KernelBasis& K) {
  const MonomialBasis basis = K.basis();
  Eigen::VectorXd v = vec_of(p, basis);
  v /= v.norm();
  Eigen::MatrixXd W = K.matrix();
  if (W.cols() == 0) return v.norm();
  Eigen::VectorXd c = W.completeOrthogonalDecomposition().solve(v);
  return (W * c - v).norm();
}

KernelBasis kernel_of(const std::string& text, std::size_t n, unsigned d) {
  return KernelBasis{n, d, parse_system(text, n)};
}

const RadicalReport& ex1_report() {
  static const RadicalReport r = real_radical(parse_system("(x+y)*(x^2+y^2+2)", 2), 3, SolverConfig{}, true);
  return r;
}

}  // namespace

TEST(ExtractKernel, PositiveDefiniteHasNoKernel) {
  MonomialBasis b(2, 1);
  EXPECT_EQ(extract_kernel(Eigen::MatrixXd::Identity(3, 3), b, 1e-6).dim(), 0);
  EXPECT_THROW(extract_kernel(Eigen::MatrixXd::Identity(4, 4), b, 1e-6), std::invalid_argument);
}

TEST(ExtractKernel, DiagonalKernel) {
  MonomialBasis b(2, 1);
  Eigen::MatrixXd M = Eigen::Vector3d(1, 0, 1e-9).asDiagonal();
  KernelBasis K = extract_kernel(M, b, 1e-6);
  EXPECT_EQ(K.dim(), 2);
  EXPECT_LT(distance_to_span(parse_polynomial("x", 2), K), 1e-12);
  EXPECT_LT(distance_to_span(parse_polynomial("y", 2), K), 1e-12);
}

TEST(IdealClosure, ClosedSetDoesNotGrow) {
  KernelBasis K = kernel_of(
      "x + y; x^2 + x*y; x*y + y^2; x + x^2 - y^2 + y + x^3 + x^2*y; x^2*y + x*y^2; x*y^2 + y^3", 2, 3);
  ClosureResult r = ideal_closure(K, 3);
  EXPECT_FALSE(r.grew);
  EXPECT_EQ(r.closure.dim(), 6);
}

TEST(IdealClosure, LinearFormGeneratesItsMultiples) {
  ClosureResult r = ideal_closure(kernel_of("x + y", 2, 3), 3);
  EXPECT_TRUE(r.grew);
  // (x + y) times the 6 monomials of degree <= 2.
  EXPECT_EQ(r.closure.dim(), 6);
  EXPECT_LT(distance_to_span(parse_polynomial("x*y^2 + y^3", 2), r.closure), 1e-10);
  EXPECT_GT(distance_to_span(parse_polynomial("x^3", 2), r.closure), 1e-3);
}

TEST(IdealClosure, LowDegreeMembersFoundByCancellation) {
  // x^3 + x and x^3 contain x, which then generates x^2, x*y.
  ClosureResult r = ideal_closure(kernel_of("x^3 + x; x^3", 2, 3), 3);
  EXPECT_LT(distance_to_span(parse_polynomial("x*y", 2), r.closure), 1e-10);
  EXPECT_LT(distance_to_span(parse_polynomial("x*y^2", 2), r.closure), 1e-10);
  EXPECT_EQ(r.closure.dim(), 6);
}

TEST(IdealClosure, EmptyAndDegreeMismatch) {
  KernelBasis empty{2, 3, {}};
  ClosureResult r = ideal_closure(empty, 3);
  EXPECT_FALSE(r.grew);
  EXPECT_EQ(r.closure.dim(), 0);
  EXPECT_THROW(ideal_closure(empty, 2), std::invalid_argument);
}

TEST(IdealClosure, MatchesExactEnumeration) {
  props::Check c = props::closure_vs_bruteforce(200);
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(IdealClosure, Idempotent) {
  ClosureResult once = ideal_closure(kernel_of("x^2 - y; x*y - 1", 2, 3), 3);
  ClosureResult twice = ideal_closure(once.closure, 3);
  EXPECT_FALSE(twice.grew);
  EXPECT_EQ(twice.closure.dim(), once.closure.dim());
}

TEST(ReducedGenerators, LinearFormIsTheOnlyGenerator) {
  ClosureResult r = ideal_closure(kernel_of("2*x + 2*y", 2, 3), 3);
  auto G = reduced_generators(r.closure);
  ASSERT_EQ(G.size(), 1u);
  EXPECT_EQ(G[0].to_string(), "x + y");
}

TEST(ReducedGenerators, ClosureOfGeneratorsIsTheSpan) {
  ClosureResult r = ideal_closure(kernel_of("x^2 - y; x*y - 1", 2, 3), 3);
  auto G = reduced_generators(r.closure);
  ClosureResult back = ideal_closure(KernelBasis{2, 3, G}, 3);
  EXPECT_EQ(back.closure.dim(), r.closure.dim());
  for (const auto& p : r.closure.polys) EXPECT_LT(distance_to_span(p, back.closure), 1e-8);
}

TEST(RealRadical, ExampleOne) {
  const RadicalReport& r = ex1_report();
  ASSERT_EQ(r.generators.size(), 1u);
  EXPECT_EQ(r.generators[0].to_string(), "x + y");
  EXPECT_TRUE(r.ideal_like);
  EXPECT_EQ(r.span.dim(), 6);
  EXPECT_EQ(r.fr_trace.front().face_sizes, (std::vector<Eigen::Index>{10, 9, 4}));
  EXPECT_EQ(r.fr_trace.back().final_rank, 4);
}

TEST(RealRadical, ExampleTwo) {
  RadicalReport r = real_radical(parse_system("(1+x+y)*(x^4+y^4+2)", 2), 5, SolverConfig{});
  ASSERT_EQ(r.generators.size(), 1u);
  EXPECT_LT(distance_to_span(parse_polynomial("1 + x + y", 2), KernelBasis{2, 5, r.generators}), 1e-8);
  EXPECT_EQ(r.fr_trace.front().face_sizes, (std::vector<Eigen::Index>{21, 20, 6}));
}

TEST(RealRadical, ExampleFourReferenceGeneratorsInSpan) {
  RadicalReport r =
      real_radical(parse_system("2*y*z - y; 2*y^2 + y; x*y; 4*x^2*z + 4*z^3 + y", 3), 3, SolverConfig{}, true);
  for (const char* g : {"z^2 + 0.5*y", "y*z - 0.5*y", "y^2 + 0.5*y", "x*z", "x*y", "y + z"})
    EXPECT_LT(distance_to_span(parse_polynomial(g, 3), r.span), 1e-7) << g;
  ASSERT_TRUE(r.completeness);
  EXPECT_EQ(r.completeness->complete, std::optional<bool>(true));
}

TEST(RealRadical, KernelPolynomialsAnnihilateTheMomentMatrix) {
  const RadicalReport& r = ex1_report();
  const MonomialBasis basis = r.span.basis();
  for (const auto& p : r.span.polys) {
    Eigen::VectorXd v = vec_of(p, basis);
    EXPECT_LE(v.dot(r.moment * v) / v.squaredNorm(), 1e-8);
  }
}

TEST(RealRadical, RealPointsAreZerosOfTheSpan) {
  const RadicalReport& r = ex1_report();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 20; ++t) {
    const double s = u(rng);
    for (const auto& p : r.span.polys) EXPECT_NEAR(p.evaluate({s, -s}), 0.0, 1e-7);
  }
}

TEST(RealRadical, IdempotentOnItsOwnOutput) {
  const RadicalReport& r = ex1_report();
  RadicalReport again = real_radical(r.generators, 3, SolverConfig{});
  EXPECT_EQ(again.span.dim(), r.span.dim());
  for (const auto& p : r.span.polys) EXPECT_LT(distance_to_span(p, again.span), 1e-7);
}

TEST(RealRadical, RejectsBadInput) {
  EXPECT_THROW(real_radical({}, 3, SolverConfig{}), std::invalid_argument);
  EXPECT_THROW(real_radical(parse_system("x", 1), 0, SolverConfig{}), std::invalid_argument);
}

TEST(Completeness, ThresholdValues) {
  EXPECT_EQ(completeness_threshold(3, 2), 3u);
  EXPECT_EQ(completeness_threshold(3, 3), 9u);
  props::Check c = props::completeness_threshold_formula();
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Completeness, NoGeneratorsGivesNoConclusion) {
  Completeness c = completeness_check({}, 3, 2, true);
  EXPECT_FALSE(c.complete.has_value());
  EXPECT_EQ(c.threshold, 3u);
}

TEST(Completeness, ExampleOneMeetsThreshold) {
  const RadicalReport& r = ex1_report();
  ASSERT_TRUE(r.completeness);
  EXPECT_EQ(r.completeness->s, 3u);
  EXPECT_EQ(r.completeness->complete, std::optional<bool>(true));
  // Without the positive-dimension assumption nothing is concluded.
  EXPECT_FALSE(completeness_check(r.generators, 3, 2, false).complete.has_value());
}

TEST(Completeness, BelowThresholdIsNoConclusion) {
  // x*y generates only 2 of the 4 degree-3 forms: s = 2 < 3.
  Completeness c = completeness_check(parse_system("x*y", 2), 3, 2, true);
  EXPECT_EQ(c.s, 2u);
  EXPECT_FALSE(c.complete.has_value());
}
