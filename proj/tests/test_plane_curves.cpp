#include <gtest/gtest.h>

#include "ncp/elliptic.hpp"

using namespace ncp;
using P = ProjPoint<double>;
using Cd = std::complex<double>;

namespace {

PlaneCurve<double> weier01() { return weierstrass<double>(0.0, 1.0); }

bool contains(const PlaneDivisor<double>& D, const P& p, double tol = 1e-8) {
  for (auto& q : D)
    if (proj_distance(p, q) < tol) return true;
  return false;
}

int count_near(const PlaneDivisor<double>& D, const P& p, double tol = 1e-6) {
  int n = 0;
  for (auto& q : D) n += proj_distance(p, q) < tol;
  return n;
}

}  // namespace

TEST(PlaneCurves, Evaluate) {
  PlaneCurve<double> x(1, {1, 0, 0});
  EXPECT_EQ(std::abs(x(P(0, 1, 1))), 0.0);
  auto C = weier01();
  EXPECT_LT(std::abs(C(P(2, 3, 1))), 1e-15);
  EXPECT_LT(std::abs(C(P(4, 6, 2))), 1e-15);
  EXPECT_GT(std::abs(C(P(1, 1, 1))), 0.1);
  EXPECT_GT(std::abs(C(P(5, 5, 5))), 0.1);
}

TEST(PlaneCurves, InterpolateLineAndConic) {
  Rng rng(1);
  std::vector<P> two = {P::from(rng.cvec<double>(3)), P::from(rng.cvec<double>(3))};
  auto L = interpolate_curve(two, 1);
  for (auto& p : two) EXPECT_LT(L.residual(p), 1e-12);
  std::vector<P> five;
  for (int i = 0; i < 5; ++i) five.push_back(P::from(rng.cvec<double>(3)));
  InterpDiag<double> dg;
  auto Q = interpolate_curve(five, 2, &dg);
  for (auto& p : five) EXPECT_LT(Q.residual(p), 1e-9);
  EXPECT_GT(dg.gap(), 1e-6);
}

TEST(PlaneCurves, CayleyBacharachAmbiguous) {
  auto A = random_cubic<double>(3), B = random_cubic<double>(4);
  auto base = intersect(A, B);
  ASSERT_EQ(base.size(), 9u);
  try {
    interpolate_curve(base, 3);
    FAIL() << "expected AmbiguousKernel";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AmbiguousKernel);
  }
}

TEST(PlaneCurves, EmptyKernel) {
  Rng rng(2);
  std::vector<P> ten;
  for (int i = 0; i < 10; ++i) ten.push_back(P::from(rng.cvec<double>(3)));
  try {
    interpolate_curve(ten, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyKernel);
  }
}

TEST(PlaneCurves, IntersectLineWithWeierstrass) {
  PlaneCurve<double> x(1, {1, 0, 0});
  auto D = intersect(x, weier01());
  ASSERT_EQ(D.size(), 3u);
  EXPECT_TRUE(contains(D, P(0, 1, 0)));
  EXPECT_TRUE(contains(D, P(0, 1, 1)));
  EXPECT_TRUE(contains(D, P(0, -1, 1)));
}

TEST(PlaneCurves, TangentMultiplicity) {
  // y = 2x - 1 i.e. 2x - y - z = 0
  PlaneCurve<double> L(1, {2, -1, -1});
  auto D = intersect(L, weier01());
  ASSERT_EQ(D.size(), 3u);
  EXPECT_EQ(count_near(D, P(2, 3, 1)), 2);
  EXPECT_EQ(count_near(D, P(0, -1, 1)), 1);
}

TEST(PlaneCurves, Bezout) {
  for (int i = 0; i < 50; ++i) {
    Rng rng(500 + i);
    int d1 = 1 + int(rng.next() % 4), d2 = 1 + int(rng.next() % 4);
    Vec<double> a = rng.cvec<double>(Monomials::count(d1)), b = rng.cvec<double>(Monomials::count(d2));
    PlaneCurve<double> C1(d1, std::vector<Cd>(a.data(), a.data() + a.size()));
    PlaneCurve<double> C2(d2, std::vector<Cd>(b.data(), b.data() + b.size()));
    auto D = intersect(C1, C2);
    ASSERT_EQ(int(D.size()), d1 * d2);
    for (auto& p : D) {
      EXPECT_LT(C1.residual(p), 1e-9);
      EXPECT_LT(C2.residual(p), 1e-9);
    }
  }
}

TEST(PlaneCurves, CommonComponent) {
  Form<double> l1(1, {1, 2, 3}), l2(1, {0, 1, -1}), l3(1, {2, 0, 1});
  PlaneCurve<double> A(l1 * l2), B(l1 * l3);
  try {
    intersect(A, B);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CommonComponent);
  }
}

TEST(PlaneCurves, DivisorSubtract) {
  P a(1, 0, 0), b(0, 1, 0);
  EXPECT_TRUE(divisor_subtract<double>({a, b}, {a, b}, 1e-8).empty());
  auto r = divisor_subtract<double>({a, a, b}, {a}, 1e-8);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(count_near(r, a), 1);
  EXPECT_EQ(count_near(r, b), 1);
  P a2(1, 1e-9, 0), a3(1, 1e-3, 0);
  EXPECT_EQ(divisor_subtract<double>({a, b}, {a2}, 1e-8).size(), 1u);
  try {
    divisor_subtract<double>({a, b}, {a3}, 1e-8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnmatchedPoint);
    EXPECT_NEAR(e.value(), 1e-3, 1e-9);
  }
}

TEST(PlaneCurves, ResidualMatchesChordLaw) {
  // d = 3: D' = third(third(D, p_i), p_out) on C
  for (int i = 0; i < 20; ++i) {
    auto C = random_cubic<double>(700 + i);
    EllipticCurve<double> E(C);
    auto D = E.random_point(10 * i + 1), pi = E.random_point(10 * i + 2), po = E.random_point(10 * i + 3);
    auto chord = third_point(C.f, third_point(C.f, D, pi, 1e-8), po, 1e-8);
    ResidualOptions opt;
    opt.seed = 31 + i;
    auto Dp = residual_linear_equiv(C, {D, pi}, po, opt);
    ASSERT_EQ(Dp.size(), 1u);
    EXPECT_LT(proj_distance(Dp[0], chord), 1e-8);
  }
}

namespace {

// smooth quartic/quintic: Fermat plus a small random perturbation
PlaneCurve<double> smooth_curve(int d, std::uint64_t seed) {
  Rng rng(seed);
  Form<double> F(d);
  F.at(d, 0) = 1;
  F.at(0, d) = 1;
  F.at(0, 0) = 1;
  for (auto& c : F.a) c += 0.3 * rng.cnormal<double>();
  return PlaneCurve<double>(F);
}

std::vector<P> random_points_on(const PlaneCurve<double>& C, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<P> out;
  while (int(out.size()) < n) {
    PlaneCurve<double> L(1, {rng.cnormal<double>(), rng.cnormal<double>(), rng.cnormal<double>()});
    auto D = intersect(C, L, IntersectOptions{rng.next(), 5});
    out.push_back(D[rng.next() % D.size()]);
  }
  return out;
}

}  // namespace

TEST(PlaneCurves, ResidualChoiceIndependenceAndDegreeChange) {
  for (int d : {3, 4, 5}) {
    auto C = smooth_curve(d, 40 + d);
    ASSERT_GT(smoothness_probe(C), 1e-6);
    const int g = C.genus();
    auto pts = random_points_on(C, g + 2, 90 + d);
    PlaneDivisor<double> Dplus(pts.begin(), pts.begin() + g + 1);
    P pout = pts.back();
    ResidualOptions o1, o2, o3;
    o1.seed = 1;
    o2.seed = 2;
    o3.seed = 3;
    o3.extra_degree = 1;
    auto a = residual_linear_equiv(C, Dplus, pout, o1);
    auto b = residual_linear_equiv(C, Dplus, pout, o2);
    auto c = residual_linear_equiv(C, Dplus, pout, o3);
    ASSERT_EQ(int(a.size()), g);
    EXPECT_TRUE(divisor_subtract(a, b, 1e-6).empty()) << d;
    EXPECT_TRUE(divisor_subtract(a, c, 1e-6).empty()) << d;
    // p_out = p_i returns D
    auto same = residual_linear_equiv(C, Dplus, Dplus.back(), o1);
    PlaneDivisor<double> D(Dplus.begin(), Dplus.end() - 1);
    EXPECT_TRUE(divisor_subtract(same, D, 1e-6).empty()) << d;
  }
}

TEST(PlaneCurves, SmoothnessProbe) {
  EXPECT_GT(smoothness_probe(weier01()), 1e-3);
  std::vector<Cd> c(10, 0.0);
  c[Monomials::index(3, 3, 0)] = -1;
  c[Monomials::index(3, 2, 0)] = -1;
  c[Monomials::index(3, 0, 2)] = 1;
  EXPECT_LT(smoothness_probe(PlaneCurve<double>(3, c)), 1e-9);
  PlaneCurve<double> dbl(2, {1, 0, 0, 0, 0, 0});  // x^2
  EXPECT_LT(smoothness_probe(dbl), 1e-12);
}
