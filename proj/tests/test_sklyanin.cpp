#include <gtest/gtest.h>

#include "ncp/sklyanin.hpp"

using namespace ncp;
using Cd = std::complex<double>;
using A3 = Sklyanin<double>;

namespace {

GradedElement<double> random_element(const A3& A, int n, Rng& rng) { return {n, rng.cvec<double>(A.dim(n))}; }

Vec<double> relation_tensor(const A3& A, int k) {
  Vec<double> t(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(3 * i + j) = A.relation(k)(i, j);
  return t;
}

}  // namespace

TEST(Sklyanin, HilbertDims) {
  A3 A(random_params<double>(1));
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(A.dim(n), (n + 1) * (n + 2) / 2);
  A3 C({1.0, -1.0, 0.0});
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(C.dim(n), (n + 1) * (n + 2) / 2);
  try {
    A3 Z({0.0, 0.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateParams);
  }
}

TEST(Sklyanin, RelationsReduceToZero) {
  A3 A(random_params<double>(2));
  for (int k = 0; k < 3; ++k) EXPECT_LT(A.reduce(2, relation_tensor(A, k)).norm(), 1e-12);
  // x1 x2 lands in A_2 with the right dimension
  auto w = A.multiply(A.gen(0), A.gen(1));
  EXPECT_EQ(w.deg, 2);
  EXPECT_EQ(w.c.size(), 6);
}

TEST(Sklyanin, CommutativeIsSymmetric) {
  A3 C({1.0, -1.0, 0.0});
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    auto u = random_element(C, 1, rng), v = random_element(C, 2, rng);
    EXPECT_LT((C.multiply(u, v) - C.multiply(v, u)).norm(), 1e-12);
  }
}

TEST(Sklyanin, Associativity) {
  A3 A(random_params<double>(4));
  Rng rng(5);
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    // total degree at most 4
    int a = 1 + t % 2, b = 1, c = a == 2 ? 1 : 1 + (t / 2) % 2;
    auto u = random_element(A, a, rng), v = random_element(A, b, rng), w = random_element(A, c, rng);
    auto lhs = A.multiply(A.multiply(u, v), w), rhs = A.multiply(u, A.multiply(v, w));
    worst = std::max(worst, (lhs - rhs).norm() / (u.norm() * v.norm() * w.norm()));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Sklyanin, PointScheme) {
  A3 A(random_params<double>(6));
  auto ps = point_scheme(A);
  EXPECT_GT(smoothness_probe(ps.E->cubic()), 1e-6);
  EXPECT_LT(ps.translation_error, 1e-7);
  for (int k = 0; k < 20; ++k) {
    auto p = ps.E->random_point(100 + k);
    auto q = tau_map(A, p);
    EXPECT_LT(ps.E->residual(q), 1e-9);
    // relations vanish on (tau p, p)
    for (int r = 0; r < 3; ++r) EXPECT_LT(std::abs(A.eval_tensor(2, relation_tensor(A, r), tau_orbit(*ps.E, p, 2))), 1e-9);
  }
  try {
    point_scheme(A3({1.0, -1.0, 0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IdenticallyZeroDet);
  }
}

TEST(Sklyanin, CentralElement) {
  A3 A(random_params<double>(7));
  auto ce = central_element(A);
  EXPECT_EQ(ce.kernel_dim, 1);
  EXPECT_LT(ce.commutator_residual, 1e-9);
  auto ps = point_scheme(A);
  for (int k = 0; k < 20; ++k) {
    auto p = ps.E->random_point(200 + k);
    EXPECT_LT(std::abs(restrict_to_E(A, *ps.E, ce.theta, p)), 1e-9);
  }
  auto cc = central_element(A3({1.0, -1.0, 0.0}));
  EXPECT_EQ(cc.kernel_dim, 10);
  EXPECT_TRUE(cc.multi_dimensional());
}

TEST(Sklyanin, RestrictionIsTwistedMultiplicative) {
  A3 A(random_params<double>(8));
  auto ps = point_scheme(A);
  const auto& E = *ps.E;
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    int a = 1 + t % 3, b = 1 + (t / 3) % 2;
    if (a + b > 4) b = 4 - a;
    auto u = random_element(A, a, rng), v = random_element(A, b, rng);
    auto p = E.random_point(300 + t);
    // one orbit, so both sides share the point normalization
    auto orb = tau_orbit(E, p.normalized(), a + b);
    std::vector<ProjPoint<double>> tail(orb.begin() + b, orb.end());
    Cx<double> rhs2 = A.eval(u, tail) * A.eval(v, orb);
    EXPECT_LT(std::abs(A.eval(A.multiply(u, v), orb) - rhs2), 1e-9 * (1 + std::abs(rhs2)));
  }
}

TEST(Sklyanin, SyzygyZeroIsTauShift) {
  A3 A(random_params<double>(10));
  auto ps = point_scheme(A);
  const auto& E = *ps.E;
  for (int t = 0; t < 10; ++t) {
    auto p = E.random_point(400 + t);
    auto sz = syzygy(A, E, p);
    EXPECT_EQ(sz.kernel_dim, 1);
    EXPECT_LT(E.residual(sz.zero), 1e-9);
    EXPECT_LT(proj_distance(sz.zero, E.tau_pow(p, -2)), 1e-7);
    EXPECT_LT(proj_distance(sz.label, E.tau_pow(p, -3)), 1e-7);
  }
}

TEST(Sklyanin, CentralThroughPoint) {
  A3 A(random_params<double>(12));
  auto ps = point_scheme(A);
  auto ce = central_element(A);
  for (int t = 0; t < 5; ++t) {
    auto p = ps.E->random_point(500 + t);
    auto [l1, l2] = point_ideal(A, p);
    auto cs = express_central_through_point(A, ce.theta, l1, l2);
    EXPECT_LT(cs.residual, 1e-9);
    EXPECT_EQ(cs.ambiguity_dim, 3);
    auto back = A.multiply(l1, cs.f1) + A.multiply(l2, cs.f2);
    EXPECT_LT((back - ce.theta).norm(), 1e-9);
  }
  // commutative: any cubic vanishing at p splits; take x p^perp-products
  A3 C({1.0, -1.0, 0.0});
  ProjPoint<double> p(1.0, 2.0, -1.0);
  auto [l1, l2] = point_ideal(C, p);
  auto theta = C.multiply(C.multiply(l1, C.gen(0)), C.gen(2));
  auto cs = express_central_through_point(C, theta, l1, l2);
  EXPECT_LT(cs.residual, 1e-9);
}
