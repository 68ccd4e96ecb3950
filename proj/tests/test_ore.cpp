#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "ncp/ore.hpp"

using namespace ncp;
using namespace ncp::ore;

namespace {

const Q kH(1, 3);

OrePoly X(std::vector<Q> c, Q h = kH) { return OrePoly::in_x(h, c); }

OrePoly random_poly(std::mt19937_64& g, int deg, Q h) {
  OrePoly p(h);
  for (auto [a, b] : monomials_upto(deg)) p.add(a, b, Q(int(g() % 9) - 4, 1 + int(g() % 3)));
  return p;
}

template <class F> ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Config;
}

}  // namespace

TEST(Ore, NormalForm) {
  auto y = OrePoly::y(kH), x = OrePoly::x(kH);
  EXPECT_EQ(normal_form("xy", kH), OrePoly::monomial(kH, 1, 1) + y * kH);
  EXPECT_EQ(normal_form("yx", kH), OrePoly::monomial(kH, 1, 1));
  OrePoly want = OrePoly::monomial(kH, 1, 2) + OrePoly::monomial(kH, 1, 1, 2 * kH) + OrePoly::monomial(kH, 1, 0, kH * kH);
  EXPECT_EQ(normal_form("xxy", kH), want);
  EXPECT_EQ(x * y, normal_form("xy", kH));
  EXPECT_EQ(x * y - y * x, y * kH);
  EXPECT_EQ(kind_of([] { normal_form("xz", kH); }), ErrorKind::Parse);
}

TEST(Ore, Confluence) {
  std::mt19937_64 g(4);
  for (int k = 0; k < 20; ++k) {
    std::string a, b;
    for (int i = 0; i < 1 + int(g() % 4); ++i) a += "xy"[g() % 2];
    for (int i = 0; i < 1 + int(g() % 4); ++i) b += "xy"[g() % 2];
    EXPECT_EQ(normal_form(a, kH) * normal_form(b, kH), normal_form(a + b, kH)) << a << " " << b;
  }
}

TEST(Ore, Multiply) {
  std::mt19937_64 g(7);
  for (int k = 0; k < 5; ++k) {
    auto a = random_poly(g, 3, kH), b = random_poly(g, 3, kH), c = random_poly(g, 3, kH);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
  Q zero(0);
  auto a = random_poly(g, 3, zero), b = random_poly(g, 2, zero);
  EXPECT_EQ(a * b, b * a);
  EXPECT_EQ(kind_of([] { OrePoly::x(kH) * OrePoly::x(Q(1, 2)); }), ErrorKind::HbarMismatch);
}

TEST(Ore, PointMaps) {
  EXPECT_EQ(point_maps(X({2, -3, 1})).roots, (std::vector<Q>{1, 2}));
  Q s(5, 7);
  auto f = X({-s, 1}) + normal_form("xyy", kH);
  EXPECT_EQ(point_maps(f).roots, std::vector<Q>{s});
  auto rep = X({-1, 1}) * X({-1, 1}) * X({Q(1, 2), 1});
  EXPECT_EQ(point_maps(rep).roots, (std::vector<Q>{Q(-1, 2), 1, 1}));
  auto irr = X({-2, 0, 1}) * X({-3, 1});
  auto pm = point_maps(irr);
  EXPECT_EQ(pm.roots, std::vector<Q>{3});
  EXPECT_EQ(pm.remainder.size(), 3u);
  EXPECT_EQ(kind_of([] { point_maps(OrePoly::y(kH)); }), ErrorKind::ZeroF0);
}

TEST(Ore, HeckeExamples) {
  Q s(3, 2);
  auto [f1, r1] = hecke_verify(X({-s, 1}), s, 3);
  EXPECT_EQ(r1.roots_after, std::vector<Q>{s - kH});
  EXPECT_TRUE(r1.f0_match);

  auto [f2, r2] = hecke_verify(X({2, -3, 1}), 1, 4);
  EXPECT_EQ(r2.roots_after, (std::vector<Q>{Q(2, 3), 2}));
  EXPECT_TRUE(r2.roots_match);

  // the chain m_{s-hbar} m_s M
  auto [f3, r3] = hecke_verify(f2, Q(2, 3), 4);
  EXPECT_EQ(r3.roots_after, (std::vector<Q>{Q(1, 3), 2}));
  EXPECT_TRUE(r3.f0_match);

  EXPECT_EQ(kind_of([] { hecke_verify(X({2, -3, 1}), 5, 4); }), ErrorKind::NotARoot);
  EXPECT_EQ(kind_of([] { hecke_verify(X({2, -3, 1}), 1, 3); }), ErrorKind::Config);
}

TEST(Ore, WithYTerms) {
  // f = f0 + f1 y with f1(s, y) constant
  Q s(-1, 2);
  auto f = X({-s, 1}) * X({-2, 1}) + (OrePoly::constant(kH, 3) + X({-s, 1}) * OrePoly::y(kH)) * OrePoly::y(kH);
  auto [fp, rep] = hecke_verify(f, s, f.degree() + 2);
  EXPECT_TRUE(rep.roots_match);
  EXPECT_TRUE(rep.f0_match);
  EXPECT_EQ(fp.degree(), f.degree());
}

TEST(Ore, CommutativeLimit) {
  Q zero(0);
  auto f = X({2, -3, 1}, zero) * X({-4, 1}, zero);
  auto [fp, rep] = hecke_verify(f, 2, 5);
  EXPECT_EQ(rep.roots_after, rep.roots_before);
  EXPECT_TRUE(rep.f0_match);
}

TEST(Ore, ResonantRootsReported) {
  // s - hbar is also a root
  auto f = X({0, 1}) * X({Q(1, 3), 1}) * X({2, 1});
  EXPECT_EQ(kind_of([&] { hecke_verify(f, 0, 5); }), ErrorKind::NoCyclicGenerator);
}

TEST(Ore, SeededLemma) {
  auto t0 = std::chrono::steady_clock::now();
  auto inst = lemma_instances(2024, 25);
  int with_y = 0;
  for (auto& in : inst) {
    auto pm = point_maps(in.f);
    EXPECT_LE(int(in.f.f0().size()) - 1, 4);
    auto [fp, rep] = hecke_verify(in.f, in.s, in.f.degree() + 2);
    EXPECT_TRUE(rep.roots_match) << in.f.str();
    EXPECT_TRUE(rep.f0_match) << in.f.str();
    for (auto& [k, c] : in.f.terms()) with_y += k.first > 0;
  }
  EXPECT_GT(with_y, 0);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 5.0);
}
