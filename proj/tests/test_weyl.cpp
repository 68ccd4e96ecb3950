#include <gtest/gtest.h>

#include "ncp/weyl.hpp"

using namespace ncp;

TEST(Weyl, Generators) {
  const int n = 9;
  auto e = WeylElement::identity(n);
  auto s1 = gen_s(1, n);
  EXPECT_EQ(s1 * s1, e);
  // s0 = (transposition(1,n), delta_1 - delta_n)
  auto s0 = gen_s(0, n);
  WeylElement want = WeylElement::identity(n);
  std::swap(want.perm[0], want.perm[n - 1]);
  want.trans[0] = 1;
  want.trans[n - 1] = -1;
  EXPECT_EQ(s0, want);
  EXPECT_EQ(gen_a(2, 5, n) * gen_a(5, 2, n), e);
}

TEST(Weyl, GActsAsRotation) {
  // (g a) = (a_2, ..., a_n, a_1 - 1)
  auto g = gen_g(4);
  EXPECT_EQ(act_on_vector(g, {10, 20, 30, 40}), (std::vector<long>{20, 30, 40, 9}));
  EXPECT_EQ(chi(g), -1);
  EXPECT_EQ(power(g, 4), WeylElement::translation({-1, -1, -1, -1}));
}

TEST(Weyl, CoxeterRelations) {
  for (int n : {6, 9}) {
    for (int i = 0; i < n; ++i) {
      auto si = gen_s(i, n), sj = gen_s((i + 1) % n, n);
      EXPECT_EQ(power(si * sj, 3), WeylElement::identity(n));
      EXPECT_EQ(gen_g(n) * si * inverse(gen_g(n)), gen_s((i + n - 1) % n, n));
      EXPECT_EQ(chi(si), 0);
    }
  }
}

TEST(Weyl, VerifyRelationsReportEmpty) {
  EXPECT_TRUE(verify_relations(9, 50).empty());
  EXPECT_TRUE(verify_relations(6, 50).empty());
}

TEST(Weyl, ParseWord) {
  auto w = parse_word("s3 g g- a(1,5)", 9);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(w[0].kind, Token::S);
  EXPECT_EQ(w[0].i, 3);
  EXPECT_EQ(w[3].str(), "a(1,5)");
  EXPECT_EQ(word_str(w), "s3 g g- a(1,5)");
  EXPECT_THROW(parse_word("s9", 9), Error);
  EXPECT_THROW(parse_word("a(0,2)", 9), Error);
  EXPECT_THROW(parse_word("t1", 9), Error);
  EXPECT_EQ(word_product(w, 9) * word_product(inverse_word(w), 9), WeylElement::identity(9));
}

TEST(Weyl, Decompose) {
  const int n = 9;
  EXPECT_TRUE(decompose_w0(WeylElement::identity(n)).empty());
  auto w = decompose_w0(gen_a(1, 3, n));
  EXPECT_EQ(word_product(w, n), gen_a(1, 3, n));
  EXPECT_EQ(word_str(w), "a(1,2) a(2,3)");
  auto s0 = gen_s(0, n);
  EXPECT_EQ(word_product(decompose_w0(s0), n), s0);
  EXPECT_THROW(decompose_w0(gen_g(n)), Error);
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    auto x = random_element(n, rng, 12);
    std::vector<long> fix(n, 0);
    fix[n - 1] = -chi(x);
    auto w0 = WeylElement::translation(fix) * x;
    auto word = decompose_w0(w0);
    EXPECT_EQ(word_product(word, n), w0);
    long bound = n * (n - 1) / 2, prefix = 0;
    for (int i = 0; i + 1 < n; ++i) bound += std::labs(prefix += w0.trans[i]);
    EXPECT_LE(long(word.size()), bound);
    for (auto& tk : word) EXPECT_TRUE(tk.kind == Token::S || (tk.kind == Token::A && std::abs(tk.i - tk.j) == 1));
  }
}

TEST(Weyl, ChiKernelMembership) {
  // random products of s_k and a(i,j) have chi 0, and every chi-0 element decomposes into them
  Rng rng(5);
  const int n = 6;
  for (int t = 0; t < 50; ++t) {
    WeylElement w = WeylElement::identity(n);
    for (int k = 0; k < 10; ++k) {
      if (rng.next() % 2) w = w * gen_s(int(rng.next() % n), n);
      else {
        int i = 1 + int(rng.next() % n), j = 1 + int(rng.next() % n);
        if (i != j) w = w * gen_a(i, j, n);
      }
    }
    EXPECT_EQ(chi(w), 0);
    EXPECT_EQ(word_product(decompose_w0(w), n), w);
  }
}

TEST(Weyl, ActOnParamsIsLeftAction) {
  auto base = EllipticCurve<double>(random_cubic<double>(21));
  EllipticCurve<double> E(base.cubic(), base.O(), base.random_point(1));
  const int n = 9;
  std::vector<CurvePoint<double>> P;
  for (int i = 0; i < n; ++i) P.push_back(E.random_point(100 + i));
  // a(1,2): p1 -> tau^3 p1, p2 -> tau^-3 p2
  auto Q = act_on_params(gen_a(1, 2, n), P, E);
  EXPECT_LT(proj_distance(Q[0], E.tau_pow(P[0], 3)), 1e-9);
  EXPECT_LT(proj_distance(Q[1], E.tau_pow(P[1], -3)), 1e-9);
  for (int i = 2; i < n; ++i) EXPECT_LT(proj_distance(Q[i], P[i]), 1e-14);
  auto I = act_on_params(WeylElement::identity(n), P, E);
  for (int i = 0; i < n; ++i) EXPECT_LT(proj_distance(I[i], P[i]), 1e-14);
  // s0 sends (p1..p9) to (tau^3 p9, p2..p8, tau^-3 p1)
  auto S = act_on_params(gen_s(0, n), P, E);
  EXPECT_LT(proj_distance(S[0], E.tau_pow(P[8], 3)), 1e-9);
  EXPECT_LT(proj_distance(S[8], E.tau_pow(P[0], -3)), 1e-9);
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    auto a = random_element(n, rng, 5), b = random_element(n, rng, 5);
    auto lhs = act_on_params(a * b, P, E);
    auto rhs = act_on_params(a, act_on_params(b, P, E), E);
    for (int i = 0; i < n; ++i) EXPECT_LT(proj_distance(lhs[i], rhs[i]), 1e-9);
  }
}
