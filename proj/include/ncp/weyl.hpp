// Extended affine Weyl group S(n) x Z^n acting by w(a) = sigma.a + v.
#pragma once

#include <cstdlib>
#include <numeric>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "ncp/elliptic.hpp"

namespace ncp {

// perm[i] = sigma(i), 0-based; (sigma.a)_i = a_{sigma^{-1}(i)}.
struct WeylElement {
  int n = 0;
  std::vector<int> perm;
  std::vector<long> trans;

  static WeylElement identity(int n) {
    WeylElement w;
    w.n = n;
    w.perm.resize(n);
    std::iota(w.perm.begin(), w.perm.end(), 0);
    w.trans.assign(n, 0);
    return w;
  }
  static WeylElement translation(std::vector<long> v) {
    WeylElement w = identity(int(v.size()));
    w.trans = std::move(v);
    return w;
  }

  bool operator==(const WeylElement& o) const { return n == o.n && perm == o.perm && trans == o.trans; }

  std::vector<int> inverse_perm() const {
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[perm[i]] = i;
    return inv;
  }
  bool is_translation() const {
    for (int i = 0; i < n; ++i)
      if (perm[i] != i) return false;
    return true;
  }
  bool is_identity() const {
    if (!is_translation()) return false;
    for (long v : trans)
      if (v) return false;
    return true;
  }
};

// (s1, v1)(s2, v2) = (s1 s2, s1.v2 + v1): first apply w2, then w1.
inline WeylElement multiply(const WeylElement& a, const WeylElement& b) {
  if (a.n != b.n) throw Error(ErrorKind::SizeMismatch, "Weyl elements of different rank");
  WeylElement r;
  r.n = a.n;
  r.perm.resize(a.n);
  r.trans.assign(a.n, 0);
  for (int i = 0; i < a.n; ++i) r.perm[i] = a.perm[b.perm[i]];
  for (int j = 0; j < a.n; ++j) r.trans[a.perm[j]] = b.trans[j];
  for (int i = 0; i < a.n; ++i) r.trans[i] += a.trans[i];
  return r;
}

inline WeylElement operator*(const WeylElement& a, const WeylElement& b) { return multiply(a, b); }

inline WeylElement inverse(const WeylElement& w) {
  WeylElement r;
  r.n = w.n;
  r.perm = w.inverse_perm();
  r.trans.assign(w.n, 0);
  // -(sigma^{-1}.v)_i = -v_{sigma(i)}
  for (int i = 0; i < w.n; ++i) r.trans[i] = -w.trans[w.perm[i]];
  return r;
}

inline WeylElement power(const WeylElement& w, long k) {
  WeylElement base = k < 0 ? inverse(w) : w, acc = WeylElement::identity(w.n);
  for (long i = 0; i < std::labs(k); ++i) acc = acc * base;
  return acc;
}

inline long chi(const WeylElement& w) {
  long s = 0;
  for (long v : w.trans) s += v;
  return s;
}

// w acting on an integer vector a
inline std::vector<long> act_on_vector(const WeylElement& w, const std::vector<long>& a) {
  std::vector<long> r(w.n);
  for (int j = 0; j < w.n; ++j) r[w.perm[j]] = a[j];
  for (int i = 0; i < w.n; ++i) r[i] += w.trans[i];
  return r;
}

struct Token {
  enum Kind { S, G, GInv, A } kind = S;
  int i = 0, j = 0;  // 1-based as written; s_k uses i = k

  std::string str() const {
    switch (kind) {
      case S: return "s" + std::to_string(i);
      case G: return "g";
      case GInv: return "g-";
      case A: return "a(" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
    return "?";
  }
  bool operator==(const Token& o) const { return kind == o.kind && i == o.i && j == o.j; }
};

using GeneratorWord = std::vector<Token>;

inline std::string word_str(const GeneratorWord& w) {
  std::string s;
  for (size_t k = 0; k < w.size(); ++k) s += (k ? " " : "") + w[k].str();
  return s;
}

inline WeylElement gen_g(int n) {
  WeylElement w;
  w.n = n;
  w.perm.resize(n);
  // (g a)_i = a_{i+1}, (g a)_{n-1} = a_0 - 1
  for (int j = 0; j < n; ++j) w.perm[j] = (j + n - 1) % n;
  w.trans.assign(n, 0);
  w.trans[n - 1] = -1;
  return w;
}

inline WeylElement gen_s(int k, int n) {
  if (k < 0 || k >= n) throw Error(ErrorKind::IndexRange, "s_k index out of range");
  if (k == 0) {
    WeylElement g = gen_g(n);
    return g * gen_s(1, n) * inverse(g);
  }
  WeylElement w = WeylElement::identity(n);
  std::swap(w.perm[k - 1], w.perm[k]);
  return w;
}

inline WeylElement gen_a(int i, int j, int n) {
  if (i < 1 || j < 1 || i > n || j > n) throw Error(ErrorKind::IndexRange, "a(i,j) index out of range");
  WeylElement w = WeylElement::identity(n);
  w.trans[i - 1] += 1;
  w.trans[j - 1] -= 1;
  return w;
}

inline WeylElement from_generator(const Token& t, int n) {
  switch (t.kind) {
    case Token::S: return gen_s(t.i, n);
    case Token::G: return gen_g(n);
    case Token::GInv: return inverse(gen_g(n));
    case Token::A:
      if (t.i == t.j) throw Error(ErrorKind::IndexRange, "a(i,i) is not a root");
      return gen_a(t.i, t.j, n);
  }
  return WeylElement::identity(n);
}

inline GeneratorWord parse_word(const std::string& text, int n) {
  static const std::regex s_re(R"(s(\d+))"), a_re(R"(a\((\d+),(\d+)\))");
  std::istringstream in(text);
  std::string tok;
  GeneratorWord w;
  while (in >> tok) {
    std::smatch m;
    Token t;
    if (tok == "g") {
      t.kind = Token::G;
    } else if (tok == "g-") {
      t.kind = Token::GInv;
    } else if (std::regex_match(tok, m, s_re)) {
      t.kind = Token::S;
      t.i = std::stoi(m[1]);
    } else if (std::regex_match(tok, m, a_re)) {
      t.kind = Token::A;
      t.i = std::stoi(m[1]);
      t.j = std::stoi(m[2]);
    } else {
      throw Error(ErrorKind::Parse, "bad token '" + tok + "'");
    }
    from_generator(t, n);  // range check
    w.push_back(t);
  }
  return w;
}

inline WeylElement word_product(const GeneratorWord& w, int n) {
  WeylElement r = WeylElement::identity(n);
  for (auto& t : w) r = r * from_generator(t, n);
  return r;
}

inline GeneratorWord inverse_word(const GeneratorWord& w) {
  GeneratorWord r;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    Token t = *it;
    if (t.kind == Token::G) t.kind = Token::GInv;
    else if (t.kind == Token::GInv) t.kind = Token::G;
    else if (t.kind == Token::A) std::swap(t.i, t.j);
    r.push_back(t);
  }
  return r;
}

// Word over {s_1..s_{n-1}, a(i,i+1), a(i+1,i)}: translation part first, then the permutation.
// Length is sum_i |v_1 + ... + v_i| + (inversions of sigma).
inline GeneratorWord decompose_w0(const WeylElement& w) {
  if (chi(w) != 0) throw Error(ErrorKind::NotInW0, "chi(w) != 0", double(chi(w)));
  GeneratorWord out;
  long prefix = 0;
  for (int i = 0; i + 1 < w.n; ++i) {
    prefix += w.trans[i];
    Token t;
    t.kind = Token::A;
    t.i = prefix > 0 ? i + 1 : i + 2;
    t.j = prefix > 0 ? i + 2 : i + 1;
    for (long k = 0; k < std::labs(prefix); ++k) out.push_back(t);
  }
  // sigma s_{k1} ... s_{km} = e  =>  sigma = s_{km} ... s_{k1}
  std::vector<int> arr = w.perm;
  std::vector<int> ks;
  for (int pass = 0; pass < w.n; ++pass)
    for (int k = 0; k + 1 < w.n; ++k)
      if (arr[k] > arr[k + 1]) {
        std::swap(arr[k], arr[k + 1]);
        ks.push_back(k + 1);
      }
  for (auto it = ks.rbegin(); it != ks.rend(); ++it) {
    Token t;
    t.kind = Token::S;
    t.i = *it;
    out.push_back(t);
  }
  return out;
}

// (w.P)_i = tau^{3 v_i}(P_{sigma^{-1}(i)})
template <class R>
std::vector<CurvePoint<R>> act_on_params(const WeylElement& w, const std::vector<CurvePoint<R>>& P,
                                         const EllipticCurve<R>& E) {
  if (int(P.size()) != w.n) throw Error(ErrorKind::SizeMismatch, "parameter tuple size");
  std::vector<CurvePoint<R>> out(w.n);
  for (int j = 0; j < w.n; ++j) out[w.perm[j]] = P[j];
  for (int i = 0; i < w.n; ++i) out[i] = E.tau_pow(out[i], 3 * w.trans[i]);
  return out;
}

inline WeylElement random_element(int n, Rng& rng, int len = 8) {
  WeylElement w = WeylElement::identity(n);
  for (int k = 0; k < len; ++k) {
    int c = int(rng.next() % 3);
    if (c == 0) w = w * gen_s(int(rng.next() % n), n);
    else if (c == 1) w = w * (rng.next() % 2 ? gen_g(n) : inverse(gen_g(n)));
    else {
      int i = 1 + int(rng.next() % n), j = 1 + int(rng.next() % n);
      if (i != j) w = w * gen_a(i, j, n);
    }
  }
  return w;
}

// Defining relations checked at the group-element level; returns the failures.
inline std::vector<std::string> verify_relations(int n, int trials, std::uint64_t seed = 1) {
  std::vector<std::string> fail;
  auto e = WeylElement::identity(n);
  auto g = gen_g(n), gi = inverse(g);
  for (int i = 0; i < n; ++i) {
    auto si = gen_s(i, n);
    if (!(si * si == e)) fail.push_back("s" + std::to_string(i) + "^2");
    auto sj = gen_s((i + 1) % n, n);
    if (!(power(si * sj, 3) == e)) fail.push_back("(s" + std::to_string(i) + " s" + std::to_string((i + 1) % n) + ")^3");
    for (int j = 0; j < n; ++j) {
      int d = std::abs(i - j);
      d = std::min(d, n - d);
      if (d >= 2 && !(power(si * gen_s(j, n), 2) == e))
        fail.push_back("(s" + std::to_string(i) + " s" + std::to_string(j) + ")^2");
    }
    if (!(g * si * gi == gen_s((i + n - 1) % n, n))) fail.push_back("g s" + std::to_string(i) + " g^-1");
  }
  if (!(power(g, n) == WeylElement::translation(std::vector<long>(n, -1)))) fail.push_back("g^n");
  if (chi(g) != -1) fail.push_back("chi(g)");
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    auto a = random_element(n, rng), b = random_element(n, rng), c = random_element(n, rng);
    if (!((a * b) * c == a * (b * c))) fail.push_back("associativity");
    if (!(inverse(a) * a == e)) fail.push_back("inverse");
    if (chi(a * b) != chi(a) + chi(b)) fail.push_back("chi homomorphism");
    auto x = random_element(n, rng);
    std::vector<long> v(n);
    for (auto& vi : v) vi = long(rng.next() % 7) - 3;
    if (act_on_vector(a * x, v) != act_on_vector(a, act_on_vector(x, v))) fail.push_back("action axiom");
    // a W0 element: multiply by a pure translation to cancel chi
    std::vector<long> fix(n, 0);
    fix[0] = -chi(a);
    auto w0 = WeylElement::translation(fix) * a;
    if (!(word_product(decompose_w0(w0), n) == w0)) fail.push_back("decompose_w0");
  }
  return fail;
}

}  // namespace ncp
