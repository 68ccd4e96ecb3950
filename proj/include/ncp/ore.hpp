// Exact model R = <x, y>/(xy - yx = hbar y) over Q, and the root shift under M -> M m_s.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ncp/errors.hpp"

namespace ncp::ore {

using Q = boost::multiprecision::cpp_rational;
using Z = boost::multiprecision::cpp_int;

// sum c_ab y^a x^b
class OrePoly {
 public:
  OrePoly() = default;
  explicit OrePoly(Q hbar) : hbar_(std::move(hbar)) {}
  static OrePoly constant(Q hbar, Q c) { return monomial(std::move(hbar), 0, 0, std::move(c)); }
  static OrePoly x(Q hbar) { return monomial(std::move(hbar), 0, 1); }
  static OrePoly y(Q hbar) { return monomial(std::move(hbar), 1, 0); }
  static OrePoly monomial(Q hbar, int a, int b, Q c = 1) {
    OrePoly p(std::move(hbar));
    p.add(a, b, c);
    return p;
  }
  // y-free polynomial from coefficients c0 + c1 x + ...
  static OrePoly in_x(Q hbar, const std::vector<Q>& c) {
    OrePoly p(std::move(hbar));
    for (size_t b = 0; b < c.size(); ++b) p.add(0, int(b), c[b]);
    return p;
  }

  const Q& hbar() const { return hbar_; }
  const std::map<std::pair<int, int>, Q>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Q coeff(int a, int b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? Q(0) : it->second;
  }
  int degree() const {
    int d = -1;
    for (auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
    return d;
  }
  void add(int a, int b, const Q& c) {
    if (c == 0) return;
    auto& t = terms_[{a, b}];
    t += c;
    if (t == 0) terms_.erase({a, b});
  }

  OrePoly operator+(const OrePoly& o) const {
    check(o);
    OrePoly r = *this;
    for (auto& [k, c] : o.terms_) r.add(k.first, k.second, c);
    return r;
  }
  OrePoly operator-(const OrePoly& o) const { return *this + o * Q(-1); }
  OrePoly operator*(const Q& s) const {
    OrePoly r(hbar_);
    if (s != 0)
      for (auto& [k, c] : terms_) r.terms_[k] = c * s;
    return r;
  }
  // x^b y^c = y^c (x + c hbar)^b
  OrePoly operator*(const OrePoly& o) const {
    check(o);
    OrePoly r(hbar_);
    for (auto& [k1, c1] : terms_)
      for (auto& [k2, c2] : o.terms_) {
        const int a = k1.first, b = k1.second, c = k2.first, e = k2.second;
        Q shift = hbar_ * c, binom = 1, pw = 1;
        std::vector<Q> powers(b + 1);
        for (int j = 0; j <= b; ++j) powers[j] = pw, pw *= shift;
        for (int j = 0; j <= b; ++j) {
          r.add(a + c, j + e, c1 * c2 * binom * powers[b - j]);
          binom = binom * (b - j) / (j + 1);
        }
      }
    return r;
  }
  bool operator==(const OrePoly& o) const { return hbar_ == o.hbar_ && terms_ == o.terms_; }

  // coefficients of the y-free part in x
  std::vector<Q> f0() const {
    std::vector<Q> c;
    for (auto& [k, v] : terms_)
      if (k.first == 0) {
        if (int(c.size()) <= k.second) c.resize(k.second + 1);
        c[k.second] = v;
      }
    return c;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto& [k, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")";
      if (k.first) s += "*y^" + std::to_string(k.first);
      if (k.second) s += "*x^" + std::to_string(k.second);
    }
    return s;
  }

 private:
  void check(const OrePoly& o) const {
    if (hbar_ != o.hbar_) throw Error(ErrorKind::HbarMismatch, "operands use different hbar");
  }
  Q hbar_{0};
  std::map<std::pair<int, int>, Q> terms_;
};

// word in the letters x, y (other characters rejected), multiplied out
inline OrePoly normal_form(const std::string& word, const Q& hbar) {
  OrePoly r = OrePoly::constant(hbar, 1);
  for (char ch : word) {
    if (ch == 'x') r = r * OrePoly::x(hbar);
    else if (ch == 'y') r = r * OrePoly::y(hbar);
    else throw Error(ErrorKind::Parse, std::string("unexpected letter ") + ch);
  }
  return r;
}

// ---- univariate helpers over Q ----

inline void trim(std::vector<Q>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline std::vector<Q> poly_mul(const std::vector<Q>& a, const std::vector<Q>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Q> r(a.size() + b.size() - 1, Q(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// divide by (x - s); remainder returned through rem
inline std::vector<Q> deflate(const std::vector<Q>& p, const Q& s, Q* rem = nullptr) {
  const int n = int(p.size()) - 1;
  if (n < 1) {
    if (rem) *rem = p.empty() ? Q(0) : p[0];
    return {};
  }
  std::vector<Q> q(n);
  Q acc = 0;
  for (int k = n; k >= 1; --k) {
    acc = acc * s + p[k];
    q[k - 1] = acc;
  }
  if (rem) *rem = acc * s + p[0];
  return q;
}

inline Q eval_poly(const std::vector<Q>& p, const Q& x) {
  Q acc = 0;
  for (size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

inline std::vector<Z> divisors(Z n) {
  if (n < 0) n = -n;
  std::vector<Z> out;
  for (Z d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  return out;
}

struct PointMaps {
  std::vector<Q> roots;       // rational roots with multiplicity, ascending
  std::vector<Q> remainder;   // factor of f0 without rational roots
};

// rational roots of f0 by the rational root test
inline PointMaps point_maps(const OrePoly& f) {
  std::vector<Q> p = f.f0();
  trim(p);
  if (p.empty()) throw Error(ErrorKind::ZeroF0, "f has no y-free part");
  PointMaps out;
  while (p.size() > 1 && p[0] == 0) {
    out.roots.push_back(0);
    p.erase(p.begin());
  }
  Z lcm = 1;
  for (auto& c : p) lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(c));
  std::vector<Z> ip;
  for (auto& c : p) ip.push_back(boost::multiprecision::numerator(c * Q(lcm)));
  std::vector<Q> cands;
  if (p.size() > 1)
    for (auto& a : divisors(ip.front()))
      for (auto& b : divisors(ip.back())) cands.push_back(Q(a, b)), cands.push_back(Q(-a, b));
  for (auto& r : cands) {
    Q rem;
    for (;;) {
      auto q = deflate(p, r, &rem);
      if (p.size() < 2 || rem != 0) break;
      p = q;
      out.roots.push_back(r);
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  out.remainder = p;
  return out;
}

// ---- exact linear algebra ----

using QMat = std::vector<std::vector<Q>>;

// null space of a (rows x cols), as column vectors
inline std::vector<std::vector<Q>> null_space(QMat a, int cols) {
  const int rows = int(a.size());
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[r], a[p]);
    Q inv = 1 / a[r][c];
    for (int j = c; j < cols; ++j) a[r][j] *= inv;
    for (int i = 0; i < rows; ++i)
      if (i != r && a[i][c] != 0) {
        Q m = a[i][c];
        for (int j = c; j < cols; ++j) a[i][j] -= m * a[r][j];
      }
    pivots.push_back(c);
    ++r;
  }
  std::vector<std::vector<Q>> out;
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Q> v(cols, Q(0));
    v[f] = 1;
    for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a[k][f];
    out.push_back(v);
  }
  return out;
}

// monomials y^a x^b with a + b <= n
inline std::vector<std::pair<int, int>> monomials_upto(int n) {
  std::vector<std::pair<int, int>> out;
  for (int t = 0; t <= n; ++t)
    for (int a = t; a >= 0; --a) out.push_back({a, t - a});
  return out;
}

inline int monomial_index(int a, int b) {
  const int t = a + b;
  return t * (t + 1) / 2 + (t - a);
}

// columns p * m for the monomials m of degree <= n, laid out in monomials of degree <= out_deg
inline void append_right_multiples(QMat& cols, const OrePoly& p, int n, int out_deg) {
  if (n < 0) return;
  const int rows = int(monomials_upto(out_deg).size());
  for (auto [a, b] : monomials_upto(n)) {
    OrePoly prod = p * OrePoly::monomial(p.hbar(), a, b);
    std::vector<Q> col(rows, Q(0));
    for (auto& [k, c] : prod.terms()) {
      if (k.first + k.second > out_deg) throw Error(ErrorKind::SizeMismatch, "product exceeds the filtration level");
      col[monomial_index(k.first, k.second)] = c;
    }
    cols.push_back(col);
  }
}

inline QMat transpose(const QMat& cols, int rows) {
  QMat m(rows, std::vector<Q>(cols.size(), Q(0)));
  for (size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < rows; ++i) m[i][j] = cols[j][i];
  return m;
}

// is target in p1 R_{<=n1} + p2 R_{<=n2} (everything of degree <= out_deg)?
inline bool in_right_span(const OrePoly& target, const OrePoly& p1, int n1, const OrePoly& p2, int n2, int out_deg) {
  QMat cols;
  append_right_multiples(cols, p1, n1, out_deg);
  append_right_multiples(cols, p2, n2, out_deg);
  const int rows = int(monomials_upto(out_deg).size());
  std::vector<Q> t(rows, Q(0));
  for (auto& [k, c] : target.terms()) {
    if (k.first + k.second > out_deg) return false;
    t[monomial_index(k.first, k.second)] = c;
  }
  cols.push_back(t);
  // target is in the span iff some null vector has a nonzero last entry
  for (auto& v : null_space(transpose(cols, rows), int(cols.size())))
    if (v.back() != 0) return true;
  return false;
}

struct HeckeReport {
  OrePoly c;                    // cyclic generator of M' = m_s / fR
  Q t;                          // c = (x - s) + t q(x) y with q = f0 / (x - s)
  int bound = 0;                // filtration level used
  int tried = 0;                // candidates rejected before c
  std::vector<Q> roots_before, roots_after, expected;
  bool roots_match = false;
  bool f0_match = false;        // f'_0 proportional to (x - (s - hbar)) f0 / (x - s)
};

inline std::vector<Q> default_t_family() { return {0, 1, -1, 2, Q(1, 2), -2, 3, Q(-1, 3), 5}; }

// minimal g with c g in fR; checks at level N that every annihilator of degree <= N - deg c is in gR
inline OrePoly annihilator(const OrePoly& c, const OrePoly& f, int N) {
  const Q& h = f.hbar();
  const int dc = c.degree(), d = f.degree();
  auto solve = [&](int m) {
    QMat cols;
    append_right_multiples(cols, c, m, m + dc);
    append_right_multiples(cols, f * Q(-1), m + dc - d, m + dc);
    auto ns = null_space(transpose(cols, int(monomials_upto(m + dc).size())), int(cols.size()));
    std::vector<OrePoly> out;
    auto mons = monomials_upto(m);
    for (auto& v : ns) {
      OrePoly g(h);
      for (size_t k = 0; k < mons.size(); ++k) g.add(mons[k].first, mons[k].second, v[k]);
      out.push_back(g);
    }
    return out;
  };
  for (int m = 0; m <= N - dc; ++m) {
    auto gs = solve(m);
    if (gs.empty()) continue;
    if (gs.size() > 1) throw Error(ErrorKind::NotPrincipal, "several minimal annihilators", double(gs.size()));
    const OrePoly& g = gs[0];
    // R/gR must grow like R/fR
    if (g.degree() != d) throw Error(ErrorKind::NotPrincipal, "annihilator degree differs from deg f", double(g.degree()));
    for (auto& a : solve(N - dc))
      if (!in_right_span(a, g, N - dc - g.degree(), OrePoly(h), -1, N - dc))
        throw Error(ErrorKind::NotPrincipal, "annihilator outside gR at the bound");
    return g;
  }
  throw Error(ErrorKind::NotPrincipal, "no annihilator below the bound");
}

// f' with M m_s = cR/fR ~ R/f'R for M = R/fR; the bound is raised up to 2 deg f + 2
inline std::pair<OrePoly, HeckeReport> hecke_verify(const OrePoly& f, const Q& s, int N,
                                                    const std::vector<Q>& t_family = default_t_family()) {
  const Q& h = f.hbar();
  const int d = f.degree();
  HeckeReport rep;
  auto pm = point_maps(f);
  if (std::find(pm.roots.begin(), pm.roots.end(), s) == pm.roots.end())
    throw Error(ErrorKind::NotARoot, "s is not a root of f0");
  if (N < d + 2) throw Error(ErrorKind::Config, "bound must be at least deg f + 2");
  std::vector<Q> f0 = f.f0();
  trim(f0);
  std::vector<Q> q = deflate(f0, s);
  OrePoly xs = OrePoly::x(h) - OrePoly::constant(h, s), y = OrePoly::y(h);
  OrePoly qy = OrePoly::in_x(h, q) * y;
  for (int n = N; n <= std::max(N, 2 * d + 2); ++n)
  for (const Q& t : t_family) {
    OrePoly c = xs + qy * t;
    const int dc = c.degree();
    // m_s = (x - s)R + yR lies in cR + fR, exactly
    if (!in_right_span(y, c, n - dc, f, n - d, n) || !in_right_span(xs, c, n - dc, f, n - d, n)) {
      ++rep.tried;
      continue;
    }
    OrePoly fp;
    try {
      fp = annihilator(c, f, n);
    } catch (const Error&) {
      ++rep.tried;
      continue;
    }
    rep.c = c;
    rep.t = t;
    rep.bound = n;
    rep.roots_before = pm.roots;
    rep.roots_after = point_maps(fp).roots;
    rep.expected = pm.roots;
    rep.expected.erase(std::find(rep.expected.begin(), rep.expected.end(), s));
    rep.expected.push_back(s - h);
    std::sort(rep.expected.begin(), rep.expected.end());
    rep.roots_match = rep.roots_after == rep.expected;
    // exact polynomial comparison, irrational factors included
    std::vector<Q> g0 = fp.f0();
    trim(g0);
    std::vector<Q> want = poly_mul(q, {-(s - h), Q(1)});
    rep.f0_match = !g0.empty() && g0.size() == want.size();
    if (rep.f0_match) {
      Q ratio = g0.back() / want.back();
      for (size_t k = 0; k < want.size(); ++k) rep.f0_match = rep.f0_match && g0[k] == ratio * want[k];
    }
    return {fp, rep};
  }
  throw Error(ErrorKind::NoCyclicGenerator, "no generator (x - s) + t q(x) y in the seeded family", double(rep.tried));
}

struct LemmaInstance {
  OrePoly f;
  Q s;
};

// Seeded (f, s) with distinct rational roots, s - hbar not a root, deg f0 in 1..4.
// Odd instances carry f1 y with f1 = kappa + (x - s) h, so f1(s, y) is a nonzero constant.
inline std::vector<LemmaInstance> lemma_instances(std::uint64_t seed, int count) {
  std::mt19937_64 g(seed);
  auto small = [&](int span, int den) { return Q(int(g() % (2 * span + 1)) - span, 1 + int(g() % den)); };
  const std::vector<Q> hbars = {Q(1, 3), Q(-1, 2), Q(2, 5), Q(1), Q(-3, 4)};
  std::vector<LemmaInstance> out;
  while (int(out.size()) < count) {
    const int k = int(out.size());
    const Q h = hbars[k % hbars.size()];
    const int deg = 1 + k % 4;
    std::vector<Q> roots;
    while (int(roots.size()) < deg) {
      Q r = small(3, 2);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
    const Q s = roots[0];
    if (std::find(roots.begin(), roots.end(), s - h) != roots.end()) continue;
    OrePoly f = OrePoly::constant(h, 1);
    for (auto& r : roots) f = f * OrePoly::in_x(h, {-r, 1});
    if (k % 2 == 1) {
      Q kappa = small(3, 3);
      if (kappa == 0) kappa = 1;
      OrePoly f1 = OrePoly::constant(h, kappa);
      if (deg >= 2) {
        OrePoly hh(h);
        for (auto [a, b] : monomials_upto(deg - 2)) hh.add(a, b, small(2, 2));
        f1 = f1 + OrePoly::in_x(h, {-s, 1}) * hh;
      }
      f = f + f1 * OrePoly::y(h);
    }
    out.push_back({f, s});
  }
  return out;
}

}  // namespace ncp::ore
