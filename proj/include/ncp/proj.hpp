// Points of P^2 and homogeneous ternary forms.
#pragma once

#include <array>
#include <vector>

#include "ncp/numeric.hpp"

namespace ncp {

template <class R> struct ProjPoint {
  std::array<Cx<R>, 3> c{};

  ProjPoint() = default;
  ProjPoint(Cx<R> x, Cx<R> y, Cx<R> z) : c{x, y, z} {}
  template <class T>
    requires std::is_arithmetic_v<T>
  ProjPoint(T x, T y, T z) : c{Cx<R>(R(x)), Cx<R>(R(y)), Cx<R>(R(z))} {}
  static ProjPoint from(const Vec<R>& v) { return ProjPoint(v(0), v(1), v(2)); }

  Cx<R>& operator[](int i) { return c[i]; }
  const Cx<R>& operator[](int i) const { return c[i]; }

  Vec<R> vec() const {
    Vec<R> v(3);
    v << c[0], c[1], c[2];
    return v;
  }
  R max_abs() const { return std::max({mag(c[0]), mag(c[1]), mag(c[2])}); }
  bool is_zero() const { return max_abs() == R(0); }

  // index used for normalization: first coordinate whose modulus is within 1e-9 of the max
  int pivot() const {
    R m = max_abs();
    for (int i = 0; i < 3; ++i)
      if (mag(c[i]) >= m * (R(1) - R(1e-9))) return i;
    return 0;
  }
  ProjPoint normalized() const {
    if (is_zero()) throw Error(ErrorKind::DegenerateLine, "zero projective point");
    Cx<R> s = c[pivot()];
    return ProjPoint(c[0] / s, c[1] / s, c[2] / s);
  }
  // scale so that coordinate k equals one (holomorphic chart normalization)
  ProjPoint scaled_at(int k) const {
    Cx<R> s = c[k];
    return ProjPoint(c[0] / s, c[1] / s, c[2] / s);
  }
};

template <class R> Cx<R> dot(const ProjPoint<R>& a, const ProjPoint<R>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class R> ProjPoint<R> cross(const ProjPoint<R>& a, const ProjPoint<R>& b) {
  return ProjPoint<R>(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

template <class R> Vec<R> cross3(const Vec<R>& a, const Vec<R>& b) {
  Vec<R> v(3);
  v << a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0);
  return v;
}

// max-norm distance after matching the scale at the pivot of one argument; symmetrized
template <class R> R proj_distance(const ProjPoint<R>& p, const ProjPoint<R>& q) {
  auto one_way = [](const ProjPoint<R>& a, const ProjPoint<R>& b) {
    ProjPoint<R> an = a.normalized();
    int k = a.pivot();
    if (mag(b[k]) == R(0)) return R(1e30);
    ProjPoint<R> bn = b.scaled_at(k);
    R d(0);
    for (int i = 0; i < 3; ++i) d = std::max(d, mag(an[i] - bn[i]));
    return d;
  };
  return std::min(one_way(p, q), one_way(q, p));
}

template <class R> bool proj_equal(const ProjPoint<R>& p, const ProjPoint<R>& q, R tol) {
  return proj_distance(p, q) <= tol;
}

// Monomials x^a y^b z^c of degree d in graded-lex order: a descending, then b descending.
struct Monomials {
  static int count(int d) { return d < 0 ? 0 : (d + 1) * (d + 2) / 2; }
  static std::vector<std::array<int, 3>> list(int d) {
    std::vector<std::array<int, 3>> out;
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b) out.push_back({a, b, d - a - b});
    return out;
  }
  static int index(int d, int a, int b) {
    // position of (a,b,d-a-b): all monomials with larger a come first
    int before = 0;
    for (int aa = d; aa > a; --aa) before += d - aa + 1;
    return before + (d - a - b);
  }
};

// Homogeneous ternary form of degree d.
template <class R> struct Form {
  int d = 0;
  std::vector<Cx<R>> a;  // graded-lex coefficients

  Form() = default;
  explicit Form(int deg) : d(deg), a(Monomials::count(deg), Cx<R>(0)) {}
  Form(int deg, std::vector<Cx<R>> coeffs) : d(deg), a(std::move(coeffs)) {
    if (int(a.size()) != Monomials::count(deg)) throw Error(ErrorKind::SizeMismatch, "form coefficient count");
  }
  static Form linear(const ProjPoint<R>& l) { return Form(1, {l[0], l[1], l[2]}); }
  static Form constant(Cx<R> v) { return Form(0, {v}); }

  Cx<R>& at(int ea, int eb) { return a[Monomials::index(d, ea, eb)]; }
  Cx<R> at(int ea, int eb) const { return a[Monomials::index(d, ea, eb)]; }

  R max_abs() const {
    R m(0);
    for (auto& z : a) m = std::max(m, mag(z));
    return m;
  }

  Cx<R> operator()(const ProjPoint<R>& p) const {
    // powers table then sum
    std::vector<Cx<R>> px(d + 1), py(d + 1), pz(d + 1);
    px[0] = py[0] = pz[0] = Cx<R>(1);
    for (int k = 1; k <= d; ++k) {
      px[k] = px[k - 1] * p[0];
      py[k] = py[k - 1] * p[1];
      pz[k] = pz[k - 1] * p[2];
    }
    Cx<R> s(0);
    int i = 0;
    for (int ea = d; ea >= 0; --ea)
      for (int eb = d - ea; eb >= 0; --eb, ++i) s += a[i] * px[ea] * py[eb] * pz[d - ea - eb];
    return s;
  }

  Form partial(int var) const {
    if (d == 0) return Form(0);
    Form out(d - 1);
    int i = 0;
    for (int ea = d; ea >= 0; --ea)
      for (int eb = d - ea; eb >= 0; --eb, ++i) {
        int ec = d - ea - eb;
        int e[3] = {ea, eb, ec};
        if (e[var] == 0) continue;
        int f[3] = {ea, eb, ec};
        f[var] -= 1;
        out.at(f[0], f[1]) += a[i] * R(e[var]);
      }
    return out;
  }

  std::array<Cx<R>, 3> gradient(const ProjPoint<R>& p) const {
    return {partial(0)(p), partial(1)(p), partial(2)(p)};
  }

  Form operator+(const Form& o) const {
    if (o.d != d) throw Error(ErrorKind::SizeMismatch, "form degrees differ");
    Form r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
    return r;
  }
  Form operator-(const Form& o) const {
    Form r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
    return r;
  }
  Form operator*(Cx<R> s) const {
    Form r = *this;
    for (auto& z : r.a) z *= s;
    return r;
  }
  Form operator*(const Form& o) const {
    Form r(d + o.d);
    auto m1 = Monomials::list(d);
    auto m2 = Monomials::list(o.d);
    for (size_t i = 0; i < m1.size(); ++i) {
      if (a[i] == Cx<R>(0)) continue;
      for (size_t j = 0; j < m2.size(); ++j)
        r.at(m1[i][0] + m2[j][0], m1[i][1] + m2[j][1]) += a[i] * o.a[j];
    }
    return r;
  }

  // F(M p~): x_i = sum_j M(i,j) x~_j
  Form substitute(const Mat<R>& M) const {
    Form lin[3];
    for (int i = 0; i < 3; ++i) lin[i] = Form(1, {M(i, 0), M(i, 1), M(i, 2)});
    std::vector<Form> px(d + 1), py(d + 1), pz(d + 1);
    px[0] = py[0] = pz[0] = Form::constant(Cx<R>(1));
    for (int k = 1; k <= d; ++k) {
      px[k] = px[k - 1] * lin[0];
      py[k] = py[k - 1] * lin[1];
      pz[k] = pz[k - 1] * lin[2];
    }
    Form out(d);
    int i = 0;
    for (int ea = d; ea >= 0; --ea)
      for (int eb = d - ea; eb >= 0; --eb, ++i) {
        if (a[i] == Cx<R>(0)) continue;
        out = out + (px[ea] * py[eb] * pz[d - ea - eb]) * a[i];
      }
    return out;
  }

  Form normalized() const {
    R m = max_abs();
    if (m == R(0)) throw Error(ErrorKind::SizeMismatch, "zero form");
    // make the first largest coefficient real positive
    for (auto& z : a)
      if (mag(z) >= m * (R(1) - R(1e-9))) return (*this) * (Cx<R>(1) / z);
    return *this;
  }
};

// value of the monomial vector at p (graded-lex), used for interpolation rows
template <class R> Vec<R> monomial_row(const ProjPoint<R>& p, int d) {
  std::vector<Cx<R>> px(d + 1), py(d + 1), pz(d + 1);
  px[0] = py[0] = pz[0] = Cx<R>(1);
  for (int k = 1; k <= d; ++k) {
    px[k] = px[k - 1] * p[0];
    py[k] = py[k - 1] * p[1];
    pz[k] = pz[k - 1] * p[2];
  }
  Vec<R> v(Monomials::count(d));
  int i = 0;
  for (int ea = d; ea >= 0; --ea)
    for (int eb = d - ea; eb >= 0; --eb, ++i) v(i) = px[ea] * py[eb] * pz[d - ea - eb];
  return v;
}

template <class R> Form<R> det3(const Form<R> m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace ncp
