// Smooth plane cubic with a flex base point O and a translation point t.
#pragma once

#include <map>

#include "ncp/plane_curve.hpp"

namespace ncp {

template <class R> using CurvePoint = ProjPoint<R>;

template <class R> struct PicClass {
  int degree = 0;
  CurvePoint<R> abel;
};

template <class R> Form<R> hessian(const Form<R>& F) {
  Form<R> h[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h[i][j] = F.partial(i).partial(j);
  return det3(h);
}

namespace detail {
template <class R> int zero_coords(const ProjPoint<R>& p) {
  int n = 0;
  for (int i = 0; i < 3; ++i)
    if (mag(p[i]) < R(1e-9)) ++n;
  return n;
}
// lexicographic on (re, im) of normalized coordinates with a 1e-9 dead band
template <class R> bool lex_less(const ProjPoint<R>& a, const ProjPoint<R>& b) {
  for (int i = 0; i < 3; ++i) {
    R ka[2] = {std::real(a[i]), std::imag(a[i])};
    R kb[2] = {std::real(b[i]), std::imag(b[i])};
    for (int j = 0; j < 2; ++j) {
      if (ka[j] < kb[j] - R(1e-9)) return true;
      if (ka[j] > kb[j] + R(1e-9)) return false;
    }
  }
  return false;
}
}  // namespace detail

// All flexes (cubic meets Hessian), sorted: most zero coordinates first, then lexicographic.
template <class R> std::vector<ProjPoint<R>> flexes(const PlaneCurve<R>& C) {
  if (C.degree() != 3) throw Error(ErrorKind::SizeMismatch, "flexes need a cubic");
  Form<R> H = hessian(C.f);
  if (H.max_abs() < R(1e-12)) throw Error(ErrorKind::NoFlex, "Hessian vanishes identically");
  PlaneDivisor<R> cand;
  try {
    cand = intersect(C, PlaneCurve<R>(H));
  } catch (const Error& e) {
    throw Error(ErrorKind::NoFlex, std::string("Hessian intersection failed: ") + e.what());
  }
  std::vector<ProjPoint<R>> out;
  for (auto& p : cand) {
    ProjPoint<R> q = p.normalized();
    bool dup = false;
    for (auto& o : out) dup = dup || proj_distance(o, q) < R(1e-6);
    if (dup) continue;
    ProjPoint<R> r;
    try {
      r = third_point(C.f, q, q, R(1e-8));
    } catch (const Error&) {
      continue;
    }
    if (proj_distance(r, q) < R(1e-6)) out.push_back(q);
  }
  std::sort(out.begin(), out.end(), [](const ProjPoint<R>& a, const ProjPoint<R>& b) {
    int za = detail::zero_coords(a), zb = detail::zero_coords(b);
    if (za != zb) return za > zb;
    return detail::lex_less(a, b);
  });
  return out;
}

template <class R> ProjPoint<R> find_flex(const PlaneCurve<R>& C) {
  auto f = flexes(C);
  if (f.empty()) throw Error(ErrorKind::NoFlex, "no flex found (singular cubic?)");
  return f.front();
}

template <class R> class EllipticCurve {
 public:
  EllipticCurve() = default;

  // O defaults to find_flex, t defaults to O (the commutative case)
  EllipticCurve(const PlaneCurve<R>& cubic, std::optional<ProjPoint<R>> O = std::nullopt,
                std::optional<ProjPoint<R>> t = std::nullopt, Tol<R> tol = Tol<R>::standard())
      : cubic_(cubic), tol_(tol) {
    if (cubic.degree() != 3) throw Error(ErrorKind::SizeMismatch, "elliptic curve needs a cubic");
    R probe = smoothness_probe(cubic_);
    if (probe < R(1e-7)) throw Error(ErrorKind::NoFlex, "cubic is singular", to_double(probe));
    O_ = O ? O->normalized() : find_flex(cubic_);
    if (!on_curve(O_)) throw Error(ErrorKind::NotOnCurve, "base point not on the cubic", to_double(residual(O_)));
    if (!proj_equal(third_point(cubic_.f, O_, O_, tol_.proj_eq), O_, R(1e-6)))
      throw Error(ErrorKind::NoFlex, "base point is not a flex");
    t_ = t ? t->normalized() : O_;
    if (!on_curve(t_)) throw Error(ErrorKind::NotOnCurve, "t not on the cubic", to_double(residual(t_)));
    for (int k = -kTable; k <= kTable; ++k) table_[k + kTable] = slow_mul(k, t_);
  }

  const PlaneCurve<R>& cubic() const { return cubic_; }
  const ProjPoint<R>& O() const { return O_; }
  const ProjPoint<R>& t() const { return t_; }
  const Tol<R>& tol() const { return tol_; }

  R residual(const ProjPoint<R>& p) const { return cubic_.residual(p); }
  bool on_curve(const ProjPoint<R>& p) const { return residual(p) <= R(1e3) * tol_.on_curve; }
  bool equal(const ProjPoint<R>& a, const ProjPoint<R>& b) const { return proj_equal(a, b, tol_.proj_eq); }

  CurvePoint<R> third(const CurvePoint<R>& P, const CurvePoint<R>& Q) const {
    return third_point(cubic_.f, P, Q, tol_.proj_eq);
  }
  CurvePoint<R> add(const CurvePoint<R>& P, const CurvePoint<R>& Q) const { return third(O_, third(P, Q)); }
  CurvePoint<R> neg(const CurvePoint<R>& P) const { return third(P, O_); }
  CurvePoint<R> sub(const CurvePoint<R>& P, const CurvePoint<R>& Q) const { return add(P, neg(Q)); }

  CurvePoint<R> mul(long n, const CurvePoint<R>& P) const {
    if (n == 0) return O_;
    if (&P == &t_ || proj_distance(P, t_) == R(0)) {
      if (n >= -kTable && n <= kTable) return table_[n + kTable];
    }
    return slow_mul(n, P);
  }

  CurvePoint<R> tau_pow(const CurvePoint<R>& p, long k) const {
    if (k == 0) return p.normalized();
    return add(p, mul(k, t_));
  }

  PicClass<R> pic_sum(const std::vector<CurvePoint<R>>& pts) const {
    PicClass<R> c{int(pts.size()), O_};
    for (auto& p : pts) c.abel = add(c.abel, p);
    return c;
  }

  // distance of sum(points) from 3(chi - d) t
  R check_constraint(const std::vector<CurvePoint<R>>& pts, int d, int chi) const {
    if (int(pts.size()) != 3 * d) throw Error(ErrorKind::SizeMismatch, "constraint needs 3d points");
    return proj_distance(pic_sum(pts).abel, mul(3L * (chi - d), t_));
  }

  CurvePoint<R> random_point(std::uint64_t seed) const {
    Rng rng(seed);
    const Form<R>& F = cubic_.f;
    for (int attempt = 0; attempt < 10; ++attempt) {
      ProjPoint<R> A = ProjPoint<R>::from(rng.cvec<R>(3));
      ProjPoint<R> B = ProjPoint<R>::from(rng.cvec<R>(3));
      auto ga = F.gradient(A), gb = F.gradient(B);
      std::vector<Cx<R>> c = {F(A), ga[0] * B[0] + ga[1] * B[1] + ga[2] * B[2],
                              gb[0] * A[0] + gb[1] * A[1] + gb[2] * A[2], F(B)};
      auto roots = poly_roots(c);
      std::size_t pick = std::size_t(rng.next() % 3);
      if (roots.size() != 3) continue;
      Cx<R> s = roots[pick];
      ProjPoint<R> P(A[0] + s * B[0], A[1] + s * B[1], A[2] + s * B[2]);
      if (P.is_zero() || mag(s) > R(1e6)) continue;
      P = refine_on_line(F, P, proj_distance(P, A) > proj_distance(P, B) ? A : B);
      if (on_curve(P)) return P;
    }
    throw Error(ErrorKind::NoConvergence, "random_point failed");
  }

 private:
  static constexpr int kTable = 12;

  CurvePoint<R> slow_mul(long n, const CurvePoint<R>& P) const {
    if (n == 0) return O_;
    if (n < 0) return neg(slow_mul(-n, P));
    CurvePoint<R> acc = O_, base = P.normalized();
    bool first = true;
    while (n > 0) {
      if (n & 1) {
        acc = first ? base : add(acc, base);
        first = false;
      }
      n >>= 1;
      if (n) base = add(base, base);
    }
    return acc;
  }

  PlaneCurve<R> cubic_;
  ProjPoint<R> O_, t_;
  Tol<R> tol_;
  std::array<CurvePoint<R>, 2 * kTable + 1> table_;
};

// y^2 z = x^3 + a x z^2 + b z^3 in graded-lex order
template <class R> PlaneCurve<R> weierstrass(Cx<R> a, Cx<R> b) {
  std::vector<Cx<R>> c(10, Cx<R>(0));
  c[Monomials::index(3, 3, 0)] = Cx<R>(-1);
  c[Monomials::index(3, 1, 0)] = -a;
  c[Monomials::index(3, 0, 0)] = -b;
  c[Monomials::index(3, 0, 2)] = Cx<R>(1);
  return PlaneCurve<R>(3, c);
}

// A reproducible smooth cubic: random coefficients, retried until the probe says smooth.
template <class R> PlaneCurve<R> random_cubic(std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < 10; ++i) {
    Vec<R> v = rng.cvec<R>(10);
    PlaneCurve<R> C(3, std::vector<Cx<R>>(v.data(), v.data() + 10));
    if (smoothness_probe(C) > R(1e-4)) return C;
  }
  throw Error(ErrorKind::NoConvergence, "could not sample a smooth cubic");
}

}  // namespace ncp
