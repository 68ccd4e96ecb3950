// Three-generator Sklyanin algebra truncated at degree 4, its point scheme and twisted evaluation on E.
#pragma once

#include <memory>

#include "ncp/elliptic.hpp"

namespace ncp {

template <class R> struct SklyaninParams {
  Cx<R> a, b, c;
};

// Element of A_n in the normal-form word basis of that degree.
template <class R> struct GradedElement {
  int deg = 0;
  Vec<R> c;

  GradedElement operator+(const GradedElement& o) const { return check(o), GradedElement{deg, c + o.c}; }
  GradedElement operator-(const GradedElement& o) const { return check(o), GradedElement{deg, c - o.c}; }
  GradedElement operator*(Cx<R> s) const { return {deg, c * s}; }
  GradedElement operator-() const { return {deg, -c}; }
  R norm() const { return c.norm(); }

 private:
  void check(const GradedElement& o) const {
    if (deg != o.deg || c.size() != o.c.size()) throw Error(ErrorKind::SizeMismatch, "degree mismatch");
  }
};

inline long pow3(int n) {
  long r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

// letters of word index w (length n), leftmost first
inline std::vector<int> word_letters(long w, int n) {
  std::vector<int> out(n);
  for (int k = n - 1; k >= 0; --k, w /= 3) out[k] = int(w % 3);
  return out;
}

template <class R> class Sklyanin {
 public:
  static constexpr int kMaxDeg = 4;

  explicit Sklyanin(SklyaninParams<R> p, R rank_rel = R(1e-9)) : p_(p), rank_rel_(rank_rel) {
    // d/dx_i of W applied cyclically
    rel_.assign(3, Mat<R>::Zero(3, 3));
    for (int i = 0; i < 3; ++i) {
      int j = (i + 1) % 3, k = (i + 2) % 3;
      rel_[i](j, k) += p.a;
      rel_[i](k, j) += p.b;
      rel_[i](i, i) += p.c;
    }
    for (int n = 0; n <= kMaxDeg; ++n) build_degree(n);
    for (int n = 0; n <= kMaxDeg; ++n)
      if (dim(n) != (n + 1) * (n + 2) / 2)
        throw Error(ErrorKind::DegenerateParams, "dim A_" + std::to_string(n) + " = " + std::to_string(dim(n)));
  }

  const SklyaninParams<R>& params() const { return p_; }
  R rank_rel() const { return rank_rel_; }
  int dim(int n) const { return int(basis_[n].size()); }
  const std::vector<long>& basis_words(int n) const { return basis_[n]; }
  // relation k as the 3x3 coefficient matrix of x_i x_j
  const Mat<R>& relation(int k) const { return rel_[k]; }

  GradedElement<R> zero(int n) const { return {n, Vec<R>::Zero(dim(n))}; }
  GradedElement<R> one() const {
    GradedElement<R> e = zero(0);
    e.c(0) = Cx<R>(1);
    return e;
  }
  GradedElement<R> gen(int i) const {
    GradedElement<R> e = zero(1);
    e.c(i) = Cx<R>(1);
    return e;
  }
  // linear form sum l_i x_i
  GradedElement<R> linear(const ProjPoint<R>& l) const { return {1, l.vec()}; }
  GradedElement<R> linear(const Vec<R>& l) const { return {1, l}; }

  // reduce a tensor in (A_1)^{(x) n} to normal form
  GradedElement<R> reduce(int n, const Vec<R>& t) const {
    if (t.size() != pow3(n)) throw Error(ErrorKind::SizeMismatch, "tensor size");
    return {n, red_[n] * t};
  }
  Vec<R> lift(const GradedElement<R>& u) const {
    Vec<R> t = Vec<R>::Zero(pow3(u.deg));
    for (int a = 0; a < dim(u.deg); ++a) t(basis_[u.deg][a]) += u.c(a);
    return t;
  }
  GradedElement<R> word(const std::vector<int>& letters) const {
    long w = 0;
    for (int l : letters) w = 3 * w + l;
    Vec<R> t = Vec<R>::Zero(pow3(int(letters.size())));
    t(w) = Cx<R>(1);
    return reduce(int(letters.size()), t);
  }

  GradedElement<R> multiply(const GradedElement<R>& u, const GradedElement<R>& v) const {
    const int n = u.deg + v.deg;
    if (n > kMaxDeg) throw Error(ErrorKind::IndexRange, "degree overflow in multiply");
    const long sv = pow3(v.deg);
    Vec<R> t = Vec<R>::Zero(pow3(n));
    for (int a = 0; a < dim(u.deg); ++a) {
      if (u.c(a) == Cx<R>(0)) continue;
      for (int b = 0; b < dim(v.deg); ++b) t(basis_[u.deg][a] * sv + basis_[v.deg][b]) += u.c(a) * v.c(b);
    }
    return reduce(n, t);
  }

  // value of the basis words on a tau-orbit: orbit[m] = tau^m p, rightmost letter at orbit[0]
  Vec<R> eval_basis(int n, const std::vector<ProjPoint<R>>& orbit) const {
    if (int(orbit.size()) < n) throw Error(ErrorKind::SizeMismatch, "orbit too short");
    Vec<R> out(dim(n));
    for (int a = 0; a < dim(n); ++a) {
      auto letters = word_letters(basis_[n][a], n);
      Cx<R> v(1);
      for (int k = 0; k < n; ++k) v *= orbit[n - 1 - k][letters[k]];
      out(a) = v;
    }
    return out;
  }
  Cx<R> eval(const GradedElement<R>& u, const std::vector<ProjPoint<R>>& orbit) const {
    return (eval_basis(u.deg, orbit).transpose() * u.c)(0);
  }
  // same rule applied to a raw tensor, no reduction
  Cx<R> eval_tensor(int n, const Vec<R>& t, const std::vector<ProjPoint<R>>& orbit) const {
    Cx<R> acc(0);
    for (long w = 0; w < pow3(n); ++w) {
      if (t(w) == Cx<R>(0)) continue;
      auto letters = word_letters(w, n);
      Cx<R> v = t(w);
      for (int k = 0; k < n; ++k) v *= orbit[n - 1 - k][letters[k]];
      acc += v;
    }
    return acc;
  }

 private:
  void build_degree(int n) {
    const long N = pow3(n);
    Mat<R> span;
    if (n >= 2) {
      // I_n = sum_k T_k (x) rel (x) T_{n-2-k}
      std::vector<Vec<R>> gens;
      for (int k = 0; k + 2 <= n; ++k) {
        const long left = pow3(k), right = pow3(n - 2 - k);
        for (long l = 0; l < left; ++l)
          for (long r = 0; r < right; ++r)
            for (int q = 0; q < 3; ++q) {
              Vec<R> v = Vec<R>::Zero(N);
              for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) v(((l * 3 + i) * 3 + j) * right + r) += rel_[q](i, j);
              gens.push_back(v);
            }
      }
      Mat<R> G(N, gens.size());
      for (size_t k = 0; k < gens.size(); ++k) G.col(k) = gens[k];
      Eigen::JacobiSVD<Mat<R>> s(G, Eigen::ComputeThinU);
      R top = s.singularValues().size() ? s.singularValues()(0) : R(0);
      int r = 0;
      for (Eigen::Index i = 0; i < s.singularValues().size(); ++i)
        if (s.singularValues()(i) > rank_rel_ * top && top > R(0)) ++r;
      span = s.matrixU().leftCols(r);
    } else {
      span = Mat<R>::Zero(N, 0);
    }
    // greedy word basis of the complement
    Mat<R> Q = span;
    std::vector<long> chosen;
    for (long w = 0; w < N && Q.cols() < N; ++w) {
      Vec<R> e = Vec<R>::Zero(N);
      e(w) = Cx<R>(1);
      Vec<R> r = e - Q * (Q.adjoint() * e);
      r -= Q * (Q.adjoint() * r);
      if (r.norm() > R(1e-6)) {
        Q.conservativeResize(N, Q.cols() + 1);
        Q.col(Q.cols() - 1) = r / r.norm();
        chosen.push_back(w);
      }
    }
    basis_[n] = chosen;
    const int m = int(chosen.size());
    Mat<R> B(N, span.cols() + m);
    B.leftCols(span.cols()) = span;
    for (int a = 0; a < m; ++a) {
      B.col(span.cols() + a).setZero();
      B(chosen[a], span.cols() + a) = Cx<R>(1);
    }
    if (B.cols() != N) {
      red_[n] = Mat<R>::Zero(m, N);
      return;
    }
    Mat<R> inv = B.fullPivLu().inverse();
    red_[n] = inv.bottomRows(m);
  }

  SklyaninParams<R> p_;
  R rank_rel_;
  std::vector<Mat<R>> rel_;
  std::array<std::vector<long>, kMaxDeg + 1> basis_;
  std::array<Mat<R>, kMaxDeg + 1> red_;
};

// commutator [u, v] = uv - vu
template <class R> GradedElement<R> commutator(const Sklyanin<R>& A, const GradedElement<R>& u, const GradedElement<R>& v) {
  return A.multiply(u, v) - A.multiply(v, u);
}

// N(p)_{k,i} = sum_j rel_k(i, j) p_j; its kernel is tau(p)
template <class R> Mat<R> relation_pencil(const Sklyanin<R>& A, const ProjPoint<R>& p) {
  Mat<R> N(3, 3);
  Vec<R> pv = p.vec();
  for (int k = 0; k < 3; ++k) N.row(k) = (A.relation(k) * pv).transpose();
  return N;
}

template <class R> Form<R> relation_det(const Sklyanin<R>& A) {
  Form<R> m[3][3];
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) m[k][i] = Form<R>(1, {A.relation(k)(i, 0), A.relation(k)(i, 1), A.relation(k)(i, 2)});
  return det3(m);
}

template <class R> ProjPoint<R> tau_map(const Sklyanin<R>& A, const ProjPoint<R>& p) {
  auto s = svd<R>(relation_pencil(A, p.normalized()));
  return ProjPoint<R>::from(s.V.col(2)).normalized();
}

template <class R> SklyaninParams<R> random_params(std::uint64_t seed) {
  Rng rng(seed);
  return {Cx<R>(1), rng.cnormal<R>(), rng.cnormal<R>()};
}

template <class R> struct PointSchemeData {
  std::shared_ptr<const EllipticCurve<R>> E;
  Form<R> det;             // det N as a cubic, unnormalized
  R translation_error{0};  // max |tau(p) - (p + t)| over the samples
  R kernel_gap{0};         // worst sigma_3 / sigma_2 of N(p) over the samples
};

template <class R> PointSchemeData<R> point_scheme(const Sklyanin<R>& A, std::uint64_t seed = 11, int samples = 20) {
  PointSchemeData<R> ps;
  ps.det = relation_det(A);
  R scale(0);
  for (int k = 0; k < 3; ++k) scale = std::max(scale, mmax_abs<R>(A.relation(k)));
  if (ps.det.max_abs() <= R(1e-10) * scale * scale * scale)
    throw Error(ErrorKind::IdenticallyZeroDet, "relation pencil determinant vanishes identically");
  PlaneCurve<R> cubic(ps.det);
  EllipticCurve<R> E0(cubic);
  auto q0 = E0.random_point(seed);
  auto t = E0.sub(tau_map(A, q0), q0);
  ps.E = std::make_shared<EllipticCurve<R>>(cubic, E0.O(), t);
  for (int k = 0; k < samples; ++k) {
    auto p = ps.E->random_point(seed * 1000 + k + 1);
    auto s = svd<R>(relation_pencil(A, p));
    ps.kernel_gap = std::max(ps.kernel_gap, s.s(2) / s.s(1));
    ps.translation_error = std::max(ps.translation_error, proj_distance(ProjPoint<R>::from(s.V.col(2)), ps.E->tau_pow(p, 1)));
  }
  if (ps.translation_error > R(1e-7))
    throw Error(ErrorKind::NonTranslation, "tau is not a translation", to_double(ps.translation_error));
  return ps;
}

// tau^{shift+m} p for m = 0..n-1
template <class R>
std::vector<ProjPoint<R>> tau_orbit(const EllipticCurve<R>& E, const ProjPoint<R>& p, int n, int shift = 0) {
  std::vector<ProjPoint<R>> out;
  for (int m = 0; m < n; ++m) out.push_back(E.tau_pow(p, shift + m));
  return out;
}

template <class R>
Cx<R> restrict_to_E(const Sklyanin<R>& A, const EllipticCurve<R>& E, const GradedElement<R>& u, const ProjPoint<R>& p) {
  if (!E.on_curve(p)) throw Error(ErrorKind::NotOnCurve, "restriction point off E", to_double(E.residual(p)));
  return A.eval(u, tau_orbit(E, p.normalized(), u.deg));
}

template <class R> struct CentralElement {
  GradedElement<R> theta;
  int kernel_dim = 0;
  R commutator_residual{0};
  bool multi_dimensional() const { return kernel_dim > 1; }
};

template <class R> CentralElement<R> central_element(const Sklyanin<R>& A) {
  const int n3 = A.dim(3), n4 = A.dim(4);
  Mat<R> M(3 * n4, n3);
  R scale(0);
  for (int a = 0; a < n3; ++a) {
    GradedElement<R> e = A.zero(3);
    e.c(a) = Cx<R>(1);
    for (int i = 0; i < 3; ++i) {
      M.block(i * n4, a, n4, 1) = commutator(A, e, A.gen(i)).c;
      scale = std::max(scale, A.multiply(e, A.gen(i)).norm());
    }
  }
  auto s = svd<R>(M);
  // commutators can vanish identically, so measure rank against the products
  int r = 0;
  for (int i = 0; i < n3; ++i)
    if (s.s(i) > A.rank_rel() * scale) ++r;
  CentralElement<R> out;
  out.kernel_dim = n3 - r;
  if (out.kernel_dim == 0) throw Error(ErrorKind::EmptyKernel, "no central cubic element");
  out.theta = {3, s.V.col(n3 - 1) / s.V.col(n3 - 1).norm()};
  for (int i = 0; i < 3; ++i) out.commutator_residual = std::max(out.commutator_residual, commutator(A, out.theta, A.gen(i)).norm());
  return out;
}

// two linear forms spanning p^perp
template <class R> std::pair<GradedElement<R>, GradedElement<R>> point_ideal(const Sklyanin<R>& A, const ProjPoint<R>& p) {
  Mat<R> row(1, 3);
  row << p[0], p[1], p[2];
  auto s = svd<R>(row);
  return {A.linear(Vec<R>(s.V.col(1))), A.linear(Vec<R>(s.V.col(2)))};
}

template <class R> struct Syzygy {
  GradedElement<R> u1, u2;
  ProjPoint<R> zero;   // common zero of u1, u2 as linear forms
  ProjPoint<R> label;  // tau^{-1}(zero): the point attached to the degree-one generators
  int kernel_dim = 0;
};

// u1 l1 + u2 l2 = 0 in A_2 for the left ideal A p^perp
template <class R>
Syzygy<R> syzygy(const Sklyanin<R>& A, const EllipticCurve<R>& E, const GradedElement<R>& l1, const GradedElement<R>& l2) {
  Mat<R> M(A.dim(2), 6);
  for (int k = 0; k < 3; ++k) {
    M.col(k) = A.multiply(A.gen(k), l1).c;
    M.col(3 + k) = A.multiply(A.gen(k), l2).c;
  }
  auto s = svd<R>(M);
  Syzygy<R> out;
  out.kernel_dim = 6 - s.rank(A.rank_rel());
  if (out.kernel_dim != 1) throw Error(ErrorKind::KernelDimension, "syzygy kernel dimension " + std::to_string(out.kernel_dim));
  Vec<R> k = s.V.col(5);
  out.u1 = A.linear(Vec<R>(k.head(3)));
  out.u2 = A.linear(Vec<R>(k.tail(3)));
  out.zero = ProjPoint<R>::from(cross3<R>(out.u1.c, out.u2.c)).normalized();
  out.label = E.tau_pow(out.zero, -1);
  return out;
}

template <class R> Syzygy<R> syzygy(const Sklyanin<R>& A, const EllipticCurve<R>& E, const ProjPoint<R>& p) {
  auto [l1, l2] = point_ideal(A, p);
  return syzygy(A, E, l1, l2);
}

template <class R> struct CentralSplit {
  GradedElement<R> f1, f2;
  R residual{0};
  int ambiguity_dim = 0;
};

// theta = l1 f1 + l2 f2
template <class R>
CentralSplit<R> express_central_through_point(const Sklyanin<R>& A, const GradedElement<R>& theta, const GradedElement<R>& l1,
                                              const GradedElement<R>& l2, R tol = R(1e-9)) {
  const int n2 = A.dim(2);
  Mat<R> M(A.dim(3), 2 * n2);
  for (int a = 0; a < n2; ++a) {
    GradedElement<R> e = A.zero(2);
    e.c(a) = Cx<R>(1);
    M.col(a) = A.multiply(l1, e).c;
    M.col(n2 + a) = A.multiply(l2, e).c;
  }
  CentralSplit<R> out;
  auto s = svd<R>(M);
  out.ambiguity_dim = 2 * n2 - s.rank(A.rank_rel());
  Vec<R> x = lstsq<R>(M, theta.c, A.rank_rel(), &out.residual);
  if (out.residual > tol) throw Error(ErrorKind::EmptyKernel, "theta not in l1 A_2 + l2 A_2", to_double(out.residual));
  out.f1 = {2, x.head(n2)};
  out.f2 = {2, x.tail(n2)};
  return out;
}

}  // namespace ncp
