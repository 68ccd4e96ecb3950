// d = 3 sheaf presentations v_k f + w_k g = 0 on the blowup of P^2 at nine points of E, and the Hecke move s0.
#pragma once

#include "ncp/dynamics.hpp"
#include "ncp/sklyanin.hpp"

namespace ncp {

template <class R> struct GenericityReport {
  std::vector<std::string> violations;
  bool clean() const { return violations.empty(); }
};

// tau^{3k} p_i != p_j for |k| <= K, and no triple summing to the class of L_{3l+1}, |l| <= 2
template <class R>
GenericityReport<R> genericity_check(const EllipticCurve<R>& E, const std::vector<CurvePoint<R>>& P, int K = 4) {
  GenericityReport<R> rep;
  const R tol = R(1e-7);
  const int n = int(P.size());
  for (int i = 0; i < n; ++i)
    for (int k = -K; k <= K; ++k) {
      auto q = E.tau_pow(P[i], 3L * k);
      for (int j = i + 1; j < n; ++j)
        if (proj_distance(q, P[j]) < tol)
          rep.violations.push_back("tau^" + std::to_string(3 * k) + " p" + std::to_string(i + 1) + " = p" + std::to_string(j + 1));
    }
  std::vector<CurvePoint<R>> targets;
  for (int l = -2; l <= 2; ++l) targets.push_back(E.mul(-3L * (3 * l + 1), E.t()));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto pij = E.add(P[i], P[j]);
      for (int k = j + 1; k < n; ++k) {
        auto s = E.add(pij, P[k]);
        for (int l = -2; l <= 2; ++l)
          if (proj_distance(s, targets[l + 2]) < tol)
            rep.violations.push_back("p" + std::to_string(i + 1) + "+p" + std::to_string(j + 1) + "+p" + std::to_string(k + 1) +
                                     " ~ L_" + std::to_string(3 * l + 1));
      }
    }
  return rep;
}

template <class R> struct BlowupParams {
  std::shared_ptr<const Sklyanin<R>> A;
  std::shared_ptr<const EllipticCurve<R>> E;
  std::vector<CurvePoint<R>> P;
  std::vector<CurvePoint<R>> samples;  // fixed evaluation set on E
  GenericityReport<R> generic;
};

template <class R>
BlowupParams<R> make_blowup_params(std::shared_ptr<const Sklyanin<R>> A, std::shared_ptr<const EllipticCurve<R>> E,
                                   std::vector<CurvePoint<R>> P, std::uint64_t sample_seed = 5, R tol = R(1e-7)) {
  if (P.size() != 9) throw Error(ErrorKind::SizeMismatch, "nine base points");
  for (auto& p : P) {
    if (!E->on_curve(p)) throw Error(ErrorKind::NotOnCurve, "base point off E", to_double(E->residual(p)));
    p = p.normalized();
  }
  R r = E->check_constraint(P, 3, 1);
  if (r > tol) throw Error(ErrorKind::ConstraintViolated, "p1 + ... + p9 must be -6t", to_double(r));
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j)
      if (proj_distance(P[i], P[j]) < tol) throw Error(ErrorKind::DegenerateParams, "base points must be distinct");
  BlowupParams<R> bp{A, E, std::move(P), {}, {}};
  for (int k = 0; k < 12; ++k) bp.samples.push_back(E->random_point(sample_seed * 7919 + k));
  bp.generic = genericity_check(*E, bp.P);
  return bp;
}

// eight random points and p9 solved from the sum
template <class R>
BlowupParams<R> random_blowup_params(std::shared_ptr<const Sklyanin<R>> A, std::shared_ptr<const EllipticCurve<R>> E,
                                     std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CurvePoint<R>> P;
  for (int i = 0; i < 8; ++i) P.push_back(E->random_point(rng.next()));
  P.push_back(E->sub(E->mul(-6, E->t()), E->pic_sum(P).abel));
  return make_blowup_params(A, E, P);
}

template <class R> struct SheafDatum {
  GradedElement<R> v1, v2, w1, w2;
  BlowupParams<R> params;
};

template <class R> Cx<R> form_at(const GradedElement<R>& v, const ProjPoint<R>& q) {
  return v.c(0) * q[0] + v.c(1) * q[1] + v.c(2) * q[2];
}

template <class R> std::vector<ProjPoint<R>> orbit2(const EllipticCurve<R>& E, const ProjPoint<R>& r) {
  return tau_orbit(E, r.normalized(), 2);
}

// [[v_k(tau r), w_k(r)]]
template <class R> Mat<R> sheaf_matrix(const SheafDatum<R>& d, const ProjPoint<R>& r) {
  const auto& A = *d.params.A;
  auto O = orbit2(*d.params.E, r);
  Mat<R> L(2, 2);
  L << form_at(d.v1, O[1]), A.eval(d.w1, O), form_at(d.v2, O[1]), A.eval(d.w2, O);
  return L;
}

template <class R> Cx<R> det_section(const SheafDatum<R>& d, const ProjPoint<R>& r) {
  Mat<R> L = sheaf_matrix(d, r);
  return L(0, 0) * L(1, 1) - L(1, 0) * L(0, 1);
}

template <class R> R datum_scale(const SheafDatum<R>& d) {
  return std::max(d.v1.norm() * d.w2.norm(), d.v2.norm() * d.w1.norm());
}

template <class R> R verify_base_vanishing(const SheafDatum<R>& d) {
  R worst(0);
  for (auto& p : d.params.P) worst = std::max(worst, mag(det_section(d, p)));
  return worst / datum_scale(d);
}

// coefficients of (w1, w2) in det_section at r, for fixed v
template <class R>
Vec<R> det_row(const Sklyanin<R>& A, const EllipticCurve<R>& E, const GradedElement<R>& v1, const GradedElement<R>& v2,
               const ProjPoint<R>& r) {
  auto O = orbit2(E, r);
  Vec<R> eb = A.eval_basis(2, O);
  const int n2 = A.dim(2);
  Vec<R> row(2 * n2);
  row.head(n2) = -form_at(v2, O[1]) * eb;
  row.tail(n2) = form_at(v1, O[1]) * eb;
  return row;
}

// trivial pairs (v1 y, v2 y), y in A_1, as columns
template <class R> Mat<R> trivial_pairs(const Sklyanin<R>& A, const GradedElement<R>& v1, const GradedElement<R>& v2) {
  const int n2 = A.dim(2);
  Mat<R> T(2 * n2, 3);
  for (int m = 0; m < 3; ++m) {
    T.col(m).head(n2) = A.multiply(v1, A.gen(m)).c;
    T.col(m).tail(n2) = A.multiply(v2, A.gen(m)).c;
  }
  return T;
}

template <class R> bool is_stable(const SheafDatum<R>& d, R tol = R(1e-8)) {
  const auto& A = *d.params.A;
  Mat<R> T = trivial_pairs(A, d.v1, d.v2);
  Vec<R> w(2 * A.dim(2));
  w << d.w1.c, d.w2.c;
  R res;
  lstsq<R>(T, w, A.rank_rel(), &res);
  return res > tol * w.norm();
}

template <class R> ProjPoint<R> plane_point_of(const SheafDatum<R>& d) {
  Vec<R> x = cross3<R>(d.v1.c, d.v2.c);
  if (x.norm() <= R(1e-10) * d.v1.norm() * d.v2.norm()) throw Error(ErrorKind::DependentV, "v1, v2 dependent");
  return ProjPoint<R>::from(x).normalized();
}

enum class FiberKind { Generic, CommonZero, BaseFiber };

inline const char* fiber_kind_name(FiberKind k) {
  switch (k) {
    case FiberKind::Generic: return "generic";
    case FiberKind::CommonZero: return "common-zero";
    case FiberKind::BaseFiber: return "base-fiber";
  }
  return "?";
}

// Data over one plane point: a single class, or a P^1 of them over the image of a base point.
template <class R> struct PlaneFiber {
  FiberKind kind = FiberKind::Generic;
  int constrained_kernel = 0;  // (w1, w2) with det vanishing at p1..p9
  int det_kernel = 0;          // (w1, w2) with det identically zero
  int reported = 0;            // 3 / 4 / 5
  int base_index = -1;         // i with x = tau p_i, 0-based
  std::vector<SheafDatum<R>> members;

  // member s*W0 + t*W1 of the family (t ignored for a single class)
  SheafDatum<R> member(Cx<R> s, Cx<R> t = Cx<R>(0)) const {
    SheafDatum<R> d = members[0];
    d.w1 = d.w1 * s;
    d.w2 = d.w2 * s;
    if (members.size() > 1) {
      d.w1 = d.w1 + members[1].w1 * t;
      d.w2 = d.w2 + members[1].w2 * t;
    }
    return d;
  }
};

template <class R> int numerical_rank(const Mat<R>& M, R rel) {
  return svd<R>(M).rank(rel);
}

template <class R> PlaneFiber<R> datum_from_plane_point(const BlowupParams<R>& bp, const ProjPoint<R>& x0) {
  const auto& A = *bp.A;
  const auto& E = *bp.E;
  const int n2 = A.dim(2);
  const R rel = R(1e-8);
  ProjPoint<R> x = x0.normalized();
  auto [v1, v2] = point_ideal(A, x);
  PlaneFiber<R> out;
  Mat<R> C(9, 2 * n2), S(bp.samples.size(), 2 * n2);
  for (int i = 0; i < 9; ++i) C.row(i) = det_row(A, E, v1, v2, bp.P[i]).transpose();
  for (size_t k = 0; k < bp.samples.size(); ++k) S.row(k) = det_row(A, E, v1, v2, bp.samples[k]).transpose();
  auto sc = svd<R>(C);
  out.constrained_kernel = 2 * n2 - sc.rank(rel);
  out.det_kernel = 2 * n2 - numerical_rank<R>(S, rel);
  for (int i = 0; i < 9; ++i)
    if (proj_distance(x, E.tau_pow(bp.P[i], 1)) < R(1e-8)) out.base_index = i;
  if (out.constrained_kernel == 4 && out.det_kernel == 3) {
    out.kind = FiberKind::Generic;
    out.reported = 3;
  } else if (out.constrained_kernel == 4 && out.det_kernel == 4) {
    out.kind = FiberKind::CommonZero;
    out.reported = 4;
  } else if (out.constrained_kernel == 5 && out.det_kernel == 4) {
    out.kind = FiberKind::BaseFiber;
    out.reported = 5;
  } else {
    throw Error(ErrorKind::UnexpectedKernelDim, "kernel dims constrained " + std::to_string(out.constrained_kernel) +
                                                    ", det " + std::to_string(out.det_kernel));
  }
  // kernel modulo trivial pairs, orthogonal complement in coefficient space
  Mat<R> K = sc.kernel(2 * n2 - out.constrained_kernel);
  Mat<R> T = trivial_pairs(A, v1, v2);
  Eigen::HouseholderQR<Mat<R>> qr(T);
  Mat<R> Q = qr.householderQ() * Mat<R>::Identity(T.rows(), 3);
  Mat<R> Kp = K - Q * (Q.adjoint() * K);
  auto sk = svd<R>(Kp, true);
  const int m = out.constrained_kernel - 3;
  for (int a = 0; a < m; ++a) {
    Vec<R> w = sk.U.col(a);
    out.members.push_back({v1, v2, {2, w.head(n2)}, {2, w.tail(n2)}, bp});
  }
  return out;
}

// the unique class over a generic plane point
template <class R> SheafDatum<R> generic_datum(const BlowupParams<R>& bp, const ProjPoint<R>& x) {
  auto f = datum_from_plane_point(bp, x);
  if (f.kind == FiberKind::BaseFiber) throw Error(ErrorKind::FiberCase, "x is the image of a base point");
  return f.members[0];
}

template <class R> SheafDatum<R> random_datum(const BlowupParams<R>& bp, std::uint64_t seed) {
  Rng rng(seed);
  return generic_datum(bp, ProjPoint<R>::from(rng.cvec<R>(3)));
}

template <class R> struct TangentReport {
  int constraint_rank = 0;
  int trivial_rank = 0;
  int tangent = 0;
  R trivial_residual{0};  // trivial directions measured against the constraint
};

// linearized det constraint on (v1', v2', w1', w2') at r
template <class R> Vec<R> tangent_row(const SheafDatum<R>& d, const ProjPoint<R>& r) {
  const auto& A = *d.params.A;
  auto O = orbit2(*d.params.E, r);
  Vec<R> eb = A.eval_basis(2, O);
  const int n2 = A.dim(2);
  Vec<R> row(6 + 2 * n2);
  Vec<R> tr = O[1].vec();
  row.segment(0, 3) = A.eval(d.w2, O) * tr;
  row.segment(3, 3) = -A.eval(d.w1, O) * tr;
  row.segment(6, n2) = -form_at(d.v2, O[1]) * eb;
  row.segment(6 + n2, n2) = form_at(d.v1, O[1]) * eb;
  return row;
}

template <class R> Mat<R> trivial_tangents(const SheafDatum<R>& d) {
  const auto& A = *d.params.A;
  const int n2 = A.dim(2), N = 6 + 2 * n2;
  std::vector<Vec<R>> cols;
  auto pack = [&](const Vec<R>& a1, const Vec<R>& a2, const Vec<R>& b1, const Vec<R>& b2) {
    Vec<R> c(N);
    c << a1, a2, b1, b2;
    cols.push_back(c);
  };
  Vec<R> z3 = Vec<R>::Zero(3), z6 = Vec<R>::Zero(n2);
  // row operations
  pack(d.v1.c, z3, d.w1.c, z6);
  pack(d.v2.c, z3, d.w2.c, z6);
  pack(z3, d.v1.c, z6, d.w1.c);
  pack(z3, d.v2.c, z6, d.w2.c);
  // scale f, scale g
  pack(d.v1.c, d.v2.c, z6, z6);
  pack(z3, z3, d.w1.c, d.w2.c);
  // f -> f + y g
  for (int m = 0; m < 3; ++m) pack(z3, z3, A.multiply(d.v1, A.gen(m)).c, A.multiply(d.v2, A.gen(m)).c);
  Mat<R> T(N, cols.size());
  for (size_t k = 0; k < cols.size(); ++k) T.col(k) = cols[k];
  return T;
}

template <class R> TangentReport<R> tangent_dimension(const SheafDatum<R>& d) {
  const int N = 6 + 2 * d.params.A->dim(2);
  Mat<R> C(9, N);
  for (int i = 0; i < 9; ++i) C.row(i) = tangent_row(d, d.params.P[i]).transpose();
  Mat<R> T = trivial_tangents(d);
  TangentReport<R> rep;
  rep.constraint_rank = numerical_rank<R>(C, R(1e-8));
  rep.trivial_rank = numerical_rank<R>(T, R(1e-8));
  rep.trivial_residual = mmax_abs<R>(Mat<R>(C * T)) / (mmax_abs<R>(C) * mmax_abs<R>(T));
  if (rep.constraint_rank != 8 || rep.trivial_rank != 8)
    throw Error(ErrorKind::KernelDimension, "constraint rank " + std::to_string(rep.constraint_rank) + ", trivial rank " +
                                                std::to_string(rep.trivial_rank));
  rep.tangent = N - rep.trivial_rank - rep.constraint_rank;
  return rep;
}

template <class R> struct ModuliDimension {
  int jacobian_rank = 0;
  int total = 0;  // presentations and base points, modulo trivial directions
  int base = 0;   // image in the base points
  int fiber = 0;
};

// Jacobian of det(p_i) = 0 in (v, w) and the nine base points moving along E
template <class R> ModuliDimension<R> moduli_dimension(const SheafDatum<R>& d, R h = R(1e-5)) {
  const auto& F = d.params.E->cubic().f;
  const int N = 6 + 2 * d.params.A->dim(2);
  Mat<R> J = Mat<R>::Zero(9, N + 9);
  for (int i = 0; i < 9; ++i) {
    CurveChart<R> ch(F, d.params.P[i]);
    J.row(i).head(N) = tangent_row(d, ch.base).transpose();
    // det_section in the chart coordinate; the point scaling is absorbed by the rank
    auto val = [&](Cx<R> s) {
      ProjPoint<R> q = ch.at(F, s);
      Cx<R> f = det_section(d, q);
      // degree one in r: undo the pivot normalization used by the orbit
      return f * q[q.normalized().pivot()];
    };
    J(i, N + i) = (val(Cx<R>(h)) - val(Cx<R>(-h))) / Cx<R>(2 * h);
  }
  ModuliDimension<R> md;
  auto s = svd<R>(J);
  md.jacobian_rank = s.rank(R(1e-6));
  Mat<R> K = s.kernel(md.jacobian_rank);
  md.base = numerical_rank<R>(Mat<R>(K.bottomRows(9)), R(1e-6));
  md.total = int(K.cols()) - numerical_rank<R>(trivial_tangents(d), R(1e-8));
  md.fiber = md.total - md.base;
  return md;
}

// 3x3 matrix of linear forms: coef[m](i, j) is the x_m coefficient of entry (i, j)
template <class R> struct TwistedMatrix {
  std::array<Mat<R>, 3> coef;
  std::array<int, 3> offsets{1, 1, 1};

  Mat<R> at(const EllipticCurve<R>& E, const ProjPoint<R>& r) const {
    Mat<R> M = Mat<R>::Zero(3, 3);
    for (int j = 0; j < 3; ++j) {
      ProjPoint<R> q = E.tau_pow(r.normalized(), offsets[j]);
      for (int m = 0; m < 3; ++m) M.col(j) += q[m] * coef[m].col(j);
    }
    return M;
  }
  Mat<R> at_plane(const ProjPoint<R>& y) const {
    Mat<R> M = Mat<R>::Zero(3, 3);
    for (int m = 0; m < 3; ++m) M += y[m] * coef[m];
    return M;
  }
  GradedElement<R> entry(int i, int j) const { return {1, Vec<R>{{coef[0](i, j), coef[1](i, j), coef[2](i, j)}}}; }
  void set(int i, int j, const GradedElement<R>& u) {
    for (int m = 0; m < 3; ++m) coef[m](i, j) = u.c(m);
  }
};

template <class R> TwistedMatrix<R> zero_twisted() {
  TwistedMatrix<R> L;
  for (auto& c : L.coef) c = Mat<R>::Zero(3, 3);
  return L;
}

// |det L(r)| against the coefficient size of L; points are pivot-normalized
template <class R> R det_relative(const TwistedMatrix<R>& L, const EllipticCurve<R>& E, const ProjPoint<R>& r) {
  R scale(1);
  for (int i = 0; i < 3; ++i) {
    R row(0);
    for (int m = 0; m < 3; ++m) row += L.coef[m].row(i).squaredNorm();
    scale *= sqrt(row);
  }
  return scale > R(0) ? mag(Cx<R>(L.at(E, r).determinant())) / scale : R(0);
}

template <class R> struct HeckeDiag {
  TwistedMatrix<R> L;              // after the shift down at p1
  R step1_det_residual{0};         // det L(tau r) at tau^-3 p1, p2..p9
  R step1_fit_residual{0};         // w' = r l1 + r l2
  R rank_gap{0};                   // sigma_2 / sigma_1 of L(tau p9)
  R left_kernel_residual{0};
  R column_residual{0};            // sigma_min of the row that must become (u', 0)
  R u_independence{0};
  R l_zero_error{0};               // common zero of l' against tau^3 p9
  R new_base_residual{0};
};

// the new generators' syzygy: u1 l1 + u2 l2 = 0 solved for (l1, l2)
template <class R>
std::pair<GradedElement<R>, GradedElement<R>> right_syzygy(const Sklyanin<R>& A, const GradedElement<R>& u1,
                                                          const GradedElement<R>& u2) {
  Mat<R> M(A.dim(2), 6);
  for (int k = 0; k < 3; ++k) {
    M.col(k) = A.multiply(u1, A.gen(k)).c;
    M.col(3 + k) = A.multiply(u2, A.gen(k)).c;
  }
  auto s = svd<R>(M);
  int kd = 6 - s.rank(A.rank_rel());
  if (kd != 1) throw Error(ErrorKind::KernelDimension, "right syzygy kernel dimension " + std::to_string(kd));
  Vec<R> k = s.V.col(5);
  return {A.linear(Vec<R>(k.head(3))), A.linear(Vec<R>(k.tail(3)))};
}

struct HeckeOptions {
  // p9 = tau^-3 p1 makes p9 a double zero of det L, so rank 2 at p9 is no longer forced
  bool guard_double_zero = true;
};

template <class R>
SheafDatum<R> hecke_s0(const SheafDatum<R>& d, HeckeDiag<R>* diag = nullptr, HeckeOptions opt = {}) {
  const auto& A = *d.params.A;
  const auto& E = *d.params.E;
  const auto& P = d.params.P;
  HeckeDiag<R> dg;
  if (opt.guard_double_zero && proj_distance(E.tau_pow(P[0], -3), P[8]) < R(1e-7))
    throw Error(ErrorKind::RankDrop, "p9 = tau^-3 p1: det L has a double zero at p9");
  // step 1: shift down at p1
  auto O1 = orbit2(E, P[0]);
  Mat<R> Lam = sheaf_matrix(d, P[0]);
  R vscale = std::max(d.v1.norm(), d.v2.norm());
  if (std::max(mag(Lam(0, 0)), mag(Lam(1, 0))) <= R(1e-8) * vscale) throw Error(ErrorKind::FiberCase, "v vanishes at tau p1");
  auto sl = svd<R>(Lam);
  Cx<R> alpha = sl.V(0, 1), beta = sl.V(1, 1);
  if (mag(beta) <= R(1e-10) * mag(alpha)) throw Error(ErrorKind::FiberCase, "g cannot be sent to zero at p1");
  Vec<R> p1 = O1[0].vec();
  GradedElement<R> y = A.linear(Vec<R>(-(alpha / beta) * p1.conjugate() / p1.squaredNorm()));
  GradedElement<R> wp1 = d.w1 - A.multiply(d.v1, y), wp2 = d.w2 - A.multiply(d.v2, y);
  auto [l1, l2] = point_ideal(A, O1[0]);
  Mat<R> M(A.dim(2), 6);
  for (int k = 0; k < 3; ++k) {
    M.col(k) = A.multiply(A.gen(k), l1).c;
    M.col(3 + k) = A.multiply(A.gen(k), l2).c;
  }
  R res1, res2;
  Vec<R> r1 = lstsq<R>(M, wp1.c, A.rank_rel(), &res1), r2 = lstsq<R>(M, wp2.c, A.rank_rel(), &res2);
  dg.step1_fit_residual = std::max(res1, res2) / std::max(d.w1.norm(), d.w2.norm());
  auto sz = syzygy(A, E, l1, l2);
  TwistedMatrix<R> L = zero_twisted<R>();
  L.set(0, 0, sz.u1);
  L.set(0, 1, sz.u2);
  L.set(1, 0, A.linear(Vec<R>(r1.head(3))));
  L.set(1, 1, A.linear(Vec<R>(r1.tail(3))));
  L.set(1, 2, d.v1);
  L.set(2, 0, A.linear(Vec<R>(r2.head(3))));
  L.set(2, 1, A.linear(Vec<R>(r2.tail(3))));
  L.set(2, 2, d.v2);
  dg.L = L;
  dg.step1_det_residual = det_relative(L, E, E.tau_pow(P[0], -3));
  for (int i = 1; i < 9; ++i) dg.step1_det_residual = std::max(dg.step1_det_residual, det_relative(L, E, P[i]));

  // step 2: shift up at p9
  ProjPoint<R> y9 = E.tau_pow(P[8], 1);
  Mat<R> L9 = L.at_plane(y9);
  auto s9 = svd<R>(Mat<R>(L9.transpose()));
  dg.rank_gap = s9.s(1) / s9.s(0);
  if (dg.rank_gap <= R(1e-8)) throw Error(ErrorKind::RankDrop, "L has rank below 2 at tau p9", to_double(dg.rank_gap));
  Vec<R> c = s9.V.col(2);
  dg.left_kernel_residual = s9.s(2) / s9.s(0);
  int istar = 0;
  for (int i = 1; i < 3; ++i)
    if (mag(c(i)) > mag(c(istar))) istar = i;
  // rho(m, j): x_m coefficient of the combined row
  Mat<R> Rho(3, 3);
  for (int m = 0; m < 3; ++m) Rho.row(m) = c.transpose() * L.coef[m];
  auto sr = svd<R>(Rho);
  dg.column_residual = sr.s(2) / sr.s(0);
  Mat<R> Tm = sr.V;  // last column kills the row
  std::array<Mat<R>, 3> Lr;
  for (int m = 0; m < 3; ++m) {
    Lr[m] = L.coef[m];
    Lr[m].row(istar) = Rho.row(m);
    Lr[m] = Lr[m] * Tm;
  }
  auto row_form = [&](int i, int j) { return A.linear(Vec<R>{{Lr[0](i, j), Lr[1](i, j), Lr[2](i, j)}}); };
  GradedElement<R> u1 = row_form(istar, 0), u2 = row_form(istar, 1);
  {
    Mat<R> U(3, 2);
    U << u1.c, u2.c;
    auto su = svd<R>(U);
    dg.u_independence = su.s(1) / su.s(0);
    if (dg.u_independence <= R(1e-7)) throw Error(ErrorKind::DegenerateColumn, "new first column is dependent", to_double(dg.u_independence));
  }
  auto [m1, m2] = right_syzygy(A, u1, u2);
  ProjPoint<R> lzero = ProjPoint<R>::from(cross3<R>(m1.c, m2.c));
  dg.l_zero_error = proj_distance(lzero, E.tau_pow(P[8], 3));
  std::vector<int> rows;
  for (int i = 0; i < 3; ++i)
    if (i != istar) rows.push_back(i);
  SheafDatum<R> out;
  out.v1 = row_form(rows[0], 2);
  out.v2 = row_form(rows[1], 2);
  out.w1 = A.multiply(row_form(rows[0], 0), m1) + A.multiply(row_form(rows[0], 1), m2);
  out.w2 = A.multiply(row_form(rows[1], 0), m1) + A.multiply(row_form(rows[1], 1), m2);
  std::vector<CurvePoint<R>> NP = P;
  NP[0] = E.tau_pow(P[8], 3);
  NP[8] = E.tau_pow(P[0], -3);
  out.params = d.params;
  out.params.P.clear();
  for (auto& p : NP) out.params.P.push_back(p.normalized());
  out.params.generic = genericity_check(E, out.params.P);
  // joint scale
  R s = std::max(out.w1.norm(), out.w2.norm());
  out.w1 = out.w1 * Cx<R>(R(1) / s);
  out.w2 = out.w2 * Cx<R>(R(1) / s);
  dg.new_base_residual = verify_base_vanishing(out);
  if (diag) *diag = dg;
  return out;
}

// State of the dynamics chart matching a datum: D = plane point, P shifted by tau (chi = 4).
template <class R> PainleveState<R> dynamics_state(const SheafDatum<R>& d) {
  std::vector<CurvePoint<R>> P;
  for (auto& p : d.params.P) P.push_back(d.params.E->tau_pow(p, 1));
  return new_state(d.params.E, 3, 4, {plane_point_of(d)}, P);
}

template <class R> struct CrossOracle {
  ProjPoint<R> sheaf_point, dynamics_point;
  R distance{0};
  R param_distance{0};
};

template <class R>
CrossOracle<R> hecke_cross_oracle(const SheafDatum<R>& d, HeckeDiag<R>* diag = nullptr, HeckeOptions opt = {}) {
  CrossOracle<R> co;
  auto nd = hecke_s0(d, diag, opt);
  auto st = s0_move(dynamics_state(d));
  co.sheaf_point = plane_point_of(nd);
  co.dynamics_point = st.D[0];
  co.distance = proj_distance(co.sheaf_point, co.dynamics_point);
  for (int i = 0; i < 9; ++i)
    co.param_distance = std::max(co.param_distance, proj_distance(d.params.E->tau_pow(nd.params.P[i], 1), st.P[i]));
  return co;
}

template <class R> struct FiberPresentation {
  GradedElement<R> c;         // the cubic relation u1 w1 + u2 w2
  GradedElement<R> u1, u2;    // u1 v1 + u2 v2 = 0
  R divisor_residual{0};      // c on E at tau^-3 p1, p2..p9
  R generic_value{0};         // c on E at the sample points, for contrast
  CentralSplit<R> split;      // theta through u1, u2
};

template <class R> FiberPresentation<R> fiber_case(const SheafDatum<R>& d) {
  const auto& A = *d.params.A;
  const auto& E = *d.params.E;
  const auto& P = d.params.P;
  ProjPoint<R> img = E.tau_pow(P[0], 1);
  R vscale = std::max(d.v1.norm(), d.v2.norm());
  if (std::max(mag(form_at(d.v1, img)), mag(form_at(d.v2, img))) > R(1e-8) * vscale)
    throw Error(ErrorKind::NotFiberCase, "plane point is not the image of p1");
  FiberPresentation<R> fp;
  auto sz = syzygy(A, E, d.v1, d.v2);
  fp.u1 = sz.u1;
  fp.u2 = sz.u2;
  fp.c = A.multiply(sz.u1, d.w1) + A.multiply(sz.u2, d.w2);
  R cn = fp.c.norm();
  if (cn <= R(1e-10)) throw Error(ErrorKind::EmptyKernel, "cubic relation vanishes");
  fp.divisor_residual = mag(restrict_to_E(A, E, fp.c, E.tau_pow(P[0], -3))) / cn;
  for (int i = 1; i < 9; ++i) fp.divisor_residual = std::max(fp.divisor_residual, mag(restrict_to_E(A, E, fp.c, P[i])) / cn);
  for (auto& q : d.params.samples) fp.generic_value = std::max(fp.generic_value, mag(restrict_to_E(A, E, fp.c, q)) / cn);
  fp.split = express_central_through_point(A, central_element(A).theta, sz.u1, sz.u2);
  return fp;
}

}  // namespace ncp
