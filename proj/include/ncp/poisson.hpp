// Residue formula for the Poisson pairing on pencils restricted to E, and the Hecke symplecticity check.
#pragma once

#include <functional>

#include "ncp/sheaf.hpp"

namespace ncp {

// d x d matrix of graded elements; entry (i, j) is evaluated on the orbit starting at tau^{shift_j} r.
template <class R> struct Pencil {
  std::shared_ptr<const Sklyanin<R>> A;
  std::shared_ptr<const EllipticCurve<R>> E;
  int d = 0;
  std::vector<GradedElement<R>> L;  // row-major
  std::vector<int> shift;

  const GradedElement<R>& entry(int i, int j) const { return L[i * d + j]; }
  int orbit_length() const {
    int n = 1;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) n = std::max(n, shift[j] + entry(i, j).deg);
    return n;
  }
  bool uniform() const {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (entry(i, j).deg != L[0].deg || shift[j] != shift[0]) return false;
    return true;
  }
  int zero_count() const {
    int n = 0;
    for (int i = 0; i < d; ++i) n += entry(i, i).deg;
    return 3 * n;
  }
};

template <class R> using Deformation = std::vector<GradedElement<R>>;

template <class R> Pencil<R> make_pencil(std::shared_ptr<const Sklyanin<R>> A, std::shared_ptr<const EllipticCurve<R>> E,
                                         int d, std::vector<GradedElement<R>> L, std::vector<int> shift = {}) {
  if (int(L.size()) != d * d) throw Error(ErrorKind::SizeMismatch, "pencil needs d*d entries");
  if (shift.empty()) shift.assign(d, 0);
  if (int(shift.size()) != d) throw Error(ErrorKind::SizeMismatch, "one shift per column");
  for (int j = 0; j < d; ++j)
    for (int i = 1; i < d; ++i)
      if (L[i * d + j].deg != L[j].deg) throw Error(ErrorKind::SizeMismatch, "column degrees must agree");
  return {A, E, d, std::move(L), std::move(shift)};
}

template <class R> void check_shape(const Pencil<R>& P, const Deformation<R>& D) {
  if (int(D.size()) != P.d * P.d) throw Error(ErrorKind::SizeMismatch, "deformation shape");
  for (int k = 0; k < P.d * P.d; ++k)
    if (D[k].deg != P.L[k].deg) throw Error(ErrorKind::SizeMismatch, "deformation degree");
}

template <class R> Mat<R> eval_on_orbit(const Pencil<R>& P, const Deformation<R>& M, const std::vector<ProjPoint<R>>& orbit) {
  Mat<R> out(P.d, P.d);
  for (int i = 0; i < P.d; ++i)
    for (int j = 0; j < P.d; ++j) {
      const auto& u = M[i * P.d + j];
      std::vector<ProjPoint<R>> sl(orbit.begin() + P.shift[j], orbit.begin() + P.shift[j] + u.deg);
      out(i, j) = P.A->eval(u, sl);
    }
  return out;
}

template <class R> Mat<R> eval_at(const Pencil<R>& P, const Deformation<R>& M, const ProjPoint<R>& r) {
  return eval_on_orbit(P, M, tau_orbit(*P.E, r.normalized(), P.orbit_length()));
}

template <class R> R pencil_scale(const Pencil<R>& P) {
  R s(1);
  for (int i = 0; i < P.d; ++i) {
    R row(0);
    for (int j = 0; j < P.d; ++j) row = std::max(row, P.entry(i, j).norm());
    s *= row;
  }
  return s;
}

template <class R> R det_relative_at(const Pencil<R>& P, const ProjPoint<R>& r) {
  return mag(Cx<R>(eval_at(P, P.L, r).determinant())) / pencil_scale(P);
}

// Local picture at a point of E: chart, holomorphic orbit normalization, and omega = sign du / F_solved.
template <class R> struct LocalChart {
  CurveChart<R> chart;
  std::vector<int> idx;  // fixed coordinate of tau^m x used to scale the orbit
  R sign{1};
  const EllipticCurve<R>* E = nullptr;

  LocalChart(const EllipticCurve<R>& curve, const ProjPoint<R>& x, int orbit_len)
      : chart(curve.cubic().f, x), E(&curve) {
    for (int m = 0; m < orbit_len; ++m) idx.push_back(curve.tau_pow(chart.base, m).pivot());
    // omega = (x_j dx_k - x_k dx_j) / F_l for (j, k, l) cyclic, here l = solved
    sign = ((chart.pivot + 1) % 3 == chart.free) ? R(1) : R(-1);
  }
  ProjPoint<R> point(Cx<R> z) const { return chart.at(E->cubic().f, z); }
  std::vector<ProjPoint<R>> orbit(const ProjPoint<R>& q) const {
    std::vector<ProjPoint<R>> out;
    for (size_t m = 0; m < idx.size(); ++m) out.push_back((m == 0 ? q : E->tau_pow(q, long(m))).scaled_at(idx[m]));
    return out;
  }
  Cx<R> omega(const ProjPoint<R>& q) const { return Cx<R>(sign) / E->cubic().f.gradient(q)[chart.solved]; }
};

template <class R> struct ResidueResult {
  Cx<R> value{0};
  R change{0};  // |value(radius) - value(radius / 2)| relative to the contour scale
  R radius{0};
};

// Res of f * omega at the chart centre; f(q, zeta) with zeta the chart offset
template <class R>
ResidueResult<R> residue_at(const LocalChart<R>& lc, const std::function<Cx<R>(const ProjPoint<R>&, Cx<R>)>& f,
                            R radius = R(1e-2), int samples = 32, R tol = R(1e-6)) {
  auto quad = [&](R rho, R& scale) {
    Cx<R> acc(0);
    for (int k = 0; k < samples; ++k) {
      Cx<R> z = std::polar(rho, R(2) * pi<R>() * R(k) / R(samples));
      ProjPoint<R> q = lc.point(z);
      Cx<R> term = f(q, z) * lc.omega(q) * z;
      scale = std::max(scale, mag(term));
      acc += term;
    }
    return acc / R(samples);
  };
  ResidueResult<R> out;
  for (int attempt = 0; attempt < 4; ++attempt, radius /= R(2)) {
    R s1(0), s2(0);
    Cx<R> a = quad(radius, s1), b = quad(radius / R(2), s2);
    out.value = a;
    out.radius = radius;
    out.change = mag(a - b) / std::max({s1, s2, mag(a), R(1e-300)});
    if (out.change < tol) return out;
  }
  throw Error(ErrorKind::Quadrature, "residue unstable under radius halving", to_double(out.change));
}

template <class R> Form<R> det_form(const std::vector<std::vector<Form<R>>>& M) {
  const int n = int(M.size());
  if (n == 1) return M[0][0];
  Form<R> acc(M[0][0].d * n);
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<Form<R>>> minor;
    for (int i = 1; i < n; ++i) {
      std::vector<Form<R>> row;
      for (int k = 0; k < n; ++k)
        if (k != j) row.push_back(M[i][k]);
      minor.push_back(row);
    }
    Form<R> t = M[0][j] * det_form(minor);
    acc = (j % 2) ? acc - t : acc + t;
  }
  return acc;
}

template <class R> struct SupportOptions {
  std::vector<CurvePoint<R>> seeds;  // required unless the pencil is uniform of degree one
  R tol = R(1e-8);
};

// Zeros of det L on E, with multiplicity, verified against zero_count().
template <class R> std::vector<CurvePoint<R>> support(const Pencil<R>& P, SupportOptions<R> opt = {}) {
  const auto& E = *P.E;
  const R scale = pencil_scale(P);
  R worst(0);
  for (int k = 0; k < 6; ++k) worst = std::max(worst, det_relative_at(P, E.random_point(9001 + k)));
  if (worst <= R(1e-12)) throw Error(ErrorKind::IdenticallyZeroDet, "pencil is singular along E");
  std::vector<CurvePoint<R>> out;
  if (opt.seeds.empty()) {
    if (!(P.uniform() && P.L[0].deg == 1))
      throw Error(ErrorKind::ZeroCountMismatch, "seeds needed for a pencil of mixed or higher degree");
    std::vector<std::vector<Form<R>>> M(P.d, std::vector<Form<R>>(P.d));
    for (int i = 0; i < P.d; ++i)
      for (int j = 0; j < P.d; ++j) M[i][j] = Form<R>(1, {P.entry(i, j).c(0), P.entry(i, j).c(1), P.entry(i, j).c(2)});
    PlaneCurve<R> D(det_form(M));
    for (auto& y : intersect(D, E.cubic())) out.push_back(E.tau_pow(y, -P.shift[0]).normalized());
  } else {
    // Newton on det in the chart of each seed
    for (auto& s : opt.seeds) {
      LocalChart<R> lc(E, s, P.orbit_length());
      Cx<R> z(0);
      const R h(1e-6);
      auto f = [&](Cx<R> zz) { return Cx<R>(eval_on_orbit(P, P.L, lc.orbit(lc.point(zz))).determinant()); };
      for (int it = 0; it < 30; ++it) {
        Cx<R> df = (f(z + h) - f(z - h)) / Cx<R>(2 * h);
        if (mag(df) == R(0)) break;
        Cx<R> step = f(z) / df;
        z -= step;
        if (mag(step) < R(1e-14)) break;
      }
      out.push_back(lc.point(z).normalized());
    }
  }
  if (int(out.size()) != P.zero_count())
    throw Error(ErrorKind::ZeroCountMismatch, "found " + std::to_string(out.size()) + " zeros, expected " +
                                                  std::to_string(P.zero_count()));
  for (auto& x : out) {
    R r = det_relative_at(P, x);
    if (r > opt.tol) throw Error(ErrorKind::ZeroCountMismatch, "support point residual", to_double(r));
  }
  (void)scale;
  return out;
}

template <class R> struct IsotrivialityCertificate {
  Mat<R> A, B;  // L' = L B - A L
  R residual{0};
  int slack_dim = 0;
};

// least squares over the 2 d^2 entries of constant (A, B), uniform pencils only
template <class R>
IsotrivialityCertificate<R> isotriviality_certificate(const Pencil<R>& P, const Deformation<R>& D, R tol = R(1e-8)) {
  check_shape(P, D);
  if (!P.uniform()) throw Error(ErrorKind::SizeMismatch, "global certificates need a uniform pencil");
  const int d = P.d, n = P.L[0].c.size();
  Mat<R> M = Mat<R>::Zero(d * d * n, 2 * d * d);
  Vec<R> rhs(d * d * n);
  // unknown layout: A(i, k) at i*d + k, B(k, j) at d*d + k*d + j
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const int r0 = (i * d + j) * n;
      rhs.segment(r0, n) = D[i * d + j].c;
      for (int k = 0; k < d; ++k) {
        M.block(r0, d * d + k * d + j, n, 1) += P.entry(i, k).c;
        M.block(r0, i * d + k, n, 1) -= P.entry(k, j).c;
      }
    }
  IsotrivialityCertificate<R> cert;
  R res;
  Vec<R> x = lstsq<R>(M, rhs, R(1e-10), &res);
  cert.residual = res;
  cert.slack_dim = 2 * d * d - svd<R>(M).rank(R(1e-10));
  cert.A = Mat<R>(d, d);
  cert.B = Mat<R>(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      cert.A(a, b) = x(a * d + b);
      cert.B(a, b) = x(d * d + a * d + b);
    }
  if (cert.residual > tol) throw Error(ErrorKind::NotIsotrivial, "no constant splitting", to_double(cert.residual));
  return cert;
}

// L B - A L as a deformation, for constant A, B
template <class R> Deformation<R> gauge_deformation(const Pencil<R>& P, const Mat<R>& Am, const Mat<R>& Bm) {
  Deformation<R> D;
  for (int i = 0; i < P.d; ++i)
    for (int j = 0; j < P.d; ++j) {
      GradedElement<R> e{P.entry(i, j).deg, Vec<R>::Zero(P.entry(i, j).c.size())};
      for (int k = 0; k < P.d; ++k) {
        if (P.entry(i, k).deg == e.deg) e = e + P.entry(i, k) * Bm(k, j);
        if (P.entry(k, j).deg == e.deg) e = e - P.entry(k, j) * Am(i, k);
      }
      D.push_back(e);
    }
  return D;
}

// Series A(z), B(z) with L' = L B - A L to the truncation order at one support point.
template <class R> struct LocalSplitting {
  CurvePoint<R> x;
  std::vector<Mat<R>> A, B;
  R residual{0};

  Mat<R> B_at(Cx<R> z) const {
    Mat<R> acc = Mat<R>::Zero(B[0].rows(), B[0].cols());
    Cx<R> zp(1);
    for (auto& b : B) acc += zp * b, zp *= z;
    return acc;
  }
};

// Taylor coefficients of z -> M(z) from samples on a circle
template <class R>
std::vector<Mat<R>> taylor(const std::function<Mat<R>(Cx<R>)>& M, int order, R radius, int samples) {
  std::vector<Mat<R>> vals;
  for (int k = 0; k < samples; ++k) vals.push_back(M(std::polar(radius, R(2) * pi<R>() * R(k) / R(samples))));
  std::vector<Mat<R>> out;
  for (int n = 0; n <= order; ++n) {
    Mat<R> c = Mat<R>::Zero(vals[0].rows(), vals[0].cols());
    for (int k = 0; k < samples; ++k) c += vals[k] * std::polar(R(1), -R(2) * pi<R>() * R(n * k) / R(samples));
    out.push_back(c / (R(samples) * ipow(radius, n)));
  }
  return out;
}

template <class R>
LocalSplitting<R> local_splitting(const Pencil<R>& P, const Deformation<R>& D, const CurvePoint<R>& x, int order = 4,
                                  R radius = R(0.05), int samples = 32, R tol = R(1e-8)) {
  check_shape(P, D);
  LocalChart<R> lc(*P.E, x, P.orbit_length());
  const int d = P.d, dd = d * d, K = order + 1;
  auto Ls = taylor<R>([&](Cx<R> z) { return eval_on_orbit(P, P.L, lc.orbit(lc.point(z))); }, order, radius, samples);
  auto Ds = taylor<R>([&](Cx<R> z) { return eval_on_orbit(P, D, lc.orbit(lc.point(z))); }, order, radius, samples);
  // unknowns A_b(i, k) at b*2dd + i*d + k, B_b(k, j) at b*2dd + dd + k*d + j
  Mat<R> M = Mat<R>::Zero(K * dd, 2 * K * dd);
  Vec<R> rhs(K * dd);
  for (int n = 0; n < K; ++n)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const int row = n * dd + i * d + j;
        rhs(row) = Ds[n](i, j);
        for (int a = 0; a <= n; ++a) {
          const int b = n - a;
          for (int k = 0; k < d; ++k) {
            M(row, b * 2 * dd + dd + k * d + j) += Ls[a](i, k);
            M(row, b * 2 * dd + i * d + k) -= Ls[a](k, j);
          }
        }
      }
  R res;
  Vec<R> sol = lstsq<R>(M, rhs, R(1e-12), &res);
  LocalSplitting<R> ls;
  ls.x = x;
  ls.residual = res;
  if (ls.residual > tol) throw Error(ErrorKind::NotIsotrivial, "no local splitting at a support point", to_double(ls.residual));
  for (int b = 0; b < K; ++b) {
    Mat<R> Ab(d, d), Bb(d, d);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q) {
        Ab(p, q) = sol(b * 2 * dd + p * d + q);
        Bb(p, q) = sol(b * 2 * dd + dd + p * d + q);
      }
    ls.A.push_back(Ab);
    ls.B.push_back(Bb);
  }
  return ls;
}

template <class R> struct PairingOptions {
  R sign{1};
  R radius = R(1e-2);
  int samples = 32;
  int order = 4;
  // when set, B is this constant at every support point instead of a local splitting
  const IsotrivialityCertificate<R>* global = nullptr;
  // support points where a local splitting replaces the global certificate
  std::vector<int> local_at;
  Cx<R> slack{0};  // added to B as slack * I
};

template <class R> struct PairingResult {
  Cx<R> value{0};
  std::vector<Cx<R>> residues;
  R worst_change{0};
  R worst_splitting{0};
};

// sigma * sum_x Res_x Tr(B L^{-1} L'') omega, with L' = L B - A L near x
template <class R>
PairingResult<R> pairing(const Pencil<R>& P, const std::vector<CurvePoint<R>>& supp, const Deformation<R>& D1,
                         const Deformation<R>& D2, const PairingOptions<R>& opt = {}) {
  check_shape(P, D1);
  check_shape(P, D2);
  PairingResult<R> out;
  for (size_t s = 0; s < supp.size(); ++s) {
    LocalChart<R> lc(*P.E, supp[s], P.orbit_length());
    bool local = !opt.global || std::find(opt.local_at.begin(), opt.local_at.end(), int(s)) != opt.local_at.end();
    LocalSplitting<R> ls;
    if (local) {
      ls = local_splitting(P, D1, supp[s], opt.order);
      out.worst_splitting = std::max(out.worst_splitting, ls.residual);
    }
    auto f = [&](const ProjPoint<R>& q, Cx<R> z) {
      auto orb = lc.orbit(q);
      Mat<R> L = eval_on_orbit(P, P.L, orb), L2 = eval_on_orbit(P, D2, orb);
      Mat<R> B = local ? ls.B_at(z) : opt.global->B;
      B += opt.slack * Mat<R>::Identity(P.d, P.d);
      return Cx<R>((B * L.fullPivLu().solve(L2)).trace());
    };
    auto r = residue_at<R>(lc, f, opt.radius, opt.samples);
    out.residues.push_back(r.value * opt.sign);
    out.worst_change = std::max(out.worst_change, r.change);
    out.value += r.value * opt.sign;
  }
  return out;
}

template <class R> int deformation_size(const Pencil<R>& P) {
  int n = 0;
  for (auto& e : P.L) n += int(e.c.size());
  return n;
}

template <class R> Deformation<R> unflatten(const Pencil<R>& P, const Vec<R>& v) {
  Deformation<R> D;
  int off = 0;
  for (auto& e : P.L) {
    D.push_back({e.deg, v.segment(off, e.c.size())});
    off += int(e.c.size());
  }
  return D;
}

template <class R> Vec<R> flatten(const Deformation<R>& D) {
  int n = 0;
  for (auto& e : D) n += int(e.c.size());
  Vec<R> v(n);
  int off = 0;
  for (auto& e : D) v.segment(off, e.c.size()) = e.c, off += int(e.c.size());
  return v;
}

// deformations keeping every support point a zero of det: Tr(adj L(x) L'(x)) = 0, as columns
template <class R> Mat<R> support_preserving_basis(const Pencil<R>& P, const std::vector<CurvePoint<R>>& supp, R rel = R(1e-8)) {
  const int n = deformation_size(P);
  Mat<R> C(supp.size(), n);
  for (size_t s = 0; s < supp.size(); ++s) {
    Mat<R> L = eval_at(P, P.L, supp[s]);
    Mat<R> adj = Mat<R>::Zero(P.d, P.d);
    for (int i = 0; i < P.d; ++i)
      for (int j = 0; j < P.d; ++j) {
        Mat<R> m(P.d - 1, P.d - 1);
        for (int a = 0, ra = 0; a < P.d; ++a) {
          if (a == j) continue;
          for (int b = 0, cb = 0; b < P.d; ++b) {
            if (b == i) continue;
            m(ra, cb++) = L(a, b);
          }
          ++ra;
        }
        adj(i, j) = ((i + j) % 2 ? Cx<R>(-1) : Cx<R>(1)) * (P.d == 1 ? Cx<R>(1) : Cx<R>(m.determinant()));
      }
    for (int k = 0; k < n; ++k) {
      Vec<R> e = Vec<R>::Zero(n);
      e(k) = Cx<R>(1);
      C(s, k) = (adj * eval_at(P, unflatten(P, e), supp[s])).trace();
    }
  }
  return kernel_basis<R>(C, rel);
}

template <class R> Deformation<R> random_deformation(const Pencil<R>& P, const Mat<R>& basis, std::uint64_t seed) {
  Rng rng(seed);
  return unflatten(P, Vec<R>(basis * rng.cvec<R>(basis.cols())));
}

template <class R> Pencil<R> random_linear_pencil(std::shared_ptr<const Sklyanin<R>> A, std::shared_ptr<const EllipticCurve<R>> E,
                                                  int d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GradedElement<R>> L;
  for (int k = 0; k < d * d; ++k) L.push_back(A->linear(Vec<R>(rng.cvec<R>(3))));
  return make_pencil<R>(A, E, d, L);
}

// G M H for constant G, H; H may mix only columns of equal degree and shift
template <class R> Deformation<R> transform(const Pencil<R>& P, const Deformation<R>& M, const Mat<R>& G, const Mat<R>& H) {
  const int d = P.d;
  Deformation<R> out;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      GradedElement<R> e{M[i * d + j].deg, Vec<R>::Zero(M[i * d + j].c.size())};
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          Cx<R> g = G(i, a) * H(b, j);
          if (g == Cx<R>(0)) continue;
          if (P.shift[b] != P.shift[j] || M[a * d + b].deg != e.deg)
            throw Error(ErrorKind::SizeMismatch, "column transform mixes degrees");
          e = e + M[a * d + b] * g;
        }
      out.push_back(e);
    }
  return out;
}

template <class R> Pencil<R> transform(const Pencil<R>& P, const Mat<R>& G, const Mat<R>& H) {
  Pencil<R> Q = P;
  Q.L = transform(P, P.L, G, H);
  return Q;
}

// ---- the d = 3 sheaf chart ----

template <class R> Pencil<R> sheaf_pencil(const SheafDatum<R>& d) {
  return make_pencil<R>(d.params.A, d.params.E, 2, {d.v1, d.w1, d.v2, d.w2}, {1, 0});
}

template <class R> Deformation<R> datum_difference(const SheafDatum<R>& a, const SheafDatum<R>& b, Cx<R> scale) {
  return {(a.v1 - b.v1) * scale, (a.w1 - b.w1) * scale, (a.v2 - b.v2) * scale, (a.w2 - b.w2) * scale};
}

// Data over the plane near x0 with fixed base points, holomorphic in x:
// v = (e_a x x, e_b x x), w from [K(x); Psi] w = [0; e] with Psi frozen at x0.
template <class R> struct LeafFamily {
  BlowupParams<R> params;
  ProjPoint<R> x0;
  int pivot = 0;
  std::array<int, 2> free{1, 2};
  Mat<R> Psi;
  Vec<R> e;

  std::pair<GradedElement<R>, GradedElement<R>> vs(const ProjPoint<R>& x) const {
    const auto& A = *params.A;
    Vec<R> xv = x.vec();
    Vec<R> ea = Vec<R>::Zero(3), eb = Vec<R>::Zero(3);
    ea(free[0]) = Cx<R>(1);
    eb(free[1]) = Cx<R>(1);
    return {A.linear(cross3<R>(ea, xv)), A.linear(cross3<R>(eb, xv))};
  }
  Mat<R> constraint(const GradedElement<R>& v1, const GradedElement<R>& v2) const {
    Mat<R> C(9, 2 * params.A->dim(2));
    for (int i = 0; i < 9; ++i) C.row(i) = det_row(*params.A, *params.E, v1, v2, params.P[i]).transpose();
    return C;
  }
  // chart coordinates (s1, s2): x = x0 + s1 e_free0 + s2 e_free1 with x0 scaled at the pivot
  ProjPoint<R> point(Cx<R> s1, Cx<R> s2) const {
    ProjPoint<R> x = x0;
    x[free[0]] += s1;
    x[free[1]] += s2;
    return x;
  }
  SheafDatum<R> datum(const ProjPoint<R>& x) const {
    const int n2 = params.A->dim(2);
    auto [v1, v2] = vs(x);
    Mat<R> C = constraint(v1, v2);
    Mat<R> M(9 + Psi.rows(), 2 * n2);
    M << C, Psi;
    Vec<R> rhs = Vec<R>::Zero(M.rows());
    rhs.tail(Psi.rows()) = e;
    Vec<R> w = lstsq<R>(M, rhs, R(1e-12));
    return {v1, v2, {2, w.head(n2)}, {2, w.tail(n2)}, params};
  }
};

template <class R> LeafFamily<R> leaf_family(const BlowupParams<R>& bp, const ProjPoint<R>& x) {
  LeafFamily<R> fam;
  fam.params = bp;
  fam.pivot = x.normalized().pivot();
  fam.x0 = x.scaled_at(fam.pivot);
  fam.free = {(fam.pivot + 1) % 3, (fam.pivot + 2) % 3};
  auto [v1, v2] = fam.vs(fam.x0);
  Mat<R> C = fam.constraint(v1, v2);
  auto s = svd<R>(C);
  int r = s.rank(R(1e-8));
  if (r != 8) throw Error(ErrorKind::UnexpectedKernelDim, "constraint rank " + std::to_string(r));
  Mat<R> K = s.kernel(r);
  Mat<R> T = trivial_pairs(*bp.A, v1, v2);
  Eigen::HouseholderQR<Mat<R>> qr(T);
  Mat<R> Q = qr.householderQ() * Mat<R>::Identity(T.rows(), 3);
  Mat<R> Kp = K - Q * (Q.adjoint() * K);
  Vec<R> w0 = svd<R>(Kp, true).U.col(0);
  fam.Psi = K.adjoint();
  fam.e = fam.Psi * w0;
  return fam;
}

template <class R> struct LeafTangents {
  SheafDatum<R> datum;
  Deformation<R> d1, d2;
};

template <class R> LeafTangents<R> leaf_tangents(const LeafFamily<R>& fam, Cx<R> s1, Cx<R> s2, R h = R(1e-5)) {
  LeafTangents<R> t;
  t.datum = fam.datum(fam.point(s1, s2));
  Cx<R> inv(R(1) / (R(2) * h));
  t.d1 = datum_difference(fam.datum(fam.point(s1 + h, s2)), fam.datum(fam.point(s1 - h, s2)), inv);
  t.d2 = datum_difference(fam.datum(fam.point(s1, s2 + h)), fam.datum(fam.point(s1, s2 - h)), inv);
  return t;
}

// rho with omega_leaf = rho ds1 ^ ds2 at the chart origin
template <class R> Cx<R> leaf_density(const LeafFamily<R>& fam, R h = R(1e-5), PairingResult<R>* diag = nullptr) {
  auto t = leaf_tangents(fam, Cx<R>(0), Cx<R>(0), h);
  Pencil<R> P = sheaf_pencil(t.datum);
  SupportOptions<R> so;
  so.seeds = fam.params.P;
  auto supp = support(P, so);
  auto pr = pairing(P, supp, t.d1, t.d2);
  if (diag) *diag = pr;
  return pr.value;
}

enum class SymplecticMap { Hecke, Identity, HeckeWrongPoint };

template <class R> struct SymplecticReport {
  Cx<R> rho_before{0}, rho_after{0}, jacobian{0};
  R discrepancy{0};         // |rho' det J - rho| / |rho|
  R discrepancy_no_jac{0};  // the same without det J
};

template <class R>
SymplecticReport<R> hecke_symplecticity_test(const BlowupParams<R>& bp, const ProjPoint<R>& x, R h = R(1e-5),
                                             SymplecticMap map = SymplecticMap::Hecke) {
  SymplecticReport<R> rep;
  auto fam = leaf_family(bp, x);
  rep.rho_before = leaf_density(fam, h);
  if (map == SymplecticMap::Identity) {
    rep.rho_after = rep.rho_before;
    rep.jacobian = Cx<R>(1);
  } else {
    auto image = [&](Cx<R> s1, Cx<R> s2) { return hecke_s0(fam.datum(fam.point(s1, s2))); };
    auto center = image(Cx<R>(0), Cx<R>(0));
    ProjPoint<R> y0 = plane_point_of(center);
    auto fam2 = leaf_family(center.params, y0);
    auto coords = [&](Cx<R> s1, Cx<R> s2) {
      ProjPoint<R> y = plane_point_of(image(s1, s2)).scaled_at(fam2.pivot);
      return std::array<Cx<R>, 2>{y[fam2.free[0]] - fam2.x0[fam2.free[0]], y[fam2.free[1]] - fam2.x0[fam2.free[1]]};
    };
    Cx<R> hh(h);
    auto a1 = coords(hh, Cx<R>(0)), b1 = coords(-hh, Cx<R>(0)), a2 = coords(Cx<R>(0), hh), b2 = coords(Cx<R>(0), -hh);
    Cx<R> J00 = (a1[0] - b1[0]) / (Cx<R>(2) * hh), J10 = (a1[1] - b1[1]) / (Cx<R>(2) * hh);
    Cx<R> J01 = (a2[0] - b2[0]) / (Cx<R>(2) * hh), J11 = (a2[1] - b2[1]) / (Cx<R>(2) * hh);
    rep.jacobian = J00 * J11 - J01 * J10;
    rep.rho_after = map == SymplecticMap::Hecke ? leaf_density(fam2, h) : leaf_density(leaf_family(center.params, x), h);
  }
  R scale = mag(rep.rho_before);
  rep.discrepancy = mag(rep.rho_after * rep.jacobian - rep.rho_before) / scale;
  rep.discrepancy_no_jac = mag(rep.rho_after - rep.rho_before) / scale;
  return rep;
}

}  // namespace ncp
