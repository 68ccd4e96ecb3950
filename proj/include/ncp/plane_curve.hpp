// Plane curves: interpolation, intersection, residual linear equivalence.
#pragma once

#include <optional>

#include "ncp/proj.hpp"

namespace ncp {

template <class R> struct PlaneCurve {
  Form<R> f;  // unit max-norm

  PlaneCurve() = default;
  explicit PlaneCurve(const Form<R>& g) : f(g.normalized()) {}
  PlaneCurve(int d, std::vector<Cx<R>> coeffs) : f(Form<R>(d, std::move(coeffs)).normalized()) {}

  int degree() const { return f.d; }
  int genus() const { return (f.d - 1) * (f.d - 2) / 2; }
  Cx<R> operator()(const ProjPoint<R>& p) const { return f(p.normalized()); }
  std::array<Cx<R>, 3> gradient(const ProjPoint<R>& p) const { return f.gradient(p.normalized()); }
  R residual(const ProjPoint<R>& p) const { return mag((*this)(p)); }
};

template <class R> using PlaneDivisor = std::vector<ProjPoint<R>>;

template <class R> struct InterpDiag {
  R sigma_max{0}, sigma_second{0}, sigma_min{0};
  // second smallest over largest: the interpolation gap
  R gap() const { return sigma_max > R(0) ? sigma_second / sigma_max : R(0); }
};

template <class R> Mat<R> interpolation_matrix(const std::vector<ProjPoint<R>>& pts, int d) {
  const int n = Monomials::count(d);
  Mat<R> m(pts.size(), n);
  for (size_t i = 0; i < pts.size(); ++i) {
    Vec<R> row = monomial_row(pts[i].normalized(), d);
    m.row(i) = row.transpose() / row.norm();
  }
  return m;
}

template <class R> R default_gap(int d) {
  return R(1e3) * eps<R>() * R(Monomials::count(d));
}

// Unique degree-d curve through pts (smallest right singular vector).
template <class R>
PlaneCurve<R> interpolate_curve(const std::vector<ProjPoint<R>>& pts, int d, InterpDiag<R>* diag = nullptr,
                                std::optional<R> empty_rel = std::nullopt, std::optional<R> gap_rel = std::nullopt) {
  const int n = Monomials::count(d);
  auto s = svd(interpolation_matrix(pts, d));
  InterpDiag<R> dg;
  dg.sigma_max = s.s(0);
  dg.sigma_second = n >= 2 ? s.s(n - 2) : R(0);
  dg.sigma_min = s.s(n - 1);
  if (diag) *diag = dg;
  R er = empty_rel.value_or(Tol<R>::standard().empty_rel);
  R gr = gap_rel.value_or(default_gap<R>(d));
  if (pts.empty() || dg.sigma_second <= gr * dg.sigma_max)
    throw Error(ErrorKind::AmbiguousKernel, "interpolation kernel has dimension > 1", to_double(dg.gap()));
  if (dg.sigma_min > er * dg.sigma_max)
    throw Error(ErrorKind::EmptyKernel, "no curve through the points",
                to_double(dg.sigma_min / dg.sigma_max));
  Vec<R> k = s.V.col(n - 1);
  return PlaneCurve<R>(Form<R>(d, std::vector<Cx<R>>(k.data(), k.data() + n)));
}

// Basis of all degree-d forms through pts (columns of coefficient vectors).
template <class R> Mat<R> curve_family(const std::vector<ProjPoint<R>>& pts, int d, R rel) {
  const int n = Monomials::count(d);
  if (pts.empty()) return Mat<R>::Identity(n, n);
  return kernel_basis<R>(interpolation_matrix(pts, d), rel);
}

// Group points closer than radius; every cluster is reported once per member at its mean.
template <class R> PlaneDivisor<R> cluster_points(const PlaneDivisor<R>& in, R radius) {
  const size_t n = in.size();
  std::vector<int> label(n, -1);
  int next = 0;
  for (size_t i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = next;
    for (size_t j = i + 1; j < n; ++j)
      if (label[j] < 0 && proj_distance(in[i], in[j]) < radius) label[j] = next;
    ++next;
  }
  PlaneDivisor<R> out;
  for (int c = 0; c < next; ++c) {
    std::vector<size_t> mem;
    for (size_t i = 0; i < n; ++i)
      if (label[i] == c) mem.push_back(i);
    int k = in[mem[0]].pivot();
    ProjPoint<R> mean(0, 0, 0);
    for (size_t i : mem) {
      auto q = in[i].scaled_at(k);
      for (int t = 0; t < 3; ++t) mean[t] += q[t] / R(mem.size());
    }
    for (size_t i = 0; i < mem.size(); ++i) out.push_back(mean.normalized());
  }
  return out;
}

template <class R> Mat<R> random_unitary(Rng& rng) {
  Mat<R> a = rng.cmat<R>(3, 3);
  Eigen::HouseholderQR<Mat<R>> qr(a);
  Mat<R> q = qr.householderQ();
  return q;
}

struct IntersectOptions {
  std::uint64_t seed = 0x5eedULL;
  int retries = 5;
};

namespace detail {

// coefficients of y^k as polynomials in x (ascending powers), affine chart z = 1
template <class R> std::vector<std::vector<Cx<R>>> y_coeffs(const Form<R>& F) {
  std::vector<std::vector<Cx<R>>> out(F.d + 1, std::vector<Cx<R>>(F.d + 1, Cx<R>(0)));
  int i = 0;
  for (int ea = F.d; ea >= 0; --ea)
    for (int eb = F.d - ea; eb >= 0; --eb, ++i) out[eb][ea] += F.a[i];
  return out;
}

template <class R> Cx<R> horner(const std::vector<Cx<R>>& c, Cx<R> x) {
  Cx<R> s(0);
  for (int k = int(c.size()) - 1; k >= 0; --k) s = s * x + c[k];
  return s;
}

template <class R>
Cx<R> sylvester_det(const std::vector<std::vector<Cx<R>>>& fy, const std::vector<std::vector<Cx<R>>>& gy, Cx<R> x) {
  const int m = int(fy.size()) - 1, n = int(gy.size()) - 1;
  std::vector<Cx<R>> f(m + 1), g(n + 1);
  for (int k = 0; k <= m; ++k) f[k] = horner(fy[k], x);
  for (int k = 0; k <= n; ++k) g[k] = horner(gy[k], x);
  const int s = m + n;
  if (s == 0) return Cx<R>(1);
  Mat<R> S = Mat<R>::Zero(s, s);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) S(r, r + k) = f[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) S(n + r, r + k) = g[n - k];
  return Eigen::PartialPivLU<Mat<R>>(S).determinant();
}

}  // namespace detail

// All d1*d2 intersection points, with multiplicity (repeated entries).
template <class R>
PlaneDivisor<R> intersect(const PlaneCurve<R>& C1, const PlaneCurve<R>& C2, IntersectOptions opt = {},
                          R cluster_radius = Tol<R>::standard().cluster) {
  const int d1 = C1.degree(), d2 = C2.degree();
  const int total = d1 * d2;
  Rng rng(opt.seed);
  int tiny_count = 0;
  std::string last;
  for (int attempt = 0; attempt < opt.retries; ++attempt) {
    Mat<R> M = random_unitary<R>(rng);
    Form<R> F = C1.f.substitute(M), G = C2.f.substitute(M);
    auto fy = detail::y_coeffs(F), gy = detail::y_coeffs(G);
    int N = 1;
    while (N <= total) N *= 2;
    std::vector<Cx<R>> vals(N);
    R vmax(0);
    for (int k = 0; k < N; ++k) {
      Cx<R> x = std::polar(R(1), R(2) * pi<R>() * R(k) / R(N));
      vals[k] = detail::sylvester_det(fy, gy, x);
      vmax = std::max(vmax, mag(vals[k]));
    }
    if (vmax < R(1e4) * eps<R>()) {
      ++tiny_count;
      if (tiny_count >= 2) throw Error(ErrorKind::CommonComponent, "resultant vanishes identically");
      last = "tiny resultant";
      continue;
    }
    std::vector<Cx<R>> coef(N, Cx<R>(0));
    for (int j = 0; j < N; ++j) {
      Cx<R> s(0);
      for (int k = 0; k < N; ++k) s += vals[k] * std::polar(R(1), -R(2) * pi<R>() * R(j * k % N) / R(N));
      coef[j] = s / R(N);
    }
    R cmax(0);
    for (auto& z : coef) cmax = std::max(cmax, mag(z));
    if (mag(coef[total]) < R(1e-6) * cmax) {
      last = "points near infinity in frame";
      continue;
    }
    coef.resize(total + 1);
    auto xs = poly_roots(coef);
    if (int(xs.size()) != total) {
      last = "root count";
      continue;
    }
    PlaneDivisor<R> pts;
    bool bad = false;
    for (auto& x : xs) {
      std::vector<Cx<R>> fc(fy.size());
      for (size_t k = 0; k < fy.size(); ++k) fc[k] = detail::horner(fy[k], x);
      auto ys = poly_roots(fc);
      std::vector<Cx<R>> gc(gy.size());
      for (size_t k = 0; k < gy.size(); ++k) gc[k] = detail::horner(gy[k], x);
      if (ys.empty()) {
        // F(x, .) constant in y; use G's roots
        ys = poly_roots(gc);
      }
      if (ys.empty()) {
        bad = true;
        break;
      }
      Cx<R> best = ys[0];
      R bv = mag(detail::horner(gc, ys[0])) / (R(1) + ipow(mag(ys[0]), d2));
      for (auto& y : ys) {
        R v = mag(detail::horner(gc, y)) / (R(1) + ipow(mag(y), d2));
        if (v < bv) bv = v, best = y;
      }
      // Newton on (F,G) in the affine chart of the rotated frame
      Cx<R> X = x, Y = best;
      Form<R> Fx = F.partial(0), Fy = F.partial(1), Gx = G.partial(0), Gy = G.partial(1);
      for (int it = 0; it < 30; ++it) {
        ProjPoint<R> p(X, Y, Cx<R>(1));
        Cx<R> f = F(p), g = G(p);
        Cx<R> a = Fx(p), b = Fy(p), c = Gx(p), d = Gy(p);
        Cx<R> det = a * d - b * c;
        if (mag(det) == R(0)) break;
        Cx<R> dx = (d * f - b * g) / det, dy = (-c * f + a * g) / det;
        X -= dx;
        Y -= dy;
        if (mag(dx) + mag(dy) <= R(8) * eps<R>() * (R(1) + mag(X) + mag(Y))) break;
      }
      Vec<R> pt(3);
      pt << X, Y, Cx<R>(1);
      pts.push_back(ProjPoint<R>::from(M * pt).normalized());
    }
    if (bad) {
      last = "fiber solve";
      continue;
    }
    R worst(0);
    for (auto& p : pts) worst = std::max({worst, C1.residual(p), C2.residual(p)});
    if (worst > R(1e-6)) {
      last = "verification residual";
      continue;
    }
    return cluster_points(pts, cluster_radius);
  }
  throw Error(ErrorKind::ConditioningFailure, "intersection failed after retries: " + last);
}

// Multiset difference big - known, matching each known point to its nearest unused partner.
template <class R> PlaneDivisor<R> divisor_subtract(const PlaneDivisor<R>& big, const PlaneDivisor<R>& known, R tol) {
  std::vector<bool> used(big.size(), false);
  R worst(0);
  for (auto& k : known) {
    int best = -1;
    R bd(0);
    for (size_t i = 0; i < big.size(); ++i) {
      if (used[i]) continue;
      R d = proj_distance(big[i], k);
      if (best < 0 || d < bd) best = int(i), bd = d;
    }
    if (best < 0) throw Error(ErrorKind::UnmatchedPoint, "more known points than divisor points", 1e30);
    worst = std::max(worst, bd);
    used[best] = true;
  }
  if (worst > tol) throw Error(ErrorKind::UnmatchedPoint, "known point not in divisor", to_double(worst));
  PlaneDivisor<R> out;
  for (size_t i = 0; i < big.size(); ++i)
    if (!used[i]) out.push_back(big[i]);
  return out;
}

struct ResidualOptions {
  std::uint64_t seed = 17;
  int extra_degree = 0;  // 1 selects the m+1 auxiliary degree
};

template <class R> int auxiliary_degree(int d) {
  const int g = (d - 1) * (d - 2) / 2;
  int m = 0;
  while (Monomials::count(m) < g + 2) ++m;
  return m;
}

// D' with D + p_i ~ D' + p_out on the smooth curve C; D_plus = D u {p_i}.
template <class R>
PlaneDivisor<R> residual_linear_equiv(const PlaneCurve<R>& C, const PlaneDivisor<R>& D_plus, const ProjPoint<R>& p_out,
                                      ResidualOptions opt = {}) {
  const int d = C.degree();
  const int g = C.genus();
  if (int(D_plus.size()) != g + 1) throw Error(ErrorKind::SizeMismatch, "D_plus must have g+1 points");
  if (g == 0) return {};
  const int m = auxiliary_degree<R>(d) + opt.extra_degree;
  const R match_tol = R(1e-6);
  Mat<R> fam = curve_family(D_plus, m, Tol<R>::standard().rank_rel);
  Rng rng(opt.seed);
  Vec<R> coef = fam * rng.cvec<R>(fam.cols());
  PlaneCurve<R> A(Form<R>(m, std::vector<Cx<R>>(coef.data(), coef.data() + coef.size())));
  IntersectOptions io;
  io.seed = rng.next();
  PlaneDivisor<R> rest = divisor_subtract(intersect(C, A, io), D_plus, match_tol);
  PlaneDivisor<R> through = rest;
  through.push_back(p_out);
  PlaneCurve<R> A2;
  try {
    A2 = interpolate_curve(through, m);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::AmbiguousKernel)
      throw Error(ErrorKind::NonUniqueSecondCurve, "second auxiliary curve not unique", e.value());
    throw;
  }
  io.seed = rng.next();
  return divisor_subtract(intersect(C, A2, io), through, match_tol);
}

// Smallest combined residual of (F, F_x, F_y, F_z) over candidate singular points.
template <class R> R smoothness_probe(const PlaneCurve<R>& C) {
  const Form<R>& F = C.f;
  std::vector<Form<R>> parts;
  for (int i = 0; i < 3; ++i) parts.push_back(F.partial(i));
  std::vector<int> live;
  for (int i = 0; i < 3; ++i)
    if (parts[i].max_abs() > R(1e-12)) live.push_back(i);
  if (live.size() <= 1) return R(0);
  auto score = [&](const ProjPoint<R>& p) {
    ProjPoint<R> q = p.normalized();
    R r = mag(F(q));
    for (int i = 0; i < 3; ++i) r = std::max(r, mag(parts[i](q)));
    return r;
  };
  PlaneDivisor<R> cand;
  try {
    if (parts[live[0]].d == 0) return R(1);
    cand = intersect(PlaneCurve<R>(parts[live[0]]), PlaneCurve<R>(parts[live[1]]));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CommonComponent) return R(0);
    throw;
  }
  R best(1e30);
  for (auto& p : cand) best = std::min(best, score(p));
  return best;
}

// Newton for F(T + s V) = 0 starting at s = 0; stays on the line through T and V.
template <class R> ProjPoint<R> refine_on_line(const Form<R>& F, const ProjPoint<R>& T0, const ProjPoint<R>& V0) {
  ProjPoint<R> T = T0.normalized(), V = V0.normalized();
  auto at = [&](Cx<R> ss) { return ProjPoint<R>(T[0] + ss * V[0], T[1] + ss * V[1], T[2] + ss * V[2]); };
  Cx<R> s(0);
  for (int it = 0; it < 20; ++it) {
    ProjPoint<R> X = at(s);
    Cx<R> f = F(X);
    auto g = F.gradient(X);
    Cx<R> df = g[0] * V[0] + g[1] * V[1] + g[2] * V[2];
    if (mag(f) <= R(4) * eps<R>() || mag(df) == R(0)) break;
    Cx<R> step = f / df;
    if (mag(step) > R(0.1)) break;
    s -= step;
    if (mag(step) <= R(4) * eps<R>()) break;
  }
  return at(s).normalized();
}

// Third intersection of the chord PQ (tangent if P = Q) with a cubic, refined on the line.
template <class R> ProjPoint<R> third_point(const Form<R>& F, const ProjPoint<R>& P0, const ProjPoint<R>& Q0, R same_tol) {
  if (F.d != 3) throw Error(ErrorKind::SizeMismatch, "third_point needs a cubic");
  ProjPoint<R> P = P0.normalized(), Q = Q0.normalized();
  ProjPoint<R> base, dir;
  Vec<R> out;
  auto dotg = [&](const std::array<Cx<R>, 3>& g, const ProjPoint<R>& v) { return g[0] * v[0] + g[1] * v[1] + g[2] * v[2]; };
  if (proj_distance(P, Q) <= same_tol) {
    auto g = F.gradient(P);
    ProjPoint<R> gp(g[0], g[1], g[2]);
    if (gp.max_abs() == R(0)) throw Error(ErrorKind::DegenerateLine, "singular point, no tangent");
    // second point of the tangent line: where it meets {x_k = 0}, k the pivot of P
    ProjPoint<R> e(0, 0, 0);
    e[P.pivot()] = Cx<R>(1);
    ProjPoint<R> Rd = cross(gp, e).normalized();
    auto gr = F.gradient(Rd);
    Cx<R> c3 = F(Rd), c2 = dotg(gr, P);
    if (mag(c3) + mag(c2) <= R(1e3) * eps<R>()) throw Error(ErrorKind::DegenerateLine, "tangent line lies in the cubic");
    out = (P.vec() * c3 - Rd.vec() * c2);
    base = P;
    dir = Rd;
  } else {
    auto gq = F.gradient(Q);
    auto gp = F.gradient(P);
    Cx<R> a = dotg(gq, P), b = dotg(gp, Q);
    if (mag(a) + mag(b) <= R(1e3) * eps<R>()) throw Error(ErrorKind::DegenerateLine, "chord lies in the cubic");
    out = P.vec() * a - Q.vec() * b;
    base = P;
    dir = Q;
  }
  ProjPoint<R> T = ProjPoint<R>::from(out).normalized();
  ProjPoint<R> V = proj_distance(T, base) > proj_distance(T, dir) ? base : dir;
  ProjPoint<R> res = refine_on_line(F, T, V);
  if (mag(F(res)) > R(1e-6)) throw Error(ErrorKind::NoConvergence, "third point refinement diverged", to_double(mag(F(res))));
  return res;
}

// Affine chart of a smooth curve point: pivot coordinate fixed to 1, one free coordinate,
// the last one solved by Newton. Holomorphic in the free coordinate.
template <class R> struct CurveChart {
  int pivot = 0, free = 1, solved = 2;
  ProjPoint<R> base;

  CurveChart(const Form<R>& F, const ProjPoint<R>& p) {
    pivot = p.pivot();
    base = p.scaled_at(pivot);
    auto g = F.gradient(base);
    int a = (pivot + 1) % 3, b = (pivot + 2) % 3;
    // solve for the coordinate with the larger partial
    if (mag(g[a]) > mag(g[b])) std::swap(a, b);
    free = a;
    solved = b;
  }

  // point with the free coordinate moved by h
  ProjPoint<R> at(const Form<R>& F, Cx<R> h) const {
    ProjPoint<R> q = base;
    q[free] += h;
    for (int it = 0; it < 30; ++it) {
      Cx<R> f = F(q);
      Cx<R> df = F.gradient(q)[solved];
      if (mag(df) == R(0)) throw Error(ErrorKind::NoConvergence, "chart Newton hit a vertical tangent");
      Cx<R> step = f / df;
      q[solved] -= step;
      if (mag(step) <= R(8) * eps<R>() * (R(1) + mag(q[solved]))) break;
    }
    if (mag(F(q)) > R(1e-8)) throw Error(ErrorKind::NoConvergence, "chart Newton diverged", to_double(mag(F(q))));
    return q;
  }
};

}  // namespace ncp
