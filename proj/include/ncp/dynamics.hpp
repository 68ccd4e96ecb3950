// Birational W0 action on states (D, P) of the parabolic moduli chart.
#pragma once

#include <memory>

#include "ncp/weyl.hpp"

namespace ncp {

template <class R> struct PainleveState {
  std::shared_ptr<const EllipticCurve<R>> E;
  int d = 3;
  int chi = 4;
  PlaneDivisor<R> D;            // g = (d-1)(d-2)/2 plane points
  std::vector<CurvePoint<R>> P;  // 3d points on E

  int genus() const { return (d - 1) * (d - 2) / 2; }
  R constraint_residual() const { return E->check_constraint(P, d, chi); }
};

template <class R>
PainleveState<R> new_state(std::shared_ptr<const EllipticCurve<R>> E, int d, int chi, PlaneDivisor<R> D,
                           std::vector<CurvePoint<R>> P, R tol = R(1e-7)) {
  if (d < 2) throw Error(ErrorKind::SizeMismatch, "d must be at least 2");
  PainleveState<R> s{E, d, chi, std::move(D), std::move(P)};
  if (int(s.D.size()) != s.genus()) throw Error(ErrorKind::SizeMismatch, "|D| must equal the genus");
  if (int(s.P.size()) != 3 * d) throw Error(ErrorKind::SizeMismatch, "|P| must equal 3d");
  for (auto& p : s.P)
    if (!E->on_curve(p)) throw Error(ErrorKind::NotOnCurve, "parameter point off the curve", to_double(E->residual(p)));
  R r = s.constraint_residual();
  if (r > tol) throw Error(ErrorKind::ConstraintViolated, "sum constraint fails", to_double(r));
  for (auto& x : s.D) x = x.normalized();
  for (auto& x : s.P) x = x.normalized();
  return s;
}

// 3d-1 random points on E, the last one solved from the constraint; D random in the plane.
template <class R>
PainleveState<R> random_state(std::shared_ptr<const EllipticCurve<R>> E, int d, int chi, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CurvePoint<R>> P;
  for (int i = 0; i < 3 * d - 1; ++i) P.push_back(E->random_point(rng.next()));
  CurvePoint<R> target = E->mul(3L * (chi - d), E->t());
  P.push_back(E->sub(target, E->pic_sum(P).abel));
  PlaneDivisor<R> D;
  for (int i = 0; i < (d - 1) * (d - 2) / 2; ++i) D.push_back(ProjPoint<R>::from(rng.cvec<R>(3)).normalized());
  return new_state(E, d, chi, D, P);
}

struct MoveOptions {
  bool general_path = false;  // force residual intersection even for d = 3
  std::uint64_t seed = 17;
  int extra_degree = 0;
};

template <class R> struct MoveDiag {
  R gap{0};       // interpolation sigma_second / sigma_max
  R sigma_min{0};  // interpolation sigma_min / sigma_max
};

template <class R> PainleveState<R> apply_swap(int k, const PainleveState<R>& s) {
  if (k < 1 || k >= 3 * s.d) throw Error(ErrorKind::IndexRange, "swap index out of range");
  PainleveState<R> r = s;
  std::swap(r.P[k - 1], r.P[k]);
  return r;
}

// Supporting curve of the alpha_{ij} move: degree d through D and P with p_j -> tau^-3 p_j.
template <class R> PlaneCurve<R> alpha_curve(int i, int j, const PainleveState<R>& s, MoveDiag<R>* diag = nullptr) {
  (void)i;
  std::vector<ProjPoint<R>> pts = s.D;
  for (int k = 0; k < 3 * s.d; ++k) pts.push_back(k == j - 1 ? s.E->tau_pow(s.P[k], -3) : s.P[k]);
  InterpDiag<R> dg;
  PlaneCurve<R> C = interpolate_curve(pts, s.d, &dg);
  if (diag) {
    diag->gap = dg.gap();
    diag->sigma_min = dg.sigma_max > R(0) ? dg.sigma_min / dg.sigma_max : R(0);
  }
  return C;
}

template <class R>
PainleveState<R> apply_alpha(int i, int j, const PainleveState<R>& s, MoveOptions opt = {}, MoveDiag<R>* diag = nullptr) {
  const int n = 3 * s.d;
  if (i == j || i < 1 || j < 1 || i > n || j > n) throw Error(ErrorKind::IndexRange, "alpha needs distinct indices in range");
  if (s.chi != s.d + 1) throw Error(ErrorKind::UnsupportedLevel, "alpha moves are defined on the chi = d + 1 chart");
  const EllipticCurve<R>& E = *s.E;
  CurvePoint<R> pj_new = E.tau_pow(s.P[j - 1], -3);
  PlaneCurve<R> C = alpha_curve(i, j, s, diag);
  PainleveState<R> r = s;
  if (s.d == 3 && !opt.general_path) {
    ProjPoint<R> x = third_point(C.f, s.D[0], s.P[i - 1], E.tol().proj_eq);
    r.D = {third_point(C.f, x, pj_new, E.tol().proj_eq)};
  } else {
    PlaneDivisor<R> Dplus = s.D;
    Dplus.push_back(s.P[i - 1]);
    ResidualOptions ro;
    ro.seed = opt.seed;
    ro.extra_degree = opt.extra_degree;
    r.D = residual_linear_equiv(C, Dplus, pj_new, ro);
  }
  r.P = act_on_params(gen_a(i, j, n), s.P, E);
  for (auto& x : r.D) x = x.normalized();
  return r;
}

template <class R>
PainleveState<R> apply_token(const Token& t, const PainleveState<R>& s, MoveOptions opt = {}, MoveDiag<R>* diag = nullptr) {
  if (t.kind == Token::S && t.i >= 1) return apply_swap(t.i, s);
  if (t.kind == Token::A) return apply_alpha(t.i, t.j, s, opt, diag);
  throw Error(ErrorKind::NotInW0, "token " + t.str() + " is not a primitive move");
}

// Word product w = t_1 ... t_k acts on the left, so t_k is applied first.
template <class R>
PainleveState<R> apply_primitive_word(const GeneratorWord& w, const PainleveState<R>& s, MoveOptions opt = {},
                                      MoveDiag<R>* diag = nullptr) {
  PainleveState<R> r = s;
  for (auto it = w.rbegin(); it != w.rend(); ++it) r = apply_token(*it, r, opt, diag);
  return r;
}

template <class R>
PainleveState<R> apply_element(const WeylElement& w, const PainleveState<R>& s, MoveOptions opt = {},
                               MoveDiag<R>* diag = nullptr) {
  if (w.n != 3 * s.d) throw Error(ErrorKind::SizeMismatch, "element rank differs from 3d");
  return apply_primitive_word(decompose_w0(w), s, opt, diag);
}

inline bool is_primitive(const GeneratorWord& w) {
  for (auto& t : w)
    if (!((t.kind == Token::S && t.i >= 1) || t.kind == Token::A)) return false;
  return true;
}

// Primitive words run token by token; anything else through its W0 normal form.
template <class R>
PainleveState<R> apply_word(const GeneratorWord& w, const PainleveState<R>& s, MoveOptions opt = {},
                            MoveDiag<R>* diag = nullptr) {
  if (is_primitive(w)) return apply_primitive_word(w, s, opt, diag);
  return apply_element(word_product(w, 3 * s.d), s, opt, diag);
}

template <class R> PainleveState<R> s0_move(const PainleveState<R>& s, MoveOptions opt = {}) {
  return apply_element(gen_s(0, 3 * s.d), s, opt);
}

template <class R> struct TrajectoryRecord {
  int step = 0;
  PainleveState<R> state;
  R constraint{0};
  R gap{0};
  bool ok = true;
  std::string error;
};

template <class R> using Trajectory = std::vector<TrajectoryRecord<R>>;

template <class R> void renormalize(PainleveState<R>& s) {
  for (auto& x : s.D) x = x.normalized();
  for (auto& x : s.P) x = x.normalized();
}

// N applications of the word; truncated at the first failure, which is recorded.
template <class R>
Trajectory<R> orbit(const PainleveState<R>& s0, const GeneratorWord& w, int N, bool renorm = true, MoveOptions opt = {}) {
  const int n = 3 * s0.d;
  if (chi(word_product(w, n)) != 0) throw Error(ErrorKind::NotInW0, "orbit word must lie in W0");
  Trajectory<R> traj;
  traj.push_back({0, s0, s0.constraint_residual(), R(0), true, ""});
  PainleveState<R> s = s0;
  for (int k = 1; k <= N; ++k) {
    MoveDiag<R> dg;
    try {
      s = apply_word(w, s, opt, &dg);
      if (renorm) renormalize(s);
      traj.push_back({k, s, s.constraint_residual(), dg.gap, true, ""});
    } catch (const Error& e) {
      traj.push_back({k, s, s.constraint_residual(), dg.gap, false, e.what()});
      break;
    }
  }
  return traj;
}

template <class R> R state_distance(const PainleveState<R>& a, const PainleveState<R>& b) {
  R d(0);
  if (a.D.size() != b.D.size() || a.P.size() != b.P.size()) return R(1e30);
  if (!a.D.empty()) {
    // D is a multiset
    std::vector<bool> used(b.D.size(), false);
    for (auto& x : a.D) {
      R best(1e30);
      int bi = -1;
      for (size_t k = 0; k < b.D.size(); ++k)
        if (!used[k] && proj_distance(x, b.D[k]) < best) best = proj_distance(x, b.D[k]), bi = int(k);
      used[bi] = true;
      d = std::max(d, best);
    }
  }
  for (size_t k = 0; k < a.P.size(); ++k) d = std::max(d, proj_distance(a.P[k], b.P[k]));
  return d;
}

}  // namespace ncp
