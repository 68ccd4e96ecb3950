// Scalar types, tolerances, small linear-algebra helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/math/constants/constants.hpp>

#include "ncp/errors.hpp"

namespace ncp {

// 32 decimal digits, expression templates off so std::complex and Eigen accept it.
using Extended = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<32>,
                                               boost::multiprecision::et_off>;

template <class R> using Cx = std::complex<R>;
template <class R> using Mat = Eigen::Matrix<Cx<R>, Eigen::Dynamic, Eigen::Dynamic>;
template <class R> using Vec = Eigen::Matrix<Cx<R>, Eigen::Dynamic, 1>;

template <class R> inline R mag(const Cx<R>& z) { return std::abs(z); }
template <class R> inline R eps() { return std::numeric_limits<R>::epsilon(); }
template <class R> inline R pi() { return boost::math::constants::pi<R>(); }

template <class R> inline R ipow(R x, int n) {
  R r(1);
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

template <class R> inline double to_double(const R& r) { return static_cast<double>(r); }

// Default tolerances scale with the working precision.
template <class R> struct Tol {
  R proj_eq;    // projective equality
  R cluster;    // multiplicity clustering radius
  R on_curve;   // normalized on-curve residual
  R rank_rel;   // relative singular-value cutoff for numerical rank
  R empty_rel;  // interpolation: smallest singular value must lie below this
  static Tol standard() {
    if constexpr (std::is_same_v<R, double>) {
      return {R(1e-8), R(1e-6), R(1e-9), R(1e-9), R(1e-7)};
    } else {
      return {R(1e-20), R(1e-12), R(1e-24), R(1e-20), R(1e-18)};
    }
  }
};

template <class R> inline R vmax_abs(const Vec<R>& v) {
  R m(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, mag(v(i)));
  return m;
}

template <class R> inline R mmax_abs(const Mat<R>& a) {
  R m(0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) m = std::max(m, mag(a(i, j)));
  return m;
}

// SVD based kernel of A with singular values; columns of V past `rank` span ker A.
template <class R> struct Svd {
  Vec<R> sigma;  // descending, padded with zeros up to cols
  Mat<R> V;
  Mat<R> U;

  // number of singular values above rel * sigma_max
  int rank(R rel) const {
    if (sigma.size() == 0) return 0;
    R top = std::real(sigma(0));
    int r = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      if (std::real(sigma(i)) > rel * top && std::real(sigma(i)) > R(0)) ++r;
    return r;
  }
  Mat<R> kernel(int rank) const { return V.rightCols(V.cols() - rank); }
  R s(Eigen::Index i) const { return i < sigma.size() ? std::real(sigma(i)) : R(0); }
};

template <class R> Svd<R> svd(const Mat<R>& a, bool want_u = false) {
  Svd<R> out;
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) {
    out.sigma = Vec<R>::Zero(n);
    out.V = Mat<R>::Identity(n, n);
    return out;
  }
  int opts = Eigen::ComputeFullV | (want_u ? Eigen::ComputeFullU : 0);
  Eigen::JacobiSVD<Mat<R>> s(a, opts);
  out.sigma = Vec<R>::Zero(n);
  for (Eigen::Index i = 0; i < s.singularValues().size(); ++i) out.sigma(i) = s.singularValues()(i);
  out.V = s.matrixV();
  if (want_u) out.U = s.matrixU();
  return out;
}

template <class R> Mat<R> kernel_basis(const Mat<R>& a, R rel, int* rank_out = nullptr) {
  auto s = svd(a);
  int r = s.rank(rel);
  if (rank_out) *rank_out = r;
  return s.kernel(r);
}

// Minimum-norm least squares solution; residual is ||A x - b|| / max(||b||, tiny).
template <class R> Vec<R> lstsq(const Mat<R>& a, const Vec<R>& b, R rel, R* residual = nullptr) {
  Eigen::JacobiSVD<Mat<R>> s(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  s.setThreshold(rel);
  Vec<R> x = s.solve(b);
  if (residual) {
    R nb = b.norm();
    *residual = (a * x - b).norm() / (nb > R(0) ? nb : R(1));
  }
  return x;
}

// Deterministic complex normal samples.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double normal() { return nd_(gen_); }
  double uniform() { return ud_(gen_); }
  std::uint64_t next() { return gen_(); }
  template <class R> Cx<R> cnormal() {
    double re = normal(), im = normal();
    return Cx<R>(R(re), R(im));
  }
  template <class R> Vec<R> cvec(Eigen::Index n) {
    Vec<R> v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal<R>();
    return v;
  }
  template <class R> Mat<R> cmat(Eigen::Index r, Eigen::Index c) {
    Mat<R> m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cnormal<R>();
    return m;
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> nd_{0.0, 1.0};
  std::uniform_real_distribution<double> ud_{0.0, 1.0};
};

// Roots of sum_k c[k] z^k via companion eigenvalues.
template <class R> std::vector<Cx<R>> poly_roots(std::vector<Cx<R>> c) {
  R scale(0);
  for (auto& z : c) scale = std::max(scale, mag(z));
  while (!c.empty() && mag(c.back()) <= scale * eps<R>() * R(64)) c.pop_back();
  std::vector<Cx<R>> out;
  if (c.size() <= 1) return out;
  const int n = int(c.size()) - 1;
  if (n == 1) {
    out.push_back(-c[0] / c[1]);
    return out;
  }
  Mat<R> comp = Mat<R>::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = Cx<R>(1);
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Mat<R>> es(comp, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "companion eigen solve failed");
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  // polish on the original polynomial
  for (auto& z : out) {
    for (int it = 0; it < 4; ++it) {
      Cx<R> p = c[n], dp(0);
      for (int k = n - 1; k >= 0; --k) {
        dp = dp * z + p;
        p = p * z + c[k];
      }
      if (mag(dp) == R(0)) break;
      Cx<R> step = p / dp;
      z -= step;
      if (mag(step) <= eps<R>() * (R(1) + mag(z))) break;
    }
  }
  return out;
}

}  // namespace ncp
