// Test-only reference implementations. Nothing here shares code paths with
// the library routines it is used to check.
#ifndef SDGF_TESTS_ORACLES_HPP
#define SDGF_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sdgf/types.hpp"

namespace oracle {

using sdgf::CMatrix;
using sdgf::Complex;
using sdgf::CVector;
using sdgf::Index;
using sdgf::Matrix;
using sdgf::Real;
using sdgf::Vector;

inline constexpr Real kPi = sdgf::kPi;

// c(m, n) = sum_l x(l) conj(g(l - n a)) exp(-2 pi i m b l / L), summed term by term.
inline CMatrix naive_dgt(const CVector& g, const CVector& x, Index a, Index b, Index rows) {
  const Index L = x.size(), N = L / a;
  CMatrix c(rows, N);
  for (Index n = 0; n < N; ++n) {
    for (Index m = 0; m < rows; ++m) {
      Complex acc(0.0, 0.0);
      for (Index l = 0; l < L; ++l) {
        const Index idx = ((l - n * a) % L + L) % L;
        const Real phase = -2.0 * kPi * static_cast<Real>((m * b * l) % L) / static_cast<Real>(L);
        acc += x(l) * std::conj(g(idx)) * std::polar(1.0, phase);
      }
      c(m, n) = acc;
    }
  }
  return c;
}

inline CVector random_cvector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<Real> d;
  CVector v(n);
  for (Index i = 0; i < n; ++i) {
    const Real re = d(rng);
    const Real im = d(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

inline Vector random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<Real> d;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

inline Real max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Average-rank Spearman correlation.
inline std::vector<Real> ranks(const std::vector<Real>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return v[i] < v[j]; });
  std::vector<Real> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const Real avg = 0.5 * static_cast<Real>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline Real spearman(const std::vector<Real>& a, const std::vector<Real>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const Real n = static_cast<Real>(a.size());
  const Real ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const Real mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  Real sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

// ---------------------------------------------------------------------------
// Exact minimizers for tiny analysis-l1 instances with a real analysis
// matrix. With the sampled coordinates pinned (eta = 0) the problem reduces to
//
//   f(z) = sum_j |r_j + B_j z| + mu/2 ||z - z0||^2 + const,  z in R^d.
// ---------------------------------------------------------------------------

struct Reduced {
  Vector r;   // Phi[:, S] y
  Matrix B;   // Phi[:, F]
  Vector z0;  // x0[F]
  Real mu = 0.0;
  Real constant = 0.0;  // mu/2 ||y - x0[S]||^2

  Real value(const Vector& z) const {
    Real f = (r + B * z).cwiseAbs().sum() + constant;
    if (mu > 0) f += 0.5 * mu * (z - z0).squaredNorm();
    return f;
  }
};

inline Reduced reduce(const Matrix& phi, const std::vector<Index>& sampled, const Vector& y,
                      const Vector& x0, Real mu) {
  const Index L = phi.cols();
  std::vector<Index> free;
  for (Index i = 0; i < L; ++i) {
    if (std::find(sampled.begin(), sampled.end(), i) == sampled.end()) free.push_back(i);
  }
  Reduced red;
  red.mu = mu;
  red.r = Vector::Zero(phi.rows());
  for (std::size_t k = 0; k < sampled.size(); ++k) red.r += phi.col(sampled[k]) * y(static_cast<Index>(k));
  red.B.resize(phi.rows(), static_cast<Index>(free.size()));
  red.z0.resize(static_cast<Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    red.B.col(static_cast<Index>(k)) = phi.col(free[k]);
    red.z0(static_cast<Index>(k)) = x0(free[k]);
  }
  Real c = 0;
  for (std::size_t k = 0; k < sampled.size(); ++k) {
    const Real d = y(static_cast<Index>(k)) - x0(sampled[k]);
    c += d * d;
  }
  red.constant = 0.5 * mu * c;
  return red;
}

// mu = 0: the minimum of a coercive piecewise-linear function is attained at
// a vertex of the hyperplane arrangement {r_j + B_j z = 0}; try them all.
inline Real lp_vertex_minimum(const Reduced& red) {
  const Index P = red.B.rows(), d = red.B.cols();
  if (d == 0) return red.value(Vector());
  Real best = std::numeric_limits<Real>::infinity();
  std::vector<Index> pick(static_cast<std::size_t>(d));
  std::iota(pick.begin(), pick.end(), Index{0});
  while (true) {
    Matrix M(d, d);
    Vector rhs(d);
    for (Index i = 0; i < d; ++i) {
      M.row(i) = red.B.row(pick[static_cast<std::size_t>(i)]);
      rhs(i) = -red.r(pick[static_cast<std::size_t>(i)]);
    }
    Eigen::FullPivLU<Matrix> lu(M);
    if (lu.isInvertible()) best = std::min(best, red.value(lu.solve(rhs)));
    Index i = d - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == P - d + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < d; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

// Exact minimum over t of sum_i |alpha_i + beta_i t| + q/2 t^2 + p t  (q > 0):
// on each interval between breakpoints the function is a convex quadratic.
inline Real min_1d(const std::vector<Real>& alpha, const std::vector<Real>& beta, Real q, Real p,
                   Real* argmin = nullptr) {
  auto f = [&](Real t) {
    Real v = 0.5 * q * t * t + p * t;
    for (std::size_t i = 0; i < alpha.size(); ++i) v += std::abs(alpha[i] + beta[i] * t);
    return v;
  };
  std::vector<Real> knots;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (beta[i] != 0.0) knots.push_back(-alpha[i] / beta[i]);
  }
  std::sort(knots.begin(), knots.end());
  std::vector<Real> candidates = knots;
  // interval boundaries including +-infinity
  std::vector<Real> edges;
  edges.push_back(-std::numeric_limits<Real>::infinity());
  edges.insert(edges.end(), knots.begin(), knots.end());
  edges.push_back(std::numeric_limits<Real>::infinity());
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    Real lo = edges[k], hi = edges[k + 1];
    Real mid;
    if (std::isinf(lo) && std::isinf(hi)) mid = 0.0;
    else if (std::isinf(lo)) mid = hi - 1.0;
    else if (std::isinf(hi)) mid = lo + 1.0;
    else mid = 0.5 * (lo + hi);
    Real slope = p;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      const Real s = alpha[i] + beta[i] * mid;
      slope += (s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0)) * beta[i];
    }
    const Real t = -slope / q;
    if (t > lo && t < hi) candidates.push_back(t);
  }
  Real best = std::numeric_limits<Real>::infinity();
  for (Real t : candidates) {
    const Real v = f(t);
    if (v < best) {
      best = v;
      if (argmin) *argmin = t;
    }
  }
  return best;
}

// Restriction of the reduced objective to the line z = base + t dir.
inline Real min_on_line(const Reduced& red, const Vector& base, const Vector& dir) {
  std::vector<Real> alpha, beta;
  for (Index j = 0; j < red.B.rows(); ++j) {
    alpha.push_back(red.r(j) + red.B.row(j).dot(base));
    beta.push_back(red.B.row(j).dot(dir));
  }
  const Real q = red.mu * dir.squaredNorm();
  const Real p = red.mu * dir.dot(base - red.z0);
  const Real offset = 0.5 * red.mu * (base - red.z0).squaredNorm() + red.constant;
  return min_1d(alpha, beta, q, p) + offset;
}

// mu > 0, d <= 2. The minimizer lies at a vertex, on one line (exact 1D
// search along it) or inside a cell, where the objective is the quadratic
// selected by that cell's sign pattern. Cells are reached through points just
// off every edge of the arrangement.
inline Real strongly_convex_minimum(const Reduced& red) {
  const Index P = red.B.rows(), d = red.B.cols();
  if (d == 0) return red.value(Vector());
  if (d == 1) return min_on_line(red, Vector::Zero(1), Vector::Ones(1));
  Real best = std::numeric_limits<Real>::infinity();
  auto cell_candidate = [&](const Vector& probe) {
    Vector s(P);
    for (Index j = 0; j < P; ++j) {
      const Real v = red.r(j) + red.B.row(j).dot(probe);
      s(j) = v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
    }
    const Vector z = red.z0 - red.B.transpose() * s / red.mu;
    best = std::min(best, red.value(z));
  };
  cell_candidate(red.z0);
  for (Index j = 0; j < P; ++j) {
    const Vector n = red.B.row(j).transpose();
    if (n.norm() == 0.0) continue;
    const Vector base = -red.r(j) * n / n.squaredNorm();
    const Vector dir = Vector{{-n(1), n(0)}}.normalized();
    const Vector normal = n.normalized();
    best = std::min(best, min_on_line(red, base, dir));
    std::vector<Real> ts;
    for (Index k = 0; k < P; ++k) {
      if (k == j) continue;
      const Real denom = red.B.row(k).dot(dir);
      if (std::abs(denom) < 1e-14) continue;
      ts.push_back(-(red.r(k) + red.B.row(k).dot(base)) / denom);
    }
    std::sort(ts.begin(), ts.end());
    for (Real t : ts) best = std::min(best, red.value(base + t * dir));  // vertices
    std::vector<Real> mids;
    if (ts.empty()) {
      mids.push_back(0.0);
    } else {
      mids.push_back(ts.front() - 1.0);
      for (std::size_t i = 0; i + 1 < ts.size(); ++i) mids.push_back(0.5 * (ts[i] + ts[i + 1]));
      mids.push_back(ts.back() + 1.0);
    }
    for (Real t : mids) {
      Real gap = 1.0;
      for (std::size_t i = 0; i < ts.size(); ++i) gap = std::min(gap, std::abs(ts[i] - t));
      const Real eps = 1e-6 * std::max(gap, 1e-9);
      cell_candidate(base + t * dir + eps * normal);
      cell_candidate(base + t * dir - eps * normal);
    }
  }
  return best;
}

}  // namespace oracle

#endif  // SDGF_TESTS_ORACLES_HPP
