#ifndef SDGF_SOLVER_HPP
#define SDGF_SOLVER_HPP

#include <cmath>
#include <concepts>
#include <deque>
#include <limits>
#include <ostream>

#include "sdgf/sensing.hpp"
#include "sdgf/types.hpp"

namespace sdgf {

// An analysis operator seen from real signals: forward x -> Phi x (complex
// coefficients) and adjoint_real c -> Re(Phi^H c).
template <typename Op>
concept AnalysisMap = requires(const Op& op, const Vector& x, const CVector& c) {
  { op.rows() } -> std::convertible_to<Index>;
  { op.cols() } -> std::convertible_to<Index>;
  { op.forward(x) } -> std::convertible_to<CVector>;
  { op.adjoint_real(c) } -> std::convertible_to<Vector>;
};

// Explicit matrix, stored as real and imaginary parts so that products with
// real vectors stay real.
class DenseAnalysisMap {
 public:
  explicit DenseAnalysisMap(const CMatrix& phi) : re_(phi.real()), im_(phi.imag()) {}

  Index rows() const { return re_.rows(); }
  Index cols() const { return re_.cols(); }

  CVector forward(const Vector& x) const {
    CVector out(rows());
    out.real().noalias() = re_ * x;
    out.imag().noalias() = im_ * x;
    return out;
  }
  Vector adjoint_real(const CVector& c) const {
    Vector out = re_.transpose() * c.real();
    out.noalias() += im_.transpose() * c.imag();
    return out;
  }

 private:
  Matrix re_, im_;
};

struct SolveConfig {
  Real mu = 0.0;   // 0 selects the constrained problem, > 0 the regularized one
  Vector x0;       // initial guess; empty means zero
  Real eta = 0.0;  // radius of ||A x - y||_2 <= eta
  int max_iterations = 5000;
  // < 0 means 1e-6 * max(1, ||y||_2)
  Real primal_tolerance = -1.0;
  // relative objective change over `objective_window` iterations
  Real dual_tolerance = 1e-6;
  int objective_window = 50;
  // ||Phi||_2; estimated by power iteration when <= 0
  Real operator_norm = 0.0;
  std::ostream* log = nullptr;
  int log_every = 100;
};

struct SolveResult {
  Vector solution;
  int iterations = 0;
  Real objective = 0.0;         // ||Phi x||_1 (+ mu/2 ||x - x0||^2)
  Real constraint_slack = 0.0;  // ||A x - y||_2 - eta
  bool converged = false;
  Real operator_norm = 0.0;
};

// Largest singular value of Phi by power iteration on Phi^T Phi from a fixed
// start vector.
template <AnalysisMap Op>
Real operator_norm_estimate(const Op& phi, int max_iterations = 300, Real tolerance = 1e-10) {
  const Index L = phi.cols();
  Vector v(L);
  for (Index i = 0; i < L; ++i) v(i) = 1.0 + 0.5 * std::sin(static_cast<Real>(i + 1));
  v.normalize();
  Real estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector w = phi.adjoint_real(phi.forward(v));
    const Real next = w.norm();
    if (!(next > 0.0)) return 0.0;
    v = w / next;
    if (std::abs(next - estimate) <= tolerance * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return std::sqrt(estimate);
}

// mu = C * ||Phi x_ref||_inf
template <AnalysisMap Op>
Real mu_from_rule(const Op& phi, const Vector& x_ref, Real C) {
  if (x_ref.size() != phi.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "reference signal length");
  }
  const CVector c = phi.forward(x_ref);
  return C * (c.size() ? c.cwiseAbs().maxCoeff() : 0.0);
}

namespace detail {

// Projection onto {x : ||A x - y||_2 <= eta}; exact because A A^T = I.
inline void project_to_measurements(Vector& x, const MeasurementOperator& A, const Vector& y,
                                    Real eta) {
  const Vector r = A.apply(x) - y;
  const Real nr = r.norm();
  if (nr <= eta) return;
  const Real keep = eta / nr;
  for (Index i = 0; i < A.K(); ++i) {
    x(A.indices()[static_cast<std::size_t>(i)]) = y(i) + keep * r(i);
  }
}

inline void clip_to_unit_modulus(CVector& u) {
  for (Index j = 0; j < u.size(); ++j) {
    const Real m = std::abs(u(j));
    if (m > 1.0) u(j) /= m;
  }
}

}  // namespace detail

// Analysis l1 recovery
//
//   min ||Phi x||_1 + mu/2 ||x - x0||_2^2   s.t.  ||A x - y||_2 <= eta
//
// by the primal-dual method of Chambolle and Pock: the dual variable lives in
// the l_inf unit ball of the coefficients, the primal prox shrinks toward x0
// and projects onto the measurement ball. Every iterate is feasible. For
// mu > 0 the primal term is mu-strongly convex and the accelerated step rule
// is used. Step sizes scale with ||y||, so scaling (y, x0, eta) by t > 0
// scales the iterates of the mu = 0 problem by t.
template <AnalysisMap Op>
SolveResult solve_analysis_l1(const Op& phi, const MeasurementOperator& A, const Vector& y,
                              const SolveConfig& cfg) {
  const Index L = phi.cols();
  if (A.L() != L || y.size() != A.K()) {
    throw Error(ErrorCode::DimensionMismatch,
                "Phi has " + std::to_string(L) + " columns, A is " + std::to_string(A.K()) + "x" +
                    std::to_string(A.L()) + ", y has length " + std::to_string(y.size()));
  }
  if (cfg.x0.size() != 0 && cfg.x0.size() != L) {
    throw Error(ErrorCode::DimensionMismatch, "x0 length");
  }
  if (!(cfg.eta >= 0.0)) {
    throw Error(ErrorCode::Infeasible, "constraint radius eta must be >= 0");
  }
  if (cfg.mu < 0.0) throw Error(ErrorCode::InvalidArgument, "mu must be >= 0");

  const Real mu = cfg.mu;
  const Vector x0 = cfg.x0.size() ? cfg.x0 : Vector::Zero(L);
  const Real y_norm = y.norm();
  const Real primal_tol =
      cfg.primal_tolerance > 0.0 ? cfg.primal_tolerance : 1e-6 * std::max<Real>(1.0, y_norm);

  SolveResult result;
  result.operator_norm = cfg.operator_norm > 0.0 ? cfg.operator_norm : operator_norm_estimate(phi);
  const Real norm = result.operator_norm > 0.0 ? result.operator_norm : 1.0;
  Real scale = y_norm;
  if (!(scale > 0.0)) scale = x0.norm();
  if (!(scale > 0.0)) scale = 1.0;
  Real tau = 0.99 * scale / norm;
  Real sigma = 0.99 / (scale * norm);

  auto objective = [&](const Vector& x, const CVector& coeffs) {
    Real f = coeffs.cwiseAbs().sum();
    if (mu > 0.0) f += 0.5 * mu * (x - x0).squaredNorm();
    return f;
  };

  Vector x = x0;
  detail::project_to_measurements(x, A, y, cfg.eta);
  CVector phi_x = phi.forward(x);
  CVector phi_xbar = phi_x;
  CVector u = CVector::Zero(phi.rows());

  Real best = objective(x, phi_x);
  result.solution = x;
  std::deque<Real> history{best};
  constexpr Real tiny = std::numeric_limits<Real>::min();

  int it = 0;
  for (it = 1; it <= cfg.max_iterations; ++it) {
    u += sigma * phi_xbar;
    detail::clip_to_unit_modulus(u);

    Vector x_new = x - tau * phi.adjoint_real(u);
    if (mu > 0.0) x_new = (x_new + (tau * mu) * x0) / (1.0 + tau * mu);
    detail::project_to_measurements(x_new, A, y, cfg.eta);

    Real theta = 1.0;
    if (mu > 0.0) {
      theta = 1.0 / std::sqrt(1.0 + 2.0 * mu * tau);
      tau *= theta;
      sigma /= theta;
    }
    CVector phi_new = phi.forward(x_new);
    phi_xbar = (1.0 + theta) * phi_new - theta * phi_x;
    const Real step = (x_new - x).norm();
    x = std::move(x_new);
    phi_x = std::move(phi_new);

    const Real f = objective(x, phi_x);
    if (f < best) {
      best = f;
      result.solution = x;
    }
    if (cfg.log && cfg.log_every > 0 && it % cfg.log_every == 0) {
      *cfg.log << "iter " << it << " objective " << f << " slack "
               << (A.apply(x) - y).norm() - cfg.eta << '\n';
    }
    history.push_back(f);
    if (static_cast<int>(history.size()) > cfg.objective_window + 1) history.pop_front();
    if (static_cast<int>(history.size()) == cfg.objective_window + 1) {
      const Real change = std::abs(f - history.front());
      if (change <= cfg.dual_tolerance * std::max(std::abs(f), tiny) &&
          step <= cfg.dual_tolerance * std::max(x.norm(), tiny)) {
        result.converged = true;
        break;
      }
    }
  }
  result.iterations = std::min(it, cfg.max_iterations);
  result.objective = best;
  result.constraint_slack = (A.apply(result.solution) - y).norm() - cfg.eta;
  if (result.constraint_slack > primal_tol) result.converged = false;
  return result;
}

}  // namespace sdgf

#endif  // SDGF_SOLVER_HPP
