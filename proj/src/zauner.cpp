#include "sdgf/zauner.hpp"

#include <array>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "sdgf/csv.hpp"

namespace sdgf {

SymplecticMatrix SymplecticMatrix::make(std::int64_t alpha, std::int64_t beta, std::int64_t gamma,
                                        std::int64_t delta, std::int64_t L) {
  SymplecticMatrix G{Residue(alpha, L), Residue(beta, L), Residue(gamma, L), Residue(delta, L)};
  if (G.determinant().value() != 1 % L) {
    throw Error(ErrorCode::InvalidArgument,
                "determinant " + std::to_string(G.determinant().value()) + " != 1 mod " +
                    std::to_string(L));
  }
  return G;
}

SymplecticMatrix zauner_matrix(std::int64_t L) {
  if (L < 3) throw Error(ErrorCode::InvalidArgument, "Zauner matrix needs L >= 3");
  return SymplecticMatrix::make(0, L - 1, 1, L - 1, L);
}

MetaplecticAction::MetaplecticAction(const SymplecticMatrix& G, Real theta)
    : G_(G), theta_(theta), L_(G.L()), beta_inv_(mod_inverse(G.beta).value()) {
  const Real len = static_cast<Real>(L_);
  scale_ = std::polar(1.0 / std::sqrt(len), theta);
  // tau = exp(i pi (L+1) / L), so tau^k = exp(i pi ((L+1) k mod 2L) / L)
  tau_powers_.resize(static_cast<std::size_t>(2 * L_));
  for (std::int64_t k = 0; k < 2 * L_; ++k) {
    const std::int64_t r = mod_floor((L_ + 1) * k, 2 * L_);
    tau_powers_[static_cast<std::size_t>(k)] = std::polar(1.0, kPi * static_cast<Real>(r) / len);
  }
}

std::int64_t MetaplecticAction::exponent(std::int64_t u, std::int64_t v) const {
  const std::int64_t m = 2 * L_;
  const std::int64_t q = mod_floor(G_.alpha.value() * mod_floor(v * v, m) - 2 * u * v +
                                       G_.delta.value() * mod_floor(u * u, m),
                                   m);
  return mod_floor(beta_inv_ * q, m);
}

Complex MetaplecticAction::entry(std::int64_t u, std::int64_t v) const {
  return scale_ * tau_powers_[static_cast<std::size_t>(exponent(u, v))];
}

CMatrix MetaplecticAction::dense() const {
  CMatrix U(L_, L_);
  for (std::int64_t v = 0; v < L_; ++v) {
    for (std::int64_t u = 0; u < L_; ++u) U(u, v) = entry(u, v);
  }
  return U;
}

CVector MetaplecticAction::apply_rows(const CVector& x) const {
  if (x.size() != L_) throw Error(ErrorCode::DimensionMismatch, "metaplectic input length");
  const std::int64_t m = 2 * L_;
  const std::int64_t alpha = G_.alpha.value();
  CVector y(L_);
  for (std::int64_t u = 0; u < L_; ++u) {
    // exponent along the row is quadratic in v; advance it by first differences
    std::int64_t e = exponent(u, 0);
    const std::int64_t step0 = mod_floor(beta_inv_ * mod_floor(alpha - 2 * u, m), m);
    const std::int64_t step2 = mod_floor(2 * beta_inv_ * alpha, m);
    std::int64_t step = step0;
    Complex acc(0.0, 0.0);
    for (std::int64_t v = 0; v < L_; ++v) {
      acc += tau_powers_[static_cast<std::size_t>(e)] * x(v);
      e += step;
      if (e >= m) e -= m;
      step += step2;
      if (step >= m) step -= m;
    }
    y(u) = scale_ * acc;
  }
  return y;
}

CVector MetaplecticAction::apply_factored(const CVector& x) const {
  if (L_ % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "factored metaplectic action needs odd L");
  }
  if (x.size() != L_) throw Error(ErrorCode::DimensionMismatch, "metaplectic input length");
  // For odd L, tau = w^h with w = exp(2 pi i / L) and h = (L+1)/2 = 2^-1 mod L:
  //   U(u,v) = scale * w^{h b' delta u^2} * w^{-b' u v} * w^{h b' alpha v^2}
  const std::int64_t L = L_;
  const std::int64_t h = (L + 1) / 2;
  const std::int64_t in_coef = mod_floor(h * mod_floor(beta_inv_ * G_.alpha.value(), L), L);
  const std::int64_t out_coef = mod_floor(h * mod_floor(beta_inv_ * G_.delta.value(), L), L);
  const Real len = static_cast<Real>(L);
  auto omega = [&](std::int64_t k) {
    return std::polar(1.0, 2.0 * kPi * static_cast<Real>(mod_floor(k, L)) / len);
  };
  CVector chirped(L);
  for (std::int64_t v = 0; v < L; ++v) {
    chirped(v) = x(v) * omega(in_coef * mod_floor(v * v, L));
  }
  Eigen::FFT<Real> fft;
  CVector spectrum(L);
  fft.fwd(spectrum, chirped);
  CVector y(L);
  for (std::int64_t u = 0; u < L; ++u) {
    y(u) = scale_ * omega(out_coef * mod_floor(u * u, L)) * spectrum(mod_floor(beta_inv_ * u, L));
  }
  return y;
}

CVector MetaplecticAction::apply(const CVector& x) const {
  return L_ % 2 == 1 ? apply_factored(x) : apply_rows(x);
}

MetaplecticOperator metaplectic(const SymplecticMatrix& G, Real theta) {
  MetaplecticAction action(G, theta);
  return MetaplecticOperator{action.dense(), theta, G};
}

namespace {

CVector random_unit_vector(std::int64_t L, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> normal(0.0, 1.0);
  CVector v(L);
  for (std::int64_t i = 0; i < L; ++i) {
    const Real re = normal(rng);
    const Real im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

}  // namespace

StarWindow star_window(std::int64_t L, const StarWindowOptions& options) {
  if (L < 3 || !is_admissible_length(L, AdmissibilityMode::Relaxed).admissible) {
    throw Error(ErrorCode::NotAdmissible,
                "L = " + std::to_string(L) + " must be odd and divisible by 3");
  }
  const MetaplecticAction action(zauner_matrix(L), options.theta);
  const bool dense = L <= options.dense_limit;
  CMatrix U;
  if (dense) U = action.dense();
  auto apply = [&](const CVector& x) -> CVector {
    if (dense) return U * x;
    return action.apply(x);
  };
  // independent route for the residual when U is not stored
  auto certify = [&](const CVector& g, Complex lambda) -> Real {
    const CVector Ug = dense ? CVector(U * g) : action.apply_rows(g);
    return (Ug - lambda * g).norm();
  };

  CVector e0 = CVector::Zero(L);
  e0(0) = 1.0;
  Complex c = apply(apply(apply(e0)))(0);
  c /= std::abs(c);

  const CVector v = random_unit_vector(L, options.seed);
  auto project = [&](const CVector& x, Complex lambda) -> CVector {
    const CVector w1 = apply(x);
    const CVector w2 = apply(w1);
    const Complex lc = std::conj(lambda);
    return (x + lc * w1 + lc * lc * w2) / 3.0;
  };

  for (int k = 0; k < 3; ++k) {
    const Complex lambda = std::polar(1.0, (std::arg(c) + 2.0 * kPi * k) / 3.0);
    CVector p = project(v, lambda);
    const Real weight = p.norm();
    if (weight <= 1e-6) continue;
    // second pass removes the rounding left by the first
    p = project(p / weight, lambda);
    p /= p.norm();
    const Real residual = certify(p, lambda);
    if (residual <= options.residual_tolerance) {
      return StarWindow{WindowVector(p, WindowKind::Star), lambda, residual};
    }
  }

  if (dense) {
    Eigen::ComplexEigenSolver<CMatrix> solver(U);
    if (solver.info() == Eigen::Success) {
      Index best = 0;
      Real best_residual = std::numeric_limits<Real>::infinity();
      for (Index j = 0; j < L; ++j) {
        const CVector g = solver.eigenvectors().col(j).normalized();
        const Real r = certify(g, solver.eigenvalues()(j));
        if (r < best_residual) {
          best_residual = r;
          best = j;
        }
      }
      if (best_residual <= options.residual_tolerance) {
        return StarWindow{WindowVector(solver.eigenvectors().col(best).normalized(),
                                       WindowKind::Star),
                          solver.eigenvalues()(best), best_residual};
      }
    }
  }
  throw Error(ErrorCode::EigensolveFailed,
              "no eigenvector of U_Z met residual " + std::to_string(options.residual_tolerance) +
                  " at L = " + std::to_string(L));
}

void save_window(const std::string& path, const WindowVector& window) {
  write_vector_csv(path, window.samples);
}

WindowVector load_window(const std::string& path, WindowKind kind) {
  return WindowVector(read_vector_csv(path), kind);
}

}  // namespace sdgf
