#ifndef SDGF_ZAUNER_HPP
#define SDGF_ZAUNER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sdgf/gabor.hpp"
#include "sdgf/modring.hpp"
#include "sdgf/types.hpp"

namespace sdgf {

// (alpha beta; gamma delta) in SL(2, Z_L).
struct SymplecticMatrix {
  Residue alpha, beta, gamma, delta;

  // Throws InvalidArgument unless alpha*delta - beta*gamma == 1 (mod L).
  static SymplecticMatrix make(std::int64_t alpha, std::int64_t beta, std::int64_t gamma,
                               std::int64_t delta, std::int64_t L);

  std::int64_t L() const { return alpha.modulus(); }
  Residue determinant() const { return alpha * delta - beta * gamma; }
};

// Z = (0 -1; 1 -1), stored as (0, L-1, 1, L-1).
SymplecticMatrix zauner_matrix(std::int64_t L);

// Entry-level description of the metaplectic unitary
//
//   U(u, v) = e^{i theta} / sqrt(L) * tau^{beta^-1 (alpha v^2 - 2uv + delta u^2)},
//   tau = -exp(i pi / L).
//
// tau has order dividing 2L, so exponents are reduced mod 2L and looked up in
// a table.
class MetaplecticAction {
 public:
  // Throws NotInvertible when beta is not a unit mod L.
  MetaplecticAction(const SymplecticMatrix& G, Real theta = 0.0);

  std::int64_t L() const { return L_; }
  Real theta() const { return theta_; }
  const SymplecticMatrix& source() const { return G_; }

  // Exponent of tau for entry (u, v), in [0, 2L).
  std::int64_t exponent(std::int64_t u, std::int64_t v) const;
  Complex entry(std::int64_t u, std::int64_t v) const;

  CMatrix dense() const;

  // U x via the row formula; O(L^2), no storage.
  CVector apply_rows(const CVector& x) const;
  // U x = chirp * DFT(chirp * x) permuted by beta^-1; odd L only, O(L log L).
  CVector apply_factored(const CVector& x) const;
  // Factored form when L is odd, row formula otherwise.
  CVector apply(const CVector& x) const;

 private:
  SymplecticMatrix G_;
  Real theta_;
  std::int64_t L_;
  std::int64_t beta_inv_;
  Complex scale_;
  std::vector<Complex> tau_powers_;  // tau^k, k in [0, 2L)
};

struct MetaplecticOperator {
  CMatrix entries;
  Real theta = 0.0;
  SymplecticMatrix source;
};

MetaplecticOperator metaplectic(const SymplecticMatrix& G, Real theta = 0.0);

struct StarWindow {
  WindowVector vector;  // kind == Star, unit norm
  Complex eigenvalue;
  Real residual = 0.0;  // || U_Z g - lambda g ||_2
};

struct StarWindowOptions {
  Real theta = 0.0;
  std::uint64_t seed = 1;
  Real residual_tolerance = 1e-8;
  // U_Z is stored densely up to this length, applied matrix-free above it.
  std::int64_t dense_limit = 2000;
};

// A unit eigenvector of the Zauner unitary. U_Z^3 = c I, so the spectral
// projector (I + conj(lambda) U + conj(lambda)^2 U^2) / 3 onto each cube root
// lambda of c is applied to a seeded random vector. Falls back to a dense
// eigendecomposition (L <= dense_limit) if the residual check fails.
// Throws NotAdmissible or EigensolveFailed.
StarWindow star_window(std::int64_t L, const StarWindowOptions& options = {});

// Two-column (real, imag) CSV.
void save_window(const std::string& path, const WindowVector& window);
WindowVector load_window(const std::string& path, WindowKind kind = WindowKind::Custom);

}  // namespace sdgf

#endif  // SDGF_ZAUNER_HPP
