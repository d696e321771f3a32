#ifndef SDGF_GABOR_HPP
#define SDGF_GABOR_HPP

#include <string>
#include <string_view>

#include "sdgf/types.hpp"

namespace sdgf {

// Lattice (L, a, b): N = L/a time shifts, M = L/b frequency shifts,
// P = M*N frame elements.
struct GaborParams {
  Index L = 0;
  Index a = 0;
  Index b = 0;

  static GaborParams make(Index L, Index a, Index b);

  Index N() const { return L / a; }
  Index M() const { return L / b; }
  Index P() const { return M() * N(); }
  // a*b < L is necessary for (g, a, b) to be a frame.
  bool frame_lattice() const { return a * b < L; }

  friend bool operator==(const GaborParams&, const GaborParams&) = default;
};

enum class WindowKind { Gaussian, Hann, Hamming, Star, Custom };

std::string_view to_string(WindowKind kind);
WindowKind window_kind_from_string(std::string_view name);

struct WindowVector {
  CVector samples;
  WindowKind kind = WindowKind::Custom;

  WindowVector() = default;
  // Throws InvalidArgument on a zero vector.
  WindowVector(CVector samples, WindowKind kind);

  Index size() const { return samples.size(); }
};

// Periodic, unit-norm windows of length L:
//   gaussian  g(l) = sum_k exp(-pi (l + kL)^2 / L)      (peak at l = 0)
//   hann      g(l) = 0.5  - 0.5  cos(2 pi l / L)
//   hamming   g(l) = 0.54 - 0.46 cos(2 pi l / L)
WindowVector make_window(WindowKind kind, Index L);

// Coefficients c(m, n); column n holds all kept frequencies of time shift n,
// so column-major storage is the n-major flattening used everywhere.
struct GaborCoefficients {
  CMatrix values;
  GaborParams params;
  bool positive_frequency = false;

  auto flat() const { return values.reshaped(); }
};

// Frequency rows kept: M, or floor(M/2)+1 when only non-negative
// frequencies are computed.
Index frequency_rows(const GaborParams& params, bool positive_frequency);

// The digital Gabor transform
//
//   c(m, n) = sum_l x(l) conj(g(l - n a)) exp(-2 pi i m b l / L)
//
// with cyclic index arithmetic. The fast path folds x(l) conj(g(l - na))
// modulo M and runs one length-M DFT per time shift.
class AnalysisOperator {
 public:
  AnalysisOperator(WindowVector window, GaborParams params, bool positive_frequency = false);

  const WindowVector& window() const { return window_; }
  const GaborParams& params() const { return params_; }
  bool positive_frequency() const { return positive_frequency_; }

  Index frequency_rows() const { return sdgf::frequency_rows(params_, positive_frequency_); }
  // Number of coefficients (flattened length).
  Index rows() const { return frequency_rows() * params_.N(); }
  Index cols() const { return params_.L; }

  GaborCoefficients dgt(const CVector& x) const;
  CVector dgt_adjoint(const GaborCoefficients& c) const;

  // Flattened forms; accept any real or complex Eigen vector expression.
  template <typename Derived>
  CVector forward(const Eigen::MatrixBase<Derived>& x) const {
    return dgt(x.template cast<Complex>()).values.reshaped();
  }
  CVector adjoint(const CVector& flat) const;
  // Re(Phi^H c): the adjoint of Phi seen as a map from real signals.
  Vector adjoint_real(const CVector& flat) const { return adjoint(flat).real(); }

 private:
  WindowVector window_;
  GaborParams params_;
  bool positive_frequency_;
};

// Entry j of the flattened transform equals <x, frame element j>; row j of
// the analysis matrix is conj(g_{n,m}) with j = n * frequency_rows + m.
CVector frame_row(const AnalysisOperator& op, Index j);

// Explicit analysis matrix; throws TooLarge above 1e7 entries.
CMatrix frame_matrix(const AnalysisOperator& op);

}  // namespace sdgf

#endif  // SDGF_GABOR_HPP
