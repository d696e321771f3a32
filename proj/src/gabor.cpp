#include "sdgf/gabor.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace sdgf {

GaborParams GaborParams::make(Index L, Index a, Index b) {
  if (L < 1 || a < 1 || b < 1) {
    throw Error(ErrorCode::InvalidArgument, "lattice parameters must be positive");
  }
  if (L % a != 0 || L % b != 0) {
    throw Error(ErrorCode::InvalidArgument, "a and b must divide L (L=" + std::to_string(L) +
                                                ", a=" + std::to_string(a) +
                                                ", b=" + std::to_string(b) + ")");
  }
  return GaborParams{L, a, b};
}

std::string_view to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::Gaussian: return "gaussian";
    case WindowKind::Hann: return "hann";
    case WindowKind::Hamming: return "hamming";
    case WindowKind::Star: return "star";
    case WindowKind::Custom: return "custom";
  }
  return "custom";
}

WindowKind window_kind_from_string(std::string_view name) {
  for (auto kind : {WindowKind::Gaussian, WindowKind::Hann, WindowKind::Hamming,
                    WindowKind::Star, WindowKind::Custom}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown window kind '" + std::string(name) + "'");
}

WindowVector::WindowVector(CVector s, WindowKind k) : samples(std::move(s)), kind(k) {
  if (samples.size() == 0 || !(samples.norm() > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "window must be a nonzero vector");
  }
}

WindowVector make_window(WindowKind kind, Index L) {
  if (L < 2) throw Error(ErrorCode::InvalidArgument, "window length must be >= 2");
  Vector g(L);
  const Real len = static_cast<Real>(L);
  switch (kind) {
    case WindowKind::Gaussian: {
      // enough periods that the dropped tail is below exp(-40)
      const Index reach = 2 + static_cast<Index>(std::ceil(std::sqrt(40.0 / (kPi * len))));
      for (Index l = 0; l < L; ++l) {
        Real sum = 0.0;
        for (Index k = -reach; k <= reach; ++k) {
          const Real t = static_cast<Real>(l + k * L);
          sum += std::exp(-kPi * t * t / len);
        }
        g(l) = sum;
      }
      break;
    }
    case WindowKind::Hann:
      for (Index l = 0; l < L; ++l) g(l) = 0.5 - 0.5 * std::cos(2.0 * kPi * l / len);
      break;
    case WindowKind::Hamming:
      for (Index l = 0; l < L; ++l) g(l) = 0.54 - 0.46 * std::cos(2.0 * kPi * l / len);
      break;
    default:
      throw Error(ErrorCode::InvalidArgument,
                  "make_window builds gaussian/hann/hamming only; star windows come from "
                  "star_window()");
  }
  g /= g.norm();
  return WindowVector(g.cast<Complex>(), kind);
}

Index frequency_rows(const GaborParams& params, bool positive_frequency) {
  return positive_frequency ? params.M() / 2 + 1 : params.M();
}

AnalysisOperator::AnalysisOperator(WindowVector window, GaborParams params,
                                   bool positive_frequency)
    : window_(std::move(window)), params_(params), positive_frequency_(positive_frequency) {
  if (window_.size() != params_.L) {
    throw Error(ErrorCode::DimensionMismatch,
                "window length " + std::to_string(window_.size()) + " != L " +
                    std::to_string(params_.L));
  }
}

GaborCoefficients AnalysisOperator::dgt(const CVector& x) const {
  const Index L = params_.L, a = params_.a, M = params_.M(), N = params_.N();
  if (x.size() != L) {
    throw Error(ErrorCode::DimensionMismatch,
                "signal length " + std::to_string(x.size()) + " != L " + std::to_string(L));
  }
  const Index rows = frequency_rows();
  GaborCoefficients out{CMatrix(rows, N), params_, positive_frequency_};

  Eigen::FFT<Real> fft;
  CVector folded(M), spectrum(M);
  const CVector& g = window_.samples;
  for (Index n = 0; n < N; ++n) {
    folded.setZero();
    const Index shift = n * a;
    for (Index l = 0; l < L; ++l) {
      Index idx = l - shift;
      if (idx < 0) idx += L;
      folded(l % M) += x(l) * std::conj(g(idx));
    }
    fft.fwd(spectrum, folded);
    out.values.col(n) = spectrum.head(rows);
  }
  return out;
}

CVector AnalysisOperator::dgt_adjoint(const GaborCoefficients& c) const {
  const Index L = params_.L, a = params_.a, M = params_.M(), N = params_.N();
  const Index rows = frequency_rows();
  if (c.values.rows() != rows || c.values.cols() != N) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient matrix is " +
                                                  std::to_string(c.values.rows()) + "x" +
                                                  std::to_string(c.values.cols()) +
                                                  ", operator expects " + std::to_string(rows) +
                                                  "x" + std::to_string(N));
  }
  Eigen::FFT<Real> fft;
  CVector padded = CVector::Zero(M), synth(M);
  CVector x = CVector::Zero(L);
  const CVector& g = window_.samples;
  for (Index n = 0; n < N; ++n) {
    // sum_m c(m,n) exp(+2 pi i m r / M) = conj(DFT(conj(c)))(r)
    padded.head(rows) = c.values.col(n).conjugate();
    fft.fwd(synth, padded);
    const Index shift = n * a;
    for (Index l = 0; l < L; ++l) {
      Index idx = l - shift;
      if (idx < 0) idx += L;
      x(l) += g(idx) * std::conj(synth(l % M));
    }
  }
  return x;
}

CVector AnalysisOperator::adjoint(const CVector& flat) const {
  if (flat.size() != rows()) {
    throw Error(ErrorCode::DimensionMismatch, "flattened coefficient vector has length " +
                                                  std::to_string(flat.size()) + ", expected " +
                                                  std::to_string(rows()));
  }
  GaborCoefficients c{flat.reshaped(frequency_rows(), params_.N()), params_,
                      positive_frequency_};
  return dgt_adjoint(c);
}

CVector frame_row(const AnalysisOperator& op, Index j) {
  const GaborParams& p = op.params();
  const Index rows = op.frequency_rows();
  if (j < 0 || j >= op.rows()) throw Error(ErrorCode::InvalidArgument, "frame index out of range");
  const Index n = j / rows, m = j % rows;
  const Index L = p.L;
  CVector row(L);
  for (Index l = 0; l < L; ++l) {
    const Index idx = ((l - n * p.a) % L + L) % L;
    // m*b*l reduced mod L keeps the phase argument small
    const Index phase = (m * p.b % L) * l % L;
    row(l) = std::conj(op.window().samples(idx)) *
             std::polar(1.0, -2.0 * kPi * static_cast<Real>(phase) / static_cast<Real>(L));
  }
  return row;
}

CMatrix frame_matrix(const AnalysisOperator& op) {
  const double entries = static_cast<double>(op.rows()) * static_cast<double>(op.cols());
  if (entries > 1e7) {
    throw Error(ErrorCode::TooLarge,
                "frame matrix would hold " + std::to_string(static_cast<long long>(entries)) +
                    " entries (limit 1e7)");
  }
  CMatrix F(op.rows(), op.cols());
  for (Index j = 0; j < op.rows(); ++j) F.row(j) = frame_row(op, j).transpose();
  return F;
}

}  // namespace sdgf
