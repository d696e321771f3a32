#ifndef SDGF_SENSING_HPP
#define SDGF_SENSING_HPP

#include <cstdint>
#include <initializer_list>
#include <type_traits>
#include <vector>

#include "sdgf/types.hpp"

namespace sdgf {

// Deterministic 64-bit stream key from a master seed and any number of
// integer labels (e.g. measurement count and repetition index).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

// K distinct rows of the L x L identity. Rows are orthonormal, so A A^T = I.
class MeasurementOperator {
 public:
  MeasurementOperator(Index L, std::vector<Index> indices, std::uint64_t seed = 0);

  Index L() const { return L_; }
  Index K() const { return static_cast<Index>(indices_.size()); }
  const std::vector<Index>& indices() const { return indices_; }
  std::uint64_t seed() const { return seed_; }

  // A x: the sampled entries of x in index order.
  template <typename Derived>
  Vector apply(const Eigen::MatrixBase<Derived>& x) const {
    static_assert(!Eigen::NumTraits<typename Derived::Scalar>::IsComplex,
                  "the measurement layer is real-valued");
    check_length(x.size(), L_, "apply");
    Vector y(K());
    for (Index i = 0; i < K(); ++i) y(i) = x(indices_[static_cast<std::size_t>(i)]);
    return y;
  }

  // A^T y: scatter back to the sampled positions, zeros elsewhere.
  template <typename Derived>
  Vector adjoint_apply(const Eigen::MatrixBase<Derived>& y) const {
    static_assert(!Eigen::NumTraits<typename Derived::Scalar>::IsComplex,
                  "the measurement layer is real-valued");
    check_length(y.size(), K(), "adjoint_apply");
    Vector x = Vector::Zero(L_);
    for (Index i = 0; i < K(); ++i) x(indices_[static_cast<std::size_t>(i)]) = y(i);
    return x;
  }

  Matrix dense() const;

 private:
  static void check_length(Index got, Index expected, const char* what);

  Index L_;
  std::vector<Index> indices_;
  std::uint64_t seed_;
};

// K indices drawn uniformly without replacement, sorted. Throws BadDimensions
// unless 1 <= K <= L.
MeasurementOperator sample_operator(Index L, Index K, std::uint64_t seed);

struct NoiseModel {
  Real sigma = 0.001;
  std::uint64_t seed = 0;
};

enum class EtaRule {
  Expected,  // eta = sigma * sqrt(K)
  Exact,     // eta = ||e||_2, the realized noise norm
};

struct NoisyMeasurements {
  Vector y;
  Real eta = 0.0;         // sigma * sqrt(K)
  Real noise_norm = 0.0;  // ||e||_2

  Real radius(EtaRule rule) const { return rule == EtaRule::Expected ? eta : noise_norm; }
};

// y + e with e ~ N(0, sigma^2 I), seeded.
NoisyMeasurements corrupt(const Vector& y, const NoiseModel& noise);

}  // namespace sdgf

#endif  // SDGF_SENSING_HPP
