#include "sdgf/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace sdgf {

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master);
  for (auto k : keys) push(k);
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

MeasurementOperator::MeasurementOperator(Index L, std::vector<Index> indices, std::uint64_t seed)
    : L_(L), indices_(std::move(indices)), seed_(seed) {
  if (L < 1 || indices_.empty() || static_cast<Index>(indices_.size()) > L) {
    throw Error(ErrorCode::BadDimensions, "need 1 <= K <= L");
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const bool in_range = indices_[i] >= 0 && indices_[i] < L;
    const bool increasing = i == 0 || indices_[i] > indices_[i - 1];
    if (!in_range || !increasing) {
      throw Error(ErrorCode::BadDimensions,
                  "indices must be strictly increasing positions in [0, L)");
    }
  }
}

void MeasurementOperator::check_length(Index got, Index expected, const char* what) {
  if (got != expected) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": length " +
                                                  std::to_string(got) + ", expected " +
                                                  std::to_string(expected));
  }
}

Matrix MeasurementOperator::dense() const {
  Matrix A = Matrix::Zero(K(), L_);
  for (Index i = 0; i < K(); ++i) A(i, indices_[static_cast<std::size_t>(i)]) = 1.0;
  return A;
}

MeasurementOperator sample_operator(Index L, Index K, std::uint64_t seed) {
  if (L < 1 || K < 1 || K > L) {
    throw Error(ErrorCode::BadDimensions,
                "need 1 <= K <= L (K=" + std::to_string(K) + ", L=" + std::to_string(L) + ")");
  }
  std::vector<Index> pool(static_cast<std::size_t>(L));
  std::iota(pool.begin(), pool.end(), Index{0});
  std::mt19937_64 rng(seed);
  for (Index i = 0; i < K; ++i) {
    std::uniform_int_distribution<Index> pick(i, L - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(K));
  std::sort(pool.begin(), pool.end());
  return MeasurementOperator(L, std::move(pool), seed);
}

NoisyMeasurements corrupt(const Vector& y, const NoiseModel& noise) {
  if (noise.sigma < 0.0) throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
  NoisyMeasurements out;
  out.y = y;
  out.eta = noise.sigma * std::sqrt(static_cast<Real>(y.size()));
  if (noise.sigma == 0.0) return out;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<Real> normal(0.0, noise.sigma);
  Vector e(y.size());
  for (Index i = 0; i < e.size(); ++i) e(i) = normal(rng);
  out.y += e;
  out.noise_norm = e.norm();
  return out;
}

}  // namespace sdgf
