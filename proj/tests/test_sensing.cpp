#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sdgf/sensing.hpp"

using namespace sdgf;

namespace {

bool throws_code(ErrorCode code, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("full sampling is the identity") {
  const auto A = sample_operator(33, 33, 5);
  for (Index i = 0; i < 33; ++i) CHECK(A.indices()[static_cast<std::size_t>(i)] == i);
  CHECK(A.dense() == Matrix::Identity(33, 33));
}

TEST_CASE("sampling is deterministic, sorted and distinct") {
  CHECK(sample_operator(33, 1, 9).indices() == sample_operator(33, 1, 9).indices());
  CHECK(sample_operator(1000, 400, 3).indices() == sample_operator(1000, 400, 3).indices());
  CHECK(sample_operator(1000, 400, 3).indices() != sample_operator(1000, 400, 4).indices());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto A = sample_operator(45, 20, seed);
    CHECK(A.K() == 20);
    CHECK(A.seed() == seed);
    const auto& idx = A.indices();
    for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i - 1] < idx[i]);
    CHECK(idx.front() >= 0);
    CHECK(idx.back() < 45);
  }
  CHECK(throws_code(ErrorCode::BadDimensions, [] { sample_operator(33, 0, 1); }));
  CHECK(throws_code(ErrorCode::BadDimensions, [] { sample_operator(33, 34, 1); }));
  CHECK(throws_code(ErrorCode::BadDimensions, [] { MeasurementOperator(5, {3, 1}); }));
  CHECK(throws_code(ErrorCode::BadDimensions, [] { MeasurementOperator(5, {1, 1}); }));
  CHECK(throws_code(ErrorCode::BadDimensions, [] { MeasurementOperator(5, {1, 5}); }));
}

TEST_CASE("sampling is roughly uniform") {
  std::vector<int> hits(20, 0);
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const auto A = sample_operator(20, 5, seed);
    for (Index i : A.indices()) ++hits[static_cast<std::size_t>(i)];
  }
  // expected 1000 per position, binomial sd ~ 27
  for (int h : hits) CHECK(std::abs(h - 1000) < 150);
}

TEST_CASE("apply matches the explicit zero-one matrix") {
  std::mt19937_64 rng(6);
  const auto A = sample_operator(33, 16, 2);
  Matrix explicit_A = Matrix::Zero(16, 33);
  for (Index i = 0; i < 16; ++i) explicit_A(i, A.indices()[static_cast<std::size_t>(i)]) = 1.0;
  const Vector x = oracle::random_vector(33, rng);
  CHECK(A.apply(x) == explicit_A * x);
  const Vector y = oracle::random_vector(16, rng);
  CHECK(A.adjoint_apply(y) == explicit_A.transpose() * y);
  CHECK(A.dense() == explicit_A);
  CHECK(std::abs(A.apply(x).dot(y) - x.dot(A.adjoint_apply(y))) < 1e-14);
  CHECK(A.apply(Vector::Ones(33)) == Vector::Ones(16));
  CHECK(sample_operator(33, 5, 1).apply(Vector::Ones(33)) == Vector::Ones(5));
  CHECK(throws_code(ErrorCode::DimensionMismatch, [&] { A.apply(Vector::Ones(32)); }));
  CHECK(throws_code(ErrorCode::DimensionMismatch, [&] { A.adjoint_apply(Vector::Ones(15)); }));
}

TEST_CASE("A^T A is an idempotent 0/1 diagonal mask") {
  const auto A = sample_operator(30, 12, 8);
  Matrix mask(30, 30);
  for (Index j = 0; j < 30; ++j) mask.col(j) = A.adjoint_apply(A.apply(Vector::Unit(30, j)));
  CHECK(mask.isDiagonal());
  CHECK(mask.diagonal().sum() == 12.0);
  CHECK(mask * mask == mask);
  const std::set<Index> sampled(A.indices().begin(), A.indices().end());
  for (Index j = 0; j < 30; ++j) CHECK(mask(j, j) == (sampled.count(j) ? 1.0 : 0.0));
  Eigen::JacobiSVD<Matrix> svd(A.dense());
  CHECK(std::abs(svd.singularValues()(0) - 1.0) < 1e-15);
}

TEST_CASE("noise model") {
  std::mt19937_64 rng(1);
  const Vector y = oracle::random_vector(40, rng);
  const auto clean = corrupt(y, {0.0, 3});
  CHECK(clean.y == y);
  CHECK(clean.eta == 0.0);
  CHECK(clean.noise_norm == 0.0);

  const auto a = corrupt(y, {0.001, 3});
  const auto b = corrupt(y, {0.001, 3});
  CHECK(a.y == b.y);
  CHECK(a.y != corrupt(y, {0.001, 4}).y);
  CHECK(std::abs(a.eta - 0.001 * std::sqrt(40.0)) < 1e-15);
  CHECK(std::abs(a.noise_norm - (a.y - y).norm()) < 1e-15);
  CHECK(a.radius(EtaRule::Expected) == a.eta);
  CHECK(a.radius(EtaRule::Exact) == a.noise_norm);

  const Vector z = Vector::Zero(1000);
  Real mean = 0;
  for (std::uint64_t s = 0; s < 100; ++s) mean += corrupt(z, {0.001, s}).noise_norm;
  mean /= 100;
  CHECK(std::abs(mean - 0.001 * std::sqrt(1000.0)) < 0.1 * 0.001 * std::sqrt(1000.0));
  CHECK(throws_code(ErrorCode::InvalidArgument, [&] { corrupt(y, {-1.0, 1}); }));
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(7, {16, 3, 1}) == derive_seed(7, {16, 3, 1}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t K = 1; K <= 40; ++K) {
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
      for (std::uint64_t stream : {1, 2}) seen.insert(derive_seed(7, {K, rep, stream}));
    }
  }
  CHECK(seen.size() == 800);
  CHECK(derive_seed(7, {1, 2}) != derive_seed(8, {1, 2}));
}
