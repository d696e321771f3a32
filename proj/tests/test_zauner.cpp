#include <cstdio>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sdgf/zauner.hpp"

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

// tau^e by repeated multiplication, e unreduced and possibly negative.
Complex tau_power_by_multiplication(std::int64_t L, std::int64_t e) {
  const Complex tau = -std::polar(1.0, kPi / static_cast<Real>(L));
  const Complex step = e >= 0 ? tau : std::conj(tau);
  Complex out(1.0, 0.0);
  for (std::int64_t k = 0; k < std::abs(e); ++k) out *= step;
  return out;
}

Real unitarity_defect(const CMatrix& U) {
  return (U.adjoint() * U - CMatrix::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
}

SymplecticMatrix random_symplectic(std::int64_t L, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> pick(0, L - 1);
  std::int64_t beta = 0;
  do beta = pick(rng);
  while (std::gcd(beta, L) != 1);
  const std::int64_t alpha = pick(rng), delta = pick(rng);
  const Residue gamma = (Residue(alpha, L) * Residue(delta, L) - Residue(1, L)) *
                        mod_inverse(Residue(beta, L));
  return SymplecticMatrix::make(alpha, beta, gamma.value(), delta, L);
}

}  // namespace

TEST_CASE("Zauner matrix") {
  const auto Z = zauner_matrix(33);
  CHECK(Z.alpha.value() == 0);
  CHECK(Z.beta.value() == 32);
  CHECK(Z.gamma.value() == 1);
  CHECK(Z.delta.value() == 32);
  CHECK(Z.determinant().value() == 1);
  const auto Z3 = zauner_matrix(3);
  CHECK(Z3.beta.value() == 2);
  CHECK(Z3.delta.value() == 2);
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { zauner_matrix(2); }));
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { SymplecticMatrix::make(1, 1, 1, 1, 15); }));
}

TEST_CASE("metaplectic entries have modulus 1/sqrt(L) and U is unitary") {
  for (std::int64_t L : {3, 15, 33}) {
    const auto U = metaplectic(zauner_matrix(L));
    for (Index i = 0; i < U.entries.size(); ++i) {
      CHECK(std::abs(std::abs(U.entries.data()[i]) - 1.0 / std::sqrt(static_cast<Real>(L))) < 1e-14);
    }
    CHECK(unitarity_defect(U.entries) <= 1e-10);
  }
  CHECK(std::abs(metaplectic(zauner_matrix(3)).entries(0, 0) - 1.0 / std::sqrt(3.0)) < 1e-15);
  CHECK(throws_code(ErrorCode::NotInvertible,
                    [] { MetaplecticAction(SymplecticMatrix::make(1, 3, 0, 1, 15)); }));
}

TEST_CASE("random symplectic matrices give unitaries") {
  std::mt19937_64 rng(17);
  for (std::int64_t L : {3, 5, 9, 15, 21, 33, 45, 63, 99}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto G = random_symplectic(L, rng);
      CHECK(G.determinant().value() == 1);
      const auto U = metaplectic(G, 0.7);
      CHECK(unitarity_defect(U.entries) <= 1e-10);
    }
  }
}

TEST_CASE("cube of the Zauner unitary is scalar") {
  for (std::int64_t L : {3, 9, 15, 33, 45}) {
    const CMatrix U = metaplectic(zauner_matrix(L)).entries;
    const CMatrix U3 = U * U * U;
    const Complex c = U3(0, 0);
    CHECK(std::abs(std::abs(c) - 1.0) < 1e-10);
    CHECK((U3 - c * CMatrix::Identity(L, L)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("reduced exponents agree with unreduced powers") {
  const std::int64_t L = 15;
  const auto G = zauner_matrix(L);
  const MetaplecticAction action(G);
  const std::int64_t beta_inv = mod_inverse(G.beta).value();
  for (std::int64_t u = 0; u < L; ++u) {
    for (std::int64_t v = 0; v < L; ++v) {
      // plain integers, no modular reduction anywhere
      const std::int64_t e = beta_inv * (G.alpha.value() * v * v - 2 * u * v + G.delta.value() * u * u);
      const Complex want = tau_power_by_multiplication(L, e) / std::sqrt(static_cast<Real>(L));
      CHECK(std::abs(action.entry(u, v) - want) < 1e-11);
      CHECK(action.exponent(u, v) >= 0);
      CHECK(action.exponent(u, v) < 2 * L);
    }
  }
}

TEST_CASE("row, factored and dense actions agree") {
  std::mt19937_64 rng(4);
  for (std::int64_t L : {3, 15, 33, 45, 99}) {
    const MetaplecticAction action(zauner_matrix(L), 0.3);
    const CMatrix U = action.dense();
    for (int trial = 0; trial < 5; ++trial) {
      const CVector x = oracle::random_cvector(L, rng);
      const CVector ref = U * x;
      CHECK((action.apply_rows(x) - ref).cwiseAbs().maxCoeff() < 1e-11);
      CHECK((action.apply_factored(x) - ref).cwiseAbs().maxCoeff() < 1e-11);
    }
    const auto G = random_symplectic(L, rng);
    const MetaplecticAction other(G);
    const CVector x = oracle::random_cvector(L, rng);
    CHECK((other.apply_factored(x) - other.dense() * x).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("star window is a certified unit eigenvector") {
  for (std::int64_t L : {3, 15, 33, 45}) {
    const auto s = star_window(L);
    const CMatrix U = metaplectic(zauner_matrix(L)).entries;
    const CVector& g = s.vector.samples;
    CHECK(s.vector.kind == WindowKind::Star);
    CHECK(std::abs(g.norm() - 1.0) < 1e-12);
    CHECK(s.residual <= 1e-8);
    CHECK((U * g - s.eigenvalue * g).norm() <= 1e-8);
    const Complex c = (U * U * U)(0, 0);
    CHECK(std::abs(std::pow(s.eigenvalue, 3) - c) < 1e-8);
    CHECK(std::abs(std::abs(s.eigenvalue) - 1.0) < 1e-10);
  }
  CHECK(throws_code(ErrorCode::NotAdmissible, [] { star_window(35); }));
  CHECK(throws_code(ErrorCode::NotAdmissible, [] { star_window(12); }));
}

TEST_CASE("star window is deterministic and seed dependent") {
  const auto a = star_window(33, {.seed = 5});
  const auto b = star_window(33, {.seed = 5});
  CHECK(a.vector.samples == b.vector.samples);
  const auto c = star_window(33, {.seed = 6});
  CHECK(c.residual <= 1e-8);
  const auto t = star_window(33, {.theta = 1.0});
  CHECK(t.residual <= 1e-8);
}

TEST_CASE("matrix-free star window") {
  const auto s = star_window(2001, {.dense_limit = 100});
  CHECK(s.residual <= 1e-8);
  const MetaplecticAction action(zauner_matrix(2001));
  CHECK((action.apply_rows(s.vector.samples) - s.eigenvalue * s.vector.samples).norm() <= 1e-8);
}

TEST_CASE("window CSV round trip is exact") {
  const auto s = star_window(15);
  const std::string path = "zauner_roundtrip.csv";
  save_window(path, s.vector);
  const auto back = load_window(path, WindowKind::Star);
  CHECK(back.samples == s.vector.samples);
  CHECK(back.kind == WindowKind::Star);
  std::remove(path.c_str());
}
