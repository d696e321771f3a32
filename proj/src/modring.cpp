#include "sdgf/modring.hpp"

#include <numeric>

#include "sdgf/types.hpp"

namespace sdgf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NoAdmissibleLength: return "NoAdmissibleLength";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EigensolveFailed: return "EigensolveFailed";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::FileTooShort: return "FileTooShort";
    case ErrorCode::IOFailure: return "IOFailure";
  }
  return "Unknown";
}

Residue::Residue(std::int64_t value, std::int64_t modulus) : modulus_(modulus) {
  if (modulus < 1) {
    throw Error(ErrorCode::InvalidArgument, "modulus must be positive");
  }
  value_ = mod_floor(value, modulus);
}

namespace {

void require_same_modulus(const Residue& x, const Residue& y) {
  if (x.modulus() != y.modulus()) {
    throw Error(ErrorCode::InvalidArgument, "residues with different moduli");
  }
}

}  // namespace

Residue operator+(const Residue& x, const Residue& y) {
  require_same_modulus(x, y);
  return {x.value() + y.value(), x.modulus()};
}

Residue operator-(const Residue& x, const Residue& y) {
  require_same_modulus(x, y);
  return {x.value() - y.value(), x.modulus()};
}

Residue operator*(const Residue& x, const Residue& y) {
  require_same_modulus(x, y);
  // value < modulus <= 2^31 keeps the product in range for every L we handle
  return {static_cast<std::int64_t>(static_cast<__int128>(x.value()) * y.value() % x.modulus()),
          x.modulus()};
}

Residue mod_inverse(const Residue& x) {
  const std::int64_t m = x.modulus();
  std::int64_t r0 = m, r1 = x.value();
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  if (r0 != 1) {
    throw Error(ErrorCode::NotInvertible, std::to_string(x.value()) + " has no inverse mod " +
                                              std::to_string(m));
  }
  return {s0, m};
}

bool Factorization::square_free() const {
  for (const auto& pp : prime_powers) {
    if (pp.exponent > 1) return false;
  }
  return true;
}

std::int64_t Factorization::product() const {
  std::int64_t p = 1;
  for (const auto& pp : prime_powers) {
    for (int e = 0; e < pp.exponent; ++e) p *= pp.prime;
  }
  return p;
}

std::string Factorization::to_string() const {
  std::string out;
  for (const auto& pp : prime_powers) {
    if (!out.empty()) out += " * ";
    out += std::to_string(pp.prime);
    if (pp.exponent > 1) out += "^" + std::to_string(pp.exponent);
  }
  return out;
}

Factorization factorize(std::int64_t n) {
  if (n < 2) {
    throw Error(ErrorCode::InvalidArgument, "factorize requires n >= 2, got " + std::to_string(n));
  }
  Factorization f;
  f.n = n;
  std::int64_t rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e > 0) f.prime_powers.push_back({p, e});
  }
  if (rest > 1) f.prime_powers.push_back({rest, 1});
  return f;
}

Admissibility is_admissible_length(std::int64_t n, AdmissibilityMode mode) {
  Admissibility out;
  if (n < 2) return out;
  out.factors = factorize(n);
  const bool odd = n % 2 != 0;
  const bool by_three = n % 3 == 0;
  out.admissible = odd && by_three;
  if (mode == AdmissibilityMode::Strict) {
    out.admissible = out.admissible && out.factors.square_free();
  }
  return out;
}

std::int64_t largest_admissible_at_most(std::int64_t n, AdmissibilityMode mode) {
  for (std::int64_t candidate = n; candidate >= 3; --candidate) {
    // cheap filter before factoring
    if (candidate % 2 == 0 || candidate % 3 != 0) continue;
    if (is_admissible_length(candidate, mode).admissible) return candidate;
  }
  throw Error(ErrorCode::NoAdmissibleLength, "no admissible length <= " + std::to_string(n));
}

}  // namespace sdgf
