#ifndef SDGF_MODRING_HPP
#define SDGF_MODRING_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace sdgf {

// An element of Z_L.
class Residue {
 public:
  Residue(std::int64_t value, std::int64_t modulus);

  std::int64_t value() const noexcept { return value_; }
  std::int64_t modulus() const noexcept { return modulus_; }

  friend bool operator==(const Residue&, const Residue&) = default;

 private:
  std::int64_t value_;
  std::int64_t modulus_;
};

Residue operator+(const Residue& x, const Residue& y);
Residue operator-(const Residue& x, const Residue& y);
Residue operator*(const Residue& x, const Residue& y);

// Non-negative remainder of x modulo m (m > 0).
constexpr std::int64_t mod_floor(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

struct PrimePower {
  std::int64_t prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::int64_t n = 1;
  std::vector<PrimePower> prime_powers;  // primes strictly increasing

  bool square_free() const;
  std::int64_t product() const;
  // "3^2 * 5"
  std::string to_string() const;
};

enum class AdmissibilityMode {
  Strict,  // odd, divisible by 3 and square-free
  Relaxed, // odd and divisible by 3 (admits 45, 20349, ...)
};

struct Admissibility {
  bool admissible = false;
  Factorization factors;
};

// Throws NotInvertible when gcd(x, L) != 1.
Residue mod_inverse(const Residue& x);

// Trial division; throws InvalidArgument for n < 2.
Factorization factorize(std::int64_t n);

Admissibility is_admissible_length(std::int64_t n, AdmissibilityMode mode);

// Largest L <= n that is admissible; throws NoAdmissibleLength for n < 3.
std::int64_t largest_admissible_at_most(std::int64_t n, AdmissibilityMode mode);

}  // namespace sdgf

#endif  // SDGF_MODRING_HPP
