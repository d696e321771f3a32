#ifndef SDGF_TYPES_HPP
#define SDGF_TYPES_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace sdgf {

using Real = double;
using Complex = std::complex<Real>;
using Index = Eigen::Index;

using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr Real kPi = 3.14159265358979323846264338327950288;

enum class ErrorCode {
  InvalidArgument,
  NotInvertible,
  NoAdmissibleLength,
  NotAdmissible,
  DimensionMismatch,
  TooLarge,
  EigensolveFailed,
  BadDimensions,
  Infeasible,
  UnsupportedFormat,
  FileTooShort,
  IOFailure,
};

std::string_view to_string(ErrorCode code);

// Every module reports failures through this one exception type; the code
// lets callers (and the CLI) distinguish the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sdgf

#endif  // SDGF_TYPES_HPP
