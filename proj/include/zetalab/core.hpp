#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zetalab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;
inline constexpr long double kTwoPiL = 2.0L * kPiL;

enum class ErrorKind {
  PoleAt1,
  BudgetExceeded,
  DomainError,
  SingularFactor,
  NotCoprime,
  NotGreater,
  PreconditionViolated,
  BadTruncation,
  TruncationTooSmall,
  UnknownFunctional,
  InadmissibleTarget,
  ShapeMismatch,
  InvalidArgument,
  ConfigError,
  IoError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PoleAt1: return "PoleAt1";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SingularFactor: return "SingularFactor";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::NotGreater: return "NotGreater";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::BadTruncation: return "BadTruncation";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::UnknownFunctional: return "UnknownFunctional";
    case ErrorKind::InadmissibleTarget: return "InadmissibleTarget";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception; callers
/// that care about the category switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

/// s = sigma + i t. Both parts must be finite.
struct ComplexPoint {
  double sigma = 0.0;
  double t = 0.0;

  ComplexPoint() = default;
  ComplexPoint(double sigma_, double t_) : sigma(sigma_), t(t_) {
    if (!std::isfinite(sigma) || !std::isfinite(t)) {
      fail(ErrorKind::InvalidArgument, "complex point must have finite components");
    }
  }
  explicit ComplexPoint(cplx s) : ComplexPoint(s.real(), s.imag()) {}

  cplx value() const { return {sigma, t}; }
};

struct AccuracyBudget {
  double abs_tol = 1e-12;
  std::int64_t max_terms = std::int64_t{1} << 24;

  void validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
      fail(ErrorKind::InvalidArgument, "abs_tol must be positive");
    }
    if (max_terms < 1) fail(ErrorKind::InvalidArgument, "max_terms must be >= 1");
  }
};

/// A computed value together with the error bound the algorithm can vouch for.
struct Evaluation {
  cplx value{};
  double abs_err_bound = 0.0;
};

// ---------------------------------------------------------------------------
// Phase helpers. Large imaginary parts make t*log(x) huge, so arguments are
// reduced modulo 2*pi in extended precision before calling cos/sin.

inline long double reduce_angle(long double theta) {
  return theta - kTwoPiL * std::nearbyint(theta / kTwoPiL);
}

/// exp(-i * theta) with theta reduced in extended precision.
inline cplx unit_phase_neg(long double theta) {
  const double r = static_cast<double>(reduce_angle(theta));
  return {std::cos(r), -std::sin(r)};
}

/// x^{-(sigma + i t)} for x > 0 given log x in extended precision.
inline cplx pow_neg(long double log_x, double sigma, long double t) {
  const double mag = std::exp(-sigma * static_cast<double>(log_x));
  return mag * unit_phase_neg(t * log_x);
}

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// (exp(z) - 1) / z, accurate near z = 0.
inline cplx exprel(cplx z) {
  if (std::abs(z) < 1e-3) {
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0))));
  }
  return (std::exp(z) - 1.0) / z;
}

}  // namespace zetalab
