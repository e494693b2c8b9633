#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

// Plain complex arithmetic without the C99 Annex G NaN recovery that
// std::complex multiplication and division pull in.

namespace ddestab::detail {

using cplx = std::complex<double>;

inline cplx mul(cplx x, cplx y) noexcept {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

inline cplx div(cplx x, cplx y) noexcept {
  const double d = y.real() * y.real() + y.imag() * y.imag();
  return {(x.real() * y.real() + x.imag() * y.imag()) / d,
          (x.imag() * y.real() - x.real() * y.imag()) / d};
}

/// Largest shape treated by repeated squaring.
inline constexpr double kMaxIntegerShape = 1 << 20;

inline bool is_integer_shape(double m) noexcept {
  return m >= 1.0 && m <= kMaxIntegerShape && std::floor(m) == m;
}

/// z^n by binary exponentiation, n >= 0.
inline cplx ipow(cplx z, std::uint32_t n) noexcept {
  cplx result{1.0, 0.0};
  while (n != 0) {
    if (n & 1u) result = mul(result, z);
    n >>= 1;
    if (n != 0) z = mul(z, z);
  }
  return result;
}

/// z^m on the principal branch; exact repeated squaring for integer m.
inline cplx cpow_real(cplx z, double m) noexcept {
  if (is_integer_shape(m)) return ipow(z, static_cast<std::uint32_t>(m));
  return std::exp(m * std::log(z));
}

/// e^(-lambda tau).
inline cplx exp_neg(cplx lambda, double tau) noexcept {
  const double mag = std::exp(-lambda.real() * tau);
  const double ph = lambda.imag() * tau;
  return {mag * std::cos(ph), -mag * std::sin(ph)};
}

}  // namespace ddestab::detail
