#pragma once

#include <cmath>
#include <complex>

#include "ddestab/model.hpp"
#include "detail/complex_ops.hpp"
#include "simd/raw.hpp"

namespace ddestab::detail {

inline simd::raw::EvalCoeffs coeffs_of(const ModelParams& p) noexcept {
  const bool integer = is_integer_shape(p.m);
  return {p.alpha, p.tau_alpha, p.beta, p.a, p.m,
          integer ? static_cast<std::uint32_t>(p.m) : 0u, integer};
}

/// Reference evaluation of D at x + iy; the AVX2 kernel mirrors this sequence.
inline cplx eval_plain(const simd::raw::EvalCoeffs& c, double x, double y) noexcept {
  double re = x + 1.0;
  double im = y;
  if (c.alpha != 0.0) {
    const double mag = std::exp(-x * c.tau_alpha);
    const double ph = y * c.tau_alpha;
    re -= c.alpha * (mag * std::cos(ph));
    im += c.alpha * (mag * std::sin(ph));
  }
  if (c.beta != 0.0) {
    const double wr = x + c.a;
    const double wi = y;
    const double d = wr * wr + wi * wi;
    const cplx z{c.a * wr / d, -(c.a * wi) / d};
    const cplx zm = c.integer_m ? ipow(z, c.m_int) : std::exp(c.m * std::log(z));
    re -= c.beta * zm.real();
    im -= c.beta * zm.imag();
  }
  return {re, im};
}

}  // namespace ddestab::detail
