#pragma once

// Plain-data interface between the dispatcher and the per-ISA translation
// units. Kept free of standard-library templates so the AVX2 unit emits no
// inline code that the linker could share with baseline units.

#include <cstddef>
#include <cstdint>

namespace ddestab::simd::raw {

struct EvalCoeffs {
  double alpha;
  double tau_alpha;
  double beta;
  double a;
  double m;
  std::uint32_t m_int;  // valid when integer_m
  bool integer_m;
};

void eval_scalar(const EvalCoeffs& c, const double* re, const double* im, double* out_re,
                 double* out_im, std::size_t n);

void eval_avx2(const EvalCoeffs& c, const double* re, const double* im, double* out_re,
               double* out_im, std::size_t n);

}  // namespace ddestab::simd::raw
