#include "detail/chareq_eval.hpp"
#include "simd/raw.hpp"

namespace ddestab::simd::raw {

void eval_scalar(const EvalCoeffs& c, const double* re, const double* im, double* out_re,
                 double* out_im, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = detail::eval_plain(c, re[i], im[i]);
    out_re[i] = d.real();
    out_im[i] = d.imag();
  }
}

}  // namespace ddestab::simd::raw
