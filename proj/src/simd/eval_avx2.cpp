// AVX2 + FMA variant of the batched characteristic-function evaluation.
// Compiled with -mavx2 -mfma; reached only through the runtime dispatcher.

#include <immintrin.h>

#include "simd/raw.hpp"

namespace ddestab::simd::raw {
namespace {

inline __m256d set1(double x) { return _mm256_set1_pd(x); }

constexpr double kRoundMagic = 6755399441055744.0;  // 1.5 * 2^52

// Integral-valued doubles with |n| < 2^51 to int64 lanes.
inline __m256i to_int64(__m256d n) {
  const __m256d t = _mm256_add_pd(n, set1(kRoundMagic));
  return _mm256_sub_epi64(_mm256_castpd_si256(t), _mm256_castpd_si256(set1(kRoundMagic)));
}

inline __m256d round_nearest(__m256d x) {
  return _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
}

// e^x; lanes below -708 flush to zero, lanes above 709 saturate to +inf.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = set1(-708.0);
  const __m256d hi = set1(709.0);
  const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  const __m256d over = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d n = round_nearest(_mm256_mul_pd(xc, set1(1.4426950408889634)));
  __m256d r = _mm256_fnmadd_pd(n, set1(6.93147180369123816490e-01), xc);
  r = _mm256_fnmadd_pd(n, set1(1.90821492927058770002e-10), r);

  // Taylor series through r^13; |r| <= ln2/2 keeps the remainder below 1e-17.
  __m256d p = set1(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, set1(0.5));
  p = _mm256_fmadd_pd(p, r, set1(1.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0));

  const __m256i biased = _mm256_add_epi64(to_int64(n), _mm256_set1_epi64x(1023));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
  __m256d res = _mm256_mul_pd(p, scale);
  res = _mm256_blendv_pd(res, _mm256_setzero_pd(), under);
  res = _mm256_blendv_pd(res, set1(__builtin_inf()), over);
  return res;
}

// Largest |argument| for which the three-part pi/2 reduction stays exact.
constexpr double kTrigLimit = 1.6e6;

// sin and cos of y after reduction by multiples of pi/2 (fdlibm kernels).
inline void sincos_pd(__m256d y, __m256d& s_out, __m256d& c_out) {
  const __m256d k = round_nearest(_mm256_mul_pd(y, set1(6.36619772367581382433e-01)));
  __m256d r = _mm256_fnmadd_pd(k, set1(1.57079632673412561417e+00), y);
  r = _mm256_fnmadd_pd(k, set1(6.07710050630396597660e-11), r);
  r = _mm256_fnmadd_pd(k, set1(2.02226624871116645580e-21), r);
  r = _mm256_fnmadd_pd(k, set1(8.47842766036889956997e-32), r);
  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = set1(1.58969099521155010221e-10);
  ps = _mm256_fmadd_pd(ps, z, set1(-2.50507602534068634195e-08));
  ps = _mm256_fmadd_pd(ps, z, set1(2.75573137070700676789e-06));
  ps = _mm256_fmadd_pd(ps, z, set1(-1.98412698298579493134e-04));
  ps = _mm256_fmadd_pd(ps, z, set1(8.33333333332248946124e-03));
  ps = _mm256_fmadd_pd(ps, z, set1(-1.66666666666666324348e-01));
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

  __m256d pc = set1(-1.13596475577881948265e-11);
  pc = _mm256_fmadd_pd(pc, z, set1(2.08757232129817482790e-09));
  pc = _mm256_fmadd_pd(pc, z, set1(-2.75573143513906633035e-07));
  pc = _mm256_fmadd_pd(pc, z, set1(2.48015872894767294178e-05));
  pc = _mm256_fmadd_pd(pc, z, set1(-1.38888888888741095749e-03));
  pc = _mm256_fmadd_pd(pc, z, set1(4.16666666666666019037e-02));
  const __m256d hz = _mm256_mul_pd(set1(0.5), z);
  const __m256d w = _mm256_sub_pd(set1(1.0), hz);
  const __m256d tail = _mm256_sub_pd(_mm256_sub_pd(set1(1.0), w), hz);
  const __m256d cos_r = _mm256_add_pd(w, _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc, tail));

  const __m256i q = to_int64(k);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d s_sign = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(q, two), 62));
  const __m256d c_sign =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), 62));
  s_out = _mm256_xor_pd(_mm256_blendv_pd(sin_r, cos_r, swap), s_sign);
  c_out = _mm256_xor_pd(_mm256_blendv_pd(cos_r, sin_r, swap), c_sign);
}

inline void cmul(__m256d xr, __m256d xi, __m256d yr, __m256d yi, __m256d& zr, __m256d& zi) {
  const __m256d re = _mm256_fmsub_pd(xr, yr, _mm256_mul_pd(xi, yi));
  const __m256d im = _mm256_fmadd_pd(xr, yi, _mm256_mul_pd(xi, yr));
  zr = re;
  zi = im;
}

}  // namespace

void eval_avx2(const EvalCoeffs& c, const double* re, const double* im, double* out_re,
               double* out_im, std::size_t n) {
  if (!c.integer_m) {
    eval_scalar(c, re, im, out_re, out_im, n);
    return;
  }
  const __m256d one = set1(1.0);
  const __m256d alpha = set1(c.alpha);
  const __m256d tau = set1(c.tau_alpha);
  const __m256d beta = set1(c.beta);
  const __m256d a = set1(c.a);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d trig_limit = set1(kTrigLimit);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(re + i);
    const __m256d y = _mm256_loadu_pd(im + i);
    __m256d dr = _mm256_add_pd(x, one);
    __m256d di = y;

    if (c.alpha != 0.0) {
      const __m256d ph = _mm256_mul_pd(y, tau);
      const __m256d too_big = _mm256_cmp_pd(_mm256_and_pd(ph, abs_mask), trig_limit, _CMP_GT_OQ);
      if (_mm256_movemask_pd(too_big) != 0) {
        eval_scalar(c, re + i, im + i, out_re + i, out_im + i, 4);
        continue;
      }
      const __m256d mag = exp_pd(_mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), x), tau));
      __m256d s, co;
      sincos_pd(ph, s, co);
      dr = _mm256_fnmadd_pd(alpha, _mm256_mul_pd(mag, co), dr);
      di = _mm256_fmadd_pd(alpha, _mm256_mul_pd(mag, s), di);
    }

    if (c.beta != 0.0) {
      const __m256d wr = _mm256_add_pd(x, a);
      const __m256d d = _mm256_fmadd_pd(wr, wr, _mm256_mul_pd(y, y));
      __m256d zr = _mm256_div_pd(_mm256_mul_pd(a, wr), d);
      __m256d zi = _mm256_div_pd(_mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(a, y)), d);
      __m256d pr = one;
      __m256d pi = _mm256_setzero_pd();
      for (std::uint32_t e = c.m_int; e != 0;) {
        if (e & 1u) cmul(pr, pi, zr, zi, pr, pi);
        e >>= 1;
        if (e != 0) cmul(zr, zi, zr, zi, zr, zi);
      }
      dr = _mm256_fnmadd_pd(beta, pr, dr);
      di = _mm256_fnmadd_pd(beta, pi, di);
    }

    _mm256_storeu_pd(out_re + i, dr);
    _mm256_storeu_pd(out_im + i, di);
  }
  if (i < n) eval_scalar(c, re + i, im + i, out_re + i, out_im + i, n - i);
}

}  // namespace ddestab::simd::raw
