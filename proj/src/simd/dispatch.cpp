#include <atomic>
#include <cstdlib>
#include <cstring>

#include "ddestab/errors.hpp"
#include "ddestab/simd/eval_batch.hpp"
#include "detail/chareq_eval.hpp"
#include "simd/raw.hpp"

namespace ddestab::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(DDESTAB_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  const char* env = std::getenv("DDESTAB_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  return detected_isa();
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

void check_sizes(std::span<const double> re, std::span<const double> im,
                 std::span<double> out_re, std::span<double> out_im) {
  if (im.size() != re.size() || out_re.size() != re.size() || out_im.size() != re.size())
    throw DomainError("eval_D_batch: input and output spans must have equal length");
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) noexcept { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa detected_isa() noexcept {
  static const Isa isa = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw DomainError("requested instruction set is not available");
  active().store(isa, std::memory_order_relaxed);
}

void eval_D_batch_scalar(const ModelParams& p, std::span<const double> re,
                         std::span<const double> im, std::span<double> out_re,
                         std::span<double> out_im) {
  check_sizes(re, im, out_re, out_im);
  const auto c = detail::coeffs_of(p);
  raw::eval_scalar(c, re.data(), im.data(), out_re.data(), out_im.data(), re.size());
}

void eval_D_batch_avx2(const ModelParams& p, std::span<const double> re,
                       std::span<const double> im, std::span<double> out_re,
                       std::span<double> out_im) {
  check_sizes(re, im, out_re, out_im);
#if defined(DDESTAB_HAVE_AVX2)
  if (!cpu_has_avx2()) throw DomainError("AVX2 is not supported by this CPU");
  const auto c = detail::coeffs_of(p);
  raw::eval_avx2(c, re.data(), im.data(), out_re.data(), out_im.data(), re.size());
#else
  throw DomainError("AVX2 kernels were not compiled in");
#endif
}

void eval_D_batch(const ModelParams& p, std::span<const double> re, std::span<const double> im,
                  std::span<double> out_re, std::span<double> out_im) {
  if (active_isa() == Isa::Avx2)
    eval_D_batch_avx2(p, re, im, out_re, out_im);
  else
    eval_D_batch_scalar(p, re, im, out_re, out_im);
}

}  // namespace ddestab::simd
