#pragma once

#include <span>
#include <string_view>

#include "ddestab/model.hpp"

// Batched evaluation of the characteristic function on structure-of-arrays
// input. The scalar routine is the reference; the AVX2 routine must agree
// with it to rounding and is chosen at runtime when the CPU supports it.

namespace ddestab::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best instruction set compiled in and supported by this CPU.
Isa detected_isa() noexcept;
/// Isa used by eval_D_batch. Defaults to detected_isa() unless the
/// environment variable DDESTAB_SIMD=scalar is set.
Isa active_isa() noexcept;
/// Throws DomainError when the requested isa is not available.
void set_active_isa(Isa isa);
bool isa_available(Isa isa) noexcept;

/// out = D(re + i im) elementwise. No domain checks; callers keep Re > -a.
void eval_D_batch(const ModelParams& p, std::span<const double> re, std::span<const double> im,
                  std::span<double> out_re, std::span<double> out_im);

void eval_D_batch_scalar(const ModelParams& p, std::span<const double> re,
                         std::span<const double> im, std::span<double> out_re,
                         std::span<double> out_im);

/// Falls back to the scalar routine for non-integer shape or huge arguments.
void eval_D_batch_avx2(const ModelParams& p, std::span<const double> re,
                       std::span<const double> im, std::span<double> out_re,
                       std::span<double> out_im);

}  // namespace ddestab::simd
