#pragma once

#include <complex>
#include <cstddef>

#include "ddestab/model.hpp"

namespace ddestab {

using cplx = std::complex<double>;

/// D(lambda) = lambda + 1 - alpha e^(-lambda tau_alpha) - beta a^m / (lambda + a)^m.
/// Requires Re(lambda) > -a whenever beta != 0.
cplx eval_D(cplx lambda, const ModelParams& p);

/// D'(lambda) = 1 + alpha tau_alpha e^(-lambda tau_alpha) + beta m a^m (lambda + a)^-(m+1).
cplx eval_D_prime(cplx lambda, const ModelParams& p);

/// (lambda + 1 - alpha e^(-lambda tau_alpha)) (lambda tau_beta / m + 1)^m - beta,
/// the characteristic function cleared of its pole at -a.
cplx eval_D_factored(cplx lambda, const ModelParams& p);

struct RootCountOptions {
  /// Minimum |D| tolerated on the contour before ContourTooClose is raised.
  double min_abs = 1e-9;
  /// Maximum phase change of D between consecutive contour samples.
  double max_phase_step = 1.5707963267948966;
  /// Multiplies the initial sampling density (2 halves the initial step).
  double density = 1.0;
  std::size_t max_samples = 4'000'000;
};

struct RootCountReport {
  int count = 0;
  double sigma = 0.0;
  double radius = 0.0;
  std::size_t samples_used = 0;
  double min_abs_D = 0.0;
};

/// Radius beyond which D has no zeros with Re(lambda) > sigma:
/// 2 (1 + |alpha| + |beta|) max(1, e^(-sigma tau_alpha), (a / (a + sigma))^m).
double root_radius_bound(double sigma, const ModelParams& p);

/// Number of zeros of D (with multiplicity) in {Re lambda > sigma}, computed as
/// the winding number of D along the boundary of {Re lambda > sigma, |lambda| < R}.
RootCountReport count_roots_right_of(double sigma, const ModelParams& p,
                                     const RootCountOptions& options = {});

/// Newton iteration on D; throws NoConvergence unless |D| < 1e-10 on exit.
cplx refine_root(cplx lambda0, const ModelParams& p);

/// Characteristic root with the largest real part (upper member of a pair).
cplx rightmost_root(const ModelParams& p);

}  // namespace ddestab
