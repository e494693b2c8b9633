#include "ddestab/kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ddestab/errors.hpp"
#include "detail/complex_ops.hpp"

namespace ddestab {

DelayKernel DelayKernel::dirac(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw DomainError("Dirac kernel requires a finite delay tau >= 0");
  return DelayKernel(DiracKernel{tau});
}

DelayKernel DelayKernel::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate))
    throw DomainError("gamma kernel requires shape m > 0 and rate a > 0");
  return DelayKernel(GammaKernel{shape, rate});
}

double DelayKernel::mean_delay() const noexcept {
  if (const auto* d = std::get_if<DiracKernel>(&kernel_)) return d->tau;
  const auto& g = std::get<GammaKernel>(kernel_);
  return g.shape / g.rate;
}

bool operator==(const DelayKernel& x, const DelayKernel& y) noexcept {
  if (x.is_dirac() != y.is_dirac()) return false;
  if (x.is_dirac()) return x.as_dirac().tau == y.as_dirac().tau;
  return x.as_gamma().shape == y.as_gamma().shape && x.as_gamma().rate == y.as_gamma().rate;
}

double gamma_density(double T, double m, double a) {
  if (!(m > 0.0) || !(a > 0.0)) throw DomainError("gamma_density requires m > 0 and a > 0");
  if (!(T >= 0.0)) throw DomainError("gamma_density requires T >= 0");
  if (T == 0.0) {
    if (m < 1.0) return std::numeric_limits<double>::infinity();
    return m == 1.0 ? a : 0.0;
  }
  if (std::isinf(T)) return 0.0;
  return std::exp(m * std::log(a) + (m - 1.0) * std::log(T) - a * T - std::lgamma(m));
}

std::complex<double> kernel_laplace(std::complex<double> lambda, const DelayKernel& kernel) {
  if (kernel.is_dirac()) return detail::exp_neg(lambda, kernel.as_dirac().tau);
  const auto& g = kernel.as_gamma();
  if (!(lambda.real() > -g.rate))
    throw DomainError("gamma kernel transform requires Re(lambda) > -a");
  const detail::cplx ratio = detail::div({g.rate, 0.0}, lambda + g.rate);
  return detail::cpow_real(ratio, g.shape);
}

ScaledModel normalize_model(double k, double alpha_raw, double beta_raw,
                            const std::pair<DelayKernel, DelayKernel>& kernels) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("normalize_model requires k > 0");
  auto rescale = [k](const DelayKernel& f) {
    if (f.is_dirac()) return DelayKernel::dirac(k * f.as_dirac().tau);
    return DelayKernel::gamma(f.as_gamma().shape, f.as_gamma().rate / k);
  };
  return ScaledModel{alpha_raw / k, beta_raw / k, rescale(kernels.first),
                     rescale(kernels.second)};
}

}  // namespace ddestab
