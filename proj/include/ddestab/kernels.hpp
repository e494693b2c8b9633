#pragma once

#include <complex>
#include <utility>
#include <variant>

namespace ddestab {

struct DiracKernel {
  double tau = 0.0;
};

struct GammaKernel {
  double shape = 1.0;  // m
  double rate = 1.0;   // a
};

/// A delay density on [0, inf): either a point mass at tau or a gamma law
/// with shape m and rate a.
class DelayKernel {
 public:
  static DelayKernel dirac(double tau);
  static DelayKernel gamma(double shape, double rate);

  bool is_dirac() const noexcept { return std::holds_alternative<DiracKernel>(kernel_); }
  bool is_gamma() const noexcept { return std::holds_alternative<GammaKernel>(kernel_); }
  const DiracKernel& as_dirac() const { return std::get<DiracKernel>(kernel_); }
  const GammaKernel& as_gamma() const { return std::get<GammaKernel>(kernel_); }

  double mean_delay() const noexcept;

  friend bool operator==(const DelayKernel& x, const DelayKernel& y) noexcept;

 private:
  explicit DelayKernel(std::variant<DiracKernel, GammaKernel> k) : kernel_(k) {}
  std::variant<DiracKernel, GammaKernel> kernel_;
};

/// a^m T^(m-1) e^(-aT) / Gamma(m). Returns +inf at T = 0 when m < 1.
double gamma_density(double T, double m, double a);

/// Laplace transform of the kernel: e^(-lambda tau) for Dirac,
/// (a / (lambda + a))^m (principal branch) for gamma. Gamma kernels require
/// Re(lambda) > -a.
std::complex<double> kernel_laplace(std::complex<double> lambda, const DelayKernel& kernel);

/// The model after the time rescaling t -> k t.
struct ScaledModel {
  double alpha;
  double beta;
  DelayKernel g_alpha;
  DelayKernel g_beta;
};

/// Rescale  x' = -k x + alpha (f_alpha * x) + beta (f_beta * x)  to unit decay.
/// Kernels transform as g(T) = f(T/k)/k, so Dirac(tau) -> Dirac(k tau) and
/// Gamma(m, a) -> Gamma(m, a/k).
ScaledModel normalize_model(double k, double alpha_raw, double beta_raw,
                            const std::pair<DelayKernel, DelayKernel>& kernels);

}  // namespace ddestab
