#include "ddestab/model.hpp"

#include <cmath>

#include "ddestab/errors.hpp"
#include "ddestab/kernels.hpp"
#include "detail/complex_ops.hpp"

namespace ddestab {

void ModelParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(tau_alpha) ||
      !std::isfinite(m) || !std::isfinite(a))
    throw DomainError("model parameters must be finite");
  if (tau_alpha < 0.0) throw DomainError("tau_alpha must be >= 0");
  if (!(m > 0.0)) throw DomainError("gamma shape m must be > 0");
  if (!(a > 0.0)) throw DomainError("gamma rate a must be > 0");
}

ModelParams ModelParams::with_rate(double alpha, double tau_alpha, double beta, double m,
                                   double a) {
  ModelParams p{alpha, tau_alpha, beta, m, a};
  p.validate();
  return p;
}

ModelParams ModelParams::with_mean_delay(double alpha, double tau_alpha, double beta, double m,
                                         double tau_beta) {
  if (!(tau_beta > 0.0)) throw DomainError("tau_beta must be > 0");
  return with_rate(alpha, tau_alpha, beta, m, m / tau_beta);
}

ModelParams ModelParams::from_scaled(const ScaledModel& model) {
  if (!model.g_alpha.is_dirac() || !model.g_beta.is_gamma())
    throw DomainError("ModelParams needs a Dirac g_alpha and a gamma g_beta");
  const auto& g = model.g_beta.as_gamma();
  return with_rate(model.alpha, model.g_alpha.as_dirac().tau, model.beta, g.shape, g.rate);
}

bool ModelParams::integer_shape() const noexcept { return detail::is_integer_shape(m); }

}  // namespace ddestab
