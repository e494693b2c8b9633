#pragma once

namespace ddestab {

struct ScaledModel;

/// Parameters of x' = -x + alpha x(t - tau_alpha) + beta (g_beta * x)(t) with a
/// gamma kernel of shape m and rate a. The mean of the gamma delay is m / a.
struct ModelParams {
  double alpha = 0.0;
  double tau_alpha = 0.0;
  double beta = 0.0;
  double m = 1.0;
  double a = 1.0;

  /// Throws DomainError unless tau_alpha >= 0, m > 0, a > 0 and all fields finite.
  static ModelParams with_rate(double alpha, double tau_alpha, double beta, double m, double a);
  /// Sets a = m / tau_beta.
  static ModelParams with_mean_delay(double alpha, double tau_alpha, double beta, double m,
                                     double tau_beta);
  /// Requires a Dirac g_alpha and a gamma g_beta.
  static ModelParams from_scaled(const ScaledModel& model);

  double tau_beta() const noexcept { return m / a; }
  bool integer_shape() const noexcept;

  void validate() const;
};

}  // namespace ddestab
