#pragma once

#include <optional>
#include <vector>

#include "ddestab/model.hpp"

namespace ddestab {

enum class BranchSign { Plus, Minus };

/// One parametric family of pure-imaginary-root curves: the sign of
/// beta (equivalently of cos(m theta) when |alpha| < 1) and the index l.
struct BranchId {
  BranchSign sign = BranchSign::Plus;
  int l = 0;

  friend bool operator==(const BranchId&, const BranchId&) = default;
};

inline int sign_value(BranchSign s) noexcept { return s == BranchSign::Plus ? 1 : -1; }
char sign_char(BranchSign s) noexcept;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Point on a Hopf locus, where D(i omega) = 0 at (beta, tau_beta).
struct CurveSample {
  double omega = 0.0;
  double theta = 0.0;
  double beta = 0.0;
  double tau_beta = 0.0;
  double dbeta_domega = 0.0;
  int crossing = 0;
};

struct BetaTau {
  double beta = 0.0;
  double tau_beta = 0.0;
};

/// The discrete-delay part shared by every curve.
struct CurveBase {
  double alpha = 0.0;
  double tau_alpha = 0.0;
  double m = 1.0;
};

/// h(omega) = -(omega + alpha sin(omega tau_alpha)) / (1 - alpha cos(omega tau_alpha)).
/// Throws Singular when the denominator is below 1e-14 in magnitude.
double h_omega(double omega, double alpha, double tau_alpha);

/// Branch indices l giving tau_beta > 0 curves, for integer m >= 1 and
/// h(omega) <= 0. Throws DomainError otherwise.
std::vector<int> admissible_branches(double m, BranchSign sign);

/// Every (sign, l) whose theta window can meet (0, pi/2) for some h, with no
/// assumption on the sign of h. Used when tracing for arbitrary alpha.
std::vector<BranchId> candidate_branches(double m);

/// theta, beta and tau_beta of a branch before the theta-window filter.
struct CurveFormula {
  double theta;
  double beta;
  double tau_beta;
};
CurveFormula curve_formula(double omega, BranchId b, double alpha, double tau_alpha, double m);

/// Sample on branch b at omega, or nothing when theta leaves (0, pi/2).
std::optional<CurveSample> curve_point(double omega, BranchId b, double alpha, double tau_alpha,
                                       double m);

/// Analytic d beta / d omega along a curve: omega beta (AC + BD) / (A^2 + B^2).
double dbeta_domega(double omega, double alpha, double tau_alpha, double m, double beta,
                    double tau_beta);

/// Re(d lambda / d tau_beta) at lambda = i omega.
double re_dlambda_dtau(double omega, double alpha, double tau_alpha, double m, double tau_beta);

/// Sign of Re(d lambda / d tau_beta) at the sample, derived from d beta / d omega.
/// Returns 0 when |d beta / d omega| < tol.
int crossing_direction(const CurveSample& s, BranchId b, const ModelParams& p,
                       double tol = 1e-9);

/// Sign of d lambda / d beta = 1 / (1 + alpha tau_alpha + tau_beta (1 - alpha)) on the
/// zero-root line. Empty when the denominator vanishes.
std::optional<int> zero_line_crossing_sign(double alpha, double tau_alpha, double tau_beta);

/// Closed form of the m = 1 curve: tau_beta = h / omega, beta = X + Y^2 / X.
BetaTau m1_curve_point(double omega, double alpha, double tau_alpha);

/// The m -> infinity limit of branch b (two discrete delays); empty unless tau_beta > 0.
std::optional<BetaTau> discrete_limit_point(double omega, BranchId b, double alpha,
                                            double tau_alpha);

/// Zeros of 1 - alpha cos(omega tau_alpha) inside the interval, ascending.
std::vector<double> singular_frequencies(double alpha, double tau_alpha, Interval window);

struct TraceOptions {
  /// Chord deviation allowed between neighbouring samples in the (beta, tau_beta) plane.
  double tol = 1e-3;
  /// Samples with |beta| or tau_beta beyond these limits are dropped.
  double beta_limit = 1e3;
  double tau_limit = 1e3;
  /// Hopf residual every emitted sample must satisfy.
  double residual_tol = 1e-8;
  int initial_samples = 200;
  int max_depth = 16;
  /// Threshold under which the crossing direction is reported as 0.
  double tangent_tol = 1e-9;
};

/// Adaptive sampling of a branch over the omega window, split into
/// continuous pieces at singular frequencies and theta-window exits.
std::vector<std::vector<CurveSample>> trace_curve_segments(BranchId b, const CurveBase& base,
                                                           Interval omega_window,
                                                           const TraceOptions& options = {});

/// trace_curve_segments flattened in omega order.
std::vector<CurveSample> trace_curve(BranchId b, const CurveBase& base, Interval omega_window,
                                     const TraceOptions& options = {});

/// Hopf residual |D(i omega)| at the parameters the sample encodes.
double hopf_residual(const CurveSample& s, const CurveBase& base);

}  // namespace ddestab
