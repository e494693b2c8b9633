#pragma once

#include <string_view>

#include "ddestab/model.hpp"

namespace ddestab {

enum class VerdictKind { Stable, Unstable, Boundary, Undetermined };

/// Which argument settled a verdict.
enum class Reason { SumTest, AbsTest, DiscreteAlphaTest, ZeroRootLine, HopfCurve, RootCount, None };

class Verdict {
 public:
  /// Throws std::invalid_argument for pairings the closed-form tests cannot produce
  /// (SumTest must be Unstable; AbsTest and DiscreteAlphaTest must be Stable).
  Verdict(VerdictKind kind, Reason reason);

  static Verdict undetermined() { return {VerdictKind::Undetermined, Reason::None}; }

  VerdictKind kind() const noexcept { return kind_; }
  Reason reason() const noexcept { return reason_; }

  friend bool operator==(const Verdict&, const Verdict&) = default;

 private:
  VerdictKind kind_;
  Reason reason_;
};

std::string_view to_string(VerdictKind kind) noexcept;
std::string_view to_string(Reason reason) noexcept;
VerdictKind verdict_kind_from_string(std::string_view s);
Reason reason_from_string(std::string_view s);

/// Unique root of 2 pi - acos(-1/u) + u sin(2 pi - acos(-1/u)) on (1, inf).
double u_star();
/// The function whose positive zero is u_star().
double u_star_equation(double u);

/// True iff omega + xi sin(omega tau_alpha) >= 0 for all omega > 0, i.e.
/// -1/tau_alpha <= xi <= u*/tau_alpha.
bool s_positive(double xi, double tau_alpha);

/// Distribution-independent tests, applied in order: alpha + beta > 1 (unstable),
/// |alpha| + |beta| < 1 (stable), then the discrete-alpha test
/// alpha < -1, tau_alpha <= -1/(2 alpha), |beta| < -alpha - 1 (stable).
Verdict quick_verdict(const ModelParams& p);

/// acos(1/alpha) / sqrt(alpha^2 - 1), alpha < -1.
double tau_crit(double alpha);

}  // namespace ddestab
