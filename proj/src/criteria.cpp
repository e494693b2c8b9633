#include "ddestab/criteria.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ddestab/errors.hpp"

namespace ddestab {

Verdict::Verdict(VerdictKind kind, Reason reason) : kind_(kind), reason_(reason) {
  if (reason == Reason::SumTest && kind != VerdictKind::Unstable)
    throw std::invalid_argument("SumTest verdicts are always Unstable");
  if ((reason == Reason::AbsTest || reason == Reason::DiscreteAlphaTest) &&
      kind != VerdictKind::Stable)
    throw std::invalid_argument("AbsTest and DiscreteAlphaTest verdicts are always Stable");
}

std::string_view to_string(VerdictKind kind) noexcept {
  switch (kind) {
    case VerdictKind::Stable: return "Stable";
    case VerdictKind::Unstable: return "Unstable";
    case VerdictKind::Boundary: return "Boundary";
    case VerdictKind::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

std::string_view to_string(Reason reason) noexcept {
  switch (reason) {
    case Reason::SumTest: return "SumTest";
    case Reason::AbsTest: return "AbsTest";
    case Reason::DiscreteAlphaTest: return "DiscreteAlphaTest";
    case Reason::ZeroRootLine: return "ZeroRootLine";
    case Reason::HopfCurve: return "HopfCurve";
    case Reason::RootCount: return "RootCount";
    case Reason::None: return "None";
  }
  return "None";
}

VerdictKind verdict_kind_from_string(std::string_view s) {
  for (auto k : {VerdictKind::Stable, VerdictKind::Unstable, VerdictKind::Boundary,
                 VerdictKind::Undetermined})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown verdict kind: " + std::string(s));
}

Reason reason_from_string(std::string_view s) {
  for (auto r : {Reason::SumTest, Reason::AbsTest, Reason::DiscreteAlphaTest, Reason::ZeroRootLine,
                 Reason::HopfCurve, Reason::RootCount, Reason::None})
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown verdict reason: " + std::string(s));
}

double u_star_equation(double u) {
  const double c = std::acos(-1.0 / u);
  return 2.0 * std::numbers::pi - c + u * std::sin(2.0 * std::numbers::pi - c);
}

namespace {

double solve_u_star() {
  double lo = 4.0;
  double hi = 5.0;
  double flo = u_star_equation(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = u_star_equation(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double u = 0.5 * (lo + hi);
  // d/du of the equation is -sqrt(1 - 1/u^2).
  for (int i = 0; i < 8 && std::abs(u_star_equation(u)) >= 1e-12; ++i)
    u += u_star_equation(u) / std::sqrt(1.0 - 1.0 / (u * u));
  return u;
}

}  // namespace

double u_star() {
  static const double value = solve_u_star();
  return value;
}

bool s_positive(double xi, double tau_alpha) {
  if (!(tau_alpha > 0.0)) throw DomainError("s_positive requires tau_alpha > 0");
  const double u = xi * tau_alpha;
  return u >= -1.0 && u <= u_star();
}

Verdict quick_verdict(const ModelParams& p) {
  if (p.alpha + p.beta > 1.0) return {VerdictKind::Unstable, Reason::SumTest};
  if (std::abs(p.alpha) + std::abs(p.beta) < 1.0) return {VerdictKind::Stable, Reason::AbsTest};
  if (p.alpha < -1.0 && p.tau_alpha <= -1.0 / (2.0 * p.alpha) &&
      std::abs(p.beta) < -p.alpha - 1.0)
    return {VerdictKind::Stable, Reason::DiscreteAlphaTest};
  return Verdict::undetermined();
}

double tau_crit(double alpha) {
  if (!(alpha < -1.0)) throw DomainError("tau_crit requires alpha < -1");
  return std::acos(1.0 / alpha) / std::sqrt(alpha * alpha - 1.0);
}

}  // namespace ddestab
