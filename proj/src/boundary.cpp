#include "ddestab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ddestab/chareq.hpp"
#include "ddestab/errors.hpp"

namespace ddestab {
namespace {

constexpr double kPi = std::numbers::pi;

struct Trig {
  double X;  // 1 - alpha cos(omega tau_alpha)
  double Y;  // omega + alpha sin(omega tau_alpha)
};

Trig trig_terms(double omega, double alpha, double tau_alpha) {
  const double ph = omega * tau_alpha;
  return {1.0 - alpha * std::cos(ph), omega + alpha * std::sin(ph)};
}

/// 2 l pi when sign * X >= 0, (2 l + 1) pi otherwise.
double branch_offset(BranchId b, double X) {
  const bool even = sign_value(b.sign) * X >= 0.0;
  return (2.0 * b.l + (even ? 0.0 : 1.0)) * kPi;
}

bool integral(double m) { return m >= 1.0 && std::floor(m) == m && m < 1e9; }

}  // namespace

char sign_char(BranchSign s) noexcept { return s == BranchSign::Plus ? '+' : '-'; }

double h_omega(double omega, double alpha, double tau_alpha) {
  const Trig t = trig_terms(omega, alpha, tau_alpha);
  if (std::abs(t.X) < 1e-14) throw Singular("h(omega): 1 - alpha cos(omega tau_alpha) vanishes");
  return -t.Y / t.X;
}

std::vector<int> admissible_branches(double m, BranchSign sign) {
  if (!integral(m)) throw DomainError("admissible_branches requires an integer m >= 1");
  const long mi = static_cast<long>(m);
  // Distinct curves: l < m for odd m, l < m/2 for even m.
  const long period = (mi % 2 == 1) ? mi : mi / 2;
  std::vector<int> out;
  if (sign == BranchSign::Plus) {
    // theta+ in (pi/m)((4l-1)/2, 2l) must meet (0, pi/2).
    for (long l = 1; l < period; ++l)
      if (4 * l - 1 < mi || 4 * l <= mi) out.push_back(static_cast<int>(l));
  } else {
    // theta- in (pi/m)((4l+1)/2, 2l+1) must meet (0, pi/2).
    for (long l = 0; l < period; ++l)
      if (4 * l + 1 < mi || 4 * l + 2 <= mi) out.push_back(static_cast<int>(l));
  }
  return out;
}

std::vector<BranchId> candidate_branches(double m) {
  if (!(m > 0.0)) throw DomainError("candidate_branches requires m > 0");
  std::vector<BranchId> out;
  // theta = (Arctan h + offset)/m with Arctan h in (-pi/2, pi/2) can reach
  // below pi/2 only while offset < (m + 1) pi / 2.
  for (int l = 0; 4.0 * l - 1.0 < m; ++l) out.push_back({BranchSign::Plus, l});
  for (int l = 0; 4.0 * l + 1.0 < m; ++l) out.push_back({BranchSign::Minus, l});
  return out;
}

CurveFormula curve_formula(double omega, BranchId b, double alpha, double tau_alpha, double m) {
  const Trig t = trig_terms(omega, alpha, tau_alpha);
  const double h = h_omega(omega, alpha, tau_alpha);
  const double theta = (std::atan(h) + branch_offset(b, t.X)) / m;
  const double beta = sign_value(b.sign) * std::hypot(t.X, t.Y) * std::pow(std::cos(theta), -m);
  return {theta, beta, (m / omega) * std::tan(theta)};
}

std::optional<CurveSample> curve_point(double omega, BranchId b, double alpha, double tau_alpha,
                                       double m) {
  if (!(omega > 0.0)) return std::nullopt;
  const CurveFormula f = curve_formula(omega, b, alpha, tau_alpha, m);
  if (!(f.theta > 0.0 && f.theta < kPi / 2.0) || !(f.tau_beta > 0.0) || !std::isfinite(f.beta) ||
      !std::isfinite(f.tau_beta))
    return std::nullopt;
  CurveSample s;
  s.omega = omega;
  s.theta = f.theta;
  s.beta = f.beta;
  s.tau_beta = f.tau_beta;
  s.dbeta_domega = dbeta_domega(omega, alpha, tau_alpha, m, f.beta, f.tau_beta);
  s.crossing = std::abs(s.dbeta_domega) < 1e-9 ? 0 : (s.dbeta_domega > 0.0 ? 1 : -1) * sign_value(b.sign);
  return s;
}

namespace {

struct CrossingTerms {
  double A, B, C, D;
};

CrossingTerms crossing_terms(double omega, double alpha, double tau_alpha, double m,
                             double tau_beta) {
  const double s = std::sin(omega * tau_alpha);
  const double c = std::cos(omega * tau_alpha);
  CrossingTerms t;
  t.A = omega * (omega + alpha * s);
  t.B = omega * (alpha * c - 1.0);
  t.C = 1.0 + alpha * tau_alpha * c + (alpha * omega * tau_beta * tau_alpha / m) * s +
        tau_beta * (1.0 - alpha * c);
  t.D = -alpha * tau_alpha * s + (omega * tau_beta / m) * (1.0 + alpha * tau_alpha * c) +
        tau_beta * (omega + alpha * s);
  return t;
}

}  // namespace

double dbeta_domega(double omega, double alpha, double tau_alpha, double m, double beta,
                    double tau_beta) {
  const auto t = crossing_terms(omega, alpha, tau_alpha, m, tau_beta);
  return omega * beta * (t.A * t.C + t.B * t.D) / (t.A * t.A + t.B * t.B);
}

double re_dlambda_dtau(double omega, double alpha, double tau_alpha, double m, double tau_beta) {
  const auto t = crossing_terms(omega, alpha, tau_alpha, m, tau_beta);
  return (t.A * t.C + t.B * t.D) / (t.C * t.C + t.D * t.D);
}

int crossing_direction(const CurveSample& s, BranchId b, const ModelParams& p, double tol) {
  const double d = dbeta_domega(s.omega, p.alpha, p.tau_alpha, p.m, p.beta, p.tau_beta());
  if (!(std::abs(d) >= tol)) return 0;
  return (d > 0.0 ? 1 : -1) * sign_value(b.sign);
}

std::optional<int> zero_line_crossing_sign(double alpha, double tau_alpha, double tau_beta) {
  const double den = 1.0 + alpha * tau_alpha + tau_beta * (1.0 - alpha);
  const double scale = 1.0 + std::abs(alpha * tau_alpha) + std::abs(tau_beta * (1.0 - alpha));
  if (std::abs(den) <= 1e-12 * scale) return std::nullopt;
  return den > 0.0 ? 1 : -1;
}

BetaTau m1_curve_point(double omega, double alpha, double tau_alpha) {
  const Trig t = trig_terms(omega, alpha, tau_alpha);
  const double h = h_omega(omega, alpha, tau_alpha);
  return {t.X + t.Y * t.Y / t.X, h / omega};
}

std::optional<BetaTau> discrete_limit_point(double omega, BranchId b, double alpha,
                                            double tau_alpha) {
  if (!(omega > 0.0)) return std::nullopt;
  const Trig t = trig_terms(omega, alpha, tau_alpha);
  const double h = h_omega(omega, alpha, tau_alpha);
  const double tau = (std::atan(h) + branch_offset(b, t.X)) / omega;
  if (!(tau > 0.0)) return std::nullopt;
  return BetaTau{sign_value(b.sign) * std::hypot(t.X, t.Y), tau};
}

std::vector<double> singular_frequencies(double alpha, double tau_alpha, Interval window) {
  std::vector<double> out;
  if (std::abs(alpha) < 1.0 || !(tau_alpha > 0.0)) return out;
  // cos(omega tau_alpha) = 1/alpha  =>  omega tau_alpha = +-c0 + 2 pi k.
  const double c0 = std::acos(1.0 / alpha);
  const double k_lo = std::floor((window.lo * tau_alpha - c0) / (2.0 * kPi)) - 1.0;
  const double k_hi = std::ceil((window.hi * tau_alpha + c0) / (2.0 * kPi)) + 1.0;
  for (double k = k_lo; k <= k_hi; k += 1.0) {
    for (double root : {2.0 * kPi * k - c0, 2.0 * kPi * k + c0}) {
      const double w = root / tau_alpha;
      if (w > window.lo && w < window.hi) out.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) <= 1e-12 * (1.0 + x); }),
            out.end());
  return out;
}

double hopf_residual(const CurveSample& s, const CurveBase& base) {
  const ModelParams p{base.alpha, base.tau_alpha, s.beta, base.m, base.m / s.tau_beta};
  return std::abs(eval_D({0.0, s.omega}, p));
}

namespace {

class Tracer {
 public:
  Tracer(BranchId b, const CurveBase& base, const TraceOptions& opt)
      : b_(b), base_(base), opt_(opt) {}

  std::optional<CurveSample> sample(double omega) const {
    std::optional<CurveSample> s;
    try {
      s = curve_point(omega, b_, base_.alpha, base_.tau_alpha, base_.m);
    } catch (const Singular&) {
      return std::nullopt;
    }
    if (!s || std::abs(s->beta) > opt_.beta_limit || s->tau_beta > opt_.tau_limit)
      return std::nullopt;
    const ModelParams p{base_.alpha, base_.tau_alpha, s->beta, base_.m, base_.m / s->tau_beta};
    s->crossing = crossing_direction(*s, b_, p, opt_.tangent_tol);
    return s;
  }

  /// Last valid sample between a valid and an invalid frequency.
  CurveSample edge(CurveSample valid, double invalid_omega) const {
    double good = valid.omega;
    double bad = invalid_omega;
    for (int i = 0; i < 60 && std::abs(bad - good) > 1e-13 * std::abs(good); ++i) {
      const double mid = 0.5 * (good + bad);
      if (auto s = sample(mid)) {
        valid = *s;
        good = mid;
      } else {
        bad = mid;
      }
    }
    return valid;
  }

  void refine(const CurveSample& p0, const CurveSample& p1, int depth,
              std::vector<std::vector<CurveSample>>& runs) const {
    const double wm = 0.5 * (p0.omega + p1.omega);
    const auto q = sample(wm);
    if (!q) {
      runs.back().push_back(edge(p0, wm));
      const CurveSample right = edge(p1, wm);
      runs.emplace_back();
      runs.back().push_back(right);
      if (right.omega != p1.omega) runs.back().push_back(p1);
      return;
    }
    const double dev = std::hypot(q->beta - 0.5 * (p0.beta + p1.beta),
                                  q->tau_beta - 0.5 * (p0.tau_beta + p1.tau_beta));
    const double scale =
        std::max(1.0, 0.01 * (std::abs(q->beta) + q->tau_beta));
    if (depth < opt_.max_depth && dev > opt_.tol * scale) {
      refine(p0, *q, depth + 1, runs);
      refine(*q, p1, depth + 1, runs);
    } else {
      runs.back().push_back(*q);
      runs.back().push_back(p1);
    }
  }

  void trace_piece(double lo, double hi, std::vector<std::vector<CurveSample>>& out) const {
    if (!(hi > lo)) return;
    double step = (hi - lo) / std::max(opt_.initial_samples, 2);
    if (base_.tau_alpha > 0.0) step = std::min(step, kPi / (16.0 * base_.tau_alpha));
    step = std::max(step, (hi - lo) / 200000.0);
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));

    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
      grid[i] = i == n ? hi : lo + (hi - lo) * (static_cast<double>(i) / n);

    std::vector<std::vector<CurveSample>> runs;
    std::optional<CurveSample> prev;
    for (std::size_t i = 0; i <= n; ++i) {
      const auto cur = sample(grid[i]);
      if (cur && !prev) {
        runs.emplace_back();
        runs.back().push_back(i > 0 ? edge(*cur, grid[i - 1]) : *cur);
        if (runs.back().back().omega != cur->omega) refine(runs.back().back(), *cur, 0, runs);
      } else if (cur && prev) {
        refine(*prev, *cur, 0, runs);
      } else if (!cur && prev) {
        const CurveSample e = edge(*prev, grid[i]);
        if (e.omega != prev->omega) refine(*prev, e, 0, runs);
      }
      prev = cur;
    }

    for (auto& run : runs) {
      std::vector<CurveSample> kept;
      for (const auto& s : run) {
        if (!kept.empty() && s.omega <= kept.back().omega) continue;
        if (hopf_residual(s, base_) < opt_.residual_tol) kept.push_back(s);
      }
      if (!kept.empty()) out.push_back(std::move(kept));
    }
  }

 private:
  BranchId b_;
  CurveBase base_;
  TraceOptions opt_;
};

}  // namespace

std::vector<std::vector<CurveSample>> trace_curve_segments(BranchId b, const CurveBase& base,
                                                           Interval omega_window,
                                                           const TraceOptions& options) {
  if (!(omega_window.lo > 0.0) || !(omega_window.hi > omega_window.lo))
    throw DomainError("trace_curve: omega window must satisfy 0 < lo < hi");
  if (!(base.m > 0.0) || base.tau_alpha < 0.0)
    throw DomainError("trace_curve: requires m > 0 and tau_alpha >= 0");

  std::vector<double> cuts{omega_window.lo};
  for (double w : singular_frequencies(base.alpha, base.tau_alpha, omega_window)) cuts.push_back(w);
  cuts.push_back(omega_window.hi);

  const Tracer tracer(b, base, options);
  std::vector<std::vector<CurveSample>> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i] * (i == 0 ? 1.0 : 1.0 + 1e-9);
    const double hi = cuts[i + 1] * (i + 2 == cuts.size() ? 1.0 : 1.0 - 1e-9);
    tracer.trace_piece(lo, hi, out);
  }
  return out;
}

std::vector<CurveSample> trace_curve(BranchId b, const CurveBase& base, Interval omega_window,
                                     const TraceOptions& options) {
  std::vector<CurveSample> flat;
  for (auto& seg : trace_curve_segments(b, base, omega_window, options))
    flat.insert(flat.end(), seg.begin(), seg.end());
  return flat;
}

}  // namespace ddestab
