#include "ddestab/chareq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ddestab/errors.hpp"
#include "ddestab/simd/eval_batch.hpp"
#include "detail/chareq_eval.hpp"
#include "detail/complex_ops.hpp"

namespace ddestab {
namespace {

using detail::div;
using detail::mul;

void require_analytic(cplx lambda, const ModelParams& p, const char* op) {
  if (p.beta != 0.0 && !(lambda.real() > -p.a))
    throw DomainError(std::string(op) + ": requires Re(lambda) > -a");
}

/// Boundary of {Re > sigma, |lambda| < R}, parametrised by s in [0, 2]:
/// the arc for s in [0, 1] (counter-clockwise), then the chord downwards.
struct HalfDisc {
  double sigma;
  double radius;
  double half_chord;
  double phi0;

  HalfDisc(double s, double r)
      : sigma(s), radius(r), half_chord(std::sqrt(r * r - s * s)), phi0(std::atan2(half_chord, s)) {}

  cplx at(double s) const {
    if (s <= 1.0) {
      const double phi = -phi0 + 2.0 * phi0 * s;
      return {radius * std::cos(phi), radius * std::sin(phi)};
    }
    return {sigma, half_chord - 2.0 * half_chord * (s - 1.0)};
  }
  double arc_length() const { return 2.0 * phi0 * radius; }
  double chord_length() const { return 2.0 * half_chord; }
};

void evaluate(const ModelParams& p, const HalfDisc& c, const std::vector<double>& s,
              std::vector<double>& dre, std::vector<double>& dim) {
  std::vector<double> re(s.size()), im(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const cplx z = c.at(s[i]);
    re[i] = z.real();
    im[i] = z.imag();
  }
  dre.resize(s.size());
  dim.resize(s.size());
  simd::eval_D_batch(p, re, im, dre, dim);
}

// arg(b / a) without forming the quotient.
double phase_step(double ar, double ai, double br, double bi) {
  return std::atan2(bi * ar - br * ai, br * ar + bi * ai);
}

}  // namespace

cplx eval_D(cplx lambda, const ModelParams& p) {
  require_analytic(lambda, p, "eval_D");
  if (p.beta != 0.0 && std::abs(lambda + p.a) < 0.1 * p.a) {
    const cplx q = (lambda + p.a) / p.a;
    return div(eval_D_factored(lambda, p), detail::cpow_real(q, p.m));
  }
  return detail::eval_plain(detail::coeffs_of(p), lambda.real(), lambda.imag());
}

cplx eval_D_factored(cplx lambda, const ModelParams& p) {
  require_analytic(lambda, p, "eval_D_factored");
  const cplx q = lambda * (p.tau_beta() / p.m) + 1.0;
  const cplx P = lambda + 1.0 - p.alpha * detail::exp_neg(lambda, p.tau_alpha);
  return mul(P, detail::cpow_real(q, p.m)) - p.beta;
}

cplx eval_D_prime(cplx lambda, const ModelParams& p) {
  require_analytic(lambda, p, "eval_D_prime");
  cplx d{1.0, 0.0};
  if (p.alpha != 0.0) d += p.alpha * p.tau_alpha * detail::exp_neg(lambda, p.tau_alpha);
  if (p.beta != 0.0) {
    const cplx z = div({p.a, 0.0}, lambda + p.a);
    d += p.beta * (p.m / p.a) * detail::cpow_real(z, p.m + 1.0);
  }
  return d;
}

double root_radius_bound(double sigma, const ModelParams& p) {
  double factor = std::max(1.0, std::exp(-sigma * p.tau_alpha));
  if (p.beta != 0.0) {
    if (!(sigma > -p.a)) throw DomainError("root_radius_bound: requires sigma > -a");
    factor = std::max(factor, std::pow(p.a / (p.a + sigma), p.m));
  }
  return 2.0 * (1.0 + std::abs(p.alpha) + std::abs(p.beta)) * factor;
}

RootCountReport count_roots_right_of(double sigma, const ModelParams& p,
                                     const RootCountOptions& options) {
  p.validate();
  if (p.beta != 0.0 && !(sigma > -p.a))
    throw DomainError("count_roots_right_of: requires sigma > -a");
  const double radius = std::max(root_radius_bound(sigma, p), 2.0 * std::abs(sigma) + 1.0);
  if (!std::isfinite(radius)) throw DomainError("count_roots_right_of: unbounded root radius");

  RootCountReport report;
  report.sigma = sigma;
  report.radius = radius;

  const HalfDisc contour(sigma, radius);

  // Initial step resolves the discrete-delay oscillation e^(-i y tau_alpha).
  double step = radius / 32.0;
  if (p.tau_alpha > 0.0) step = std::min(step, std::numbers::pi / (8.0 * p.tau_alpha));
  step /= std::max(options.density, 1e-3);
  // The chord also resolves the kernel factor, whose phase turns on the scale sigma + a.
  double chord_step = step;
  if (p.beta != 0.0)
    chord_step = std::min(chord_step, std::numbers::pi * (sigma + p.a) /
                                          (8.0 * std::max(p.m, 1.0) * std::max(options.density, 1e-3)));
  const auto n_arc = static_cast<std::size_t>(
      std::max(64.0, std::ceil(contour.arc_length() / step)));
  const auto n_chord = static_cast<std::size_t>(
      std::max(64.0, std::ceil(contour.chord_length() / chord_step)));
  if (n_arc + n_chord > options.max_samples)
    throw NoConvergence("count_roots_right_of: contour needs more than max_samples points");

  std::vector<double> s;
  s.reserve(n_arc + n_chord + 1);
  for (std::size_t i = 0; i < n_arc; ++i) s.push_back(static_cast<double>(i) / n_arc);
  for (std::size_t i = 0; i <= n_chord; ++i) s.push_back(1.0 + static_cast<double>(i) / n_chord);

  std::vector<double> dre, dim;
  evaluate(p, contour, s, dre, dim);

  // Bisect every interval whose phase step is too large until none remain.
  std::vector<std::size_t> bad;
  std::vector<double> mids, mre, mim;
  std::vector<double> s2, r2, i2;
  for (;;) {
    bad.clear();
    mids.clear();
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
      if (std::abs(phase_step(dre[j], dim[j], dre[j + 1], dim[j + 1])) < options.max_phase_step)
        continue;
      if (s[j + 1] - s[j] < 1e-14)
        throw ContourTooClose("count_roots_right_of: phase jump on a vanishing step",
                              std::min(std::hypot(dre[j], dim[j]), std::hypot(dre[j + 1], dim[j + 1])));
      bad.push_back(j);
      mids.push_back(0.5 * (s[j] + s[j + 1]));
    }
    if (bad.empty()) break;
    if (s.size() + mids.size() > options.max_samples)
      throw NoConvergence("count_roots_right_of: phase refinement exceeded max_samples");
    evaluate(p, contour, mids, mre, mim);

    s2.clear();
    r2.clear();
    i2.clear();
    std::size_t k = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      s2.push_back(s[j]);
      r2.push_back(dre[j]);
      i2.push_back(dim[j]);
      if (k < bad.size() && bad[k] == j) {
        s2.push_back(mids[k]);
        r2.push_back(mre[k]);
        i2.push_back(mim[k]);
        ++k;
      }
    }
    s.swap(s2);
    dre.swap(r2);
    dim.swap(i2);
  }

  double min_abs = std::numeric_limits<double>::infinity();
  double winding = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double mag = std::hypot(dre[j], dim[j]);
    if (!std::isfinite(mag)) throw ContourTooClose("count_roots_right_of: D not finite", 0.0);
    min_abs = std::min(min_abs, mag);
    if (j + 1 < s.size()) winding += phase_step(dre[j], dim[j], dre[j + 1], dim[j + 1]);
  }
  report.min_abs_D = min_abs;
  report.samples_used = s.size();
  if (min_abs < options.min_abs)
    throw ContourTooClose("count_roots_right_of: |D| = " + std::to_string(min_abs) +
                              " on the contour; perturb sigma",
                          min_abs);

  const double turns = winding / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.25 || rounded < 0.0)
    throw NoConvergence("count_roots_right_of: winding number " + std::to_string(turns) +
                        " is not a non-negative integer");
  report.count = static_cast<int>(rounded);
  return report;
}

cplx refine_root(cplx lambda0, const ModelParams& p) {
  require_analytic(lambda0, p, "refine_root");
  cplx z = lambda0;
  cplx d = eval_D(z, p);
  for (int it = 0; it < 50 && std::abs(d) >= 1e-12; ++it) {
    const cplx dp = eval_D_prime(z, p);
    if (dp == cplx{0.0, 0.0} || !std::isfinite(std::abs(dp))) break;
    const cplx delta = div(d, dp);
    z -= delta;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
    if (p.beta != 0.0 && !(z.real() > -p.a)) break;
    d = eval_D(z, p);
    if (std::abs(delta) < 1e-15 * (1.0 + std::abs(z))) break;
  }
  if (!(std::isfinite(z.real()) && std::isfinite(z.imag())) ||
      (p.beta != 0.0 && !(z.real() > -p.a)) || !(std::abs(eval_D(z, p)) < 1e-10))
    throw NoConvergence("refine_root: Newton iteration did not reach |D| < 1e-10");
  return z;
}

namespace {

// Left edge of the rightmost-root search: at most 0.9 min(a, 5) left of the axis,
// and no further than where (a / (a + sigma))^m reaches 4.
double search_left_edge(const ModelParams& p) {
  double edge = -0.9 * std::min(p.a, 5.0);
  if (p.beta != 0.0) edge = std::max(edge, p.a * (std::pow(4.0, -1.0 / p.m) - 1.0));
  return edge;
}

int robust_count(double sigma, const ModelParams& p) {
  double offset = 0.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    try {
      return count_roots_right_of(sigma + offset, p).count;
    } catch (const ContourTooClose&) {
      offset = (offset == 0.0 ? 1e-7 : offset * 4.0);
    }
  }
  throw NoConvergence("rightmost_root: verification contour repeatedly hit a root");
}

}  // namespace

cplx rightmost_root(const ModelParams& p) {
  p.validate();
  const double left = search_left_edge(p);
  const double reach = 0.5 * root_radius_bound(left, p);

  for (int n = 24; n <= 192; n *= 2) {
    std::vector<cplx> roots;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const cplx seed{left + (reach - left) * (i + 0.5) / n, reach * (j + 0.5) / n};
        try {
          cplx r = refine_root(seed, p);
          if (r.imag() < 0.0) r = std::conj(r);
          if (std::abs(r.imag()) < 1e-12) r.imag(0.0);
          const bool seen = std::any_of(roots.begin(), roots.end(), [&](cplx q) {
            return std::abs(q - r) < 1e-8 * (1.0 + std::abs(r));
          });
          if (!seen) roots.push_back(r);
        } catch (const NoConvergence&) {
        } catch (const DomainError&) {
        }
      }
    }
    if (roots.empty()) continue;
    const cplx best = *std::max_element(roots.begin(), roots.end(), [](cplx x, cplx y) {
      return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
    });
    const double check = best.real() + 1e-6;
    const int beyond = robust_count(std::max(check, left), p);
    if (beyond == 0) return best;
  }
  throw NoConvergence("rightmost_root: grid-seeded Newton missed roots to the right");
}

}  // namespace ddestab
