#include "ddestab/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <tuple>

#include "ddestab/errors.hpp"

namespace ddestab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double point_segment_distance(double px, double py, const CurveSample& a, const CurveSample& b,
                              double* t_out) {
  const double dx = b.beta - a.beta;
  const double dy = b.tau_beta - a.tau_beta;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((px - a.beta) * dx + (py - a.tau_beta) * dy) / len2, 0.0, 1.0);
  if (t_out) *t_out = t;
  return std::hypot(px - (a.beta + t * dx), py - (a.tau_beta + t * dy));
}

double box_distance(double px, double py, const std::vector<CurveSample>& seg) {
  double bl = kInf, bh = -kInf, tl = kInf, th = -kInf;
  for (const auto& s : seg) {
    bl = std::min(bl, s.beta);
    bh = std::max(bh, s.beta);
    tl = std::min(tl, s.tau_beta);
    th = std::max(th, s.tau_beta);
  }
  const double dx = std::max({bl - px, 0.0, px - bh});
  const double dy = std::max({tl - py, 0.0, py - th});
  return std::hypot(dx, dy);
}

}  // namespace

StabilityClassifier::StabilityClassifier(double alpha, double tau_alpha, double m,
                                         ClassifierOptions options)
    : base_{alpha, tau_alpha, m}, options_(options) {
  if (!std::isfinite(alpha) || !(tau_alpha >= 0.0) || !(m > 0.0) || !std::isfinite(m))
    throw DomainError("classifier requires finite alpha, tau_alpha >= 0 and m > 0");
  TraceOptions trace = options_.trace;
  trace.beta_limit = options_.beta_limit;
  trace.tau_limit = options_.tau_limit;
  // |beta| >= |omega + alpha sin| / 1 >= omega - |alpha| on every curve.
  const Interval window{1e-6, options_.beta_limit + std::abs(alpha) + 1.0};
  for (const BranchId b : candidate_branches(m)) {
    TracedBranch tb{b, trace_curve_segments(b, base_, window, trace)};
    if (!tb.segments.empty()) branches_.push_back(std::move(tb));
  }
}

double StabilityClassifier::distance_to_hopf(double beta, double tau_beta) const {
  double best = kInf;
  const TracedBranch* best_branch = nullptr;
  const CurveSample* best_a = nullptr;
  const CurveSample* best_b = nullptr;
  for (const auto& br : branches_) {
    for (const auto& seg : br.segments) {
      if (box_distance(beta, tau_beta, seg) >= best) continue;
      if (seg.size() == 1) {
        const double d = std::hypot(beta - seg[0].beta, tau_beta - seg[0].tau_beta);
        if (d < best) {
          best = d;
          best_branch = &br;
          best_a = best_b = &seg[0];
        }
        continue;
      }
      for (std::size_t i = 0; i + 1 < seg.size(); ++i) {
        const double d = point_segment_distance(beta, tau_beta, seg[i], seg[i + 1], nullptr);
        if (d < best) {
          best = d;
          best_branch = &br;
          best_a = &seg[i];
          best_b = &seg[i + 1];
        }
      }
    }
  }
  if (!best_branch || best > 0.1) return best;

  // The polyline is only accurate to the chord tolerance; minimise over the exact curve.
  auto dist_at = [&](double w) {
    const auto s = curve_point(w, best_branch->id, base_.alpha, base_.tau_alpha, base_.m);
    return s ? std::hypot(beta - s->beta, tau_beta - s->tau_beta) : kInf;
  };
  double lo = best_a->omega;
  double hi = best_b->omega;
  const double pad = 0.5 * (hi - lo);
  lo = std::max(lo - pad, 1e-300);
  hi = hi + pad;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = dist_at(x1), f2 = dist_at(x2);
  for (int i = 0; i < 100 && hi - lo > 1e-15 * hi; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = dist_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = dist_at(x2);
    }
  }
  return std::min({best, f1, f2});
}

std::vector<double> StabilityClassifier::hopf_crossings_at_beta(double beta,
                                                                Interval tau_range) const {
  std::vector<double> out;
  for (const auto& br : branches_) {
    for (const auto& seg : br.segments) {
      for (std::size_t i = 0; i + 1 < seg.size(); ++i) {
        const double f0 = seg[i].beta - beta;
        const double f1 = seg[i + 1].beta - beta;
        if (f0 == 0.0 && i > 0) continue;  // counted at the previous chord
        if (f0 * f1 > 0.0 || (f0 == 0.0 && f1 == 0.0)) continue;
        double lo = seg[i].omega, hi = seg[i + 1].omega;
        double flo = f0;
        double tau = f0 == 0.0 ? seg[i].tau_beta : seg[i + 1].tau_beta;
        for (int it = 0; it < 100 && f0 != 0.0; ++it) {
          const double mid = 0.5 * (lo + hi);
          const auto s = curve_point(mid, br.id, base_.alpha, base_.tau_alpha, base_.m);
          if (!s) break;
          const double fm = s->beta - beta;
          tau = s->tau_beta;
          if (fm == 0.0 || hi - lo < 1e-15 * hi) break;
          if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        if (tau > tau_range.lo && tau < tau_range.hi) out.push_back(tau);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int StabilityClassifier::unstable_count(double beta, double tau_beta) const {
  const auto key = std::make_pair(beta, tau_beta);
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (auto it = count_cache_.find(key); it != count_cache_.end()) return it->second;
  }
  const ModelParams p =
      ModelParams::with_mean_delay(base_.alpha, base_.tau_alpha, beta, base_.m, tau_beta);
  const int n = count_roots_right_of(0.0, p, options_.roots).count;
  std::lock_guard<std::mutex> lock(cache_mutex_);
  count_cache_.emplace(key, n);
  return n;
}

Verdict StabilityClassifier::classify(double beta, double tau_beta) const {
  if (!(tau_beta > 0.0) || !std::isfinite(beta))
    throw DomainError("classify requires finite beta and tau_beta > 0");
  const ModelParams p =
      ModelParams::with_mean_delay(base_.alpha, base_.tau_alpha, beta, base_.m, tau_beta);
  const Verdict quick = quick_verdict(p);
  if (quick.kind() != VerdictKind::Undetermined) return quick;

  const double band = options_.boundary_band;
  if (std::abs(beta - (1.0 - base_.alpha)) < band) return {VerdictKind::Boundary, Reason::ZeroRootLine};
  if (distance_to_hopf(beta, tau_beta) < band) return {VerdictKind::Boundary, Reason::HopfCurve};
  try {
    const int n = unstable_count(beta, tau_beta);
    return {n == 0 ? VerdictKind::Stable : VerdictKind::Unstable, Reason::RootCount};
  } catch (const ContourTooClose&) {
    return {VerdictKind::Boundary, Reason::RootCount};
  }
}

std::shared_ptr<const StabilityClassifier> shared_classifier(double alpha, double tau_alpha,
                                                             double m) {
  static std::mutex mutex;
  static std::map<std::tuple<double, double, double>, std::shared_ptr<const StabilityClassifier>>
      cache;
  const auto key = std::make_tuple(alpha, tau_alpha, m);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto c = std::make_shared<const StabilityClassifier>(alpha, tau_alpha, m);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(c)).first->second;
}

Verdict classify_point(double beta, double tau_beta, double alpha, double tau_alpha, double m) {
  if (!(tau_beta > 0.0)) throw DomainError("classify_point requires tau_beta > 0");
  const Verdict quick =
      quick_verdict(ModelParams::with_mean_delay(alpha, tau_alpha, beta, m, tau_beta));
  if (quick.kind() != VerdictKind::Undetermined) return quick;
  return shared_classifier(alpha, tau_alpha, m)->classify(beta, tau_beta);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = i + 1 == n ? hi : lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(n - 1));
  return v;
}

RegionGrid classify_grid(const StabilityClassifier& classifier, Interval beta_range,
                         Interval tau_range, Resolution resolution, unsigned jobs) {
  if (resolution.nx < 2 || resolution.ny < 2)
    throw DomainError("classify_grid needs a resolution of at least 2x2");
  if (!(tau_range.lo > 0.0) || !(tau_range.hi > tau_range.lo) ||
      !(beta_range.hi > beta_range.lo))
    throw DomainError("classify_grid needs increasing ranges with tau > 0");

  RegionGrid g;
  g.alpha = classifier.base().alpha;
  g.tau_alpha = classifier.base().tau_alpha;
  g.m = classifier.base().m;
  g.beta_axis = linspace(beta_range.lo, beta_range.hi, resolution.nx);
  g.tau_axis = linspace(tau_range.lo, tau_range.hi, resolution.ny);
  const std::size_t cells = resolution.nx * resolution.ny;
  g.verdicts.assign(cells, Verdict::undetermined());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < cells;) {
      try {
        g.verdicts[k] =
            classifier.classify(g.beta_axis[k % resolution.nx], g.tau_axis[k / resolution.nx]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells;
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells)));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return g;
}

RegionGrid classify_grid(Interval beta_range, Interval tau_range, Resolution resolution,
                         const CurveBase& base, unsigned jobs) {
  return classify_grid(*shared_classifier(base.alpha, base.tau_alpha, base.m), beta_range,
                       tau_range, resolution, jobs);
}

namespace {

/// Count at tau, nudging tau when the contour passes through a root.
int robust_count(const StabilityClassifier& c, double beta, double tau) {
  for (int k = 0;; ++k) {
    try {
      return c.unstable_count(beta, tau * (1.0 + 1e-9 * k));
    } catch (const ContourTooClose&) {
      if (k >= 8) throw;
    }
  }
}

}  // namespace

std::vector<SwitchEvent> switching_profile(const StabilityClassifier& classifier, double beta,
                                           Interval tau_range) {
  if (!(tau_range.lo > 0.0) || !(tau_range.hi > tau_range.lo))
    throw DomainError("switching_profile needs 0 < lo < hi");

  std::vector<double> cuts = classifier.hopf_crossings_at_beta(beta, tau_range);
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return y - x <= 1e-9 * (1.0 + x); }),
             cuts.end());

  std::vector<double> knots{tau_range.lo};
  knots.insert(knots.end(), cuts.begin(), cuts.end());
  knots.push_back(tau_range.hi);

  // Between consecutive knots the count should be constant; a few interior probes
  // catch changes the traced curves missed.
  constexpr int kProbes = 4;
  std::vector<std::pair<double, int>> probes{{tau_range.lo, robust_count(classifier, beta, tau_range.lo)}};
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i], hi = knots[i + 1];
    for (int k = 1; k <= kProbes; ++k) {
      const double t = lo + (hi - lo) * k / (kProbes + 1);
      probes.emplace_back(t, robust_count(classifier, beta, t));
    }
  }
  probes.emplace_back(tau_range.hi, robust_count(classifier, beta, tau_range.hi));

  std::vector<SwitchEvent> events;
  for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
    auto [ta, ca] = probes[i];
    auto [tb, cb] = probes[i + 1];
    if (ca == cb) continue;
    // Locate the change: a knot between the probes if there is one, else bisect.
    double where = -1.0;
    for (double c : cuts)
      if (c > ta && c < tb) where = c;
    if (where < 0.0) {
      double lo = ta, hi = tb;
      for (int it = 0; it < 60 && hi - lo > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (robust_count(classifier, beta, mid) == ca)
          lo = mid;
        else
          hi = mid;
      }
      where = 0.5 * (lo + hi);
    }
    events.push_back({where, ca, cb});
  }
  return events;
}

std::vector<SwitchEvent> switching_profile(double beta, Interval tau_range,
                                           const CurveBase& base) {
  return switching_profile(*shared_classifier(base.alpha, base.tau_alpha, base.m), beta,
                           tau_range);
}

}  // namespace ddestab
