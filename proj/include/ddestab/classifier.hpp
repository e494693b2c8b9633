#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "ddestab/boundary.hpp"
#include "ddestab/chareq.hpp"
#include "ddestab/criteria.hpp"

namespace ddestab {

struct ClassifierOptions {
  /// Width of the Boundary band around the zero-root line and Hopf curves.
  double boundary_band = 1e-6;
  /// Hopf curves are traced for |beta| up to this limit.
  double beta_limit = 200.0;
  double tau_limit = 1e3;
  TraceOptions trace{};
  RootCountOptions roots{};
};

struct TracedBranch {
  BranchId id;
  std::vector<std::vector<CurveSample>> segments;
};

/// Classifies points of the (beta, tau_beta) plane for fixed (alpha, tau_alpha, m).
/// Curves are traced once at construction. classify() is safe to call concurrently.
class StabilityClassifier {
 public:
  StabilityClassifier(double alpha, double tau_alpha, double m, ClassifierOptions options = {});

  /// Closed-form tests first, then the boundary band, then the root count to the right of 0.
  /// Never returns Undetermined.
  Verdict classify(double beta, double tau_beta) const;

  /// Euclidean distance in the (beta, tau_beta) plane to the nearest traced Hopf curve.
  double distance_to_hopf(double beta, double tau_beta) const;

  /// tau_beta values where the vertical line through beta meets a traced curve.
  std::vector<double> hopf_crossings_at_beta(double beta, Interval tau_range) const;

  int unstable_count(double beta, double tau_beta) const;

  const std::vector<TracedBranch>& branches() const noexcept { return branches_; }
  const CurveBase& base() const noexcept { return base_; }
  const ClassifierOptions& options() const noexcept { return options_; }

 private:
  CurveBase base_;
  ClassifierOptions options_;
  std::vector<TracedBranch> branches_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<double, double>, int> count_cache_;
};

/// Shares one StabilityClassifier per (alpha, tau_alpha, m) across calls.
std::shared_ptr<const StabilityClassifier> shared_classifier(double alpha, double tau_alpha,
                                                             double m);

Verdict classify_point(double beta, double tau_beta, double alpha, double tau_alpha, double m);

struct RegionGrid {
  double alpha = 0.0;
  double tau_alpha = 0.0;
  double m = 1.0;
  std::vector<double> beta_axis;
  std::vector<double> tau_axis;
  /// Row-major: verdicts[it * beta_axis.size() + ib].
  std::vector<Verdict> verdicts;

  const Verdict& at(std::size_t it, std::size_t ib) const {
    return verdicts.at(it * beta_axis.size() + ib);
  }
};

struct Resolution {
  std::size_t nx = 2;  // along beta
  std::size_t ny = 2;  // along tau_beta

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// n evenly spaced values from lo to hi inclusive; lo + (hi - lo) * (i / (n - 1)).
std::vector<double> linspace(double lo, double hi, std::size_t n);

RegionGrid classify_grid(Interval beta_range, Interval tau_range, Resolution resolution,
                         const CurveBase& base, unsigned jobs = 1);
RegionGrid classify_grid(const StabilityClassifier& classifier, Interval beta_range,
                         Interval tau_range, Resolution resolution, unsigned jobs = 1);

struct SwitchEvent {
  double tau_beta = 0.0;
  int count_before = 0;
  int count_after = 0;
};

/// Changes of the unstable-root count along the vertical line through beta.
std::vector<SwitchEvent> switching_profile(double beta, Interval tau_range,
                                           const CurveBase& base);
std::vector<SwitchEvent> switching_profile(const StabilityClassifier& classifier, double beta,
                                           Interval tau_range);

}  // namespace ddestab
