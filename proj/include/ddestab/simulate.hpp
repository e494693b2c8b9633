#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ddestab/model.hpp"

namespace ddestab {

/// History x(t) for t <= 0.
using History = std::function<double(double)>;

/// Linear chain realisation of the gamma-delay term for integer shape m:
///   y_1' = a (x - y_1),  y_j' = a (y_{j-1} - y_j),
///   x'   = -x + alpha x(t - tau_alpha) + beta y_m.
struct ChainSystem {
  int m = 1;
  double a = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double tau_alpha = 0.0;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m) + 1; }
};

/// Throws DomainError when m is not a positive integer.
ChainSystem build_chain(const ModelParams& p);

/// (x(0), y_1(0), ..., y_m(0)) with y_j(0) the history convolved against the
/// gamma(j, a) density.
std::vector<double> initial_state(const ChainSystem& sys, const History& history);

struct Trajectory {
  std::vector<double> t;
  /// states[k][n] is component k (0 = x, j = y_j) at t[n].
  std::vector<std::vector<double>> states;
  std::vector<double> x_dot;

  std::size_t steps() const noexcept { return t.size(); }
  std::span<const double> x() const { return states.at(0); }
  /// Cubic Hermite interpolation of x on [t.front(), t.back()].
  double x_at(double time) const;
};

/// Classical RK4 with Hermite interpolation of x for the discrete delay.
/// Throws StepTooLarge unless step < tau_alpha / 4 (when tau_alpha > 0).
Trajectory integrate(const ChainSystem& sys, const History& history, double horizon,
                     double step);

/// Least-squares slope of log of the trailing running maximum of |x| over the last
/// 40% of the trajectory. Returns -inf when |x| underflows to zero there.
double decay_rate(const Trajectory& traj);

/// 50 / max(0.05, |re|) capped at 2000.
double default_horizon(double rightmost_re) noexcept;

}  // namespace ddestab
