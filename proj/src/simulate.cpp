#include "ddestab/simulate.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <deque>
#include <limits>

#include "ddestab/errors.hpp"
#include "ddestab/kernels.hpp"

namespace ddestab {

ChainSystem build_chain(const ModelParams& p) {
  p.validate();
  if (!p.integer_shape() || p.m > 1e6)
    throw DomainError("simulation needs a positive integer shape m");
  return {static_cast<int>(p.m), p.a, p.alpha, p.beta, p.tau_alpha};
}

std::vector<double> initial_state(const ChainSystem& sys, const History& history) {
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> u(sys.dimension());
  u[0] = history(0.0);
  for (int j = 1; j <= sys.m; ++j) {
    auto f = [&](double T) { return gamma_density(T, j, sys.a) * history(-T); };
    // The gamma(j, a) mass beyond 60 j / a is far below double precision.
    const double end = 60.0 * j / sys.a;
    const int pieces = 4 * (j + 10);
    double sum = 0.0;
    for (int k = 0; k < pieces; ++k) {
      const double lo = end * k / pieces;
      const double hi = end * (k + 1) / pieces;
      sum += gauss_kronrod<double, 31>::integrate(f, lo, hi, 10, 1e-12);
    }
    u[static_cast<std::size_t>(j)] = sum;
  }
  return u;
}

namespace {

double hermite(double t0, double t1, double x0, double x1, double d0, double d1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * x1 +
         (s3 - s2) * h * d1;
}

}  // namespace

double Trajectory::x_at(double time) const {
  if (t.empty() || time < t.front() || time > t.back())
    throw DomainError("x_at outside the trajectory");
  if (t.size() == 1) return states[0][0];
  auto it = std::upper_bound(t.begin(), t.end(), time);
  std::size_t i = it == t.end() ? t.size() - 2 : static_cast<std::size_t>(it - t.begin()) - 1;
  i = std::min(i, t.size() - 2);
  const auto& x = states[0];
  return hermite(t[i], t[i + 1], x[i], x[i + 1], x_dot[i], x_dot[i + 1], time);
}

Trajectory integrate(const ChainSystem& sys, const History& history, double horizon,
                     double step) {
  if (!(horizon > 0.0) || !(step > 0.0)) throw DomainError("integrate needs horizon, step > 0");
  if (sys.tau_alpha > 0.0 && step >= sys.tau_alpha / 4.0)
    throw StepTooLarge("step must be below tau_alpha / 4");

  const std::size_t dim = sys.dimension();
  const auto n = static_cast<std::size_t>(std::llround(std::ceil(horizon / step - 1e-9)));

  Trajectory tr;
  tr.t.reserve(n + 1);
  tr.states.assign(dim, {});
  for (auto& s : tr.states) s.reserve(n + 1);
  tr.x_dot.reserve(n + 1);

  auto delayed = [&](double s, double x_now) {
    if (sys.tau_alpha == 0.0) return x_now;
    const double q = s - sys.tau_alpha;
    if (q <= 0.0) return history(q);
    // Uniform grid: stages never reach past the last stored point because step < tau / 4.
    std::size_t i = std::min(static_cast<std::size_t>(q / step), tr.t.size() - 2);
    const auto& x = tr.states[0];
    return hermite(tr.t[i], tr.t[i + 1], x[i], x[i + 1], tr.x_dot[i], tr.x_dot[i + 1], q);
  };
  auto rhs = [&](double s, const std::vector<double>& u, std::vector<double>& du) {
    du[1] = sys.a * (u[0] - u[1]);
    for (std::size_t j = 2; j < dim; ++j) du[j] = sys.a * (u[j - 1] - u[j]);
    du[0] = -u[0] + sys.alpha * delayed(s, u[0]) + sys.beta * u[dim - 1];
  };

  std::vector<double> u = initial_state(sys, history);
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), w(dim);
  auto store = [&](double s, const std::vector<double>& state, double xd) {
    tr.t.push_back(s);
    for (std::size_t j = 0; j < dim; ++j) tr.states[j].push_back(state[j]);
    tr.x_dot.push_back(xd);
  };

  rhs(0.0, u, k1);
  store(0.0, u, k1[0]);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) * step;
    for (std::size_t j = 0; j < dim; ++j) w[j] = u[j] + 0.5 * step * k1[j];
    rhs(s + 0.5 * step, w, k2);
    for (std::size_t j = 0; j < dim; ++j) w[j] = u[j] + 0.5 * step * k2[j];
    rhs(s + 0.5 * step, w, k3);
    for (std::size_t j = 0; j < dim; ++j) w[j] = u[j] + step * k3[j];
    rhs(s + step, w, k4);
    for (std::size_t j = 0; j < dim; ++j)
      u[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    const double t_next = static_cast<double>(k + 1) * step;
    // x' at the new point needs x(t_next - tau), which is already stored.
    rhs(t_next, u, k1);
    store(t_next, u, k1[0]);
  }
  return tr;
}

double decay_rate(const Trajectory& traj) {
  const std::size_t n = traj.steps();
  if (n < 2) throw DomainError("decay_rate needs a trajectory");
  const double t0 = traj.t.front(), t1 = traj.t.back();
  const double H = t1 - t0;
  const double start = t0 + 0.6 * H;
  const double width = 0.1 * H;
  const auto x = traj.x();

  std::size_t first = static_cast<std::size_t>(
      std::lower_bound(traj.t.begin(), traj.t.end(), start) - traj.t.begin());
  if (n - first < 100) throw DomainError("decay_rate needs at least 100 samples in the tail");

  // Sliding maximum of |x| over [t - width, t].
  std::deque<std::size_t> dq;
  std::size_t lo = static_cast<std::size_t>(
      std::lower_bound(traj.t.begin(), traj.t.end(), start - width) - traj.t.begin());
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t cnt = 0;
  for (std::size_t i = lo; i < n; ++i) {
    while (!dq.empty() && std::abs(x[dq.back()]) <= std::abs(x[i])) dq.pop_back();
    dq.push_back(i);
    while (traj.t[dq.front()] < traj.t[i] - width) dq.pop_front();
    if (i < first) continue;
    const double M = std::abs(x[dq.front()]);
    if (M == 0.0) return -std::numeric_limits<double>::infinity();
    if (!std::isfinite(M)) return std::numeric_limits<double>::infinity();
    const double y = std::log(M);
    const double t = traj.t[i];
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++cnt;
  }
  const double c = static_cast<double>(cnt);
  return (c * sty - st * sy) / (c * stt - st * st);
}

double default_horizon(double rightmost_re) noexcept {
  return std::min(2000.0, 50.0 / std::max(0.05, std::abs(rightmost_re)));
}

}  // namespace ddestab
