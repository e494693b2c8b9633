#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "ddestab/boundary.hpp"
#include "ddestab/chareq.hpp"
#include "ddestab/errors.hpp"
#include "oracles.hpp"

using namespace ddestab;
using std::numbers::pi;

namespace {

BranchId plus(int l) { return {BranchSign::Plus, l}; }
BranchId minus(int l) { return {BranchSign::Minus, l}; }

double residual(double omega, double alpha, double tau_alpha, double beta, double m,
                double tau_beta) {
  return std::abs(oracle::D({0.0, omega}, alpha, tau_alpha, beta, m, m / tau_beta));
}

/// Direct implicit differentiation of (P(l))(l tau / m + 1)^m - beta = 0 in tau.
cplx dlambda_dtau_direct(cplx l, double alpha, double tau_alpha, double m, double tau) {
  const cplx e = std::exp(-l * tau_alpha);
  const cplx P = l + 1.0 - alpha * e;
  const cplx dP = 1.0 + alpha * tau_alpha * e;
  const cplx q = l * tau / m + 1.0;
  return -l * P / (dP * q + tau * P);
}

ModelParams params_of(const CurveSample& s, double alpha, double tau_alpha, double m) {
  return ModelParams::with_mean_delay(alpha, tau_alpha, s.beta, m, s.tau_beta);
}

}  // namespace

TEST(HOmega, Examples) {
  EXPECT_EQ(h_omega(2.0, 0.0, 1.0), -2.0);
  EXPECT_NEAR(h_omega(1e-9, -0.4, 1.0), 0.0, 1e-8);
  EXPECT_NEAR(h_omega(1.0, -0.4, 1.0),
              -(1.0 - 0.4 * std::sin(1.0)) / (1.0 + 0.4 * std::cos(1.0)), 1e-6);
  EXPECT_THROW(h_omega(0.0, 1.0, 1.0), Singular);
  EXPECT_THROW(h_omega(pi / 3.0, 2.0, 1.0), Singular);
}

TEST(AdmissibleBranches, TableOne) {
  const std::map<int, std::pair<std::vector<int>, std::vector<int>>> table = {
      {1, {{}, {}}},        {2, {{}, {0}}},       {3, {{}, {0}}},
      {4, {{1}, {0}}},      {5, {{1}, {0}}},      {6, {{1}, {0, 1}}},
      {7, {{1}, {0, 1}}},   {8, {{1, 2}, {0, 1}}}, {9, {{1, 2}, {0, 1}}},
  };
  for (const auto& [m, row] : table) {
    EXPECT_EQ(admissible_branches(m, BranchSign::Plus), row.first) << "m=" << m;
    EXPECT_EQ(admissible_branches(m, BranchSign::Minus), row.second) << "m=" << m;
  }
}

TEST(AdmissibleBranches, ThirtyGivesFifteen) {
  EXPECT_EQ(admissible_branches(30, BranchSign::Plus).size() +
                admissible_branches(30, BranchSign::Minus).size(),
            15u);
}

TEST(AdmissibleBranches, RejectsNonInteger) {
  EXPECT_THROW(admissible_branches(0.0, BranchSign::Plus), DomainError);
  EXPECT_THROW(admissible_branches(2.5, BranchSign::Minus), DomainError);
  EXPECT_THROW(admissible_branches(-3.0, BranchSign::Minus), DomainError);
}

TEST(AdmissibleBranches, SubsetOfCandidates) {
  for (int m = 1; m <= 40; ++m) {
    const auto cand = candidate_branches(m);
    for (auto s : {BranchSign::Plus, BranchSign::Minus})
      for (int l : admissible_branches(m, s))
        EXPECT_NE(std::find(cand.begin(), cand.end(), BranchId{s, l}), cand.end())
            << m << sign_char(s) << l;
  }
}

TEST(AdmissibleBranches, AgreeWithSampledCurves) {
  // For alpha = 0, h = -omega < 0, so the admissible set is exactly the set of
  // branches producing samples for some omega.
  for (int m = 1; m <= 12; ++m) {
    for (auto s : {BranchSign::Plus, BranchSign::Minus}) {
      std::vector<int> found;
      const int period = m % 2 ? m : m / 2;
      for (int l = (s == BranchSign::Plus ? 1 : 0); l < period; ++l) {
        bool any = false;
        for (double w = 1e-3; w < 1e4 && !any; w *= 1.01)
          any = curve_point(w, {s, l}, 0.0, 1.0, m).has_value();
        if (any) found.push_back(l);
      }
      EXPECT_EQ(admissible_branches(m, s), found) << "m=" << m << sign_char(s);
    }
  }
}

TEST(CurvePoint, Examples) {
  for (double w : {0.1, 1.0, 7.0}) EXPECT_FALSE(curve_point(w, plus(0), 0.0, 1.0, 1.0));
  const auto s = curve_point(1.0, minus(0), 0.0, 1.0, 2.0);
  ASSERT_TRUE(s);
  EXPECT_NEAR(s->theta, 3.0 * pi / 8.0, 1e-15);
  EXPECT_NEAR(s->tau_beta, 2.0 * std::tan(3.0 * pi / 8.0), 1e-13);
  EXPECT_NEAR(s->tau_beta, 4.82843, 1e-5);
  EXPECT_NEAR(s->beta, -std::sqrt(2.0) / std::pow(std::cos(3.0 * pi / 8.0), 2), 1e-12);
  EXPECT_NEAR(s->beta, -9.6569, 1e-4);
  EXPECT_LT(residual(1.0, 0.0, 1.0, s->beta, 2.0, s->tau_beta), 1e-10);
  EXPECT_FALSE(curve_point(-1.0, minus(0), 0.0, 1.0, 2.0));
  EXPECT_THROW(curve_point(pi / 3.0, minus(0), 2.0, 1.0, 2.0), Singular);
}

TEST(CurvePoint, TanThetaRelation) {
  for (double w = 0.05; w < 10.0; w += 0.05)
    if (auto s = curve_point(w, minus(0), -0.4, 1.0, 3.0)) {
      const double a = 3.0 / s->tau_beta;
      EXPECT_NEAR(std::tan(s->theta), w / a, 1e-12 * (1.0 + w / a));
    }
}

TEST(CurvePoint, Replication) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> uw(0.01, 20.0), ua(-0.95, 0.95), ut(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const int m = 1 + i % 12;
    const int shift = m % 2 ? m : m / 2;
    const double w = uw(rng), alpha = ua(rng), tau = ut(rng);
    for (auto s : {BranchSign::Plus, BranchSign::Minus}) {
      const int l = i % 3;
      const auto f0 = curve_formula(w, {s, l}, alpha, tau, m);
      const auto f1 = curve_formula(w, {s, l + shift}, alpha, tau, m);
      ASSERT_NEAR(f1.beta, f0.beta, 1e-9 * std::abs(f0.beta)) << m << " " << w;
      ASSERT_NEAR(f1.tau_beta, f0.tau_beta, 1e-9 * (1.0 + std::abs(f0.tau_beta))) << m << " " << w;
    }
  }
}

TEST(CurvePoint, NonIntegerShape) {
  for (double w = 0.1; w < 5.0; w += 0.1)
    if (auto s = curve_point(w, minus(0), 0.3, 1.0, 2.5))
      EXPECT_LT(residual(w, 0.3, 1.0, s->beta, 2.5, s->tau_beta), 1e-10);
}

TEST(TraceCurve, ContainsKnownSample) {
  const auto samples = trace_curve(minus(0), {0.0, 1.0, 2.0}, {0.2, 3.0});
  ASSERT_FALSE(samples.empty());
  const double b = -std::sqrt(2.0) / std::pow(std::cos(3.0 * pi / 8.0), 2);
  const double t = 2.0 * std::tan(3.0 * pi / 8.0);
  double best = INFINITY;
  for (const auto& s : samples) best = std::min(best, std::hypot(s.beta - b, s.tau_beta - t));
  // Neighbouring samples are close, so one of them lies near the omega = 1 point.
  EXPECT_LT(best, 0.5);
  bool bracket = false;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i)
    bracket |= samples[i].omega <= 1.0 && samples[i + 1].omega >= 1.0;
  EXPECT_TRUE(bracket);
}

TEST(TraceCurve, MOneStableRegimesAreEmpty) {
  for (double alpha : {-0.4, 0.0, 0.5, 0.9})
    for (const BranchId b : candidate_branches(1.0))
      EXPECT_TRUE(trace_curve(b, {alpha, 1.0, 1.0}, {1e-4, 50.0}).empty()) << alpha;
}

TEST(TraceCurve, ResidualAndInvariants) {
  std::size_t total = 0;
  for (double m : {1.0, 2.0, 3.0, 5.0, 7.0, 12.0, 2.5})
    for (double alpha : {-0.4, 0.3, 0.0})
      for (const BranchId b : candidate_branches(m)) {
        for (const auto& s : trace_curve(b, {alpha, 1.0, m}, {0.01, 20.0})) {
          ++total;
          ASSERT_LT(residual(s.omega, alpha, 1.0, s.beta, m, s.tau_beta), 1e-8);
          ASSERT_GT(s.theta, 0.0);
          ASSERT_LT(s.theta, pi / 2.0);
          ASSERT_GT(s.tau_beta, 0.0);
          // Quadrant law.
          ASSERT_EQ(s.beta > 0.0, b.sign == BranchSign::Plus) << m << " " << alpha;
          if (alpha > 0.0 && b.sign == BranchSign::Plus) ASSERT_GE(s.beta, 1.0 - alpha);
        }
      }
  EXPECT_GT(total, 1000u);
}

TEST(TraceCurve, PlusBranchLowerBound) {
  std::size_t checked = 0;
  for (double alpha : {0.1, 0.3, 0.5, 0.8, 0.95})
    for (int m = 4; m <= 12; ++m)
      for (int l : admissible_branches(m, BranchSign::Plus))
        for (const auto& s : trace_curve(plus(l), {alpha, 1.0, double(m)}, {0.01, 30.0})) {
          ASSERT_GE(s.beta, 1.0 - alpha);
          ++checked;
        }
  EXPECT_GT(checked, 500u);
}

TEST(TraceCurve, SplitsAtSingularFrequencies) {
  const CurveBase base{2.0, 1.0, 3.0};
  const auto sing = singular_frequencies(2.0, 1.0, {0.01, 20.0});
  std::size_t total = 0;
  for (const BranchId b : candidate_branches(3.0)) {
    const auto segs = trace_curve_segments(b, base, {0.01, 20.0});
    for (const auto& seg : segs) {
      for (std::size_t i = 0; i < seg.size(); ++i) {
        ++total;
        ASSERT_LT(hopf_residual(seg[i], base), 1e-8);
        if (i > 0) {
          ASSERT_GT(seg[i].omega, seg[i - 1].omega);
          for (double w : sing) ASSERT_FALSE(seg[i - 1].omega < w && w < seg[i].omega);
        }
      }
    }
  }
  EXPECT_GT(total, 0u);
}

TEST(TraceCurve, RejectsBadWindow) {
  EXPECT_THROW(trace_curve(minus(0), {0.0, 1.0, 2.0}, {0.0, 1.0}), DomainError);
  EXPECT_THROW(trace_curve(minus(0), {0.0, 1.0, 2.0}, {2.0, 1.0}), DomainError);
}

TEST(SingularFrequencies, ClosedForm) {
  const auto w = singular_frequencies(2.0, 1.0, {0.0 + 1e-9, 8.0});
  ASSERT_EQ(w.size(), 3u);
  EXPECT_NEAR(w[0], pi / 3.0, 1e-14);
  EXPECT_NEAR(w[1], 5.0 * pi / 3.0, 1e-14);
  EXPECT_NEAR(w[2], 7.0 * pi / 3.0, 1e-14);
  EXPECT_TRUE(singular_frequencies(0.5, 1.0, {0.1, 100.0}).empty());
  // alpha = -1: cos = -1 gives a double zero at odd multiples of pi.
  const auto v = singular_frequencies(-1.0, 2.0, {0.1, 5.0});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v[0], pi / 2.0, 1e-14);
  EXPECT_NEAR(v[1], 3.0 * pi / 2.0, 1e-14);
  // Every returned frequency is a sign change or double zero of 1 - alpha cos.
  for (double x : singular_frequencies(-3.7, 0.6, {0.1, 60.0}))
    EXPECT_NEAR(1.0 + 3.7 * std::cos(0.6 * x), 0.0, 1e-13);
}

TEST(Crossing, FiniteDifferenceOfBeta) {
  for (double alpha : {-0.4, 0.3})
    for (double m : {2.0, 3.0, 5.0})
      for (double w = 0.3; w < 6.0; w += 0.37) {
        const auto s = curve_point(w, minus(0), alpha, 1.0, m);
        const auto sp = curve_point(w + 1e-6, minus(0), alpha, 1.0, m);
        const auto sm = curve_point(w - 1e-6, minus(0), alpha, 1.0, m);
        if (!s || !sp || !sm) continue;
        const double fd = (sp->beta - sm->beta) / 2e-6;
        EXPECT_NEAR(s->dbeta_domega, fd, 1e-5 * (1.0 + std::abs(fd))) << alpha << " " << m << " " << w;
      }
}

TEST(Crossing, ReDlambdaMatchesImplicitDerivative) {
  for (double alpha : {-0.4, 0.3, 1.5})
    for (double m : {1.0, 2.0, 4.0, 7.0})
      for (const BranchId b : candidate_branches(m))
        for (double w = 0.2; w < 8.0; w += 0.29) {
          std::optional<CurveSample> s;
          try {
            s = curve_point(w, b, alpha, 1.0, m);
          } catch (const Singular&) {
            continue;
          }
          if (!s) continue;
          const cplx d = dlambda_dtau_direct({0.0, w}, alpha, 1.0, m, s->tau_beta);
          const double re = re_dlambda_dtau(w, alpha, 1.0, m, s->tau_beta);
          EXPECT_NEAR(re, d.real(), 1e-9 * (1.0 + std::abs(d))) << alpha << " " << m;
          const int c = crossing_direction(*s, b, params_of(*s, alpha, 1.0, m));
          if (std::abs(d.real()) > 1e-8) EXPECT_EQ(c, d.real() > 0 ? 1 : -1);
          EXPECT_EQ(c, s->crossing);
        }
}

TEST(Crossing, RootCountChangesAcrossCurve) {
  const auto s = curve_point(1.0, minus(0), 0.0, 1.0, 2.0);
  ASSERT_TRUE(s);
  const int dir = crossing_direction(*s, minus(0), params_of(*s, 0.0, 1.0, 2.0));
  ASSERT_NE(dir, 0);
  const int below =
      count_roots_right_of(0.0, ModelParams::with_mean_delay(0.0, 1.0, s->beta, 2.0, s->tau_beta - 1e-2)).count;
  const int above =
      count_roots_right_of(0.0, ModelParams::with_mean_delay(0.0, 1.0, s->beta, 2.0, s->tau_beta + 1e-2)).count;
  EXPECT_EQ(above - below, 2 * dir);
}

TEST(Crossing, SignRuleOnBranches) {
  for (double m : {4.0, 6.0, 9.0})
    for (const BranchId b : candidate_branches(m))
      for (double w = 0.2; w < 6.0; w += 0.4)
        if (auto s = curve_point(w, b, 0.3, 1.0, m); s && std::abs(s->dbeta_domega) > 1e-9) {
          const int expect = b.sign == BranchSign::Plus ? (s->dbeta_domega > 0 ? 1 : -1)
                                                        : (s->dbeta_domega > 0 ? -1 : 1);
          EXPECT_EQ(s->crossing, expect);
        }
}

TEST(Crossing, ZeroAtExtremum) {
  // Locate a sign change of d beta / d omega on some branch and bisect to it.
  bool found = false;
  for (double m : {2.0, 3.0, 4.0, 5.0}) {
    for (const BranchId b : candidate_branches(m)) {
      for (double alpha : {-0.4, 0.3, 0.8}) {
        std::optional<CurveSample> prev;
        for (double w = 0.01; w < 10.0 && !found; w += 0.01) {
          auto s = curve_point(w, b, alpha, 1.0, m);
          if (s && prev && (s->dbeta_domega > 0) != (prev->dbeta_domega > 0)) {
            double lo = prev->omega, hi = w;
            CurveSample mid = *s;
            for (int i = 0; i < 200; ++i) {
              const auto c = curve_point(0.5 * (lo + hi), b, alpha, 1.0, m);
              mid = *c;
              if ((c->dbeta_domega > 0) == (prev->dbeta_domega > 0)) lo = c->omega; else hi = c->omega;
              if (std::abs(c->dbeta_domega) < 1e-10) break;
            }
            ASSERT_LT(std::abs(mid.dbeta_domega), 1e-9);
            EXPECT_EQ(crossing_direction(mid, b, params_of(mid, alpha, 1.0, m)), 0);
            found = true;
          }
          prev = s;
        }
      }
    }
  }
  EXPECT_TRUE(found);
}

TEST(ZeroLine, Examples) {
  EXPECT_EQ(zero_line_crossing_sign(0.0, 1.0, 1.0), 1);
  EXPECT_EQ(zero_line_crossing_sign(2.0, 1.0, 4.0), -1);
  EXPECT_FALSE(zero_line_crossing_sign(2.0, 1.0, 3.0).has_value());
}

TEST(ZeroLine, MatchesRealRootMotion) {
  // d lambda / d beta at the zero root, by following the real root numerically.
  const double alpha = 0.3, tau_alpha = 1.2, tau_beta = 2.0, m = 3.0;
  const double db = 1e-6;
  const auto p = ModelParams::with_mean_delay(alpha, tau_alpha, 1.0 - alpha + db, m, tau_beta);
  const cplx z = refine_root(0.0, p);
  EXPECT_NEAR(z.real() / db, 1.0 / (1.0 + alpha * tau_alpha + tau_beta * (1.0 - alpha)), 1e-5);
}

TEST(MOneCurve, Examples) {
  const auto lim = m1_curve_point(1e-7, -0.4, 1.0);
  EXPECT_NEAR(lim.beta, 1.4, 1e-6);
  EXPECT_NEAR(lim.tau_beta, -0.6 / 1.4, 1e-6);
  for (double w : {0.5, 1.0, 3.0}) {
    const auto p = m1_curve_point(w, 0.0, 2.0);
    EXPECT_NEAR(p.beta, 1.0 + w * w, 1e-14);
    EXPECT_NEAR(p.tau_beta, -1.0, 1e-14);
  }
  EXPECT_THROW(m1_curve_point(pi / 3.0, 2.0, 1.0), Singular);
}

TEST(MOneCurve, EquivalentToGeneralFormula) {
  int compared = 0;
  for (double alpha : {-3.0, -1.5, -0.9, 0.2, 2.0})
    for (double tau : {0.5, 1.0, 4.0})
      for (double w = 0.03; w < 12.0; w += 0.03) {
        std::optional<CurveSample> s;
        try {
          s = curve_point(w, plus(0), alpha, tau, 1.0);
        } catch (const Singular&) {
          continue;
        }
        if (!s) continue;
        const auto c = m1_curve_point(w, alpha, tau);
        ASSERT_NEAR(c.beta, s->beta, 1e-9 * (1.0 + std::abs(c.beta)));
        ASSERT_NEAR(c.tau_beta, s->tau_beta, 1e-9 * (1.0 + c.tau_beta));
        EXPECT_LT(residual(w, alpha, tau, c.beta, 1.0, c.tau_beta), 1e-10);
        ++compared;
      }
  EXPECT_GT(compared, 100);
}

TEST(DiscreteLimit, Examples) {
  const auto p = discrete_limit_point(1.0, plus(1), 0.0, 1.0);
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->beta, std::sqrt(2.0), 1e-15);
  const auto q = discrete_limit_point(1.0, minus(0), 0.0, 1.0);
  ASSERT_TRUE(q);
  EXPECT_NEAR(q->tau_beta, 3.0 * pi / 4.0, 1e-15);
  EXPECT_NEAR(q->beta, -std::sqrt(2.0), 1e-15);
  EXPECT_FALSE(discrete_limit_point(1.0, plus(0), 0.0, 1.0));
}

TEST(DiscreteLimit, IsAHopfPointOfTwoDiscreteDelays) {
  // lambda + 1 - alpha e^(-lambda tau_alpha) - beta e^(-lambda tau) at lambda = i omega.
  for (const BranchId b : {minus(0), minus(1), plus(1)})
    for (double w = 0.1; w < 3.0; w += 0.1)
      if (auto p = discrete_limit_point(w, b, -0.4, 1.0)) {
        const cplx l(0.0, w);
        const cplx d = l + 1.0 + 0.4 * std::exp(-l) - p->beta * std::exp(-l * p->tau_beta);
        EXPECT_LT(std::abs(d), 1e-12);
      }
}

TEST(DiscreteLimit, ApproachedAsShapeGrows) {
  double prev = INFINITY;
  for (double m : {10.0, 30.0, 100.0, 300.0}) {
    double worst = 0.0;
    for (double w = 0.1; w <= 3.0; w += 0.05) {
      const auto c = curve_point(w, minus(0), -0.4, 1.0, m);
      const auto d = discrete_limit_point(w, minus(0), -0.4, 1.0);
      ASSERT_TRUE(c && d);
      worst = std::max(worst, std::hypot(c->beta - d->beta, c->tau_beta - d->tau_beta));
    }
    EXPECT_LT(worst, prev);
    prev = worst;
  }
}
