#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ddestab/classifier.hpp"
#include "ddestab/errors.hpp"

using namespace ddestab;
using std::numbers::pi;

namespace {
Verdict V(VerdictKind k, Reason r) { return {k, r}; }
}  // namespace

TEST(ClassifyPoint, Examples) {
  EXPECT_EQ(classify_point(0.2, 5.0, 0.3, 1.0, 2.0), V(VerdictKind::Stable, Reason::AbsTest));
  EXPECT_EQ(classify_point(1.5, 1.0, 0.3, 1.0, 2.0), V(VerdictKind::Unstable, Reason::SumTest));
  // The omega = 1 Hopf point of branch (-, 0) for alpha = 0, m = 2.
  const double beta = -std::sqrt(2.0) / std::pow(std::cos(3.0 * pi / 8.0), 2);
  const double tau = 2.0 * std::tan(3.0 * pi / 8.0);
  EXPECT_EQ(classify_point(beta, tau, 0.0, 1.0, 2.0).kind(), VerdictKind::Boundary);
  EXPECT_EQ(classify_point(beta, tau, 0.0, 1.0, 2.0).reason(), Reason::HopfCurve);
  EXPECT_EQ(classify_point(0.7, 2.0, 0.3, 1.0, 2.0), V(VerdictKind::Boundary, Reason::ZeroRootLine));
  EXPECT_THROW(classify_point(0.0, 0.0, 0.3, 1.0, 2.0), DomainError);
}

TEST(ClassifyPoint, NeverUndetermined) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ub(-6.0, 3.0), ut(0.05, 8.0);
  for (int i = 0; i < 60; ++i)
    EXPECT_NE(classify_point(ub(rng), ut(rng), -0.4, 1.0, 3.0).kind(), VerdictKind::Undetermined);
}

TEST(Classifier, VerdictCountAgreement) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ub(-5.0, 2.0), ut(0.05, 6.0);
  const double alphas[] = {-0.4, 0.3, 0.5};
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const double alpha = alphas[i % 3];
    const double m = 1.0 + (i / 3) % 3;
    const double beta = ub(rng), tau = ut(rng);
    const Verdict v = shared_classifier(alpha, 1.0, m)->classify(beta, tau);
    if (v.kind() == VerdictKind::Boundary) continue;
    const int n =
        count_roots_right_of(0.0, ModelParams::with_mean_delay(alpha, 1.0, beta, m, tau)).count;
    ASSERT_EQ(v.kind() == VerdictKind::Stable, n == 0) << alpha << " " << m << " " << beta << " " << tau;
    ++checked;
  }
  EXPECT_GT(checked, 290);
}

TEST(Classifier, DistanceToHopf) {
  const StabilityClassifier c(0.0, 1.0, 2.0);
  const double beta = -std::sqrt(2.0) / std::pow(std::cos(3.0 * pi / 8.0), 2);
  const double tau = 2.0 * std::tan(3.0 * pi / 8.0);
  EXPECT_LT(c.distance_to_hopf(beta, tau), 1e-9);
  EXPECT_NEAR(c.distance_to_hopf(beta + 0.01, tau), 0.01, 0.005);
  EXPECT_GT(c.distance_to_hopf(0.5, 1.0), 0.1);
}

TEST(ClassifyGrid, InstabilityHalfPlane) {
  const auto g = classify_grid({-2.0, 2.0}, {0.1, 5.0}, {50, 50}, {0.5, 1.0, 3.0});
  ASSERT_EQ(g.verdicts.size(), 2500u);
  ASSERT_EQ(g.beta_axis.size(), 50u);
  ASSERT_EQ(g.tau_axis.size(), 50u);
  for (std::size_t it = 0; it < 50; ++it) {
    int right_stable = -1;
    for (std::size_t ib = 0; ib < 50; ++ib) {
      const Verdict& v = g.at(it, ib);
      if (g.beta_axis[ib] > 0.5) EXPECT_EQ(v.kind(), VerdictKind::Unstable);
      if (v.kind() == VerdictKind::Stable) right_stable = static_cast<int>(ib);
    }
    // Column 30 sits at beta = -2 + 30 * 4/49, the last one left of 1 - alpha.
    EXPECT_EQ(right_stable, 30) << "row " << it;
  }
}

TEST(ClassifyGrid, AbsTestStrip) {
  const auto g = classify_grid({-2.0, 2.0}, {0.1, 5.0}, {40, 20}, {0.3, 1.0, 3.0}, 2);
  for (std::size_t it = 0; it < g.tau_axis.size(); ++it)
    for (std::size_t ib = 0; ib < g.beta_axis.size(); ++ib) {
      const double b = g.beta_axis[ib];
      if (std::abs(b) < 0.7) EXPECT_EQ(g.at(it, ib).kind(), VerdictKind::Stable);
      if (b + 0.3 > 1.0) EXPECT_EQ(g.at(it, ib).kind(), VerdictKind::Unstable);
    }
}

TEST(ClassifyGrid, MonotoneRefinementAndDeterminism) {
  const CurveBase base{-0.4, 1.0, 3.0};
  const auto coarse = classify_grid({-4.0, 1.5}, {0.1, 8.0}, {9, 9}, base);
  const auto fine = classify_grid({-4.0, 1.5}, {0.1, 8.0}, {17, 17}, base, 3);
  for (std::size_t it = 0; it < 9; ++it)
    for (std::size_t ib = 0; ib < 9; ++ib) {
      ASSERT_EQ(coarse.beta_axis[ib], fine.beta_axis[2 * ib]);
      ASSERT_EQ(coarse.tau_axis[it], fine.tau_axis[2 * it]);
      EXPECT_EQ(coarse.at(it, ib), fine.at(2 * it, 2 * ib));
    }
  const auto again = classify_grid({-4.0, 1.5}, {0.1, 8.0}, {9, 9}, base, 4);
  EXPECT_EQ(again.verdicts, coarse.verdicts);
}

TEST(ClassifyGrid, RejectsBadInput) {
  EXPECT_THROW(classify_grid({-1.0, 1.0}, {0.1, 1.0}, {1, 5}, {0.3, 1.0, 2.0}), DomainError);
  EXPECT_THROW(classify_grid({-1.0, 1.0}, {0.0, 1.0}, {3, 3}, {0.3, 1.0, 2.0}), DomainError);
}

TEST(Linspace, Endpoints) {
  const auto v = linspace(0.1, 5.0, 50);
  EXPECT_EQ(v.front(), 0.1);
  EXPECT_EQ(v.back(), 5.0);
  EXPECT_EQ(linspace(2.0, 3.0, 1), std::vector<double>{2.0});
}

TEST(SwitchingProfile, EmptyUnderAbsTest) {
  EXPECT_TRUE(switching_profile(-0.5, {0.1, 20.0}, {0.3, 1.0, 3.0}).empty());
  EXPECT_TRUE(switching_profile(0.2, {0.1, 20.0}, {-0.4, 1.0, 3.0}).empty());
}

TEST(SwitchingProfile, MatchesCurveIntersections) {
  const CurveBase base{-0.4, 1.0, 3.0};
  const double beta = -8.0;
  const Interval range{0.1, 30.0};
  const auto events = switching_profile(beta, range, base);

  // Independent intersection count from freshly traced curves.
  int crossings = 0;
  for (const BranchId b : candidate_branches(base.m)) {
    TraceOptions o;
    o.beta_limit = 50.0;
    o.tau_limit = 100.0;
    for (const auto& seg : trace_curve_segments(b, base, {1e-6, 60.0}, o))
      for (std::size_t i = 0; i + 1 < seg.size(); ++i)
        if ((seg[i].beta - beta) * (seg[i + 1].beta - beta) < 0.0) {
          const double t = 0.5 * (seg[i].tau_beta + seg[i + 1].tau_beta);
          if (t > range.lo && t < range.hi) ++crossings;
        }
  }
  EXPECT_GT(crossings, 0);
  EXPECT_EQ(static_cast<int>(events.size()), crossings);

  int total = 0;
  const auto count_at = [&](double tau) {
    return count_roots_right_of(0.0, ModelParams::with_mean_delay(base.alpha, base.tau_alpha, beta,
                                                                  base.m, tau))
        .count;
  };
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    EXPECT_EQ(std::abs(e.count_after - e.count_before), 2);
    if (i > 0) {
      EXPECT_GT(e.tau_beta, events[i - 1].tau_beta);
      EXPECT_EQ(e.count_before, events[i - 1].count_after);
    }
    total += e.count_after - e.count_before;
    EXPECT_GE(e.count_after, 0);
  }
  EXPECT_EQ(total, count_at(range.hi) - count_at(range.lo));
}

TEST(SwitchingProfile, ParityOnRandomLines) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ub(-8.0, 0.69);
  for (int i = 0; i < 6; ++i) {
    const double beta = ub(rng);
    const CurveBase base{0.3, 1.0, 2.0 + i % 3};
    const auto ev = switching_profile(beta, {0.1, 15.0}, base);
    int cum = 0;
    for (const auto& e : ev) {
      const int d = e.count_after - e.count_before;
      EXPECT_TRUE(std::abs(d) == 1 || std::abs(d) == 2);
      cum += d;
    }
    const auto c = [&](double tau) {
      return count_roots_right_of(0.0, ModelParams::with_mean_delay(0.3, 1.0, beta, base.m, tau)).count;
    };
    EXPECT_EQ(cum, c(15.0) - c(0.1));
  }
}
