#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fdw/regularity_lab.hpp"
#include "fdw/verification/oracles.hpp"

using namespace fdw;
using std::numbers::pi;

namespace {

// a_n = n^-p on the interval, u1 = 0
ModeCoefficients critical_u0(const SpectralDomain& d, double p) { return power_decay(d, p); }

ModeCoefficients critical_u1(const SpectralDomain& d, double p) {
  ModeCoefficients c = power_decay(d, p);
  std::swap(c.a, c.b);
  return c;
}

}  // namespace

TEST(ThetaRange, BoundariesMatchFormulas) {
  for (double alpha : {1.1, 1.25, 1.5, 1.75, 1.9}) {
    const FracOrder o(alpha);
    struct Case {
      ThetaPurpose p;
      double lo, hi;
      bool closed;
    };
    const Case cases[] = {{ThetaPurpose::velocity_dual, (2 - alpha) / (2 * alpha), 0.5, true},
                          {ThetaPurpose::gradient, 0.0, 1 / (2 * alpha), false},
                          {ThetaPurpose::caputo_dual, (alpha - 1) / (2 * alpha), 0.5, false},
                          {ThetaPurpose::smooth_velocity, (2 - alpha) / (2 * alpha), 0.5, false},
                          {ThetaPurpose::identity_overlap, (alpha - 1) / (2 * alpha), 1 / (2 * alpha), false}};
    for (const Case& c : cases) {
      const ThetaRange r = ThetaRange::of(c.p, o);
      EXPECT_LT(r.lower, r.upper) << "empty range";
      EXPECT_FALSE(r.contains(c.lo));
      EXPECT_TRUE(r.contains(std::nextafter(c.lo, 1.0)));
      EXPECT_EQ(r.contains(c.hi), c.closed);
      EXPECT_TRUE(r.contains(std::nextafter(c.hi, 0.0)));
      EXPECT_TRUE(r.contains(r.midpoint()));
    }
  }
}

TEST(ThetaRange, ErrorNamesTheInterval) {
  try {
    ThetaRange::of(ThetaPurpose::velocity_dual, FracOrder(1.5)).require(0.1);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("velocity-dual"), std::string::npos);
    EXPECT_NE(msg.find("(0.16666666666666666, 0.5]"), std::string::npos) << msg;
  }
  const auto d = build_interval(1.0, 4);
  const auto c = single_mode(d, 1);
  const std::vector<double> t{0.1, 0.01};
  EXPECT_THROW(initial_convergence(d, c, FracOrder(1.5), 0.6, t), std::invalid_argument);
  EXPECT_THROW(l2_time_norms(d, c, FracOrder(1.5), 0.4, 0.3, 1.0, 64), std::invalid_argument);
  EXPECT_THROW(l2_time_norms(d, c, FracOrder(1.5), 0.2, 0.1, 1.0, 64), std::invalid_argument);
  EXPECT_THROW(smooth_data_velocity(d, c, FracOrder(1.5), 0.5, t), std::invalid_argument);
}

TEST(InitialConvergence, SingleModeErrorsVanish) {
  const auto d = build_interval(1.0, 8);
  const auto c = single_mode(d, 1);
  auto t = dyadic_times(4, 14);
  t.push_back(0.0);
  const auto tab = initial_convergence(d, c, FracOrder(1.5), 0.4, t);
  for (std::size_t i = 1; i < tab.rows.size(); ++i) {
    EXPECT_LT(tab.rows[i].err_h10, tab.rows[i - 1].err_h10);
    EXPECT_LT(tab.rows[i].err_velocity, tab.rows[i - 1].err_velocity);
  }
  EXPECT_EQ(tab.rows.back().err_h10, 0.0);
  EXPECT_EQ(tab.rows.back().err_velocity, 0.0);
  EXPECT_LE(tab.rows[tab.rows.size() - 2].err_h10, 1e-4);
  // smooth data: velocity error behaves like lambda t^(alpha-1) / Gamma(alpha)
  EXPECT_NEAR(tab.velocity_slope, 0.5, 0.05);
}

TEST(InitialConvergence, SequenceValidation) {
  const auto d = build_interval(1.0, 2);
  const auto c = single_mode(d, 1);
  EXPECT_THROW(initial_convergence(d, c, FracOrder(1.5), 0.4, std::vector<double>{0.1, 0.2}), std::invalid_argument);
  EXPECT_THROW(initial_convergence(d, c, FracOrder(1.5), 0.4, std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(initial_convergence(d, c, FracOrder(1.5), 0.4, std::vector<double>{-1.0}), std::invalid_argument);
}

TEST(InitialConvergence, CriticalDataFollowsEnvelopeExponent) {
  const double alpha = 1.5, theta = 0.4;
  const auto d = build_interval(1.0, 1024);
  const auto tab = initial_convergence(d, critical_u0(d, 1.52), FracOrder(alpha), theta, dyadic_times(4, 14));
  EXPECT_NEAR(tab.velocity_slope, (alpha - 2 + 2 * alpha * theta) / 2, 0.1);
  // error / envelope stays bounded along the sequence
  const double first = tab.rows.front().err_velocity / tab.rows.front().envelope;
  const double last = tab.rows.back().err_velocity / tab.rows.back().envelope;
  EXPECT_LT(last, 2 * first);
}

TEST(UniformBound, FirstModeSupIsPi) {
  const auto d = build_interval(1.0, 4);
  const TimeGrid g(1.0, 200);
  const ModeEvolution ev(FracOrder(1.5), d.eigenvalues(), g.nodes());
  const auto s = sup_norms(d, single_mode(d, 1), ev, 0.4);
  EXPECT_NEAR(s.h10, pi, 1e-14);
  // |E_{alpha,1}(-x)| <= 1 checked against the multiprecision oracle
  oracle::MLReference e(1.5, 1.0);
  for (double x : {0.1, 1.0, 5.0, 20.0, 80.0}) EXPECT_LE(std::fabs(e(-x)), 1.0);
}

TEST(UniformBound, ScalingInvarianceAndEnsemble) {
  const auto d = build_interval(1.0, 32);
  std::vector<ModeCoefficients> ens, scaled;
  for (int k = 0; k < 50; ++k) {
    ens.push_back(random_decay(d, 2.0, 7, k));
    scaled.push_back(ens.back().scaled(10.0));
  }
  ens.push_back(ModeCoefficients{std::vector<double>(32), std::vector<double>(32), {}, {}});
  const TimeGrid g(1.0, 64);
  const auto a = uniform_bound_report(d, ens, FracOrder(1.5), 0.4, g);
  const auto b = uniform_bound_report(d, scaled, FracOrder(1.5), 0.4, g);
  ASSERT_EQ(a.size(), 50u);  // zero draw skipped
  double lo = INFINITY, hi = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_NEAR(a[k].ratio(), b[k].ratio(), 1e-12 * a[k].ratio());
    lo = std::min(lo, a[k].ratio());
    hi = std::max(hi, a[k].ratio());
  }
  EXPECT_TRUE(std::isfinite(hi));
  EXPECT_GT(lo, 0);
}

TEST(GradedMesh, SingularIntegral) {
  // int_0^1 t^-0.6 dt = 2.5
  const auto t = graded_mesh(1.0, 256);
  std::vector<double> f;
  for (double x : t) f.push_back(x > 0 ? std::pow(x, -0.6) : INFINITY);
  EXPECT_NEAR(singular_time_integral(t, f), 2.5, 1e-12);
  // smooth integrand: int_0^1 cos t = sin 1
  std::vector<double> g;
  for (double x : t) g.push_back(std::cos(x));
  EXPECT_NEAR(singular_time_integral(t, g), std::sin(1.0), 1e-5);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.0);
  EXPECT_NEAR(t[1], 1.0 / (256.0 * 256.0), 1e-20);
}

TEST(L2TimeNorms, ZeroDataAndRefinementStability) {
  const auto d = build_interval(1.0, 8);
  const auto z = l2_time_norms(d, ModeCoefficients{std::vector<double>(8), std::vector<double>(8), {}, {}}, FracOrder(1.5), 0.2,
                               0.3, 1.0, 64);
  EXPECT_EQ(z.gradient.value, 0.0);
  EXPECT_EQ(z.caputo.value, 0.0);
  const auto c = single_mode(d, 1);
  const auto a = l2_time_norms(d, c, FracOrder(1.5), 0.2, 0.3, 1.0, 256);
  const auto b = l2_time_norms(d, c, FracOrder(1.5), 0.2, 0.3, 1.0, 512);
  EXPECT_LT(std::fabs(a.gradient.value / b.gradient.value - 1), 1e-2);
  EXPECT_LT(std::fabs(a.caputo.value / b.caputo.value - 1), 1e-2);
  EXPECT_EQ(a.gradient.estimate, "L2-in-time gradient estimate");
}

TEST(L2TimeNorms, FirstModeAgainstQuadrature) {
  // ||grad u||^2_{L2(D(A^theta))} = lambda^(1+2 theta) int_0^T E(-lambda t^alpha)^2 dt
  const auto d = build_interval(1.0, 2);
  const double alpha = 1.5, theta = 0.2, lam = pi * pi;
  const auto r = l2_time_norms(d, single_mode(d, 1), FracOrder(alpha), theta, 0.3, 1.0, 1024);
  oracle::MLReference e(alpha, 1.0);
  const quad::Rule q = quad::composite_gauss(0.0, 1.0, 64, 8);
  double s = 0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(e(-lam * std::pow(q.nodes[i], alpha)), 2);
  EXPECT_NEAR(r.gradient.value, std::sqrt(std::pow(lam, 1 + 2 * theta) * s), 1e-5 * r.gradient.value);
}

TEST(L2TimeNorms, IntegrandExponents) {
  const double alpha = 1.5;
  const auto d = build_interval(1.0, 4096);
  const auto c = critical_u0(d, 1.52);
  const double tg = 0.25, tc = 0.3;
  EXPECT_NEAR(integrand_slope(d, c, FracOrder(alpha), Integrand::gradient, tg, 1e-4, 1e-2), -2 * alpha * tg, 0.1);
  EXPECT_NEAR(integrand_slope(d, c, FracOrder(alpha), Integrand::caputo, tc, 1e-4, 1e-2), alpha * (2 * tc - 1), 0.1);
}

TEST(L2TimeNorms, CriticalCaputoRates) {
  const auto d = build_interval(1.0, 4096);
  for (double alpha : {1.25, 1.75}) {
    const auto r0 = caputo_critical_rate(d, critical_u0(d, 1.52), FracOrder(alpha), DataTarget::u0);
    EXPECT_NEAR(r0.slope, r0.expected, 0.1) << alpha;
    const auto r1 = caputo_critical_rate(d, critical_u1(d, 0.52), FracOrder(alpha), DataTarget::u1);
    EXPECT_NEAR(r1.slope, r1.expected, 0.1) << alpha;
  }
  EXPECT_THROW(caputo_critical_rate(d, random_decay(d, 2.0, 1), FracOrder(1.5), DataTarget::u0), std::invalid_argument);
}

TEST(SmoothDataVelocity, FirstModeAndSecondModeVelocity) {
  const auto d = build_interval(1.0, 8);
  const auto t = dyadic_times(4, 14);
  const auto tab = smooth_data_velocity(d, single_mode(d, 1), FracOrder(1.5), 0.3, t);
  for (std::size_t i = 1; i < tab.rows.size(); ++i) EXPECT_LT(tab.rows[i].err_velocity, tab.rows[i - 1].err_velocity);
  EXPECT_LT(tab.rows.back().err_velocity, 0.2);
  // u1 = e2: error = |E_{alpha,1}(-lambda_2 t^alpha) - 1|
  const auto tab2 = smooth_data_velocity(d, single_mode(d, 2, DataTarget::u1), FracOrder(1.5), 0.3, t);
  for (const auto& r : tab2.rows)
    EXPECT_NEAR(r.err_velocity, std::fabs(mittag_leffler({1.5, 1.0}, -4 * pi * pi * std::pow(r.t, 1.5)) - 1), 1e-14);
}

TEST(SmoothDataVelocity, CriticalDataExponent) {
  const double alpha = 1.5, eps = 0.3;
  const auto d = build_interval(1.0, 4096);
  const auto tab = smooth_data_velocity(d, critical_u0(d, 1.5 + 2 * eps + 0.05), FracOrder(alpha), eps, dyadic_times(4, 14));
  EXPECT_NEAR(tab.velocity_slope, (alpha - 2 + 2 * alpha * eps) / 2, 0.1);
  // data outside D(A^(1/2+eps)): partial sums do not stabilize
  EXPECT_THROW(smooth_data_velocity(d, critical_u0(d, 1.5), FracOrder(alpha), eps, dyadic_times(4, 6)), std::invalid_argument);
}

TEST(VelocityBlowup, Exponents) {
  const auto d = build_interval(1.0, 4);
  for (double alpha : {1.25, 1.5, 1.75}) {
    const auto f = velocity_blowup_rate(d, single_mode(d, 1), FracOrder(alpha));
    EXPECT_NEAR(f.exponent, alpha - 1, 0.05);
    EXPECT_FALSE(f.multi_mode_warning);
  }
  auto two = single_mode(d, 1);
  two.a[2] = 0.5;
  EXPECT_TRUE(velocity_blowup_rate(d, two, FracOrder(1.5)).multi_mode_warning);
  EXPECT_THROW(velocity_blowup_rate(d, single_mode(d, 1, DataTarget::u1), FracOrder(1.5)), std::invalid_argument);
}

TEST(NormReport, JsonAndCsv) {
  const NormReport r{"q", "tag", 1.5, 0.4, NAN, 1.0, 8, 64, 2.0, 4.0};
  EXPECT_DOUBLE_EQ(r.ratio(), 0.5);
  const nlohmann::json j = r;
  EXPECT_TRUE(j.at("beta").is_null());
  EXPECT_EQ(j.at("ratio"), 0.5);
  std::stringstream ss;
  write_reports_csv(ss, std::vector<NormReport>{r});
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  EXPECT_EQ(header.substr(0, 17), "quantity,estimate");
  EXPECT_EQ(row.substr(0, 6), "q,tag,");
}
