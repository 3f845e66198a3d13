#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fdw/mittag_leffler.hpp"
#include "fdw/verification/oracles.hpp"

using namespace fdw;

namespace {

// error relative to the local amplitude of the reference near z
double local_error(oracle::MLReference& ref, double value, double z) {
  const double r = ref(z);
  const double amp = std::max({std::fabs(r), std::fabs(ref(0.95 * z)), std::fabs(ref(1.05 * z))});
  return std::fabs(value - r) / amp;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(lo * std::pow(hi / lo, i / double(count - 1)));
  return v;
}

}  // namespace

TEST(Gamma, Examples) {
  EXPECT_DOUBLE_EQ(fdw::gamma(1.0), 1.0);
  EXPECT_NEAR(fdw::gamma(0.5), std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_DOUBLE_EQ(fdw::gamma(5.0), 24.0);
}

TEST(Gamma, PolesAreDomainErrors) {
  EXPECT_THROW(fdw::gamma(0.0), std::domain_error);
  EXPECT_THROW(fdw::gamma(-3.0), std::domain_error);
  EXPECT_EQ(rgamma(-2.0L), 0.0L);
  EXPECT_EQ(rgamma(0.0L), 0.0L);
  EXPECT_NEAR(fdw::gamma(-0.5), -2 * std::sqrt(std::numbers::pi), 1e-14);
}

TEST(Gamma, MatchesMultiprecisionOracle) {
  double worst = 0;
  for (double x : log_grid(1e-3, 170.0, 400)) {
    const double ref = static_cast<double>(oracle::gamma_mp(x));
    worst = std::max(worst, std::fabs(fdw::gamma(x) - ref) / ref);
  }
  EXPECT_LE(worst, 1e-13);
}

TEST(MittagLeffler, ParamsValidated) {
  EXPECT_THROW(MLParams(0.0, 1.0), std::domain_error);
  EXPECT_THROW(MLParams(2.1, 1.0), std::domain_error);
  EXPECT_THROW(MLParams(1.5, 0.0), std::domain_error);
  EXPECT_THROW(MLParams(1.5, NAN), std::invalid_argument);
}

TEST(MittagLeffler, ElementaryCases) {
  for (double x : {-1.0, 0.0, 1.0}) EXPECT_NEAR(mittag_leffler({1, 1}, x), std::exp(x), 1e-15 * std::exp(x));
  EXPECT_NEAR(mittag_leffler({2, 1}, -std::numbers::pi * std::numbers::pi / 4), 0.0, 1e-15);
  EXPECT_NEAR(mittag_leffler({2, 2}, -std::numbers::pi * std::numbers::pi), 0.0, 1e-12);
}

TEST(MittagLeffler, FrozenOracleValue) {
  // 100-digit series: E_{1.5,1}(-5) = -0.3000820504131308808020...
  oracle::MLReference ref(1.5, 1.0);
  EXPECT_NEAR(ref(-5.0), -0.30008205041313088, 1e-16);
  EXPECT_NEAR(mittag_leffler({1.5, 1}, -5.0), -0.30008205041313088, 1e-14);
  EXPECT_NEAR(mittag_leffler({1.25, 1.25}, -5.0), -0.011221917717320391, 1e-15);
}

TEST(MittagLeffler, ZeroArgumentIsReciprocalGamma) {
  for (double b : {0.3, 1.0, 1.5, 2.0, 3.7}) EXPECT_NEAR(mittag_leffler({1.5, b}, 0.0), 1.0 / std::tgamma(b), 1e-13);
}

TEST(MittagLeffler, RangeErrorBeyondCap) {
  EXPECT_THROW(mittag_leffler({1.5, 1}, -1.1e8), std::range_error);
  EXPECT_THROW(mittag_leffler({0.5, 1}, 60.0), std::range_error);  // exp(3600) overflows
  EXPECT_NO_THROW(mittag_leffler({1.5, 1}, -1e8));
}

struct OracleCase {
  double alpha, beta;
};

class MLvsOracle : public ::testing::TestWithParam<OracleCase> {};

TEST_P(MLvsOracle, NegativeAxis) {
  const auto [alpha, beta] = GetParam();
  oracle::MLReference ref(alpha, beta);
  double near = 0, far = 0;
  for (double x : log_grid(1e-3, 1e6, 70)) {
    const double e = local_error(ref, mittag_leffler({alpha, beta}, -x), -x);
    (x <= 50 ? near : far) = std::max(x <= 50 ? near : far, e);
  }
  EXPECT_LE(near, 1e-10) << "alpha=" << alpha << " beta=" << beta;
  EXPECT_LE(far, 1e-8) << "alpha=" << alpha << " beta=" << beta;
}

TEST_P(MLvsOracle, PositiveAxis) {
  const auto [alpha, beta] = GetParam();
  if (alpha == 2) GTEST_SKIP() << "alpha = 2 on the positive axis uses the series only";
  oracle::MLReference ref(alpha, beta);
  double worst = 0;
  for (double x : log_grid(1e-3, 50, 30)) worst = std::max(worst, local_error(ref, mittag_leffler({alpha, beta}, x), x));
  EXPECT_LE(worst, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Grid, MLvsOracle,
                         ::testing::Values(OracleCase{0.6, 1.0}, OracleCase{1.0, 0.7}, OracleCase{1.0, 2.0},
                                           OracleCase{1.25, 1.0}, OracleCase{1.25, 1.25}, OracleCase{1.5, 1.0},
                                           OracleCase{1.5, 2.0}, OracleCase{1.5, 1.5}, OracleCase{1.75, 1.0},
                                           OracleCase{1.75, 3.5}, OracleCase{1.99, 1.0}, OracleCase{2.0, 1.0},
                                           OracleCase{2.0, 2.0}));

TEST(MittagLeffler, RegimeConsistencyAtSeriesSwitch) {
  for (double alpha : {1.1, 1.25, 1.5, 1.75, 1.95})
    for (double beta : {1.0, 2.0, alpha, 0.4})
      for (double x = 8.0; x <= 12.0; x += 0.25) {
        const MLParams p(alpha, beta);
        const double s = mittag_leffler_in(p, -x, MLRegime::series);
        const double c = mittag_leffler_in(p, -x, MLRegime::contour);
        EXPECT_LE(std::fabs(s - c), 1e-8 * std::max(std::fabs(s), 1.0 / (1 + x))) << alpha << " " << beta << " " << x;
      }
}

TEST(MittagLeffler, RegimeConsistencyAtAsymptoticSwitch) {
  for (double alpha : {0.6, 1.25, 1.5, 1.75, 2.0})
    for (double beta : {1.0, 2.0, alpha})
      for (double s = 36.0; s <= 46.0; s += 1.0) {
        const double x = std::pow(s, alpha);
        const MLParams p(alpha, beta);
        const double a = mittag_leffler_in(p, -x, MLRegime::asymptotic);
        const double c = mittag_leffler_in(p, -x, MLRegime::contour);
        EXPECT_LE(std::fabs(a - c), 1e-8 * std::max(std::fabs(c), 1.0 / (1 + x))) << alpha << " " << beta << " " << x;
      }
}

TEST(MittagLeffler, RecurrenceProperty) {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> ua(1.01, 1.99), ub(0.2, 3.0), ulz(-3.0, 7.0);
  for (int i = 0; i < 300; ++i) {
    const double a = ua(eng), b = ub(eng), z = -std::pow(10.0, ulz(eng));
    const double lhs = mittag_leffler({a, b}, z);
    const double zt = z * mittag_leffler({a, a + b}, z);
    const double c = 1.0 / std::tgamma(b);
    const double scale = std::max({std::fabs(lhs), std::fabs(zt), std::fabs(c)});
    EXPECT_LE(std::fabs(lhs - zt - c), 1e-9 * scale) << a << " " << b << " " << z;
  }
}

TEST(DecayBound, Examples) {
  std::vector<double> z;
  for (int k = 0; k <= 20; ++k) z.push_back(-std::exp2(k));
  const BoundFit f = verify_decay_bound({1.5, 1.0}, z);
  EXPECT_TRUE(std::isfinite(f.c_empirical));
  EXPECT_GT(f.c_empirical, 0);
  EXPECT_FALSE(f.violated());
  EXPECT_EQ(f.sample_count, 21u);
  EXPECT_GT(f.mu, 0.75 * std::numbers::pi);
  EXPECT_LT(f.mu, std::numbers::pi);

  const BoundFit g = verify_decay_bound({1.25, 1.25}, z);
  EXPECT_TRUE(std::isfinite(g.c_empirical));
  EXPECT_FALSE(g.violated());
}

TEST(DecayBound, Preconditions) {
  const std::vector<double> z{-1.0, -2.0};
  EXPECT_THROW(verify_decay_bound({2.0, 1.0}, z), std::domain_error);
  EXPECT_THROW(verify_decay_bound({1.5, 1.0}, std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(verify_decay_bound({1.5, 1.0}, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(DecayBound, UnboundedGrowthIsFlagged) {
  // near alpha = 2 the oscillation decays too slowly to show up before 2^14,
  // so |E_{1.999,1}(-x)|(1+x) keeps growing over the sampled ranges
  std::vector<double> z;
  for (int k = 0; k <= 14; ++k) z.push_back(-std::exp2(k));
  const BoundFit f = verify_decay_bound({1.999, 1.0}, z);
  EXPECT_TRUE(f.violated());
}

TEST(MaxRatio, ClosedForm) {
  auto r = max_ratio(0.5);
  EXPECT_DOUBLE_EQ(r.argmax, 1.0);
  EXPECT_DOUBLE_EQ(r.value, 0.5);
  r = max_ratio(0.25);
  EXPECT_NEAR(r.argmax, 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(r.value, std::pow(0.25, 0.25) * std::pow(0.75, 0.75), 1e-16);
  EXPECT_THROW(max_ratio(0.0), std::domain_error);
  EXPECT_THROW(max_ratio(1.0), std::domain_error);
}

TEST(MaxRatio, GoldenSectionOracle) {
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 50; ++i) {
    const double b = u(eng);
    const MaxRatio r = max_ratio(b);
    const auto g = oracle::golden_section_max([b](const oracle::Real50& x) { return pow(x, b) / (1 + x); }, 0.0, 10 * r.argmax);
    EXPECT_NEAR(g.argmax, r.argmax, 1e-10 * std::max(1.0, r.argmax));
    EXPECT_NEAR(g.value, r.value, 1e-10);
    EXPECT_NEAR(max_ratio_objective(b, r.argmax), r.value, 1e-14);
  }
}
