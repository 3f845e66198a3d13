#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "fdw/fracops.hpp"

using namespace fdw;

namespace {

// I^beta f(t) by double-exponential quadrature of the weakly singular kernel
double riemann_liouville(const std::function<double(double)>& f, double beta, double t) {
  if (t == 0) return 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  const double v = ts.integrate([&](double s, double tc) { return std::pow(tc > 0 ? tc : t - s, beta - 1) * f(s); }, 0.0, t);
  return v / std::tgamma(beta);
}

SampledPath trig_path(const TimeGrid& g, std::mt19937_64& eng, int terms = 6) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> c(terms), ph(terms);
  for (int k = 0; k < terms; ++k) {
    c[k] = u(eng) / (1 + k);
    ph[k] = 3 * u(eng);
  }
  return SampledPath::from_function(g, [&](double t) {
    double s = 0;
    for (int k = 0; k < terms; ++k) s += c[k] * std::cos((k + 1) * std::numbers::pi * t / g.t_end() + ph[k]);
    return s;
  });
}

}  // namespace

TEST(TimeGrid, NodesAndValidation) {
  const TimeGrid g(2.0, 4);
  EXPECT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.step(), 0.5);
  EXPECT_DOUBLE_EQ(g.node(4), 2.0);
  EXPECT_EQ(g.refined().steps(), 8u);
  EXPECT_THROW(TimeGrid(0.0, 4), std::invalid_argument);
  EXPECT_THROW(TimeGrid(1.0, 1), std::invalid_argument);
}

TEST(SampledPath, ArithmeticAndCompatibility) {
  const TimeGrid g(1.0, 8);
  auto a = SampledPath::from_function(g, [](double t) { return t; });
  auto b = SampledPath::from_function(g, [](double t) { return 1 - t; });
  const auto s = a + b;
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_DOUBLE_EQ(s(i), 1.0);
  EXPECT_THROW(a += SampledPath(TimeGrid(1.0, 4)), std::invalid_argument);
  EXPECT_THROW(SampledPath(g, 2, HilbertNorm{{1.0}}), std::invalid_argument);
  EXPECT_THROW(SampledPath::from_function(g, [](double) { return NAN; }), std::invalid_argument);
}

TEST(FracIntegral, ConstantMatchesClosedForm) {
  for (double beta : {0.1, 0.25, 0.5, 0.9, 1.0}) {
    const TimeGrid g(1.0, 1024);
    const auto one = SampledPath::from_function(g, [](double) { return 1.0; });
    const auto i = frac_integral(one, beta);
    for (std::size_t n = 1; n < g.size(); n += 97) {
      const double t = g.node(n), exact = std::pow(t, beta) / std::tgamma(beta + 1);
      EXPECT_NEAR(i(n), exact, 1e-12 * exact) << beta;
    }
    EXPECT_EQ(i(0), 0.0);
  }
}

TEST(FracIntegral, LinearFunctionsAreExact) {
  // the scheme integrates the piecewise-linear interpolant exactly
  const double beta = 0.35;
  const TimeGrid g(2.0, 64);
  const auto f = SampledPath::from_function(g, [](double t) { return 3 - 2 * t; });
  const auto i = frac_integral(f, beta);
  for (std::size_t n = 1; n < g.size(); ++n) {
    const double t = g.node(n);
    const double exact = 3 * std::pow(t, beta) / std::tgamma(beta + 1) - 2 * std::pow(t, beta + 1) / std::tgamma(beta + 2);
    EXPECT_NEAR(i(n), exact, 1e-12);
  }
}

TEST(FracIntegral, SmoothFunctionAgainstQuadratureOracle) {
  const double beta = 0.4;
  const auto f = [](double t) { return std::sin(3 * t) + t * t; };
  double prev = 0;
  for (std::size_t m : {128, 256, 512}) {
    const TimeGrid g(1.5, m);
    const auto i = frac_integral(SampledPath::from_function(g, f), beta);
    double worst = 0;
    for (std::size_t n = 0; n < g.size(); n += m / 16) worst = std::max(worst, std::fabs(i(n) - riemann_liouville(f, beta, g.node(n))));
    EXPECT_LE(worst, 1e-3);
    if (prev > 0) {
      EXPECT_LE(worst / prev, 0.3);  // second order
    }
    prev = worst;
  }
}

TEST(FracIntegral, BetaOneIsCumulativeTrapezoid) {
  const TimeGrid g(1.0, 16);
  const auto f = SampledPath::from_function(g, [](double t) { return std::exp(t); });
  const auto i = frac_integral(f, 1.0);
  double acc = 0;
  for (std::size_t n = 1; n < g.size(); ++n) {
    acc += 0.5 * g.step() * (f(n - 1) + f(n));
    EXPECT_NEAR(i(n), acc, 1e-14);
  }
}

TEST(FracIntegral, OrderValidation) {
  const SampledPath f(TimeGrid(1.0, 4));
  EXPECT_THROW(frac_integral(f, 0.0), std::domain_error);
  EXPECT_THROW(frac_integral(f, 1.5), std::domain_error);
}

TEST(FracIntegral, InverseRoundTrip) {
  std::mt19937_64 eng(5);
  const TimeGrid g(1.0, 200);
  const auto f = trig_path(g, eng);
  const double init[] = {f(0)};
  const auto back = frac_integral_inverse(frac_integral(f, 0.3), 0.3, init);
  for (std::size_t n = 0; n < g.size(); ++n) EXPECT_NEAR(back(n), f(n), 1e-9);
}

TEST(FracIntegral, LinearityProperty) {
  std::mt19937_64 eng(9);
  const TimeGrid g(1.0, 128);
  for (int k = 0; k < 10; ++k) {
    const auto a = trig_path(g, eng), b = trig_path(g, eng);
    const auto lhs = frac_integral(2.5 * a + b, 0.6);
    const auto rhs = 2.5 * frac_integral(a, 0.6) + frac_integral(b, 0.6);
    EXPECT_LE(l2_norm(lhs - rhs), 1e-13 * l2_norm(rhs));
  }
}

TEST(FracIntegral, VectorPathActsComponentwise) {
  const TimeGrid g(1.0, 32);
  SampledPath v(g, 2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    v(i, 0) = 1.0;
    v(i, 1) = g.node(i);
  }
  const auto iv = frac_integral(v, 0.5);
  const auto i0 = frac_integral(v.component(0), 0.5), i1 = frac_integral(v.component(1), 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_DOUBLE_EQ(iv(i, 0), i0(i));
    EXPECT_DOUBLE_EQ(iv(i, 1), i1(i));
  }
}

TEST(Semigroup, HalfPlusHalfConvergesFirstOrder) {
  for (auto f : {std::function<double(double)>([](double) { return 1.0; }), std::function<double(double)>([](double t) { return t; })}) {
    const double e1 = semigroup_check(SampledPath::from_function(TimeGrid(1.0, 1024), f), 0.5, 0.5);
    const double e2 = semigroup_check(SampledPath::from_function(TimeGrid(1.0, 2048), f), 0.5, 0.5);
    EXPECT_LE(e1, 1e-2);
    EXPECT_LE(e2 / e1, 0.6);
  }
  EXPECT_THROW(semigroup_check(SampledPath(TimeGrid(1.0, 4)), 0.7, 0.5), std::invalid_argument);
  EXPECT_EQ(semigroup_check(SampledPath(TimeGrid(1.0, 4)), 0.2, 0.5), 0.0);
}

TEST(YoungBound, HoldsForRandomPaths) {
  std::mt19937_64 eng(21);
  for (double beta : {0.2, 0.5, 0.8}) {
    const TimeGrid g(3.0, 256);
    for (int k = 0; k < 10; ++k) EXPECT_TRUE(young_bound_check(trig_path(g, eng), beta).holds());
  }
  EXPECT_THROW(young_bound_check(SampledPath(TimeGrid(1.0, 4), 2), 0.5), std::invalid_argument);
}

TEST(Caputo, LinearAndQuadratic) {
  const double alpha = 1.5;
  const TimeGrid g(1.0, 1024);
  // f = t: f'' = 0 so the derivative vanishes identically
  const auto zero = caputo_derivative(SampledPath(g), alpha).values;
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LE(std::fabs(zero(i)), 1e-12);
  const auto two = SampledPath::from_function(g, [](double) { return 2.0; });
  const auto q = caputo_derivative(two, alpha);
  EXPECT_EQ(q.source, DerivativeSource::analytic);
  for (std::size_t i = 1; i < g.size(); i += 101) {
    const double t = g.node(i), exact = 2 * std::pow(t, 2 - alpha) / std::tgamma(3 - alpha);
    EXPECT_NEAR(q.values(i), exact, 1e-3 * exact);
  }
  EXPECT_THROW(caputo_derivative(two, 2.0), std::domain_error);
}

TEST(Caputo, FromVelocityMatchesQuadratic) {
  const double alpha = 1.3;
  const TimeGrid g(1.0, 512);
  const auto v = SampledPath::from_function(g, [](double t) { return 2 * t; });
  const auto c = caputo_from_velocity(v, alpha);
  for (std::size_t i = 1; i < g.size(); i += 37) {
    const double t = g.node(i), exact = 2 * std::pow(t, 2 - alpha) / std::tgamma(3 - alpha);
    EXPECT_NEAR(c(i), exact, 1e-12 * exact);  // f'' constant: scheme is exact
  }
}

TEST(Caputo, FiniteDifferenceSourceConverges) {
  const double alpha = 1.6;
  const auto f = [](double t) { return std::exp(t); };
  const double exact = riemann_liouville(f, 2 - alpha, 1.0);
  double prev = 0;
  for (std::size_t m : {256, 512, 1024}) {
    const TimeGrid g(1.0, m);
    const auto c = caputo_derivative(second_difference(SampledPath::from_function(g, f)), alpha, DerivativeSource::finite_difference);
    EXPECT_EQ(c.source, DerivativeSource::finite_difference);
    const double err = std::fabs(c.values(m) - exact);
    if (prev > 0) {
      EXPECT_LE(err, 0.6 * prev);
    }
    prev = err;
  }
  EXPECT_LE(prev, 1e-3);
}

TEST(Caputo, LowOrder) {
  const TimeGrid g(1.0, 256);
  const auto one = SampledPath::from_function(g, [](double) { return 1.0; });
  const auto c = caputo_derivative_low(one, 0.5);  // derivative of t
  EXPECT_NEAR(c(g.steps()), 1.0 / std::tgamma(1.5), 1e-12);
  EXPECT_THROW(caputo_derivative_low(one, 1.2), std::domain_error);
}

TEST(Gagliardo, LinearFunctionClosedForm) {
  // [t]^2 over (0,T) = 2 T^(3-2b) / ((2-2b)(3-2b))
  for (double beta : {0.1, 0.25, 0.5, 0.75}) {
    const double T = 1.7;
    const double exact = std::sqrt(2 * std::pow(T, 3 - 2 * beta) / ((2 - 2 * beta) * (3 - 2 * beta)));
    const auto v = SampledPath::from_function(TimeGrid(T, 256), [](double t) { return t; });
    EXPECT_NEAR(gagliardo_seminorm(v, beta), exact, 1e-4 * exact) << beta;
  }
}

TEST(Gagliardo, QuadraticAgainstNestedQuadrature) {
  // [t^2]^2 = int int |t+s|^2 |t-s|^(1-2b): oracle by nested tanh-sinh
  const double beta = 0.3;
  boost::math::quadrature::tanh_sinh<double> ts;
  const double oracle = 2 * ts.integrate([&](double t) {
    return ts.integrate([&](double s) { return (t + s) * (t + s) * std::pow(t - s, 1 - 2 * beta); }, 0.0, t);
  }, 0.0, 1.0);
  const auto v = SampledPath::from_function(TimeGrid(1.0, 512), [](double t) { return t * t; });
  EXPECT_NEAR(gagliardo_seminorm(v, beta), std::sqrt(oracle), 1e-3 * std::sqrt(oracle));
}

TEST(Gagliardo, ConstantsAndValidation) {
  const auto c = SampledPath::from_function(TimeGrid(1.0, 32), [](double) { return 4.0; });
  EXPECT_EQ(gagliardo_seminorm(c, 0.5), 0.0);
  EXPECT_THROW(gagliardo_seminorm(c, 1.0), std::domain_error);
  EXPECT_THROW(gagliardo_seminorm(c, 0.0), std::domain_error);
}

TEST(Gagliardo, WeightedNormScalesComponents) {
  const TimeGrid g(1.0, 64);
  SampledPath v(g, 2, HilbertNorm{{4.0, 0.0}});
  for (std::size_t i = 0; i < g.size(); ++i) {
    v(i, 0) = std::sin(g.node(i));
    v(i, 1) = 100 * g.node(i);
  }
  EXPECT_NEAR(gagliardo_seminorm(v, 0.4), 2 * gagliardo_seminorm(v.component(0), 0.4), 1e-12);
}

TEST(NormEquivalence, BracketStableUnderRefinement) {
  std::mt19937_64 e1(42), e2(42);
  std::vector<SampledPath> coarse, fine;
  for (int k = 0; k < 20; ++k) {
    coarse.push_back(trig_path(TimeGrid(1.0, 256), e1));
    fine.push_back(trig_path(TimeGrid(1.0, 512), e2));
  }
  const auto a = norm_equivalence_study(coarse, 0.25), b = norm_equivalence_study(fine, 0.25);
  EXPECT_EQ(a.evaluated, 20u);
  EXPECT_LT(a.spread(), 100);
  EXPECT_LT(std::max(a.ratio_max / b.ratio_max, b.ratio_max / a.ratio_max), 2);
  EXPECT_LT(std::max(a.ratio_min / b.ratio_min, b.ratio_min / a.ratio_min), 2);
  std::vector<SampledPath> zero{SampledPath(TimeGrid(1.0, 8))};
  EXPECT_EQ(norm_equivalence_study(zero, 0.25).skipped, 1u);
}

TEST(Csv, RoundTrip) {
  std::mt19937_64 eng(1);
  SampledPath p(TimeGrid(0.75, 10), 2);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p(i, 0) = std::ldexp(static_cast<double>(eng() >> 11), -53);
    p(i, 1) = -std::exp(static_cast<double>(i));
  }
  std::stringstream ss;
  write_csv(ss, p);
  const auto q = read_csv(ss);
  EXPECT_EQ(q.grid(), p.grid());
  EXPECT_EQ(q.data(), p.data());
  std::stringstream bad("t,v0\n0,1\n0.1,2\n0.3,3\n");
  EXPECT_THROW(read_csv(bad), std::invalid_argument);
}
