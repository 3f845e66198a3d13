#pragma once

// Independent high-precision references used by the test suite and by `verify`.

#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace fdw::oracle {

using Real = boost::multiprecision::cpp_bin_float_100;
using Real50 = boost::multiprecision::cpp_bin_float_50;

inline Real rgamma_mp(const Real& x) {
  if (x <= 0 && floor(x) == x) return Real(0);
  return 1 / boost::math::tgamma(x);
}

// Power series and,
// for |z|^(1/alpha) > 80, the algebraic expansion plus exact pole residues, both in 100 digits.
class MLReference {
 public:
  MLReference(double alpha, double beta) : alpha_(alpha), beta_(beta) {}

  Real value(double z) {
    if (z == 0) return rgamma_mp(Real(beta_));
    if (std::pow(std::fabs(z), 1.0 / alpha_) <= 80.0) return series(z);
    if (alpha_ == 1 && z < 0 && z > -2000) return kummer(-z);
    return asymptotic(z);
  }
  double operator()(double z) { return static_cast<double>(value(z)); }

 private:
  const Real& series_coeff(std::size_t k) {
    while (series_rg_.size() <= k) series_rg_.push_back(rgamma_mp(Real(alpha_) * series_rg_.size() + Real(beta_)));
    return series_rg_[k];
  }

  Real series(double z) {
    const Real zz(z);
    Real sum = 0, zk = 1, max_term = 0, prev = 0;
    for (std::size_t k = 0; k < 100000; ++k) {
      const Real term = zk * series_coeff(k);
      sum += term;
      const Real mag = abs(term);
      if (mag > max_term) max_term = mag;
      if (k > 10 && mag < Real("1e-90") * max_term && mag < prev) break;
      prev = mag;
      zk *= zz;
    }
    return sum;
  }

  // exp(-x) 1F1(beta-1; beta; x) / Gamma(beta), all terms of one sign
  Real kummer(double x) {
    const Real xx(x), b(beta_);
    Real p = exp(-xx), sum = p, peak = p;
    for (int k = 1; k < 1000000; ++k) {
      p *= xx / k;
      sum += (b - 1) / (b - 1 + k) * p;
      if (p > peak) peak = p;
      if (k > x && p < Real("1e-60") * peak) break;
    }
    return sum * rgamma_mp(b);
  }

  Real asymptotic(double z) {
    const Real pi = boost::math::constants::pi<Real>();
    const Real a(alpha_), b(beta_), zz(z);
    Real res = 0;
    if (z > 0) {
      const Real s = pow(zz, 1 / a);
      res = pow(s, 1 - b) * exp(s) / a;
    } else if (alpha_ > 1) {  // alpha == 1 beyond |z| = 2000: exp(z) is below any double
      const Real rho = pow(-zz, 1 / a);
      const Real arg = pi / a;
      res = 2 / a * pow(rho, 1 - b) * exp(rho * cos(arg)) * cos((1 - b) * arg + rho * sin(arg));
    }
    Real sum = 0, zk = 1, azk = 1, last = -1;
    for (std::size_t k = 1; k < 2000; ++k) {
      const auto& [rg, bound] = asymptotic_coeff(k);
      zk /= zz;
      azk = abs(zk);
      const Real env = bound * azk;
      if (last >= 0 && env > last) break;
      sum += -zk * rg;
      last = env;
      if (env < Real("1e-60") * abs(sum)) break;
    }
    return res + sum;
  }

  // (1/Gamma(beta - alpha k), bound on its magnitude)
  const std::pair<Real, Real>& asymptotic_coeff(std::size_t k) {
    const Real pi_inv = 1 / boost::math::constants::pi<Real>();
    while (asym_.size() <= k) {
      const Real x = Real(beta_) - Real(alpha_) * asym_.size();
      const Real rg = rgamma_mp(x);
      asym_.emplace_back(rg, x > 0 ? abs(rg) : boost::math::tgamma(1 - x) * pi_inv);
    }
    return asym_[k];
  }

  double alpha_, beta_;
  std::vector<Real> series_rg_;
  std::vector<std::pair<Real, Real>> asym_;
};

inline Real gamma_mp(double x) { return boost::math::tgamma(Real(x)); }

struct GoldenMax {
  double argmax;
  double value;
};

// Golden-section maximization of a unimodal function in 50-digit arithmetic.
template <class F>
GoldenMax golden_section_max(F f, double lo, double hi, int iterations = 200) {
  const Real50 invphi = (sqrt(Real50(5)) - 1) / 2;
  Real50 a(lo), b(hi);
  Real50 c = b - invphi * (b - a), d = a + invphi * (b - a);
  Real50 fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const Real50 x = (a + b) / 2;
  return {static_cast<double>(x), static_cast<double>(f(x))};
}

}  // namespace fdw::oracle
