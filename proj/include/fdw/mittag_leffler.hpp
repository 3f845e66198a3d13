#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fdw {

inline bool is_nonpositive_integer(double x) { return x <= 0 && std::floor(x) == x; }

inline double gamma(double x) {
  if (!std::isfinite(x)) throw std::domain_error("gamma: non-finite argument");
  if (is_nonpositive_integer(x)) throw std::domain_error("gamma: pole at non-positive integer " + std::to_string(x));
  return std::tgamma(x);
}

// 1/Gamma(x), zero at the poles.
inline long double rgamma(long double x) {
  if (x <= 0 && std::floor(x) == x) return 0.0L;
  if (x > 1700.0L) return std::exp(-std::lgamma(x));
  return 1.0L / std::tgamma(x);
}

struct MLParams {
  double alpha;
  double beta;

  MLParams(double a, double b) : alpha(a), beta(b) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("MLParams: non-finite parameter");
    if (!(a > 0 && a <= 2)) throw std::domain_error("MLParams: alpha must lie in (0, 2]");
    if (!(b > 0)) throw std::domain_error("MLParams: beta must be positive");
  }
};

inline constexpr double kZMax = 1e8;
// Taylor series below this radius (scaled down to 10^alpha when alpha < 1).
inline constexpr double kSeriesRadius = 10.0;
// Algebraic expansion once |z|^(1/alpha) exceeds this; its truncation error is ~exp(-40).
inline constexpr double kAsymptoticScale = 40.0;
// Kummer series for alpha == 1, z < 0 up to this |z|; beyond it exp(z) underflows.
inline constexpr double kKummerLimit = 745.0;

enum class MLRegime { zero, series, contour, asymptotic, kummer };

inline const char* to_string(MLRegime r) {
  switch (r) {
    case MLRegime::zero: return "zero";
    case MLRegime::series: return "series";
    case MLRegime::contour: return "contour";
    case MLRegime::asymptotic: return "asymptotic";
    case MLRegime::kummer: return "kummer";
  }
  return "?";
}

namespace detail {

struct Neumaier {
  long double sum = 0, comp = 0;
  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  long double value() const { return sum + comp; }
};

inline double ml_series(double alpha, double beta, double z) {
  Neumaier acc;
  long double zk = 1.0L, max_term = 0.0L, prev = 0.0L;
  const long double zl = z;
  for (int k = 0; k < 20000; ++k) {
    const long double term = zk * rgamma(static_cast<long double>(alpha) * k + beta);
    acc.add(term);
    const long double mag = std::fabs(term);
    if (mag > max_term) max_term = mag;
    if (k > 2 && mag <= 1e-21L * max_term && mag < prev) break;
    prev = mag;
    zk *= zl;
    if (!std::isfinite(zk)) break;
  }
  return static_cast<double>(acc.value());
}

// E_{1,beta}(-x) = exp(-x)/Gamma(beta) * sum_k (beta-1)/(beta-1+k) x^k/k!
inline double ml_kummer(double beta, double x) {
  const long double xl = x;
  long double p = std::exp(-xl);  // exp(-x) x^k / k!
  Neumaier acc;
  acc.add(p);
  long double peak = p;
  for (int k = 1; k < 100000; ++k) {
    p *= xl / k;
    const long double c = (beta - 1.0L) / (beta - 1.0L + k);
    acc.add(c * p);
    peak = std::max(peak, p);
    if (k > xl && p < 1e-22L * peak) break;
  }
  return static_cast<double>(acc.value() * rgamma(static_cast<long double>(beta)));
}

// sum of (1/alpha) s^(1-beta) e^s over the poles s^alpha = z with |arg s| < pi
inline double ml_residues(double alpha, double beta, double z) {
  if (z > 0) {
    const double s = std::pow(z, 1.0 / alpha);
    return std::exp(s + (1.0 - beta) * std::log(s)) / alpha;
  }
  if (z < 0 && alpha > 1) {
    const double rho = std::pow(-z, 1.0 / alpha);
    const std::complex<double> s = std::polar(rho, std::numbers::pi / alpha);
    const std::complex<double> r = std::pow(s, 1.0 - beta) * std::exp(s) / alpha;
    return 2.0 * r.real();
  }
  return 0.0;
}

struct Asymptotic {
  double value;
  double error_estimate;
};

// residues minus sum_k z^(-k) / Gamma(beta - alpha k). Truncation follows the
// envelope |z|^(-k) Gamma(1 - x) / pi, x = beta - alpha k, which bounds each term
// by the reflection formula and, unlike the terms, does not dip near the gamma poles.
inline Asymptotic ml_asymptotic(double alpha, double beta, double z) {
  Neumaier acc;
  const long double log_az = std::log(std::fabs(static_cast<long double>(z)));
  const long double zinv = 1.0L / static_cast<long double>(z);
  long double zk = 1.0L;
  long double last_env = std::numeric_limits<long double>::infinity();
  long double omitted = 0.0L;
  for (int k = 1; k <= 200; ++k) {
    const long double x = beta - static_cast<long double>(alpha) * k;
    const long double env = x > 0 ? std::fabs(rgamma(x)) * std::exp(-k * log_az)
                                   : std::exp(std::lgamma(1.0L - x) - k * log_az) / std::numbers::pi_v<long double>;
    omitted = env;
    if (env > last_env) break;
    zk *= zinv;
    acc.add(-zk * rgamma(x));
    last_env = env;
    if (env < 1e-21L * std::fabs(acc.value())) break;
  }
  const double res = (alpha == 1.0 && z < 0) ? 0.0 : ml_residues(alpha, beta, z);
  return {res + static_cast<double>(acc.value()), static_cast<double>(omitted)};
}

// Hankel contour collapsed onto the negative real axis: residues, a circle of
// radius r0 and the cut integral on (r0, inf).
inline double ml_contour(double alpha, double beta, double z) {
  using boost::math::quadrature::gauss_kronrod;
  const double pi = std::numbers::pi;
  const double scale = std::pow(std::fabs(z), 1.0 / alpha);
  const double r0 = std::min(1.0, 0.5 * scale);

  const auto circle_integrand = [=](double phi) {
    const std::complex<double> s = std::polar(r0, phi);
    const std::complex<double> f = std::exp(s) * std::pow(s, alpha - beta) / (std::pow(s, alpha) - z);
    return (f * s).real();
  };
  const double circle = gauss_kronrod<double, 31>::integrate(circle_integrand, 0.0, pi, 15, 1e-14) / pi;

  const double sb = std::sin(pi * beta), sab = std::sin(pi * (alpha - beta)), ca = std::cos(pi * alpha);
  const auto cut_integrand = [=](double r) {
    const double ra = std::pow(r, alpha);
    const double den = ra * ra - 2.0 * z * ra * ca + z * z;
    return std::exp(-r) * std::pow(r, alpha - beta) * (ra * sb + z * sab) / den;
  };
  const double far = r0 + 90.0;
  double cut = 0.0;
  if (scale > r0 && scale < far) {
    cut = gauss_kronrod<double, 31>::integrate(cut_integrand, r0, scale, 20, 1e-14) +
          gauss_kronrod<double, 31>::integrate(cut_integrand, scale, far, 20, 1e-14);
  } else {
    cut = gauss_kronrod<double, 31>::integrate(cut_integrand, r0, far, 20, 1e-14);
  }
  cut /= pi;
  return ml_residues(alpha, beta, z) + circle + cut;
}

}  // namespace detail

inline MLRegime select_regime(const MLParams& p, double z) {
  if (z == 0) return MLRegime::zero;
  const double az = std::fabs(z);
  const double radius = p.alpha < 1 ? std::min(kSeriesRadius, std::pow(kSeriesRadius, p.alpha)) : kSeriesRadius;
  if (p.alpha == 2 && z > 0) return MLRegime::series;
  if (p.alpha == 1 && z < 0) return az <= kKummerLimit ? MLRegime::kummer : MLRegime::asymptotic;
  if (az <= radius) return MLRegime::series;
  if (std::pow(az, 1.0 / p.alpha) >= kAsymptoticScale) return MLRegime::asymptotic;
  return MLRegime::contour;
}

inline double mittag_leffler_in(const MLParams& p, double z, MLRegime regime) {
  switch (regime) {
    case MLRegime::zero: return static_cast<double>(rgamma(p.beta));
    case MLRegime::series: return detail::ml_series(p.alpha, p.beta, z);
    case MLRegime::kummer:
      if (p.alpha != 1 || z >= 0) throw std::invalid_argument("kummer regime needs alpha == 1 and z < 0");
      return detail::ml_kummer(p.beta, -z);
    case MLRegime::contour:
      if ((p.alpha == 1 && z < 0) || (p.alpha == 2 && z > 0))
        throw std::invalid_argument("contour regime unavailable on the branch cut");
      return detail::ml_contour(p.alpha, p.beta, z);
    case MLRegime::asymptotic: return detail::ml_asymptotic(p.alpha, p.beta, z).value;
  }
  return 0.0;
}

inline double mittag_leffler(const MLParams& p, double z) {
  if (!std::isfinite(z)) throw std::domain_error("mittag_leffler: non-finite argument");
  if (std::fabs(z) > kZMax) throw std::range_error("mittag_leffler: |z| exceeds kZMax = 1e8");
  const double v = mittag_leffler_in(p, z, select_regime(p, z));
  if (!std::isfinite(v)) throw std::range_error("mittag_leffler: result overflows");
  return v;
}

struct BoundFit {
  double mu = 0;
  double c_empirical = 0;
  std::size_t sample_count = 0;
  double max_violation = 0;
  // running sup of |E|(1+|z|) over [0, 2^(r+1)) for consecutive dyadic ranges r
  std::vector<double> running_sup;
  std::vector<double> growth_ratios;
  bool violated() const { return max_violation > 0; }
};

inline constexpr double kGrowthTolerance = 1.1;

// Growth is judged over the upper half of the dyadic extensions; the first few
// ranges sit in the pre-asymptotic hump of E and may rise by more than 10%.
inline BoundFit verify_decay_bound(const MLParams& p, std::span<const double> z_samples) {
  if (z_samples.empty()) throw std::invalid_argument("verify_decay_bound: empty sample list");
  if (!(p.alpha > 1 && p.alpha < 2)) throw std::domain_error("verify_decay_bound: requires 1 < alpha < 2");
  for (double z : z_samples)
    if (!(z <= 0)) throw std::invalid_argument("verify_decay_bound: samples must lie on the negative real axis");

  std::vector<std::pair<double, double>> scaled;  // (|z|, |E|(1+|z|))
  scaled.reserve(z_samples.size());
  for (double z : z_samples) scaled.emplace_back(-z, std::fabs(mittag_leffler(p, z)) * (1.0 - z));
  std::sort(scaled.begin(), scaled.end());

  BoundFit fit;
  fit.mu = 0.5 * (std::numbers::pi * p.alpha / 2 + std::numbers::pi);
  fit.sample_count = scaled.size();
  auto range_of = [](double az) { return az < 1.0 ? 0 : static_cast<int>(std::floor(std::log2(az))) + 1; };
  int current = range_of(scaled.front().first);
  double sup = 0.0;
  for (const auto& [az, v] : scaled) {
    const int r = range_of(az);
    if (r != current) {
      fit.running_sup.push_back(sup);
      current = r;
    }
    sup = std::max(sup, v);
  }
  fit.running_sup.push_back(sup);
  fit.c_empirical = sup;
  for (std::size_t i = 1; i < fit.running_sup.size(); ++i)
    fit.growth_ratios.push_back(fit.running_sup[i] / fit.running_sup[i - 1]);
  for (std::size_t i = fit.growth_ratios.size() / 2; i < fit.growth_ratios.size(); ++i)
    fit.max_violation = std::max(fit.max_violation, fit.growth_ratios[i] - kGrowthTolerance);
  return fit;
}

// sup over z <= 0 of |E_{alpha,beta}(z)|(1+|z|), sampled 64 points per octave up to 2^40
inline double empirical_decay_constant(const MLParams& p) {
  std::vector<double> z{0.0};
  for (int k = -64 * 4; k <= 64 * 26; ++k) z.push_back(-std::exp2(k / 64.0));
  return verify_decay_bound(p, z).c_empirical;
}

struct MaxRatio {
  double argmax;
  double value;
};

// x^beta / (1 + x) on x >= 0
inline double max_ratio_objective(double beta, double x) { return std::pow(x, beta) / (1.0 + x); }

inline MaxRatio max_ratio(double beta) {
  if (!(beta > 0 && beta < 1)) throw std::domain_error("max_ratio: beta must lie in (0, 1)");
  return {beta / (1.0 - beta), std::pow(beta, beta) * std::pow(1.0 - beta, 1.0 - beta)};
}

}  // namespace fdw
