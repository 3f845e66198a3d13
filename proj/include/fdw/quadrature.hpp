#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fdw::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre on [-1, 1], Newton iteration on the three-term recurrence.
inline Rule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  // returns (P_n(x), P_n'(x))
  auto legendre = [n](long double x) {
    long double p0 = 1, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const long double p2 = ((2.0L * k - 1) * x * p1 - (k - 1.0L) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair<long double, long double>{p1, n * (x * p1 - p0) / (x * x - 1)};
  };
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                             (static_cast<double>(n) + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const long double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    const long double dp = legendre(x).second;
    const long double w = 2 / ((1 - x * x) * dp * dp);
    r.nodes[i] = static_cast<double>(-x);
    r.nodes[n - 1 - i] = static_cast<double>(x);
    r.weights[i] = r.weights[n - 1 - i] = static_cast<double>(w);
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

// Composite Gauss-Legendre with `panels` equal panels of `order` points on [a, b].
inline Rule composite_gauss(double a, double b, std::size_t panels, std::size_t order) {
  if (panels == 0) throw std::invalid_argument("composite_gauss: panels must be positive");
  const Rule ref = gauss_legendre(order);
  Rule r;
  r.nodes.reserve(panels * order);
  r.weights.reserve(panels * order);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    for (std::size_t i = 0; i < order; ++i) {
      r.nodes.push_back(lo + 0.5 * h * (ref.nodes[i] + 1.0));
      r.weights.push_back(0.5 * h * ref.weights[i]);
    }
  }
  return r;
}

// Recursive pairwise summation; the split points depend only on the length,
// so the result is reproducible bit for bit.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t mid = v.size() / 2;
  return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

// Uniform-step trapezoid.
inline double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  std::vector<double> terms(f.begin(), f.end());
  terms.front() *= 0.5;
  terms.back() *= 0.5;
  return h * pairwise_sum(terms);
}

inline double trapezoid(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size()) throw std::invalid_argument("trapezoid: size mismatch");
  std::vector<double> terms;
  terms.reserve(t.size());
  for (std::size_t i = 1; i < t.size(); ++i) terms.push_back(0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]));
  return pairwise_sum(terms);
}

// Least-squares slope of log(v) against log(t).
inline double loglog_slope(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size() || t.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0) || !(v[i] > 0)) throw std::invalid_argument("loglog_slope: values must be positive");
    const double x = std::log(t[i]), y = std::log(v[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) throw std::invalid_argument("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

}  // namespace fdw::quad
