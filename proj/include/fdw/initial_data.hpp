#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdw/spectral_domain.hpp"

namespace fdw {

// a_n = <u0, e_n>, b_n = <u1, e_n> for the first N modes. The optional tail
// holds the next modes, used only for truncation estimates.
struct ModeCoefficients {
  std::vector<double> a, b;
  std::vector<double> tail_a, tail_b;

  std::size_t size() const { return a.size(); }
  void validate(std::size_t modes) const {
    if (a.size() != modes || b.size() != modes) throw std::invalid_argument("ModeCoefficients: length does not match mode count");
    if (tail_a.size() != tail_b.size()) throw std::invalid_argument("ModeCoefficients: tail lengths differ");
    for (const auto* v : {&a, &b, &tail_a, &tail_b})
      for (double x : *v)
        if (!std::isfinite(x)) throw std::invalid_argument("ModeCoefficients: non-finite entry");
  }
  ModeCoefficients scaled(double s) const {
    ModeCoefficients c = *this;
    for (auto* v : {&c.a, &c.b, &c.tail_a, &c.tail_b})
      for (double& x : *v) x *= s;
    return c;
  }
  bool is_zero() const {
    for (double x : a) if (x != 0) return false;
    for (double x : b) if (x != 0) return false;
    return true;
  }
};

// Share of sum_n w_n contributed by the upper half of the indices. A small
// share is the numerical stand-in for a convergent series.
inline double upper_half_share(std::span<const double> terms) {
  double total = 0, upper = 0;
  for (std::size_t n = 0; n < terms.size(); ++n) {
    total += terms[n];
    if (n >= terms.size() / 2) upper += terms[n];
  }
  return total > 0 ? upper / total : 0.0;
}

// ||grad u0||^2 = sum lambda_n a_n^2
inline double h10_energy(const SpectralDomain& d, const ModeCoefficients& c) {
  double s = 0;
  for (std::size_t n = 0; n < c.size(); ++n) s += d.eigenvalue(n) * c.a[n] * c.a[n];
  return s;
}

inline double l2_energy(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

enum class DataTarget { u0, u1 };

inline ModeCoefficients single_mode(const SpectralDomain& d, std::size_t k, DataTarget target = DataTarget::u0,
                                    double amplitude = 1.0) {
  if (k < 1 || k > d.mode_count()) throw std::invalid_argument("single_mode: mode index out of range 1..N");
  ModeCoefficients c{std::vector<double>(d.mode_count()), std::vector<double>(d.mode_count()), {}, {}};
  (target == DataTarget::u0 ? c.a : c.b)[k - 1] = amplitude;
  return c;
}

// u0 = x(L - x), u1 = 0 on the interval, with `tail` extra modes
inline ModeCoefficients polynomial_bump(const SpectralDomain& d, std::size_t tail = 0) {
  if (d.kind() != DomainKind::interval) throw std::invalid_argument("polynomial preset is defined on the interval only");
  const double l = d.length();
  auto coeff = [l](std::size_t n) {
    const double w = static_cast<double>(n) * std::numbers::pi;
    return n % 2 == 1 ? std::sqrt(2.0 / l) * 4.0 * l * l * l / (w * w * w) : 0.0;
  };
  ModeCoefficients c;
  for (std::size_t n = 1; n <= d.mode_count(); ++n) c.a.push_back(coeff(n));
  c.b.assign(d.mode_count(), 0.0);
  for (std::size_t n = d.mode_count() + 1; n <= d.mode_count() + tail; ++n) c.tail_a.push_back(coeff(n));
  c.tail_b.assign(tail, 0.0);
  return c;
}

inline double uniform_pm1(std::mt19937_64& eng) {
  return 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
}

// a_n = xi_n n^-p, b_n = eta_n n^-p with xi, eta uniform on (-1, 1). Each
// draw has its own stream and modes are drawn in order, so the first N modes
// of a draw do not depend on N.
inline ModeCoefficients random_decay(const SpectralDomain& d, double p, std::uint64_t seed, std::uint64_t draw = 0,
                                     bool with_velocity = true) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32)};
  std::mt19937_64 eng(seq);
  ModeCoefficients c;
  for (std::size_t n = 1; n <= d.mode_count(); ++n) {
    const double scale = std::pow(static_cast<double>(n), -p);
    const double xi = uniform_pm1(eng), eta = uniform_pm1(eng);
    c.a.push_back(xi * scale);
    c.b.push_back(with_velocity ? eta * scale : 0.0);
  }
  return c;
}

// a_n = n^-p (deterministic), u1 = 0
inline ModeCoefficients power_decay(const SpectralDomain& d, double p) {
  ModeCoefficients c;
  for (std::size_t n = 1; n <= d.mode_count(); ++n) c.a.push_back(std::pow(static_cast<double>(n), -p));
  c.b.assign(d.mode_count(), 0.0);
  return c;
}

}  // namespace fdw
