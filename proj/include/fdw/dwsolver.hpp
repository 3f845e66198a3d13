#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdw/fracops.hpp"
#include "fdw/frac_order.hpp"
#include "fdw/initial_data.hpp"
#include "fdw/mittag_leffler.hpp"
#include "fdw/spectral_domain.hpp"

namespace fdw {

struct ModeState {
  double y;
  double y_prime;
  double y_caputo;
};

// E_{alpha,1}(-lambda t^alpha), t E_{alpha,2}(-lambda t^alpha), t^(alpha-1) E_{alpha,alpha}(-lambda t^alpha)
struct ModeFactors {
  double e1;
  double te2;
  double ta;
};

inline ModeFactors mode_factors(double lambda, double alpha, double t) {
  if (t == 0) return {1.0, 0.0, 0.0};
  const double z = -lambda * std::pow(t, alpha);
  return {mittag_leffler({alpha, 1.0}, z), t * mittag_leffler({alpha, 2.0}, z),
          std::pow(t, alpha - 1.0) * mittag_leffler({alpha, alpha}, z)};
}

inline ModeState mode_state(const ModeFactors& f, double lambda, double a, double b) {
  const double y = a * f.e1 + b * f.te2;
  return {y, -lambda * a * f.ta + b * f.e1, -lambda * y};
}

inline ModeState mode_solution(double lambda, FracOrder alpha, double a, double b, double t) {
  if (!(lambda > 0)) throw std::domain_error("mode_solution: lambda must be positive");
  if (!(t >= 0)) throw std::domain_error("mode_solution: t must be non-negative");
  return mode_state(mode_factors(lambda, alpha.value(), t), lambda, a, b);
}

// y'' for t > 0; singular like t^(alpha-2) at t = 0 when a != 0
inline double mode_second_derivative(double lambda, FracOrder alpha, double a, double b, double t) {
  if (!(lambda > 0)) throw std::domain_error("mode_second_derivative: lambda must be positive");
  if (!(t > 0)) throw std::domain_error("mode_second_derivative: t must be positive");
  const double al = alpha.value();
  const double z = -lambda * std::pow(t, al);
  return -lambda * a * std::pow(t, al - 2.0) * mittag_leffler({al, al - 1.0}, z) -
         lambda * b * std::pow(t, al - 1.0) * mittag_leffler({al, al}, z);
}

// Mittag-Leffler factors for every (mode, time) pair, shared by all data sets
// on the same spectrum and grid.
class ModeEvolution {
 public:
  ModeEvolution(FracOrder alpha, std::span<const double> eigenvalues, std::span<const double> times)
      : alpha_(alpha), lambda_(eigenvalues.begin(), eigenvalues.end()), times_(times.begin(), times.end()) {
    factors_.reserve(lambda_.size() * times_.size());
    for (double lambda : lambda_)
      for (double t : times_) factors_.push_back(mode_factors(lambda, alpha.value(), t));
  }

  FracOrder alpha() const { return alpha_; }
  std::size_t modes() const { return lambda_.size(); }
  std::size_t times() const { return times_.size(); }
  const std::vector<double>& time_nodes() const { return times_; }
  const std::vector<double>& eigenvalues() const { return lambda_; }
  const ModeFactors& factors(std::size_t n, std::size_t i) const { return factors_[n * times_.size() + i]; }

  ModeState state(std::size_t n, std::size_t i, double a, double b) const {
    return mode_state(factors(n, i), lambda_[n], a, b);
  }

 private:
  FracOrder alpha_;
  std::vector<double> lambda_;
  std::vector<double> times_;
  std::vector<ModeFactors> factors_;
};

enum class FieldKind { value, velocity, caputo };

inline const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::value: return "value";
    case FieldKind::velocity: return "velocity";
    case FieldKind::caputo: return "caputo";
  }
  return "?";
}

inline double select(const ModeState& s, FieldKind k) {
  return k == FieldKind::value ? s.y : (k == FieldKind::velocity ? s.y_prime : s.y_caputo);
}

// Mode trajectories c_n(t_i), stored row-major as [i][n].
inline SampledPath mode_trajectories(const ModeEvolution& ev, const ModeCoefficients& data, FieldKind which,
                                     const TimeGrid& grid) {
  if (ev.times() != grid.size()) throw std::invalid_argument("mode_trajectories: evolution table does not match grid");
  if (data.size() != ev.modes()) throw std::invalid_argument("mode_trajectories: data length does not match modes");
  SampledPath c(grid, ev.modes());
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t n = 0; n < ev.modes(); ++n) c(i, n) = select(ev.state(n, i, data.a[n], data.b[n]), which);
  return c;
}

struct SolutionQuery {
  FracOrder alpha;
  SpectralDomain domain;
  ModeCoefficients data;
  TimeGrid tgrid;
  FieldKind which = FieldKind::value;

  SolutionQuery(FracOrder a, SpectralDomain d, ModeCoefficients c, TimeGrid g, FieldKind w = FieldKind::value)
      : alpha(a), domain(std::move(d)), data(std::move(c)), tgrid(g), which(w) {
    data.validate(domain.mode_count());
  }
};

namespace detail {

// eigenvalues of the modes after the first N, for tail estimates
inline std::vector<double> tail_eigenvalues(const SpectralDomain& d, std::size_t count) {
  if (count == 0) return {};
  std::vector<double> lam;
  if (d.kind() == DomainKind::interval) {
    for (std::size_t n = d.mode_count() + 1; n <= d.mode_count() + count; ++n) {
      const double w = static_cast<double>(n) * std::numbers::pi / d.length();
      lam.push_back(w * w);
    }
  } else {
    const SpectralDomain big = build_rectangle(d.dimensions()[0], d.dimensions()[1], d.mode_count() + count);
    lam.assign(big.eigenvalues().begin() + static_cast<std::ptrdiff_t>(d.mode_count()), big.eigenvalues().end());
  }
  return lam;
}

struct DecayConstants {
  double c1, c2, ca;
};

inline DecayConstants decay_constants(FracOrder alpha) {
  const double a = alpha.value();
  return {empirical_decay_constant({a, 1.0}), empirical_decay_constant({a, 2.0}), empirical_decay_constant({a, a})};
}

inline double tail_norm(const SolutionQuery& q, double theta, double t, const DecayConstants& k,
                        const std::vector<double>& lam) {
  const auto& ta = q.data.tail_a;
  const auto& tb = q.data.tail_b;
  std::vector<double> terms(ta.size());
  const double al = q.alpha.value();
  for (std::size_t n = 0; n < ta.size(); ++n) {
    const double l = lam[n];
    double bound;
    if (t == 0) {
      bound = q.which == FieldKind::value ? std::fabs(ta[n]) : (q.which == FieldKind::velocity ? std::fabs(tb[n]) : l * std::fabs(ta[n]));
    } else {
      const double damp = 1.0 / (1.0 + l * std::pow(t, al));
      const double value = (k.c1 * std::fabs(ta[n]) + k.c2 * t * std::fabs(tb[n])) * damp;
      if (q.which == FieldKind::value) bound = value;
      else if (q.which == FieldKind::caputo) bound = l * value;
      else bound = (k.ca * l * std::pow(t, al - 1.0) * std::fabs(ta[n]) + k.c1 * std::fabs(tb[n])) * damp;
    }
    terms[n] = std::pow(l, 2.0 * theta) * bound * bound;
  }
  return std::sqrt(quad::pairwise_sum(terms));
}

}  // namespace detail

// Upper estimate of the D(A^theta) norm of the omitted modes, from the tail
// coefficients carried by the data and |E| <= C/(1+|z|).
inline double truncation_tail(const SolutionQuery& q, double theta, double t) {
  if (!(t >= 0)) throw std::domain_error("truncation_tail: t must be non-negative");
  if (q.data.tail_a.empty()) return 0.0;
  const auto lam = detail::tail_eigenvalues(q.domain, q.data.tail_a.size());
  const detail::DecayConstants k = t == 0 ? detail::DecayConstants{1, 1, 1} : detail::decay_constants(q.alpha);
  return detail::tail_norm(q, theta, t, k, lam);
}

struct FieldSnapshots {
  std::vector<double> times;
  std::vector<Point> points;
  std::vector<double> values;  // [time][point]
  std::vector<double> tail_l2;  // omitted-tail L^2 estimate per time
  double at(std::size_t i, std::size_t p) const { return values[i * points.size() + p]; }
};

inline FieldSnapshots solve_field(const SolutionQuery& q, std::span<const Point> points) {
  for (const Point& x : points)
    if (!q.domain.contains(x)) throw std::invalid_argument("solve_field: point outside the domain closure");
  const std::vector<double> times = q.tgrid.nodes();
  const ModeEvolution ev(q.alpha, q.domain.eigenvalues(), times);
  const SampledPath c = mode_trajectories(ev, q.data, q.which, q.tgrid);
  const std::size_t nm = q.domain.mode_count();
  std::vector<double> basis(points.size() * nm);
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t n = 0; n < nm; ++n) basis[p * nm + n] = q.domain.eigenfunction(n, points[p]);

  FieldSnapshots out{times, std::vector<Point>(points.begin(), points.end()), {}, {}};
  out.values.resize(times.size() * points.size());
  std::vector<double> terms(nm);
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t p = 0; p < points.size(); ++p) {
      for (std::size_t n = 0; n < nm; ++n) terms[n] = c(i, n) * basis[p * nm + n];
      out.values[i * points.size() + p] = quad::pairwise_sum(terms);
    }

  if (!q.data.tail_a.empty()) {
    const auto lam = detail::tail_eigenvalues(q.domain, q.data.tail_a.size());
    const detail::DecayConstants k = detail::decay_constants(q.alpha);
    for (double t : times) out.tail_l2.push_back(detail::tail_norm(q, 0.0, t, t == 0 ? detail::DecayConstants{1, 1, 1} : k, lam));
  } else {
    out.tail_l2.assign(times.size(), 0.0);
  }
  return out;
}

// CSV columns: t, x[, y], u
inline void write_snapshots_csv(std::ostream& os, const FieldSnapshots& s, DomainKind kind) {
  os << (kind == DomainKind::interval ? "t,x,u\n" : "t,x,y,u\n");
  char buf[128];
  for (std::size_t i = 0; i < s.times.size(); ++i)
    for (std::size_t p = 0; p < s.points.size(); ++p) {
      if (kind == DomainKind::interval)
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.times[i], s.points[p][0], s.at(i, p));
      else
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.times[i], s.points[p][0], s.points[p][1], s.at(i, p));
      os << buf;
    }
}

inline nlohmann::json solve_manifest(const SolutionQuery& q, const FieldSnapshots& s) {
  DomainDescriptor dd{q.domain.kind(), q.domain.dimensions()[0], q.domain.dimensions()[1], q.domain.mode_count()};
  double tail_max = 0;
  for (std::size_t i = 1; i < s.tail_l2.size(); ++i) tail_max = std::max(tail_max, s.tail_l2[i]);
  return {{"alpha", q.alpha.value()},
          {"domain", dd},
          {"grid", {{"T", q.tgrid.t_end()}, {"M", q.tgrid.steps()}}},
          {"field", to_string(q.which)},
          {"points", s.points.size()},
          {"tail_modes", q.data.tail_a.size()},
          {"tail_l2_at_t0", s.tail_l2.empty() ? 0.0 : s.tail_l2.front()},
          {"tail_l2_max_t_positive", tail_max},
          {"tail_l2", s.tail_l2}};
}

}  // namespace fdw
