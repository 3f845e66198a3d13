#pragma once

#include <cmath>
#include <cstdio>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdw/dwsolver.hpp"
#include "fdw/frac_order.hpp"
#include "fdw/initial_data.hpp"
#include "fdw/quadrature.hpp"
#include "fdw/spectral_domain.hpp"

namespace fdw {

struct NormReport {
  std::string quantity;
  std::string estimate;  // which estimate the number checks
  double alpha = 0;
  double theta = NAN;
  double beta = NAN;
  double t_end = 0;
  std::size_t modes = 0;
  std::size_t steps = 0;
  double value = 0;
  double bound_rhs = NAN;
  double ratio() const { return bound_rhs > 0 ? value / bound_rhs : NAN; }
};

inline void to_json(nlohmann::json& j, const NormReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  j = nlohmann::json{{"quantity", r.quantity}, {"estimate", r.estimate}, {"alpha", r.alpha},
                     {"theta", num(r.theta)},  {"beta", num(r.beta)},      {"T", r.t_end},
                     {"N", r.modes},           {"M", r.steps},             {"value", r.value},
                     {"bound_rhs", num(r.bound_rhs)}, {"ratio", num(r.ratio())}};
}

inline void write_reports_csv(std::ostream& os, std::span<const NormReport> rs) {
  os << "quantity,estimate,alpha,theta,beta,T,N,M,value,bound_rhs,ratio\n";
  char buf[256];
  for (const NormReport& r : rs) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%.17g,%.17g,%zu,%zu,%.17g,%.17g,%.17g\n", r.quantity.c_str(),
                  r.estimate.c_str(), r.alpha, r.theta, r.beta, r.t_end, r.modes, r.steps, r.value, r.bound_rhs, r.ratio());
    os << buf;
  }
}

// ||u0||_{H^1_0} + ||u1||_{L^2}
inline double data_norm(const SpectralDomain& d, const ModeCoefficients& c) {
  return std::sqrt(h10_energy(d, c)) + std::sqrt(l2_energy(c.b));
}

// least-squares slope of log v against log t over the points with t in [t_lo, t_hi]
inline double fit_loglog_slope(std::span<const double> t, std::span<const double> v, double t_lo = 0,
                               double t_hi = INFINITY) {
  std::vector<double> ts, vs;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t_lo && t[i] <= t_hi && t[i] > 0 && v[i] > 0) {
      ts.push_back(t[i]);
      vs.push_back(v[i]);
    }
  return quad::loglog_slope(ts, vs);
}

inline std::vector<double> dyadic_times(int k_first, int k_last) {
  std::vector<double> t;
  for (int k = k_first; k <= k_last; ++k) t.push_back(std::exp2(-k));
  return t;
}

inline std::vector<double> log_times(double t_lo, double t_hi, std::size_t count) {
  std::vector<double> t;
  for (std::size_t i = 0; i < count; ++i) t.push_back(t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / static_cast<double>(count - 1)));
  return t;
}

namespace detail {

inline void require_decreasing(std::span<const double> ts) {
  if (ts.empty()) throw std::invalid_argument("t_sequence must not be empty");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] >= 0)) throw std::invalid_argument("t_sequence entries must be non-negative");
    if (i > 0 && !(ts[i] < ts[i - 1])) throw std::invalid_argument("t_sequence must be strictly decreasing");
  }
}

// coefficient vectors of u(t) and u_t(t)
inline void state_at(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha, double t, std::vector<double>& value,
                     std::vector<double>& velocity) {
  value.resize(c.size());
  velocity.resize(c.size());
  for (std::size_t n = 0; n < c.size(); ++n) {
    const ModeState s = mode_solution(d.eigenvalue(n), alpha, c.a[n], c.b[n], t);
    value[n] = s.y;
    velocity[n] = s.y_prime;
  }
}

}  // namespace detail

struct ConvergenceRow {
  double t;
  double err_h10;       // ||u(t) - u0||_{H^1_0}, or NaN when not computed
  double err_velocity;  // ||u_t(t) - u1|| in the table's velocity norm
  double envelope;      // rate envelope for the velocity error
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double velocity_slope = NAN;
  double expected_slope = NAN;

  std::vector<double> times() const {
    std::vector<double> t;
    for (const auto& r : rows) t.push_back(r.t);
    return t;
  }
  std::vector<double> velocity_errors() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.err_velocity);
    return v;
  }
};

// Errors ||u(t)-u0||_{H^1_0} and ||u_t(t)-u1||_{D(A^-theta)} along t -> 0.
inline ConvergenceTable initial_convergence(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha, double theta,
                                            std::span<const double> t_sequence) {
  ThetaRange::of(ThetaPurpose::velocity_dual, alpha).require(theta);
  detail::require_decreasing(t_sequence);
  c.validate(d.mode_count());
  const double al = alpha.value();
  const double u0 = std::sqrt(h10_energy(d, c)), u1 = std::sqrt(l2_energy(c.b));
  ConvergenceTable tab;
  tab.expected_slope = (al - 2.0 + 2.0 * al * theta) / 2.0;
  std::vector<double> y, v, dy(c.size()), dv(c.size());
  for (double t : t_sequence) {
    detail::state_at(d, c, alpha, t, y, v);
    for (std::size_t n = 0; n < c.size(); ++n) {
      dy[n] = y[n] - c.a[n];
      dv[n] = v[n] - c.b[n];
    }
    const double env = t > 0 ? std::pow(t, tab.expected_slope) * u0 + std::pow(t, al * theta) * u1 : 0.0;
    tab.rows.push_back({t, frac_power_norm(d, dy, 0.5), frac_power_norm(d, dv, -theta), env});
  }
  const auto ts = tab.times();
  const auto vs = tab.velocity_errors();
  std::size_t positive = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) positive += (ts[i] > 0 && vs[i] > 0);
  if (positive >= 2) tab.velocity_slope = fit_loglog_slope(ts, vs);
  return tab;
}

struct SupNorms {
  double h10;       // sup_t ||u(t)||_{H^1_0}
  double velocity;  // sup_t ||u_t(t)||_{D(A^-theta)}
};

inline SupNorms sup_norms(const SpectralDomain& d, const ModeCoefficients& c, const ModeEvolution& ev, double theta) {
  std::vector<double> y(d.mode_count()), v(d.mode_count());
  SupNorms s{0, 0};
  for (std::size_t i = 0; i < ev.times(); ++i) {
    for (std::size_t n = 0; n < d.mode_count(); ++n) {
      const ModeState st = ev.state(n, i, c.a[n], c.b[n]);
      y[n] = st.y;
      v[n] = st.y_prime;
    }
    s.h10 = std::max(s.h10, frac_power_norm(d, y, 0.5));
    s.velocity = std::max(s.velocity, frac_power_norm(d, v, -theta));
  }
  return s;
}

// sup_t ||u(t)||_{H^1_0} + sup_t ||u_t(t)||_{D(A^-theta)} against ||u0||_{H^1_0} + ||u1||_{L^2}
inline std::vector<NormReport> uniform_bound_report(const SpectralDomain& d, std::span<const ModeCoefficients> ensemble,
                                                    FracOrder alpha, double theta, const TimeGrid& grid) {
  ThetaRange::of(ThetaPurpose::velocity_dual, alpha).require(theta);
  const std::vector<double> times = grid.nodes();
  const ModeEvolution ev(alpha, d.eigenvalues(), times);
  std::vector<NormReport> out;
  for (const ModeCoefficients& c : ensemble) {
    c.validate(d.mode_count());
    const double rhs = data_norm(d, c);
    if (rhs == 0) continue;
    const SupNorms s = sup_norms(d, c, ev, theta);
    out.push_back({"sup_H10_u+sup_dual_ut", "uniform-in-time energy bound", alpha.value(), theta, NAN, grid.t_end(),
                   d.mode_count(), grid.steps(), s.h10 + s.velocity, rhs});
  }
  return out;
}

// nodes T (j/M)^grading
inline std::vector<double> graded_mesh(double t_end, std::size_t steps, double grading = 2.0) {
  std::vector<double> t(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) t[j] = t_end * std::pow(static_cast<double>(j) / static_cast<double>(steps), grading);
  t.back() = t_end;
  return t;
}

// Product integration on a graded mesh: each panel integrates the power law
// through its endpoint values (exact for c t^p), with the trapezoid as fallback
// where the values change sign. The first panel uses the law through the first
// two interior nodes, which handles integrable t=0 blow-up.
inline double singular_time_integral(std::span<const double> t, std::span<const double> f) {
  if (t.size() < 3) throw std::invalid_argument("singular_time_integral: need at least 3 nodes");
  if (t.size() != f.size()) throw std::invalid_argument("singular_time_integral: size mismatch");
  std::vector<double> panels;
  if (f[1] > 0 && f[2] > 0) {
    const double p = std::log(f[2] / f[1]) / std::log(t[2] / t[1]);
    if (!(p > -1)) throw std::domain_error("singular_time_integral: local power law is not integrable at t=0");
    panels.push_back(f[1] * t[1] / (p + 1));
  } else {
    panels.push_back(0.5 * t[1] * (f[0] + f[1]));
  }
  for (std::size_t j = 1; j + 1 < t.size(); ++j) {
    const double f0 = f[j], f1 = f[j + 1], h = t[j + 1] - t[j];
    if (f0 > 0 && f1 > 0 && std::fabs(std::log(f1 / f0)) > 1e-8) {
      const double r = t[j + 1] / t[j];
      const double q = std::log(f1 / f0) / std::log(r) + 1.0;  // exponent + 1
      panels.push_back(std::fabs(q) < 1e-12 ? f0 * t[j] * std::log(r) : f0 * t[j] * std::expm1(q * std::log(r)) / q);
    } else {
      panels.push_back(0.5 * h * (f0 + f1));
    }
  }
  return quad::pairwise_sum(panels);
}

enum class Integrand { gradient, caputo, velocity };

// ||grad u(t)||^2_{D(A^theta)} = sum lambda^(1+2theta) c^2,
// ||d^alpha u(t)||^2_{D(A^-theta)} = sum lambda^(2-2theta) c^2,
// ||u_t(t)||^2_{D(A^-theta)} = sum lambda^(-2theta) (c')^2
inline double integrand_value(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha, Integrand kind, double theta,
                              double t) {
  std::vector<double> terms(c.size());
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double lam = d.eigenvalue(n);
    const ModeState s = mode_solution(lam, alpha, c.a[n], c.b[n], t);
    switch (kind) {
      case Integrand::gradient: terms[n] = std::pow(lam, 1.0 + 2.0 * theta) * s.y * s.y; break;
      case Integrand::caputo: terms[n] = std::pow(lam, -2.0 * theta) * s.y_caputo * s.y_caputo; break;
      case Integrand::velocity: terms[n] = std::pow(lam, -2.0 * theta) * s.y_prime * s.y_prime; break;
    }
  }
  return quad::pairwise_sum(terms);
}

// log-log slope of an integrand over [t_lo, t_hi]
inline double integrand_slope(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha, Integrand kind, double theta,
                              double t_lo, double t_hi, std::size_t samples = 13) {
  const std::vector<double> ts = log_times(t_lo, t_hi, samples);
  std::vector<double> vs;
  for (double t : ts) vs.push_back(integrand_value(d, c, alpha, kind, theta, t));
  return fit_loglog_slope(ts, vs);
}

struct L2TimeNorms {
  NormReport gradient;
  NormReport caputo;
};

// ||grad u||_{L^2(0,T;D(A^theta_grad))} and ||d^alpha u||_{L^2(0,T;D(A^-theta_cap))} on a graded mesh
inline L2TimeNorms l2_time_norms(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha, double theta_grad,
                                 double theta_cap, double t_end, std::size_t steps) {
  ThetaRange::of(ThetaPurpose::gradient, alpha).require(theta_grad);
  ThetaRange::of(ThetaPurpose::caputo_dual, alpha).require(theta_cap);
  c.validate(d.mode_count());
  const std::vector<double> t = graded_mesh(t_end, steps);
  const ModeEvolution ev(alpha, d.eigenvalues(), t);
  std::vector<double> g(t.size()), k(t.size()), tg(d.mode_count()), tk(d.mode_count());
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t n = 0; n < d.mode_count(); ++n) {
      const double lam = d.eigenvalue(n);
      const ModeState s = ev.state(n, i, c.a[n], c.b[n]);
      tg[n] = std::pow(lam, 1.0 + 2.0 * theta_grad) * s.y * s.y;
      tk[n] = std::pow(lam, -2.0 * theta_cap) * s.y_caputo * s.y_caputo;
    }
    g[i] = quad::pairwise_sum(tg);
    k[i] = quad::pairwise_sum(tk);
  }
  const double rhs = data_norm(d, c);
  const double al = alpha.value();
  L2TimeNorms out;
  out.gradient = {"L2_time_gradient", "L2-in-time gradient estimate", al, theta_grad, NAN, t_end, d.mode_count(), steps,
                  std::sqrt(singular_time_integral(t, g)), rhs};
  out.caputo = {"L2_time_caputo", "L2-in-time Caputo-derivative estimate", al, theta_cap, NAN, t_end, d.mode_count(), steps,
                std::sqrt(singular_time_integral(t, k)), rhs};
  return out;
}

// ||u_t(t) - u1||_{L^2} along t -> 0 for u0 in D(A^(1/2+eps))
inline ConvergenceTable smooth_data_velocity(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha, double epsilon,
                                             std::span<const double> t_sequence) {
  ThetaRange::of(ThetaPurpose::smooth_velocity, alpha).require(epsilon);
  detail::require_decreasing(t_sequence);
  c.validate(d.mode_count());
  std::vector<double> w(c.size());
  for (std::size_t n = 0; n < c.size(); ++n) w[n] = std::pow(d.eigenvalue(n), 1.0 + 2.0 * epsilon) * c.a[n] * c.a[n];
  const double share = upper_half_share(w);
  if (share > 0.25)
    throw std::invalid_argument("smooth_data_velocity: sum lambda^(1+2eps) a^2 has not stabilized (upper-half share " +
                                std::to_string(share) + " > 0.25)");
  const double al = alpha.value();
  const double u0 = frac_power_norm(d, c.a, 0.5 + epsilon), u1 = std::sqrt(l2_energy(c.b));
  ConvergenceTable tab;
  tab.expected_slope = (al - 2.0 + 2.0 * al * epsilon) / 2.0;
  std::vector<double> y, v, dv(c.size());
  for (double t : t_sequence) {
    detail::state_at(d, c, alpha, t, y, v);
    for (std::size_t n = 0; n < c.size(); ++n) dv[n] = v[n] - c.b[n];
    const double env = t > 0 ? std::pow(t, tab.expected_slope) * u0 + std::pow(t, al * 0.5) * u1 : 0.0;
    tab.rows.push_back({t, NAN, frac_power_norm(d, dv, 0.0), env});
  }
  const auto ts = tab.times();
  const auto vs = tab.velocity_errors();
  std::size_t positive = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) positive += (ts[i] > 0 && vs[i] > 0);
  if (positive >= 2) tab.velocity_slope = fit_loglog_slope(ts, vs);
  return tab;
}

struct RateFit {
  double slope;
  double expected;
};

// Near-zero slope of ||d^alpha u(t)||^2_{D(A^-1/(2 alpha))}: t^(1-alpha) for u0 data, t^(3-2 alpha) for u1 data.
inline RateFit caputo_critical_rate(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha, DataTarget target,
                                    double t_lo = 1e-4, double t_hi = 1e-2) {
  c.validate(d.mode_count());
  const auto& other = target == DataTarget::u0 ? c.b : c.a;
  for (double x : other)
    if (x != 0) throw std::invalid_argument("caputo_critical_rate: data must be pure u0 or pure u1");
  const double al = alpha.value();
  return {integrand_slope(d, c, alpha, Integrand::caputo, 1.0 / (2.0 * al), t_lo, t_hi),
          target == DataTarget::u0 ? 1.0 - al : 3.0 - 2.0 * al};
}

struct BlowupFit {
  double exponent;
  double expected;
  bool multi_mode_warning;
  std::vector<double> times;
  std::vector<double> norms;
};

// log-log fit of ||u_t(t)||_{L^2} on [t_lo, t_hi] for data with u1 = 0
inline BlowupFit velocity_blowup_rate(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha, double t_lo = 1e-4,
                                      double t_hi = 1e-2, std::size_t samples = 21) {
  c.validate(d.mode_count());
  for (double b : c.b)
    if (b != 0) throw std::invalid_argument("velocity_blowup_rate: requires u1 = 0");
  std::size_t active = 0;
  for (double a : c.a) active += (a != 0);
  if (active == 0) throw std::invalid_argument("velocity_blowup_rate: u0 = 0");
  BlowupFit fit{NAN, alpha.value() - 1.0, active > 1, log_times(t_lo, t_hi, samples), {}};
  std::vector<double> y, v;
  for (double t : fit.times) {
    detail::state_at(d, c, alpha, t, y, v);
    fit.norms.push_back(frac_power_norm(d, v, 0.0));
  }
  fit.exponent = fit_loglog_slope(fit.times, fit.norms);
  return fit;
}

}  // namespace fdw
