#pragma once

#include <cmath>
#include <cstdio>
#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdw/dwsolver.hpp"
#include "fdw/fracops.hpp"
#include "fdw/frac_order.hpp"
#include "fdw/initial_data.hpp"
#include "fdw/quadrature.hpp"
#include "fdw/regularity_lab.hpp"
#include "fdw/spectral_domain.hpp"

namespace fdw {

// 1-D multiplier h with its derivative
struct MultiplierField {
  std::function<double(double)> h;
  std::function<double(double)> dh;

  // h(x) = 2x/L - 1, equal to the outward normal at both endpoints
  static MultiplierField interval_normal(double length) {
    if (!(length > 0)) throw std::invalid_argument("MultiplierField: L must be positive");
    return {[length](double x) { return 2.0 * x / length - 1.0; }, [length](double) { return 2.0 / length; }};
  }
};

struct TraceSeries {
  TimeGrid grid;
  std::vector<BoundaryPoint> points;
  std::vector<double> values;  // [time][point]
  double max_tail_share = 0;

  double at(std::size_t i, std::size_t p) const { return values[i * points.size() + p]; }

  // trace as a path in L^2(boundary), norm weights = boundary quadrature weights
  SampledPath as_path() const {
    HilbertNorm w;
    for (const auto& b : points) w.weights.push_back(b.weight);
    SampledPath p(grid, points.size(), w);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t k = 0; k < points.size(); ++k) p(i, k) = at(i, k);
    return p;
  }
};

inline void write_trace_csv(std::ostream& os, const TraceSeries& s) {
  os << "t,point,value\n";
  char buf[96];
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    for (std::size_t p = 0; p < s.points.size(); ++p) {
      std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g\n", s.grid.node(i), p, s.at(i, p));
      os << buf;
    }
}

constexpr double kTraceTailShare = 0.3;
constexpr std::size_t kTraceTailMinModes = 16;  // fewer modes say nothing about the tail

// d_nu u(t, x_b) = sum_n c_n(t) d_nu e_n(x_b). The upper half of the modes
// must carry at most kTraceTailShare of sum lambda_n^(1/2) |c_n(t)|.
inline TraceSeries normal_trace(const SpectralDomain& d, const ModeCoefficients& c, const ModeEvolution& ev,
                                const TimeGrid& grid) {
  c.validate(d.mode_count());
  if (ev.modes() != d.mode_count() || ev.times() != grid.size())
    throw std::invalid_argument("normal_trace: evolution table does not match domain or grid");
  const auto& bnd = d.boundary();
  const std::size_t nm = d.mode_count(), np = bnd.size();
  std::vector<double> dn(nm * np);
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t n = 0; n < nm; ++n) dn[p * nm + n] = d.normal_derivative(n, bnd[p]);

  TraceSeries s{grid, bnd, std::vector<double>(grid.size() * np), 0.0};
  std::vector<double> cn(nm), terms(nm), weight(nm);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t n = 0; n < nm; ++n) {
      cn[n] = ev.state(n, i, c.a[n], c.b[n]).y;
      weight[n] = std::sqrt(d.eigenvalue(n)) * std::fabs(cn[n]);
    }
    if (nm >= kTraceTailMinModes) s.max_tail_share = std::max(s.max_tail_share, upper_half_share(weight));
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t n = 0; n < nm; ++n) terms[n] = cn[n] * dn[p * nm + n];
      s.values[i * np + p] = quad::pairwise_sum(terms);
    }
  }
  if (s.max_tail_share > kTraceTailShare)
    throw std::runtime_error("normal_trace: mode sum has not stabilized (upper-half share " + std::to_string(s.max_tail_share) +
                             " > " + std::to_string(kTraceTailShare) + "); use faster coefficient decay or more modes");
  return s;
}

inline TraceSeries normal_trace(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha, const TimeGrid& grid) {
  const std::vector<double> t = grid.nodes();
  return normal_trace(d, c, ModeEvolution(alpha, d.eigenvalues(), t), grid);
}

// int_0^T sum_b w_b |d_nu u|^2 dt
inline double trace_energy(const TraceSeries& s) {
  std::vector<double> f(s.grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double acc = 0;
    for (std::size_t p = 0; p < s.points.size(); ++p) acc += s.points[p].weight * s.at(i, p) * s.at(i, p);
    f[i] = acc;
  }
  return quad::trapezoid(f, s.grid.step());
}

// ||grad u0||^2 + ||u1||^2
inline double initial_energy(const SpectralDomain& d, const ModeCoefficients& c) { return h10_energy(d, c) + l2_energy(c.b); }

struct HiddenDraw {
  std::size_t index;
  double ratio;
  double tail_share;
};

struct HiddenRatioTable {
  double max_ratio = 0;
  std::size_t skipped = 0;
  std::vector<HiddenDraw> draws;
};

inline HiddenRatioTable hidden_inequality_ratio(const SpectralDomain& d, std::span<const ModeCoefficients> ensemble,
                                                FracOrder alpha, const TimeGrid& grid) {
  const std::vector<double> t = grid.nodes();
  const ModeEvolution ev(alpha, d.eigenvalues(), t);
  HiddenRatioTable tab;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const double e0 = initial_energy(d, ensemble[k]);
    if (e0 == 0) {
      ++tab.skipped;
      continue;
    }
    const TraceSeries s = normal_trace(d, ensemble[k], ev, grid);
    const double r = trace_energy(s) / e0;
    tab.draws.push_back({k, r, s.max_tail_share});
    tab.max_ratio = std::max(tab.max_ratio, r);
  }
  return tab;
}

struct SmoothFunction {
  std::function<double(double)> f, df, d2f;
};

struct MultiplierIdentity {
  double lhs;
  double rhs;
  double residual;
};

// 2 int w'' h w' dx = [h w'^2] - int h' w'^2 dx on (0, L), Gauss quadrature
inline MultiplierIdentity multiplier_identity_check(const SmoothFunction& w, const MultiplierField& h, const SpectralDomain& d,
                                                    std::size_t gauss_points = 64) {
  if (d.kind() != DomainKind::interval)
    throw std::invalid_argument("multiplier_identity_check: interval only (h = nu is not C^1 at rectangle corners)");
  const double l = d.length();
  if (std::fabs(w.f(0.0)) > 1e-10 || std::fabs(w.f(l)) > 1e-10)
    throw std::invalid_argument("multiplier_identity_check: w must vanish on the boundary (|w| <= 1e-10)");
  const quad::Rule r = quad::composite_gauss(0.0, l, 1, gauss_points);
  std::vector<double> left(r.size()), vol(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double x = r.nodes[i], dw = w.df(x);
    left[i] = r.weights[i] * 2.0 * w.d2f(x) * h.h(x) * dw;
    vol[i] = r.weights[i] * h.dh(x) * dw * dw;
  }
  const double lhs = quad::pairwise_sum(left);
  const double d0 = w.df(0.0), dl = w.df(l);
  const double rhs = h.h(l) * dl * dl - h.h(0.0) * d0 * d0 - quad::pairwise_sum(vol);
  return {lhs, rhs, std::fabs(lhs - rhs) / (std::fabs(lhs) + std::fabs(rhs) + 1.0)};
}

namespace detail {

// G[n][m] = int e_n h e_m', V[m][k] = int h' e_m' e_k'
struct MultiplierMatrices {
  std::vector<double> g, v;
  std::size_t n;
};

inline MultiplierMatrices multiplier_matrices(const SpectralDomain& d, const MultiplierField& h) {
  const std::size_t nm = d.mode_count();
  // enrich: products of two modes need twice the resolution of one
  const quad::Rule r = quad::composite_gauss(0.0, d.length(), std::max<std::size_t>(16, 2 * nm), 8);
  MultiplierMatrices m{std::vector<double>(nm * nm), std::vector<double>(nm * nm), nm};
  std::vector<double> e(nm), de(nm);
  for (std::size_t q = 0; q < r.size(); ++q) {
    const Point x{r.nodes[q], 0.0};
    for (std::size_t n = 0; n < nm; ++n) {
      e[n] = d.eigenfunction(n, x);
      de[n] = d.gradient(n, x)[0];
    }
    const double wh = r.weights[q] * h.h(x[0]), wdh = r.weights[q] * h.dh(x[0]);
    for (std::size_t a = 0; a < nm; ++a)
      for (std::size_t b = 0; b < nm; ++b) {
        m.g[a * nm + b] += wh * e[a] * de[b];
        m.v[a * nm + b] += wdh * de[a] * de[b];
      }
  }
  return m;
}

}  // namespace detail

struct FractionalIdentity {
  double lhs;  // int_0^T int_bdry |I^beta d_nu u|^2
  double duality;
  double volume;
  double rhs;
  double residual;
  std::size_t steps;
};

// Time-integrated identity on the interval with h = 2x/L - 1:
//   int_0^T sum_bdry |I^b d_nu u|^2 = 2 int_0^T <I^b d^alpha u, h I^b u_x> + int_0^T int h' |I^b u_x|^2.
// The Caputo derivative comes from the sampled velocity, so the residual
// measures the time discretization.
inline FractionalIdentity fractional_identity_check(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha,
                                                    double beta, double theta, const TimeGrid& grid) {
  if (d.kind() != DomainKind::interval) throw std::invalid_argument("fractional_identity_check: interval only");
  if (!(beta > 0 && beta <= 1)) throw std::domain_error("fractional_identity_check: beta must lie in (0, 1]");
  ThetaRange::of(ThetaPurpose::identity_overlap, alpha).require(theta);
  c.validate(d.mode_count());
  const std::size_t nm = d.mode_count();
  if (c.is_zero()) return {0, 0, 0, 0, 0, grid.steps()};

  const std::vector<double> t = grid.nodes();
  const ModeEvolution ev(alpha, d.eigenvalues(), t);
  const SampledPath y = mode_trajectories(ev, c, FieldKind::value, grid);
  const SampledPath yv = mode_trajectories(ev, c, FieldKind::velocity, grid);
  const SampledPath w = frac_integral(y, beta);
  const SampledPath dcap = frac_integral(caputo_from_velocity(yv, alpha.value()), beta);
  const SampledPath trace_int = frac_integral(normal_trace(d, c, ev, grid).as_path(), beta);

  const detail::MultiplierMatrices mm = detail::multiplier_matrices(d, MultiplierField::interval_normal(d.length()));
  std::vector<double> left(grid.size()), dual(grid.size()), vol(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    left[i] = trace_int.norm_sq_at(i);
    double s1 = 0, s2 = 0;
    for (std::size_t a = 0; a < nm; ++a)
      for (std::size_t b = 0; b < nm; ++b) {
        s1 += dcap(i, a) * mm.g[a * nm + b] * w(i, b);
        s2 += w(i, a) * mm.v[a * nm + b] * w(i, b);
      }
    dual[i] = 2.0 * s1;
    vol[i] = s2;
  }
  const double h = grid.step();
  FractionalIdentity r{quad::trapezoid(left, h), quad::trapezoid(dual, h), quad::trapezoid(vol, h), 0, 0, grid.steps()};
  r.rhs = r.duality + r.volume;
  const double den = std::max(std::fabs(r.lhs), std::fabs(r.rhs));
  r.residual = den > 0 ? std::fabs(r.lhs - r.rhs) / den : 0.0;
  return r;
}

// Same identity for the differences I^b(.)(t) - I^b(.)(tau) at the node pairs (i, j).
inline std::vector<double> two_time_identity_check(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha,
                                                   double beta, const TimeGrid& grid,
                                                   std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  if (d.kind() != DomainKind::interval) throw std::invalid_argument("two_time_identity_check: interval only");
  if (!(beta > 0 && beta <= 1)) throw std::domain_error("two_time_identity_check: beta must lie in (0, 1]");
  c.validate(d.mode_count());
  const std::size_t nm = d.mode_count();
  const std::vector<double> t = grid.nodes();
  const ModeEvolution ev(alpha, d.eigenvalues(), t);
  const SampledPath w = frac_integral(mode_trajectories(ev, c, FieldKind::value, grid), beta);
  // exact Caputo from the equation: d^alpha c_n = -lambda_n c_n
  const SampledPath dcap = frac_integral(mode_trajectories(ev, c, FieldKind::caputo, grid), beta);
  const detail::MultiplierMatrices mm = detail::multiplier_matrices(d, MultiplierField::interval_normal(d.length()));
  const auto& bnd = d.boundary();
  std::vector<double> out;
  std::vector<double> dw(nm), dd(nm);
  for (const auto& [i, j] : pairs) {
    if (i >= grid.size() || j >= grid.size()) throw std::out_of_range("two_time_identity_check: node index");
    for (std::size_t n = 0; n < nm; ++n) {
      dw[n] = w(i, n) - w(j, n);
      dd[n] = dcap(i, n) - dcap(j, n);
    }
    double lhs = 0;
    for (const auto& b : bnd) {
      double tr = 0;
      for (std::size_t n = 0; n < nm; ++n) tr += dw[n] * d.normal_derivative(n, b);
      lhs += b.weight * tr * tr;
    }
    double rhs = 0;
    for (std::size_t a = 0; a < nm; ++a)
      for (std::size_t b = 0; b < nm; ++b) rhs += 2.0 * dd[a] * mm.g[a * nm + b] * dw[b] + dw[a] * mm.v[a * nm + b] * dw[b];
    const double den = std::max(std::fabs(lhs), std::fabs(rhs));
    out.push_back(den > 0 ? std::fabs(lhs - rhs) / den : 0.0);
  }
  return out;
}

struct TraceNormReport {
  NormReport hbeta;    // ||I^b d_nu u||^2_{L^2} + [I^b d_nu u]^2_{H^b}
  NormReport plain;    // ||d_nu u||^2_{L^2(0,T;L^2(bdry))}
  double equivalence;  // ||d_nu u||_{L^2} / ||I^b d_nu u||_{H^b}
};

inline TraceNormReport trace_seminorm_bound(const SpectralDomain& d, const ModeCoefficients& c, const ModeEvolution& ev,
                                            double beta, const TimeGrid& grid) {
  if (!(beta > 0 && beta < 1)) throw std::domain_error("trace_seminorm_bound: beta must lie in (0, 1)");
  const double e0 = initial_energy(d, c);
  const double al = ev.alpha().value();
  TraceNormReport r;
  r.hbeta = {"trace_Ibeta_Hbeta_sq", "hidden regularity (fractional trace form)", al, NAN, beta, grid.t_end(), d.mode_count(),
             grid.steps(), 0.0, e0};
  r.plain = {"trace_L2_sq", "hidden regularity (boundary trace)", al, NAN, beta, grid.t_end(), d.mode_count(), grid.steps(), 0.0, e0};
  r.equivalence = NAN;
  if (c.is_zero()) return r;
  const SampledPath p = normal_trace(d, c, ev, grid).as_path();
  const SampledPath ip = frac_integral(p, beta);
  const double l2 = l2_norm(ip), semi = gagliardo_seminorm(ip, beta);
  r.hbeta.value = l2 * l2 + semi * semi;
  const double plain = l2_norm(p);
  r.plain.value = plain * plain;
  r.equivalence = r.hbeta.value > 0 ? plain / std::sqrt(r.hbeta.value) : NAN;
  return r;
}

inline TraceNormReport trace_seminorm_bound(const SpectralDomain& d, const ModeCoefficients& c, FracOrder alpha,
                                            double beta, const TimeGrid& grid) {
  const std::vector<double> t = grid.nodes();
  return trace_seminorm_bound(d, c, ModeEvolution(alpha, d.eigenvalues(), t), beta, grid);
}

inline nlohmann::json to_json(const HiddenRatioTable& t) {
  nlohmann::json draws = nlohmann::json::array();
  for (const auto& d : t.draws) draws.push_back({{"draw", d.index}, {"ratio", d.ratio}, {"tail_share", d.tail_share}});
  return {{"max_ratio", t.max_ratio}, {"skipped", t.skipped}, {"draws", draws}};
}

}  // namespace fdw
