#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdw/mittag_leffler.hpp"
#include "fdw/quadrature.hpp"

namespace fdw {

class TimeGrid {
 public:
  TimeGrid(double t_end, std::size_t steps) : t_end_(t_end), steps_(steps) {
    if (!(t_end > 0) || !std::isfinite(t_end)) throw std::invalid_argument("TimeGrid: t_end must be positive");
    if (steps < 2) throw std::invalid_argument("TimeGrid: need at least 2 steps");
  }
  double t_end() const { return t_end_; }
  std::size_t steps() const { return steps_; }
  std::size_t size() const { return steps_ + 1; }
  double step() const { return t_end_ / static_cast<double>(steps_); }
  double node(std::size_t i) const { return i == steps_ ? t_end_ : t_end_ * static_cast<double>(i) / static_cast<double>(steps_); }
  std::vector<double> nodes() const {
    std::vector<double> t(size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = node(i);
    return t;
  }
  TimeGrid refined(std::size_t factor = 2) const { return TimeGrid(t_end_, steps_ * factor); }
  bool operator==(const TimeGrid&) const = default;

 private:
  double t_end_;
  std::size_t steps_;
};

// Diagonal weights on coefficient space; empty means Euclidean.
struct HilbertNorm {
  std::vector<double> weights;

  double norm_sq(std::span<const double> v) const {
    double s = 0;
    if (weights.empty()) {
      for (double x : v) s += x * x;
    } else {
      if (weights.size() != v.size()) throw std::invalid_argument("HilbertNorm: dimension mismatch");
      for (std::size_t i = 0; i < v.size(); ++i) s += weights[i] * v[i] * v[i];
    }
    return s;
  }
  double inner(std::span<const double> u, std::span<const double> v) const {
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += (weights.empty() ? 1.0 : weights[i]) * u[i] * v[i];
    return s;
  }
  bool operator==(const HilbertNorm&) const = default;
};

struct KernelPhi {
  double beta;

  explicit KernelPhi(double b) : beta(b) {
    if (!(b > 0)) throw std::domain_error("KernelPhi: beta must be positive");
  }
  double operator()(double t) const { return t > 0 ? std::pow(t, beta - 1) / gamma(beta) : 0.0; }
  double integral(double t) const { return std::pow(t, beta) / gamma(beta + 1); }
};

class SampledPath {
 public:
  SampledPath(TimeGrid grid, std::size_t dim = 1, HilbertNorm norm = {})
      : grid_(grid), dim_(dim), norm_(std::move(norm)), values_(grid.size() * dim, 0.0) {
    if (dim == 0) throw std::invalid_argument("SampledPath: dimension must be positive");
    if (!norm_.weights.empty() && norm_.weights.size() != dim)
      throw std::invalid_argument("SampledPath: norm weights do not match dimension");
  }

  static SampledPath from_function(TimeGrid grid, const std::function<double(double)>& f) {
    SampledPath p(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) p(i) = f(grid.node(i));
    p.check_finite();
    return p;
  }

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return grid_.size(); }
  const HilbertNorm& norm() const { return norm_; }
  void set_norm(HilbertNorm n) {
    if (!n.weights.empty() && n.weights.size() != dim_) throw std::invalid_argument("SampledPath: norm weights do not match dimension");
    norm_ = std::move(n);
  }

  double& operator()(std::size_t i, std::size_t c = 0) { return values_[i * dim_ + c]; }
  double operator()(std::size_t i, std::size_t c = 0) const { return values_[i * dim_ + c]; }
  std::span<double> row(std::size_t i) { return {values_.data() + i * dim_, dim_}; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  const std::vector<double>& data() const { return values_; }

  // component c as a scalar path
  SampledPath component(std::size_t c) const {
    SampledPath p(grid_);
    for (std::size_t i = 0; i < size(); ++i) p(i) = (*this)(i, c);
    return p;
  }

  double norm_sq_at(std::size_t i) const { return norm_.norm_sq(row(i)); }

  void check_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("SampledPath: non-finite value");
  }

  SampledPath& operator+=(const SampledPath& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  SampledPath& operator-=(const SampledPath& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  SampledPath& operator*=(double a) {
    for (double& v : values_) v *= a;
    return *this;
  }

  void require_compatible(const SampledPath& o) const {
    if (!(grid_ == o.grid_) || dim_ != o.dim_) throw std::invalid_argument("SampledPath: incompatible paths");
  }

 private:
  TimeGrid grid_;
  std::size_t dim_;
  HilbertNorm norm_;
  std::vector<double> values_;
};

inline SampledPath operator+(SampledPath a, const SampledPath& b) { return a += b; }
inline SampledPath operator-(SampledPath a, const SampledPath& b) { return a -= b; }
inline SampledPath operator*(double s, SampledPath a) { return a *= s; }

// ||v||_{L^2(0,T;H)}, trapezoid in time
inline double l2_norm(const SampledPath& v) {
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v.norm_sq_at(i);
  return std::sqrt(quad::trapezoid(sq, v.grid().step()));
}

namespace detail {

// (1+u)^p - 1 without cancellation
inline long double pow1p_m1(long double u, long double p) { return std::expm1(p * std::log1p(u)); }

// Product-trapezoid weights, scaled by h^beta / Gamma(beta + 2):
// interior[k] multiplies f_{n-k} (1 <= k < n), first[n] multiplies f_0, f_n has weight 1.
struct ProductTrapezoid {
  std::vector<double> interior, first;
  double scale;

  ProductTrapezoid(double beta, std::size_t steps, double h) : interior(steps + 1, 0.0), first(steps + 1, 0.0) {
    const long double p = beta + 1.0L;
    for (std::size_t k = 1; k <= steps; ++k) {
      const long double kk = static_cast<long double>(k);
      if (k == 1) {
        interior[k] = static_cast<double>(std::pow(2.0L, p) - 2.0L);
      } else {
        interior[k] = static_cast<double>(std::pow(kk, p) * (pow1p_m1(1.0L / kk, p) + pow1p_m1(-1.0L / kk, p)));
      }
    }
    for (std::size_t n = 1; n <= steps; ++n) {
      const long double nn = static_cast<long double>(n);
      if (n == 1) {
        first[n] = beta;
      } else {
        first[n] = static_cast<double>(std::pow(nn, p) * (pow1p_m1(-1.0L / nn, p) + p / nn));
      }
    }
    scale = std::pow(h, beta) / gamma(beta + 2.0);
  }
};

}  // namespace detail

// I^beta f at every node; the kernel is integrated exactly against the
// piecewise-linear interpolant of f.
inline SampledPath frac_integral(const SampledPath& f, double beta) {
  if (!(beta > 0)) throw std::domain_error("frac_integral: beta must be positive");
  if (!(beta <= 1)) throw std::domain_error("frac_integral: beta must not exceed 1");
  const std::size_t m = f.grid().steps(), d = f.dim();
  const detail::ProductTrapezoid w(beta, m, f.grid().step());
  SampledPath out(f.grid(), d, f.norm());
  std::vector<double> acc(d);
  for (std::size_t n = 1; n <= m; ++n) {
    const auto f0 = f.row(0), fn = f.row(n);
    for (std::size_t c = 0; c < d; ++c) acc[c] = w.first[n] * f0[c] + fn[c];
    for (std::size_t j = 1; j < n; ++j) {
      const double wj = w.interior[n - j];
      const auto fj = f.row(j);
      for (std::size_t c = 0; c < d; ++c) acc[c] += wj * fj[c];
    }
    auto o = out.row(n);
    for (std::size_t c = 0; c < d; ++c) o[c] = w.scale * acc[c];
  }
  return out;
}

// Inverse of frac_integral at the discrete level (triangular solve). The value
// at t=0 is not determined by I^beta f and must be supplied.
inline SampledPath frac_integral_inverse(const SampledPath& g, double beta, std::span<const double> initial) {
  if (!(beta > 0 && beta <= 1)) throw std::domain_error("frac_integral_inverse: beta must lie in (0, 1]");
  if (initial.size() != g.dim()) throw std::invalid_argument("frac_integral_inverse: initial value dimension");
  const std::size_t m = g.grid().steps(), d = g.dim();
  const detail::ProductTrapezoid w(beta, m, g.grid().step());
  SampledPath f(g.grid(), d, g.norm());
  for (std::size_t c = 0; c < d; ++c) f(0, c) = initial[c];
  for (std::size_t n = 1; n <= m; ++n) {
    for (std::size_t c = 0; c < d; ++c) {
      double s = g(n, c) / w.scale - w.first[n] * f(0, c);
      for (std::size_t j = 1; j < n; ++j) s -= w.interior[n - j] * f(j, c);
      f(n, c) = s;
    }
  }
  return f;
}

enum class DerivativeSource { analytic, finite_difference, velocity };

inline const char* to_string(DerivativeSource s) {
  switch (s) {
    case DerivativeSource::analytic: return "analytic";
    case DerivativeSource::finite_difference: return "finite_difference";
    case DerivativeSource::velocity: return "velocity";
  }
  return "?";
}

struct CaputoResult {
  SampledPath values;
  DerivativeSource source;
};

inline void require_wave_order(double alpha, const char* who) {
  if (!(alpha > 1 && alpha < 2)) throw std::domain_error(std::string(who) + ": alpha must lie in (1, 2)");
}

// Caputo derivative of order alpha in (1,2) from samples of f''.
inline CaputoResult caputo_derivative(const SampledPath& f_second, double alpha,
                                      DerivativeSource source = DerivativeSource::analytic) {
  require_wave_order(alpha, "caputo_derivative");
  return {frac_integral(f_second, 2.0 - alpha), source};
}

// Caputo derivative of order alpha in (1,2) from samples of f'. f'' is taken
// piecewise constant on each cell, which keeps the scheme usable when f'' is
// singular at t=0.
inline SampledPath caputo_from_velocity(const SampledPath& f_first, double alpha) {
  require_wave_order(alpha, "caputo_from_velocity");
  const double g = 2.0 - alpha, h = f_first.grid().step();
  const std::size_t m = f_first.grid().steps(), d = f_first.dim();
  std::vector<double> kernel(m + 1);  // kernel[k] = k^g - (k-1)^g
  for (std::size_t k = 1; k <= m; ++k) kernel[k] = std::pow(static_cast<double>(k), g) - std::pow(static_cast<double>(k - 1), g);
  const double scale = std::pow(h, g - 1.0) / gamma(g + 1.0);  // includes the 1/h of the difference
  SampledPath out(f_first.grid(), d, f_first.norm());
  for (std::size_t n = 1; n <= m; ++n) {
    for (std::size_t j = 0; j < n; ++j) {
      const double wk = scale * kernel[n - j];
      for (std::size_t c = 0; c < d; ++c) out(n, c) += wk * (f_first(j + 1, c) - f_first(j, c));
    }
  }
  return out;
}

// Caputo derivative of order alpha in (0,1): I^(1-alpha) f'.
inline SampledPath caputo_derivative_low(const SampledPath& f_first, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw std::domain_error("caputo_derivative_low: alpha must lie in (0, 1)");
  return frac_integral(f_first, 1.0 - alpha);
}

// Second derivative by central differences (one-sided at the ends).
inline SampledPath second_difference(const SampledPath& f) {
  const std::size_t m = f.grid().steps(), d = f.dim();
  const double h2 = f.grid().step() * f.grid().step();
  SampledPath out(f.grid(), d, f.norm());
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t i = 1; i < m; ++i) out(i, c) = (f(i + 1, c) - 2 * f(i, c) + f(i - 1, c)) / h2;
    if (m >= 3) {
      out(0, c) = (2 * f(0, c) - 5 * f(1, c) + 4 * f(2, c) - f(3, c)) / h2;
      out(m, c) = (2 * f(m, c) - 5 * f(m - 1, c) + 4 * f(m - 2, c) - f(m - 3, c)) / h2;
    } else {
      out(0, c) = out(1, c);
      out(m, c) = out(m - 1, c);
    }
  }
  return out;
}

struct YoungBound {
  double lhs;
  double rhs;
  static constexpr double kSlack = 1e-3;
  bool holds() const { return lhs <= rhs * (1 + kSlack); }
};

inline YoungBound young_bound_check(const SampledPath& f, double beta) {
  if (f.dim() != 1) throw std::invalid_argument("young_bound_check: scalar path required");
  const double lhs = l2_norm(frac_integral(f, beta));
  const double rhs = std::pow(f.grid().t_end(), beta) / gamma(beta + 1.0) * l2_norm(f);
  return {lhs, rhs};
}

// ||I^beta I^gamma f - I^(beta+gamma) f|| / ||I^(beta+gamma) f||
inline double semigroup_check(const SampledPath& f, double beta, double gamma_order) {
  if (!(beta > 0) || !(gamma_order > 0)) throw std::invalid_argument("semigroup_check: orders must be positive");
  if (beta + gamma_order > 1) throw std::invalid_argument("semigroup_check: beta + gamma must not exceed 1");
  const SampledPath direct = frac_integral(f, beta + gamma_order);
  const double den = l2_norm(direct);
  if (den == 0) return 0.0;
  return l2_norm(frac_integral(frac_integral(f, gamma_order), beta) - direct) / den;
}

namespace detail {

// Integrals over the unit square of u^2 and u*y against (u+y)^-(1+2beta).
inline std::pair<double, double> adjacent_cell_moments(double beta) {
  const double q = 1.0 + 2.0 * beta;
  double p = 1.0 / (3.0 * (4.0 - q)), r = 1.0 / (6.0 * (4.0 - q));
  const quad::Rule g = quad::composite_gauss(1.0, 2.0, 1, 24);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.nodes[i], a = s - 1.0;
    const double k = std::pow(s, -q);
    p += g.weights[i] * k * (1.0 - a * a * a) / 3.0;
    r += g.weights[i] * k * (s * (1.0 - a * a) / 2.0 - (1.0 - a * a * a) / 3.0);
  }
  return {p, r};
}

}  // namespace detail

// Gagliardo seminorm of the piecewise-linear interpolant of v. Cells touching
// the diagonal are integrated in closed form, the rest with 3x3 Gauss points.
inline double gagliardo_seminorm(const SampledPath& v, double beta, const HilbertNorm& h_norm) {
  if (!(beta > 0)) throw std::domain_error("gagliardo_seminorm: beta must be positive");
  if (!(beta < 1)) throw std::domain_error("gagliardo_seminorm: beta must be below 1");
  const std::size_t m = v.grid().steps(), d = v.dim();
  const double h = v.grid().step();
  const double cell = std::pow(h, 3.0 - 2.0 * beta);

  std::vector<double> slope(m * d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < d; ++c) slope[i * d + c] = (v(i + 1, c) - v(i, c)) / h;
  auto slope_row = [&](std::size_t i) { return std::span<const double>(slope.data() + i * d, d); };

  // diagonal cells
  double diag = 0;
  for (std::size_t i = 0; i < m; ++i) diag += h_norm.norm_sq(slope_row(i));
  diag *= 2.0 / ((2.0 - 2.0 * beta) * (3.0 - 2.0 * beta));

  // adjacent cells
  const auto [p, q] = detail::adjacent_cell_moments(beta);
  double adj = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const auto a = slope_row(i), b = slope_row(i + 1);
    adj += p * (h_norm.norm_sq(a) + h_norm.norm_sq(b)) + 2.0 * q * h_norm.inner(a, b);
  }

  // remaining cells: interpolant at three Gauss points per cell
  const quad::Rule g = quad::gauss_legendre(3);
  std::vector<double> x(3), w(3);
  for (int k = 0; k < 3; ++k) {
    x[k] = 0.5 * (g.nodes[k] + 1.0);
    w[k] = 0.5 * g.weights[k];
  }
  std::vector<double> pts(m * 3 * d);
  for (std::size_t i = 0; i < m; ++i)
    for (int k = 0; k < 3; ++k)
      for (std::size_t c = 0; c < d; ++c) pts[(i * 3 + k) * d + c] = v(i, c) + slope[i * d + c] * x[k] * h;
  // kernel[(dist * 3 + k) * 3 + l] for cells dist apart, first point k, second l
  std::vector<double> kernel(m * 9, 0.0);
  for (std::size_t dist = 2; dist < m; ++dist)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l)
        kernel[(dist * 3 + k) * 3 + l] = w[k] * w[l] * std::pow(static_cast<double>(dist) + x[l] - x[k], -1.0 - 2.0 * beta);
  const bool euclid = h_norm.weights.empty();
  double far = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 2; j < m; ++j) {
      const double* kn = &kernel[(j - i) * 9];
      double cellsum = 0;
      for (int k = 0; k < 3; ++k) {
        const double* a = &pts[(i * 3 + k) * d];
        for (int l = 0; l < 3; ++l) {
          const double* b = &pts[(j * 3 + l) * d];
          double s = 0;
          for (std::size_t c = 0; c < d; ++c) {
            const double diff = a[c] - b[c];
            s += (euclid ? 1.0 : h_norm.weights[c]) * diff * diff;
          }
          cellsum += kn[k * 3 + l] * s;
        }
      }
      far += cellsum;
    }
  }
  // far cells: h^2 area times h^-(1+2beta) kernel scale gives the same h^(1-2beta) factor
  const double total = cell * (diag + 2.0 * adj) + 2.0 * std::pow(h, 1.0 - 2.0 * beta) * far;
  return std::sqrt(std::max(total, 0.0));
}

inline double gagliardo_seminorm(const SampledPath& v, double beta) { return gagliardo_seminorm(v, beta, v.norm()); }

// full H^beta(0,T;H) norm: (||v||_{L^2}^2 + [v]^2)^(1/2)
inline double hbeta_norm(const SampledPath& v, double beta) {
  const double l2 = l2_norm(v), s = gagliardo_seminorm(v, beta);
  return std::sqrt(l2 * l2 + s * s);
}

struct EquivalenceStudy {
  double ratio_min = 0;
  double ratio_max = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::vector<double> ratios;
  double spread() const { return ratio_min > 0 ? ratio_max / ratio_min : INFINITY; }
};

// r(u) = ||I^beta u||_{H^beta} / ||u||_{L^2} over an ensemble
inline EquivalenceStudy norm_equivalence_study(std::span<const SampledPath> ensemble, double beta) {
  if (ensemble.empty()) throw std::invalid_argument("norm_equivalence_study: empty ensemble");
  if (!(beta > 0 && beta < 1)) throw std::domain_error("norm_equivalence_study: beta must lie in (0, 1)");
  EquivalenceStudy st;
  for (const SampledPath& u : ensemble) {
    const double den = l2_norm(u);
    if (den == 0) {
      ++st.skipped;
      continue;
    }
    const double r = hbeta_norm(frac_integral(u, beta), beta) / den;
    st.ratios.push_back(r);
    if (st.evaluated == 0 || r < st.ratio_min) st.ratio_min = r;
    if (st.evaluated == 0 || r > st.ratio_max) st.ratio_max = r;
    ++st.evaluated;
  }
  return st;
}

// CSV with columns t, v0, v1, ...
inline void write_csv(std::ostream& os, const SampledPath& p) {
  os << "t";
  for (std::size_t c = 0; c < p.dim(); ++c) os << ",v" << c;
  os << "\n";
  char buf[32];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", p.grid().node(i));
    os << buf;
    for (std::size_t c = 0; c < p.dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", p(i, c));
      os << "," << buf;
    }
    os << "\n";
  }
}

inline SampledPath read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_csv: empty input");
  std::vector<double> t;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() < 2) throw std::invalid_argument("read_csv: need t and at least one value column");
    t.push_back(row.front());
    rows.emplace_back(row.begin() + 1, row.end());
  }
  if (t.size() < 3) throw std::invalid_argument("read_csv: need at least 3 rows");
  if (t.front() != 0) throw std::invalid_argument("read_csv: grid must start at t = 0");
  const TimeGrid grid(t.back(), t.size() - 1);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::fabs(t[i] - grid.node(i)) > 1e-9 * grid.t_end()) throw std::invalid_argument("read_csv: grid is not uniform");
  SampledPath p(grid, rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != p.dim()) throw std::invalid_argument("read_csv: ragged rows");
    for (std::size_t c = 0; c < p.dim(); ++c) p(i, c) = rows[i][c];
  }
  p.check_finite();
  return p;
}

}  // namespace fdw
