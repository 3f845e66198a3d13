#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdw/quadrature.hpp"

namespace fdw {

using Point = std::array<double, 2>;

enum class DomainKind { interval, rectangle };

inline const char* to_string(DomainKind k) { return k == DomainKind::interval ? "interval" : "rectangle"; }

struct ModeIndex {
  int j;
  int k;  // 0 on the interval
};

struct BoundaryPoint {
  Point x;
  Point normal;
  double weight;  // arc-length quadrature weight; 1 at the interval endpoints
  int edge;
};

struct VolumeRule {
  std::vector<Point> points;
  std::vector<double> weights;
};

class SpectralDomain {
 public:
  static SpectralDomain interval(double length, std::size_t modes) {
    if (!(length > 0) || !std::isfinite(length)) throw std::invalid_argument("build_interval: L must be positive");
    if (modes < 1) throw std::invalid_argument("build_interval: N must be at least 1");
    SpectralDomain d(DomainKind::interval, {length, 1.0}, modes);
    for (std::size_t n = 1; n <= modes; ++n) {
      d.modes_.push_back({static_cast<int>(n), 0});
      const double w = static_cast<double>(n) * std::numbers::pi / length;
      d.eigenvalues_.push_back(w * w);
    }
    d.boundary_ = {{{0.0, 0.0}, {-1.0, 0.0}, 1.0, 0}, {{length, 0.0}, {1.0, 0.0}, 1.0, 1}};
    const quad::Rule r = quad::composite_gauss(0.0, length, std::max<std::size_t>(8, 2 * modes), 8);
    for (std::size_t i = 0; i < r.size(); ++i) {
      d.volume_.points.push_back({r.nodes[i], 0.0});
      d.volume_.weights.push_back(r.weights[i]);
    }
    return d;
  }

  static SpectralDomain rectangle(double l1, double l2, std::size_t modes) {
    if (!(l1 > 0) || !(l2 > 0) || !std::isfinite(l1) || !std::isfinite(l2))
      throw std::invalid_argument("build_rectangle: side lengths must be positive");
    if (modes < 1) throw std::invalid_argument("build_rectangle: N must be at least 1");
    SpectralDomain d(DomainKind::rectangle, {l1, l2}, modes);
    struct Cand {
      double lambda;
      int j, k;
    };
    std::vector<Cand> c;
    const int cap = static_cast<int>(modes);
    for (int j = 1; j <= cap; ++j)
      for (int k = 1; k <= cap; ++k) {
        const double a = j * std::numbers::pi / l1, b = k * std::numbers::pi / l2;
        c.push_back({a * a + b * b, j, k});
      }
    std::sort(c.begin(), c.end(), [](const Cand& x, const Cand& y) {
      if (x.lambda != y.lambda) return x.lambda < y.lambda;
      if (x.j != y.j) return x.j < y.j;
      return x.k < y.k;
    });
    int jmax = 1, kmax = 1;
    for (std::size_t n = 0; n < modes; ++n) {
      d.modes_.push_back({c[n].j, c[n].k});
      d.eigenvalues_.push_back(c[n].lambda);
      jmax = std::max(jmax, c[n].j);
      kmax = std::max(kmax, c[n].k);
    }
    const quad::Rule rx = quad::composite_gauss(0.0, l1, std::max(4, 2 * jmax), 8);
    const quad::Rule ry = quad::composite_gauss(0.0, l2, std::max(4, 2 * kmax), 8);
    for (std::size_t i = 0; i < rx.size(); ++i)
      for (std::size_t k = 0; k < ry.size(); ++k) {
        d.volume_.points.push_back({rx.nodes[i], ry.nodes[k]});
        d.volume_.weights.push_back(rx.weights[i] * ry.weights[k]);
      }
    // edges: 0 bottom (y=0), 1 right (x=L1), 2 top (y=L2), 3 left (x=0)
    for (std::size_t i = 0; i < rx.size(); ++i) {
      d.boundary_.push_back({{rx.nodes[i], 0.0}, {0.0, -1.0}, rx.weights[i], 0});
      d.boundary_.push_back({{rx.nodes[i], l2}, {0.0, 1.0}, rx.weights[i], 2});
    }
    for (std::size_t k = 0; k < ry.size(); ++k) {
      d.boundary_.push_back({{l1, ry.nodes[k]}, {1.0, 0.0}, ry.weights[k], 1});
      d.boundary_.push_back({{0.0, ry.nodes[k]}, {-1.0, 0.0}, ry.weights[k], 3});
    }
    std::stable_sort(d.boundary_.begin(), d.boundary_.end(),
                     [](const BoundaryPoint& a, const BoundaryPoint& b) { return a.edge < b.edge; });
    return d;
  }

  DomainKind kind() const { return kind_; }
  double length() const { return dims_[0]; }
  const std::array<double, 2>& dimensions() const { return dims_; }
  std::size_t mode_count() const { return modes_.size(); }
  double eigenvalue(std::size_t n) const { return eigenvalues_.at(n); }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const ModeIndex& mode(std::size_t n) const { return modes_.at(n); }
  const std::vector<BoundaryPoint>& boundary() const { return boundary_; }
  const VolumeRule& volume_rule() const { return volume_; }

  bool contains(const Point& x) const {
    const double tol = 1e-12 * std::max(dims_[0], dims_[1]);
    if (!(x[0] >= -tol && x[0] <= dims_[0] + tol)) return false;
    if (kind_ == DomainKind::interval) return true;
    return x[1] >= -tol && x[1] <= dims_[1] + tol;
  }

  // e_n(x), n zero-based
  double eigenfunction(std::size_t n, const Point& x) const {
    const ModeIndex& m = modes_[n];
    if (kind_ == DomainKind::interval)
      return std::sqrt(2.0 / dims_[0]) * std::sin(m.j * std::numbers::pi * x[0] / dims_[0]);
    return 2.0 / std::sqrt(dims_[0] * dims_[1]) * std::sin(m.j * std::numbers::pi * x[0] / dims_[0]) *
           std::sin(m.k * std::numbers::pi * x[1] / dims_[1]);
  }

  Point gradient(std::size_t n, const Point& x) const {
    const ModeIndex& m = modes_[n];
    const double pi = std::numbers::pi;
    if (kind_ == DomainKind::interval) {
      const double w = m.j * pi / dims_[0];
      return {std::sqrt(2.0 / dims_[0]) * w * std::cos(w * x[0]), 0.0};
    }
    const double c = 2.0 / std::sqrt(dims_[0] * dims_[1]);
    const double wx = m.j * pi / dims_[0], wy = m.k * pi / dims_[1];
    return {c * wx * std::cos(wx * x[0]) * std::sin(wy * x[1]), c * wy * std::sin(wx * x[0]) * std::cos(wy * x[1])};
  }

  double normal_derivative(std::size_t n, const BoundaryPoint& b) const {
    const Point g = gradient(n, b.x);
    return g[0] * b.normal[0] + g[1] * b.normal[1];
  }

 private:
  SpectralDomain(DomainKind kind, std::array<double, 2> dims, std::size_t modes) : kind_(kind), dims_(dims) {
    modes_.reserve(modes);
    eigenvalues_.reserve(modes);
  }

  DomainKind kind_;
  std::array<double, 2> dims_;
  std::vector<ModeIndex> modes_;
  std::vector<double> eigenvalues_;
  std::vector<BoundaryPoint> boundary_;
  VolumeRule volume_;
};

inline SpectralDomain build_interval(double length, std::size_t modes) { return SpectralDomain::interval(length, modes); }
inline SpectralDomain build_rectangle(double l1, double l2, std::size_t modes) {
  return SpectralDomain::rectangle(l1, l2, modes);
}

// <f, e_n> from samples of f at the domain's volume quadrature points
inline std::vector<double> project_samples(const SpectralDomain& d, std::span<const double> samples) {
  const VolumeRule& v = d.volume_rule();
  if (samples.size() != v.points.size()) throw std::invalid_argument("project: sample count does not match quadrature");
  for (double s : samples)
    if (!std::isfinite(s)) throw std::invalid_argument("project: non-finite sample");
  std::vector<double> out(d.mode_count());
  std::vector<double> terms(samples.size());
  for (std::size_t n = 0; n < d.mode_count(); ++n) {
    for (std::size_t q = 0; q < samples.size(); ++q) terms[q] = v.weights[q] * samples[q] * d.eigenfunction(n, v.points[q]);
    out[n] = quad::pairwise_sum(terms);
  }
  return out;
}

inline std::vector<double> project(const SpectralDomain& d, const std::function<double(const Point&)>& f) {
  const VolumeRule& v = d.volume_rule();
  std::vector<double> samples(v.points.size());
  for (std::size_t q = 0; q < samples.size(); ++q) samples[q] = f(v.points[q]);
  return project_samples(d, samples);
}

inline std::vector<double> project(const SpectralDomain& d, const std::function<double(double)>& f) {
  return project(d, std::function<double(const Point&)>([&f](const Point& x) { return f(x[0]); }));
}

inline void require_length(const SpectralDomain& d, std::span<const double> coeffs, const char* who) {
  if (coeffs.size() != d.mode_count())
    throw std::invalid_argument(std::string(who) + ": coefficient count " + std::to_string(coeffs.size()) +
                                " does not match mode count " + std::to_string(d.mode_count()));
}

inline std::vector<double> synthesize(const SpectralDomain& d, std::span<const double> coeffs, std::span<const Point> points) {
  require_length(d, coeffs, "synthesize");
  std::vector<double> out(points.size());
  std::vector<double> terms(coeffs.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (!d.contains(points[p])) throw std::invalid_argument("synthesize: point outside the domain closure");
    for (std::size_t n = 0; n < coeffs.size(); ++n) terms[n] = coeffs[n] * d.eigenfunction(n, points[p]);
    out[p] = quad::pairwise_sum(terms);
  }
  return out;
}

// (sum lambda_n^(2 theta) c_n^2)^(1/2)
inline double frac_power_norm(std::span<const double> eigenvalues, std::span<const double> coeffs, double theta) {
  if (!(theta >= -1 && theta <= 1)) throw std::invalid_argument("frac_power_norm: theta must lie in [-1, 1]");
  if (coeffs.size() > eigenvalues.size()) throw std::invalid_argument("frac_power_norm: more coefficients than eigenvalues");
  std::vector<double> terms(coeffs.size());
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (!std::isfinite(coeffs[n])) throw std::invalid_argument("frac_power_norm: non-finite coefficient");
    terms[n] = (theta == 0 ? 1.0 : std::pow(eigenvalues[n], 2.0 * theta)) * coeffs[n] * coeffs[n];
  }
  return std::sqrt(quad::pairwise_sum(terms));
}

inline double frac_power_norm(const SpectralDomain& d, std::span<const double> coeffs, double theta) {
  require_length(d, coeffs, "frac_power_norm");
  return frac_power_norm(d.eigenvalues(), coeffs, theta);
}

// <phi, u>_{-theta, theta}: the plain coefficient dot product
inline double duality_pairing(std::span<const double> phi, std::span<const double> u) {
  if (phi.size() != u.size()) throw std::invalid_argument("duality_pairing: size mismatch");
  std::vector<double> terms(u.size());
  for (std::size_t n = 0; n < u.size(); ++n) terms[n] = phi[n] * u[n];
  return quad::pairwise_sum(terms);
}

struct DomainDescriptor {
  DomainKind kind = DomainKind::interval;
  double l1 = 1.0;
  double l2 = 1.0;
  std::size_t modes = 32;

  SpectralDomain build() const {
    return kind == DomainKind::interval ? build_interval(l1, modes) : build_rectangle(l1, l2, modes);
  }
};

inline void to_json(nlohmann::json& j, const DomainDescriptor& d) {
  j = nlohmann::json{{"kind", to_string(d.kind)}, {"N", d.modes}};
  if (d.kind == DomainKind::interval) {
    j["L"] = d.l1;
  } else {
    j["L1"] = d.l1;
    j["L2"] = d.l2;
  }
}

inline void from_json(const nlohmann::json& j, DomainDescriptor& d) {
  const std::string kind = j.value("kind", std::string("interval"));
  if (kind == "interval") {
    d.kind = DomainKind::interval;
    d.l1 = j.value("L", 1.0);
  } else if (kind == "rectangle") {
    d.kind = DomainKind::rectangle;
    d.l1 = j.value("L1", 1.0);
    d.l2 = j.value("L2", 1.0);
  } else {
    throw std::invalid_argument("domain.kind: expected interval or rectangle, got " + kind);
  }
  d.modes = j.value("N", static_cast<std::size_t>(32));
}

// CSV columns: n, j, k, lambda, value
inline void write_coefficients_csv(std::ostream& os, const SpectralDomain& d, std::span<const double> coeffs) {
  require_length(d, coeffs, "write_coefficients_csv");
  os << "n,j,k,lambda,value\n";
  char buf[96];
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%zu,%d,%d,%.17g,%.17g\n", n + 1, d.mode(n).j, d.mode(n).k, d.eigenvalue(n), coeffs[n]);
    os << buf;
  }
}

inline std::vector<double> read_coefficients_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_coefficients_csv: empty input");
  std::vector<double> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto pos = line.rfind(',');
    if (pos == std::string::npos) throw std::invalid_argument("read_coefficients_csv: malformed row");
    const double v = std::stod(line.substr(pos + 1));
    if (!std::isfinite(v)) throw std::invalid_argument("read_coefficients_csv: non-finite value");
    out.push_back(v);
  }
  return out;
}

}  // namespace fdw
