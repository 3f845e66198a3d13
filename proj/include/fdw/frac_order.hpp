#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "fdw/mittag_leffler.hpp"

namespace fdw {

// Order alpha of the diffusion-wave equation, 1 < alpha < 2.
class FracOrder {
 public:
  explicit FracOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 1 && alpha < 2)) throw std::domain_error("FracOrder: alpha must lie in (1, 2), got " + std::to_string(alpha));
  }
  double value() const { return alpha_; }
  operator double() const { return alpha_; }
  double gamma_two_minus() const { return gamma(2.0 - alpha_); }

 private:
  double alpha_;
};

enum class ThetaPurpose { velocity_dual, gradient, caputo_dual, smooth_velocity, identity_overlap };

inline const char* to_string(ThetaPurpose p) {
  switch (p) {
    case ThetaPurpose::velocity_dual: return "velocity-dual theta";
    case ThetaPurpose::gradient: return "gradient theta";
    case ThetaPurpose::caputo_dual: return "caputo-dual theta";
    case ThetaPurpose::smooth_velocity: return "smooth-data epsilon";
    case ThetaPurpose::identity_overlap: return "identity theta";
  }
  return "?";
}

// Open lower end; the upper end is closed only for the velocity-dual range.
struct ThetaRange {
  ThetaPurpose purpose;
  double lower;
  double upper;
  bool upper_closed;

  static ThetaRange of(ThetaPurpose p, FracOrder order) {
    const double a = order.value();
    switch (p) {
      case ThetaPurpose::velocity_dual: return {p, (2 - a) / (2 * a), 0.5, true};
      case ThetaPurpose::gradient: return {p, 0.0, 1 / (2 * a), false};
      case ThetaPurpose::caputo_dual: return {p, (a - 1) / (2 * a), 0.5, false};
      case ThetaPurpose::smooth_velocity: return {p, (2 - a) / (2 * a), 0.5, false};
      case ThetaPurpose::identity_overlap: return {p, (a - 1) / (2 * a), 1 / (2 * a), false};
    }
    throw std::invalid_argument("ThetaRange: unknown purpose");
  }

  bool contains(double theta) const { return theta > lower && (upper_closed ? theta <= upper : theta < upper); }
  double midpoint() const { return 0.5 * (lower + upper); }

  std::string describe() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g%c", lower, upper, upper_closed ? ']' : ')');
    return buf;
  }

  void require(double theta) const {
    if (!contains(theta)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", theta);
      throw std::invalid_argument(std::string(to_string(purpose)) + " = " + buf + " outside admissible interval " + describe());
    }
  }
};

}  // namespace fdw
