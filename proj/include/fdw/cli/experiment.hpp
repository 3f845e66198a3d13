#pragma once

// Experiment configuration for the fdw command-line runner.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdw/frac_order.hpp"
#include "fdw/initial_data.hpp"
#include "fdw/spectral_domain.hpp"

namespace fdw::cli {

// Validation failure naming the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Command { ml, frac, solve, regularity, hidden, verify };
enum class Preset { single_mode, polynomial, random_decay };
enum class Estimate { initial, uniform, l2time, smooth, caputo_rate, blowup };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::ml: return "ml";
    case Command::frac: return "frac";
    case Command::solve: return "solve";
    case Command::regularity: return "regularity";
    case Command::hidden: return "hidden";
    case Command::verify: return "verify";
  }
  return "?";
}

inline const char* to_string(Preset p) {
  switch (p) {
    case Preset::single_mode: return "single-mode";
    case Preset::polynomial: return "polynomial";
    case Preset::random_decay: return "random-decay";
  }
  return "?";
}

inline const char* to_string(Estimate e) {
  switch (e) {
    case Estimate::initial: return "initial";
    case Estimate::uniform: return "uniform";
    case Estimate::l2time: return "l2time";
    case Estimate::smooth: return "smooth";
    case Estimate::caputo_rate: return "caputo-rate";
    case Estimate::blowup: return "blowup";
  }
  return "?";
}

template <class E, std::size_t K>
E parse_enum(const std::string& field, const std::string& s, const E (&all)[K]) {
  std::string choices;
  for (E e : all) {
    if (s == to_string(e)) return e;
    choices += (choices.empty() ? "" : ", ") + std::string(to_string(e));
  }
  throw ConfigError(field, "unknown value '" + s + "', expected one of " + choices);
}

inline constexpr Command kCommands[] = {Command::ml, Command::frac, Command::solve, Command::regularity, Command::hidden, Command::verify};
inline constexpr Preset kPresets[] = {Preset::single_mode, Preset::polynomial, Preset::random_decay};
inline constexpr Estimate kEstimates[] = {Estimate::initial, Estimate::uniform, Estimate::l2time,
                                          Estimate::smooth,  Estimate::caputo_rate, Estimate::blowup};

struct DataSource {
  Preset preset = Preset::single_mode;
  std::size_t mode = 1;           // single-mode index k, 1-based
  DataTarget target = DataTarget::u0;
  double decay = 2.0;             // random-decay exponent p
  std::optional<std::uint64_t> seed;
  std::size_t draws = 1;
};

struct ExperimentConfig {
  Command command = Command::solve;
  double alpha = 1.5;
  DomainDescriptor domain{DomainKind::interval, 1.0, 1.0, 32};
  DataSource data;
  double t_end = 1.0;
  std::size_t steps = 256;
  std::optional<double> theta, theta_caputo, beta, epsilon;

  // ml (beta is the second Mittag-Leffler parameter there)
  double z_min = -1000.0, z_max = 0.0;
  std::size_t z_count = 201;
  // frac
  std::string path = "sine";
  // solve
  std::string field = "value";
  std::size_t points = 33;
  // regularity
  Estimate estimate = Estimate::initial;
  // verify
  std::vector<int> criteria;  // empty: all

  std::string out_dir = ".";
  std::string prefix;  // defaults to the command name

  std::string output_prefix() const { return prefix.empty() ? std::string(to_string(command)) : prefix; }
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void require_range(const std::string& field, double v, const ThetaRange& r) {
  if (!r.contains(v)) throw ConfigError(field, num(v) + " outside admissible interval " + r.describe() + " (" + to_string(r.purpose) + ")");
}

inline double gated_or_midpoint(const std::string& field, std::optional<double>& v, ThetaPurpose p, FracOrder a) {
  const ThetaRange r = ThetaRange::of(p, a);
  if (!v) v = r.midpoint();
  require_range(field, *v, r);
  return *v;
}

}  // namespace detail

// Checks every field the command uses and fills gated defaults in place.
inline void validate(ExperimentConfig& c) {
  using detail::num;
  if (c.command == Command::verify) {
    if (!c.data.seed) throw ConfigError("seed", "required for verify");
    for (int id : c.criteria)
      if (id < 1 || id > 12) throw ConfigError("criteria", std::to_string(id) + " outside admissible range [1, 12]");
    return;
  }
  if (c.command == Command::ml) {
    if (!(c.alpha > 0)) throw ConfigError("alpha", num(c.alpha) + " outside admissible range (0, inf)");
    if (!c.beta) c.beta = 1.0;
    if (!(*c.beta > 0)) throw ConfigError("beta", num(*c.beta) + " outside admissible range (0, inf)");
    if (!(c.z_min <= c.z_max) || !std::isfinite(c.z_min) || !std::isfinite(c.z_max))
      throw ConfigError("z_min", "require finite z_min <= z_max");
    if (c.z_count < 1) throw ConfigError("z_count", "must be at least 1");
    return;
  }
  if (!(c.t_end > 0) || !std::isfinite(c.t_end)) throw ConfigError("T", num(c.t_end) + " outside admissible range (0, inf)");
  if (c.steps < 2) throw ConfigError("M", std::to_string(c.steps) + " outside admissible range [2, inf)");
  if (c.command == Command::frac) {
    if (!c.beta) c.beta = 0.25;
    if (!(*c.beta > 0 && *c.beta < 1)) throw ConfigError("beta", num(*c.beta) + " outside admissible interval (0, 1)");
    if (c.path != "one" && c.path != "linear" && c.path != "sine")
      throw ConfigError("function", "unknown value '" + c.path + "', expected one of one, linear, sine");
    return;
  }

  if (!(c.alpha > 1 && c.alpha < 2)) throw ConfigError("alpha", num(c.alpha) + " outside admissible interval (1, 2)");
  const FracOrder a(c.alpha);
  if (c.domain.modes < 1) throw ConfigError("N", "must be at least 1");
  if (!(c.domain.l1 > 0) || !(c.domain.l2 > 0)) throw ConfigError("domain", "side lengths must be positive");
  if (c.data.preset == Preset::random_decay && !c.data.seed) throw ConfigError("seed", "required for random-decay data");
  if (c.data.preset == Preset::single_mode && (c.data.mode < 1 || c.data.mode > c.domain.modes))
    throw ConfigError("k", std::to_string(c.data.mode) + " outside admissible range [1, " + std::to_string(c.domain.modes) + "]");
  if (c.data.preset == Preset::polynomial && c.domain.kind != DomainKind::interval)
    throw ConfigError("data.preset", "polynomial is defined on the interval only");
  if (c.data.draws < 1) throw ConfigError("draws", "must be at least 1");

  switch (c.command) {
    case Command::solve:
      if (c.field != "value" && c.field != "velocity" && c.field != "caputo")
        throw ConfigError("field", "unknown value '" + c.field + "', expected one of value, velocity, caputo");
      if (c.points < 1) throw ConfigError("points", "must be at least 1");
      if (c.data.draws != 1) throw ConfigError("draws", "solve takes a single data draw");
      break;
    case Command::regularity:
      switch (c.estimate) {
        case Estimate::initial:
        case Estimate::uniform: detail::gated_or_midpoint("theta", c.theta, ThetaPurpose::velocity_dual, a); break;
        case Estimate::l2time:
          detail::gated_or_midpoint("theta", c.theta, ThetaPurpose::gradient, a);
          detail::gated_or_midpoint("theta_caputo", c.theta_caputo, ThetaPurpose::caputo_dual, a);
          break;
        case Estimate::smooth: detail::gated_or_midpoint("epsilon", c.epsilon, ThetaPurpose::smooth_velocity, a); break;
        case Estimate::caputo_rate:
        case Estimate::blowup:
          if (c.data.preset == Preset::random_decay) throw ConfigError("data.preset", "this estimate needs pure u0 or pure u1 data");
          if (c.estimate == Estimate::blowup && c.data.target != DataTarget::u0)
            throw ConfigError("data.target", "blowup requires u1 = 0, so target must be u0");
          break;
      }
      break;
    case Command::hidden:
      if (!c.beta) c.beta = 0.25;
      if (!(*c.beta > 0 && *c.beta < 1)) throw ConfigError("beta", num(*c.beta) + " outside admissible interval (0, 1)");
      break;
    default: break;
  }
}

// Flags that override the config file when given.
struct Overrides {
  std::string config;
  std::optional<double> alpha, t_end, theta, theta_caputo, beta, epsilon, decay, length, l1, l2, z_min, z_max;
  std::optional<std::size_t> modes, steps, mode, draws, points, z_count;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> domain, preset, target, path, field, estimate, out_dir, prefix;
  std::vector<std::string> criteria;
  std::string report;

  void apply(ExperimentConfig& c) const {
    auto set = [](auto& dst, const auto& src) {
      if (src) dst = *src;
    };
    set(c.alpha, alpha);
    set(c.t_end, t_end);
    if (theta) c.theta = theta;
    if (theta_caputo) c.theta_caputo = theta_caputo;
    if (beta) c.beta = beta;
    if (epsilon) c.epsilon = epsilon;
    if (domain) {
      if (*domain != "interval" && *domain != "rectangle")
        throw ConfigError("domain", "unknown value '" + *domain + "', expected one of interval, rectangle");
      c.domain.kind = *domain == "interval" ? DomainKind::interval : DomainKind::rectangle;
    }
    set(c.domain.l1, length);
    set(c.domain.l1, l1);
    set(c.domain.l2, l2);
    set(c.domain.modes, modes);
    set(c.steps, steps);
    if (preset) c.data.preset = parse_enum("data", *preset, kPresets);
    set(c.data.mode, mode);
    if (target) {
      if (*target != "u0" && *target != "u1") throw ConfigError("target", "unknown value '" + *target + "', expected one of u0, u1");
      c.data.target = *target == "u0" ? DataTarget::u0 : DataTarget::u1;
    }
    set(c.data.decay, decay);
    if (seed) c.data.seed = seed;
    set(c.data.draws, draws);
    set(c.z_min, z_min);
    set(c.z_max, z_max);
    set(c.z_count, z_count);
    set(c.path, path);
    set(c.field, field);
    set(c.points, points);
    if (estimate) c.estimate = parse_enum("estimate", *estimate, kEstimates);
    set(c.out_dir, out_dir);
    set(c.prefix, prefix);
    if (!criteria.empty()) {
      c.criteria.clear();
      for (const std::string& s : criteria) {
        if (s == "all") continue;
        try {
          std::size_t used = 0;
          const int id = std::stoi(s, &used);
          if (used != s.size()) throw std::invalid_argument(s);
          c.criteria.push_back(id);
        } catch (const std::logic_error&) {
          throw ConfigError("criteria", "expected 'all' or criterion ids, got '" + s + "'");
        }
      }
    }
  }
};

// Reads the keys that are present; absent keys keep their current values.
inline void apply_json(ExperimentConfig& c, const nlohmann::json& j) {
  auto get = [&j](const char* key, auto& dst) {
    if (j.contains(key)) {
      try {
        dst = j.at(key).get<std::decay_t<decltype(dst)>>();
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(key, std::string("wrong type: ") + e.what());
      }
    }
  };
  auto get_opt = [&j](const char* key, std::optional<double>& dst) {
    if (j.contains(key)) {
      if (!j.at(key).is_number()) throw ConfigError(key, "expected a number");
      dst = j.at(key).get<double>();
    }
  };
  if (j.contains("command")) c.command = parse_enum("command", j.at("command").get<std::string>(), kCommands);
  get("alpha", c.alpha);
  if (j.contains("domain")) {
    try {
      c.domain = j.at("domain").get<DomainDescriptor>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("domain", e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("domain.kind", e.what());
    }
  }
  if (j.contains("data")) {
    const auto& d = j.at("data");
    if (d.contains("preset")) c.data.preset = parse_enum("data.preset", d.at("preset").get<std::string>(), kPresets);
    if (d.contains("k")) c.data.mode = d.at("k").get<std::size_t>();
    if (d.contains("target")) {
      const std::string t = d.at("target").get<std::string>();
      if (t != "u0" && t != "u1") throw ConfigError("data.target", "unknown value '" + t + "', expected one of u0, u1");
      c.data.target = t == "u0" ? DataTarget::u0 : DataTarget::u1;
    }
    if (d.contains("p")) c.data.decay = d.at("p").get<double>();
    if (d.contains("seed")) c.data.seed = d.at("seed").get<std::uint64_t>();
    if (d.contains("draws")) c.data.draws = d.at("draws").get<std::size_t>();
  }
  get("T", c.t_end);
  get("M", c.steps);
  if (j.contains("N")) c.domain.modes = j.at("N").get<std::size_t>();
  get_opt("theta", c.theta);
  get_opt("theta_caputo", c.theta_caputo);
  get_opt("epsilon", c.epsilon);
  get_opt("beta", c.beta);
  get("z_min", c.z_min);
  get("z_max", c.z_max);
  get("z_count", c.z_count);
  get("function", c.path);
  get("field", c.field);
  get("points", c.points);
  if (j.contains("estimate")) c.estimate = parse_enum("estimate", j.at("estimate").get<std::string>(), kEstimates);
  get("criteria", c.criteria);
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (o.contains("dir")) c.out_dir = o.at("dir").get<std::string>();
    if (o.contains("prefix")) c.prefix = o.at("prefix").get<std::string>();
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  ExperimentConfig c;
  apply_json(c, j);
  return c;
}

// Parameter provenance recorded in every manifest. Output paths are left
// out so that reruns into different directories produce identical bytes.
inline nlohmann::json provenance(const ExperimentConfig& c) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json j{{"command", to_string(c.command)}, {"alpha", c.alpha}};
  switch (c.command) {
    case Command::ml:
      j["beta"] = opt(c.beta);
      j["z_min"] = c.z_min;
      j["z_max"] = c.z_max;
      j["z_count"] = c.z_count;
      return j;
    case Command::verify:
      j.erase("alpha");
      j["seed"] = *c.data.seed;
      j["criteria"] = c.criteria;
      return j;
    case Command::frac:
      j.erase("alpha");
      j["beta"] = opt(c.beta);
      j["function"] = c.path;
      j["T"] = c.t_end;
      j["M"] = c.steps;
      return j;
    default: break;
  }
  nlohmann::json data{{"preset", to_string(c.data.preset)}, {"draws", c.data.draws}};
  if (c.data.preset == Preset::single_mode) {
    data["k"] = c.data.mode;
    data["target"] = c.data.target == DataTarget::u0 ? "u0" : "u1";
  }
  if (c.data.preset == Preset::random_decay) {
    data["p"] = c.data.decay;
    data["seed"] = *c.data.seed;
  }
  j["domain"] = c.domain;
  j["data"] = data;
  j["T"] = c.t_end;
  j["M"] = c.steps;
  j["theta"] = opt(c.theta);
  j["theta_caputo"] = opt(c.theta_caputo);
  j["beta"] = opt(c.beta);
  j["epsilon"] = opt(c.epsilon);
  if (c.command == Command::solve) {
    j["field"] = c.field;
    j["points"] = c.points;
  }
  if (c.command == Command::regularity) j["estimate"] = to_string(c.estimate);
  return j;
}

// Ensemble described by the data source; deterministic given its fields.
inline std::vector<ModeCoefficients> build_data(const ExperimentConfig& c, const SpectralDomain& d) {
  std::vector<ModeCoefficients> out;
  switch (c.data.preset) {
    case Preset::single_mode: out.push_back(single_mode(d, c.data.mode, c.data.target)); break;
    case Preset::polynomial: out.push_back(polynomial_bump(d)); break;
    case Preset::random_decay:
      for (std::size_t k = 0; k < c.data.draws; ++k) out.push_back(random_decay(d, c.data.decay, *c.data.seed, k));
      break;
  }
  return out;
}

}  // namespace fdw::cli
