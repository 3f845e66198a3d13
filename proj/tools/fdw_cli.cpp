// fdw: experiment runner. Exit codes: 0 pass, 1 check failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdw/cli/experiment.hpp"
#include "fdw/dwsolver.hpp"
#include "fdw/fracops.hpp"
#include "fdw/hidden_trace.hpp"
#include "fdw/mittag_leffler.hpp"
#include "fdw/regularity_lab.hpp"
#include "fdw/verification/acceptance.hpp"

using nlohmann::json;
using namespace fdw;
using cli::Command;
using cli::ExperimentConfig;

namespace {

constexpr int kPass = 0, kCheckFailed = 1, kUsage = 2;

void add_common(CLI::App* sub, cli::Overrides& o) {
  sub->add_option("--config", o.config, "JSON experiment config; flags override it");
  sub->add_option("--out", o.out_dir, "output directory");
  sub->add_option("--prefix", o.prefix, "output file prefix");
}

void add_grid(CLI::App* sub, cli::Overrides& o) {
  sub->add_option("--T", o.t_end, "final time");
  sub->add_option("--M", o.steps, "time steps");
}

void add_problem(CLI::App* sub, cli::Overrides& o) {
  add_grid(sub, o);
  sub->add_option("--alpha", o.alpha, "order in (1, 2)");
  sub->add_option("--domain", o.domain, "interval or rectangle");
  sub->add_option("--L", o.length, "interval length");
  sub->add_option("--L1", o.l1, "rectangle side 1");
  sub->add_option("--L2", o.l2, "rectangle side 2");
  sub->add_option("--N", o.modes, "retained modes");
  sub->add_option("--data", o.preset, "single-mode, polynomial or random-decay");
  sub->add_option("--k", o.mode, "single-mode index");
  sub->add_option("--target", o.target, "single mode placed in u0 or u1");
  sub->add_option("--p", o.decay, "random-decay exponent");
  sub->add_option("--seed", o.seed, "random-decay seed");
  sub->add_option("--draws", o.draws, "random-decay ensemble size");
}

std::filesystem::path out_path(const ExperimentConfig& c, const std::string& suffix) {
  return std::filesystem::path(c.out_dir) / (c.output_prefix() + suffix);
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

void write_manifest(const ExperimentConfig& c, json body, bool pass) {
  body["parameters"] = cli::provenance(c);
  body["pass"] = pass;
  open_out(out_path(c, ".json")) << body.dump(2) << "\n";
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_ml(const ExperimentConfig& c) {
  const MLParams p(c.alpha, *c.beta);
  auto csv = open_out(out_path(c, ".csv"));
  csv << "z,value,regime\n";
  std::vector<double> zs;
  for (std::size_t i = 0; i < c.z_count; ++i) {
    const double z = c.z_count == 1 ? c.z_min : c.z_min + (c.z_max - c.z_min) * static_cast<double>(i) / static_cast<double>(c.z_count - 1);
    zs.push_back(z);
    csv << g17(z) << "," << g17(mittag_leffler(p, z)) << "," << to_string(select_regime(p, z)) << "\n";
  }
  json body{{"estimate", "Mittag-Leffler evaluation"}, {"samples", zs.size()}};
  bool pass = true;
  if (c.alpha > 1 && c.alpha < 2 && c.z_max <= 0) {
    const BoundFit f = verify_decay_bound(p, zs);
    body["decay_bound"] = {{"estimate", "decay bound |E(z)| <= C/(1+|z|)"}, {"c_empirical", f.c_empirical},
                           {"growth_ratios", f.growth_ratios}, {"violated", f.violated()}};
    pass = !f.violated();
  }
  write_manifest(c, body, pass);
  std::printf("%s: %zu samples\n", pass ? "ok" : "decay bound violated", zs.size());
  return pass ? kPass : kCheckFailed;
}

int run_frac(const ExperimentConfig& c) {
  const TimeGrid g(c.t_end, c.steps);
  const SampledPath f = SampledPath::from_function(g, [&](double t) {
    if (c.path == "one") return 1.0;
    if (c.path == "linear") return t;
    return std::sin(std::numbers::pi * t / c.t_end);
  });
  const double beta = *c.beta;
  const SampledPath i = frac_integral(f, beta);
  auto csv = open_out(out_path(c, ".csv"));
  csv << "t,f,integral\n";
  for (std::size_t n = 0; n < g.size(); ++n) csv << g17(g.node(n)) << "," << g17(f(n)) << "," << g17(i(n)) << "\n";
  const YoungBound y = young_bound_check(f, beta);
  const double semi = gagliardo_seminorm(i, beta);
  const json body{{"estimate", "fractional integral and Young bound"},
                  {"l2_f", l2_norm(f)},
                  {"l2_integral", l2_norm(i)},
                  {"seminorm_integral", semi},
                  {"hbeta_norm_integral", hbeta_norm(i, beta)},
                  {"young_lhs", y.lhs},
                  {"young_rhs", y.rhs}};
  write_manifest(c, body, y.holds());
  std::printf("%s: ||I^b f|| = %.6g, Young bound %.6g\n", y.holds() ? "ok" : "Young bound violated", y.lhs, y.rhs);
  return y.holds() ? kPass : kCheckFailed;
}

int run_solve(const ExperimentConfig& c) {
  const SpectralDomain d = c.domain.build();
  const FieldKind which = c.field == "value" ? FieldKind::value : c.field == "velocity" ? FieldKind::velocity : FieldKind::caputo;
  const SolutionQuery q(FracOrder(c.alpha), d, cli::build_data(c, d).front(), TimeGrid(c.t_end, c.steps), which);
  std::vector<Point> pts;
  const auto dims = d.dimensions();
  for (std::size_t i = 0; i < c.points; ++i) {
    const double s = c.points == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(c.points - 1);
    if (d.kind() == DomainKind::interval) {
      pts.push_back({s * dims[0], 0.0});
    } else {
      for (std::size_t j = 0; j < c.points; ++j) {
        const double r = c.points == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(c.points - 1);
        pts.push_back({s * dims[0], r * dims[1]});
      }
    }
  }
  const FieldSnapshots s = solve_field(q, pts);
  auto csv = open_out(out_path(c, ".csv"));
  write_snapshots_csv(csv, s, d.kind());
  json body = solve_manifest(q, s);
  body["estimate"] = "spectral solution";
  write_manifest(c, body, true);
  std::printf("ok: %zu times x %zu points\n", s.times.size(), s.points.size());
  return kPass;
}

template <class Table>
void write_convergence_csv(const ExperimentConfig& c, const Table& tab) {
  auto csv = open_out(out_path(c, ".csv"));
  csv << "t,err_h10,err_velocity,envelope\n";
  for (const auto& r : tab.rows) csv << g17(r.t) << "," << g17(r.err_h10) << "," << g17(r.err_velocity) << "," << g17(r.envelope) << "\n";
}

constexpr double kSlopeSlack = 0.1;

int run_regularity(const ExperimentConfig& c) {
  const SpectralDomain d = c.domain.build();
  const FracOrder a(c.alpha);
  const auto ensemble = cli::build_data(c, d);
  json body;
  bool pass = true;
  switch (c.estimate) {
    case cli::Estimate::initial:
    case cli::Estimate::smooth: {
      const auto t = dyadic_times(4, 14);
      const bool smooth = c.estimate == cli::Estimate::smooth;
      const auto tab = smooth ? smooth_data_velocity(d, ensemble.front(), a, *c.epsilon, t)
                              : initial_convergence(d, ensemble.front(), a, *c.theta, t);
      write_convergence_csv(c, tab);
      // the estimate bounds the error by t^expected, so the fitted slope may not fall below it
      pass = tab.velocity_slope >= tab.expected_slope - kSlopeSlack;
      body = {{"estimate", smooth ? "smooth-data velocity continuity" : "initial-data continuity"},
              {"velocity_slope", finite_or_null(tab.velocity_slope)},
              {"expected_slope", tab.expected_slope},
              {"slope_slack", kSlopeSlack}};
      break;
    }
    case cli::Estimate::uniform:
    case cli::Estimate::l2time: {
      std::vector<NormReport> rs;
      if (c.estimate == cli::Estimate::uniform) {
        rs = uniform_bound_report(d, ensemble, a, *c.theta, TimeGrid(c.t_end, c.steps));
      } else {
        for (const auto& e : ensemble) {
          if (e.is_zero()) continue;
          const L2TimeNorms n = l2_time_norms(d, e, a, *c.theta, *c.theta_caputo, c.t_end, c.steps);
          rs.push_back(n.gradient);
          rs.push_back(n.caputo);
        }
      }
      auto csv = open_out(out_path(c, ".csv"));
      write_reports_csv(csv, std::span<const NormReport>(rs));
      double worst = 0;
      for (const auto& r : rs) {
        pass = pass && std::isfinite(r.ratio());
        if (std::isfinite(r.ratio())) worst = std::max(worst, r.ratio());
      }
      body = {{"estimate", c.estimate == cli::Estimate::uniform ? "uniform-in-time energy bound" : "L2-in-time estimates"},
              {"reports", rs},
              {"max_ratio", worst}};
      break;
    }
    case cli::Estimate::caputo_rate: {
      const RateFit f = caputo_critical_rate(d, ensemble.front(), a, c.data.target);
      pass = f.slope >= f.expected - kSlopeSlack;
      body = {{"estimate", "critical Caputo-derivative rate"}, {"slope", f.slope}, {"expected_slope", f.expected}, {"slope_slack", kSlopeSlack}};
      open_out(out_path(c, ".csv")) << "slope,expected\n" << g17(f.slope) << "," << g17(f.expected) << "\n";
      break;
    }
    case cli::Estimate::blowup: {
      const BlowupFit f = velocity_blowup_rate(d, ensemble.front(), a);
      constexpr double kExponentTol = 0.05;
      // several active modes mix rates, so only single-mode data is judged
      pass = f.multi_mode_warning || std::fabs(f.exponent - f.expected) <= kExponentTol;
      auto csv = open_out(out_path(c, ".csv"));
      csv << "t,velocity_l2\n";
      for (std::size_t i = 0; i < f.times.size(); ++i) csv << g17(f.times[i]) << "," << g17(f.norms[i]) << "\n";
      body = {{"estimate", "velocity rate for u1 = 0"}, {"exponent", f.exponent}, {"expected", f.expected},
              {"tolerance", kExponentTol}, {"multi_mode_warning", f.multi_mode_warning}};
      break;
    }
  }
  write_manifest(c, body, pass);
  std::printf("%s: %s\n", pass ? "ok" : "check failed", body["estimate"].get<std::string>().c_str());
  return pass ? kPass : kCheckFailed;
}

int run_hidden(const ExperimentConfig& c) {
  const SpectralDomain d = c.domain.build();
  const FracOrder a(c.alpha);
  const TimeGrid g(c.t_end, c.steps);
  const auto ensemble = cli::build_data(c, d);
  const std::vector<double> t = g.nodes();
  const ModeEvolution ev(a, d.eigenvalues(), t);
  const HiddenRatioTable tab = hidden_inequality_ratio(d, ensemble, a, g);
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  auto csv = open_out(out_path(c, ".csv"));
  csv << "draw,ratio,tail_share,equivalence\n";
  for (const HiddenDraw& hd : tab.draws) {
    const double eq = trace_seminorm_bound(d, ensemble[hd.index], ev, *c.beta, g).equivalence;
    lo = std::min(lo, eq);
    hi = std::max(hi, eq);
    csv << hd.index << "," << g17(hd.ratio) << "," << g17(hd.tail_share) << "," << g17(eq) << "\n";
  }
  const bool pass = !tab.draws.empty() && std::isfinite(tab.max_ratio);
  json body{{"estimate", "hidden regularity of the normal trace"},
            {"ratio_definition", "int_0^T int_bdry |d_nu u|^2 / (||u0||_{H1_0}^2 + ||u1||^2)"},
            {"max_ratio", tab.max_ratio},
            {"skipped", tab.skipped},
            {"equivalence_min", finite_or_null(lo)},
            {"equivalence_max", finite_or_null(hi)}};
  write_manifest(c, body, pass);
  std::printf("%s: max ratio %.6g over %zu draws\n", pass ? "ok" : "check failed", tab.max_ratio, tab.draws.size());
  return pass ? kPass : kCheckFailed;
}

int run_verify(const ExperimentConfig& c, const std::string& report) {
  const auto rs = acceptance::run_all(*c.data.seed, c.criteria);
  bool all = true;
  for (const auto& r : rs) {
    std::printf("%s\n", acceptance::summary_line(r).c_str());
    all = all && r.pass;
  }
  json body = acceptance::report_of(*c.data.seed, rs);
  body["parameters"] = cli::provenance(c);
  open_out(report.empty() ? out_path(c, ".json") : std::filesystem::path(report)) << body.dump(2) << "\n";
  return all ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional diffusion-wave experiments"};
  app.require_subcommand(1);
  cli::Overrides o;

  auto* ml = app.add_subcommand("ml", "evaluate E_{alpha,beta} on a real grid");
  add_common(ml, o);
  ml->add_option("--alpha", o.alpha, "first parameter, > 0");
  ml->add_option("--beta", o.beta, "second parameter, > 0");
  ml->add_option("--z-min", o.z_min, "grid start");
  ml->add_option("--z-max", o.z_max, "grid end");
  ml->add_option("--z-count", o.z_count, "grid size");

  auto* frac = app.add_subcommand("frac", "fractional integral of a preset path");
  add_common(frac, o);
  add_grid(frac, o);
  frac->add_option("--beta", o.beta, "order in (0, 1)");
  frac->add_option("--function", o.path, "one, linear or sine");

  auto* solve = app.add_subcommand("solve", "spectral solution snapshots");
  add_common(solve, o);
  add_problem(solve, o);
  solve->add_option("--field", o.field, "value, velocity or caputo");
  solve->add_option("--points", o.points, "sample points per side");

  auto* reg = app.add_subcommand("regularity", "regularity estimates");
  add_common(reg, o);
  add_problem(reg, o);
  reg->add_option("--estimate", o.estimate, "initial, uniform, l2time, smooth, caputo-rate or blowup");
  reg->add_option("--theta", o.theta, "velocity-dual or gradient theta");
  reg->add_option("--theta-caputo", o.theta_caputo, "caputo-dual theta");
  reg->add_option("--epsilon", o.epsilon, "smooth-data epsilon");

  auto* hidden = app.add_subcommand("hidden", "hidden regularity ratio table");
  add_common(hidden, o);
  add_problem(hidden, o);
  hidden->add_option("--beta", o.beta, "fractional trace order in (0, 1)");

  auto* verify = app.add_subcommand("verify", "acceptance criteria");
  add_common(verify, o);
  verify->add_option("criteria", o.criteria, "'all' or criterion ids");
  verify->add_option("--seed", o.seed, "seed for the randomized criteria");
  verify->add_option("--report", o.report, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  ExperimentConfig c;
  const std::pair<CLI::App*, Command> subs[] = {{ml, Command::ml},         {frac, Command::frac},     {solve, Command::solve},
                                                {reg, Command::regularity}, {hidden, Command::hidden}, {verify, Command::verify}};
  Command command = Command::solve;
  for (const auto& [sub, cmd] : subs)
    if (sub->parsed()) command = cmd;

  try {
    if (!o.config.empty()) c = cli::load_config(o.config);
    c.command = command;
    o.apply(c);
    cli::validate(c);
    std::filesystem::create_directories(c.out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  }

  try {
    switch (c.command) {
      case Command::ml: return run_ml(c);
      case Command::frac: return run_frac(c);
      case Command::solve: return run_solve(c);
      case Command::regularity: return run_regularity(c);
      case Command::hidden: return run_hidden(c);
      case Command::verify: return run_verify(c, o.report);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "check failed: %s\n", e.what());
    return kCheckFailed;
  }
  return kUsage;
}
