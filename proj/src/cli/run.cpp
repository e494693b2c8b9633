#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "ddestab/chareq.hpp"
#include "ddestab/cli.hpp"
#include "ddestab/criteria.hpp"
#include "ddestab/errors.hpp"
#include "ddestab/grid_io.hpp"
#include "ddestab/simulate.hpp"

namespace ddestab::cli {
namespace {

using io::format_double;

struct RawArgs {
  std::string omega, beta_range, tau_range, resolution, format;
};

void add_model(CLI::App* sub, RunConfig& c, bool point) {
  sub->add_option("--alpha", c.alpha, "discrete feedback gain")->capture_default_str();
  sub->add_option("--tau-alpha", c.tau_alpha, "discrete delay")->capture_default_str();
  sub->add_option("--m", c.m, "gamma shape")->capture_default_str();
  if (point) {
    sub->add_option("--beta", c.beta, "distributed feedback gain")->capture_default_str();
    sub->add_option("--tau-beta", c.tau_beta, "mean distributed delay m/a")->capture_default_str();
  }
}

void add_output(CLI::App* sub, RunConfig& c, RawArgs& raw) {
  sub->add_option("-o,--output", c.output, "output file (default: stdout)");
  sub->add_option("--format", raw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void build_app(CLI::App& app, RunConfig& c, RawArgs& raw) {
  app.require_subcommand(1);
  auto* ustar = app.add_subcommand("ustar", "the constant u* of the sign lemma");
  add_output(ustar, c, raw);

  auto* curves = app.add_subcommand("curves", "Hopf curves, zero-root line and discrete overlay");
  add_model(curves, c, false);
  curves->add_option("--omega", raw.omega, "frequency window lo:hi")->default_str("0.01:6");
  curves->add_option("--tau", raw.tau_range, "tau_beta range of the zero-root line lo:hi")
      ->default_str("0.1:5");
  curves->add_option("--tol", c.curve_tol, "chord tolerance")->capture_default_str();
  curves->add_option("--beta-limit", c.beta_limit)->capture_default_str();
  curves->add_option("--tau-limit", c.tau_limit)->capture_default_str();
  curves->add_option("--zero-line-out", c.zero_line_output, "CSV file for the zero-root line");
  curves->add_option("--discrete-out", c.discrete_output, "CSV file for the two-discrete-delay limit");
  add_output(curves, c, raw);

  auto* classify = app.add_subcommand("classify", "verdict grid over (beta, tau_beta)");
  add_model(classify, c, false);
  classify->add_option("--beta", raw.beta_range, "beta range lo:hi")->default_str("-2:2");
  classify->add_option("--tau", raw.tau_range, "tau_beta range lo:hi")->default_str("0.1:5");
  classify->add_option("--res", raw.resolution, "resolution NxM (beta x tau)")->default_str("50x50");
  classify->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
  add_output(classify, c, raw);

  auto* roots = app.add_subcommand("roots", "root count and rightmost root at a point");
  add_model(roots, c, true);
  roots->add_option("--sigma", c.sigma, "count roots with Re > sigma")->capture_default_str();
  add_output(roots, c, raw);

  auto* sim = app.add_subcommand("simulate", "integrate the linear chain system");
  add_model(sim, c, true);
  sim->add_option("--horizon", c.horizon, "end time (default: from the rightmost root)");
  sim->add_option("--step", c.step, "RK4 step")->capture_default_str();
  add_output(sim, c, raw);

  auto* sw = app.add_subcommand("switch", "stability switches along tau_beta at fixed beta");
  add_model(sw, c, true);
  sw->add_option("--tau", raw.tau_range, "tau_beta range lo:hi")->default_str("0.1:5");
  add_output(sw, c, raw);
}

RunConfig finish(CLI::App& app, RunConfig c, const RawArgs& raw) {
  for (auto* sub : app.get_subcommands()) c.command = command_from_name(sub->get_name());
  if (!raw.omega.empty()) c.omega = parse_range(raw.omega);
  if (!raw.beta_range.empty()) c.beta_range = parse_range(raw.beta_range);
  if (!raw.tau_range.empty()) c.tau_range = parse_range(raw.tau_range);
  if (!raw.resolution.empty()) c.resolution = parse_resolution(raw.resolution);
  if (!raw.format.empty())
    c.format = raw.format == "json" ? Format::Json : Format::Csv;
  else
    c.format = c.command == Command::Classify ? Format::Json : Format::Csv;
  return c;
}

RunConfig defaults() {
  RunConfig c;
  if (const char* env = std::getenv("DDE_STAB_TOL"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (*end != '\0' || !(v > 0.0)) throw DomainError("DDE_STAB_TOL must be a positive number");
    c.residual_tol = v;
  }
  return c;
}

void parse_into(CLI::App& app, RunConfig& c, RawArgs& raw, const std::vector<std::string>& args) {
  build_app(app, c, raw);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);
  c = finish(app, c, raw);
}

void emit(const RunConfig& c, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (c.output.empty() || c.output == "-") {
    body(out);
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw DomainError("cannot open output file " + c.output);
  body(f);
  if (!f) throw DomainError("failed writing " + c.output);
}

void emit_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output file " + path);
  body(f);
}

ClassifierOptions classifier_options(const RunConfig& c, double beta_extent) {
  ClassifierOptions o;
  o.beta_limit = std::max(c.beta_limit, beta_extent + 1.0);
  o.tau_limit = c.tau_limit;
  o.trace.tol = c.curve_tol;
  o.trace.residual_tol = c.residual_tol;
  return o;
}

ModelParams point_params(const RunConfig& c) {
  return ModelParams::with_mean_delay(c.alpha, c.tau_alpha, c.beta, c.m, c.tau_beta);
}

void cmd_ustar(const RunConfig& c, std::ostream& out) {
  const double u = u_star();
  const double r = std::abs(u_star_equation(u));
  emit(c, out, [&](std::ostream& os) {
    if (c.format == Format::Json)
      os << "{\"u_star\":" << format_double(u) << ",\"residual\":" << format_double(r) << "}\n";
    else
      os << "u_star " << format_double(u) << "\nresidual " << format_double(r) << '\n';
  });
}

void cmd_curves(const RunConfig& c, std::ostream& out) {
  const CurveBase base{c.alpha, c.tau_alpha, c.m};
  TraceOptions t;
  t.tol = c.curve_tol;
  t.beta_limit = c.beta_limit;
  t.tau_limit = c.tau_limit;
  t.residual_tol = c.residual_tol;
  std::vector<io::BranchSamples> branches;
  for (const BranchId b : candidate_branches(c.m)) {
    auto s = trace_curve(b, base, c.omega, t);
    if (!s.empty()) branches.push_back({b, std::move(s)});
  }
  emit(c, out, [&](std::ostream& os) {
    if (c.format == Format::Csv) {
      io::write_curves_csv(os, branches);
      return;
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& b : branches) {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& s : b.samples)
        rows.push_back({s.omega, s.theta, s.beta, s.tau_beta, s.dbeta_domega, s.crossing});
      j.push_back({{"branch_sign", std::string(1, sign_char(b.id.sign))},
                   {"l", b.id.l},
                   {"columns", {"omega", "theta", "beta", "tau_beta", "dbeta_domega", "crossing"}},
                   {"samples", rows}});
    }
    os << j.dump() << '\n';
  });

  if (!c.zero_line_output.empty()) {
    emit_file(c.zero_line_output, [&](std::ostream& os) {
      os << "beta,tau_beta,crossing_sign\n";
      for (double tau : linspace(c.tau_range.lo, c.tau_range.hi, 101)) {
        const auto s = zero_line_crossing_sign(c.alpha, c.tau_alpha, tau);
        os << format_double(1.0 - c.alpha) << ',' << format_double(tau) << ','
           << (s ? std::to_string(*s) : std::string()) << '\n';
      }
    });
  }
  if (!c.discrete_output.empty()) {
    emit_file(c.discrete_output, [&](std::ostream& os) {
      os << "branch_sign,l,omega,beta,tau_beta\n";
      const auto grid = linspace(c.omega.lo, c.omega.hi, 2001);
      for (BranchSign sign : {BranchSign::Plus, BranchSign::Minus})
        for (int l = 0; l < 10; ++l)
          for (double w : grid) {
            std::optional<BetaTau> p;
            try {
              p = discrete_limit_point(w, {sign, l}, c.alpha, c.tau_alpha);
            } catch (const Singular&) {
              continue;
            }
            if (!p || p->tau_beta > c.tau_limit || std::abs(p->beta) > c.beta_limit) continue;
            os << sign_char(sign) << ',' << l << ',' << format_double(w) << ','
               << format_double(p->beta) << ',' << format_double(p->tau_beta) << '\n';
          }
    });
  }
}

void cmd_classify(const RunConfig& c, std::ostream& out) {
  const double extent = std::max(std::abs(c.beta_range.lo), std::abs(c.beta_range.hi));
  const StabilityClassifier cls(c.alpha, c.tau_alpha, c.m, classifier_options(c, extent));
  const RegionGrid g = classify_grid(cls, c.beta_range, c.tau_range, c.resolution, c.jobs);
  emit(c, out, [&](std::ostream& os) {
    if (c.format == Format::Json)
      os << io::grid_to_json(g);
    else
      io::write_grid_csv(os, g);
  });
}

void cmd_roots(const RunConfig& c, std::ostream& out) {
  const ModelParams p = point_params(c);
  const RootCountReport r = count_roots_right_of(c.sigma, p);
  const cplx z = rightmost_root(p);
  emit(c, out, [&](std::ostream& os) {
    if (c.format == Format::Json) {
      os << "{\"count\":" << r.count << ",\"sigma\":" << format_double(r.sigma)
         << ",\"radius\":" << format_double(r.radius) << ",\"samples\":" << r.samples_used
         << ",\"min_abs_D\":" << format_double(r.min_abs_D)
         << ",\"rightmost_re\":" << format_double(z.real())
         << ",\"rightmost_im\":" << format_double(z.imag()) << "}\n";
    } else {
      os << "count " << r.count << "\nsigma " << format_double(r.sigma) << "\nradius "
         << format_double(r.radius) << "\nsamples " << r.samples_used << "\nmin_abs_D "
         << format_double(r.min_abs_D) << "\nrightmost_re " << format_double(z.real())
         << "\nrightmost_im " << format_double(z.imag()) << '\n';
    }
  });
}

void cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ModelParams p = point_params(c);
  const ChainSystem sys = build_chain(p);
  const cplx z = rightmost_root(p);
  const double horizon = c.horizon > 0.0 ? c.horizon : default_horizon(z.real());
  const Trajectory tr = integrate(sys, [](double) { return 1.0; }, horizon, c.step);
  const double rate = decay_rate(tr);
  emit(c, out, [&](std::ostream& os) { io::write_trajectory_csv(os, tr); });
  std::ostream& summary = (c.output.empty() || c.output == "-") ? err : out;
  summary << "decay_rate " << format_double(rate) << "\nrightmost_re " << format_double(z.real())
          << "\nhorizon " << format_double(horizon) << '\n';
}

void cmd_switch(const RunConfig& c, std::ostream& out) {
  const StabilityClassifier cls(c.alpha, c.tau_alpha, c.m, classifier_options(c, std::abs(c.beta)));
  const auto events = switching_profile(cls, c.beta, c.tau_range);
  emit(c, out, [&](std::ostream& os) {
    if (c.format == Format::Json) {
      os << '[';
      for (std::size_t i = 0; i < events.size(); ++i)
        os << (i ? "," : "") << "{\"tau_beta\":" << format_double(events[i].tau_beta)
           << ",\"count_before\":" << events[i].count_before
           << ",\"count_after\":" << events[i].count_after << '}';
      os << "]\n";
    } else {
      io::write_switch_csv(os, events);
    }
  });
}

std::string describe(const RunConfig& c) {
  return "alpha=" + format_double(c.alpha) + " tau_alpha=" + format_double(c.tau_alpha) +
         " beta=" + format_double(c.beta) + " tau_beta=" + format_double(c.tau_beta) +
         " m=" + format_double(c.m);
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"ddestab"};
  RunConfig c = defaults();
  RawArgs raw;
  parse_into(app, c, raw, args);
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability analysis of x' = -x + alpha x(t - tau_alpha) + beta (gamma * x)(t)",
               "ddestab"};
  RunConfig c;
  RawArgs raw;
  try {
    c = defaults();
    parse_into(app, c, raw, args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    }
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  const std::string_view name = command_name(c.command);
  try {
    switch (c.command) {
      case Command::Ustar: cmd_ustar(c, out); break;
      case Command::Curves: cmd_curves(c, out); break;
      case Command::Classify: cmd_classify(c, out); break;
      case Command::Roots: cmd_roots(c, out); break;
      case Command::Simulate: cmd_simulate(c, out, err); break;
      case Command::Switch: cmd_switch(c, out); break;
    }
  } catch (const DomainError& e) {
    err << name << ": " << e.what() << " (" << describe(c) << ")\n";
    return 2;
  } catch (const StepTooLarge& e) {
    err << name << ": " << e.what() << " (step=" << format_double(c.step) << ")\n";
    return 2;
  } catch (const ContourTooClose& e) {
    err << name << ": root counting contour passes within " << format_double(e.min_abs())
        << " of a root (" << describe(c) << ")\n";
    return 3;
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << " (" << describe(c) << ")\n";
    return 3;
  }
  return 0;
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace ddestab::cli
