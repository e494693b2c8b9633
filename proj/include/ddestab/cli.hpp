#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ddestab/boundary.hpp"
#include "ddestab/classifier.hpp"

namespace ddestab::cli {

enum class Command { Ustar, Curves, Classify, Roots, Simulate, Switch };
enum class Format { Csv, Json };

std::string_view command_name(Command c) noexcept;
Command command_from_name(std::string_view s);

struct RunConfig {
  Command command = Command::Ustar;

  double alpha = 0.0;
  double tau_alpha = 1.0;
  double beta = 0.0;
  double tau_beta = 1.0;
  double m = 1.0;
  double sigma = 0.0;

  Interval omega{0.01, 6.0};
  Interval beta_range{-2.0, 2.0};
  Interval tau_range{0.1, 5.0};
  Resolution resolution{50, 50};

  std::string output;  // empty: standard output
  std::string zero_line_output;
  std::string discrete_output;
  Format format = Format::Csv;

  double residual_tol = 1e-8;
  double curve_tol = 1e-3;
  double beta_limit = 200.0;
  double tau_limit = 1e3;
  double horizon = 0.0;  // 0: derived from the rightmost root
  double step = 1e-2;
  unsigned jobs = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string to_json(const RunConfig& c);
RunConfig config_from_json(std::string_view text);

/// "lo:hi" and "NxM".
Interval parse_range(std::string_view s);
Resolution parse_resolution(std::string_view s);

/// Builds the configuration from arguments (args[0] is the subcommand); throws
/// CLI::ParseError or DomainError.
RunConfig parse_args(const std::vector<std::string>& args);

/// Exit codes: 0 success, 2 usage or domain error, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace ddestab::cli
