#include <charconv>
#include <json.hpp>
#include <string>

#include "ddestab/cli.hpp"
#include "ddestab/errors.hpp"

namespace ddestab::cli {

namespace {
constexpr std::string_view kNames[] = {"ustar", "curves", "classify", "roots", "simulate", "switch"};

double to_double(std::string_view s, std::string_view what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(std::string(s), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DomainError("cannot parse " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}
}  // namespace

std::string_view command_name(Command c) noexcept { return kNames[static_cast<int>(c)]; }

Command command_from_name(std::string_view s) {
  for (int i = 0; i < 6; ++i)
    if (kNames[i] == s) return static_cast<Command>(i);
  throw DomainError("unknown command: " + std::string(s));
}

Interval parse_range(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw DomainError("range must be lo:hi, got '" + std::string(s) + "'");
  Interval r{to_double(s.substr(0, colon), "range"), to_double(s.substr(colon + 1), "range")};
  if (!(r.hi > r.lo)) throw DomainError("range must satisfy lo < hi, got '" + std::string(s) + "'");
  return r;
}

Resolution parse_resolution(std::string_view s) {
  const auto x = s.find_first_of("xX");
  auto parse = [&](std::string_view part) {
    std::size_t v = 0;
    auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || end != part.data() + part.size() || part.empty())
      throw DomainError("resolution must be NxM, got '" + std::string(s) + "'");
    return v;
  };
  if (x == std::string_view::npos) throw DomainError("resolution must be NxM, got '" + std::string(s) + "'");
  return {parse(s.substr(0, x)), parse(s.substr(x + 1))};
}

std::string to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = command_name(c.command);
  j["alpha"] = c.alpha;
  j["tau_alpha"] = c.tau_alpha;
  j["beta"] = c.beta;
  j["tau_beta"] = c.tau_beta;
  j["m"] = c.m;
  j["sigma"] = c.sigma;
  j["omega"] = {c.omega.lo, c.omega.hi};
  j["beta_range"] = {c.beta_range.lo, c.beta_range.hi};
  j["tau_range"] = {c.tau_range.lo, c.tau_range.hi};
  j["resolution"] = {c.resolution.nx, c.resolution.ny};
  j["output"] = c.output;
  j["zero_line_output"] = c.zero_line_output;
  j["discrete_output"] = c.discrete_output;
  j["format"] = c.format == Format::Json ? "json" : "csv";
  j["tolerances"] = {{"residual", c.residual_tol}, {"curve", c.curve_tol}};
  j["beta_limit"] = c.beta_limit;
  j["tau_limit"] = c.tau_limit;
  j["horizon"] = c.horizon;
  j["step"] = c.step;
  j["jobs"] = c.jobs;
  return j.dump();
}

RunConfig config_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text.begin(), text.end());
    RunConfig c;
    c.command = command_from_name(j.at("command").get<std::string>());
    c.alpha = j.at("alpha").get<double>();
    c.tau_alpha = j.at("tau_alpha").get<double>();
    c.beta = j.at("beta").get<double>();
    c.tau_beta = j.at("tau_beta").get<double>();
    c.m = j.at("m").get<double>();
    c.sigma = j.at("sigma").get<double>();
    auto interval = [&](const char* key) {
      const auto& a = j.at(key);
      return Interval{a.at(0).get<double>(), a.at(1).get<double>()};
    };
    c.omega = interval("omega");
    c.beta_range = interval("beta_range");
    c.tau_range = interval("tau_range");
    c.resolution = {j.at("resolution").at(0).get<std::size_t>(),
                    j.at("resolution").at(1).get<std::size_t>()};
    c.output = j.at("output").get<std::string>();
    c.zero_line_output = j.at("zero_line_output").get<std::string>();
    c.discrete_output = j.at("discrete_output").get<std::string>();
    const auto fmt = j.at("format").get<std::string>();
    if (fmt != "csv" && fmt != "json") throw DomainError("unknown format: " + fmt);
    c.format = fmt == "json" ? Format::Json : Format::Csv;
    c.residual_tol = j.at("tolerances").at("residual").get<double>();
    c.curve_tol = j.at("tolerances").at("curve").get<double>();
    c.beta_limit = j.at("beta_limit").get<double>();
    c.tau_limit = j.at("tau_limit").get<double>();
    c.horizon = j.at("horizon").get<double>();
    c.step = j.at("step").get<double>();
    c.jobs = j.at("jobs").get<unsigned>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("run config: ") + e.what());
  }
}

}  // namespace ddestab::cli
