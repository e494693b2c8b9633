#include "ddestab/grid_io.hpp"

#include <cstdio>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "ddestab/errors.hpp"

namespace ddestab::io {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void put_array(std::ostringstream& os, const std::vector<double>& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_double(v[i]);
  os << ']';
}

}  // namespace

std::string grid_to_json(const RegionGrid& grid) {
  std::ostringstream os;
  os << "{\"alpha\":" << format_double(grid.alpha)
     << ",\"tau_alpha\":" << format_double(grid.tau_alpha) << ",\"m\":" << format_double(grid.m)
     << ",\"beta_axis\":";
  put_array(os, grid.beta_axis);
  os << ",\"tau_axis\":";
  put_array(os, grid.tau_axis);
  os << ",\"verdict\":[";
  for (std::size_t it = 0; it < grid.tau_axis.size(); ++it) {
    os << (it ? ",\n" : "\n") << '[';
    for (std::size_t ib = 0; ib < grid.beta_axis.size(); ++ib) {
      const Verdict& v = grid.at(it, ib);
      os << (ib ? "," : "") << "{\"kind\":\"" << to_string(v.kind()) << "\",\"reason\":\""
         << to_string(v.reason()) << "\"}";
    }
    os << ']';
  }
  os << "\n]}\n";
  return os.str();
}

RegionGrid grid_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("grid json: ") + e.what());
  }
  try {
    RegionGrid g;
    g.alpha = j.at("alpha").get<double>();
    g.tau_alpha = j.at("tau_alpha").get<double>();
    g.m = j.at("m").get<double>();
    g.beta_axis = j.at("beta_axis").get<std::vector<double>>();
    g.tau_axis = j.at("tau_axis").get<std::vector<double>>();
    const auto& rows = j.at("verdict");
    if (rows.size() != g.tau_axis.size()) throw DomainError("grid json: row count mismatch");
    for (const auto& row : rows) {
      if (row.size() != g.beta_axis.size()) throw DomainError("grid json: column count mismatch");
      for (const auto& cell : row)
        g.verdicts.emplace_back(verdict_kind_from_string(cell.at("kind").get<std::string>()),
                                reason_from_string(cell.at("reason").get<std::string>()));
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("grid json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DomainError(std::string("grid json: ") + e.what());
  }
}

void write_grid_csv(std::ostream& out, const RegionGrid& grid) {
  out << "beta,tau_beta,kind,reason\n";
  for (std::size_t it = 0; it < grid.tau_axis.size(); ++it)
    for (std::size_t ib = 0; ib < grid.beta_axis.size(); ++ib) {
      const Verdict& v = grid.at(it, ib);
      out << format_double(grid.beta_axis[ib]) << ',' << format_double(grid.tau_axis[it]) << ','
          << to_string(v.kind()) << ',' << to_string(v.reason()) << '\n';
    }
}

void write_curves_csv(std::ostream& out, const std::vector<BranchSamples>& branches) {
  out << "branch_sign,l,omega,theta,beta,tau_beta,dbeta_domega,crossing\n";
  for (const auto& b : branches)
    for (const auto& s : b.samples)
      out << sign_char(b.id.sign) << ',' << b.id.l << ',' << format_double(s.omega) << ','
          << format_double(s.theta) << ',' << format_double(s.beta) << ','
          << format_double(s.tau_beta) << ',' << format_double(s.dbeta_domega) << ','
          << s.crossing << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x";
  for (std::size_t j = 1; j < traj.states.size(); ++j) out << ",y_" << j;
  out << '\n';
  for (std::size_t n = 0; n < traj.steps(); ++n) {
    out << format_double(traj.t[n]);
    for (const auto& comp : traj.states) out << ',' << format_double(comp[n]);
    out << '\n';
  }
}

void write_switch_csv(std::ostream& out, const std::vector<SwitchEvent>& events) {
  out << "tau_beta,count_before,count_after\n";
  for (const auto& e : events)
    out << format_double(e.tau_beta) << ',' << e.count_before << ',' << e.count_after << '\n';
}

}  // namespace ddestab::io
