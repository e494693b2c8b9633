#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ddestab/boundary.hpp"
#include "ddestab/classifier.hpp"
#include "ddestab/simulate.hpp"

namespace ddestab::io {

/// %.17g, so that every double round-trips through its text form.
std::string format_double(double v);

/// {"alpha":..,"tau_alpha":..,"m":..,"beta_axis":[..],"tau_axis":[..],
///  "verdict":[[{"kind":..,"reason":..},..],..]} with verdict rows indexed by tau.
std::string grid_to_json(const RegionGrid& grid);
RegionGrid grid_from_json(std::string_view text);

void write_grid_csv(std::ostream& out, const RegionGrid& grid);

struct BranchSamples {
  BranchId id;
  std::vector<CurveSample> samples;
};

/// Columns: branch_sign,l,omega,theta,beta,tau_beta,dbeta_domega,crossing
void write_curves_csv(std::ostream& out, const std::vector<BranchSamples>& branches);

/// Columns: t,x,y_1..y_m
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

void write_switch_csv(std::ostream& out, const std::vector<SwitchEvent>& events);

}  // namespace ddestab::io
