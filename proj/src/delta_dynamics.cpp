#include "socindex/delta_dynamics.hpp"

#include <cmath>
#include <string>

#include "socindex/errors.hpp"

namespace socindex {

const char* to_string(LandClass c) {
  switch (c) {
    case LandClass::Forest: return "forest";
    case LandClass::Grassland: return "grassland";
    case LandClass::Arable: return "arable";
  }
  return "?";
}

LandClass parse_land_class(const std::string& name) {
  if (name == "forest") return LandClass::Forest;
  if (name == "grassland") return LandClass::Grassland;
  if (name == "arable") return LandClass::Arable;
  throw ConfigError("unknown land class '" + name + "'");
}

LandClass land_class_for_ratio(double r) {
  if (r < 0.5) return LandClass::Forest;
  if (r < 1.0) return LandClass::Grassland;
  return LandClass::Arable;
}

void PlantInputDensity::validate() const {
  double sum = 0.0;
  for (int m = 0; m < 12; ++m) {
    if (!(proportions[m] >= 0.0) || !std::isfinite(proportions[m])) {
      throw DataError(std::string(to_string(land_class)) + " density: month " +
                      std::to_string(m + 1) + " share must be finite and >= 0");
    }
    sum += proportions[m];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DataError(std::string(to_string(land_class)) +
                    " density: monthly shares sum to " + std::to_string(sum) +
                    ", expected 1");
  }
}

const PlantInputDensity& DensityTable::for_class(LandClass c) const {
  switch (c) {
    case LandClass::Forest: return forest;
    case LandClass::Grassland: return grassland;
    case LandClass::Arable: return arable;
  }
  throw ConfigError("unknown land class");
}

void DensityTable::validate() const {
  forest.validate();
  grassland.validate();
  arable.validate();
  if (!arable_cover) return;
  for (int m = 0; m < 12; ++m) {
    const double v = (*arable_cover)[m];
    if (!(v >= 0.6 - 1e-12 && v <= 1.0 + 1e-12)) {
      throw DataError("arable cover factor for month " + std::to_string(m + 1) +
                      " must lie in [0.6, 1]");
    }
  }
}

DensityTable standard_density_table() {
  constexpr double sixth = 1.0 / 6.0;
  DensityTable t;
  t.arable = {LandClass::Arable,
              {0.0, 0.0, 0.0, sixth, sixth, sixth, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0}};
  t.grassland = {LandClass::Grassland,
                 {0.05, 0.05, 0.05, 0.05, 0.10, 0.15, 0.15, 0.10, 0.10, 0.10, 0.05, 0.05}};
  t.forest = {LandClass::Forest,
              {0.025, 0.025, 0.025, 0.025, 0.05, 0.05, 0.05, 0.05, 0.20, 0.20, 0.20, 0.10}};
  // Bare soil August to November.
  t.arable_cover = Monthly{0.6, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6, 1.0, 1.0, 1.0, 1.0, 0.6};
  return t;
}

double plant_density(int month, LandClass land_class, const DensityTable& table) {
  if (month < 1 || month > 12) {
    throw DomainError("month index must be in 1..12, got " + std::to_string(month));
  }
  return table.for_class(land_class).proportions[month - 1];
}

const char* to_string(FymPolicy p) {
  switch (p) {
    case FymPolicy::None: return "none";
    case FymPolicy::Fixed: return "fixed";
    case FymPolicy::Controlled: return "controlled";
  }
  return "?";
}

double Scenario::np_ratio(int n) const {
  if (n < 0 || n >= static_cast<int>(np_ratios.size())) {
    throw DataError("missing NPP ratio for year " + std::to_string(baseline_year + n));
  }
  return np_ratios[static_cast<std::size_t>(n)];
}

void Scenario::validate() const {
  if (horizon_years < 0) throw ConfigError("horizon must be non-negative");
  if (!climate.has_year(baseline_year)) {
    throw DataError("missing climate year " + std::to_string(baseline_year));
  }
  for (int n = 1; n <= horizon_years; ++n) {
    if (!climate.has_year(baseline_year + n)) {
      throw DataError("missing climate year " + std::to_string(baseline_year + n));
    }
    const double np = np_ratio(n);
    if (!(np > 0.0)) {
      throw DataError("NPP ratio for year " + std::to_string(baseline_year + n) +
                      " must be positive");
    }
  }
  if (np_ratios.empty() || std::abs(np_ratios[0] - 1.0) > 1e-12) {
    throw DataError("baseline NPP ratio must equal 1");
  }
  if (!(plant_input >= 0.0) || !(manure_input >= 0.0) || plant_input + manure_input <= 0.0) {
    throw ConfigError("baseline inputs must be non-negative and not both zero");
  }
  if (fym == FymPolicy::None && manure_input > 0.0) {
    throw ConfigError("manure policy 'none' requires zero baseline manure");
  }
  if (fym != FymPolicy::None && !(manure_input > 0.0)) {
    throw ConfigError(std::string("manure policy '") + to_string(fym) +
                      "' requires positive baseline manure");
  }
  density.validate();
  if (land_class_for_ratio(r()) == LandClass::Arable && cover.mode == CoverMode::Timed &&
      !cover.arable_cover) {
    throw ConfigError("arable cover table required for DPM/RPM ratio >= 1");
  }
}

double month_step(int year, int month, double months_per_year) {
  const auto days = month_lengths(year);
  const double year_days = is_leap_year(year) ? 366.0 : 365.0;
  return months_per_year / year_days * days[static_cast<std::size_t>(month - 1)];
}

MonthDrivers month_drivers(const Scenario& s, int n, int month) {
  MonthDrivers d;
  d.n = n;
  d.month = month;
  d.year = s.baseline_year + n;
  d.dt = month_step(d.year, month, s.T());
  const auto& mc = s.climate.year(d.year).months[static_cast<std::size_t>(month - 1)];
  d.rho = rho_monthly(mc, month, s.reference, s.climate.site(), s.r(), s.cover);
  d.plant_rate = s.density.proportions[static_cast<std::size_t>(month - 1)] / d.dt;
  d.np = s.np_ratio(n);
  return d;
}

Vec4 delta_forcing_no_fym(const MonthDrivers& d, const Scenario& s) {
  if (s.manure_input != 0.0) {
    throw ContractError("baseline has manure input; use the manure forcing");
  }
  return (d.np * d.plant_rate - d.rho / (s.T() * s.rho0())) * s.mats.a_g;
}

Vec4 delta_forcing_fym(const MonthDrivers& d, const Scenario& s, double manure_rate) {
  if (!(s.manure_input > 0.0)) {
    throw ContractError("manure forcing requires positive baseline manure");
  }
  const double eps = s.epsilon();
  const double turnover = d.rho / (s.T() * s.rho0());
  return eps * (d.np * d.plant_rate - turnover) * s.mats.a_g +
         (1.0 - eps) * (manure_rate / s.manure_input - turnover) * s.mats.a_f;
}

double delta_soc_forcing_fym(const MonthDrivers& d, const Scenario& s, double manure_rate) {
  const double eps = s.epsilon();
  const double turnover = d.rho / (s.T() * s.rho0());
  // eps (N_P g - turnover / eps) with the eps cancelled so eps = 0 stays finite.
  return eps * d.np * d.plant_rate - turnover +
         (1.0 - eps) * manure_rate / s.manure_input;
}

}  // namespace socindex
