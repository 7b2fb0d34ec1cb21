#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "socindex/climate.hpp"
#include "socindex/equilibrium.hpp"
#include "socindex/pools.hpp"

namespace socindex {

enum class LandClass { Forest, Grassland, Arable };

const char* to_string(LandClass c);
LandClass parse_land_class(const std::string& name);

/// forest: r < 0.5, grassland: 0.5 <= r < 1, arable: r >= 1.
LandClass land_class_for_ratio(double r);

/// Share of the annual plant input delivered in each month; sums to 1.
struct PlantInputDensity {
  LandClass land_class = LandClass::Forest;
  Monthly proportions{};

  /// Throws DataError naming the class if any entry is negative or the
  /// total differs from 1 by more than 1e-9.
  void validate() const;
};

struct DensityTable {
  PlantInputDensity forest, grassland, arable;
  std::optional<Monthly> arable_cover;  // S_r(m), timed cover factor for r >= 1

  const PlantInputDensity& for_class(LandClass c) const;
  void validate() const;
};

/// The published monthly input shares and arable cover factors.
DensityTable standard_density_table();

/// Monthly share of annual input for a land class (dimensionless).
double plant_density(int month, LandClass land_class, const DensityTable& table);

enum class FymPolicy { None, Fixed, Controlled };

const char* to_string(FymPolicy p);

/// Everything needed to run the normalized change-index model.
struct Scenario {
  SoilParams params = SoilParams::make(50.0, 23.0, 1.0);
  CompartmentMatrices mats = build_matrices(params);
  ClimateSeries climate;
  ReferenceState reference;
  CoverModel cover;
  PlantInputDensity density;
  int baseline_year = 0;
  int horizon_years = 0;
  std::vector<double> np_ratios;  // index n = 0..horizon, np_ratios[0] == 1
  FymPolicy fym = FymPolicy::None;
  double plant_input = 1.0;       // P0 (t C/ha/yr)
  double manure_input = 0.0;      // F0 (t C/ha/yr)
  std::uint64_t hash = 0;

  double T() const { return params.months_per_year(); }
  double r() const { return params.ratio(); }
  double rho0() const { return reference.rho0(params.ratio()); }
  double epsilon() const { return plant_fraction(plant_input, manure_input); }
  double np_ratio(int n) const;

  /// Throws DataError/ConfigError when climate or NPP years are missing or
  /// parameters are inconsistent.
  void validate() const;
};

/// Left-endpoint drivers of month m (1..12) of delta year n (>= 1).
struct MonthDrivers {
  int n = 0;
  int month = 0;
  int year = 0;
  double dt = 0;          // month length in model time units
  double rho = 0;         // monthly rate modifier
  double plant_rate = 0;  // g-hat density: share / dt
  double np = 1;          // N_P^(n)
};

/// dt_m = T N_m / (days in year).
double month_step(int year, int month, double months_per_year);

MonthDrivers month_drivers(const Scenario& s, int n, int month);

/// Normalized no-manure forcing (N_P g - rho/(T rho0)) a_g.
Vec4 delta_forcing_no_fym(const MonthDrivers& d, const Scenario& s);

/// Normalized forcing with manure; `manure_rate` is the manure density f
/// (t C/ha per time unit) and F0 the baseline annual manure.
Vec4 delta_forcing_fym(const MonthDrivers& d, const Scenario& s, double manure_rate);

/// Scalar bracket of the change-index equation with manure:
/// eps (N_P g - rho/(eps T rho0)) + (1-eps) f/F0.
double delta_soc_forcing_fym(const MonthDrivers& d, const Scenario& s, double manure_rate);

inline double delta_soc(const Vec4& delta_c) { return delta_c.sum(); }

}  // namespace socindex
