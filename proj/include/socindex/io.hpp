#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "socindex/control.hpp"
#include "socindex/integrator.hpp"
#include "socindex/sensitivity.hpp"

namespace socindex {

inline constexpr const char* kVersion = "1.0.0";

/// Flat `key = value` scenario description. Relative paths resolve against
/// the directory of the config file.
struct ScenarioConfig {
  std::filesystem::path base_dir;

  double latitude_deg = 0;
  double clay_pct = 0;
  double depth_cm = 0;
  int baseline_year = 0;
  int horizon_years = 0;
  std::optional<LandClass> land_class;  // derived from the ratio when unset
  double dpm_rpm_ratio = 0;
  double bare_months = 4.0;
  double eta = kDefaultEta;
  double plant_input_t_per_ha = 1.0;
  double manure_input_t_per_ha = 0.0;
  std::optional<double> epsilon;        // re-weights P0/F0, keeping their sum
  FymPolicy fym_mode = FymPolicy::None;
  CoverMode cover_mode = CoverMode::Timed;
  Scheme scheme = Scheme::NonStandard;
  double sensitivity_dt_months = kDefaultSensitivityStep;
  std::filesystem::path climate_csv;
  std::filesystem::path npp_csv;
  std::optional<std::filesystem::path> density_csv;  // built-in table when unset

  std::string source;  // raw text, part of the scenario hash

  /// Range checks; throws ConfigError.
  void validate() const;
};

/// `origin` names the source in error messages.
ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            const std::string& origin = "config");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Climate CSV: year,month,temp_c,rain_mm[,pet_mm][,daylength_h].
ClimateSeries parse_climate(std::string_view text, const SiteMoisture& site,
                            double latitude_deg, const std::string& origin = "climate");
ClimateSeries load_climate(const std::filesystem::path& path, const SiteMoisture& site,
                           double latitude_deg);

/// NPP CSV: year,npp. Returns N_P ratios keyed by year, baseline = 1.
std::map<int, double> parse_npp(std::string_view text, int baseline_year,
                                const std::string& origin = "npp");
std::map<int, double> load_npp(const std::filesystem::path& path, int baseline_year);

/// Density CSV: month,forest,grassland,arable[,arable_cover]. Rows keyed by
/// month, any order.
DensityTable parse_density_table(std::string_view text, const std::string& origin = "density");
DensityTable load_density_table(const std::filesystem::path& path);

/// Loads every referenced file and assembles a validated scenario.
Scenario build_scenario(const ScenarioConfig& cfg);

std::string read_file(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hash_hex(std::uint64_t h);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

void write_trajectory(std::ostream& os, const Trajectory& traj);
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory parse_trajectory(std::string_view text, const std::string& origin = "trajectory");
Trajectory read_trajectory(const std::filesystem::path& path);

void write_sensitivity(std::ostream& os, const SensitivitySeries& series, std::uint64_t hash);
void write_sensitivity(const std::filesystem::path& path, const SensitivitySeries& series,
                       std::uint64_t hash);

void write_control(std::ostream& os, const ControlSchedule& schedule, std::uint64_t hash,
                   const std::string& scheme);
void write_control(const std::filesystem::path& path, const ControlSchedule& schedule,
                   std::uint64_t hash, const std::string& scheme);

}  // namespace socindex
