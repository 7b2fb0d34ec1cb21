#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace socindex {

using Monthly = std::array<double, 12>;

/// Site soil-water limits (mm, both <= 0).
struct SiteMoisture {
  double max_deficit;    // M
  double slowdown_point; // Mb = 0.444 M
};

/// M(cly, d) = -(20 + 1.3 cly - 0.01 cly^2) d / 23 and Mb = 0.444 M.
SiteMoisture max_deficit(double clay_pct, double depth_cm);

bool is_leap_year(int year);
std::array<int, 12> month_lengths(int year);

/// Mean daylight hours for each month at the given latitude, from a solar
/// declination model averaged over the days of the month.
Monthly monthly_day_length(double latitude_deg, int year);

double thornthwaite_heat_index(std::span<const double, 12> temps);
double thornthwaite_exponent(double heat_index);

/// Monthly potential evapotranspiration (mm). Months at or below 0 C give 0;
/// a year with zero heat index yields all zeros.
Monthly thornthwaite_pet(std::span<const double, 12> temps,
                         std::span<const double, 12> day_lengths_h,
                         std::span<const int, 12> month_days);

/// Accumulated soil moisture deficit over one year, clamped to [M, 0].
/// The balance restarts from zero at the start of each year.
Monthly accumulated_deficit(std::span<const double, 12> rain,
                            std::span<const double, 12> pet, double max_deficit);

// --- rate modifiers -------------------------------------------------------

/// Temperature at which the shifted logistic k_a has its pole.
double temperature_pole(double temp0);

/// k_a, normalized so that k_a(temp0 | temp0) = 1.
double rate_modifier_temperature(double temp, double temp0);

/// k_b in [0.2, 1]; acc must lie in [M, 0].
double rate_modifier_moisture(double acc, const SiteMoisture& site);

enum class CoverMode { Timed, Smooth };

/// Soil cover description for the cover factor k_c.
struct CoverModel {
  CoverMode mode = CoverMode::Timed;
  double bare_months = 4.0;                // N_b for the smooth form
  std::optional<Monthly> arable_cover;     // S_r(m) for r >= 1, timed form
};

/// Timed k_c(m, r): 0.6 for r < 1, otherwise the monthly arable cover value.
double rate_modifier_cover_timed(int month, double r, const CoverModel& cover);

/// Smooth k_c(r) = 0.6 + (N_b/30) sigmoid(30 (r-1)/r).
double rate_modifier_cover_smooth(double r, double bare_months);

/// Logistic part of the smooth cover factor, e^x / (1 + e^x) with x = 30(r-1)/r.
double cover_sigmoid(double r);

// --- series ---------------------------------------------------------------

struct MonthClimate {
  double temp = 0;       // C
  double rain = 0;       // mm
  double pet = 0;        // mm
  double acc = 0;        // mm, derived
  double day_length = 0; // h
  int days = 0;
};

struct ClimateYear {
  int year = 0;
  std::array<MonthClimate, 12> months{};

  double mean_temp() const;
  double mean_acc() const;
};

/// One raw CSV row before derivation.
struct ClimateRow {
  int year = 0;
  int month = 0;
  double temp = 0;
  double rain = 0;
  std::optional<double> pet;
  std::optional<double> day_length;
  int line = 0;  // source line, for diagnostics
};

/// Contiguous monthly climate with PET and accumulated deficit derived
/// per calendar year.
class ClimateSeries {
 public:
  /// Rows may arrive in any order. Throws DataError on gaps, duplicates or
  /// partial years. PET is computed by Thornthwaite for years with no PET
  /// column; day length falls back to the latitude model.
  static ClimateSeries build(std::vector<ClimateRow> rows, const SiteMoisture& site,
                             double latitude_deg);

  int first_year() const { return years_.front().year; }
  int last_year() const { return years_.back().year; }
  std::size_t size() const { return years_.size(); }
  bool has_year(int year) const;
  /// Throws DataError naming the year when absent.
  const ClimateYear& year(int year) const;
  const SiteMoisture& site() const { return site_; }
  const std::vector<ClimateYear>& years() const { return years_; }

 private:
  std::vector<ClimateYear> years_;
  SiteMoisture site_{};
};

/// Baseline-year anchor for the rate modifiers.
struct ReferenceState {
  double temp0 = 0;   // mean temperature of the baseline year
  double acc0 = 0;    // mean accumulated deficit of the baseline year
  double kb0 = 1;     // k_b(acc0)
  double bare_months = 4.0;

  /// rho^(0)(r) = k_b(acc0) k_c(r), smooth cover factor.
  double rho0(double r) const;
};

ReferenceState make_reference(const ClimateSeries& series, int baseline_year,
                              double bare_months);

/// Monthly rate modifier rho = k_a k_b k_c.
double rho_monthly(const MonthClimate& month, int month_index, const ReferenceState& ref,
                   const SiteMoisture& site, double r, const CoverModel& cover);

struct AnnualAverages {
  int year = 0;
  double temp = 0;
  double acc = 0;
};

AnnualAverages annual_averages(const ClimateSeries& series, int year);

/// rho^(n)(r) = k_a(Temp^(n)) k_b(Acc^(n)) k_c(r) with the smooth cover factor.
double rho_annual(const AnnualAverages& avg, const ReferenceState& ref,
                  const SiteMoisture& site, double r);

}  // namespace socindex
