#include "socindex/climate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "socindex/errors.hpp"

namespace socindex {

namespace {

// Temperature response constants of the RothC logistic.
constexpr double kTempScale = 47.91;
constexpr double kTempNumerator = 106.06;
constexpr double kTempLogArg = 46.91;
constexpr double kPoleGuard = 0.01;  // C

double temp_shift(double temp0) { return kTempNumerator / std::log(kTempLogArg) - temp0; }

std::string year_month(int y, int m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d", y, m);
  return buf;
}

}  // namespace

SiteMoisture max_deficit(double clay_pct, double depth_cm) {
  if (!(clay_pct >= 0.0 && clay_pct <= 100.0)) {
    throw DomainError("clay content must lie in [0, 100] %, got " + std::to_string(clay_pct));
  }
  if (!(depth_cm > 0.0)) {
    throw DomainError("soil depth must be positive, got " + std::to_string(depth_cm));
  }
  const double m = -(20.0 + 1.3 * clay_pct - 0.01 * clay_pct * clay_pct) * depth_cm / 23.0;
  return {m, 0.444 * m};
}

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

std::array<int, 12> month_lengths(int year) {
  std::array<int, 12> n{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (is_leap_year(year)) n[1] = 29;
  return n;
}

Monthly monthly_day_length(double latitude_deg, int year) {
  // CBM model (Forsythe et al. 1995), sunrise/sunset at the solar disc centre.
  const double lat = latitude_deg * std::numbers::pi / 180.0;
  const auto days = month_lengths(year);
  Monthly out{};
  int doy = 0;
  for (int m = 0; m < 12; ++m) {
    double sum = 0.0;
    for (int d = 0; d < days[m]; ++d) {
      ++doy;
      const double theta =
          0.2163108 + 2.0 * std::atan(0.9671396 * std::tan(0.00860 * (doy - 186)));
      const double decl = std::asin(0.39795 * std::cos(theta));
      double arg = (std::sin(lat) * std::sin(decl)) / (std::cos(lat) * std::cos(decl));
      arg = std::clamp(arg, -1.0, 1.0);
      sum += 24.0 - 24.0 / std::numbers::pi * std::acos(arg);
    }
    out[m] = sum / days[m];
  }
  return out;
}

double thornthwaite_heat_index(std::span<const double, 12> temps) {
  double index = 0.0;
  for (double t : temps) {
    if (t > 0.0) index += std::pow(t / 5.0, 1.5);
  }
  return index;
}

double thornthwaite_exponent(double heat_index) {
  const double i = heat_index;
  return 6.7e-7 * i * i * i - 7.7e-5 * i * i + 1.8e-2 * i + 0.49;
}

Monthly thornthwaite_pet(std::span<const double, 12> temps,
                         std::span<const double, 12> day_lengths_h,
                         std::span<const int, 12> month_days) {
  Monthly pet{};
  const double index = thornthwaite_heat_index(temps);
  if (index <= 0.0) return pet;
  const double a = thornthwaite_exponent(index);
  for (int m = 0; m < 12; ++m) {
    if (!(day_lengths_h[m] > 0.0) && temps[m] > 0.0) {
      throw DomainError("day length must be positive in month " + std::to_string(m + 1));
    }
    if (temps[m] <= 0.0) continue;
    pet[m] = 16.0 * (day_lengths_h[m] / 12.0) * (month_days[m] / 30.0) *
             std::pow(10.0 * temps[m] / index, a);
  }
  return pet;
}

Monthly accumulated_deficit(std::span<const double, 12> rain,
                            std::span<const double, 12> pet, double max_deficit) {
  Monthly acc{};
  int m = 0;
  // Leading wet months carry no deficit.
  for (; m < 12 && pet[m] <= rain[m]; ++m) acc[m] = 0.0;
  double prev = 0.0;
  for (; m < 12; ++m) {
    acc[m] = std::min(std::max(max_deficit, prev + rain[m] - pet[m]), 0.0);
    prev = acc[m];
  }
  return acc;
}

double temperature_pole(double temp0) { return -temp_shift(temp0); }

double rate_modifier_temperature(double temp, double temp0) {
  const double denom = temp + temp_shift(temp0);
  if (!(denom > kPoleGuard)) {
    throw DomainError("temperature " + std::to_string(temp) +
                      " C is at or below the k_a pole at " +
                      std::to_string(temperature_pole(temp0)) + " C");
  }
  return kTempScale / (1.0 + std::exp(kTempNumerator / denom));
}

double rate_modifier_moisture(double acc, const SiteMoisture& site) {
  constexpr double tol = 1e-12;
  const double M = site.max_deficit;
  const double Mb = site.slowdown_point;
  if (!(acc <= tol && acc >= M - tol)) {
    throw DomainError("accumulated deficit " + std::to_string(acc) + " mm outside [" +
                      std::to_string(M) + ", 0]");
  }
  if (acc >= Mb) return 1.0;
  return 0.2 + 0.8 * (M - acc) / (M - Mb);
}

double rate_modifier_cover_timed(int month, double r, const CoverModel& cover) {
  if (month < 1 || month > 12) {
    throw DomainError("month index must be in 1..12, got " + std::to_string(month));
  }
  if (r < 1.0) return 0.6;
  if (!cover.arable_cover) {
    throw ConfigError("arable cover table required for DPM/RPM ratio >= 1");
  }
  return (*cover.arable_cover)[month - 1];
}

double cover_sigmoid(double r) {
  if (!(r > 0.0)) {
    throw DomainError("DPM/RPM ratio must be positive for the smooth cover factor, got " +
                      std::to_string(r));
  }
  const double x = 30.0 * (r - 1.0) / r;
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double rate_modifier_cover_smooth(double r, double bare_months) {
  if (!(bare_months >= 0.0 && bare_months <= 12.0)) {
    throw DomainError("bare months must lie in [0, 12], got " + std::to_string(bare_months));
  }
  return 0.6 + bare_months / 30.0 * cover_sigmoid(r);
}

double ClimateYear::mean_temp() const {
  double s = 0.0;
  for (const auto& m : months) s += m.temp;
  return s / 12.0;
}

double ClimateYear::mean_acc() const {
  double s = 0.0;
  for (const auto& m : months) s += m.acc;
  return s / 12.0;
}

ClimateSeries ClimateSeries::build(std::vector<ClimateRow> rows, const SiteMoisture& site,
                                   double latitude_deg) {
  if (rows.empty()) throw DataError("climate series is empty");
  std::map<std::pair<int, int>, ClimateRow> keyed;
  for (auto& row : rows) {
    if (row.month < 1 || row.month > 12) {
      throw DataError("line " + std::to_string(row.line) + ": month " +
                      std::to_string(row.month) + " out of range");
    }
    const auto key = std::make_pair(row.year, row.month);
    if (keyed.count(key)) {
      throw DataError("line " + std::to_string(row.line) + ": duplicate month " +
                      year_month(row.year, row.month));
    }
    keyed.emplace(key, row);
  }

  const int y0 = keyed.begin()->first.first;
  const int y1 = keyed.rbegin()->first.first;
  ClimateSeries s;
  s.site_ = site;
  for (int y = y0; y <= y1; ++y) {
    ClimateYear cy;
    cy.year = y;
    const auto days = month_lengths(y);
    std::optional<Monthly> model_daylength;
    bool all_pet = true, any_pet = false;
    for (int m = 1; m <= 12; ++m) {
      auto it = keyed.find({y, m});
      if (it == keyed.end()) throw DataError("gap at " + year_month(y, m));
      const ClimateRow& r = it->second;
      auto& mc = cy.months[m - 1];
      mc.temp = r.temp;
      mc.rain = r.rain;
      mc.days = days[m - 1];
      if (r.day_length) {
        mc.day_length = *r.day_length;
      } else {
        if (!model_daylength) model_daylength = monthly_day_length(latitude_deg, y);
        mc.day_length = (*model_daylength)[m - 1];
      }
      all_pet = all_pet && r.pet.has_value();
      any_pet = any_pet || r.pet.has_value();
      if (r.pet) mc.pet = *r.pet;
    }
    if (any_pet && !all_pet) {
      throw DataError("year " + std::to_string(y) + " has PET for only some months");
    }
    if (!all_pet) {
      Monthly t{}, L{};
      std::array<int, 12> n{};
      for (int m = 0; m < 12; ++m) {
        t[m] = cy.months[m].temp;
        L[m] = cy.months[m].day_length;
        n[m] = cy.months[m].days;
      }
      const auto pet = thornthwaite_pet(t, L, n);
      for (int m = 0; m < 12; ++m) cy.months[m].pet = pet[m];
    }
    Monthly rain{}, pet{};
    for (int m = 0; m < 12; ++m) {
      rain[m] = cy.months[m].rain;
      pet[m] = cy.months[m].pet;
    }
    const auto acc = accumulated_deficit(rain, pet, site.max_deficit);
    for (int m = 0; m < 12; ++m) cy.months[m].acc = acc[m];
    s.years_.push_back(cy);
  }
  return s;
}

bool ClimateSeries::has_year(int y) const {
  return !years_.empty() && y >= first_year() && y <= last_year();
}

const ClimateYear& ClimateSeries::year(int y) const {
  if (!has_year(y)) throw DataError("missing climate year " + std::to_string(y));
  return years_[static_cast<std::size_t>(y - first_year())];
}

double ReferenceState::rho0(double r) const {
  return kb0 * rate_modifier_cover_smooth(r, bare_months);
}

ReferenceState make_reference(const ClimateSeries& series, int baseline_year,
                              double bare_months) {
  const auto avg = annual_averages(series, baseline_year);
  ReferenceState ref;
  ref.temp0 = avg.temp;
  ref.acc0 = avg.acc;
  ref.kb0 = rate_modifier_moisture(avg.acc, series.site());
  ref.bare_months = bare_months;
  return ref;
}

double rho_monthly(const MonthClimate& month, int month_index, const ReferenceState& ref,
                   const SiteMoisture& site, double r, const CoverModel& cover) {
  const double ka = rate_modifier_temperature(month.temp, ref.temp0);
  const double kb = rate_modifier_moisture(month.acc, site);
  const double kc = cover.mode == CoverMode::Timed
                        ? rate_modifier_cover_timed(month_index, r, cover)
                        : rate_modifier_cover_smooth(r, cover.bare_months);
  return ka * kb * kc;
}

AnnualAverages annual_averages(const ClimateSeries& series, int year) {
  const auto& y = series.year(year);
  return {year, y.mean_temp(), y.mean_acc()};
}

double rho_annual(const AnnualAverages& avg, const ReferenceState& ref,
                  const SiteMoisture& site, double r) {
  return rate_modifier_temperature(avg.temp, ref.temp0) *
         rate_modifier_moisture(avg.acc, site) *
         rate_modifier_cover_smooth(r, ref.bare_months);
}

}  // namespace socindex
