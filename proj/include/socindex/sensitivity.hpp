#pragma once

#include <string>
#include <vector>

#include "socindex/delta_dynamics.hpp"

namespace socindex {

/// Year-averaged, autonomous counterpart of the change-index model. Index
/// n = 0 is the baseline year.
struct AveragedModel {
  SoilParams params = SoilParams::make(50.0, 23.0, 1.0);
  ReferenceState reference;
  SiteMoisture site{};
  std::vector<AnnualAverages> years;
  std::vector<double> np_ratios;
  int baseline_year = 0;

  double T() const { return params.months_per_year(); }
  int horizon() const { return static_cast<int>(years.size()) - 1; }
  /// rho^(n)(r) for the model's own ratio.
  double rho(int n) const;
  double rho0() const { return reference.rho0(params.ratio()); }
};

AveragedModel make_averaged_model(const Scenario& s);

/// theta^(n) = (N_P^(n) - rho^(n)/rho^(0)) / T, per month.
double theta(int n, const AveragedModel& m);

struct AveragedSample {
  double t = 0;
  Vec4 delta_c = Vec4::Zero();
};

inline constexpr double kDefaultSensitivityStep = 0.01;

/// Non-standard integration of the averaged model from zero at t0+T over
/// `years` years with uniform step close to `dt`; every `sample_every`-th
/// step is recorded (plus the start and each year end).
std::vector<AveragedSample> averaged_delta_solve(const AveragedModel& m, int years,
                                                 double dt = kDefaultSensitivityStep,
                                                 int sample_every = 1);

/// phi(Z) = Z^-1 (e^Z - I) for a dense 4x4 matrix by scaling and squaring.
Mat4 phi_dense(const Mat4& Z);

/// Exact first-year solution tau theta phi(tau rho A) a_g, tau = t - t0 - T.
Vec4 closed_form_first_year(double tau, const AveragedModel& m);

/// d rho / d Temp for the annual modifier at temperature `temp`.
double drho_dtemp(double temp, double temp0, double acc, double r, const SiteMoisture& site,
                  double bare_months);

/// d rho / d r for the annual modifier with the smooth cover factor.
double drho_dr(double temp, double temp0, double acc, double r, const SiteMoisture& site,
               double bare_months);

enum class SensitivityParam { Temp1, Np1, Ratio };

const char* to_string(SensitivityParam p);
SensitivityParam parse_sensitivity_param(const std::string& s);

struct SensitivitySample {
  double t = 0;
  Vec4 s = Vec4::Zero();
  double s_dsoc = 0;
  Vec4 delta_c = Vec4::Zero();
};

struct SensitivitySeries {
  SensitivityParam param = SensitivityParam::Temp1;
  double dt = kDefaultSensitivityStep;
  std::vector<SensitivitySample> samples;
};

/// Direct-method sensitivity of the averaged change index. Temp1 and Np1
/// are first-year parameters (years must be 1); Ratio runs any horizon.
SensitivitySeries sensitivity(SensitivityParam param, const AveragedModel& m, int years,
                              double dt = kDefaultSensitivityStep, int sample_every = 1);

}  // namespace socindex
