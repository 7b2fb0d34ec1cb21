#include "socindex/sensitivity.hpp"

#include <cmath>
#include <string>

#include "socindex/errors.hpp"
#include "socindex/integrator.hpp"

namespace socindex {

namespace {

constexpr double kTempScale = 47.91;
constexpr double kTempNumerator = 106.06;
constexpr double kTempLogArg = 46.91;

int steps_per_year(double T, double dt) {
  if (!(dt > 0.0) || dt > T) throw DomainError("sensitivity step must lie in (0, T]");
  return static_cast<int>(std::lround(T / dt));
}

// Per-step operators for constant rho and their rho-derivatives.
struct StepDerivs {
  Mat4 F, Phi, dF, dPhi;
};

StepDerivs step_derivs(double h, double rho, const CompartmentMatrices& mats) {
  Vec4 e, ph, de, dph;
  for (int i = 0; i < kPools; ++i) {
    const double z = -h * rho * mats.k[i];
    e[i] = std::exp(z);
    ph[i] = h * phi_scalar(z);
    de[i] = -h * mats.k[i] * e[i];
    dph[i] = -h * h * mats.k[i] * phi_scalar_derivative(z);
  }
  StepDerivs d;
  d.F = mats.Lambda + mats.I_minus_Lambda * e.asDiagonal();
  d.Phi = mats.I_minus_Lambda * ph.asDiagonal() * mats.I_minus_Lambda_inv;
  d.dF = mats.I_minus_Lambda * de.asDiagonal();
  d.dPhi = mats.I_minus_Lambda * dph.asDiagonal() * mats.I_minus_Lambda_inv;
  return d;
}

}  // namespace

double AveragedModel::rho(int n) const {
  return rho_annual(years.at(static_cast<std::size_t>(n)), reference, site, params.ratio());
}

AveragedModel make_averaged_model(const Scenario& s) {
  s.validate();
  AveragedModel m;
  m.params = s.params;
  m.reference = s.reference;
  m.site = s.climate.site();
  m.baseline_year = s.baseline_year;
  for (int n = 0; n <= s.horizon_years; ++n) {
    m.years.push_back(annual_averages(s.climate, s.baseline_year + n));
    m.np_ratios.push_back(s.np_ratio(n));
  }
  return m;
}

double theta(int n, const AveragedModel& m) {
  if (n < 0 || n > m.horizon()) {
    throw DataError("no annual averages for year " + std::to_string(m.baseline_year + n));
  }
  return (m.np_ratios[static_cast<std::size_t>(n)] - m.rho(n) / m.rho0()) / m.T();
}

std::vector<AveragedSample> averaged_delta_solve(const AveragedModel& m, int years,
                                                 double dt, int sample_every) {
  if (years < 0 || years > m.horizon()) {
    throw DataError("averaged model covers " + std::to_string(m.horizon()) +
                    " years, requested " + std::to_string(years));
  }
  const double T = m.T();
  const int steps = steps_per_year(T, dt);
  const double h = T / steps;
  const auto mats = build_matrices(m.params);

  std::vector<AveragedSample> out;
  Vec4 x = Vec4::Zero();
  const double t0 = (m.baseline_year + 1) * T;
  out.push_back({t0, x});
  for (int n = 1; n <= years; ++n) {
    const auto op = make_step_operator(h, m.rho(n), mats);
    const Vec4 q = theta(n, m) * mats.a_g;
    const double year_start = t0 + (n - 1) * T;
    for (int j = 1; j <= steps; ++j) {
      x = op.F * x + op.dt_phi * q;
      if (j % sample_every == 0 || j == steps) out.push_back({year_start + j * h, x});
    }
  }
  return out;
}

Mat4 phi_dense(const Mat4& Z) {
  const double norm = Z.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Mat4 Zs = Z / std::ldexp(1.0, squarings);

  // Taylor: e^Z = sum Z^k / k!, phi(Z) = sum Z^k / (k+1)!
  Mat4 E = Mat4::Identity();
  Mat4 P = Mat4::Identity();
  Mat4 power = Mat4::Identity();
  double fact = 1.0;
  for (int k = 1; k <= 13; ++k) {
    power = power * Zs;
    fact *= k;
    E += power / fact;
    P += power / (fact * (k + 1));
  }
  for (int i = 0; i < squarings; ++i) {
    P = 0.5 * (E + Mat4::Identity()) * P;
    E = E * E;
  }
  return P;
}

Vec4 closed_form_first_year(double tau, const AveragedModel& m) {
  const double T = m.T();
  if (!(tau >= 0.0 && tau <= T * (1.0 + 1e-12))) {
    throw DomainError("closed form holds only within the first delta year");
  }
  const auto mats = build_matrices(m.params);
  return tau * theta(1, m) * (phi_dense(tau * m.rho(1) * mats.A) * mats.a_g);
}

double drho_dtemp(double temp, double temp0, double acc, double r, const SiteMoisture& site,
                  double bare_months) {
  const double ka = rate_modifier_temperature(temp, temp0);  // also guards the pole
  const double kb = rate_modifier_moisture(acc, site);
  const double kc = rate_modifier_cover_smooth(r, bare_months);
  const double u = temp + kTempNumerator / std::log(kTempLogArg) - temp0;
  return kTempNumerator / kTempScale * ka * ka * kb * kc * std::exp(kTempNumerator / u) /
         (u * u);
}

double drho_dr(double temp, double temp0, double acc, double r, const SiteMoisture& site,
               double bare_months) {
  const double ka = rate_modifier_temperature(temp, temp0);
  const double kb = rate_modifier_moisture(acc, site);
  const double sig = cover_sigmoid(r);
  // e^x / (1 + e^x)^2 = sig (1 - sig)
  return ka * kb * bare_months * sig * (1.0 - sig) / (r * r);
}

const char* to_string(SensitivityParam p) {
  switch (p) {
    case SensitivityParam::Temp1: return "temp1";
    case SensitivityParam::Np1: return "np1";
    case SensitivityParam::Ratio: return "r";
  }
  return "?";
}

SensitivityParam parse_sensitivity_param(const std::string& s) {
  if (s == "temp1") return SensitivityParam::Temp1;
  if (s == "np1") return SensitivityParam::Np1;
  if (s == "r") return SensitivityParam::Ratio;
  throw ConfigError("unknown sensitivity parameter '" + s + "' (expected temp1|np1|r)");
}

SensitivitySeries sensitivity(SensitivityParam param, const AveragedModel& m, int years,
                              double dt, int sample_every) {
  if (param != SensitivityParam::Ratio && years != 1) {
    throw ConfigError(std::string(to_string(param)) +
                      " sensitivity is defined on the first delta year only");
  }
  if (years < 1 || years > m.horizon()) {
    throw DataError("averaged model covers " + std::to_string(m.horizon()) +
                    " years, requested " + std::to_string(years));
  }
  const double T = m.T();
  const int steps = steps_per_year(T, dt);
  const double h = T / steps;
  const auto mats = build_matrices(m.params);
  const double r = m.params.ratio();
  const double rho0 = m.rho0();

  SensitivitySeries out;
  out.param = param;
  out.dt = h;
  Vec4 x = Vec4::Zero();
  Vec4 s = Vec4::Zero();
  const double t0 = (m.baseline_year + 1) * T;
  out.samples.push_back({t0, s, 0.0, x});

  for (int n = 1; n <= years; ++n) {
    const auto& avg = m.years[static_cast<std::size_t>(n)];
    const double rho = m.rho(n);
    const double th = theta(n, m);
    const Vec4 q = th * mats.a_g;

    // d rho / dp and d(theta a_g) / dp for this year.
    double drho = 0.0;
    Vec4 dq = Vec4::Zero();
    switch (param) {
      case SensitivityParam::Temp1:
        drho = drho_dtemp(avg.temp, m.reference.temp0, avg.acc, r, m.site,
                          m.reference.bare_months);
        dq = -drho / (T * rho0) * mats.a_g;
        break;
      case SensitivityParam::Np1:
        dq = mats.a_g / T;
        break;
      case SensitivityParam::Ratio:
        drho = drho_dr(avg.temp, m.reference.temp0, avg.acc, r, m.site,
                       m.reference.bare_months);
        dq = th / ((r + 1.0) * (r + 1.0)) * ratio_direction();
        break;
    }

    // Exact derivative of the non-standard step with respect to p.
    const auto op = step_derivs(h, rho, mats);
    const double year_start = t0 + (n - 1) * T;
    for (int j = 1; j <= steps; ++j) {
      const Vec4 s_next = op.F * s + drho * (op.dF * x + op.dPhi * q) + op.Phi * dq;
      x = op.F * x + op.Phi * q;
      s = s_next;
      if (j % sample_every == 0 || j == steps) {
        out.samples.push_back({year_start + j * h, s, s.sum(), x});
      }
    }
  }
  return out;
}

}  // namespace socindex
