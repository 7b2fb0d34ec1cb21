#include "socindex/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "socindex/errors.hpp"

namespace socindex {

double phi_scalar(double z) {
  if (std::abs(z) < 1e-6) return 1.0 + z / 2.0 + z * z / 6.0;
  return std::expm1(z) / z;
}

double phi_scalar_derivative(double z) {
  if (std::abs(z) < 0.5) {
    // sum_k (k+1) z^k / (k+2)!
    double term = 0.5;  // z^0 / 2!
    double sum = 0.0;
    for (int k = 0; k < 25; ++k) {
      sum += (k + 1) * term;
      term *= z / (k + 3);
    }
    return sum;
  }
  return (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
}

Mat4 phi_matrix(double dt, double rho, const CompartmentMatrices& mats) {
  Vec4 d;
  for (int i = 0; i < kPools; ++i) d[i] = phi_scalar(-dt * rho * mats.k[i]);
  return mats.I_minus_Lambda * d.asDiagonal() * mats.I_minus_Lambda_inv;
}

Mat4 transition_matrix(double dt, double rho, const CompartmentMatrices& mats) {
  Vec4 e;
  for (int i = 0; i < kPools; ++i) e[i] = std::exp(-dt * rho * mats.k[i]);
  return mats.Lambda + mats.I_minus_Lambda * e.asDiagonal();
}

StepOperator make_step_operator(double dt, double rho, const CompartmentMatrices& mats) {
  return {transition_matrix(dt, rho, mats), dt * phi_matrix(dt, rho, mats)};
}

Vec4 nonstandard_step(const Vec4& state, double dt, double rho, const Vec4& forcing,
                      const CompartmentMatrices& mats) {
  const auto op = make_step_operator(dt, rho, mats);
  return op.F * state + op.dt_phi * forcing;
}

Vec4 nonstandard_step_increment(const Vec4& state, double dt, double rho,
                                const Vec4& forcing, const CompartmentMatrices& mats) {
  return state + dt * phi_matrix(dt, rho, mats) * (rho * mats.A * state + forcing);
}

Vec4 rothc_discrete_step(const Vec4& state, double dt, double rho, const Vec4& forcing,
                         const CompartmentMatrices& mats) {
  return transition_matrix(dt, rho, mats) * state + dt * forcing;
}

const char* to_string(Scheme s) {
  return s == Scheme::NonStandard ? "nonstandard" : "rothc_discrete";
}

const char* to_string(Mode m) { return m == Mode::Delta ? "delta" : "absolute"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "nonstandard") return Scheme::NonStandard;
  if (s == "rothc_discrete") return Scheme::RothCDiscrete;
  throw ConfigError("unknown scheme '" + s + "' (expected nonstandard|rothc_discrete)");
}

Mode parse_mode(const std::string& s) {
  if (s == "delta") return Mode::Delta;
  if (s == "absolute") return Mode::Absolute;
  throw ConfigError("unknown mode '" + s + "' (expected delta|absolute)");
}

std::vector<GridStep> build_time_grid(int baseline_year, int horizon_years,
                                      double months_per_year) {
  std::vector<GridStep> grid;
  grid.reserve(static_cast<std::size_t>(std::max(horizon_years, 0)) * 12);
  for (int n = 1; n <= horizon_years; ++n) {
    const int year = baseline_year + n;
    double t = year * months_per_year;
    for (int m = 1; m <= 12; ++m) {
      GridStep g{n, m, year, month_step(year, m, months_per_year), t};
      grid.push_back(g);
      t += g.dt;
    }
  }
  return grid;
}

std::vector<AnnualMean> Trajectory::annual_means() const {
  std::vector<AnnualMean> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.month == 0) continue;
    if (out.empty() || out.back().year != s.year) out.push_back({s.year, 0.0});
    out.back().delta_soc += s.delta_soc / 12.0;
  }
  return out;
}

double Trajectory::max_abs_delta_soc() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.delta_soc));
  return m;
}

Trajectory simulate(const Scenario& scenario, Scheme scheme, Mode mode) {
  if (scenario.fym == FymPolicy::Controlled) {
    throw ContractError("controlled manure runs go through simulate_controlled");
  }
  const double F0 = scenario.manure_input;
  const double T = scenario.T();
  return simulate_with(scenario, scheme, mode,
                       [F0, T](const MonthDrivers&, const Vec4&) { return F0 / T; });
}

Trajectory simulate_with(const Scenario& s, Scheme scheme, Mode mode, const ManureLaw& law) {
  s.validate();
  const auto grid = build_time_grid(s.baseline_year, s.horizon_years, s.T());
  const bool manure = s.manure_input > 0.0;
  const double total_input = s.plant_input + s.manure_input;

  Trajectory traj;
  traj.scheme = to_string(scheme);
  traj.mode = to_string(mode);
  traj.scenario_hash = s.hash;
  traj.samples.reserve(grid.size() + 1);

  std::optional<PoolVector> c0;
  if (mode == Mode::Absolute) {
    c0 = equilibrium_pools(s.plant_input, s.manure_input, s.rho0(), s.mats, s.T());
  }

  Vec4 delta = Vec4::Zero();
  Vec4 pools = c0 ? c0->values() : Vec4::Zero();
  {
    TrajectorySample first;
    first.t = (s.baseline_year + 1) * s.T();
    first.year = s.baseline_year + 1;
    first.month = 0;
    if (c0) first.pools = pools;
    traj.samples.push_back(first);
  }

  for (const auto& g : grid) {
    const MonthDrivers d = month_drivers(s, g.n, g.month);
    const double manure_rate = manure ? law(d, delta) : 0.0;

    auto advance = [&](const Vec4& x, const Vec4& b) {
      return scheme == Scheme::NonStandard ? nonstandard_step(x, d.dt, d.rho, b, s.mats)
                                           : rothc_discrete_step(x, d.dt, d.rho, b, s.mats);
    };

    if (mode == Mode::Delta) {
      const Vec4 b = manure ? delta_forcing_fym(d, s, manure_rate)
                            : delta_forcing_no_fym(d, s);
      delta = advance(delta, b);
    } else {
      const Vec4 b = s.plant_input * d.np * d.plant_rate * s.mats.a_g +
                     manure_rate * s.mats.a_f;
      pools = advance(pools, b);
      delta = (pools - c0->values()) / total_input;
    }

    TrajectorySample smp;
    smp.t = g.t_start + g.dt;
    smp.year = g.year;
    smp.month = g.month;
    smp.delta_c = delta;
    smp.delta_soc = delta_soc(delta);
    if (mode == Mode::Absolute) smp.pools = pools;
    traj.samples.push_back(smp);
  }
  return traj;
}

}  // namespace socindex
