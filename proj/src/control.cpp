#include "socindex/control.hpp"

#include <algorithm>
#include <string>

#include "socindex/errors.hpp"

namespace socindex {

double control_r0(const MonthDrivers& d, const Vec4& delta_c, const Scenario& s,
                  double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw ContractError("manure feedback needs plant fraction in [0, 1), got " +
                        std::to_string(epsilon));
  }
  const double turnover = s.mats.delta * s.mats.k.dot(delta_c) + 1.0 / (s.T() * s.rho0());
  return d.rho / (1.0 - epsilon) * turnover -
         epsilon / (1.0 - epsilon) * d.np * d.plant_rate;
}

double control_r0_discrete(const MonthDrivers& d, const Vec4& delta_c, const Scenario& s,
                           double epsilon, Scheme scheme) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw ContractError("manure feedback needs plant fraction in [0, 1), got " +
                        std::to_string(epsilon));
  }
  const Mat4 F = transition_matrix(d.dt, d.rho, s.mats);
  const Mat4 G = scheme == Scheme::NonStandard ? Mat4(d.dt * phi_matrix(d.dt, d.rho, s.mats))
                                               : Mat4(d.dt * Mat4::Identity());
  // Delta soc after the step is affine in the manure density; solve for no change.
  const Vec4 w = G.transpose() * ones4();
  const double turnover = d.rho / (s.T() * s.rho0());
  const Vec4 b_free = epsilon * (d.np * d.plant_rate - turnover) * s.mats.a_g -
                      (1.0 - epsilon) * turnover * s.mats.a_f;
  const double drift = (F * delta_c).sum() + w.dot(b_free) - delta_c.sum();
  return -drift / ((1.0 - epsilon) * w.dot(s.mats.a_f));
}

double fym_modifier(const MonthDrivers& d, const Vec4& delta_c, const Scenario& s,
                    double epsilon) {
  return std::max(0.0, control_r0(d, delta_c, s, epsilon));
}

std::vector<AnnualManure> ControlSchedule::annual_totals() const {
  std::vector<AnnualManure> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& smp = samples[i];
    if (out.empty() || out.back().year != smp.year) out.push_back({smp.year, 0.0});
    const double before = i == 0 ? 0.0 : samples[i - 1].cumulative;
    out.back().total += smp.cumulative - before;
  }
  return out;
}

Scenario with_plant_fraction(const Scenario& s, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ConfigError("epsilon must lie in [0, 1], got " + std::to_string(epsilon));
  }
  Scenario out = s;
  const double total = s.plant_input + s.manure_input;
  out.plant_input = epsilon * total;
  out.manure_input = (1.0 - epsilon) * total;
  out.fym = epsilon < 1.0 ? FymPolicy::Controlled : FymPolicy::None;
  return out;
}

ControlledRun simulate_controlled(const Scenario& s, double epsilon, Scheme scheme) {
  ControlledRun run;
  Scenario sc = with_plant_fraction(s, epsilon);
  run.schedule.epsilon = epsilon;
  run.schedule.manure_input = sc.manure_input;

  if (epsilon >= 1.0) {
    run.routed_to_uncontrolled = true;
    run.trajectory = simulate(sc, scheme, Mode::Delta);
    return run;
  }

  double cumulative = 0.0;
  auto law = [&](const MonthDrivers& d, const Vec4& delta_c) {
    ControlSample smp;
    smp.year = d.year;
    smp.month = d.month;
    smp.r0 = control_r0_discrete(d, delta_c, sc, epsilon, scheme);
    smp.f0 = std::max(0.0, smp.r0);
    smp.manure_rate = smp.f0 * sc.manure_input;
    cumulative += smp.manure_rate * d.dt;
    smp.cumulative = cumulative;
    run.schedule.samples.push_back(smp);
    return smp.manure_rate;
  };
  run.trajectory = simulate_with(sc, scheme, Mode::Delta, law);
  // Month start times come from the trajectory grid.
  for (std::size_t i = 0; i < run.schedule.samples.size(); ++i) {
    run.schedule.samples[i].t = run.trajectory.samples[i].t;
  }
  return run;
}

}  // namespace socindex
