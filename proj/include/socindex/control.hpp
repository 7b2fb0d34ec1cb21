#pragma once

#include <vector>

#include "socindex/integrator.hpp"

namespace socindex {

/// Unclamped manure feedback r_0 (per month) for plant fraction eps in [0, 1).
double control_r0(const MonthDrivers& d, const Vec4& delta_c, const Scenario& s,
                  double epsilon);

/// Discrete counterpart of r_0 for one month of `scheme`: the normalized
/// manure density that, held over the month, leaves Delta soc unchanged at
/// the end of the step. Tends to control_r0 as the month length shrinks.
double control_r0_discrete(const MonthDrivers& d, const Vec4& delta_c, const Scenario& s,
                           double epsilon, Scheme scheme);

/// f_0 = max(0, r_0).
double fym_modifier(const MonthDrivers& d, const Vec4& delta_c, const Scenario& s,
                    double epsilon);

struct ControlSample {
  int year = 0;
  int month = 0;
  double t = 0;           // start of the month
  double r0 = 0;
  double f0 = 0;          // month^-1
  double manure_rate = 0; // f0 * F0, t C/ha/month
  double cumulative = 0;  // manure applied up to the end of the month, t C/ha
};

struct AnnualManure {
  int year = 0;
  double total = 0;  // t C/ha/yr
};

struct ControlSchedule {
  double epsilon = 0;
  double manure_input = 0;  // F0
  std::vector<ControlSample> samples;

  std::vector<AnnualManure> annual_totals() const;
};

struct ControlledRun {
  Trajectory trajectory;
  ControlSchedule schedule;
  bool routed_to_uncontrolled = false;  // eps == 1
};

/// Copy of `s` re-weighted to plant fraction eps (P0 + F0 preserved).
Scenario with_plant_fraction(const Scenario& s, double epsilon);

/// Closed-loop run: f0 = max(0, control_r0_discrete) is computed from the
/// state at the start of every month and held over the month. eps == 1
/// falls back to the uncontrolled no-manure model.
ControlledRun simulate_controlled(const Scenario& s, double epsilon,
                                  Scheme scheme = Scheme::NonStandard);

}  // namespace socindex
