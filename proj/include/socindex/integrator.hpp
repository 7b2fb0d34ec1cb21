#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "socindex/delta_dynamics.hpp"
#include "socindex/pools.hpp"

namespace socindex {

/// phi(z) = (e^z - 1)/z, with the removable singularity at 0.
double phi_scalar(double z);

/// d phi / dz.
double phi_scalar_derivative(double z);

/// phi(dt rho Atilde) via the similarity Atilde = -(I-Lambda) D (I-Lambda)^-1.
Mat4 phi_matrix(double dt, double rho, const CompartmentMatrices& mats);

/// F(dt rho) = Lambda + (I - Lambda) exp(-dt rho D).
Mat4 transition_matrix(double dt, double rho, const CompartmentMatrices& mats);

/// Both operators of one non-standard step, built once per (dt, rho).
struct StepOperator {
  Mat4 F;        // transition_matrix
  Mat4 dt_phi;   // dt * phi_matrix
};

StepOperator make_step_operator(double dt, double rho, const CompartmentMatrices& mats);

/// c' = F(dt rho) c + dt phi(dt rho Atilde) b.
Vec4 nonstandard_step(const Vec4& state, double dt, double rho, const Vec4& forcing,
                      const CompartmentMatrices& mats);

/// Same update written as c' = c + dt phi(dt rho Atilde) (rho A c + b).
Vec4 nonstandard_step_increment(const Vec4& state, double dt, double rho,
                                const Vec4& forcing, const CompartmentMatrices& mats);

/// Original discrete RothC update c' = F(dt rho) c + dt b.
Vec4 rothc_discrete_step(const Vec4& state, double dt, double rho, const Vec4& forcing,
                         const CompartmentMatrices& mats);

enum class Scheme { NonStandard, RothCDiscrete };
enum class Mode { Delta, Absolute };

const char* to_string(Scheme s);
const char* to_string(Mode m);
Scheme parse_scheme(const std::string& s);
Mode parse_mode(const std::string& s);

struct GridStep {
  int n = 0;        // delta year, 1..horizon
  int month = 0;    // 1..12
  int year = 0;     // calendar year
  double dt = 0;    // months
  double t_start = 0;
};

/// Monthly grid over delta years 1..horizon. Absolute time is measured in
/// months from year zero, so year n of the scenario starts at (baseline+n) T.
std::vector<GridStep> build_time_grid(int baseline_year, int horizon_years,
                                      double months_per_year);

struct TrajectorySample {
  double t = 0;
  int year = 0;
  int month = 0;                  // 0 for the initial sample
  Vec4 delta_c = Vec4::Zero();
  double delta_soc = 0;
  std::optional<Vec4> pools;      // absolute-mode runs only
};

struct AnnualMean {
  int year = 0;
  double delta_soc = 0;
};

struct Trajectory {
  std::string scheme;
  std::string mode;
  std::uint64_t scenario_hash = 0;
  std::vector<TrajectorySample> samples;

  /// Mean of the twelve end-of-month samples of each year.
  std::vector<AnnualMean> annual_means() const;
  double max_abs_delta_soc() const;
};

/// Manure density applied over a month, given its drivers and the state at
/// the start of the month (t C/ha per month).
using ManureLaw = std::function<double(const MonthDrivers&, const Vec4& delta_c)>;

/// Runs delta years 1..horizon. Delta mode starts from zero; absolute mode
/// starts from the baseline equilibrium pools. Uncontrolled policies only.
Trajectory simulate(const Scenario& scenario, Scheme scheme, Mode mode);

/// Generic driver: `law` supplies the manure density when the scenario has
/// baseline manure; it is ignored otherwise.
Trajectory simulate_with(const Scenario& scenario, Scheme scheme, Mode mode,
                         const ManureLaw& law);

}  // namespace socindex
