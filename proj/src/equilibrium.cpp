#include "socindex/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "socindex/errors.hpp"

namespace socindex {

namespace {

constexpr double kIomCoef = 0.049;
constexpr double kIomExp = 1.139;

double active_from_total(double soc_total) { return soc_total - iom_from_soc(soc_total); }

}  // namespace

double iom_from_soc(double soc_total) {
  if (!(soc_total >= 0.0)) {
    throw DomainError("SOC must be non-negative, got " + std::to_string(soc_total));
  }
  return kIomCoef * std::pow(soc_total, kIomExp);
}

double soc_total_from_active(double soc_active) {
  if (!(soc_active >= 0.0) || !std::isfinite(soc_active)) {
    throw DomainError("active SOC must be non-negative, got " + std::to_string(soc_active));
  }
  if (soc_active == 0.0) return 0.0;

  const double tol = 1e-10;
  double lo = soc_active;
  double hi = soc_active / (1.0 - kIomCoef * std::pow(soc_active, kIomExp - 1.0));
  if (!(hi > lo) || !std::isfinite(hi)) hi = 2.0 * lo;
  int grow = 0;
  while (active_from_total(hi) < soc_active) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 60) {
      throw NumericalError("could not bracket total SOC for active SOC " +
                           std::to_string(soc_active));
    }
  }

  double x = 0.5 * (lo + hi);
  double resid = active_from_total(x) - soc_active;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(resid) < tol) return x;
    if (resid > 0.0) hi = x; else lo = x;
    const double slope = 1.0 - kIomCoef * kIomExp * std::pow(x, kIomExp - 1.0);
    double next = x - resid / slope;
    if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
    resid = active_from_total(x) - soc_active;
  }
  if (std::abs(resid) < tol) return x;
  throw NumericalError("total SOC solve did not converge, residual " + std::to_string(resid));
}

PoolVector equilibrium_pools(double plant_input, double manure_input, double rho0,
                             const CompartmentMatrices& mats, double months_per_year) {
  if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
  if (!(plant_input >= 0.0) || !(manure_input >= 0.0)) {
    throw DomainError("annual inputs must be non-negative");
  }
  // A = -(I - Lambda) D, hence -A^-1 = D^-1 (I - Lambda)^-1, both non-negative.
  const Vec4 b = (plant_input * mats.a_g + manure_input * mats.a_f) /
                 (months_per_year * rho0);
  const Vec4 c = (mats.I_minus_Lambda_inv * b).cwiseQuotient(mats.k);
  return PoolVector(c);
}

InferredInputs infer_initial_plant_input(const PoolVector& c0, double rho0,
                                         double manure_input,
                                         const CompartmentMatrices& mats,
                                         double months_per_year) {
  if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
  const double total = months_per_year * rho0 * mats.delta * mats.k.dot(c0.values());
  const double plant = total - manure_input;
  if (plant < -1e-12 * std::max(1.0, total)) {
    throw NumericalError("infeasible baseline: manure input " + std::to_string(manure_input) +
                         " exceeds total turnover " + std::to_string(total));
  }
  return {std::max(plant, 0.0), total};
}

double plant_fraction(double plant_input, double manure_input) {
  const double total = plant_input + manure_input;
  return total > 0.0 ? plant_input / total : 1.0;
}

BaselineState baseline_from_inputs(double plant_input, double manure_input, double rho0,
                                   const CompartmentMatrices& mats, double months_per_year) {
  BaselineState b;
  b.c0 = equilibrium_pools(plant_input, manure_input, rho0, mats, months_per_year);
  const double total = soc_total_from_active(b.c0.total());
  b.c_iom = total - b.c0.total();
  b.plant_input = plant_input;
  b.manure_input = manure_input;
  b.epsilon = plant_fraction(plant_input, manure_input);
  return b;
}

BaselineState baseline_from_soc(double soc_total, double manure_input, double rho0,
                                const CompartmentMatrices& mats, double months_per_year) {
  const double iom = iom_from_soc(soc_total);
  const double active = soc_total - iom;
  // Equilibrium is linear in (P0, F0): soc = P0 s_g + F0 s_f.
  const double s_g = equilibrium_pools(1.0, 0.0, rho0, mats, months_per_year).total();
  const double s_f = equilibrium_pools(0.0, 1.0, rho0, mats, months_per_year).total();
  const double plant = (active - manure_input * s_f) / s_g;
  if (plant < -1e-12 * std::max(1.0, active)) {
    throw NumericalError("infeasible baseline: manure input " + std::to_string(manure_input) +
                         " alone sustains more than the measured active SOC " +
                         std::to_string(active));
  }
  BaselineState b;
  b.c0 = equilibrium_pools(std::max(plant, 0.0), manure_input, rho0, mats, months_per_year);
  b.c_iom = iom;
  b.manure_input = manure_input;
  b.plant_input =
      infer_initial_plant_input(b.c0, rho0, manure_input, mats, months_per_year).plant_input;
  b.epsilon = plant_fraction(b.plant_input, manure_input);
  return b;
}

double equilibrium_residual(const BaselineState& b, double rho0,
                            const CompartmentMatrices& mats, double months_per_year) {
  const Vec4 input = (b.plant_input * mats.a_g + b.manure_input * mats.a_f) / months_per_year;
  const Vec4 r = rho0 * mats.A * b.c0.values() + input;
  const double scale = std::max(input.norm(), 1e-300);
  return input.norm() == 0.0 ? r.norm() : r.norm() / scale;
}

}  // namespace socindex
