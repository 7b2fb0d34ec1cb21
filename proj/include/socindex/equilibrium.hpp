#pragma once

#include "socindex/pools.hpp"

namespace socindex {

/// Falloon inert pool size: 0.049 SOC^1.139.
double iom_from_soc(double soc_total);

/// Total SOC whose active part (SOC minus Falloon IOM) equals `soc_active`.
/// Safeguarded Newton on a geometrically grown bracket; throws
/// NumericalError if the residual does not fall below 1e-10.
double soc_total_from_active(double soc_active);

/// Steady state of rho0 A c + (P0 a_g + F0 a_f)/T = 0.
PoolVector equilibrium_pools(double plant_input, double manure_input, double rho0,
                             const CompartmentMatrices& mats, double months_per_year);

struct InferredInputs {
  double plant_input;  // P0
  double total_input;  // P0 + F0 = T rho0 delta k^T c0
};

/// Reverse mode: plant input that holds `c0` at equilibrium given manure F0.
/// Throws NumericalError when the manure alone exceeds total turnover.
InferredInputs infer_initial_plant_input(const PoolVector& c0, double rho0,
                                         double manure_input,
                                         const CompartmentMatrices& mats,
                                         double months_per_year);

/// Baseline-year equilibrium and its derived quantities.
struct BaselineState {
  PoolVector c0;
  double c_iom = 0;          // held constant over a run
  double plant_input = 0;    // P0, t C/ha/yr
  double manure_input = 0;   // F0, t C/ha/yr
  double epsilon = 1;        // P0 / (P0 + F0)

  double soc_active() const { return c0.total(); }
  double soc_total() const { return c0.total() + c_iom; }
};

double plant_fraction(double plant_input, double manure_input);

/// Forward: pools and IOM from known annual inputs.
BaselineState baseline_from_inputs(double plant_input, double manure_input, double rho0,
                                   const CompartmentMatrices& mats, double months_per_year);

/// Reverse: pools and plant input from a measured total SOC and known manure.
BaselineState baseline_from_soc(double soc_total, double manure_input, double rho0,
                                const CompartmentMatrices& mats, double months_per_year);

/// Relative residual of the equilibrium equation for a baseline.
double equilibrium_residual(const BaselineState& b, double rho0,
                            const CompartmentMatrices& mats, double months_per_year);

}  // namespace socindex
