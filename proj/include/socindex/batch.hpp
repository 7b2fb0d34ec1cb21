#pragma once

#include <vector>

#include "socindex/control.hpp"
#include "socindex/integrator.hpp"

namespace socindex {

/// Serial runs are the reference; Parallel spreads independent runs over
/// OpenMP threads and must produce identical results.
enum class Execution { Serial, Parallel };

std::vector<Trajectory> simulate_batch(const std::vector<Scenario>& scenarios, Scheme scheme,
                                       Mode mode, Execution exec = Execution::Parallel);

std::vector<ControlledRun> epsilon_sweep(const Scenario& s, const std::vector<double>& eps,
                                         Scheme scheme = Scheme::NonStandard,
                                         Execution exec = Execution::Parallel);

}  // namespace socindex
