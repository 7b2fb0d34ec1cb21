#include "socindex/batch.hpp"

#include <cstddef>
#include <exception>

namespace socindex {

namespace {

// Runs body(i) for i in [0, n). Exceptions inside the parallel region are
// captured and the one with the lowest index is rethrown, as in serial order.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body body) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<Trajectory> simulate_batch(const std::vector<Scenario>& scenarios, Scheme scheme,
                                       Mode mode, Execution exec) {
  std::vector<Trajectory> out(scenarios.size());
  for_each_index(scenarios.size(), exec,
                 [&](std::size_t i) { out[i] = simulate(scenarios[i], scheme, mode); });
  return out;
}

std::vector<ControlledRun> epsilon_sweep(const Scenario& s, const std::vector<double>& eps,
                                         Scheme scheme, Execution exec) {
  std::vector<ControlledRun> out(eps.size());
  for_each_index(eps.size(), exec,
                 [&](std::size_t i) { out[i] = simulate_controlled(s, eps[i], scheme); });
  return out;
}

}  // namespace socindex
