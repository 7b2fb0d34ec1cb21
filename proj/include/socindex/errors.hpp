#pragma once

#include <stdexcept>
#include <string>

namespace socindex {

// Argument outside the mathematical domain of a model function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bad or inconsistent configuration (missing tables, invalid ranges).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or incomplete input data (climate, NPP, density tables).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solver failure or physically infeasible result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke an operation's precondition (e.g. wrong forcing variant).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace socindex
