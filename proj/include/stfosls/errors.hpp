#pragma once

#include <stdexcept>
#include <string>

namespace stfosls
{

/// Invalid argument or configuration value.
class ParameterError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// The linear solver failed to reach its tolerance.
class SolverError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant (conformity, marking property, ...) was violated.
class InvariantError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

} // namespace stfosls
