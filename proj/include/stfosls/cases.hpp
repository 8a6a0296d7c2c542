#pragma once

#include "stfosls/problem.hpp"
#include "stfosls/system.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stfosls
{

/// A named, ready-to-run problem on the unit square.
struct BuiltinCase
{
  std::string name;
  std::shared_ptr<const FirstOrderSystem> system;
  /// Closed-form reference, absent for the incompatible case.
  std::optional<ExactSolution> exact;
  double t_end = 1.0;
  std::pair<double, double> omega{0.0, 1.0};
};

/// heat-smooth         u = exp(-t) sin(pi x), A = 1, b = c = 0
/// convection-reaction same u, A = 1, b = c = 1
/// variable-a          same u, A = 1 + t x / 2
/// incompatible        f = 0, u0 = 1 (no closed-form solution)
/// poisson-smooth      u = sin(pi x1) sin(pi x2) for the Poisson system
BuiltinCase make_case(std::string_view name,
                      ConvectionForm form = ConvectionForm::Flux,
                      double t_end = 1.0);

std::vector<std::string> builtin_case_names();

} // namespace stfosls
