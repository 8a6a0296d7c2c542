#include "stfosls/marking.hpp"
#include "stfosls/errors.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace stfosls
{

namespace
{

bool all_zero(std::span<const double> eta)
{
  return std::ranges::all_of(eta, [](double v) { return v == 0.0; });
}

} // namespace

std::string_view to_string(MarkingStrategy strategy)
{
  return strategy == MarkingStrategy::Doerfler ? "doerfler" : "maximum";
}

void validate(const MarkingConfig& config)
{
  const double theta = config.theta;
  if (config.strategy == MarkingStrategy::Doerfler and !(theta > 0.0 and theta <= 1.0))
    throw ParameterError("Doerfler marking requires 0 < theta <= 1");
  if (config.strategy == MarkingStrategy::Maximum and !(theta >= 0.0 and theta <= 1.0))
    throw ParameterError("maximum marking requires 0 <= theta <= 1");
}

MarkSet mark_doerfler(std::span<const double> eta, double theta)
{
  validate({MarkingStrategy::Doerfler, theta});
  if (eta.empty() or all_zero(eta))
    return {};

  std::vector<std::int32_t> order(eta.size());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::int32_t a, std::int32_t b)
                           { return eta[a] > eta[b]; });

  // Total accumulated in the same order as the prefix sums, so theta = 1
  // stops exactly at the last positive indicator.
  double total = 0.0;
  for (std::int32_t k : order)
    total += eta[k] * eta[k];
  const double goal = theta * total;

  MarkSet marks;
  double sum = 0.0;
  for (std::int32_t k : order)
  {
    marks.push_back(k);
    sum += eta[k] * eta[k];
    if (sum >= goal)
      break;
  }
  std::ranges::sort(marks);
  return marks;
}

MarkSet mark_maximum(std::span<const double> eta, double theta)
{
  validate({MarkingStrategy::Maximum, theta});
  if (eta.empty() or all_zero(eta))
    return {};
  const double threshold = (1.0 - theta) * std::ranges::max(eta);
  MarkSet marks;
  for (std::size_t k = 0; k < eta.size(); ++k)
  {
    if (eta[k] >= threshold)
      marks.push_back(static_cast<std::int32_t>(k));
  }
  return marks;
}

MarkSet mark(std::span<const double> eta, const MarkingConfig& config)
{
  return config.strategy == MarkingStrategy::Doerfler
             ? mark_doerfler(eta, config.theta)
             : mark_maximum(eta, config.theta);
}

bool verify_marking_property(std::span<const double> eta,
                             std::span<const std::int32_t> marks,
                             const std::function<double(double)>& M)
{
  if (marks.empty())
    return all_zero(eta);

  std::vector<bool> marked(eta.size(), false);
  double max_marked = 0.0;
  for (std::int32_t k : marks)
  {
    if (k < 0 or static_cast<std::size_t>(k) >= eta.size())
      return false;
    marked[k] = true;
    max_marked = std::max(max_marked, eta[k]);
  }
  double max_unmarked = 0.0;
  for (std::size_t k = 0; k < eta.size(); ++k)
  {
    if (!marked[k])
      max_unmarked = std::max(max_unmarked, eta[k]);
  }
  return max_unmarked <= M(max_marked);
}

} // namespace stfosls
