#pragma once

#include "stfosls/mesh.hpp"

#include <functional>
#include <span>
#include <string_view>

namespace stfosls
{

enum class MarkingStrategy
{
  Doerfler,
  Maximum
};

std::string_view to_string(MarkingStrategy strategy);

struct MarkingConfig
{
  MarkingStrategy strategy = MarkingStrategy::Doerfler;
  double theta = 0.5;
};

/// Throws ParameterError unless theta is in (0,1] (Doerfler) or [0,1]
/// (Maximum).
void validate(const MarkingConfig& config);

/// Minimal set M with  theta * sum_K eta_K^2 <= sum_{K in M} eta_K^2, built as
/// the shortest prefix of the indicators sorted descending (ties by element
/// index). Hence max_{K not in M} eta_K <= min_{K in M} eta_K.
MarkSet mark_doerfler(std::span<const double> eta, double theta);

/// M = {K : eta_K >= (1 - theta) max eta}.
MarkSet mark_maximum(std::span<const double> eta, double theta);

/// Dispatch on the configured strategy.
MarkSet mark(std::span<const double> eta, const MarkingConfig& config);

/// max_{K not in M} eta_K <= M(max_{K in M} eta_K). An empty mark set is
/// accepted only when every indicator vanishes.
bool verify_marking_property(std::span<const double> eta, std::span<const std::int32_t> marks,
                             const std::function<double(double)>& M);

} // namespace stfosls
