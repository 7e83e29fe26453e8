#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kadic/maximal.hpp"
#include "kadic/rearrangement.hpp"
#include "kadic/weight.hpp"

namespace kadic {

struct SearchConfig {
  TreeShape shape;
  int iterations = 1000;
  int restarts = 1;
  std::uint64_t seed = 0;
  double step_scale = 0.5;  // factors drawn from [1 - s, 1 + s]
  double value_floor = 1e-9;
  std::vector<Rational> initial_grid{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

void validate(const SearchConfig& config);

/// sup_ratio(w*) / (k*c - k + 1), computed in the weight's own scalar type.
/// At most 1 for every step weight.
template <typename Scalar>
Scalar normalized_ratio(const BasicStepWeight<Scalar>& w) {
  const int k = w.shape().k;
  const Scalar c = a1_constant(w);
  Scalar bound = scalar_from_int<Scalar>(k) * c;
  bound -= scalar_from_int<Scalar>(k - 1);
  Scalar r = sup_ratio(rearrange(w)).value;
  r /= bound;
  return r;
}

/// Objective in floating point. Exact weights are evaluated exactly and then
/// converted.
double objective(const StepWeight& w);
double objective(const BasicStepWeight<double>& w);

Rational objective_exact(const StepWeight& w);

/// Floating-point slack allowed over the exact bound of 1 before an exact recheck.
inline constexpr double kObjectiveSlack = 0x1p-40;

struct TracePoint {
  std::int64_t iteration = 0;
  double best_objective = 0;
};

struct SearchResult {
  BasicStepWeight<double> best_floating;
  StepWeight best_weight;  // the same values, converted exactly
  double best_objective = 0;
  Rational best_objective_exact;
  int best_restart = 0;
  std::vector<TracePoint> trace;  // best-so-far after every perturbation step
  std::int64_t evaluations = 0;
  std::int64_t exact_rechecks = 0;
  bool verified = false;  // exact objective <= 1 and the theorem holds for best_weight
  std::optional<StepWeight> violation;
};

/// Multiplicative one-leaf hill climbing with plateau-tolerant acceptance,
/// restarted from seeded random weights. Deterministic in the config.
SearchResult hill_climb(const SearchConfig& config);

}  // namespace kadic
