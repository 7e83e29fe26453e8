#include "kadic/search.hpp"

#include <algorithm>
#include <cmath>

#include "kadic/rng.hpp"
#include "kadic/verify.hpp"

namespace kadic {

void validate(const SearchConfig& config) {
  make_shape(config.shape.k, config.shape.depth);
  if (config.iterations < 1) throw ParameterError("iterations must be >= 1");
  if (config.restarts < 1) throw ParameterError("restarts must be >= 1");
  if (!(config.step_scale > 0 && config.step_scale < 1)) throw ParameterError("step_scale must lie in (0, 1)");
  if (!(config.value_floor > 0) || !std::isfinite(config.value_floor)) {
    throw ParameterError("value_floor must be positive");
  }
  if (config.initial_grid.empty()) throw ParameterError("initial grid must be non-empty");
}

Rational objective_exact(const StepWeight& w) { return normalized_ratio(w); }

double objective(const StepWeight& w) { return to_double(objective_exact(w)); }

double objective(const BasicStepWeight<double>& w) { return normalized_ratio(w); }

namespace {

struct Climber {
  const SearchConfig& config;
  SearchResult& result;

  double evaluate(const BasicStepWeight<double>& w) {
    ++result.evaluations;
    const double f = objective(w);
    if (f > 1.0 + kObjectiveSlack) {
      ++result.exact_rechecks;
      const StepWeight exact = to_exact(w);
      if (objective_exact(exact) > 1 && !result.violation) result.violation = exact;
    }
    return f;
  }
};

}  // namespace

SearchResult hill_climb(const SearchConfig& config) {
  validate(config);
  const TreeShape& shape = config.shape;
  const auto leaves = static_cast<std::uint64_t>(shape.leaf_count());

  const BasicStepWeight<double> placeholder(shape, std::vector<double>(leaves, 1.0));
  SearchResult result{placeholder, to_exact(placeholder), -1.0, Rational(0), 0, {}, 0, 0, false, std::nullopt};
  result.trace.reserve(static_cast<std::size_t>(config.restarts) * static_cast<std::size_t>(config.iterations));
  Climber climber{config, result};

  for (int restart = 0; restart < config.restarts; ++restart) {
    Engine eng(mix_seed(config.seed, static_cast<std::uint64_t>(restart)));
    BasicStepWeight<double> current = to_floating(random_weight(shape, eng(), config.initial_grid));
    double current_f = climber.evaluate(current);
    if (current_f > result.best_objective) {
      result.best_objective = current_f;
      result.best_floating = current;
      result.best_restart = restart;
    }

    std::vector<double> values(current.values().begin(), current.values().end());
    for (int it = 0; it < config.iterations; ++it) {
      const auto leaf = static_cast<std::size_t>(uniform_index(eng, leaves));
      const double factor = 1.0 + config.step_scale * (2.0 * uniform_unit(eng) - 1.0);
      const double old = values[leaf];
      values[leaf] = std::max(old * factor, config.value_floor);

      BasicStepWeight<double> candidate(shape, values);
      const double f = climber.evaluate(candidate);
      if (f >= current_f) {
        current_f = f;
        current = std::move(candidate);
      } else {
        values[leaf] = old;
      }
      if (current_f > result.best_objective) {
        result.best_objective = current_f;
        result.best_floating = current;
        result.best_restart = restart;
      }
      result.trace.push_back(
          TracePoint{std::int64_t{restart} * config.iterations + it + 1, result.best_objective});
    }
  }

  result.best_weight = to_exact(result.best_floating);
  result.best_objective_exact = objective_exact(result.best_weight);
  result.verified = result.best_objective_exact <= 1 && check_theorem(result.best_weight).holds;
  return result;
}

}  // namespace kadic
