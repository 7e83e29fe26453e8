#include "kadic/weight.hpp"

#include <sstream>

#include "kadic/rng.hpp"

namespace kadic {

StepWeight make_step_weight(const TreeShape& shape, std::vector<Rational> values) {
  return StepWeight(make_shape(shape.k, shape.depth), std::move(values));
}

StepWeight to_exact(const BasicStepWeight<double>& w) {
  std::vector<Rational> out;
  out.reserve(w.values().size());
  for (double v : w.values()) out.push_back(rational_from_double(v));
  return StepWeight(w.shape(), std::move(out));
}

BasicStepWeight<double> to_floating(const StepWeight& w) {
  std::vector<double> out;
  out.reserve(w.values().size());
  for (const auto& v : w.values()) out.push_back(to_double(v));
  return BasicStepWeight<double>(w.shape(), std::move(out));
}

StepWeight random_weight(const TreeShape& shape, std::uint64_t seed, std::span<const Rational> grid) {
  if (grid.empty()) throw ParameterError("random_weight needs a non-empty value grid");
  for (const auto& g : grid) {
    if (g <= 0) throw ParameterError("grid values must be positive");
  }
  Engine eng(seed);
  std::vector<Rational> values;
  values.reserve(static_cast<std::size_t>(shape.leaf_count()));
  for (std::int64_t i = 0; i < shape.leaf_count(); ++i) {
    values.push_back(grid[uniform_index(eng, grid.size())]);
  }
  return make_step_weight(shape, std::move(values));
}

ExtremalParams make_extremal_params(int k, const Rational& c, const Rational& delta_measure, int depth) {
  ExtremalParams p;
  p.k = k;
  p.c = c;
  p.eps = 1;
  p.alpha = Rational(k * c - k + 1);
  p.delta_measure = delta_measure;
  p.depth = depth;
  validate(p);
  return p;
}

std::int64_t extremal_leaf_count(const ExtremalParams& params) {
  const Rational scaled_delta = params.delta_measure * ipow(params.k, params.depth);
  if (scaled_delta.get_den() != 1) {
    throw ParameterError("delta " + format_rational(params.delta_measure) +
                         " is not a whole number of leaves at depth " + std::to_string(params.depth));
  }
  return scaled_delta.get_num().get_si();
}

void validate(const ExtremalParams& params) {
  if (params.k < 2) throw ParameterError("extremal family needs k >= 2");
  if (params.depth < 2) throw ParameterError("extremal family needs depth >= 2");
  if (params.c < 1) throw ParameterError("A1 constant c must be >= 1");
  if (params.eps <= 0 || params.alpha <= 0) throw ParameterError("alpha and eps must be positive");
  if (params.alpha < params.eps) throw ParameterError("alpha must be >= eps");
  if (params.alpha / params.eps != params.k * params.c - params.k + 1) {
    throw ParameterError("alpha/eps must equal k*c - k + 1");
  }
  make_shape(params.k, params.depth);
  const Rational cell = make_rational(1, std::int64_t{params.k} * params.k);
  if (params.delta_measure <= 0 || params.delta_measure > cell) {
    throw ParameterError("delta " + format_rational(params.delta_measure) + " must lie in (0, 1/k^2]");
  }
  extremal_leaf_count(params);
}

StepWeight extremal_exact(int k, const Rational& c) {
  if (k < 2) throw ParameterError("extremal family needs k >= 2");
  if (c < 1) throw ParameterError("A1 constant c must be >= 1");
  const TreeShape shape = make_shape(k, 2);
  const Rational alpha = k * c - k + 1;
  std::vector<Rational> values(static_cast<std::size_t>(shape.leaf_count()), Rational(1));
  for (int i = 0; i < k; ++i) values[static_cast<std::size_t>(i * k)] = alpha;
  return StepWeight(shape, std::move(values));
}

StepWeight extremal_paper(const ExtremalParams& params) {
  validate(params);
  const TreeShape shape = make_shape(params.k, params.depth);
  const std::int64_t marked = extremal_leaf_count(params);
  std::vector<Rational> values(static_cast<std::size_t>(shape.leaf_count()), params.eps);
  for (std::int64_t leaf = 0; leaf < marked; ++leaf) values[static_cast<std::size_t>(leaf)] = params.alpha;
  for (int i = 1; i < params.k; ++i) {
    // First grandchild of the i-th level-1 node, i.e. P_{ik+1}.
    const LeafRange cell = leaves_under(shape, NodeId{2, std::int64_t{i} * params.k});
    for (std::int64_t leaf = cell.begin; leaf < cell.end; ++leaf) {
      values[static_cast<std::size_t>(leaf)] = params.alpha;
    }
  }
  return StepWeight(shape, std::move(values));
}

Rational paper_cdelta_formula(int k, const Rational& alpha, const Rational& eps, const Rational& delta) {
  if (k < 2) throw ParameterError("k must be >= 2");
  if (alpha <= 0 || eps <= 0 || delta <= 0) throw ParameterError("alpha, eps, delta must be positive");
  return Rational((k / eps) * (alpha * delta + (make_rational(1, k) - delta) * eps));
}

std::string format_weight(const StepWeight& w) {
  std::string out = std::to_string(w.shape().k) + " " + std::to_string(w.shape().depth);
  for (const auto& v : w.values()) {
    out += ' ';
    out += format_rational(v);
  }
  out += '\n';
  return out;
}

StepWeight parse_weight(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tok_k, tok_m;
  if (!(in >> tok_k >> tok_m)) throw ParameterError("weight record must start with 'k m'");
  auto parse_int = [](const std::string& s, const char* what) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ParameterError(std::string("bad ") + what + ": '" + s + "'");
    return v;
  };
  const TreeShape shape = make_shape(parse_int(tok_k, "k"), parse_int(tok_m, "depth"));
  std::vector<Rational> values;
  values.reserve(static_cast<std::size_t>(shape.leaf_count()));
  std::string tok;
  while (in >> tok) values.push_back(parse_rational(tok));
  return make_step_weight(shape, std::move(values));
}

}  // namespace kadic
