#include "kadic/rearrangement.hpp"

namespace kadic {

StepWeight profile_as_weight(const Profile& p, int k, int depth) {
  const TreeShape shape = make_shape(k, depth);
  const std::int64_t cells = shape.leaf_count();
  std::vector<Rational> values;
  values.reserve(static_cast<std::size_t>(cells));
  for (std::size_t i = 0; i < p.pieces.size(); ++i) {
    const Rational scaled_end = p.cumulative_measure[i] * cells;
    if (scaled_end.get_den() != 1) {
      throw ParameterError("profile boundary " + format_rational(p.cumulative_measure[i]) +
                           " is not a multiple of k^-depth");
    }
    const auto end = static_cast<std::size_t>(scaled_end.get_num().get_si());
    while (values.size() < end) values.push_back(p.pieces[i].value);
  }
  if (static_cast<std::int64_t>(values.size()) != cells) {
    throw ParameterError("profile does not cover (0, 1]");
  }
  return StepWeight(shape, std::move(values));
}

Rational kadic_constant(const Profile& p, int k, int depth) { return a1_constant(profile_as_weight(p, k, depth)); }

}  // namespace kadic
