#include "kadic/maximal.hpp"

namespace kadic {

template struct NodeTable<Rational>;
template struct StoppingFamily<Rational>;
template NodeTable<Rational> node_table(const StepWeight&);
template std::vector<Rational> maximal_function(const StepWeight&);
template Rational a1_constant(const StepWeight&);

}  // namespace kadic
