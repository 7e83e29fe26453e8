#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kadic/error.hpp"
#include "kadic/rational.hpp"
#include "kadic/tree.hpp"

namespace kadic {

/// A step weight on the tree: one strictly positive value per leaf cell.
template <typename Scalar>
class BasicStepWeight {
 public:
  using scalar_type = Scalar;

  BasicStepWeight(TreeShape shape, std::vector<Scalar> values)
      : shape_(shape), values_(std::move(values)) {
    if (static_cast<std::int64_t>(values_.size()) != shape_.leaf_count()) {
      throw ParameterError("weight needs " + std::to_string(shape_.leaf_count()) +
                           " leaf values, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      // Written as !(v > 0) so NaN is rejected for floating scalars.
      if (!(values_[i] > 0)) {
        throw ParameterError("leaf value " + std::to_string(i) + " is not strictly positive");
      }
    }
  }

  const TreeShape& shape() const { return shape_; }
  std::span<const Scalar> values() const { return values_; }
  const Scalar& operator[](std::int64_t leaf) const { return values_[static_cast<std::size_t>(leaf)]; }
  std::int64_t leaf_count() const { return shape_.leaf_count(); }

  Scalar integral() const {
    Scalar sum = scalar_from_int<Scalar>(0);
    for (const auto& v : values_) sum += v;
    sum /= scalar_from_int<Scalar>(leaf_count());
    return sum;
  }

  bool is_constant() const {
    for (const auto& v : values_) {
      if (v != values_.front()) return false;
    }
    return true;
  }

  friend bool operator==(const BasicStepWeight&, const BasicStepWeight&) = default;

 private:
  TreeShape shape_;
  std::vector<Scalar> values_;
};

using StepWeight = BasicStepWeight<Rational>;

StepWeight make_step_weight(const TreeShape& shape, std::vector<Rational> values);

/// Every value multiplied by a positive factor.
template <typename Scalar>
BasicStepWeight<Scalar> scaled(const BasicStepWeight<Scalar>& w, const Scalar& factor) {
  if (!(factor > 0)) throw ParameterError("scale factor must be positive");
  std::vector<Scalar> out(w.values().begin(), w.values().end());
  for (auto& v : out) v *= factor;
  return BasicStepWeight<Scalar>(w.shape(), std::move(out));
}

/// The same function expressed one level deeper: each leaf splits into k
/// children carrying its value.
template <typename Scalar>
BasicStepWeight<Scalar> refined(const BasicStepWeight<Scalar>& w) {
  const TreeShape deeper = make_shape(w.shape().k, w.shape().depth + 1);
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(deeper.leaf_count()));
  for (const auto& v : w.values()) {
    for (int c = 0; c < w.shape().k; ++c) out.push_back(v);
  }
  return BasicStepWeight<Scalar>(deeper, std::move(out));
}

StepWeight to_exact(const BasicStepWeight<double>& w);
BasicStepWeight<double> to_floating(const StepWeight& w);

/// Leaf values drawn independently and uniformly from `grid`, driven by
/// mt19937_64 seeded with `seed`.
StepWeight random_weight(const TreeShape& shape, std::uint64_t seed, std::span<const Rational> grid);

/// Parameters of the two-level sharpness family: value alpha on a set A of
/// measure delta_measure inside the first grandchild P_1, and on the first
/// grandchild of every other level-1 node; value eps elsewhere.
struct ExtremalParams {
  int k = 2;
  Rational c = 1;
  Rational eps = 1;
  Rational alpha = 1;
  Rational delta_measure = Rational(1, 4);
  int depth = 2;
};

/// alpha = k*c - k + 1 with eps = 1.
ExtremalParams make_extremal_params(int k, const Rational& c, const Rational& delta_measure, int depth);

/// Throws ParameterError unless the coupling alpha/eps = k*c-k+1 holds and
/// delta_measure is a whole number of leaves inside P_1.
void validate(const ExtremalParams& params);

/// Number of leaves forming A, i.e. delta_measure * k^depth.
std::int64_t extremal_leaf_count(const ExtremalParams& params);

/// Depth-2 weight with alpha = k*c-k+1 on the first child of every level-1
/// node and 1 elsewhere. Its A1 constant is exactly c.
StepWeight extremal_exact(int k, const Rational& c);

StepWeight extremal_paper(const ExtremalParams& params);

/// The closed form (k/eps) * (alpha*delta + (1/k - delta)*eps), which is the
/// average over the first level-1 node divided by eps.
Rational paper_cdelta_formula(int k, const Rational& alpha, const Rational& eps, const Rational& delta);

/// `k m v_0 ... v_{k^m-1}` with `p/q` values, newline-terminated.
std::string format_weight(const StepWeight& w);
StepWeight parse_weight(std::string_view text);

}  // namespace kadic
