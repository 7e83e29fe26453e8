#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "kadic/error.hpp"
#include "kadic/maximal.hpp"
#include "kadic/weight.hpp"

namespace kadic {

/// Decreasing rearrangement of a step weight as consecutive pieces on (0, 1].
/// Piece i covers (start_i, end_i] with end_i = cumulative_measure[i]; values
/// strictly decrease from piece to piece.
template <typename Scalar>
struct RearrangedProfile {
  struct Piece {
    Scalar measure;
    Scalar value;
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  std::vector<Piece> pieces;
  std::vector<Scalar> cumulative_measure;   // right endpoints
  std::vector<Scalar> cumulative_integral;  // integral over (0, end_i]

  static RearrangedProfile from_pieces(std::vector<Piece> pieces) {
    if (pieces.empty()) throw ParameterError("profile needs at least one piece");
    RearrangedProfile p;
    Scalar m = scalar_from_int<Scalar>(0);
    Scalar s = scalar_from_int<Scalar>(0);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (!(pieces[i].measure > 0) || !(pieces[i].value > 0)) {
        throw ParameterError("profile pieces need positive measure and value");
      }
      if (i > 0 && !(pieces[i].value < pieces[i - 1].value)) {
        throw ParameterError("profile values must strictly decrease");
      }
      m += pieces[i].measure;
      Scalar area = pieces[i].measure * pieces[i].value;
      s += area;
      p.cumulative_measure.push_back(m);
      p.cumulative_integral.push_back(s);
    }
    p.pieces = std::move(pieces);
    return p;
  }

  /// Left endpoint of piece i.
  Scalar start(std::size_t i) const { return i == 0 ? scalar_from_int<Scalar>(0) : cumulative_measure[i - 1]; }

  /// Index of the piece whose half-open interval (start, end] contains t.
  std::size_t piece_at(const Scalar& t) const {
    auto it = std::lower_bound(cumulative_measure.begin(), cumulative_measure.end(), t);
    if (it == cumulative_measure.end()) --it;
    return static_cast<std::size_t>(it - cumulative_measure.begin());
  }

  Scalar value_at(const Scalar& t) const {
    require_unit(t);
    return pieces[piece_at(t)].value;
  }

  /// Integral of w* over (0, t].
  Scalar integral_to(const Scalar& t) const {
    require_unit(t);
    const std::size_t i = piece_at(t);
    Scalar out = i == 0 ? scalar_from_int<Scalar>(0) : cumulative_integral[i - 1];
    Scalar partial = (t - start(i)) * pieces[i].value;
    out += partial;
    return out;
  }

  Scalar total_measure() const { return cumulative_measure.back(); }

  static void require_unit(const Scalar& t) {
    if (!(t > 0) || t > scalar_from_int<Scalar>(1)) throw ParameterError("t must lie in (0, 1]");
  }
};

using Profile = RearrangedProfile<Rational>;

template <typename Scalar>
RearrangedProfile<Scalar> rearrange(const BasicStepWeight<Scalar>& w) {
  std::vector<Scalar> sorted(w.values().begin(), w.values().end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  using Piece = typename RearrangedProfile<Scalar>::Piece;
  std::vector<Piece> pieces;
  std::int64_t run = 0;
  const Scalar cells = scalar_from_int<Scalar>(w.leaf_count());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    ++run;
    if (i + 1 == sorted.size() || sorted[i + 1] != sorted[i]) {
      Scalar measure = scalar_from_int<Scalar>(run);
      measure /= cells;
      pieces.push_back(Piece{std::move(measure), sorted[i]});
      run = 0;
    }
  }
  return RearrangedProfile<Scalar>::from_pieces(std::move(pieces));
}

/// w*(t) = sup{v : mu(w >= v) >= t}, scanned over the distinct leaf values
/// without building a profile.
template <typename Scalar>
Scalar rearrange_oracle(const BasicStepWeight<Scalar>& w, const Scalar& t) {
  RearrangedProfile<Scalar>::require_unit(t);
  std::vector<Scalar> distinct(w.values().begin(), w.values().end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const Scalar cells = scalar_from_int<Scalar>(w.leaf_count());
  for (auto it = distinct.rbegin(); it != distinct.rend(); ++it) {
    std::int64_t at_least = 0;
    for (const auto& v : w.values()) {
      if (v >= *it) ++at_least;
    }
    Scalar mu = scalar_from_int<Scalar>(at_least);
    mu /= cells;
    if (mu >= t) return *it;
  }
  return distinct.front();
}

/// (1/t) * integral of w* over (0, t].
template <typename Scalar>
Scalar prefix_average(const RearrangedProfile<Scalar>& p, const Scalar& t) {
  Scalar out = p.integral_to(t);
  out /= t;
  return out;
}

template <typename Scalar>
struct SupRatio {
  Scalar value;
  /// Piece boundary the supremum is approached at, from the right. For a
  /// single-piece profile the ratio is 1 throughout and the witness is 1.
  Scalar witness;
};

/// sup over t in (0,1] of prefix_average(t) / w*(t). On piece i >= 2 the ratio
/// is largest as t decreases to the piece's left endpoint, so the supremum is
/// the max of prefix_average(start_i) / value_i over those boundaries.
template <typename Scalar>
SupRatio<Scalar> sup_ratio(const RearrangedProfile<Scalar>& p) {
  SupRatio<Scalar> best{scalar_from_int<Scalar>(1), p.cumulative_measure.front()};
  for (std::size_t i = 1; i < p.pieces.size(); ++i) {
    const Scalar& a = p.cumulative_measure[i - 1];
    Scalar r = p.cumulative_integral[i - 1] / a;
    r /= p.pieces[i].value;
    if (r > best.value) best = SupRatio<Scalar>{std::move(r), a};
  }
  return best;
}

/// The profile read as a step weight on the k-adic tree of (0,1] with the
/// given depth. Every piece boundary must be a multiple of k^-depth.
StepWeight profile_as_weight(const Profile& p, int k, int depth);

/// A1 constant of w* with respect to the k-adic tree over (0, 1].
Rational kadic_constant(const Profile& p, int k, int depth);

}  // namespace kadic
