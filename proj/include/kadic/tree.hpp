#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "kadic/rational.hpp"

namespace kadic {

/// A finite tree of homogeneity k: every node splits into k children of
/// equal measure, and the leaves sit at level `depth`. The underlying
/// probability space is represented only through its k^depth leaf cells.
struct TreeShape {
  int k = 2;
  int depth = 1;

  std::int64_t level_size(int level) const;
  std::int64_t leaf_count() const { return level_size(depth); }
  /// Nodes on levels 0..depth together.
  std::int64_t node_count() const;

  friend bool operator==(const TreeShape&, const TreeShape&) = default;
};

/// Upper bound on k^depth accepted by make_shape.
inline constexpr std::int64_t kMaxLeaves = std::int64_t{1} << 24;

TreeShape make_shape(int k, int depth);

/// Node (level, index); index runs over [0, k^level).
struct NodeId {
  int level = 0;
  std::int64_t index = 0;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline constexpr NodeId kRoot{0, 0};

/// Half-open range of leaf indices.
struct LeafRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  std::int64_t size() const { return end - begin; }
  bool contains(std::int64_t leaf) const { return begin <= leaf && leaf < end; }
  friend bool operator==(const LeafRange&, const LeafRange&) = default;
};

bool is_valid(const TreeShape& shape, const NodeId& node);
/// Throws ParameterError unless the node lies in the shape.
void require_valid(const TreeShape& shape, const NodeId& node);

/// Exact measure k^(-level).
Rational node_measure(const TreeShape& shape, const NodeId& node);

/// The node itself, then its parent, ..., then the root.
std::vector<NodeId> ancestors(const TreeShape& shape, const NodeId& node);

LeafRange leaves_under(const TreeShape& shape, const NodeId& node);

NodeId parent(const TreeShape& shape, const NodeId& node);
std::vector<NodeId> children(const TreeShape& shape, const NodeId& node);
NodeId leaf_node(const TreeShape& shape, std::int64_t leaf);

/// True when `inner` is `outer` or one of its descendants.
bool is_within(const TreeShape& shape, const NodeId& inner, const NodeId& outer);

/// Position of a node in level-major order (root first).
std::int64_t flat_index(const TreeShape& shape, const NodeId& node);

/// Integer power with an overflow check against kMaxLeaves-sized results.
std::int64_t ipow(std::int64_t base, int exponent);

}  // namespace kadic
