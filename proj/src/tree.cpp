#include "kadic/tree.hpp"

#include <limits>
#include <string>

#include "kadic/error.hpp"

namespace kadic {

std::int64_t ipow(std::int64_t base, int exponent) {
  std::int64_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (out > std::numeric_limits<std::int64_t>::max() / base) {
      throw ParameterError("integer power overflows: " + std::to_string(base) + "^" +
                           std::to_string(exponent));
    }
    out *= base;
  }
  return out;
}

std::int64_t TreeShape::level_size(int level) const { return ipow(k, level); }

std::int64_t TreeShape::node_count() const { return (ipow(k, depth + 1) - 1) / (k - 1); }

TreeShape make_shape(int k, int depth) {
  if (k < 2) throw ParameterError("homogeneity k must be >= 2, got " + std::to_string(k));
  if (depth < 1) throw ParameterError("depth must be >= 1, got " + std::to_string(depth));
  std::int64_t leaves = 1;
  for (int i = 0; i < depth; ++i) {
    leaves *= k;
    if (leaves > kMaxLeaves) {
      throw ParameterError("tree with k=" + std::to_string(k) + ", depth=" + std::to_string(depth) +
                           " exceeds the leaf limit");
    }
  }
  return TreeShape{k, depth};
}

bool is_valid(const TreeShape& shape, const NodeId& node) {
  return node.level >= 0 && node.level <= shape.depth && node.index >= 0 &&
         node.index < shape.level_size(node.level);
}

void require_valid(const TreeShape& shape, const NodeId& node) {
  if (!is_valid(shape, node)) {
    throw ParameterError("node (" + std::to_string(node.level) + ", " + std::to_string(node.index) +
                         ") is not in the tree");
  }
}

Rational node_measure(const TreeShape& shape, const NodeId& node) {
  require_valid(shape, node);
  return make_rational(1, shape.level_size(node.level));
}

std::vector<NodeId> ancestors(const TreeShape& shape, const NodeId& node) {
  require_valid(shape, node);
  std::vector<NodeId> chain;
  chain.reserve(static_cast<std::size_t>(node.level) + 1);
  NodeId cur = node;
  chain.push_back(cur);
  while (cur.level > 0) {
    cur = NodeId{cur.level - 1, cur.index / shape.k};
    chain.push_back(cur);
  }
  return chain;
}

LeafRange leaves_under(const TreeShape& shape, const NodeId& node) {
  require_valid(shape, node);
  const std::int64_t span = shape.level_size(shape.depth - node.level);
  return LeafRange{node.index * span, (node.index + 1) * span};
}

NodeId parent(const TreeShape& shape, const NodeId& node) {
  require_valid(shape, node);
  if (node.level == 0) throw ParameterError("the root has no parent");
  return NodeId{node.level - 1, node.index / shape.k};
}

std::vector<NodeId> children(const TreeShape& shape, const NodeId& node) {
  require_valid(shape, node);
  std::vector<NodeId> out;
  if (node.level == shape.depth) return out;
  out.reserve(static_cast<std::size_t>(shape.k));
  for (int c = 0; c < shape.k; ++c) out.push_back(NodeId{node.level + 1, node.index * shape.k + c});
  return out;
}

NodeId leaf_node(const TreeShape& shape, std::int64_t leaf) {
  NodeId node{shape.depth, leaf};
  require_valid(shape, node);
  return node;
}

bool is_within(const TreeShape& shape, const NodeId& inner, const NodeId& outer) {
  require_valid(shape, inner);
  require_valid(shape, outer);
  if (inner.level < outer.level) return false;
  return inner.index / shape.level_size(inner.level - outer.level) == outer.index;
}

std::int64_t flat_index(const TreeShape& shape, const NodeId& node) {
  require_valid(shape, node);
  return (shape.level_size(node.level) - 1) / (shape.k - 1) + node.index;
}

}  // namespace kadic
