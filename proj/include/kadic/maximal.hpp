#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "kadic/error.hpp"
#include "kadic/tree.hpp"
#include "kadic/weight.hpp"

namespace kadic {

/// Per-level node averages and leaf minima, built bottom-up in one pass.
template <typename Scalar>
struct NodeTable {
  TreeShape shape;
  std::vector<std::vector<Scalar>> average;  // [level][index]
  std::vector<std::vector<Scalar>> minimum;  // [level][index]

  const Scalar& avg(const NodeId& n) const {
    return average[static_cast<std::size_t>(n.level)][static_cast<std::size_t>(n.index)];
  }
  const Scalar& min(const NodeId& n) const {
    return minimum[static_cast<std::size_t>(n.level)][static_cast<std::size_t>(n.index)];
  }
};

template <typename Scalar>
NodeTable<Scalar> node_table(const BasicStepWeight<Scalar>& w) {
  const TreeShape& shape = w.shape();
  const auto levels = static_cast<std::size_t>(shape.depth) + 1;
  std::vector<std::vector<Scalar>> sums(levels);
  NodeTable<Scalar> t{shape, std::vector<std::vector<Scalar>>(levels), std::vector<std::vector<Scalar>>(levels)};

  sums[levels - 1].assign(w.values().begin(), w.values().end());
  t.minimum[levels - 1] = sums[levels - 1];
  for (int level = shape.depth - 1; level >= 0; --level) {
    const auto l = static_cast<std::size_t>(level);
    const auto n = static_cast<std::size_t>(shape.level_size(level));
    sums[l].resize(n);
    t.minimum[l].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t first = i * static_cast<std::size_t>(shape.k);
      Scalar s = sums[l + 1][first];
      Scalar lo = t.minimum[l + 1][first];
      for (std::size_t c = 1; c < static_cast<std::size_t>(shape.k); ++c) {
        s += sums[l + 1][first + c];
        if (t.minimum[l + 1][first + c] < lo) lo = t.minimum[l + 1][first + c];
      }
      sums[l][i] = std::move(s);
      t.minimum[l][i] = std::move(lo);
    }
  }
  for (int level = 0; level <= shape.depth; ++level) {
    const auto l = static_cast<std::size_t>(level);
    const Scalar cells = scalar_from_int<Scalar>(shape.level_size(shape.depth - level));
    t.average[l].resize(sums[l].size());
    for (std::size_t i = 0; i < sums[l].size(); ++i) t.average[l][i] = sums[l][i] / cells;
  }
  return t;
}

/// Mean of the leaf values under `node`, summed directly.
template <typename Scalar>
Scalar average(const BasicStepWeight<Scalar>& w, const NodeId& node) {
  const LeafRange r = leaves_under(w.shape(), node);
  Scalar sum = scalar_from_int<Scalar>(0);
  for (std::int64_t leaf = r.begin; leaf < r.end; ++leaf) sum += w[leaf];
  sum /= scalar_from_int<Scalar>(r.size());
  return sum;
}

/// Tree maximal function per leaf: the largest node average along the chain
/// from the root down to the leaf. One top-down pass over all nodes.
template <typename Scalar>
std::vector<Scalar> maximal_function(const NodeTable<Scalar>& t) {
  std::vector<Scalar> running{t.average[0][0]};
  for (int level = 1; level <= t.shape.depth; ++level) {
    const auto& avg = t.average[static_cast<std::size_t>(level)];
    std::vector<Scalar> next(avg.size());
    for (std::size_t i = 0; i < avg.size(); ++i) {
      const Scalar& up = running[i / static_cast<std::size_t>(t.shape.k)];
      next[i] = avg[i] > up ? avg[i] : up;
    }
    running = std::move(next);
  }
  return running;
}

template <typename Scalar>
std::vector<Scalar> maximal_function(const BasicStepWeight<Scalar>& w) {
  return maximal_function(node_table(w));
}

/// Same quantity from the definition: every node average is summed straight
/// from the leaves, then each (leaf, ancestor) pair is visited explicitly.
template <typename Scalar>
std::vector<Scalar> maximal_function_bruteforce(const BasicStepWeight<Scalar>& w) {
  const TreeShape& shape = w.shape();
  std::vector<Scalar> node_avg(static_cast<std::size_t>(shape.node_count()));
  for (int level = 0; level <= shape.depth; ++level) {
    for (std::int64_t i = 0; i < shape.level_size(level); ++i) {
      const NodeId node{level, i};
      node_avg[static_cast<std::size_t>(flat_index(shape, node))] = average(w, node);
    }
  }
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(shape.leaf_count()));
  for (std::int64_t leaf = 0; leaf < shape.leaf_count(); ++leaf) {
    const auto chain = ancestors(shape, leaf_node(shape, leaf));
    Scalar best = node_avg[static_cast<std::size_t>(flat_index(shape, chain.front()))];
    for (const NodeId& a : chain) {
      const Scalar& v = node_avg[static_cast<std::size_t>(flat_index(shape, a))];
      if (v > best) best = v;
    }
    out.push_back(std::move(best));
  }
  return out;
}

/// Smallest C with M w <= C w at every leaf.
template <typename Scalar>
Scalar a1_constant(const BasicStepWeight<Scalar>& w) {
  const auto m = maximal_function(w);
  Scalar best = m[0] / w[0];
  for (std::size_t i = 1; i < m.size(); ++i) {
    Scalar r = m[i] / w[static_cast<std::int64_t>(i)];
    if (r > best) best = std::move(r);
  }
  return best;
}

/// The same constant as max over nodes of (average / minimum leaf value).
template <typename Scalar>
Scalar a1_constant_by_nodes(const NodeTable<Scalar>& t) {
  Scalar best = t.average[0][0] / t.minimum[0][0];
  for (std::size_t l = 0; l < t.average.size(); ++l) {
    for (std::size_t i = 0; i < t.average[l].size(); ++i) {
      Scalar r = t.average[l][i] / t.minimum[l][i];
      if (r > best) best = std::move(r);
    }
  }
  return best;
}

/// Nodes whose average strictly exceeds that of every strict ancestor, with
/// the I -> I* links and the map from each leaf to the largest node attaining
/// its maximal average.
template <typename Scalar>
struct StoppingFamily {
  TreeShape shape;
  std::vector<NodeId> members;  // sorted by (level, index)
  std::map<NodeId, NodeId> star;
  std::vector<NodeId> assignment;  // per leaf
  std::map<NodeId, Scalar> node_averages;

  bool contains(const NodeId& n) const { return std::binary_search(members.begin(), members.end(), n); }

  /// Leaves x with I_w(x) = node.
  std::vector<std::int64_t> region(const NodeId& node) const {
    std::vector<std::int64_t> out;
    for (std::size_t x = 0; x < assignment.size(); ++x) {
      if (assignment[x] == node) out.push_back(static_cast<std::int64_t>(x));
    }
    return out;
  }

  Scalar region_measure(const NodeId& node) const {
    Scalar count = scalar_from_int<Scalar>(static_cast<std::int64_t>(region(node).size()));
    count /= scalar_from_int<Scalar>(shape.leaf_count());
    return count;
  }
};

template <typename Scalar>
StoppingFamily<Scalar> stopping_family(const BasicStepWeight<Scalar>& w) {
  const TreeShape& shape = w.shape();
  const NodeTable<Scalar> t = node_table(w);
  StoppingFamily<Scalar> fam;
  fam.shape = shape;

  // Membership: strict increase over the best strict-ancestor average.
  fam.members.push_back(kRoot);
  fam.node_averages.emplace(kRoot, t.avg(kRoot));
  std::vector<Scalar> above{t.avg(kRoot)};  // max average over the node and its ancestors
  for (int level = 1; level <= shape.depth; ++level) {
    const auto n = static_cast<std::size_t>(shape.level_size(level));
    std::vector<Scalar> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      const NodeId node{level, static_cast<std::int64_t>(i)};
      const Scalar& strict_up = above[i / static_cast<std::size_t>(shape.k)];
      const Scalar& a = t.avg(node);
      if (a > strict_up) {
        fam.members.push_back(node);
        fam.node_averages.emplace(node, a);
        next[i] = a;
      } else {
        next[i] = strict_up;
      }
    }
    above = std::move(next);
  }
  std::sort(fam.members.begin(), fam.members.end());

  // Assignment straight from the definition of I_w(x).
  fam.assignment.reserve(static_cast<std::size_t>(shape.leaf_count()));
  for (std::int64_t leaf = 0; leaf < shape.leaf_count(); ++leaf) {
    auto chain = ancestors(shape, leaf_node(shape, leaf));
    std::reverse(chain.begin(), chain.end());  // root first
    Scalar best = t.avg(chain.front());
    for (const NodeId& a : chain) {
      if (t.avg(a) > best) best = t.avg(a);
    }
    const auto largest = std::find_if(chain.begin(), chain.end(), [&](const NodeId& a) { return t.avg(a) == best; });
    fam.assignment.push_back(*largest);
  }

  for (const NodeId& m : fam.members) {
    if (m == kRoot) continue;
    NodeId up = parent(shape, m);
    while (!fam.contains(up)) up = parent(shape, up);
    fam.star.emplace(m, up);
  }
  return fam;
}

/// The maximal nodes with average strictly above `threshold`, left to right.
/// Their union is {M w > threshold}.
template <typename Scalar>
std::vector<NodeId> superlevel_set(const NodeTable<Scalar>& t, const Scalar& threshold) {
  if (!(threshold > 0)) throw ParameterError("superlevel threshold must be positive");
  std::vector<NodeId> out;
  std::vector<NodeId> stack{kRoot};
  while (!stack.empty()) {
    const NodeId node = stack.back();
    stack.pop_back();
    if (t.avg(node) > threshold) {
      out.push_back(node);
    } else if (node.level < t.shape.depth) {
      auto kids = children(t.shape, node);
      stack.insert(stack.end(), kids.rbegin(), kids.rend());
    }
  }
  return out;
}

template <typename Scalar>
std::vector<NodeId> superlevel_set(const BasicStepWeight<Scalar>& w, const Scalar& threshold) {
  return superlevel_set(node_table(w), threshold);
}

/// Total measure of pairwise-disjoint nodes.
template <typename Scalar>
Scalar measure_of(const TreeShape& shape, const std::vector<NodeId>& nodes) {
  std::int64_t leaves = 0;
  for (const NodeId& n : nodes) leaves += leaves_under(shape, n).size();
  Scalar out = scalar_from_int<Scalar>(leaves);
  out /= scalar_from_int<Scalar>(shape.leaf_count());
  return out;
}

/// Integral of w over pairwise-disjoint nodes.
template <typename Scalar>
Scalar integral_over(const BasicStepWeight<Scalar>& w, const std::vector<NodeId>& nodes) {
  Scalar sum = scalar_from_int<Scalar>(0);
  for (const NodeId& n : nodes) {
    const LeafRange r = leaves_under(w.shape(), n);
    for (std::int64_t leaf = r.begin; leaf < r.end; ++leaf) sum += w[leaf];
  }
  sum /= scalar_from_int<Scalar>(w.leaf_count());
  return sum;
}

}  // namespace kadic
