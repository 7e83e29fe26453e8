#include <doctest.h>

#include "kadic/maximal.hpp"
#include "kadic/verify.hpp"
#include "oracles.hpp"

using namespace kadic;
using oracle::vals;

namespace {

std::vector<StepWeight> exhaustive_k2m2() {
  CampaignConfig cfg{make_shape(2, 2), 0, 0, {1, 2, 3}, true};
  std::vector<StepWeight> out;
  for (std::int64_t i = 0; i < campaign_size(cfg); ++i) out.push_back(campaign_weight(cfg, i));
  return out;
}

std::vector<StepWeight> fuzzed(int count) {
  const std::vector<Rational> grid{1, 2, 3, 5, 10, 100, Rational(1, 3)};
  std::vector<StepWeight> out;
  for (int i = 0; i < count; ++i) {
    const int k = 2 + i % 3;
    const int m = 1 + (i / 3) % (k == 2 ? 5 : 3);
    out.push_back(random_weight(make_shape(k, m), 1000 + static_cast<std::uint64_t>(i), grid));
  }
  return out;
}

}  // namespace

TEST_CASE("average") {
  const auto shape = make_shape(2, 2);
  const auto cst = make_step_weight(shape, vals({7, 7, 7, 7}));
  for (const auto& n : oracle::all_nodes(cst)) CHECK(average(cst, NodeId{n.level, n.index}) == 7);
  const auto w = extremal_exact(2, 2);
  CHECK(average(w, NodeId{1, 0}) == 2);
  CHECK(average(w, kRoot) == 2);
  CHECK(node_table(w).avg(NodeId{1, 1}) == 2);
  CHECK(node_table(w).min(kRoot) == 1);
}

TEST_CASE("maximal_function examples") {
  const auto w = extremal_exact(2, 2);
  CHECK(maximal_function(w) == vals({3, 2, 3, 2}));
  CHECK(maximal_function_bruteforce(w) == vals({3, 2, 3, 2}));
  const auto cst = make_step_weight(make_shape(3, 2), std::vector<Rational>(9, Rational(4)));
  CHECK(maximal_function(cst) == std::vector<Rational>(9, Rational(4)));
  CHECK(maximal_function_bruteforce(cst) == std::vector<Rational>(9, Rational(4)));
  const auto w3 = extremal_exact(3, Rational(3, 2));
  CHECK(maximal_function(w3) == maximal_function_bruteforce(w3));
  CHECK(maximal_function(w3) == oracle::maximal(w3));

  const auto b = make_step_weight(make_shape(2, 3), vals({5, 1, 2, 7, 3, 3, 1, 10}));
  const auto got = maximal_function(b);
  const std::vector<Rational> expected{5, 4, Rational(9, 2), 7, Rational(17, 4), Rational(17, 4), Rational(11, 2), 10};
  CHECK(got == expected);
  CHECK(a1_constant(b) == Rational(11, 2));
}

TEST_CASE("fast, brute-force and definition agree; pointwise domination") {
  auto weights = exhaustive_k2m2();
  for (auto& w : fuzzed(150)) weights.push_back(std::move(w));
  for (const auto& w : weights) {
    const auto fast = maximal_function(w);
    CHECK(fast == maximal_function_bruteforce(w));
    CHECK(fast == oracle::maximal(w));
    for (std::int64_t x = 0; x < w.leaf_count(); ++x) CHECK(fast[static_cast<std::size_t>(x)] >= w[x]);
    const Rational c = a1_constant(w);
    CHECK(c == oracle::a1_by_nodes(w));
    CHECK(c == a1_constant_by_nodes(node_table(w)));
    CHECK(c >= 1);
    CHECK((c == 1) == w.is_constant());
  }
}

TEST_CASE("a1_constant examples") {
  CHECK(a1_constant(make_step_weight(make_shape(2, 1), vals({3, 3}))) == 1);
  CHECK(a1_constant(extremal_exact(2, 2)) == 2);
  CHECK(a1_constant(extremal_paper(make_extremal_params(2, 2, Rational(3, 16), 4))) == Rational(5, 2));
  CHECK(a1_constant(make_step_weight(make_shape(2, 2), vals({4, 1, 1, 1}))) == Rational(5, 2));
}

TEST_CASE("stopping family examples") {
  const auto cst = make_step_weight(make_shape(2, 2), vals({2, 2, 2, 2}));
  const auto fc = stopping_family(cst);
  CHECK(fc.members == std::vector<NodeId>{kRoot});
  CHECK(fc.star.empty());
  for (const NodeId& a : fc.assignment) CHECK(a == kRoot);
  CHECK(fc.region_measure(kRoot) == 1);

  const auto w = extremal_exact(2, 2);
  const auto f = stopping_family(w);
  CHECK(f.members == std::vector<NodeId>{kRoot, {2, 0}, {2, 2}});
  CHECK(f.assignment == std::vector<NodeId>{{2, 0}, kRoot, {2, 2}, kRoot});
  CHECK(f.star.at(NodeId{2, 0}) == kRoot);
  CHECK(f.star.at(NodeId{2, 2}) == kRoot);
  CHECK(f.node_averages.at(NodeId{2, 0}) == 3);
  CHECK(f.region(kRoot) == std::vector<std::int64_t>{1, 3});
}

TEST_CASE("stopping family invariants") {
  auto weights = exhaustive_k2m2();
  for (auto& w : fuzzed(150)) weights.push_back(std::move(w));
  for (const auto& w : weights) {
    const auto f = stopping_family(w);
    const auto maximal = maximal_function(w);

    std::vector<std::pair<int, std::int64_t>> members;
    for (const NodeId& m : f.members) members.emplace_back(m.level, m.index);
    CHECK(members == oracle::criterion_members(w));
    CHECK(f.contains(kRoot));
    CHECK(check_lemma1_equivalence(f));
    CHECK(check_decomposition(f, maximal));

    Rational total = 0;
    for (const NodeId& m : f.members) {
      CHECK(!f.region(m).empty());
      total += f.region_measure(m);
      if (m == kRoot) continue;
      // I* is the smallest member strictly containing m.
      const NodeId s = f.star.at(m);
      CHECK(is_within(w.shape(), m, s));
      CHECK(s != m);
      for (const NodeId& between : ancestors(w.shape(), m)) {
        if (between == m || between.level <= s.level) continue;
        CHECK(!f.contains(between));
      }
    }
    CHECK(total == 1);

    // I_w(x) is the largest node on the chain attaining M w(x).
    for (std::int64_t x = 0; x < w.leaf_count(); ++x) {
      const NodeId owner = f.assignment[static_cast<std::size_t>(x)];
      CHECK(average(w, owner) == maximal[static_cast<std::size_t>(x)]);
      for (const NodeId& a : ancestors(w.shape(), leaf_node(w.shape(), x))) {
        if (a.level < owner.level) CHECK(average(w, a) < maximal[static_cast<std::size_t>(x)]);
      }
    }
  }
}

TEST_CASE("scaling invariance of the constant and the family") {
  for (const auto& w : fuzzed(60)) {
    for (const Rational& s : {Rational(1, 7), Rational(3), Rational(1000, 3)}) {
      const auto sw = scaled(w, s);
      CHECK(a1_constant(sw) == a1_constant(w));
      CHECK(stopping_family(sw).members == stopping_family(w).members);
    }
  }
  CHECK_THROWS_AS(scaled(extremal_exact(2, 2), Rational(0)), ParameterError);
}

TEST_CASE("superlevel sets") {
  const auto cst = make_step_weight(make_shape(2, 2), vals({5, 5, 5, 5}));
  CHECK(superlevel_set(cst, Rational(5)).empty());
  CHECK(superlevel_set(cst, Rational(6)).empty());
  CHECK(superlevel_set(cst, Rational(4)) == std::vector<NodeId>{kRoot});
  CHECK(superlevel_set(extremal_exact(2, 2), Rational(2)) == std::vector<NodeId>{{2, 0}, {2, 2}});
  CHECK_THROWS_AS(superlevel_set(cst, Rational(0)), ParameterError);

  for (const auto& w : fuzzed(90)) {
    const auto maximal = maximal_function(w);
    for (const auto& n : oracle::all_nodes(w)) {
      const Rational& lambda = n.average;
      const auto nodes = superlevel_set(w, lambda);
      std::vector<int> covered(static_cast<std::size_t>(w.leaf_count()), 0);
      for (const NodeId& e : nodes) {
        CHECK(average(w, e) > lambda);
        // maximal: the parent does not qualify
        if (e.level > 0) CHECK(!(average(w, parent(w.shape(), e)) > lambda));
        const LeafRange r = leaves_under(w.shape(), e);
        for (auto x = r.begin; x < r.end; ++x) ++covered[static_cast<std::size_t>(x)];
      }
      for (std::int64_t x = 0; x < w.leaf_count(); ++x) {
        CHECK(covered[static_cast<std::size_t>(x)] == (maximal[static_cast<std::size_t>(x)] > lambda ? 1 : 0));
      }
    }
  }
}

TEST_CASE("floating instantiation tracks the exact one") {
  for (const auto& w : fuzzed(60)) {
    const auto wf = to_floating(w);
    CHECK(a1_constant(wf) == doctest::Approx(to_double(a1_constant(w))).epsilon(1e-12));
  }
}
