#include "kadic/verify.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>
#include <thread>

#include "kadic/rng.hpp"

namespace kadic {
namespace {

Rational sharp_bound(int k, const Rational& c) { return Rational(k * c - k + 1); }

}  // namespace

ProofStepRecord check_proof_steps(const StepWeight& w, const Rational& t) {
  const Profile profile = rearrange(w);
  Profile::require_unit(t);
  const TreeShape& shape = w.shape();
  const NodeTable<Rational> table = node_table(w);

  ProofStepRecord rec;
  rec.t = t;
  rec.lambda = profile.value_at(t);
  rec.c = a1_constant(w);
  rec.threshold = rec.c * rec.lambda;
  rec.bound = sharp_bound(shape.k, rec.c);
  rec.prefix_avg = prefix_average(profile, t);
  rec.et_nodes = superlevel_set(table, rec.threshold);
  rec.mu_et = measure_of<Rational>(shape, rec.et_nodes);

  std::int64_t above = 0;
  for (const auto& v : w.values()) {
    if (v > rec.threshold) ++above;
  }
  rec.t2 = make_rational(above, shape.leaf_count());

  if (rec.et_nodes.empty()) {
    rec.degenerate = true;
    for (const auto& v : w.values()) {
      if (v > rec.threshold) rec.degenerate_ok = false;
    }
    return rec;
  }

  const StoppingFamily<Rational> family = stopping_family(w);
  const Rational lemma2_factor = shape.k - Rational((shape.k - 1) / rec.c);
  for (const NodeId& node : rec.et_nodes) {
    if (!family.contains(node)) {
      rec.members_ok = false;
      rec.et_stars.emplace_back();
      continue;
    }
    auto it = family.star.find(node);
    if (it == family.star.end()) {
      rec.et_stars.emplace_back();
      rec.star_ok = false;  // the root can never exceed c * min w
      continue;
    }
    rec.et_stars.emplace_back(it->second);
    const Rational& star_avg = table.avg(it->second);
    if (star_avg > rec.threshold) rec.star_ok = false;
    if (table.avg(node) > lemma2_factor * star_avg) rec.star_ok = false;
  }

  const Rational integral = integral_over(w, rec.et_nodes);
  rec.avg_over_et = integral / rec.mu_et;
  rec.upper_ok = rec.avg_over_et <= rec.bound * rec.lambda;
  rec.lower_ok = rec.avg_over_et >= rec.prefix_avg;
  rec.weak_type_ok = integral > rec.threshold * rec.mu_et;
  for (const NodeId& node : rec.et_nodes) {
    const LeafRange r = leaves_under(shape, node);
    for (std::int64_t leaf = r.begin; leaf < r.end; ++leaf) {
      if (!(w[leaf] > rec.lambda)) rec.inclusion_ok = false;
    }
  }
  rec.ordering_ok = rec.t2 <= rec.mu_et && rec.mu_et <= t;
  return rec;
}

std::vector<ProofStepRecord> check_proof_steps_grid(const StepWeight& w) {
  const std::int64_t steps = ipow(w.shape().k, w.shape().depth + 1);
  std::vector<ProofStepRecord> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (std::int64_t j = 1; j <= steps; ++j) out.push_back(check_proof_steps(w, make_rational(j, steps)));
  return out;
}

Lemma2Result check_lemma2(const StoppingFamily<Rational>& family, const Rational& c) {
  const int k = family.shape.k;
  const Rational factor = k - Rational((k - 1) / c);
  for (const auto& [member, star] : family.star) {
    const Rational& y_j = family.node_averages.at(member);
    const Rational& y_i = family.node_averages.at(star);
    const Rational upper = factor * y_i;
    if (!(y_i < y_j) || y_j > upper) {
      return Lemma2Result{false, Lemma2Violation{member, star, y_j, y_i, upper}};
    }
  }
  return Lemma2Result{};
}

Lemma2Result check_lemma2(const StepWeight& w) { return check_lemma2(stopping_family(w), a1_constant(w)); }

bool check_weak_type(const StepWeight& w, const Rational& lambda) {
  if (lambda <= 0) throw ParameterError("weak-type level must be positive");
  const auto nodes = superlevel_set(w, lambda);
  if (nodes.empty()) return true;
  const Rational mu = measure_of<Rational>(w.shape(), nodes);
  return mu < integral_over(w, nodes) / lambda;
}

WeakTypeSweep check_weak_type_at_node_averages(const StepWeight& w) {
  const NodeTable<Rational> table = node_table(w);
  const std::vector<Rational> maximal = maximal_function(table);

  std::vector<std::size_t> order(maximal.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return maximal[a] > maximal[b]; });

  std::vector<Rational> levels;
  for (const auto& row : table.average) levels.insert(levels.end(), row.begin(), row.end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  WeakTypeSweep out;
  std::size_t taken = 0;
  Rational sum = 0;  // sum of leaf values with M w > lambda
  for (const Rational& lambda : levels) {
    while (taken < order.size() && maximal[order[taken]] > lambda) {
      sum += w[static_cast<std::int64_t>(order[taken])];
      ++taken;
    }
    ++out.thresholds;
    // mu(E) < (1/lambda) * int_E w, both sides scaled by the leaf count.
    if (taken > 0 && !(lambda * static_cast<long>(taken) < sum)) {
      out.ok = false;
      out.failing_lambda = lambda;
      return out;
    }
  }
  return out;
}

bool check_lemma1_equivalence(const StoppingFamily<Rational>& family) {
  const std::set<NodeId> assigned(family.assignment.begin(), family.assignment.end());
  return std::equal(assigned.begin(), assigned.end(), family.members.begin(), family.members.end());
}

bool check_decomposition(const StoppingFamily<Rational>& family, const std::vector<Rational>& maximal) {
  if (family.assignment.size() != maximal.size()) return false;
  std::map<NodeId, std::int64_t> region_size;
  for (std::size_t x = 0; x < maximal.size(); ++x) {
    const NodeId& owner = family.assignment[x];
    auto it = family.node_averages.find(owner);
    if (it == family.node_averages.end() || it->second != maximal[x]) return false;
    if (!is_within(family.shape, leaf_node(family.shape, static_cast<std::int64_t>(x)), owner)) return false;
    ++region_size[owner];
  }
  std::int64_t total = 0;
  for (const NodeId& m : family.members) {
    auto it = region_size.find(m);
    if (it == region_size.end() || it->second == 0) return false;
    total += it->second;
  }
  return total == family.shape.leaf_count();
}

std::string VerificationReport::first_failure() const {
  if (!holds) return "theorem";
  if (!c_within_bound) return "c_within_bound";
  if (!lemma1_ok) return "lemma1";
  if (!lemma2_ok) return "lemma2";
  if (!weak_type_ok) return "weak_type";
  if (!decomposition_ok) return "decomposition";
  if (!oracle_ok) return "oracle";
  if (!kadic_ok) return "kadic";
  if (!proof_steps_ok) return "proof_steps";
  return {};
}

VerificationReport check_theorem(const StepWeight& w, const CheckOptions& options) {
  const TreeShape& shape = w.shape();
  VerificationReport r;
  r.k = shape.k;
  r.depth = shape.depth;

  const NodeTable<Rational> table = node_table(w);
  const std::vector<Rational> maximal = maximal_function(table);
  r.c = a1_constant(w);
  r.bound = sharp_bound(shape.k, r.c);
  r.c_within_bound = r.c <= r.bound;

  const Profile profile = rearrange(w);
  const SupRatio<Rational> sup = sup_ratio(profile);
  r.sup_ratio = sup.value;
  r.witness = sup.witness;
  r.margin = r.bound - r.sup_ratio;
  r.holds = r.margin >= 0;

  const StoppingFamily<Rational> family = stopping_family(w);
  r.lemma1_ok = check_lemma1_equivalence(family);
  const Lemma2Result l2 = check_lemma2(family, r.c);
  r.lemma2_ok = l2.ok;
  r.lemma2_violation = l2.violation;
  r.weak_type_ok = check_weak_type_at_node_averages(w).ok;
  r.decomposition_ok = check_decomposition(family, maximal);
  r.oracle_ok = maximal == maximal_function_bruteforce(w);
  r.kadic_c = kadic_constant(profile, shape.k, shape.depth);
  r.kadic_ok = r.kadic_c <= r.bound;

  if (options.proof_steps) {
    r.proof_steps = check_proof_steps_grid(w);
    r.proof_steps_ok = std::all_of(r.proof_steps->begin(), r.proof_steps->end(),
                                   [](const ProofStepRecord& p) { return p.passed(); });
  }
  return r;
}

std::int64_t campaign_size(const CampaignConfig& config) {
  if (!config.exhaustive) return config.trials;
  if (config.grid.empty()) throw ParameterError("campaign needs a non-empty grid");
  constexpr std::int64_t kMaxExhaustive = 10'000'000;
  std::int64_t n = 1;
  for (std::int64_t i = 0; i < config.shape.leaf_count(); ++i) {
    n *= static_cast<std::int64_t>(config.grid.size());
    if (n > kMaxExhaustive) throw ParameterError("exhaustive campaign is too large");
  }
  return n;
}

StepWeight campaign_weight(const CampaignConfig& config, std::int64_t index) {
  if (!config.exhaustive) {
    return random_weight(config.shape, mix_seed(config.seed, static_cast<std::uint64_t>(index)), config.grid);
  }
  // Mixed-radix digits of the index, leaf 0 most significant.
  const auto base = static_cast<std::int64_t>(config.grid.size());
  std::vector<Rational> values(static_cast<std::size_t>(config.shape.leaf_count()));
  std::int64_t rest = index;
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    *it = config.grid[static_cast<std::size_t>(rest % base)];
    rest /= base;
  }
  return make_step_weight(config.shape, std::move(values));
}

std::string trial_failure(const CampaignConfig& config, const VerificationReport& report) {
  std::string failed = report.first_failure();
  if (failed.empty() && config.margin_floor && report.margin < *config.margin_floor) failed = "margin_floor";
  return failed;
}

CampaignSummary fuzz_campaign(const CampaignConfig& config) {
  make_shape(config.shape.k, config.shape.depth);
  if (config.trials < 0) throw ParameterError("trial count must be non-negative");
  if (config.grid.empty()) throw ParameterError("campaign needs a non-empty grid");
  for (const auto& g : config.grid) {
    if (g <= 0) throw ParameterError("grid values must be positive");
  }
  const std::int64_t total = campaign_size(config);
  const CheckOptions options{config.proof_steps};

  std::vector<std::optional<TrialRecord>> slots(static_cast<std::size_t>(total));
  std::atomic<std::int64_t> next{0};
  std::atomic<std::int64_t> first_bad{total};

  auto work = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= total || i > first_bad.load()) return;
      StepWeight w = campaign_weight(config, i);
      VerificationReport rep = check_theorem(w, options);
      if (!trial_failure(config, rep).empty()) {
        std::int64_t seen = first_bad.load();
        while (i < seen && !first_bad.compare_exchange_weak(seen, i)) {
        }
      }
      slots[static_cast<std::size_t>(i)] = TrialRecord{i, std::move(w), std::move(rep)};
    }
  };
  const int workers = std::max(1, config.threads);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  CampaignSummary out;
  const std::int64_t stop = std::min(first_bad.load(), total - 1);
  for (std::int64_t i = 0; i <= stop && i < total; ++i) {
    TrialRecord& rec = *slots[static_cast<std::size_t>(i)];
    ++out.trials_run;
    if (std::string failed = trial_failure(config, rec.report); !failed.empty()) {
      ++out.violations;
      out.first_violation = Counterexample{rec.index, failed, rec.weight};
    }
    if (!out.worst_margin || rec.report.margin < *out.worst_margin) {
      out.worst_margin = rec.report.margin;
      out.worst_weight = rec.weight;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::vector<SweepRow> sharpness_sweep(int k, const Rational& c, const std::vector<SweepPoint>& points) {
  std::vector<SweepRow> rows;
  for (const SweepPoint& pt : points) {
    const ExtremalParams params = make_extremal_params(k, c, pt.delta, pt.depth);
    const StepWeight w = extremal_paper(params);
    const Profile profile = rearrange(w);
    const Rational inv_k = make_rational(1, k);

    SweepRow row;
    row.mode = "paper";
    row.k = k;
    row.c = c;
    row.depth = pt.depth;
    row.delta = pt.delta;
    row.marked_leaves = extremal_leaf_count(params);
    row.alpha = params.alpha;
    row.eps = params.eps;
    row.printed_cdelta = paper_cdelta_formula(k, params.alpha, params.eps, pt.delta);
    row.measured_c = a1_constant(w);
    row.bound_measured = sharp_bound(k, row.measured_c);
    const SupRatio<Rational> sup = sup_ratio(profile);
    row.sup_ratio = sup.value;
    row.witness = sup.witness;
    row.ratio_at_inv_k = prefix_average(profile, inv_k) / profile.value_at(inv_k);
    row.target = sharp_bound(k, c);
    row.gap = row.bound_measured - row.sup_ratio;
    row.holds = row.gap >= 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

SweepRow exact_sweep_row(int k, const Rational& c) {
  SweepRow row = sharpness_sweep(k, c, {SweepPoint{2, make_rational(1, std::int64_t{k} * k)}}).front();
  row.mode = "exact";
  return row;
}

std::vector<SweepPoint> approach_schedule(int k, const std::vector<int>& depths, int steps) {
  std::vector<SweepPoint> out;
  const Rational cell = make_rational(1, std::int64_t{k} * k);
  for (int depth : depths) {
    if (depth < 2) throw ParameterError("sweep depths must be >= 2");
    if (depth == 2) {
      out.push_back(SweepPoint{depth, cell});
      continue;
    }
    const int deepest = depth - 2;
    const int first = steps <= 0 ? deepest : 1;
    const int last = steps <= 0 ? deepest : std::min(steps, deepest);
    for (int r = first; r <= last; ++r) {
      out.push_back(SweepPoint{depth, Rational(cell * (1 - make_rational(1, ipow(k, r))))});
    }
  }
  return out;
}

}  // namespace kadic
