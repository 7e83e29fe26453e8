#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kadic/maximal.hpp"
#include "kadic/rearrangement.hpp"
#include "kadic/weight.hpp"

namespace kadic {

/// Exact replay of the level-set argument at one t in (0, 1].
struct ProofStepRecord {
  Rational t;
  Rational lambda;     // w*(t)
  Rational c;          // A1 constant of w
  Rational threshold;  // c * lambda
  Rational bound;      // k*c - k + 1
  bool degenerate = false;  // E_t is empty

  std::vector<NodeId> et_nodes;                 // maximal nodes of E_t = {M w > c*lambda}
  std::vector<std::optional<NodeId>> et_stars;  // I_j* for each of them
  Rational mu_et;       // t_1
  Rational t2;          // mu{w > c*lambda}
  Rational avg_over_et;
  Rational prefix_avg;  // (1/t) * integral of w* over (0,t]

  bool members_ok = true;    // every I_j belongs to the stopping family
  bool star_ok = true;       // Av(I_j*) <= c*lambda and Av(I_j) <= (k - (k-1)/c) * Av(I_j*)
  bool upper_ok = true;       // avg over E_t <= (k*c-k+1) * lambda
  bool lower_ok = true;       // avg over E_t >= prefix average at t
  bool weak_type_ok = true;  // integral over E_t > c*lambda * mu(E_t)
  bool inclusion_ok = true;  // E_t inside {w > lambda}
  bool ordering_ok = true;   // t2 <= mu(E_t) <= t
  bool degenerate_ok = true; // empty E_t: w <= c*lambda at every leaf

  bool passed() const {
    return members_ok && star_ok && upper_ok && lower_ok && weak_type_ok && inclusion_ok && ordering_ok &&
           degenerate_ok;
  }
};

ProofStepRecord check_proof_steps(const StepWeight& w, const Rational& t);

/// Records at t = j / k^(depth+1) for j = 1 .. k^(depth+1).
std::vector<ProofStepRecord> check_proof_steps_grid(const StepWeight& w);

struct Lemma2Violation {
  NodeId member;
  NodeId star;
  Rational member_average;
  Rational star_average;
  Rational upper;  // (k - (k-1)/c) * star_average
};

struct Lemma2Result {
  bool ok = true;
  std::optional<Lemma2Violation> violation;
};

/// Av(I*) < Av(J) <= (k - (k-1)/c) * Av(I*) for every non-root member J.
Lemma2Result check_lemma2(const StepWeight& w);
Lemma2Result check_lemma2(const StoppingFamily<Rational>& family, const Rational& c);

/// mu{M w > lambda} < (1/lambda) * integral of w over that set; vacuous when empty.
bool check_weak_type(const StepWeight& w, const Rational& lambda);

struct WeakTypeSweep {
  bool ok = true;
  std::int64_t thresholds = 0;
  std::optional<Rational> failing_lambda;
};

/// check_weak_type at every distinct node average, using one sort of M w.
WeakTypeSweep check_weak_type_at_node_averages(const StepWeight& w);

/// Criterion membership equals the set of assigned nodes I_w(x).
bool check_lemma1_equivalence(const StoppingFamily<Rational>& family);

/// Sum of Av_I on A_I rebuilds M w, every A_I is non-empty, and the regions
/// partition the leaves.
bool check_decomposition(const StoppingFamily<Rational>& family, const std::vector<Rational>& maximal);

struct CheckOptions {
  bool proof_steps = false;
};

struct VerificationReport {
  int k = 2;
  int depth = 1;
  Rational c;          // A1 constant on the tree
  Rational bound;      // k*c - k + 1
  Rational sup_ratio;  // A1 constant of w* on (0,1]
  Rational margin;     // bound - sup_ratio
  Rational witness;
  Rational kadic_c;    // A1 constant of w* on the k-adic tree of (0,1]

  bool holds = false;
  bool c_within_bound = false;  // c <= k*c - k + 1
  bool lemma1_ok = false;
  bool lemma2_ok = false;
  bool weak_type_ok = false;
  bool decomposition_ok = false;
  bool oracle_ok = false;  // fast and brute-force M w agree
  bool kadic_ok = false;   // kadic_c <= bound
  bool proof_steps_ok = true;

  std::optional<Lemma2Violation> lemma2_violation;
  std::optional<std::vector<ProofStepRecord>> proof_steps;

  bool all_ok() const {
    return holds && c_within_bound && lemma1_ok && lemma2_ok && weak_type_ok && decomposition_ok && oracle_ok &&
           kadic_ok && proof_steps_ok;
  }
  /// Name of the first failing check, or empty.
  std::string first_failure() const;
};

VerificationReport check_theorem(const StepWeight& w, const CheckOptions& options = {});

struct CampaignConfig {
  TreeShape shape;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<Rational> grid;
  bool exhaustive = false;  // ignore trials/seed and enumerate grid^(k^depth)
  bool proof_steps = false;
  int threads = 1;
  /// When set, a margin strictly below this value also counts as a violation.
  std::optional<Rational> margin_floor;
};

struct TrialRecord {
  std::int64_t index = 0;
  StepWeight weight;
  VerificationReport report;
};

struct Counterexample {
  std::int64_t index = 0;
  std::string check;
  StepWeight weight;
};

struct CampaignSummary {
  std::int64_t trials_run = 0;
  std::int64_t violations = 0;
  std::optional<Rational> worst_margin;
  std::optional<StepWeight> worst_weight;
  std::optional<Counterexample> first_violation;  // lowest trial index; the campaign stops there
  std::vector<TrialRecord> records;
};

/// Weight number `index` of a campaign, random or exhaustive.
StepWeight campaign_weight(const CampaignConfig& config, std::int64_t index);
std::int64_t campaign_size(const CampaignConfig& config);

/// Name of the first failing check for this trial under the config, or empty.
std::string trial_failure(const CampaignConfig& config, const VerificationReport& report);

CampaignSummary fuzz_campaign(const CampaignConfig& config);

struct SweepPoint {
  int depth = 2;
  Rational delta;
};

struct SweepRow {
  std::string mode;
  int k = 2;
  Rational c;
  int depth = 2;
  Rational delta;
  std::int64_t marked_leaves = 0;
  Rational alpha;
  Rational eps;
  Rational printed_cdelta;
  Rational measured_c;
  Rational bound_measured;  // k * measured_c - k + 1
  Rational sup_ratio;
  Rational witness;
  Rational ratio_at_inv_k;  // prefix_average(1/k) / w*(1/k)
  Rational target;          // k*c - k + 1
  Rational gap;             // bound_measured - sup_ratio
  bool holds = false;
};

/// One row per point, built with extremal_paper at alpha = k*c-k+1, eps = 1.
std::vector<SweepRow> sharpness_sweep(int k, const Rational& c, const std::vector<SweepPoint>& points);

/// The extremal_exact witness as a sweep row.
SweepRow exact_sweep_row(int k, const Rational& c);

/// delta_r = (1 - k^-r) / k^2 for r = 1 .. min(steps, depth-2) at each depth;
/// steps <= 0 keeps only the closest approach r = depth-2 per depth.
std::vector<SweepPoint> approach_schedule(int k, const std::vector<int>& depths, int steps);

}  // namespace kadic
