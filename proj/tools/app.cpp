#include "app.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kadic/maximal.hpp"
#include "kadic/rearrangement.hpp"
#include "kadic/search.hpp"
#include "kadic/verify.hpp"
#include "kadic/weight.hpp"

namespace kadic::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

/// Raised for fatal usage problems discovered after flag parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) throw ParameterError("empty entry in list '" + text + "'");
    out.push_back(parse_rational(tok));
  }
  if (out.empty()) throw ParameterError("empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const Rational& r : parse_rational_list(text)) {
    if (r.get_den() != 1 || !r.get_num().fits_sint_p()) throw ParameterError("expected integers in '" + text + "'");
    out.push_back(static_cast<int>(r.get_num().get_si()));
  }
  return out;
}

const char* flag(bool b) { return b ? "true" : "false"; }

ordered_json node_json(const NodeId& n) { return ordered_json{{"level", n.level}, {"index", n.index}}; }

/// Writes `text` to `path`, creating parent directories.
void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << text;
}

/// Manifest sidecar. Everything except the two timestamps is a function of the flags.
struct Manifest {
  std::string command;
  ordered_json parameters = ordered_json::object();
  std::uint64_t seed = 0;
  std::string started_at = utc_now();
  std::vector<std::string> outputs;

  void write(const fs::path& path) const {
    ordered_json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["version"] = KADIC_VERSION;
    j["started_at"] = started_at;
    j["finished_at"] = utc_now();
    j["outputs"] = outputs;
    write_file(path, j.dump(2) + "\n");
  }
};

std::string manifest_line(const fs::path& manifest) {
  return "# manifest: " + manifest.filename().string() + "\n";
}

// ---------------------------------------------------------------- verify

struct VerifyFlags {
  int k = 2;
  int depth = 2;
  std::int64_t trials = 100;
  std::uint64_t seed = 0;
  std::string grid = "1,2,3,5,10,100";
  bool exhaustive = false;
  bool proof_steps = false;
  int threads = 1;
  std::string margin_floor;
  std::string out;
};

void verify_row(std::ostream& csv, const TrialRecord& rec) {
  const VerificationReport& r = rec.report;
  csv << rec.index << ',' << hex64(fnv1a(format_weight(rec.weight))) << ',' << r.k << ',' << r.depth << ','
      << format_rational(r.c) << ',' << format_rational(r.bound) << ',' << format_rational(r.sup_ratio) << ','
      << format_rational(r.margin) << ',' << format_rational(r.witness) << ',' << format_rational(r.kadic_c) << ','
      << flag(r.holds) << ',' << flag(r.c_within_bound) << ',' << flag(r.lemma1_ok) << ',' << flag(r.lemma2_ok)
      << ',' << flag(r.weak_type_ok) << ',' << flag(r.decomposition_ok) << ',' << flag(r.oracle_ok) << ','
      << flag(r.kadic_ok) << ',' << flag(r.proof_steps_ok) << ',' << format_decimal(r.c) << ','
      << format_decimal(r.sup_ratio) << ',' << format_decimal(r.margin) << '\n';
}

constexpr const char* kVerifyHeader =
    "trial,weight_hash,k,depth,c,bound,sup_ratio,margin,witness,kadic_c,holds,c_within_bound,lemma1_ok,"
    "lemma2_ok,weak_type_ok,decomposition_ok,oracle_ok,kadic_ok,proof_steps_ok,c_approx_lossy,"
    "sup_ratio_approx_lossy,margin_approx_lossy\n";

int cmd_verify(const VerifyFlags& f, std::ostream& out, std::ostream& err) {
  CampaignConfig config;
  config.shape = make_shape(f.k, f.depth);
  config.trials = f.trials;
  config.seed = f.seed;
  config.grid = parse_rational_list(f.grid);
  config.exhaustive = f.exhaustive;
  config.proof_steps = f.proof_steps;
  config.threads = f.threads;
  if (!f.margin_floor.empty()) config.margin_floor = parse_rational(f.margin_floor);
  if (f.trials < 0) throw ParameterError("--trials must be non-negative");
  if (f.threads < 1) throw ParameterError("--threads must be >= 1");

  Manifest manifest;
  manifest.command = "verify";
  manifest.seed = f.seed;
  manifest.parameters = {{"k", f.k},           {"depth", f.depth},          {"trials", f.trials},
                         {"grid", f.grid},     {"exhaustive", f.exhaustive}, {"proof_steps", f.proof_steps},
                         {"threads", f.threads}};
  if (config.margin_floor) manifest.parameters["flag_margin_below"] = format_rational(*config.margin_floor);

  const CampaignSummary summary = fuzz_campaign(config);

  std::ostringstream csv;
  const fs::path out_path = f.out;
  const fs::path manifest_path = f.out + ".manifest.json";
  if (!f.out.empty()) csv << manifest_line(manifest_path);
  csv << kVerifyHeader;
  for (const TrialRecord& rec : summary.records) verify_row(csv, rec);

  if (f.out.empty()) {
    out << csv.str();
  } else {
    write_file(out_path, csv.str());
    manifest.outputs.push_back(out_path.filename().string());
  }

  err << "verify: " << summary.trials_run << " weights, " << summary.violations << " violations";
  if (summary.worst_margin) err << ", worst margin " << format_rational(*summary.worst_margin);
  err << '\n';

  int code = kOk;
  if (summary.first_violation) {
    const Counterexample& cx = *summary.first_violation;
    err << "violation: check '" << cx.check << "' failed at trial " << cx.index << '\n';
    if (f.out.empty()) {
      err << format_weight(cx.weight);
    } else {
      const fs::path cx_path = f.out + ".counterexample.weight";
      write_file(cx_path, format_weight(cx.weight));
      manifest.outputs.push_back(cx_path.filename().string());
      err << "counterexample written to " << cx_path.string() << '\n';
    }
    manifest.parameters["violation"] = {{"trial", cx.index}, {"check", cx.check}};
    code = kViolation;
  }
  if (!f.out.empty()) manifest.write(manifest_path);
  return code;
}

// ---------------------------------------------------------------- extremal

struct ExtremalFlags {
  int k = 2;
  std::string c = "2";
  std::string mode = "exact";
  std::string depths = "4";
  int delta_steps = 0;
  std::string out;
};

constexpr const char* kExtremalHeader =
    "mode,k,c,depth,delta,marked_leaves,alpha,eps,printed_cdelta,measured_c,bound_measured,sup_ratio,witness,"
    "ratio_at_inv_k,target,gap,holds,measured_c_approx_lossy,ratio_at_inv_k_approx_lossy\n";

int cmd_extremal(const ExtremalFlags& f, std::ostream& out, std::ostream& err) {
  const Rational c = parse_rational(f.c);
  if (c < 1) throw ParameterError("--c must be >= 1");
  if (f.k < 2) throw ParameterError("--k must be >= 2");

  std::vector<SweepRow> rows;
  if (f.mode == "exact") {
    rows.push_back(exact_sweep_row(f.k, c));
  } else if (f.mode == "paper") {
    rows = sharpness_sweep(f.k, c, approach_schedule(f.k, parse_int_list(f.depths), f.delta_steps));
  } else {
    throw ParameterError("--mode must be 'exact' or 'paper'");
  }

  Manifest manifest;
  manifest.command = "extremal";
  manifest.parameters = {{"k", f.k}, {"c", format_rational(c)}, {"mode", f.mode}, {"depths", f.depths},
                         {"delta_steps", f.delta_steps}};

  std::ostringstream csv;
  const fs::path manifest_path = f.out + ".manifest.json";
  if (!f.out.empty()) csv << manifest_line(manifest_path);
  csv << kExtremalHeader;
  bool all_hold = true;
  for (const SweepRow& r : rows) {
    all_hold = all_hold && r.holds;
    csv << r.mode << ',' << r.k << ',' << format_rational(r.c) << ',' << r.depth << ',' << format_rational(r.delta)
        << ',' << r.marked_leaves << ',' << format_rational(r.alpha) << ',' << format_rational(r.eps) << ','
        << format_rational(r.printed_cdelta) << ',' << format_rational(r.measured_c) << ','
        << format_rational(r.bound_measured) << ',' << format_rational(r.sup_ratio) << ','
        << format_rational(r.witness) << ',' << format_rational(r.ratio_at_inv_k) << ','
        << format_rational(r.target) << ',' << format_rational(r.gap) << ',' << flag(r.holds) << ','
        << format_decimal(r.measured_c) << ',' << format_decimal(r.ratio_at_inv_k) << '\n';
  }
  if (f.out.empty()) {
    out << csv.str();
  } else {
    write_file(f.out, csv.str());
    manifest.outputs.push_back(fs::path(f.out).filename().string());
    manifest.write(manifest_path);
  }
  if (!all_hold) {
    err << "extremal: theorem bound violated by a sweep row\n";
    return kViolation;
  }
  return kOk;
}

// ---------------------------------------------------------------- search

struct SearchFlags {
  int k = 2;
  int depth = 2;
  int iters = 5000;
  int restarts = 10;
  std::uint64_t seed = 0;
  double step_scale = 0.5;
  double value_floor = 1e-9;
  std::string out;
};

int cmd_search(const SearchFlags& f, std::ostream& out, std::ostream& err) {
  SearchConfig config;
  config.shape = make_shape(f.k, f.depth);
  config.iterations = f.iters;
  config.restarts = f.restarts;
  config.seed = f.seed;
  config.step_scale = f.step_scale;
  config.value_floor = f.value_floor;
  validate(config);

  const SearchResult result = hill_climb(config);

  ordered_json summary;
  summary["best_objective"] = format_double(result.best_objective);
  summary["best_objective_exact"] = format_rational(result.best_objective_exact);
  summary["best_restart"] = result.best_restart;
  summary["best_weight"] = format_weight(result.best_weight);
  summary["c"] = format_rational(a1_constant(result.best_weight));
  summary["sup_ratio"] = format_rational(sup_ratio(rearrange(result.best_weight)).value);
  summary["evaluations"] = result.evaluations;
  summary["exact_rechecks"] = result.exact_rechecks;
  summary["verified"] = result.verified;

  if (f.out.empty()) {
    out << summary.dump(2) << '\n';
  } else {
    const fs::path dir = f.out;
    Manifest manifest;
    manifest.command = "search";
    manifest.seed = f.seed;
    manifest.parameters = {{"k", f.k},
                           {"depth", f.depth},
                           {"iters", f.iters},
                           {"restarts", f.restarts},
                           {"step_scale", format_double(f.step_scale)},
                           {"value_floor", format_double(f.value_floor)}};
    std::ostringstream trace;
    trace << manifest_line(dir / "manifest.json") << "iteration,objective\n";
    for (const TracePoint& p : result.trace) trace << p.iteration << ',' << format_double(p.best_objective) << '\n';
    write_file(dir / "trace.csv", trace.str());
    write_file(dir / "best.weight", format_weight(result.best_weight));
    summary["manifest"] = "manifest.json";
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    manifest.outputs = {"best.weight", "trace.csv", "summary.json"};
    manifest.write(dir / "manifest.json");
    out << "best objective " << format_double(result.best_objective) << " (exact "
        << format_rational(result.best_objective_exact) << ")\n";
  }

  if (result.violation) {
    err << "search: exact recheck found objective > 1 for weight " << format_weight(*result.violation);
    return kViolation;
  }
  if (!result.verified) {
    err << "search: best weight failed exact re-verification\n";
    return kViolation;
  }
  return kOk;
}

// ---------------------------------------------------------------- inspect

struct InspectFlags {
  std::string weight;
  std::string t;
  bool json = false;
};

ordered_json proof_step_json(const ProofStepRecord& r) {
  ordered_json j;
  j["t"] = format_rational(r.t);
  j["lambda"] = format_rational(r.lambda);
  j["c"] = format_rational(r.c);
  j["threshold"] = format_rational(r.threshold);
  j["bound"] = format_rational(r.bound);
  j["degenerate"] = r.degenerate;
  ordered_json nodes = ordered_json::array();
  for (std::size_t i = 0; i < r.et_nodes.size(); ++i) {
    ordered_json n = node_json(r.et_nodes[i]);
    n["star"] = r.et_stars[i] ? node_json(*r.et_stars[i]) : ordered_json(nullptr);
    nodes.push_back(n);
  }
  j["et_nodes"] = nodes;
  j["mu_et"] = format_rational(r.mu_et);
  j["t2"] = format_rational(r.t2);
  j["avg_over_et"] = r.degenerate ? ordered_json(nullptr) : ordered_json(format_rational(r.avg_over_et));
  j["prefix_average"] = format_rational(r.prefix_avg);
  j["checks"] = {{"members", r.members_ok},     {"star", r.star_ok},           {"upper", r.upper_ok},
                 {"lower", r.lower_ok},           {"weak_type", r.weak_type_ok}, {"inclusion", r.inclusion_ok},
                 {"ordering", r.ordering_ok},   {"degenerate", r.degenerate_ok}, {"passed", r.passed()}};
  return j;
}

ordered_json inspect_json(const StepWeight& w, const std::optional<ProofStepRecord>& step) {
  const Rational c = a1_constant(w);
  const auto maximal = maximal_function(w);
  const StoppingFamily<Rational> fam = stopping_family(w);
  const Profile profile = rearrange(w);
  const SupRatio<Rational> sup = sup_ratio(profile);

  ordered_json j;
  j["k"] = w.shape().k;
  j["depth"] = w.shape().depth;
  ordered_json values = ordered_json::array();
  for (const auto& v : w.values()) values.push_back(format_rational(v));
  j["values"] = values;
  j["c"] = format_rational(c);
  j["bound"] = format_rational(Rational(w.shape().k * c - w.shape().k + 1));
  ordered_json mf = ordered_json::array();
  for (const auto& v : maximal) mf.push_back(format_rational(v));
  j["maximal_function"] = mf;
  ordered_json members = ordered_json::array();
  for (const NodeId& m : fam.members) {
    ordered_json e = node_json(m);
    e["average"] = format_rational(fam.node_averages.at(m));
    auto it = fam.star.find(m);
    e["star"] = it == fam.star.end() ? ordered_json(nullptr) : node_json(it->second);
    e["region"] = fam.region(m);
    e["region_measure"] = format_rational(fam.region_measure(m));
    members.push_back(e);
  }
  j["stopping_family"] = members;
  ordered_json pieces = ordered_json::array();
  for (const auto& p : profile.pieces) {
    pieces.push_back({{"measure", format_rational(p.measure)}, {"value", format_rational(p.value)}});
  }
  j["profile"] = pieces;
  j["sup_ratio"] = format_rational(sup.value);
  j["witness"] = format_rational(sup.witness);
  if (step) j["proof_step"] = proof_step_json(*step);
  return j;
}

std::string node_text(const NodeId& n) { return "(" + std::to_string(n.level) + "," + std::to_string(n.index) + ")"; }

void inspect_text(std::ostream& out, const ordered_json& j) {
  out << "shape      k=" << j["k"] << " depth=" << j["depth"] << '\n';
  out << "c          " << j["c"].get<std::string>() << "   bound " << j["bound"].get<std::string>() << '\n';
  out << "M w        ";
  for (const auto& v : j["maximal_function"]) out << v.get<std::string>() << ' ';
  out << "\nfamily\n";
  for (const auto& m : j["stopping_family"]) {
    out << "  " << node_text(NodeId{m["level"].get<int>(), m["index"].get<std::int64_t>()}) << " avg "
        << m["average"].get<std::string>();
    if (!m["star"].is_null()) {
      out << " star " << node_text(NodeId{m["star"]["level"].get<int>(), m["star"]["index"].get<std::int64_t>()});
    }
    out << " region " << m["region"].dump() << " measure " << m["region_measure"].get<std::string>() << '\n';
  }
  out << "profile   ";
  for (const auto& p : j["profile"]) {
    out << " (" << p["measure"].get<std::string>() << ", " << p["value"].get<std::string>() << ")";
  }
  out << "\nsup ratio  " << j["sup_ratio"].get<std::string>() << " at t=" << j["witness"].get<std::string>() << '\n';
  if (j.contains("proof_step")) out << "proof step " << j["proof_step"].dump() << '\n';
}

int cmd_inspect(const InspectFlags& f, std::ostream& out) {
  std::ifstream in(f.weight, std::ios::binary);
  if (!in) throw UsageError("cannot read weight file '" + f.weight + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const StepWeight w = parse_weight(buf.str());

  std::optional<ProofStepRecord> step;
  if (!f.t.empty()) step = check_proof_steps(w, parse_rational(f.t));
  const ordered_json j = inspect_json(w, step);
  if (f.json) {
    out << j.dump(2) << '\n';
  } else {
    inspect_text(out, j);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Exact A1 constants, stopping families and decreasing rearrangements on k-homogeneous trees"};
  cli.require_subcommand(1);
  cli.set_version_flag("--version", KADIC_VERSION);

  VerifyFlags vf;
  auto* verify = cli.add_subcommand("verify", "check the rearrangement bound on random or exhaustive weights");
  verify->add_option("--k", vf.k, "homogeneity")->capture_default_str();
  verify->add_option("--depth", vf.depth, "leaf level")->capture_default_str();
  verify->add_option("--trials", vf.trials, "number of random weights")->capture_default_str();
  verify->add_option("--seed", vf.seed, "campaign seed")->capture_default_str();
  verify->add_option("--grid", vf.grid, "comma-separated leaf values")->capture_default_str();
  verify->add_flag("--exhaustive", vf.exhaustive, "enumerate every weight over the grid");
  verify->add_flag("--proof-steps", vf.proof_steps, "also replay the level-set argument on the t grid");
  verify->add_option("--threads", vf.threads, "worker threads")->capture_default_str();
  verify->add_option("--flag-margin-below", vf.margin_floor, "also report weights whose margin is below this value");
  verify->add_option("--out", vf.out, "CSV path (stdout when omitted)");

  ExtremalFlags ef;
  auto* extremal = cli.add_subcommand("extremal", "tabulate the sharpness construction");
  extremal->add_option("--k", ef.k, "homogeneity")->capture_default_str();
  extremal->add_option("--c", ef.c, "target A1 constant (rational >= 1)")->capture_default_str();
  extremal->add_option("--mode", ef.mode, "exact | paper")->capture_default_str();
  extremal->add_option("--depths", ef.depths, "comma-separated depths for paper mode")->capture_default_str();
  extremal->add_option("--delta-steps", ef.delta_steps, "approach steps per depth (0: closest only)")
      ->capture_default_str();
  extremal->add_option("--out", ef.out, "CSV path (stdout when omitted)");

  SearchFlags sf;
  auto* search = cli.add_subcommand("search", "hill-climb the normalized ratio toward 1");
  search->add_option("--k", sf.k, "homogeneity")->capture_default_str();
  search->add_option("--depth", sf.depth, "leaf level")->capture_default_str();
  search->add_option("--iters", sf.iters, "iterations per restart")->capture_default_str();
  search->add_option("--restarts", sf.restarts, "independent restarts")->capture_default_str();
  search->add_option("--seed", sf.seed, "search seed")->capture_default_str();
  search->add_option("--step-scale", sf.step_scale, "multiplicative step size in (0,1)")->capture_default_str();
  search->add_option("--value-floor", sf.value_floor, "smallest leaf value")->capture_default_str();
  search->add_option("--out", sf.out, "output directory");

  InspectFlags inf;
  auto* inspect = cli.add_subcommand("inspect", "show every computed structure for one weight");
  inspect->add_option("--weight", inf.weight, "weight file")->required();
  inspect->add_option("--t", inf.t, "also replay the level-set argument at this t");
  inspect->add_flag("--json", inf.json, "emit JSON");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    cli.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(vf, out, err);
    if (extremal->parsed()) return cmd_extremal(ef, out, err);
    if (search->parsed()) return cmd_search(sf, out, err);
    if (inspect->parsed()) return cmd_inspect(inf, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace kadic::app
