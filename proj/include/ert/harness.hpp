#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ert/adversary.hpp"
#include "ert/distance_oracles.hpp"
#include "ert/line_testers.hpp"
#include "ert/oracle.hpp"
#include "ert/transforms.hpp"

#include <json.hpp>

namespace ert {

enum class TesterKind {
  MonotoneLine,
  BdpLine,
  ConvexLine,
  MonotoneGrid,
  BdpGrid,
  KRuns,
  KRunsExtendable,
  LowDegree,
  PosetMonotone,
  DistanceApprox,
  MidpointBaseline,
};

TesterKind tester_kind_from_tag(const std::string& tag);
const char* to_string(TesterKind kind);

/// A tester with its parameters.
struct TesterConfig {
  TesterKind kind = TesterKind::MonotoneLine;
  double eps = 0.25;
  double alpha = 0.0;
  std::uint32_t k = 2;
  std::uint32_t degree = 1;
  std::optional<BoundingFamily> bounds;
  std::shared_ptr<const Poset> poset;
  AnchorPolicy anchor_policy = AnchorPolicy::Merged;
  /// Low-degree POT: lower bound on the single-run detection rate. When
  /// unset, the transformed rate at eps is used.
  std::optional<double> detection_bound;
  /// Distance-approximation adapter: value assumed at erased points.
  double fill = 0.0;
};

/// Property a tester decides; certificates are checked against it.
Property tester_property(const TesterConfig& cfg);

/// The tester's query formula on `domain`; no run may exceed it.
std::uint64_t tester_budget(const TesterConfig& cfg, const Domain& domain);

/// Runs one trial on a fresh oracle.
Verdict run_tester(const TesterConfig& cfg, const ErasedFunction& f, Rng& rng);

struct ExperimentConfig {
  TesterConfig tester;
  /// Either an instance file or a generator spec.
  std::optional<std::string> input;
  std::optional<InstanceSpec> instance;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  std::optional<std::string> output;
  std::string format = "csv";
};

/// Bounds object: {"file": path} | {"lipschitz": c} | {"lower": l,
/// "upper": u} (numbers or "inf"/"-inf") | {"monotone": true}.
BoundingFamily parse_bounds_spec(const nlohmann::json& j,
                                 const std::string& base_dir, std::uint64_t n,
                                 std::uint32_t d);
/// Poset object: {"file": path} | {"star_forest": [centers, leaves]} |
/// {"chain": N} | {"antichain": N}.
std::shared_ptr<const Poset> parse_poset_spec(const nlohmann::json& j,
                                              const std::string& base_dir);
/// Generator spec: property tag plus its parameters and the InstanceSpec
/// fields.
InstanceSpec parse_instance_spec(const nlohmann::json& j,
                                 const std::string& base_dir = "");

/// Parses one config object; relative file paths resolve against `base_dir`.
ExperimentConfig parse_experiment(const nlohmann::json& j,
                                  const std::string& base_dir = "");
/// A single object or {"experiments": [...]}.
std::vector<ExperimentConfig> parse_experiments(const nlohmann::json& j,
                                                const std::string& base_dir = "");
std::vector<ExperimentConfig> read_experiments_file(const std::string& path);

/// Throws ConfigError if the config cannot run (no trials, no instance,
/// domain or value kind not fitting the tester).
void validate_config(const ExperimentConfig& cfg);

/// Loads or generates the instance.
ErasedFunction load_instance(const ExperimentConfig& cfg);

struct TrialSummary {
  std::string tester;
  std::uint64_t n = 0;
  std::uint32_t d = 0;
  double eps = 0.0;
  double alpha = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t rejections = 0;
  double accept_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// Fewer than 100 trials: the normal approximation is unreliable.
  bool ci_flagged = false;
  double mean_q = 0.0;
  std::uint64_t max_q = 0;
  double stddev_q = 0.0;
  double mean_sampling = 0.0;
  double mean_walking = 0.0;
  std::uint64_t budget_q = 0;
  double wall_seconds = 0.0;

  /// Equality ignores wall time.
  friend bool operator==(const TrialSummary& a, const TrialSummary& b);
};

/// Per-trial record, kept so parallel and serial runs aggregate identically.
struct TrialRecord {
  bool rejected = false;
  std::uint64_t queries = 0;
  std::uint64_t walking = 0;
};

/// Runs all trials with OpenMP. Trial t uses Rng(seed).split(t). Thread count
/// comes from ERT_NUM_THREADS when set. Throws BudgetViolation if a trial
/// exceeds the query formula and Error if a certificate does not re-validate.
TrialSummary run_experiment(const ExperimentConfig& cfg);
TrialSummary run_experiment(const ExperimentConfig& cfg,
                            const ErasedFunction& f);
/// Single-threaded reference of the same computation.
TrialSummary run_experiment_serial(const ExperimentConfig& cfg,
                                   const ErasedFunction& f);

/// Aggregates records in trial order.
TrialSummary summarize(const ExperimentConfig& cfg, const ErasedFunction& f,
                       const std::vector<TrialRecord>& records);

/// Two-sided 99% normal-approximation interval, clamped to [0, 1].
std::pair<double, double> confidence_interval_99(double p, std::uint64_t n);

nlohmann::json to_json(const TrialSummary& s);
TrialSummary trial_summary_from_json(const nlohmann::json& j);

/// CSV header line (no newline).
std::string csv_header();
std::string csv_row(const TrialSummary& s);

/// Writes csv or json. Throws ConfigError for an unknown format or an empty
/// summary list (before touching the file) and Error on IO failure.
void emit_report(const std::vector<TrialSummary>& summaries,
                 const std::string& format, const std::string& path);
void emit_report(const std::vector<TrialSummary>& summaries,
                 const std::string& format, std::ostream& out);

/// Threads used by run_experiment.
int configured_threads();

}  // namespace ert
