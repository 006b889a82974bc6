#include "ert/harness.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "ert/errors.hpp"
#include "ert/hypergrid_testers.hpp"
#include "ert/io.hpp"
#include "ert/numeric.hpp"

namespace ert {
namespace {

using nlohmann::json;

constexpr double kZ99 = 2.5758293035489004;

struct TagEntry {
  TesterKind kind;
  const char* tag;
};

constexpr TagEntry kTesterTags[] = {
    {TesterKind::MonotoneLine, "monotone-line"},
    {TesterKind::BdpLine, "bdp-line"},
    {TesterKind::ConvexLine, "convex-line"},
    {TesterKind::MonotoneGrid, "monotone-grid"},
    {TesterKind::BdpGrid, "bdp-grid"},
    {TesterKind::KRuns, "k-runs"},
    {TesterKind::KRunsExtendable, "k-runs-extendable"},
    {TesterKind::LowDegree, "low-degree"},
    {TesterKind::PosetMonotone, "poset-monotone"},
    {TesterKind::DistanceApprox, "distance-approx"},
    {TesterKind::MidpointBaseline, "midpoint-baseline"},
};

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (base_dir.empty() || std::filesystem::path(path).is_absolute()) {
    return path;
  }
  return (std::filesystem::path(base_dir) / path).string();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

}  // namespace

TesterKind tester_kind_from_tag(const std::string& tag) {
  for (const auto& e : kTesterTags) {
    if (tag == e.tag) return e.kind;
  }
  throw ConfigError("unknown tester tag: " + tag);
}

const char* to_string(TesterKind kind) {
  for (const auto& e : kTesterTags) {
    if (kind == e.kind) return e.tag;
  }
  return "?";
}

BoundingFamily parse_bounds_spec(const json& j, const std::string& base_dir,
                                 std::uint64_t n, std::uint32_t d) {
  if (!j.is_object()) throw ConfigError("bounds must be an object");
  if (j.contains("file")) {
    return read_bounds_file(resolve(base_dir, j["file"].get<std::string>()));
  }
  if (j.contains("lipschitz")) {
    return BoundingFamily::lipschitz(n, d, j["lipschitz"].get<double>());
  }
  if (j.contains("lower") || j.contains("upper")) {
    auto value = [&](const char* key, double fallback) {
      if (!j.contains(key)) return fallback;
      if (j[key].is_string()) {
        const std::string s = j[key].get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        throw ConfigError("bad bound value " + s);
      }
      return j[key].get<double>();
    };
    return BoundingFamily::uniform(
        d, StepBounds::constant(n, value("lower", -kInf), value("upper", kInf)));
  }
  if (j.contains("monotone")) return BoundingFamily::monotone(n, d);
  throw ConfigError("bounds need one of file, lipschitz, lower/upper, monotone");
}

std::shared_ptr<const Poset> parse_poset_spec(const json& j,
                                              const std::string& base_dir) {
  if (j.contains("file")) {
    return std::make_shared<const Poset>(
        read_poset_file(resolve(base_dir, j["file"].get<std::string>())));
  }
  if (j.contains("star_forest")) {
    const auto sf = j["star_forest"].get<std::vector<std::uint32_t>>();
    if (sf.size() != 2) throw ConfigError("star_forest needs [centers, leaves]");
    return std::make_shared<const Poset>(Poset::star_forest(sf[0], sf[1]));
  }
  if (j.contains("chain")) {
    return std::make_shared<const Poset>(Poset::chain(j["chain"].get<std::uint32_t>()));
  }
  if (j.contains("antichain")) {
    return std::make_shared<const Poset>(
        Poset::antichain(j["antichain"].get<std::uint32_t>()));
  }
  throw ConfigError("poset needs one of file, star_forest, chain, antichain");
}

Property tester_property(const TesterConfig& cfg) {
  switch (cfg.kind) {
    case TesterKind::MonotoneLine:
    case TesterKind::MidpointBaseline:
    case TesterKind::DistanceApprox:
      return Property::monotone_line();
    case TesterKind::BdpLine:
      if (!cfg.bounds) throw ConfigError("bdp-line needs bounds");
      return Property::bdp_line(cfg.bounds->dim(0));
    case TesterKind::ConvexLine: return Property::convex_line();
    case TesterKind::MonotoneGrid: return Property::monotone_grid();
    case TesterKind::BdpGrid:
      if (!cfg.bounds) throw ConfigError("bdp-grid needs bounds");
      return Property::bdp_grid(*cfg.bounds);
    case TesterKind::KRuns:
    case TesterKind::KRunsExtendable:
      return Property::k_runs(cfg.k);
    case TesterKind::LowDegree: return Property::low_degree(cfg.degree);
    case TesterKind::PosetMonotone:
      if (!cfg.poset) throw ConfigError("poset-monotone needs a poset");
      return Property::poset_monotone(cfg.poset);
  }
  throw ConfigError("unknown tester");
}

namespace {

double low_degree_bound(const TesterConfig& cfg, const POTSpec& pot) {
  const double bound = cfg.detection_bound
                           ? *cfg.detection_bound
                           : pot_detection_bound(pot, cfg.eps, cfg.alpha);
  if (!(bound > 0.0)) {
    throw PreconditionViolated(
        "low-degree POT has no positive detection bound at these parameters");
  }
  return bound;
}

UniformTesterSpec uniform_spec(const TesterConfig& cfg) {
  if (cfg.kind == TesterKind::PosetMonotone) {
    return poset_monotone_uniform_spec(cfg.poset);
  }
  return k_runs_uniform_spec(cfg.k);
}

}  // namespace

std::uint64_t tester_budget(const TesterConfig& cfg, const Domain& domain) {
  const std::uint64_t n = domain.side();
  switch (cfg.kind) {
    case TesterKind::MonotoneLine:
    case TesterKind::MidpointBaseline:
      return monotone_line_budget(n, cfg.eps, cfg.alpha);
    case TesterKind::BdpLine:
      if (cfg.bounds && cfg.bounds->is_monotone()) {
        return monotone_line_budget(n, cfg.eps, cfg.alpha);
      }
      return bdp_line_budget(n, cfg.eps, cfg.alpha);
    case TesterKind::ConvexLine: return convex_line_budget(n, cfg.eps, cfg.alpha);
    case TesterKind::MonotoneGrid:
      return monotone_hypergrid_budget(n, domain.dims(), cfg.eps, cfg.alpha);
    case TesterKind::BdpGrid:
      return bdp_hypergrid_budget(n, domain.dims(), cfg.eps, cfg.alpha);
    case TesterKind::KRuns: return k_runs_sample_size(cfg.k, cfg.eps);
    case TesterKind::KRunsExtendable:
    case TesterKind::PosetMonotone: {
      const std::uint64_t q = uniform_spec(cfg).q(domain.size(), cfg.eps);
      return extendable_repetitions(q) * extendable_draws(q, cfg.alpha);
    }
    case TesterKind::LowDegree: {
      const POTSpec pot = low_degree_pot(static_cast<std::int64_t>(n), cfg.degree);
      return pot_repetitions(low_degree_bound(cfg, pot)) * pot.q;
    }
    case TesterKind::DistanceApprox: return domain.size();
  }
  return 0;
}

Verdict run_tester(const TesterConfig& cfg, const ErasedFunction& f, Rng& rng) {
  QueryOracle oracle(f);
  switch (cfg.kind) {
    case TesterKind::MonotoneLine:
      return test_monotone_line(oracle, cfg.eps, cfg.alpha, rng);
    case TesterKind::MidpointBaseline:
      return test_monotone_line_midpoint_baseline(oracle, cfg.eps, cfg.alpha, rng);
    case TesterKind::BdpLine:
      return test_bdp_line(oracle, cfg.bounds->dim(0), cfg.eps, cfg.alpha, rng);
    case TesterKind::ConvexLine:
      return test_convex_line(oracle, cfg.eps, cfg.alpha, rng, cfg.anchor_policy);
    case TesterKind::MonotoneGrid:
      return test_monotone_hypergrid(oracle, cfg.eps, cfg.alpha, rng);
    case TesterKind::BdpGrid:
      return test_bdp_hypergrid(oracle, *cfg.bounds, cfg.eps, cfg.alpha, rng);
    case TesterKind::KRuns: return test_k_runs(oracle, cfg.k, cfg.eps, rng);
    case TesterKind::KRunsExtendable:
    case TesterKind::PosetMonotone:
      return erasure_resilient_extendable(uniform_spec(cfg), cfg.alpha, cfg.eps,
                                          oracle, rng);
    case TesterKind::LowDegree: {
      const POTSpec pot = low_degree_pot(
          static_cast<std::int64_t>(f.domain().side()), cfg.degree);
      return pot_amplify(pot, cfg.alpha, low_degree_bound(cfg, pot), oracle, rng);
    }
    case TesterKind::DistanceApprox:
      return tester_from_distance_approx(exact_monotone_line_approx(), cfg.fill,
                                         cfg.alpha, cfg.eps, oracle);
  }
  throw ConfigError("unknown tester");
}

InstanceSpec parse_instance_spec(const json& j, const std::string& base_dir) {
  check_keys(j,
             {"property", "n", "d", "member", "eps", "alpha", "erasure", "seed",
              "k", "degree", "bounds", "poset", "output"},
             "instance spec");
  InstanceSpec spec;
  try {
    spec.n = j.value("n", spec.n);
    spec.d = j.value("d", spec.d);
    spec.member = j.value("member", spec.member);
    spec.eps = j.value("eps", spec.eps);
    spec.alpha = j.value("alpha", spec.alpha);
    spec.erasure = erasure_strategy_from_tag(
        j.value("erasure", std::string(spec.alpha > 0 ? "random" : "none")));
    spec.seed = j.value("seed", spec.seed);
    Property& p = spec.property;
    p.kind = property_kind_from_tag(j.at("property").get<std::string>());
    p.k = j.value("k", 2U);
    p.degree = j.value("degree", 1U);
    if (j.contains("poset")) p.poset = parse_poset_spec(j["poset"], base_dir);
    if (j.contains("bounds")) {
      const std::uint32_t d = p.kind == PropertyKind::BdpLine ? 1 : spec.d;
      p.bounds = parse_bounds_spec(j["bounds"], base_dir, spec.n, d);
    }
    if ((p.kind == PropertyKind::BdpLine || p.kind == PropertyKind::BdpGrid) &&
        !p.bounds) {
      throw ConfigError("bdp properties need bounds");
    }
    if (p.kind == PropertyKind::PosetMonotone && !p.poset) {
      throw ConfigError("poset-monotone needs a poset");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad instance spec: ") + e.what());
  }
  return spec;
}

ExperimentConfig parse_experiment(const json& j, const std::string& base_dir) {
  check_keys(j,
             {"tester", "eps", "alpha", "k", "degree", "bounds", "poset",
              "anchor_policy", "detection_bound", "fill", "input", "instance",
              "trials", "seed", "output", "format", "name"},
             "experiment config");
  ExperimentConfig cfg;
  TesterConfig& t = cfg.tester;
  try {
    t.kind = tester_kind_from_tag(j.at("tester").get<std::string>());
    t.eps = j.value("eps", t.eps);
    t.alpha = j.value("alpha", t.alpha);
    t.k = j.value("k", t.k);
    t.degree = j.value("degree", t.degree);
    t.fill = j.value("fill", t.fill);
    if (j.contains("detection_bound")) {
      t.detection_bound = j["detection_bound"].get<double>();
    }
    const std::string policy = j.value("anchor_policy", std::string("merged"));
    if (policy == "merged") {
      t.anchor_policy = AnchorPolicy::Merged;
    } else if (policy == "incoming-only") {
      t.anchor_policy = AnchorPolicy::IncomingOnly;
    } else {
      throw ConfigError("anchor_policy must be merged or incoming-only");
    }
    if (j.contains("poset")) t.poset = parse_poset_spec(j["poset"], base_dir);

    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.format = j.value("format", cfg.format);
    if (j.contains("output")) {
      cfg.output = resolve(base_dir, j["output"].get<std::string>());
    }

    std::uint64_t n = 0;
    std::uint32_t d = 1;
    if (j.contains("input")) {
      cfg.input = resolve(base_dir, j["input"].get<std::string>());
      const ErasedFunction f = read_function_file(*cfg.input);
      n = f.domain().side();
      d = f.domain().dims();
    }
    if (j.contains("instance")) {
      const json& s = j["instance"];
      check_keys(s, {"n", "d", "member", "eps", "alpha", "erasure", "seed"},
                 "instance");
      InstanceSpec spec;
      spec.n = s.value("n", spec.n);
      spec.d = s.value("d", spec.d);
      spec.member = s.value("member", spec.member);
      spec.eps = s.value("eps", t.eps);
      spec.alpha = s.value("alpha", t.alpha);
      spec.erasure = erasure_strategy_from_tag(
          s.value("erasure", std::string(spec.alpha > 0 ? "random" : "none")));
      spec.seed = s.value("seed", splitmix64(cfg.seed ^ 0x5eedULL));
      n = spec.n;
      d = spec.d;
      cfg.instance = spec;
    }
    if (j.contains("bounds")) {
      if (n == 0) throw ConfigError("bounds need an input or instance domain");
      t.bounds = parse_bounds_spec(j["bounds"], base_dir, n, d);
    }
    if (cfg.instance) cfg.instance->property = tester_property(t);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

std::vector<ExperimentConfig> parse_experiments(const json& j,
                                                const std::string& base_dir) {
  std::vector<ExperimentConfig> out;
  if (j.is_object() && j.contains("experiments")) {
    for (const auto& e : j["experiments"]) out.push_back(parse_experiment(e, base_dir));
  } else {
    out.push_back(parse_experiment(j, base_dir));
  }
  if (out.empty()) throw ConfigError("config holds no experiments");
  return out;
}

std::vector<ExperimentConfig> read_experiments_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_experiments(j, std::filesystem::path(path).parent_path().string());
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (!cfg.input && !cfg.instance) {
    throw ConfigError("config needs an input file or an instance spec");
  }
  if (cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError("format must be csv or json");
  }
  const TesterConfig& t = cfg.tester;
  if (!(t.eps > 0.0 && t.eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  if (!(t.alpha >= 0.0 && t.alpha < 1.0)) {
    throw ConfigError("alpha must lie in [0, 1)");
  }
  const bool needs_line = t.kind != TesterKind::MonotoneGrid &&
                          t.kind != TesterKind::BdpGrid;
  if (cfg.instance && needs_line && cfg.instance->d != 1 &&
      t.kind != TesterKind::PosetMonotone) {
    throw ConfigError(std::string(to_string(t.kind)) + " needs a line domain");
  }
  if ((t.kind == TesterKind::BdpLine || t.kind == TesterKind::BdpGrid) &&
      !t.bounds) {
    throw ConfigError(std::string(to_string(t.kind)) + " needs bounds");
  }
  if (t.kind == TesterKind::PosetMonotone && !t.poset) {
    throw ConfigError("poset-monotone needs a poset");
  }
}

ErasedFunction load_instance(const ExperimentConfig& cfg) {
  ErasedFunction f = cfg.input ? read_function_file(*cfg.input)
                               : generate_instance(*cfg.instance).f;
  const TesterConfig& t = cfg.tester;
  const bool line_only = t.kind != TesterKind::MonotoneGrid &&
                         t.kind != TesterKind::BdpGrid;
  if (line_only && !f.domain().is_line()) {
    throw ConfigError(std::string(to_string(t.kind)) + " needs a line domain");
  }
  if (t.bounds && (t.bounds->dims() != f.domain().dims() ||
                   t.bounds->side() != f.domain().side())) {
    throw ConfigError("bounds do not match the instance domain");
  }
  if (t.poset && t.poset->size() != f.domain().size()) {
    throw ConfigError("poset size does not match the instance domain");
  }
  if (t.kind == TesterKind::KRuns || t.kind == TesterKind::KRunsExtendable) {
    return coerce_kind(f, ValueKind::Bit);
  }
  if (t.kind == TesterKind::LowDegree) {
    return coerce_kind(f, ValueKind::Field,
                       f.kind() == ValueKind::Field
                           ? f.modulus()
                           : static_cast<std::int64_t>(f.domain().side()));
  }
  return f;
}

bool operator==(const TrialSummary& a, const TrialSummary& b) {
  return a.tester == b.tester && a.n == b.n && a.d == b.d && a.eps == b.eps &&
         a.alpha == b.alpha && a.trials == b.trials && a.seed == b.seed &&
         a.rejections == b.rejections && a.accept_rate == b.accept_rate &&
         a.ci_low == b.ci_low && a.ci_high == b.ci_high &&
         a.ci_flagged == b.ci_flagged && a.mean_q == b.mean_q &&
         a.max_q == b.max_q && a.stddev_q == b.stddev_q &&
         a.mean_sampling == b.mean_sampling &&
         a.mean_walking == b.mean_walking && a.budget_q == b.budget_q;
}

std::pair<double, double> confidence_interval_99(double p, std::uint64_t n) {
  const double half = kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

TrialSummary summarize(const ExperimentConfig& cfg, const ErasedFunction& f,
                       const std::vector<TrialRecord>& records) {
  TrialSummary s;
  s.tester = to_string(cfg.tester.kind);
  s.n = f.domain().side();
  s.d = f.domain().dims();
  s.eps = cfg.tester.eps;
  s.alpha = cfg.tester.alpha;
  s.trials = records.size();
  s.seed = cfg.seed;
  s.budget_q = tester_budget(cfg.tester, f.domain());
  double sum = 0.0;
  double sum_sq = 0.0;
  double walking = 0.0;
  for (const TrialRecord& r : records) {
    s.rejections += r.rejected ? 1 : 0;
    sum += static_cast<double>(r.queries);
    sum_sq += static_cast<double>(r.queries) * static_cast<double>(r.queries);
    walking += static_cast<double>(r.walking);
    s.max_q = std::max(s.max_q, r.queries);
  }
  const auto t = static_cast<double>(s.trials);
  s.accept_rate = static_cast<double>(s.trials - s.rejections) / t;
  std::tie(s.ci_low, s.ci_high) = confidence_interval_99(s.accept_rate, s.trials);
  s.ci_flagged = s.trials < 100;
  s.mean_q = sum / t;
  s.stddev_q = std::sqrt(std::max(0.0, sum_sq / t - s.mean_q * s.mean_q));
  s.mean_walking = walking / t;
  s.mean_sampling = s.mean_q - s.mean_walking;
  return s;
}

namespace {

// One trial; returns an error message instead of throwing so that the
// parallel loop never unwinds through OpenMP.
std::string run_trial(const ExperimentConfig& cfg, const Property& property,
                      std::uint64_t budget, const ErasedFunction& f,
                      std::uint64_t trial, TrialRecord& out) {
  try {
    Rng rng = Rng(cfg.seed).split(trial);
    const Verdict v = run_tester(cfg.tester, f, rng);
    out.rejected = v.rejected();
    out.queries = v.queries_used;
    out.walking = v.walking_queries;
    if (v.queries_used > budget) {
      return "trial " + std::to_string(trial) + " used " +
             std::to_string(v.queries_used) + " queries, formula allows " +
             std::to_string(budget);
    }
    if (v.rejected() && v.certificate.kind != Certificate::Kind::None &&
        !validate_certificate(f, property, v.certificate)) {
      return "trial " + std::to_string(trial) +
             " rejected with a certificate that does not re-validate";
    }
  } catch (const std::exception& e) {
    return std::string("trial ") + std::to_string(trial) + ": " + e.what();
  }
  return {};
}

TrialSummary run_impl(const ExperimentConfig& cfg, const ErasedFunction& f,
                      bool parallel) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();
  const Property property = tester_property(cfg.tester);
  const std::uint64_t budget = tester_budget(cfg.tester, f.domain());
  std::vector<TrialRecord> records(cfg.trials);
  std::vector<std::string> errors(cfg.trials);
  const auto trials = static_cast<std::int64_t>(cfg.trials);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(configured_threads())
    for (std::int64_t t = 0; t < trials; ++t) {
      const auto u = static_cast<std::uint64_t>(t);
      errors[u] = run_trial(cfg, property, budget, f, u, records[u]);
    }
  } else {
    for (std::int64_t t = 0; t < trials; ++t) {
      const auto u = static_cast<std::uint64_t>(t);
      errors[u] = run_trial(cfg, property, budget, f, u, records[u]);
    }
  }
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    if (errors[t].empty()) continue;
    if (records[t].queries > budget) throw BudgetViolation(errors[t]);
    throw Error(errors[t]);
  }
  TrialSummary s = summarize(cfg, f, records);
  s.wall_seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return s;
}

}  // namespace

TrialSummary run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  return run_impl(cfg, load_instance(cfg), true);
}

TrialSummary run_experiment(const ExperimentConfig& cfg,
                            const ErasedFunction& f) {
  return run_impl(cfg, f, true);
}

TrialSummary run_experiment_serial(const ExperimentConfig& cfg,
                                   const ErasedFunction& f) {
  return run_impl(cfg, f, false);
}

json to_json(const TrialSummary& s) {
  return {{"tester", s.tester},
          {"n", s.n},
          {"d", s.d},
          {"eps", s.eps},
          {"alpha", s.alpha},
          {"trials", s.trials},
          {"seed", s.seed},
          {"rejections", s.rejections},
          {"accept_rate", s.accept_rate},
          {"ci_low", s.ci_low},
          {"ci_high", s.ci_high},
          {"ci_flagged", s.ci_flagged},
          {"mean_q", s.mean_q},
          {"max_q", s.max_q},
          {"stddev_q", s.stddev_q},
          {"mean_sampling", s.mean_sampling},
          {"mean_walking", s.mean_walking},
          {"budget_Q", s.budget_q},
          {"wall_seconds", s.wall_seconds}};
}

TrialSummary trial_summary_from_json(const json& j) {
  TrialSummary s;
  s.tester = j.at("tester").get<std::string>();
  s.n = j.at("n").get<std::uint64_t>();
  s.d = j.at("d").get<std::uint32_t>();
  s.eps = j.at("eps").get<double>();
  s.alpha = j.at("alpha").get<double>();
  s.trials = j.at("trials").get<std::uint64_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.rejections = j.at("rejections").get<std::uint64_t>();
  s.accept_rate = j.at("accept_rate").get<double>();
  s.ci_low = j.at("ci_low").get<double>();
  s.ci_high = j.at("ci_high").get<double>();
  s.ci_flagged = j.at("ci_flagged").get<bool>();
  s.mean_q = j.at("mean_q").get<double>();
  s.max_q = j.at("max_q").get<std::uint64_t>();
  s.stddev_q = j.at("stddev_q").get<double>();
  s.mean_sampling = j.at("mean_sampling").get<double>();
  s.mean_walking = j.at("mean_walking").get<double>();
  s.budget_q = j.at("budget_Q").get<std::uint64_t>();
  s.wall_seconds = j.value("wall_seconds", 0.0);
  return s;
}

std::string csv_header() {
  return "tester,n,d,eps,alpha,trials,seed,accept_rate,ci_low,ci_high,mean_q,"
         "max_q,budget_Q";
}

std::string csv_row(const TrialSummary& s) {
  return s.tester + ',' + std::to_string(s.n) + ',' + std::to_string(s.d) +
         ',' + fmt(s.eps) + ',' + fmt(s.alpha) + ',' +
         std::to_string(s.trials) + ',' + std::to_string(s.seed) + ',' +
         fmt(s.accept_rate) + ',' + fmt(s.ci_low) + ',' + fmt(s.ci_high) +
         ',' + fmt(s.mean_q) + ',' + std::to_string(s.max_q) + ',' +
         std::to_string(s.budget_q);
}

void emit_report(const std::vector<TrialSummary>& summaries,
                 const std::string& format, std::ostream& out) {
  if (summaries.empty()) throw ConfigError("no experiments to report");
  if (format == "csv") {
    out << csv_header() << '\n';
    for (const auto& s : summaries) out << csv_row(s) << '\n';
  } else if (format == "json") {
    json arr = json::array();
    for (const auto& s : summaries) arr.push_back(to_json(s));
    out << arr.dump(2) << '\n';
  } else {
    throw ConfigError("format must be csv or json");
  }
}

void emit_report(const std::vector<TrialSummary>& summaries,
                 const std::string& format, const std::string& path) {
  if (summaries.empty()) throw ConfigError("no experiments to report");
  if (format != "csv" && format != "json") {
    throw ConfigError("format must be csv or json");
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  emit_report(summaries, format, out);
  if (!out) throw Error("write failed for " + path);
}

int configured_threads() {
  if (const char* env = std::getenv("ERT_NUM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

}  // namespace ert
