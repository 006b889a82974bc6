// Command-line front end: test, experiment, generate, distance, adversary.
// Exit codes: 0 accept or success, 1 reject, 2 error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ert/adversary.hpp"
#include "ert/distance_oracles.hpp"
#include "ert/errors.hpp"
#include "ert/harness.hpp"
#include "ert/io.hpp"

namespace {

using nlohmann::json;
using namespace ert;

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitError = 2;

struct PropertyFlags {
  std::string bounds_file;
  std::optional<double> lipschitz;
  std::uint32_t k = 2;
  std::uint32_t degree = 1;
  std::string poset_file;

  void add_to(CLI::App* app) {
    app->add_option("--bounds", bounds_file, "bounds file");
    app->add_option("--lipschitz", lipschitz, "use c-Lipschitz bounds");
    app->add_option("--k", k, "number of runs for k-runs");
    app->add_option("--degree", degree, "polynomial degree for low-degree");
    app->add_option("--poset", poset_file, "poset file");
  }

  std::optional<BoundingFamily> bounds(const Domain& domain) const {
    if (!bounds_file.empty()) return read_bounds_file(bounds_file);
    if (lipschitz) {
      return BoundingFamily::lipschitz(domain.side(), domain.dims(), *lipschitz);
    }
    return std::nullopt;
  }

  std::shared_ptr<const Poset> poset() const {
    if (poset_file.empty()) return nullptr;
    return std::make_shared<const Poset>(read_poset_file(poset_file));
  }
};

int cmd_test(const std::string& tag, const std::string& input, double eps,
             double alpha, std::uint64_t seed, const PropertyFlags& flags,
             const std::string& policy, std::optional<double> detection,
             double fill) {
  ExperimentConfig cfg;
  cfg.input = input;
  cfg.trials = 1;
  cfg.seed = seed;
  TesterConfig& t = cfg.tester;
  t.kind = tester_kind_from_tag(tag);
  t.eps = eps;
  t.alpha = alpha;
  t.k = flags.k;
  t.degree = flags.degree;
  t.detection_bound = detection;
  t.fill = fill;
  t.poset = flags.poset();
  if (policy == "incoming-only") {
    t.anchor_policy = AnchorPolicy::IncomingOnly;
  } else if (policy != "merged") {
    throw ConfigError("anchor policy must be merged or incoming-only");
  }
  const ErasedFunction raw = read_function_file(input);
  t.bounds = flags.bounds(raw.domain());
  validate_config(cfg);
  const ErasedFunction f = load_instance(cfg);
  Rng rng(seed);
  const Verdict v = run_tester(t, f, rng);
  json out = to_json(v);
  out["tester"] = tag;
  out["budget_Q"] = tester_budget(t, f.domain());
  std::cout << out.dump() << '\n';
  return v.rejected() ? kExitReject : kExitAccept;
}

int cmd_experiment(const std::string& config_path,
                   const std::string& output_override) {
  const auto configs = read_experiments_file(config_path);
  // Rows grouped by destination, in config order.
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::string, std::vector<TrialSummary>>> groups;
  for (const auto& cfg : configs) {
    const std::string dest =
        !output_override.empty() ? output_override : cfg.output.value_or("-");
    if (!groups.count(dest)) {
      order.push_back(dest);
      groups[dest].first = cfg.format;
    }
    groups[dest].second.push_back(run_experiment(cfg));
  }
  for (const auto& dest : order) {
    const auto& [format, rows] = groups[dest];
    if (dest == "-") {
      emit_report(rows, format, std::cout);
    } else {
      emit_report(rows, format, dest);
    }
  }
  return kExitAccept;
}

int cmd_generate(const std::string& spec_path) {
  std::ifstream in(spec_path);
  if (!in) throw ConfigError("cannot open spec " + spec_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("spec is not valid JSON: ") + e.what());
  }
  const std::string base = std::filesystem::path(spec_path).parent_path().string();
  if (!j.contains("output")) throw ConfigError("generate spec needs an output path");
  std::filesystem::path output(j["output"].get<std::string>());
  if (!base.empty() && output.is_relative()) output = std::filesystem::path(base) / output;
  const InstanceSpec spec = parse_instance_spec(j, base);
  const Instance inst = generate_instance(spec);
  std::string why;
  const bool certified = validate_report(inst.f, spec.property, inst.report, &why);
  if (!certified) throw GenerationFailed("report does not re-certify: " + why);
  write_function_file(output.string(), inst.f);
  json cert;
  cert["function_file"] = output.filename().string();
  cert["spec"] = j;
  cert["declared_alpha"] = inst.f.declared_alpha().str();
  cert["erased_fraction"] = erased_fraction(inst.f).str();
  cert["member"] = spec.member;
  cert["report"] = to_json(inst.report);
  cert["certified"] = certified;
  const std::string sidecar = output.string() + ".cert.json";
  std::ofstream out(sidecar);
  if (!out) throw Error("cannot write " + sidecar);
  out << cert.dump(2) << '\n';
  std::cout << json{{"function_file", output.string()}, {"certificate", sidecar},
                    {"relative", inst.report.relative.str()}}
                   .dump()
            << '\n';
  return kExitAccept;
}

int cmd_distance(const std::string& tag, const std::vector<std::string>& inputs,
                 const PropertyFlags& flags, const std::string& method) {
  for (const auto& input : inputs) {
    ErasedFunction f = read_function_file(input);
    Property p(property_kind_from_tag(tag));
    p.k = flags.k;
    p.degree = flags.degree;
    p.poset = flags.poset();
    p.bounds = flags.bounds(f.domain());
    if (p.kind == PropertyKind::KRuns) f = coerce_kind(f, ValueKind::Bit);
    if (p.kind == PropertyKind::LowDegree && f.kind() != ValueKind::Field) {
      f = coerce_kind(f, ValueKind::Field,
                      static_cast<std::int64_t>(f.domain().side()));
    }
    DistanceReport r;
    if (method == "small") {
      if (p.kind == PropertyKind::MonotoneGrid) {
        r = distance_to_monotone_grid_small(f);
      } else if (p.kind == PropertyKind::BdpGrid && p.bounds) {
        r = distance_to_bdp_grid_small(f, *p.bounds);
      } else {
        throw ConfigError("--method small applies to monotone-grid and bdp-grid");
      }
    } else if (method == "exact") {
      r = distance(f, p);
    } else {
      throw ConfigError("--method must be exact or small");
    }
    json out = to_json(r);
    out["input"] = input;
    std::cout << out.dump() << '\n';
  }
  return kExitAccept;
}

int cmd_adversary(const std::string& strategy, const std::string& input,
                  double alpha, std::uint64_t seed, std::uint32_t d,
                  const std::string& output) {
  std::optional<ErasedFunction> f;
  if (strategy == "middle-layer") {
    f = hypercube_middle_layer(d);
  } else {
    if (input.empty()) throw ConfigError(strategy + " needs --input");
    const ErasedFunction base = read_function_file(input);
    Rng rng(seed);
    if (strategy == "random") {
      f = erase_random(base, alpha, rng);
    } else if (strategy == "pivots") {
      f = erase_binary_search_pivots(base, alpha);
    } else {
      throw ConfigError("unknown strategy: " + strategy);
    }
  }
  if (output.empty() || output == "-") {
    write_function(std::cout, *f);
  } else {
    write_function_file(output, *f);
  }
  return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Erasure-resilient property testers"};
  app.require_subcommand(1);

  std::string tester, input, policy = "merged";
  double eps = 0.25, alpha = 0.0, fill = 0.0;
  std::uint64_t seed = 1;
  std::optional<double> detection;
  PropertyFlags test_flags;
  auto* test = app.add_subcommand("test", "run one tester on a function file");
  test->add_option("--tester", tester, "tester tag")->required();
  test->add_option("--input", input, "function file")->required();
  test->add_option("--eps", eps, "proximity parameter");
  test->add_option("--alpha", alpha, "erasure bound");
  test->add_option("--seed", seed, "master seed");
  test->add_option("--anchor-policy", policy, "merged or incoming-only");
  test->add_option("--detection-bound", detection, "low-degree detection bound");
  test->add_option("--fill", fill, "fill value for distance-approx");
  test_flags.add_to(test);

  std::string config, exp_output;
  auto* experiment = app.add_subcommand("experiment", "run experiment configs");
  experiment->add_option("--config", config, "JSON config")->required();
  experiment->add_option("--output", exp_output, "override the output path");

  std::string spec;
  auto* generate = app.add_subcommand("generate", "generate a certified instance");
  generate->add_option("--spec", spec, "JSON instance spec")->required();

  std::string property, method = "exact";
  std::vector<std::string> dist_inputs;
  PropertyFlags dist_flags;
  auto* dist = app.add_subcommand("distance", "exact distance of f|N");
  dist->add_option("--property", property, "property tag")->required();
  dist->add_option("--input", dist_inputs, "function file(s)")->required();
  dist->add_option("--method", method, "exact or small");
  dist_flags.add_to(dist);

  std::string strategy, adv_input, adv_output;
  double adv_alpha = 0.1;
  std::uint64_t adv_seed = 1;
  std::uint32_t adv_d = 4;
  auto* adv = app.add_subcommand("adversary", "apply an erasure strategy");
  adv->add_option("--strategy", strategy, "random, pivots or middle-layer")
      ->required();
  adv->add_option("--input", adv_input, "total function file");
  adv->add_option("--alpha", adv_alpha, "erasure fraction");
  adv->add_option("--seed", adv_seed, "seed for random erasure");
  adv->add_option("--d", adv_d, "dimension for middle-layer");
  adv->add_option("--output", adv_output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitAccept : kExitError;
  }

  try {
    if (*test) {
      return cmd_test(tester, input, eps, alpha, seed, test_flags, policy,
                      detection, fill);
    }
    if (*experiment) return cmd_experiment(config, exp_output);
    if (*generate) return cmd_generate(spec);
    if (*dist) return cmd_distance(property, dist_inputs, dist_flags, method);
    if (*adv) {
      return cmd_adversary(strategy, adv_input, adv_alpha, adv_seed, adv_d,
                           adv_output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
