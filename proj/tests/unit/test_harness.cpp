#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ert/errors.hpp"
#include "ert/harness.hpp"
#include "ert/io.hpp"

using namespace ert;
using nlohmann::json;

namespace {

ExperimentConfig config(const json& j) { return parse_experiment(j); }

std::string csv_of(const std::vector<TrialSummary>& s) {
  std::ostringstream out;
  emit_report(s, "csv", out);
  return out.str();
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "ert_harness_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Harness, MemberNeverRejected) {
  const auto cfg = config({{"tester", "monotone-line"},
                           {"eps", 0.25},
                           {"alpha", 0.2},
                           {"trials", 200},
                           {"seed", 3},
                           {"instance", {{"n", 64}, {"member", true}}}});
  const TrialSummary s = run_experiment(cfg);
  EXPECT_EQ(s.rejections, 0U);
  EXPECT_EQ(s.accept_rate, 1.0);
  EXPECT_LE(s.max_q, s.budget_q);
  EXPECT_FALSE(s.ci_flagged);
}

TEST(Harness, DecreasingRejectedOften) {
  const auto cfg = config({{"tester", "monotone-line"},
                           {"eps", 0.25},
                           {"trials", 500},
                           {"instance", {{"n", 64}}}});
  const TrialSummary s = run_experiment(cfg);
  EXPECT_GE(s.rejections, 300U);
  EXPECT_LE(s.ci_low, s.accept_rate);
  EXPECT_GE(s.ci_high, s.accept_rate);
}

TEST(Harness, SerialAndParallelAgree) {
  for (const json& j :
       {json{{"tester", "convex-line"}, {"eps", 0.25}, {"alpha", 0.2},
             {"trials", 300}, {"seed", 11}, {"instance", {{"n", 128}}}},
        json{{"tester", "bdp-grid"}, {"eps", 0.2}, {"trials", 150},
             {"bounds", {{"lipschitz", 1}}},
             {"instance", {{"n", 8}, {"d", 2}}}},
        json{{"tester", "k-runs-extendable"}, {"eps", 0.2}, {"alpha", 0.1},
             {"k", 2}, {"trials", 250}, {"instance", {{"n", 256}}}}}) {
    const auto cfg = config(j);
    const ErasedFunction f = load_instance(cfg);
    const TrialSummary par = run_experiment(cfg, f);
    const TrialSummary ser = run_experiment_serial(cfg, f);
    EXPECT_EQ(par, ser);
    EXPECT_EQ(csv_of({par}), csv_of({ser}));
  }
}

TEST(Harness, SameSeedSameBytesAcrossThreadCounts) {
  const auto cfg = config({{"tester", "monotone-line"},
                           {"eps", 0.1},
                           {"alpha", 0.3},
                           {"trials", 400},
                           {"seed", 21},
                           {"instance", {{"n", 512}}}});
  setenv("ERT_NUM_THREADS", "1", 1);
  EXPECT_EQ(configured_threads(), 1);
  const std::string one = csv_of({run_experiment(cfg)});
  setenv("ERT_NUM_THREADS", "4", 1);
  EXPECT_EQ(configured_threads(), 4);
  const std::string four = csv_of({run_experiment(cfg)});
  unsetenv("ERT_NUM_THREADS");
  EXPECT_EQ(one, four);
  EXPECT_EQ(one, csv_of({run_experiment(cfg)}));
}

TEST(Harness, DifferentSeedsDiffer) {
  auto base = json{{"tester", "monotone-line"}, {"eps", 0.1}, {"trials", 300},
                   {"instance", {{"n", 512}, {"seed", 5}}}};
  base["seed"] = 1;
  const auto a = run_experiment(config(base));
  base["seed"] = 2;
  const auto b = run_experiment(config(base));
  EXPECT_NE(a.mean_q, b.mean_q);
}

TEST(Harness, ConfigErrors) {
  EXPECT_THROW(config({{"tester", "no-such"}, {"instance", {{"n", 8}}}}),
               ConfigError);
  EXPECT_THROW(config({{"tester", "monotone-line"}, {"trials", 0},
                       {"instance", {{"n", 8}}}}),
               ConfigError);
  EXPECT_THROW(config({{"tester", "monotone-line"}}), ConfigError);
  EXPECT_THROW(config({{"tester", "monotone-line"}, {"bogus", 1},
                       {"instance", {{"n", 8}}}}),
               ConfigError);
  EXPECT_THROW(config({{"tester", "monotone-line"}, {"eps", 1.5},
                       {"instance", {{"n", 8}}}}),
               ConfigError);
  EXPECT_THROW(config({{"tester", "bdp-line"}, {"instance", {{"n", 8}}}}),
               ConfigError);
  EXPECT_THROW(config({{"tester", "monotone-line"},
                       {"instance", {{"n", 8}, {"d", 2}}}}),
               ConfigError);
  EXPECT_THROW(config({{"tester", "monotone-line"}, {"format", "xml"},
                       {"instance", {{"n", 8}}}}),
               ConfigError);
}

TEST(Harness, GridPreconditionSurfacesAsError) {
  const auto cfg = config({{"tester", "monotone-grid"}, {"eps", 0.2},
                           {"alpha", 0.1}, {"trials", 10},
                           {"instance", {{"n", 8}, {"d", 2}, {"alpha", 0.0}}}});
  EXPECT_THROW(run_experiment(cfg), Error);
}

TEST(Harness, ConfidenceInterval) {
  const auto [lo, hi] = confidence_interval_99(0.5, 100);
  EXPECT_NEAR(lo, 0.5 - 2.5758293035489004 * 0.05, 1e-12);
  EXPECT_NEAR(hi, 0.5 + 2.5758293035489004 * 0.05, 1e-12);
  const auto [lo1, hi1] = confidence_interval_99(1.0, 200);
  EXPECT_EQ(lo1, 1.0);
  EXPECT_EQ(hi1, 1.0);
  const auto cfg = config({{"tester", "monotone-line"}, {"trials", 20},
                           {"instance", {{"n", 16}}}});
  EXPECT_TRUE(run_experiment(cfg).ci_flagged);
}

TEST(Reports, CsvRowCountAndColumns) {
  const auto exps = parse_experiments(
      {{"experiments",
        {{{"tester", "monotone-line"}, {"trials", 20}, {"instance", {{"n", 16}}}},
         {{"tester", "convex-line"}, {"trials", 20}, {"instance", {{"n", 16}}}},
         {{"tester", "k-runs"}, {"k", 2}, {"eps", 0.4}, {"trials", 20},
          {"instance", {{"n", 64}}}}}}});
  std::vector<TrialSummary> summaries;
  for (const auto& e : exps) summaries.push_back(run_experiment(e));
  const std::string csv = csv_of(summaries);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "tester,n,d,eps,alpha,trials,seed,accept_rate,ci_low,ci_high,"
            "mean_q,max_q,budget_Q");
  const std::string row = csv_row(summaries[0]);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 12);
  EXPECT_EQ(row.rfind("monotone-line,16,1,0.250000,", 0), 0U);
}

TEST(Reports, EmptySummaryGuardCreatesNoFile) {
  const auto path = temp_dir() / "empty.csv";
  std::filesystem::remove(path);
  EXPECT_THROW(emit_report({}, "csv", path.string()), ConfigError);
  EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(Reports, JsonRoundTrip) {
  const auto cfg = config({{"tester", "convex-line"}, {"alpha", 0.2},
                           {"trials", 50}, {"instance", {{"n", 32}}}});
  const TrialSummary s = run_experiment(cfg);
  const TrialSummary back = trial_summary_from_json(json::parse(to_json(s).dump()));
  EXPECT_EQ(back, s);
  EXPECT_EQ(back.mean_walking, s.mean_walking);
}

TEST(Reports, FileOutputMatchesStream) {
  const auto cfg = config({{"tester", "monotone-line"}, {"trials", 30},
                           {"instance", {{"n", 32}}}});
  const auto s = run_experiment(cfg);
  const auto path = temp_dir() / "out.csv";
  emit_report({s}, "csv", path.string());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), csv_of({s}));
}

TEST(Testers, EveryKindRunsWithinBudget) {
  for (const json& j :
       {json{{"tester", "monotone-line"}, {"instance", {{"n", 64}}}},
        json{{"tester", "bdp-line"}, {"bounds", {{"lipschitz", 1}}},
             {"instance", {{"n", 64}}}},
        json{{"tester", "convex-line"}, {"instance", {{"n", 64}}}},
        json{{"tester", "monotone-grid"}, {"eps", 0.2}, {"instance", {{"n", 8}, {"d", 2}}}},
        json{{"tester", "bdp-grid"}, {"eps", 0.2}, {"bounds", {{"lipschitz", 1}}},
             {"instance", {{"n", 8}, {"d", 2}}}},
        json{{"tester", "k-runs"}, {"eps", 0.2}, {"instance", {{"n", 256}}}},
        json{{"tester", "k-runs-extendable"}, {"eps", 0.2}, {"alpha", 0.2},
             {"instance", {{"n", 256}}}},
        json{{"tester", "low-degree"}, {"eps", 0.5}, {"instance", {{"n", 17}}}},
        json{{"tester", "poset-monotone"}, {"poset", {{"star_forest", {16, 3}}}},
             {"instance", {{"n", 64}}}},
        json{{"tester", "distance-approx"}, {"eps", 0.5}, {"alpha", 0.1},
             {"instance", {{"n", 20}}}},
        json{{"tester", "midpoint-baseline"}, {"instance", {{"n", 64}}}}}) {
    json jj = j;
    jj["trials"] = 60;
    const auto cfg = config(jj);
    const auto s = run_experiment(cfg);
    EXPECT_LE(s.max_q, s.budget_q) << j.dump();
    EXPECT_GT(s.rejections, 0U) << j.dump();
  }
}
