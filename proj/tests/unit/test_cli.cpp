#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

const fs::path& work() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "ert_cli_test";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, std::string* out = nullptr) {
  const fs::path capture = work() / "stdout.txt";
  const std::string cmd = std::string(ERT_CLI_PATH) + " " + args + " > " +
                          capture.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(capture);
    std::stringstream buf;
    buf << in.rdbuf();
    *out = buf.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST(Cli, TestExitCodes) {
  write(work() / "mono.txt", "domain line 8\n0 1 _ 3 4 4 _ 9\n");
  write(work() / "dec.txt", "domain line 8\n8 7 6 5 4 3 2 1\n");
  std::string out;
  EXPECT_EQ(run("test --tester monotone-line --input " + (work() / "mono.txt").string() +
                    " --eps 0.5 --alpha 0.25 --seed 3",
                &out),
            0);
  EXPECT_NE(out.find("\"outcome\""), std::string::npos);
  EXPECT_EQ(run("test --tester monotone-line --input " + (work() / "dec.txt").string() +
                " --eps 0.5 --seed 3"),
            1);
  EXPECT_EQ(run("test --tester monotone-line --input /nonexistent --eps 0.5"), 2);
  EXPECT_EQ(run("test --tester monotone-grid --input " + (work() / "dec.txt").string() +
                " --eps 0.5 --alpha 0.3"),
            2);
}

TEST(Cli, GenerateThenDistance) {
  write(work() / "spec.json",
        R"({"property": "convex-line", "n": 64, "alpha": 0.2, "seed": 4, "output": ")" +
            (work() / "gen.txt").string() + "\"}");
  ASSERT_EQ(run("generate --spec " + (work() / "spec.json").string()), 0);
  ASSERT_TRUE(fs::exists(work() / "gen.txt.cert.json"));
  std::string out;
  ASSERT_EQ(run("distance --property convex-line --input " + (work() / "gen.txt").string(),
                &out),
            0);
  EXPECT_NE(out.find("\"relative\""), std::string::npos);
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 1);
}

TEST(Cli, ExperimentIsByteStable) {
  write(work() / "exp.json",
        R"({"experiments": [{"tester": "monotone-line", "eps": 0.25, "trials": 100, "seed": 9,
             "instance": {"n": 64}},
            {"tester": "convex-line", "alpha": 0.2, "trials": 100, "seed": 9,
             "instance": {"n": 64}}]})");
  const std::string cfg = (work() / "exp.json").string();
  ASSERT_EQ(run("experiment --config " + cfg + " --output " + (work() / "a.csv").string()), 0);
  ASSERT_EQ(run("experiment --config " + cfg + " --output " + (work() / "b.csv").string()), 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream b;
    b << in.rdbuf();
    return b.str();
  };
  const std::string a = slurp(work() / "a.csv");
  EXPECT_EQ(a, slurp(work() / "b.csv"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 3);
}

TEST(Cli, AdversaryStrategies) {
  write(work() / "ramp.txt", "domain line 15\n1 2 3 4 5 6 7 8 9 10 11 12 13 14 15\n");
  const std::string out = (work() / "piv.txt").string();
  ASSERT_EQ(run("adversary --strategy pivots --input " + (work() / "ramp.txt").string() +
                " --alpha 0.4667 --output " + out),
            0);
  std::ifstream in(out);
  std::stringstream b;
  b << in.rdbuf();
  const std::string text = b.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '_'), 7);
  EXPECT_EQ(run("adversary --strategy middle-layer --d 4 --output " +
                (work() / "ml.txt").string()),
            0);
  EXPECT_EQ(run("adversary --strategy nope --output x"), 2);
}
