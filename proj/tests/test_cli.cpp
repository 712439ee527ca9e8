#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  static fs::path dir() {
    static const fs::path d = [] {
      fs::path p = fs::path(::testing::TempDir()) / "whitney_cli_test";
      fs::create_directories(p);
      return p;
    }();
    return d;
  }

  static std::string file(const std::string& name, const std::string& body) {
    const fs::path p = dir() / name;
    std::ofstream(p) << body;
    return p.string();
  }

  static Outcome run(const std::string& args) {
    const fs::path out = dir() / "stdout.txt";
    const std::string cmd = std::string("\"") + WHITNEY_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
  }

  static std::string origin() { return file("origin.json", R"({"dim":1,"parts":[{"type":"point","coords":[0]}]})"); }
  static std::string identity() { return file("id.json", R"({"builtin":"poly","coeffs":[0,1],"order":1})"); }
};

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_F(Cli, DecomposeExample) {
  const Outcome r = run("decompose --set " + origin() + " --region 1/4:4 --levels -2:2");
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["count"], 4);
  std::set<long> levels;
  for (const auto& q : doc["cubes"]) {
    levels.insert(q["level"].get<long>());
    EXPECT_EQ(q["corner"], json::array({1}));
    EXPECT_TRUE(q["c3"].get<bool>());
  }
  EXPECT_EQ(levels, (std::set<long>{-1, 0, 1, 2}));
}

TEST_F(Cli, DecomposeEmptyLevelRange) {
  const Outcome r = run("decompose --set " + origin() + " --region 1:2 --levels 3:8");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["count"], 0);
}

TEST_F(Cli, EvalOffSet) {
  const Outcome r = run("eval --set " + origin() + " --jet " + identity() + " --point 7/4 --deriv 1");
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["value"]["decimal"], "1");
  EXPECT_EQ(doc["branch"], "outsideF");
  EXPECT_EQ(doc["precision"], 16);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("eval --set " + origin() + " --jet " + identity() + " --point 1 --deriv 2").code, 2);
  EXPECT_EQ(run("eval --set " + file("empty.json", R"({"dim":1,"parts":[]})") + " --jet " + identity() + " --point 1").code,
            3);
  EXPECT_EQ(run("eval --set " + file("bad.json", "{\"dim\":1,") + " --jet " + identity() + " --point 1").code, 2);
  EXPECT_EQ(run("eval --set " + origin() + " --jet " + identity() + " --point 1/3").code, 2);
  EXPECT_EQ(run("decompose --set " + origin() + " --region 1:0 --levels 0:1").code, 2);
  EXPECT_EQ(run("grid --set " + origin() + " --jet " + identity() + " --region -1:1 --resolution 5000").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("eval --set " + (dir() / "missing.json").string() + " --jet " + identity() + " --point 1").code, 2);
}

TEST_F(Cli, GridReproducesIdentity) {
  const Outcome r = run("grid --set " + origin() + " --jet " + identity() + " --region -2:2 --resolution 33 --format csv");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 34u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x1", "value", "branch"}));
  for (size_t t = 1; t < rows.size(); ++t) {
    const double x = -2 + 4.0 * static_cast<double>(t - 1) / 32;
    EXPECT_NEAR(std::stod(rows[t][0]), x, 1e-12);
    EXPECT_NEAR(std::stod(rows[t][1]), x, std::ldexp(1.0, -16)) << rows[t][0];
  }
}

TEST_F(Cli, GridInsideComplementBall) {
  const std::string ball = file("ball.json", R"({"dim":2,"parts":[{"type":"ball","center":[0,0],"radius":1}]})");
  const Outcome r = run("grid --set " + ball + " --jet " + identity() + " --region 2:3,2:3 --resolution 4 --format csv");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 17u);
  for (size_t t = 1; t < rows.size(); ++t) EXPECT_EQ(rows[t].back(), "outsideF");
}

TEST_F(Cli, GridIsReproducible) {
  const std::string jet = file("cos.json", R"({"builtin":"cos","coeffs":[1,0],"order":1})");
  const std::string args = "grid --set " + origin() + " --jet " + jet + " --region -1:1 --resolution 9 --deriv 1";
  const Outcome a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const fs::path out = dir() / "grid.csv";
  ASSERT_EQ(run(args + " --out " + out.string()).code, 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), a.out);
}

TEST_F(Cli, ConstantJetOfOrderZero) {
  const std::string jet = file("const.json", R"({"builtin":"poly","coeffs":["3/4"],"order":0})");
  for (const char* x : {"0", "1/2", "-5"}) {
    const Outcome r = run("eval --set " + origin() + " --jet " + jet + " --point " + x + " --format json");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["value"]["decimal"], "0.75") << x;
  }
}

TEST_F(Cli, BoundsTable) {
  const Outcome r = run("bounds --order 2 --dim 1 --format json");
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  ASSERT_TRUE(doc.contains("bprime"));
  EXPECT_EQ(doc["bprime"][1]["value"]["mantissa"], "33097");
  EXPECT_EQ(doc["bprime"][1]["value"]["exponent"], 10);
}

TEST_F(Cli, CheckSuites) {
  const Outcome cubes = run("check --suite cubes");
  EXPECT_EQ(cubes.code, 0);
  EXPECT_TRUE(json::parse(cubes.out)["pass"].get<bool>());
  const Outcome part = run("check --suite partition --seed 7");
  EXPECT_EQ(part.code, 0);
  const json doc = json::parse(part.out);
  EXPECT_EQ(doc["seed"], 7);
  for (const auto& inv : doc["invariants"]) EXPECT_TRUE(inv["pass"].get<bool>()) << inv.dump();

  const std::string corrupt =
      file("corrupt.json", R"({"dim":1,"parts":[{"type":"point","coords":[0]}],"inject_dense":[["3/2"]]})");
  const Outcome bad = run("check --suite cubes --set " + corrupt);
  EXPECT_EQ(bad.code, 1);
  const json rep = json::parse(bad.out);
  EXPECT_FALSE(rep["pass"].get<bool>());
  EXPECT_EQ(rep["invariants"][0]["name"], "stream_consistency");
  EXPECT_TRUE(rep["invariants"][0].contains("counterexample"));
  EXPECT_EQ(run("check --suite bogus").code, 2);
}
