#include "stochlp/cli.hpp"
#include "stochlp/graph.hpp"
#include "stochlp/tree_decomposition.hpp"

#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace stochlp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "stochlp");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("stochlp_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

// Generates a pair into dir and returns {graph, td} paths.
std::pair<std::string, std::string> gen(const TempDir& dir, std::vector<std::string> args) {
  std::string g = dir / "g.graph", t = dir / "g.td";
  args.insert(args.begin(), "gen");
  args.insert(args.end(), {"--out-graph", g, "--out-td", t});
  Run r = cli(args);
  REQUIRE(r.code == 0);
  return {g, t};
}

}  // namespace

TEST_CASE("gen chain and validate-td") {
  TempDir dir;
  auto [g, t] = gen(dir, {"--shape", "chain", "--n", "5"});
  Run v = cli({"validate-td", "--graph", g, "--td", t});
  CHECK(v.code == 0);
  json j = v.report();
  CHECK(j["valid"] == true);
  CHECK(j["width"] == 1);
  CHECK(j["command"] == "validate-td");
}

TEST_CASE("diamond ladder has 2^d paths and width 2") {
  TempDir dir;
  auto [g, t] = gen(dir, {"--shape", "diamond-ladder", "--n", "3", "--dist", "exp"});
  Dag graph = parse_graph(slurp(g));
  CHECK(graph.n() == 10);
  CHECK(enumerate_st_paths(graph, 100).size() == 8);
  Run v = cli({"validate-td", "--graph", g, "--td", t});
  CHECK(v.code == 0);
  CHECK(v.report()["width"] == 2);
}

TEST_CASE("random-tw is deterministic and valid") {
  Run a = cli({"gen", "--shape", "random-tw", "--n", "12", "--k", "2", "--seed", "4"});
  Run b = cli({"gen", "--shape", "random-tw", "--n", "12", "--k", "2", "--seed", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  json j = a.report();
  CHECK(j["width"].get<int>() <= 2);
  Dag g = parse_graph(j["graph"].get<std::string>());
  TreeDecomposition td = parse_td(j["td"].get<std::string>());
  CHECK(validate_td(g, td).ok);
  CHECK(g.isolated().empty());
}

TEST_CASE("invalid decomposition is reported with exit 1") {
  TempDir dir;
  auto [g, t] = gen(dir, {"--shape", "chain", "--n", "4"});
  std::ofstream(dir / "bad.td") << write_td(TreeDecomposition{{{0, 1}, {2, 3}}, {{0, 1}}}, 4);
  Run v = cli({"validate-td", "--graph", g, "--td", dir / "bad.td"});
  CHECK(v.code == 1);
  CHECK(v.report()["valid"] == false);
}

TEST_CASE("solver commands produce reports") {
  TempDir dir;
  auto [g, t] = gen(dir, {"--shape", "chain", "--n", "3", "--dist", "exp"});
  Run e = cli({"exact-exp", "--graph", g, "--td", t, "--x", "2"});
  REQUIRE(e.code == 0);
  json j = e.report();
  CHECK(j["value"].get<double>() == doctest::Approx(1 - 3 * std::exp(-2.0)).epsilon(1e-15));
  CHECK(j["guarantee"]["kind"] == "exact");
  CHECK(j["inputs"]["x_rational"] == "2/1");
  CHECK_FALSE(j.contains("elapsed_ms"));

  Run s = cli({"sp-exact", "--graph", g, "--x", "2"});
  CHECK(s.report()["value"].get<double>() == doctest::Approx(j["value"].get<double>()).epsilon(1e-14));

  Run ty = cli({"taylor", "--graph", g, "--x", "1", "--oracle", "expcdf", "--tau", "10"});
  REQUIRE(ty.code == 0);
  CHECK(ty.report()["guarantee"]["kind"] == "additive");

  Run mc = cli({"--timing", "mc", "--graph", g, "--x", "2", "--samples", "1000", "--seed", "3"});
  REQUIRE(mc.code == 0);
  CHECK(mc.report().contains("elapsed_ms"));
  CHECK(mc.report()["guarantee"]["kind"] == "statistical");

  auto [ug, ut] = gen(dir, {"--shape", "chain", "--n", "3"});
  Run ap = cli({"approx", "--graph", ug, "--td", ut, "--x", "1", "--epsilon", "0.5"});
  REQUIRE(ap.code == 0);
  CHECK(ap.report()["guarantee"]["kind"] == "multiplicative");
  Run br = cli({"bracket", "--graph", ug, "--x", "1", "--resolution", "10"});
  REQUIRE(br.code == 0);
  CHECK(br.report()["lower"]["value"].get<double>() <= 0.5);
  CHECK(br.report()["upper"]["value"].get<double>() >= 0.5);
}

TEST_CASE("usage and input errors exit 1, budget aborts exit 2") {
  TempDir dir;
  auto [g, t] = gen(dir, {"--shape", "chain", "--n", "3"});
  Run a = cli({"approx", "--graph", g, "--x", "1"});
  CHECK(a.code == 1);
  CHECK(a.err.find("--epsilon") != std::string::npos);
  CHECK(a.out.empty());

  Run e = cli({"exact-exp", "--graph", g, "--x", "1"});
  CHECK(e.code == 1);
  CHECK(e.err.find("distribution mismatch") != std::string::npos);

  Run missing = cli({"exact-exp", "--graph", dir / "nope.graph", "--x", "1"});
  CHECK(missing.code == 1);

  Run budget = cli({"approx", "--graph", g, "--x", "1", "--grid-m", "50", "--max-cells", "1"});
  CHECK(budget.code == 2);

  Run unknown = cli({"frobnicate"});
  CHECK(unknown.code == 1);
}

TEST_CASE("reports are stable and round trip through a JSON parser") {
  TempDir dir;
  auto [g, t] = gen(dir, {"--shape", "diamond-ladder", "--n", "2", "--dist", "exp"});
  Run a = cli({"exact-exp", "--graph", g, "--td", t, "--x", "3/2"});
  Run b = cli({"--threads", "2", "exact-exp", "--graph", g, "--td", t, "--x", "3/2"});
  CHECK(a.out == b.out);
  json j = a.report();
  CHECK(format_report(j) + "\n" == a.out);
  CHECK(format_report(json{{"v", 1.0}}) == "{\"v\":1.0}");
  CHECK(format_report(json{{"v", std::nan("")}}) == "{\"v\":null}");
}
