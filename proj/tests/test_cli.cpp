#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "app.hpp"

namespace fs = std::filesystem;
using kadic::app::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "kadic");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("kadic_cli_" + tag + "_" + std::to_string(std::rand()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("verify") {
  TempDir dir("verify");
  const auto r = cli({"verify", "--k", "2", "--depth", "2", "--grid", "1,2,3", "--exhaustive", "--proof-steps",
                      "--out", dir / "v.csv"});
  REQUIRE(r.code == 0);
  const auto rows = lines(slurp(dir / "v.csv"));
  REQUIRE(rows.size() == 83);
  CHECK(rows[0] == "# manifest: v.csv.manifest.json");
  CHECK(rows[1].rfind("trial,weight_hash,k,depth,c,bound,sup_ratio,margin,witness,", 0) == 0);
  CHECK(rows[2].rfind("0,", 0) == 0);
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(rows[i].find(",false") == std::string::npos);

  const auto manifest = nlohmann::json::parse(slurp(dir / "v.csv.manifest.json"));
  CHECK(manifest["command"] == "verify");
  CHECK(manifest.contains("started_at"));
  CHECK(manifest.contains("version"));

  CHECK(cli({"verify", "--k", "3", "--depth", "4", "--trials", "1000", "--seed", "5", "--out", dir / "r.csv"}).code ==
        0);
  CHECK(lines(slurp(dir / "r.csv")).size() == 1002);

  const auto to_stdout = cli({"verify", "--trials", "3"});
  CHECK(to_stdout.code == 0);
  CHECK(lines(to_stdout.out).size() == 4);
}

TEST_CASE("verify reports a flagged weight with exit 1") {
  TempDir dir("flag");
  const auto r = cli({"verify", "--grid", "1,2,3", "--exhaustive", "--flag-margin-below", "1/1000", "--out",
                      dir / "v.csv"});
  CHECK(r.code == 1);
  CHECK(fs::exists(dir / "v.csv.counterexample.weight"));
  CHECK(slurp(dir / "v.csv.counterexample.weight") == "2 2 1/1 1/1 1/1 1/1\n");
}

TEST_CASE("usage errors exit 2") {
  TempDir dir("usage");
  CHECK(cli({}).code == 2);
  CHECK(cli({"verify", "--bogus"}).code == 2);
  CHECK(cli({"verify", "--k", "1"}).code == 2);
  CHECK(cli({"verify", "--grid", "1,0"}).code == 2);
  CHECK(cli({"verify", "--grid", "1,x"}).code == 2);
  CHECK(cli({"extremal", "--c", "0.5"}).code == 2);
  CHECK(cli({"extremal", "--mode", "other"}).code == 2);
  CHECK(cli({"extremal", "--mode", "paper", "--depths", "1"}).code == 2);
  CHECK(cli({"search", "--iters", "0"}).code == 2);
  CHECK(cli({"inspect"}).code == 2);
  CHECK(cli({"inspect", "--weight", dir / "missing.weight"}).code == 2);
  std::ofstream(dir / "bad.weight") << "2 2 1/1 1/1 1/1\n";
  CHECK(cli({"inspect", "--weight", dir / "bad.weight"}).code == 2);
  std::ofstream(dir / "ok.weight") << "2 2 3/1 1/1 3/1 1/1\n";
  CHECK(cli({"inspect", "--weight", dir / "ok.weight", "--t", "2"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("extremal") {
  const auto exact = cli({"extremal", "--k", "3", "--c", "3/2"});
  REQUIRE(exact.code == 0);
  const auto rows = lines(exact.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rfind("mode,k,c,depth,delta,", 0) == 0);
  CHECK(rows[1].rfind("exact,3,3/2,2,1/9,", 0) == 0);

  const auto paper = cli({"extremal", "--k", "2", "--c", "2", "--mode", "paper", "--depths", "4,6,8"});
  REQUIRE(paper.code == 0);
  const auto prow = lines(paper.out);
  REQUIRE(prow.size() == 4);
  CHECK(prow[1].find("7/4") != std::string::npos);
  CHECK(prow[1].find("5/2") != std::string::npos);
  CHECK(prow[1].find("11/4") != std::string::npos);
  CHECK(prow[3].find("191/64") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across runs") {
  TempDir a("det_a");
  TempDir b("det_b");
  for (const TempDir* d : {&a, &b}) {
    REQUIRE(cli({"verify", "--k", "3", "--depth", "3", "--trials", "200", "--seed", "11", "--threads", "3", "--out",
                 *d / "v.csv"})
                .code == 0);
    REQUIRE(cli({"extremal", "--k", "2", "--c", "3", "--mode", "paper", "--depths", "3,5", "--delta-steps", "3",
                 "--out", *d / "e.csv"})
                .code == 0);
    REQUIRE(cli({"search", "--k", "2", "--depth", "2", "--iters", "300", "--restarts", "2", "--seed", "4", "--out",
                 *d / "s"})
                .code == 0);
  }
  for (const std::string f : {"v.csv", "e.csv", "s/best.weight", "s/trace.csv", "s/summary.json"}) {
    CAPTURE(f);
    CHECK(!slurp(a / f).empty());
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(fs::exists(a / "s/manifest.json"));
  CHECK(lines(slurp(a / "s/trace.csv")).size() == 602);
}

TEST_CASE("search summary") {
  const auto r = cli({"search", "--iters", "200", "--restarts", "1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verified"] == true);
  CHECK(j.contains("best_objective"));
}

TEST_CASE("inspect") {
  TempDir dir("inspect");
  std::ofstream(dir / "w.weight") << "2 2 3/1 1/1 3/1 1/1\n";
  const auto r = cli({"inspect", "--weight", dir / "w.weight", "--t", "3/4", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["k"] == 2);
  CHECK(j["depth"] == 2);
  CHECK(j["c"] == "2/1");
  CHECK(j["bound"] == "3/1");
  CHECK(j["maximal_function"] == nlohmann::json::array({"3/1", "2/1", "3/1", "2/1"}));
  REQUIRE(j["stopping_family"].size() == 3);
  CHECK(j["stopping_family"][0]["level"] == 0);
  CHECK(j["stopping_family"][0]["star"].is_null());
  CHECK(j["stopping_family"][1]["star"]["level"] == 0);
  CHECK(j["stopping_family"][1]["region_measure"] == "1/4");
  CHECK(j["sup_ratio"] == "3/1");
  CHECK(j["witness"] == "1/2");
  CHECK(j["proof_step"]["mu_et"] == "1/2");
  CHECK(j["proof_step"]["prefix_average"] == "7/3");

  const auto text = cli({"inspect", "--weight", dir / "w.weight"});
  CHECK(text.code == 0);
  CHECK(text.out.find("sup ratio  3/1 at t=1/2") != std::string::npos);
}

TEST_CASE("installed binary exit codes") {
  const std::string bin = KADIC_CLI_PATH;
  CHECK(std::system((bin + " verify --trials 2 > /dev/null 2>&1").c_str()) == 0);
  const int status = std::system((bin + " verify --k 1 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
