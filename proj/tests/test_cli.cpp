#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef TRAJKIT_CLI_PATH
#error "TRAJKIT_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string tmp(const std::string& name) {
  return (fs::temp_directory_path() / ("tkcli_" + name)).string();
}

int run(const std::string& args) {
  const std::string cmd =
      std::string(TRAJKIT_CLI_PATH) + " " + args + " > " + tmp("stdout.txt") +
      " 2> " + tmp("stderr.txt");
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("generate then eval: noiseless pipeline scores zero") {
  write_file(tmp("newton.json"),
             R"({"x0":[0,0],"v0":[1,0.3],"accel":{"mode":"static","a":[0,0]},"steps":20})");
  REQUIRE(run("generate --kind newton --spec " + tmp("newton.json") +
              " --count 5 --seed 3 --out " + tmp("newton.tsv")) == 0);
  REQUIRE(run("eval --in " + tmp("newton.tsv") +
              " --predictor cv --k 1 --report " + tmp("eval.json")) == 0);
  const json rep = json::parse(read_file(tmp("eval.json")));
  CHECK(rep["ade"].get<double>() == 0.0);
  CHECK(rep["fde"].get<double>() == 0.0);
  CHECK(rep.contains("resolved_config"));
  CHECK(rep["resolved_config"]["predictor"] == "cv");
}

TEST_CASE("legacy scale bug divides the reported ADE exactly") {
  write_file(tmp("n2.json"),
             R"({"x0":[0,0],"v0":[1,0],"accel":{"mode":"static","a":[0,0]},"steps":20,"sigma":0.5})");
  REQUIRE(run("generate --kind noisy --spec " + tmp("n2.json") +
              " --count 20 --seed 5 --out " + tmp("noisy.tsv")) == 0);
  REQUIRE(run("eval --in " + tmp("noisy.tsv") +
              " --predictor cv --k 1 --report " + tmp("base.json")) == 0);
  REQUIRE(run("eval --in " + tmp("noisy.tsv") +
              " --predictor cv --k 1 --std 1.86 --legacy-scale-bug --report " +
              tmp("bug.json")) == 0);
  const double base = json::parse(read_file(tmp("base.json")))["ade"];
  const double bug = json::parse(read_file(tmp("bug.json")))["ade"];
  CHECK(bug == base / 1.86);
  const double base_fde = json::parse(read_file(tmp("base.json")))["fde"];
  const double bug_fde = json::parse(read_file(tmp("bug.json")))["fde"];
  CHECK(bug_fde == base_fde);
}

TEST_CASE("synth then analyze: histogram matches the built-in target") {
  REQUIRE(run("synth --count 2500 --seed 11 --out " + tmp("syn.tsv")) == 0);
  REQUIRE(run("analyze --in " + tmp("syn.tsv") + " --report " +
              tmp("profile.json") + " --csv " + tmp("profile.csv")) == 0);
  const json rep = json::parse(read_file(tmp("profile.json")));
  CHECK(rep["count"] == 2500);
  const double p20 = rep["unique_props"]["20"];
  CHECK(std::fabs(p20 - 0.6992) < 0.02);
  // CSV header sanity
  const std::string csv = read_file(tmp("profile.csv"));
  CHECK(csv.rfind("scene,agent,unique_points,class,abscore_raw", 0) == 0);
}

TEST_CASE("cluster and classify emit CSV artifacts") {
  REQUIRE(run("synth --count 60 --seed 2 --out " + tmp("cl.tsv")) == 0);
  REQUIRE(run("cluster --in " + tmp("cl.tsv") +
              " --k 3 --norm l1 --seed 1 --out " + tmp("cl.csv") +
              " --summary " + tmp("cl.json")) == 0);
  const std::string csv = read_file(tmp("cl.csv"));
  CHECK(csv.rfind("index,cluster,is_medoid", 0) == 0);
  const json summary = json::parse(read_file(tmp("cl.json")));
  CHECK(summary["k"] == 3);
  CHECK(summary["clusters"].size() == 3);

  REQUIRE(run("classify --in " + tmp("cl.tsv") + " --out " + tmp("cls.csv")) ==
          0);
  CHECK(read_file(tmp("cls.csv")).rfind("scene,agent,unique_points", 0) == 0);
}

TEST_CASE("mix composes two datasets") {
  REQUIRE(run("synth --count 200 --seed 21 --out " + tmp("base.tsv")) == 0);
  REQUIRE(run("synth --count 100 --seed 22 --out " + tmp("pool.tsv")) == 0);
  REQUIRE(run("mix --base " + tmp("base.tsv") + " --synth " + tmp("pool.tsv") +
              " --fraction 0.1 --seed 23 --out " + tmp("mixed.tsv")) == 0);
  const std::string echo = read_file(tmp("stdout.txt"));
  const json cfg = json::parse(echo);
  CHECK(cfg["added_trajectories"] == 23);  // ceil(0.1/0.9*200)
}

TEST_CASE("reruns with the same seed are byte-identical") {
  REQUIRE(run("synth --count 150 --seed 9 --out " + tmp("a.tsv")) == 0);
  REQUIRE(run("synth --count 150 --seed 9 --out " + tmp("b.tsv")) == 0);
  CHECK(read_file(tmp("a.tsv")) == read_file(tmp("b.tsv")));

  write_file(tmp("hmm.json"), R"({
    "bounds": {"min_x": -30, "min_y": -30, "max_x": 30, "max_y": 30},
    "max_frames": 20,
    "agents": [
      {"start": [-10, 0], "goal": [10, 0], "base_speed": 1.0},
      {"start": [10, 2], "goal": [-10, -2], "base_speed": 1.0}
    ]})");
  REQUIRE(run("generate --kind hmm --spec " + tmp("hmm.json") +
              " --count 3 --seed 4 --out " + tmp("h1.tsv") + " --state-log " +
              tmp("l1.json")) == 0);
  REQUIRE(run("generate --kind hmm --spec " + tmp("hmm.json") +
              " --count 3 --seed 4 --out " + tmp("h2.tsv") + " --state-log " +
              tmp("l2.json")) == 0);
  CHECK(read_file(tmp("h1.tsv")) == read_file(tmp("h2.tsv")));
  CHECK(read_file(tmp("l1.json")) == read_file(tmp("l2.json")));
}

TEST_CASE("siren-fit writes a loss curve") {
  std::ostringstream sig;
  for (int i = 0; i < 64; ++i) {
    const double t = -1.0 + 2.0 * i / 63.0;
    sig << t << ',' << std::sin(3.0 * t) << '\n';
  }
  write_file(tmp("sig.csv"), sig.str());
  REQUIRE(run("siren-fit --signal " + tmp("sig.csv") +
              " --layers 16,16 --epochs 50 --lr 0.001 --seed 3 --curve " +
              tmp("curve.csv")) == 0);
  const std::string curve = read_file(tmp("curve.csv"));
  CHECK(curve.rfind("epoch,mse", 0) == 0);
  // 50 epochs + header + final entry
  CHECK(std::count(curve.begin(), curve.end(), '\n') == 52);
}

TEST_CASE("rl-train writes curve, policy and rollouts") {
  write_file(tmp("env.json"), R"({
    "scene": {"bounds": {"min_x": -40, "min_y": -40, "max_x": 40, "max_y": 40}},
    "start": [0, 0], "goal_radius": 1.0, "max_steps": 12})");
  write_file(tmp("prof.json"),
             R"({"fitness": 1.0, "sociability": 0.5, "patience": 0.5, "goal": [5, 0]})");
  REQUIRE(run("rl-train --env " + tmp("env.json") + " --profile " +
              tmp("prof.json") +
              " --iters 3 --episodes 4 --lr 0.02 --seed 2 --curve " +
              tmp("rlcurve.csv") + " --policy " + tmp("policy.json") +
              " --export " + tmp("roll.tsv")) == 0);
  CHECK(read_file(tmp("rlcurve.csv")).rfind("iter,mean_return", 0) == 0);
  const json policy = json::parse(read_file(tmp("policy.json")));
  CHECK(policy["layers"].size() == 3);
  CHECK(!read_file(tmp("roll.tsv")).empty());
}

TEST_CASE("usage errors exit 1, data errors exit 2") {
  CHECK(run("generate --bogus-flag x") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("analyze --in /nonexistent/file.tsv --report " + tmp("r.json")) ==
        2);
  write_file(tmp("garbage.tsv"), "one\ttwo\n");
  CHECK(run("analyze --in " + tmp("garbage.tsv") + " --report " +
            tmp("r.json")) == 2);
}

TEST_CASE("help lists every documented flag") {
  REQUIRE(run("eval --help") == 0);
  const std::string help = read_file(tmp("stdout.txt"));
  for (const char* flag :
       {"--in", "--predictor", "--k", "--decoupled", "--std",
        "--legacy-scale-bug", "--report"})
    CHECK(help.find(flag) != std::string::npos);
}
