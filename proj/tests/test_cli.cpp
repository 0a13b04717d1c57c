#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qperm/experiments.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
};

/// Runs the command-line tool with stdout and stderr captured.
Outcome qperm_cli(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / ("qperm_cli_" + std::to_string(::getpid()) + ".log");
  const std::string cmd = std::string(QPERM_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(log);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("qperm_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("validate exit codes") {
  CHECK(qperm_cli("validate kp").code == 0);
  CHECK(qperm_cli("validate s3").code == 0);
  CHECK(qperm_cli("validate dual-s4").code == 0);

  const fs::path dir = fresh_dir("validate");
  write(dir / "bad_counit.json",
        R"({"kind": "builtin", "builtin": "s3", "perturb": [{"target": "counit", "index": [1], "value": 0.5}]})");
  const Outcome bad = qperm_cli("validate " + (dir / "bad_counit.json").string());
  CHECK(bad.code == 1);
  CHECK(bad.out.find("failing axioms:") != std::string::npos);
  CHECK(bad.out.find("counit.") != std::string::npos);

  write(dir / "bad_delta.json",
        R"({"kind": "kac_paljutkin", "perturb": [{"target": "delta", "index": [9, 1], "value": 0.25}]})");
  const Outcome bad_delta = qperm_cli("validate " + (dir / "bad_delta.json").string());
  CHECK(bad_delta.code == 1);
  CHECK(bad_delta.out.find("delta.") != std::string::npos);

  write(dir / "group.json",
        R"({"kind": "classical", "permutations": [[2, 1, 3], [1, 3, 2]], "closure": true})");
  CHECK(qperm_cli("validate " + (dir / "group.json").string()).code == 0);
  write(dir / "dual.json",
        R"({"kind": "dual", "group_table": [[0, 1], [1, 0]], "generators": [{"element": 1, "order": 2}]})");
  CHECK(qperm_cli("validate " + (dir / "dual.json").string()).code == 0);

  write(dir / "malformed.json", "{ not json");
  CHECK(qperm_cli("validate " + (dir / "malformed.json").string()).code == 2);
  write(dir / "not_closed.json", R"({"kind": "classical", "permutations": [[2, 3, 1]]})");
  CHECK(qperm_cli("validate " + (dir / "not_closed.json").string()).code == 2);
  write(dir / "unknown_kind.json", R"({"kind": "mystery"})");
  CHECK(qperm_cli("validate " + (dir / "unknown_kind.json").string()).code == 2);
  CHECK(qperm_cli("validate " + (dir / "missing.json").string()).code == 2);
  CHECK(qperm_cli("validate dual-s9").code == 2);
  CHECK(qperm_cli("frobnicate").code == 2);
  CHECK(qperm_cli("").code == 2);
  fs::remove_all(dir);
}

TEST_CASE("run rejects bad experiment specs") {
  const fs::path dir = fresh_dir("specs");
  write(dir / "unknown.json", R"({"name": "nope", "group": "kp"})");
  CHECK(qperm_cli("run " + (dir / "unknown.json").string()).code == 2);
  write(dir / "no_seed.json", R"({"name": "idempotent-census", "group": "kp"})");
  CHECK(qperm_cli("run " + (dir / "no_seed.json").string()).code == 2);
  write(dir / "bad_param.json", R"({"name": "haar", "group": "kp", "parameters": {"bogus": 1}})");
  CHECK(qperm_cli("run " + (dir / "bad_param.json").string()).code == 2);
  write(dir / "extra_field.json", R"({"name": "haar", "group": "kp", "colour": "red"})");
  CHECK(qperm_cli("run " + (dir / "extra_field.json").string()).code == 2);
  write(dir / "bad_group.json", R"({"name": "haar", "group": "missing_group.json"})");
  CHECK(qperm_cli("run " + (dir / "bad_group.json").string()).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("experiments write outputs and reruns are byte-identical") {
  const fs::path dir = fresh_dir("runs");
  write(dir / "phase.json", R"({"name": "phase-diagram", "group": "s3", "outputs": ["phase.csv", "phase_doc.json"]})");
  write(dir / "census.json",
        R"({"name": "idempotent-census", "group": "kp", "parameters": {"seed": 9, "n_random": 12, "probe_samples": 4}})");
  write(dir / "bounds.json",
        R"({"name": "bounds-empirical", "group": "dual-s4", "parameters": {"seed": 3, "n_samples": 60}})");
  write(dir / "spec_haar.json", R"({"name": "haar", "group": "kp"})");

  REQUIRE(qperm_cli("run " + (dir / "phase.json").string()).code == 0);
  std::ifstream csv(dir / "phase.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "alpha,beta,region,q2i,q3i,qhalfw,lower,upper");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 101 * 101);

  for (const char* name : {"census", "bounds"}) {
    const std::string spec = (dir / (std::string(name) + ".json")).string();
    REQUIRE(qperm_cli("run " + spec).code == 0);
  }
  const std::string census1 = slurp(dir / "idempotent-census.json");
  const std::string bounds1 = slurp(dir / "bounds-empirical.json");
  setenv("QPERM_THREADS", "3", 1);
  REQUIRE(qperm_cli("run " + (dir / "census.json").string()).code == 0);
  REQUIRE(qperm_cli("run " + (dir / "bounds.json").string()).code == 0);
  unsetenv("QPERM_THREADS");
  CHECK(slurp(dir / "idempotent-census.json") == census1);
  CHECK(slurp(dir / "bounds-empirical.json") == bounds1);
  CHECK_FALSE(census1.empty());

  REQUIRE(qperm_cli("run " + (dir / "spec_haar.json").string()).code == 0);
  const json doc = json::parse(slurp(dir / "haar.json"));
  CHECK(doc["experiment"] == "haar");
  CHECK(std::abs(doc["key_numbers"]["alpha_haar"].get<double>() - 0.5) < 1e-9);

  const Outcome rep = qperm_cli("report " + dir.string());
  CHECK(rep.code == 0);
  CHECK(rep.out.find("alpha_haar") != std::string::npos);
  const json summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["all_passed"] == true);
  fs::remove_all(dir);
}

TEST_CASE("report on an empty directory is an input error") {
  const fs::path dir = fresh_dir("empty");
  CHECK(qperm_cli("report " + dir.string()).code == 2);
  CHECK(qperm_cli("report " + (dir / "nowhere").string()).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("serialization keeps 17 significant digits") {
  const std::string s = qperm::dump_json(json{{"x", 1.0 / 3}});
  CHECK(s.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("experiment spec parsing resolves relative group paths") {
  const auto spec = qperm::parse_experiment_spec(
      json::parse(R"({"name": "haar", "group": "g.json"})"), "/some/dir");
  CHECK(spec.group == (fs::path("/some/dir") / "g.json").string());
  const auto builtin = qperm::parse_experiment_spec(json::parse(R"({"name": "haar", "group": "kp"})"), "/x");
  CHECK(builtin.group == "kp");
}
