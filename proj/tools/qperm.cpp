// Command-line front end: validate group definitions, run experiments, aggregate results.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qperm/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;

int cmd_validate(const std::string& ref) {
  const qperm::CompactQuantumGroup g = qperm::load_group(ref);
  const qperm::ValidationReport rep = qperm::validate(g);
  std::printf("%s  (dim %d, N = %d)\n", g.name().c_str(), g.dim(), g.N());
  std::printf("%-24s %-24s %-24s %s\n", "check", "residual", "tolerance", "status");
  for (const auto& c : rep.checks)
    std::printf("%-24s %-24.17g %-24.17g %s\n", c.name.c_str(), c.residual, c.tolerance,
                c.passed ? "ok" : "FAILED");
  if (!rep.ok()) {
    std::printf("failing axioms:");
    for (const auto& f : rep.failures()) std::printf(" %s", f.c_str());
    std::printf("\n");
    return kFailed;
  }
  return kOk;
}

int cmd_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qperm::InputError("cannot open experiment spec '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw qperm::InputError("cannot parse '" + path + "': " + e.what());
  }
  const auto base = std::filesystem::absolute(path).parent_path().string();
  const qperm::ExperimentSpec spec = qperm::parse_experiment_spec(doc, base);
  const qperm::ExperimentResult r = qperm::run_experiment(spec);
  for (const auto& p : qperm::write_outputs(spec, r)) std::printf("wrote %s\n", p.c_str());
  for (const auto& c : r.document["checks"])
    std::printf("%-40s %s\n", c["name"].get<std::string>().c_str(),
                c["passed"].get<bool>() ? "ok" : "FAILED");
  std::printf("%s: %s\n", spec.name.c_str(), r.passed ? "passed" : "FAILED");
  return r.passed ? kOk : kFailed;
}

int cmd_report(const std::string& dir) {
  const qperm::Report rep = qperm::build_report(dir);
  std::fputs(rep.table.c_str(), stdout);
  std::printf("summary written to %s\n",
              (std::filesystem::path(dir) / "summary.json").string().c_str());
  return rep.all_passed ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite quantum permutation groups: validation and experiments"};
  app.require_subcommand(1);

  std::string group_ref, spec_path, report_dir;
  auto* validate = app.add_subcommand("validate", "Check the Hopf and magic-unitary axioms");
  validate->add_option("group", group_ref, "Builtin name (s3, kp, dual-s4, ...) or JSON file")
      ->required();
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON spec");
  run->add_option("spec", spec_path, "Experiment spec file")->required();
  auto* report = app.add_subcommand("report", "Summarize experiment results in a directory");
  report->add_option("dir", report_dir, "Directory of result documents")->required();
  app.add_subcommand("list", "List builtin groups and experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*validate) return cmd_validate(group_ref);
    if (*run) return cmd_run(spec_path);
    if (*report) return cmd_report(report_dir);
    std::printf("builtin groups:");
    for (const auto& n : qperm::builtin_examples()) std::printf(" %s", n.c_str());
    std::printf("\nexperiments:");
    for (const auto& n : qperm::experiment_names()) std::printf(" %s", n.c_str());
    std::printf("\n");
    return kOk;
  } catch (const qperm::InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailed;
  }
}
