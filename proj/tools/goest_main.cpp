// Command-line driver: run one scenario, list the builtins, or verify.
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "goest/acceptance.hpp"
#include "goest/report.hpp"
#include "goest/scenario.hpp"
#include "goest/sweep.hpp"

namespace {

goest::Scenario resolve(const std::string& name_or_path) {
  if (auto s = goest::find_builtin(name_or_path)) return *s;
  if (std::filesystem::exists(name_or_path)) return goest::scenario_from_file(name_or_path);
  throw std::invalid_argument("no builtin scenario or config file named '" + name_or_path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal-oriented error estimator testbed"};
  app.require_subcommand(1);

  std::string scenario, enrichment, format = "csv";
  std::string out_dir = ".";
  int levels = -1;
  auto* run = app.add_subcommand("run", "Run one scenario and write its report");
  run->add_option("--scenario", scenario, "Builtin name or JSON config file")->required();
  run->add_option("--levels", levels, "Number of refinement levels")->check(CLI::NonNegativeNumber);
  run->add_option("--enrichment", enrichment, "h or p")->check(CLI::IsMember({"h", "p"}));
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* list = app.add_subcommand("list", "Print the builtin scenarios");

  std::string verify_out = "acceptance_out";
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--out", verify_out, "Directory for the sweep CSV files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& s : goest::builtin_scenarios())
        std::cout << s.name << "  [" << goest::to_string(s.enrichment) << ", " << s.levels << " levels]  "
                  << s.description << '\n';
      return 0;
    }
    if (*verify) {
      goest::AcceptanceOptions opts;
      opts.out_dir = verify_out;
      return goest::print_acceptance(goest::run_acceptance(opts), std::cout) == 0 ? 0 : 1;
    }

    goest::Scenario s = resolve(scenario);
    if (levels >= 0) s.levels = levels;
    if (!enrichment.empty()) s.enrichment = goest::enrichment_from_string(enrichment);
    const auto report = goest::run_scenario(s);

    std::filesystem::create_directories(out_dir);
    const auto fmt = goest::report_format_from_string(format);
    const auto path = std::filesystem::path(out_dir) /
                      (s.name + "_" + goest::to_string(s.enrichment) + (fmt == goest::ReportFormat::Csv ? ".csv" : ".json"));
    goest::emit_report(report, fmt, path);
    std::cout << s.name << ": " << report.levels.size() << " levels, verdict " << report.verdict << ", wrote "
              << path.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
