#include "geomolt/gallery/registry.hpp"
#include "geomolt/report/report.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace geomolt;

int main(int argc, char** argv) {
  CLI::App app{"Mollifier smoothing studies for non-regular metrics and piecewise surfaces"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "geomolt_out";
  std::vector<double> eps;
  std::vector<std::string> sets;
  std::string example;
  int grid = 0, jobs = 1;

  const std::vector<std::string> studies = {"smooth", "curvature", "transport", "distance", "measure", "cantor", "suite"};
  for (const auto& name : studies) {
    CLI::App* sub = app.add_subcommand(name, "run a " + name + " study");
    auto* cfg = sub->add_option("--config", config_path, "config file (JSON)")->check(CLI::ExistingFile);
    if (name != "measure" && name != "cantor") cfg->required();
    sub->add_option("--example", example, "registered example (overrides the config)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--eps", eps, "epsilon list, e.g. 0.2,0.1,0.05")->delimiter(',');
    sub->add_option("--grid", grid, "grid or quadrature size");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    if (name == "measure") sub->add_option("--set", sets, "region expression (repeatable)");
  }
  app.add_subcommand("examples", "list registered examples");
  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "examples") {
    for (const auto& e : registered_examples()) std::cout << e.name << " (" << e.kind << "): " << e.description << '\n';
    return 0;
  }
  try {
    json config = config_path.empty() ? json::object() : read_json_file(config_path);
    if (!config.contains("study")) config["study"] = chosen->get_name();
    if (config["study"] != chosen->get_name()) {
      std::cerr << "config study '" << config["study"].get<std::string>() << "' does not match subcommand '"
                << chosen->get_name() << "'\n";
      return 2;
    }
    if (!sets.empty()) config["sets"] = sets;
    if (!example.empty()) config["example"] = example;
    config = with_overrides(config, eps, grid);
    const Report report = run_report(config, jobs);
    write_report(report, out_dir);
    std::cout << report.study << ' ' << report.example << ": " << report.verdict << " (" << report.wallclock_ms << " ms)\n";
    for (const auto& f : report.failures) std::cerr << "FAIL " << f << '\n';
    return report.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
