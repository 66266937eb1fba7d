#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "frachk/scenario.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

void print_summary(const frachk::RunSummary& s) {
  std::cout << "alpha = " << s.alpha << ", n = " << s.n << "\n";
  if (s.cost) std::cout << "cost = " << *s.cost << "\n";
  if (s.iterations)
    std::cout << "iterations = " << *s.iterations << " (converged: "
              << (s.converged && *s.converged ? "yes" : "no") << ")\n";
  if (s.terminal_diameter_controlled)
    std::cout << "terminal diameter (controlled)   = " << *s.terminal_diameter_controlled
              << "\n";
  if (s.terminal_diameter_uncontrolled)
    std::cout << "terminal diameter (uncontrolled) = "
              << *s.terminal_diameter_uncontrolled << "\n";
}

int execute(const frachk::Scenario& scenario, const std::string& mode_name,
            const std::string& out_dir, int grid_override, bool force) {
  frachk::Scenario s = scenario;
  if (grid_override > 0) s.grid_n = grid_override;
  frachk::RunSummary summary;
  frachk::RunArtifacts artifacts =
      frachk::run(s, frachk::parse_mode(mode_name), out_dir, force, &summary);
  print_summary(summary);
  std::cout << "summary: " << artifacts.summary_json.string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal leader control for the fractional consensus model"};
  app.require_subcommand(1);

  std::string scenario_path, mode = "controlled", out_dir = "out", demo_name;
  int grid_override = 0;
  bool force = false;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("file", scenario_path, "Scenario JSON file")->required();
  run_cmd->add_option("--mode", mode, "controlled|uncontrolled|compare")
      ->check(CLI::IsMember({"controlled", "uncontrolled", "compare"}));
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--grid", grid_override, "Override the grid resolution n");
  run_cmd->add_flag("--force", force, "Overwrite existing artifacts");

  auto* demo_cmd = app.add_subcommand("demo", "Run a bundled scenario in compare mode");
  demo_cmd->add_option("name", demo_name, "example1|example2")->required();
  demo_cmd->add_option("--out", out_dir, "Output directory");
  demo_cmd->add_option("--grid", grid_override, "Override the grid resolution n");
  demo_cmd->add_flag("--force", force, "Overwrite existing artifacts");

  auto* validate_cmd = app.add_subcommand("validate", "Validate a scenario file");
  validate_cmd->add_option("file", scenario_path, "Scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      frachk::Scenario s = frachk::parse_scenario(scenario_path);
      return execute(s, mode, out_dir, grid_override, force);
    }
    if (demo_cmd->parsed()) {
      frachk::Scenario s =
          frachk::parse_scenario_text(frachk::bundled_scenario(demo_name));
      return execute(s, "compare", out_dir, grid_override, force);
    }
    if (validate_cmd->parsed()) {
      frachk::Scenario s = frachk::parse_scenario(scenario_path);
      std::cout << scenario_path << ": ok (N = " << s.network.agents
                << ", d = " << s.network.dim << ", alpha = " << s.alpha << ")\n";
      return 0;
    }
  } catch (const frachk::ScenarioError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
