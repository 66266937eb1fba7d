#ifndef FRACHK_SCENARIO_HPP
#define FRACHK_SCENARIO_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frachk/model.hpp"
#include "frachk/sweep.hpp"

namespace frachk {

/// Validation failure with the offending field path in the message.
class ScenarioError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Full problem data for one run: network, fractional order, horizon, cost
/// and constraint parameters, fractional initial data, grid resolution and
/// sweep settings.
struct Scenario {
  Network network;
  double alpha;
  double horizon;
  double nu;
  double bound; // K
  int grid_n;
  Eigen::VectorXd leader_x0;        // length d
  Eigen::VectorXd agent_x0;         // length N*d
  SweepConfig sweep_config;

  Eigen::VectorXd stacked_x0() const;
  UniformGrid grid() const { return UniformGrid(horizon, grid_n); }
};

enum class RunMode { controlled, uncontrolled, compare };

struct RunArtifacts {
  std::optional<std::filesystem::path> state_csv;
  std::optional<std::filesystem::path> uncontrolled_state_csv;
  std::optional<std::filesystem::path> costate_csv;
  std::optional<std::filesystem::path> control_csv;
  std::filesystem::path summary_json;
};

struct RunSummary {
  std::optional<double> terminal_diameter_controlled;
  std::optional<double> terminal_diameter_uncontrolled;
  std::optional<double> cost;
  std::optional<int> iterations;
  std::optional<bool> converged;
  double alpha = 0.0;
  int n = 0;
};

Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& json_text);

RunMode parse_mode(const std::string& name);

/// Executes the requested mode and writes CSV trajectories plus a summary
/// JSON under out_dir. Existing artifacts are refused unless `overwrite`.
RunArtifacts run(const Scenario& scenario, RunMode mode,
                 const std::filesystem::path& out_dir, bool overwrite,
                 RunSummary* summary_out = nullptr);

/// One column block per state block, rows for nodes k = 1..n (node 0 is
/// omitted: the state is singular there). Atomic write, LF newlines,
/// shortest round-trip float format.
void emit_csv(const std::vector<std::string>& header,
              const UniformGrid& grid,
              const Eigen::MatrixXd& columns_by_node, // rows x (n+1), cols 1..n emitted
              const std::filesystem::path& path);

/// Reads back a CSV produced by emit_csv: returns (header, values) where
/// values has one inner vector per data row.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_csv(const std::filesystem::path& path);

/// Bundled scenario JSON ("example1" or "example2").
const std::string& bundled_scenario(const std::string& name);

} // namespace frachk

#endif
