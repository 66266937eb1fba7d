#include "frachk/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "frachk/special.hpp"

namespace frachk {

using nlohmann::json;

Eigen::VectorXd Scenario::stacked_x0() const {
  Eigen::VectorXd x0(network.stacked_size());
  x0.head(network.dim) = leader_x0;
  x0.tail(network.agents * network.dim) = agent_x0;
  return x0;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioError(path + ": expected a number");
  return j.get<double>();
}

const json& require_key(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw ScenarioError(path + ": missing required field '" + key + "'");
  return j.at(key);
}

Eigen::VectorXd parse_block(const json& j, int expected_dim, const std::string& path) {
  if (j.is_number()) {
    if (expected_dim > 0 && expected_dim != 1)
      throw ScenarioError(path + ": scalar given, expected " + std::to_string(expected_dim) +
                          " components");
    Eigen::VectorXd v(1);
    v(0) = j.get<double>();
    return v;
  }
  if (!j.is_array() || j.empty())
    throw ScenarioError(path + ": expected a number or a non-empty array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v(int(i)) = require_number(j.at(i), path + "[" + std::to_string(i) + "]");
  if (expected_dim > 0 && int(v.size()) != expected_dim)
    throw ScenarioError(path + ": has " + std::to_string(v.size()) + " components, expected " +
                        std::to_string(expected_dim));
  return v;
}

Scenario parse_json(const json& root) {
  const double alpha = require_number(require_key(root, "alpha", "$"), "$.alpha");
  if (!(alpha > 0.5) || !(alpha < 1.0))
    throw ScenarioError("$.alpha: must lie in (1/2, 1) -- the range of the optimality "
                        "conditions -- got " + std::to_string(alpha));
  const double T = require_number(require_key(root, "T", "$"), "$.T");
  if (!(T > 0.0) || !std::isfinite(T)) throw ScenarioError("$.T: must be positive");
  const double nu = require_number(require_key(root, "nu", "$"), "$.nu");
  if (!(nu > 0.0)) throw ScenarioError("$.nu: must be positive");
  const double K = require_number(require_key(root, "K", "$"), "$.K");
  if (!(K > 0.0)) throw ScenarioError("$.K: must be positive");
  const json& jn = require_key(root, "n", "$");
  if (!jn.is_number_integer() || jn.get<long long>() < 2)
    throw ScenarioError("$.n: must be an integer >= 2");
  const int n = jn.get<int>();

  const json& leader = require_key(root, "leader", "$");
  Eigen::VectorXd leader_x0 = parse_block(require_key(leader, "x0", "$.leader"), 0,
                                          "$.leader.x0");
  const int d = int(leader_x0.size());

  const json& agents = require_key(root, "agents", "$");
  if (!agents.is_array() || agents.empty())
    throw ScenarioError("$.agents: expected a non-empty array");
  const int N = int(agents.size());
  Eigen::VectorXd agent_x0(N * d);
  for (int i = 0; i < N; ++i) {
    const std::string path = "$.agents[" + std::to_string(i) + "]";
    agent_x0.segment(i * d, d) =
        parse_block(require_key(agents.at(i), "x0", path), d, path + ".x0");
  }

  const json& jw = require_key(root, "weights", "$");
  if (!jw.is_array() || int(jw.size()) != N)
    throw ScenarioError("$.weights: expected " + std::to_string(N) + " rows");
  Eigen::MatrixXd weights(N, N);
  for (int i = 0; i < N; ++i) {
    const json& row = jw.at(i);
    if (!row.is_array() || int(row.size()) != N)
      throw ScenarioError("$.weights[" + std::to_string(i) + "]: expected " +
                          std::to_string(N) + " entries");
    for (int j = 0; j < N; ++j)
      weights(i, j) = require_number(row.at(j), "$.weights[" + std::to_string(i) + "][" +
                                                    std::to_string(j) + "]");
  }

  const json& jc = require_key(root, "couplings", "$");
  if (!jc.is_array() || int(jc.size()) != N)
    throw ScenarioError("$.couplings: expected " + std::to_string(N) + " entries");
  Eigen::VectorXd couplings(N);
  for (int i = 0; i < N; ++i)
    couplings(i) = require_number(jc.at(i), "$.couplings[" + std::to_string(i) + "]");

  SweepConfig sweep_config;
  if (root.contains("sweep")) {
    const json& js = root.at("sweep");
    if (!js.is_object()) throw ScenarioError("$.sweep: expected an object");
    if (js.contains("theta")) sweep_config.relaxation = require_number(js.at("theta"), "$.sweep.theta");
    if (js.contains("max_iterations")) {
      if (!js.at("max_iterations").is_number_integer())
        throw ScenarioError("$.sweep.max_iterations: expected an integer");
      sweep_config.max_iterations = js.at("max_iterations").get<int>();
    }
    if (js.contains("tolerance"))
      sweep_config.tolerance = require_number(js.at("tolerance"), "$.sweep.tolerance");
    if (js.contains("theta_min"))
      sweep_config.relaxation_floor = require_number(js.at("theta_min"), "$.sweep.theta_min");
    try {
      sweep_config.validate();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(std::string("$.sweep: ") + e.what());
    }
  }

  try {
    Network net(N, d, std::move(weights), std::move(couplings));
    return Scenario{std::move(net), alpha, T,  nu,
                    K,              n,     leader_x0, agent_x0, sweep_config};
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("$: ") + e.what());
  }
}

} // namespace

Scenario parse_scenario_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("invalid JSON: ") + e.what());
  }
  return parse_json(root);
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario_text(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

RunMode parse_mode(const std::string& name) {
  if (name == "controlled") return RunMode::controlled;
  if (name == "uncontrolled") return RunMode::uncontrolled;
  if (name == "compare") return RunMode::compare;
  throw ScenarioError("unknown mode '" + name + "' (controlled|uncontrolled|compare)");
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void refuse_existing(const std::filesystem::path& path, bool overwrite) {
  if (!overwrite && std::filesystem::exists(path))
    throw std::runtime_error("output file exists (use --force to overwrite): " +
                             path.string());
}

std::vector<std::string> block_header(const std::string& stem, int blocks, int dim,
                                      int first_block) {
  std::vector<std::string> h;
  h.push_back("t");
  for (int b = first_block; b < first_block + blocks; ++b)
    for (int c = 1; c <= dim; ++c)
      h.push_back(stem + "_" + std::to_string(b) + "_" + std::to_string(c));
  return h;
}

Eigen::MatrixXd full_samples(const StateTrajectory& traj) {
  Eigen::MatrixXd out(traj.regular.rows(), traj.grid.n + 1);
  out.col(0).setZero();
  for (int k = 1; k <= traj.grid.n; ++k) out.col(k) = sample_state(traj, k).data;
  return out;
}

json singular_coeff_json(const StateTrajectory& traj) {
  json arr = json::array();
  for (int i = 0; i < traj.singular_coeff.size(); ++i)
    arr.push_back(traj.singular_coeff(i));
  return arr;
}

} // namespace

void emit_csv(const std::vector<std::string>& header, const UniformGrid& grid,
              const Eigen::MatrixXd& columns_by_node, const std::filesystem::path& path) {
  if (int(header.size()) != columns_by_node.rows() + 1)
    throw std::invalid_argument("emit_csv: header does not match the series count");
  if (columns_by_node.cols() != grid.n + 1)
    throw std::invalid_argument("emit_csv: sample count does not match the grid");

  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (int k = 1; k <= grid.n; ++k) {
    out += format_double(grid.node(k));
    for (int r = 0; r < columns_by_node.rows(); ++r) {
      out += ',';
      out += format_double(columns_by_node(r, k));
    }
    out += '\n';
  }
  atomic_write(path, out);
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path.string());
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) header.push_back(field);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      double v = 0.0;
      auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (res.ec != std::errc())
        throw std::runtime_error("bad number '" + field + "' in " + path.string());
      row.push_back(v);
    }
    if (row.size() != header.size())
      throw std::runtime_error("ragged CSV row in " + path.string());
    rows.push_back(std::move(row));
  }
  return {std::move(header), std::move(rows)};
}

RunArtifacts run(const Scenario& scenario, RunMode mode,
                 const std::filesystem::path& out_dir, bool overwrite,
                 RunSummary* summary_out) {
  std::filesystem::create_directories(out_dir);
  const FractionalOrder alpha = FractionalOrder::for_control(scenario.alpha);
  const UniformGrid grid = scenario.grid();
  const int N = scenario.network.agents;
  const int d = scenario.network.dim;

  RunArtifacts artifacts;
  artifacts.summary_json = out_dir / "summary.json";
  refuse_existing(artifacts.summary_json, overwrite);

  RunSummary summary;
  summary.alpha = scenario.alpha;
  summary.n = scenario.grid_n;

  json extra;
  const bool want_controlled = mode != RunMode::uncontrolled;
  const bool want_uncontrolled = mode != RunMode::controlled;

  if (want_controlled) {
    artifacts.state_csv = out_dir / "state.csv";
    artifacts.costate_csv = out_dir / "costate.csv";
    artifacts.control_csv = out_dir / "control.csv";
    refuse_existing(*artifacts.state_csv, overwrite);
    refuse_existing(*artifacts.costate_csv, overwrite);
    refuse_existing(*artifacts.control_csv, overwrite);

    OptimalSolution solution =
        sweep(scenario.network, alpha, grid, scenario.stacked_x0(), scenario.nu,
              scenario.bound, scenario.sweep_config);

    emit_csv(block_header("x", N + 1, d, 0), grid, full_samples(solution.state),
             *artifacts.state_csv);
    emit_csv(block_header("lambda", N + 1, d, 0), grid, solution.costate.samples,
             *artifacts.costate_csv);
    {
      std::vector<std::string> h{"t"};
      for (int c = 1; c <= d; ++c) h.push_back("u_" + std::to_string(c));
      emit_csv(h, grid, solution.control.samples, *artifacts.control_csv);
    }

    summary.cost = solution.cost;
    summary.iterations = solution.report.iterations;
    summary.converged = solution.report.converged;
    summary.terminal_diameter_controlled =
        consensus_diameter(sample_state(solution.state, grid.n), false);
    extra["singular_coeff_controlled"] = singular_coeff_json(solution.state);
  }

  if (want_uncontrolled) {
    artifacts.uncontrolled_state_csv = out_dir / "uncontrolled_state.csv";
    refuse_existing(*artifacts.uncontrolled_state_csv, overwrite);

    StateTrajectory free_run = solve_uncontrolled(scenario.network, alpha, grid,
                                                  scenario.agent_x0);
    emit_csv(block_header("x", N, d, 1), grid, full_samples(free_run),
             *artifacts.uncontrolled_state_csv);
    summary.terminal_diameter_uncontrolled =
        consensus_diameter(sample_state(free_run, grid.n), false);
    extra["singular_coeff_uncontrolled"] = singular_coeff_json(free_run);
  }

  json js;
  js["alpha"] = summary.alpha;
  js["n"] = summary.n;
  js["terminal_diameter_controlled"] =
      summary.terminal_diameter_controlled ? json(*summary.terminal_diameter_controlled)
                                           : json(nullptr);
  js["terminal_diameter_uncontrolled"] =
      summary.terminal_diameter_uncontrolled
          ? json(*summary.terminal_diameter_uncontrolled)
          : json(nullptr);
  js["cost"] = summary.cost ? json(*summary.cost) : json(nullptr);
  js["iterations"] = summary.iterations ? json(*summary.iterations) : json(nullptr);
  js["converged"] = summary.converged ? json(*summary.converged) : json(nullptr);
  if (summary.terminal_diameter_controlled && summary.terminal_diameter_uncontrolled &&
      *summary.terminal_diameter_uncontrolled > 0.0)
    js["diameter_ratio"] =
        *summary.terminal_diameter_controlled / *summary.terminal_diameter_uncontrolled;
  for (auto& [key, value] : extra.items()) js[key] = value;
  atomic_write(artifacts.summary_json, js.dump(2) + "\n");

  if (summary_out) *summary_out = summary;
  return artifacts;
}

const std::string& bundled_scenario(const std::string& name) {
  static const std::map<std::string, std::string> scenarios = {
      {"example1", R"json({
  "alpha": 0.6,
  "T": 2.0,
  "nu": 2.0,
  "K": 1.0,
  "n": 2048,
  "leader": {"x0": 0.0},
  "agents": [{"x0": -1.0}, {"x0": -0.5}, {"x0": 0.5}, {"x0": 1.0}],
  "weights": [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
  "couplings": [1, 0, 1, 0]
}
)json"},
      {"example2", R"json({
  "alpha": 0.6,
  "T": 2.0,
  "nu": 2.0,
  "K": 10.0,
  "n": 2048,
  "leader": {"x0": 0.0},
  "agents": [{"x0": -1.0}, {"x0": 1.0}, {"x0": 3.0}],
  "weights": [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
  "couplings": [0, 0, 1]
}
)json"},
  };
  auto it = scenarios.find(name);
  if (it == scenarios.end())
    throw ScenarioError("unknown bundled scenario '" + name + "' (example1|example2)");
  return it->second;
}

} // namespace frachk
