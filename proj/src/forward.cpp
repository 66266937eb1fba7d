#include "frachk/forward.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "frachk/special.hpp"
#include "frachk/volterra.hpp"

namespace frachk {

ControlSignal::ControlSignal(UniformGrid grid_, Eigen::MatrixXd samples_, double bound_)
    : grid(grid_), samples(std::move(samples_)), bound(bound_) {
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw std::invalid_argument("ControlSignal: bound K must be positive and finite");
  if (samples.cols() != grid.n + 1)
    throw std::invalid_argument("ControlSignal: expected " + std::to_string(grid.n + 1) +
                                " sample columns, got " + std::to_string(samples.cols()));
  for (int k = 0; k <= grid.n; ++k) {
    if (!samples.col(k).allFinite())
      throw std::invalid_argument("ControlSignal: non-finite sample at node " +
                                  std::to_string(k));
    if (samples.col(k).norm() > bound + 1e-12)
      throw std::invalid_argument("ControlSignal: |u| exceeds the bound K at node " +
                                  std::to_string(k));
  }
}

ControlSignal ControlSignal::zero(const UniformGrid& grid, int dim, double bound) {
  return ControlSignal(grid, Eigen::MatrixXd::Zero(dim, grid.n + 1), bound);
}

StateTrajectory solve_forward(const Network& net, FractionalOrder alpha,
                              const Eigen::VectorXd& x0, const ControlSignal& control) {
  const int m = net.stacked_size();
  if (x0.size() != m)
    throw std::invalid_argument("solve_forward: x0 has size " + std::to_string(x0.size()) +
                                ", expected " + std::to_string(m));
  if (control.samples.rows() != net.dim)
    throw std::invalid_argument("solve_forward: control dimension mismatch");

  const SystemMatrices sys = build_system_matrices(net);
  const ConvolutionWeights weights(alpha, control.grid, Scheme::trapezoid);
  Eigen::MatrixXd forcing = sys.B * control.samples;
  Eigen::MatrixXd regular = solve_linear_volterra(sys.A, forcing, x0, weights);
  return {control.grid, alpha, x0 / gamma_fn(alpha.value()), std::move(regular), net.dim,
          true};
}

StateTrajectory solve_uncontrolled(const Network& net, FractionalOrder alpha,
                                   const UniformGrid& grid,
                                   const Eigen::VectorXd& x0_agents) {
  const int m = net.agents * net.dim;
  if (x0_agents.size() != m)
    throw std::invalid_argument("solve_uncontrolled: agent initial data has size " +
                                std::to_string(x0_agents.size()) + ", expected " +
                                std::to_string(m));
  const Eigen::MatrixXd A = agents_only_matrix(net);
  const ConvolutionWeights weights(alpha, grid, Scheme::trapezoid);
  Eigen::MatrixXd forcing = Eigen::MatrixXd::Zero(m, grid.n + 1);
  Eigen::MatrixXd regular = solve_linear_volterra(A, forcing, x0_agents, weights);
  return {grid, alpha, x0_agents / gamma_fn(alpha.value()), std::move(regular), net.dim,
          false};
}

StackedState sample_state(const StateTrajectory& traj, int k) {
  if (k < 0 || k > traj.grid.n)
    throw std::out_of_range("sample_state: node " + std::to_string(k) +
                            " outside 0.." + std::to_string(traj.grid.n));
  if (k == 0 && traj.is_singular())
    throw std::invalid_argument(
        "sample_state: the trajectory carries a t^(a-1) singularity at t = 0; "
        "the state is unbounded there");
  Eigen::VectorXd value = traj.regular.col(k);
  if (traj.is_singular())
    value += std::pow(traj.grid.node(k), traj.alpha.value() - 1.0) * traj.singular_coeff;
  return {std::move(value), traj.dim, traj.has_leader};
}

} // namespace frachk
