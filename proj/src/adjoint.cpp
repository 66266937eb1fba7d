#include "frachk/adjoint.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "frachk/special.hpp"
#include "frachk/volterra.hpp"

namespace frachk {

CostateTrajectory solve_adjoint(const StateTrajectory& state, const Network& net) {
  if (!state.has_leader)
    throw std::invalid_argument("solve_adjoint: state must include the leader block");
  if (state.dim != net.dim || state.blocks() != net.agents + 1)
    throw std::invalid_argument("solve_adjoint: state shape does not match the network");
  const double a = state.alpha.value();
  const int n = state.grid.n;
  const int m = net.stacked_size();
  if (state.is_singular() && a <= 0.5)
    throw std::invalid_argument(
        "solve_adjoint: singular initial data needs alpha > 1/2 for an integrable source");

  const Eigen::MatrixXd At = build_system_matrices(net).A.transpose();
  const Eigen::MatrixXd G = cost_gradient_matrix(net.agents, net.dim);
  const ConvolutionWeights weights(state.alpha, state.grid, Scheme::trapezoid);

  // Mirrored source: r_j = G x(T - tau_j). The node at original t = 0 only
  // carries the regular part of the state; its singular component is handled
  // analytically below.
  Eigen::MatrixXd source(m, n + 1);
  for (int j = 0; j < n; ++j)
    source.col(j).noalias() = G * sample_state(state, n - j).data;
  source.col(n).noalias() = G * state.regular.col(0);

  Eigen::MatrixXd mirrored =
      solve_linear_volterra(At, source, Eigen::VectorXd::Zero(m), weights);

  if (state.is_singular()) {
    // Rebuild the terminal mirrored row: piecewise-linear product integration
    // over [0, tau_{n-1}], then the last cell as analytic singular-source
    // integral plus a kernel-mass weight on the regular remainder at tau_{n-1}.
    const double h = state.grid.step();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd F = At * mirrored + source; // columns 0..n-1 are valid
    for (int cell = 0; cell <= n - 2; ++cell) {
      const auto cw = weights.cell_weights(n, cell);
      acc.noalias() += cw.left * F.col(cell);
      acc.noalias() += cw.right * F.col(cell + 1);
    }
    Eigen::VectorXd regular_end = At * mirrored.col(n - 1);
    regular_end.noalias() += G * state.regular.col(1);
    acc.noalias() += (std::pow(h, a) / gamma_fn(a + 1.0)) * regular_end;
    acc.noalias() += (std::pow(h, 2.0 * a - 1.0) / ((2.0 * a - 1.0) * gamma_fn(a))) *
                     (G * state.singular_coeff);
    mirrored.col(n) = acc;
  }

  if (!mirrored.allFinite())
    throw std::runtime_error("solve_adjoint: non-finite costate");

  Eigen::MatrixXd samples(m, n + 1);
  for (int k = 0; k <= n; ++k) samples.col(k) = mirrored.col(n - k);
  return {state.grid, state.alpha, std::move(samples), net.dim};
}

double terminal_condition_residual(const CostateTrajectory& costate) {
  const double a = costate.alpha.value();
  const double h = costate.grid.step();
  const int n = costate.grid.n;
  return costate.samples.col(n).norm() * std::pow(h, 1.0 - a) / gamma_fn(2.0 - a);
}

} // namespace frachk
