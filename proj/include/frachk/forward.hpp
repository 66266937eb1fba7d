#ifndef FRACHK_FORWARD_HPP
#define FRACHK_FORWARD_HPP

#include <Eigen/Dense>

#include "frachk/grid.hpp"
#include "frachk/kernels.hpp"
#include "frachk/model.hpp"

namespace frachk {

/// State trajectory in the split representation
///   x(t) = singular_coeff * t^(a-1) + regular(t),
/// with singular_coeff = x0 / Gamma(a). Samples of the regular part are
/// stored column-wise for k = 0..n (column 0 is zero). The value at t = 0
/// exists only when the singular coefficient vanishes.
struct StateTrajectory {
  UniformGrid grid;
  FractionalOrder alpha;
  Eigen::VectorXd singular_coeff;
  Eigen::MatrixXd regular; // m x (n+1)
  int dim;
  bool has_leader;

  bool is_singular() const { return singular_coeff.norm() > 0.0; }
  int blocks() const { return int(regular.rows()) / dim; }
};

/// Grid samples of the leader control with the ball constraint |u_k| <= K.
struct ControlSignal {
  UniformGrid grid;
  Eigen::MatrixXd samples; // d x (n+1)
  double bound;

  ControlSignal(UniformGrid grid_, Eigen::MatrixXd samples_, double bound_);

  static ControlSignal zero(const UniformGrid& grid, int dim, double bound);
};

/// Integrates D^a x = A x + B u with fractional initial data
/// I^(1-a) x(0) = x0 on the control's grid.
StateTrajectory solve_forward(const Network& net, FractionalOrder alpha,
                              const Eigen::VectorXd& x0, const ControlSignal& control);

/// Leaderless comparison system: couplings removed, no control, agents only.
StateTrajectory solve_uncontrolled(const Network& net, FractionalOrder alpha,
                                   const UniformGrid& grid,
                                   const Eigen::VectorXd& x0_agents);

/// Reconstructs x(t_k) including the singular term. k = 0 is allowed only
/// for trajectories without a singular part.
StackedState sample_state(const StateTrajectory& traj, int k);

} // namespace frachk

#endif
